"""Logarithmic potential theory for the supported sets.

Exact data (capacity, Green function, equilibrium measure, harmonic
measure) is available for a single interval, a circle and polynomial
preimages of those. Everything else gets flagged estimates or raises.

Quadrature integrals are computed with ``N`` and ``2N`` nodes; the
difference is reported as the error estimate and the ``2N`` value is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .domains import Circle, CompactSet, IntervalUnion, Preimage, SampledSet
from .errors import (
    CapacityUnavailableExact,
    HarmonicMeasureUnavailable,
    PoleOnSet,
    UnsupportedSet,
)
from .polynomials import Poly, roots
from .weights import AbsPolyPower, Constant, Pullback, Restricted, Scaled, Weight

DEFAULT_N = 512


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f):
        return np.sum(self.weights * np.asarray(f(self.nodes)))


@dataclass(frozen=True)
class Composed:
    """Boundary function ``outer(inner(z))``; lets Poisson integrals on a
    preimage be pushed down to the base set."""

    outer: Callable
    inner: Poly

    def __call__(self, z):
        return self.outer(self.inner(np.asarray(z, dtype=complex)))


class Estimate(NamedTuple):
    value: float
    error: float


def _is_single_interval(K):
    return isinstance(K, IntervalUnion) and len(K.intervals) == 1


def has_exact_data(K: CompactSet) -> bool:
    if _is_single_interval(K) or isinstance(K, Circle):
        return True
    if isinstance(K, Preimage):
        return has_exact_data(K.base)
    return False


# -- capacity ---------------------------------------------------------------


def capacity(K: CompactSet, *, exact=True) -> float:
    """Logarithmic capacity.

    Single interval ``(b-a)/4``, circle ``r``, preimage
    ``(cap(base)/|a_m|)^(1/m)``. Other sets only have a Leja estimate,
    returned when ``exact=False``.
    """
    if _is_single_interval(K):
        a, b = K.intervals[0]
        return (b - a) / 4
    if isinstance(K, Circle):
        return K.radius
    if isinstance(K, Preimage) and has_exact_data(K.base):
        return (capacity(K.base) / abs(K.p.leading)) ** (1.0 / K.m)
    if exact:
        raise CapacityUnavailableExact(f"no exact capacity formula for {K!r}")
    return leja_capacity(K)


def leja_points(candidates, count):
    """Greedy Leja sequence drawn from ``candidates``.

    Returns ``(points, log_products)`` where ``log_products[k]`` is
    ``sum_{j<k} log|z_k - z_j|`` at selection time.
    """
    z = np.asarray(candidates, dtype=complex).ravel()
    count = min(count, z.size)
    chosen = np.empty(count, dtype=complex)
    logs = np.zeros(count)
    acc = np.zeros(z.size)
    i = int(np.argmax(np.abs(z - z.mean())))
    for k in range(count):
        chosen[k] = z[i]
        logs[k] = acc[i]
        with np.errstate(divide="ignore"):
            acc = acc + np.log(np.abs(z - z[i]))
        acc[i] = -np.inf
        i = int(np.argmax(acc))
    return chosen, logs


def leja_capacity(K, count=600, density=20000):
    """Transfinite-diameter estimate ``(prod_{j<N} |z_N - z_j|)^(1/N)``."""
    pts = K.points if isinstance(K, SampledSet) else K.sample(density).points
    count = min(count, pts.size - 1)
    _, logs = leja_points(pts, count + 1)
    return float(np.exp(logs[count] / count))


# -- Green function ---------------------------------------------------------


def joukowski_exterior(u):
    """Inverse of ``(v + 1/v)/2`` with ``|v| >= 1``."""
    u = np.asarray(u, dtype=complex)
    s = np.sqrt(u - 1) * np.sqrt(u + 1)
    v = u + s
    small = np.abs(v) < 1
    v = np.where(small, u - s, v)
    return v


def _interval_u(K, z):
    a, b = K.intervals[0]
    return (2 * np.asarray(z, dtype=complex) - a - b) / (b - a)


def green(K: CompactSet, z):
    """Green function of the outer domain with pole at infinity."""
    z = np.asarray(z, dtype=complex)
    if _is_single_interval(K):
        u = _interval_u(K, z)
        g = np.log(np.abs(joukowski_exterior(u)))
        on = (u.imag == 0) & (np.abs(u.real) <= 1)
        g = np.where(on, 0.0, np.maximum(g, 0.0))
    elif isinstance(K, Circle):
        ratio = np.abs(z - K.center) / K.radius
        # points of the circle come back with |ratio - 1| at rounding level
        with np.errstate(divide="ignore"):
            g = np.where(ratio <= 1 + 8 * np.finfo(float).eps, 0.0, np.log(ratio))
    elif isinstance(K, Preimage):
        g = green(K.base, _snap_to_base(K, z)) / K.m
    else:
        raise UnsupportedSet(f"no Green function for {K!r}")
    return g if np.ndim(g) else float(g)


def _snap_to_base(K: Preimage, z):
    """``p(z)``, moved onto the base set when within the rounding error of ``p``.

    Near an interval endpoint the Green function grows like a square root,
    so an image that misses the set by 1e-16 would otherwise give 1e-8.
    """
    zeta = K.p(z)
    absp = Poly(np.abs(K.p.coeffs))
    err = 8 * K.m * np.finfo(float).eps * np.real(absp(np.abs(z)))
    base = K.base
    if _is_single_interval(base):
        a, b = base.intervals[0]
        near = (np.abs(zeta.imag) <= err) & (zeta.real >= a - err) & (zeta.real <= b + err)
        return np.where(near, np.clip(zeta.real, a, b) + 0j, zeta)
    if isinstance(base, Circle):
        d = zeta - base.center
        r = np.abs(d)
        near = (np.abs(r - base.radius) <= err) & (r > 0)
        return np.where(near, base.center + base.radius * d / np.where(r > 0, r, 1.0), zeta)
    return zeta


def in_hull(K, z, tol=0.0):
    return np.asarray(green(K, z)) <= tol


# -- equilibrium and harmonic measure ---------------------------------------


def _half_offset_angles(N):
    return 2 * np.pi * (np.arange(N) + 0.5) / N


def eq_quadrature(K: CompactSet, N: int = DEFAULT_N) -> QuadratureRule:
    """Discretisation of the equilibrium measure with ``N`` base nodes."""
    if _is_single_interval(K):
        a, b = K.intervals[0]
        k = np.arange(1, N + 1)
        x = 0.5 * (a + b) + 0.5 * (b - a) * np.cos((2 * k - 1) * np.pi / (2 * N))
        return QuadratureRule(x.astype(complex), np.full(N, 1.0 / N))
    if isinstance(K, Circle):
        th = 2 * np.pi * np.arange(N) / N
        return QuadratureRule(K.point(th), np.full(N, 1.0 / N))
    if isinstance(K, Preimage):
        base = eq_quadrature(K.base, N)
        F = K.fibers(base.nodes, ordered=False)
        w = np.repeat(base.weights / K.m, K.m)
        return QuadratureRule(F.ravel(), w)
    raise UnsupportedSet(f"no equilibrium quadrature for {K!r}")


def harmonic_measure_rule(K: CompactSet, z, N: int = DEFAULT_N) -> QuadratureRule:
    """Quadrature for the harmonic measure at ``z`` (``z = inf`` allowed)."""
    if z is None or (np.isscalar(z) and np.isinf(abs(z))):
        return eq_quadrature(K, N)
    z = complex(z)
    if not (isinstance(K, Circle) or _is_single_interval(K)):
        raise HarmonicMeasureUnavailable(f"harmonic measure at finite z unavailable for {K!r}")
    if green(K, z) <= 0:
        raise PoleOnSet(f"{z} is not in the outer domain")
    if isinstance(K, Circle):
        v = (z - K.center) / K.radius
        th = _half_offset_angles(N)
        nodes = K.point(th)
    else:
        v = complex(joukowski_exterior(_interval_u(K, z)))
        th = _half_offset_angles(N)
        a, b = K.intervals[0]
        nodes = (0.5 * (a + b) + 0.5 * (b - a) * np.cos(th)).astype(complex)
    kern = (abs(v) ** 2 - 1) / np.abs(v - np.exp(1j * th)) ** 2
    return QuadratureRule(nodes, kern / kern.sum())


def _richardson(f, N):
    lo = f(N)
    hi = f(2 * N)
    return Estimate(hi, abs(hi - lo))


def poisson_integral(K: CompactSet, f, z, N: int = DEFAULT_N, full=False):
    """Generalised Poisson integral ``int f d(omega_z)``; ``z = inf`` gives
    the equilibrium-measure average.

    On a preimage at finite ``z`` the boundary function must be a
    :class:`Composed` pulled back through the preimage map.
    """
    finite = not (z is None or (np.isscalar(z) and np.isinf(abs(z))))
    if isinstance(K, Preimage) and finite:
        if isinstance(f, Composed) and f.inner == K.p:
            return poisson_integral(K.base, f.outer, K.p(complex(z)), N, full)
        raise HarmonicMeasureUnavailable(
            "finite-z Poisson integrals on a preimage need a pulled-back boundary function")
    est = _richardson(lambda n: float(np.real(harmonic_measure_rule(K, z, n).integrate(f))), N)
    return est if full else est.value


def green_pole(K: CompactSet, z, a, N: int = DEFAULT_N, full=False):
    """Green function with logarithmic pole at a finite ``a`` in the outer domain."""
    a = complex(a)
    z = complex(z)
    ga = green(K, a)
    if ga <= 0:
        raise PoleOnSet(f"pole {a} lies in the polynomial hull")
    if z == a:
        raise ValueError("z coincides with the pole")
    if green(K, z) <= 0:
        return Estimate(0.0, 0.0) if full else 0.0

    def at(n):
        rule = harmonic_measure_rule(K, a, n)
        return -math.log(abs(z - a)) + float(np.sum(rule.weights * np.log(np.abs(z - rule.nodes)))) + ga

    est = _richardson(at, N)
    est = Estimate(max(est.value, 0.0), est.error)
    return est if full else est.value


# -- Szego integrals ----------------------------------------------------------


class SzegoInfo(NamedTuple):
    value: float
    log_value: float
    error: float
    stable: bool
    method: str


def _log_abs_poly_integral(K, p: Poly, z, N):
    """``int log|p| d(omega_z)`` via the root identity; ``z = None`` is infinity."""
    total = math.log(abs(p.leading))
    err = 0.0
    if p.degree == 0:
        return total, err
    for r in roots(p):
        if z is None:
            total += green(K, r) + math.log(capacity(K))
            continue
        if green(K, r) <= 0:
            # g(r, z) = 0 for r in the hull
            total += math.log(abs(z - r)) - green(K, z)
        else:
            est = poisson_integral(K, lambda x, r=r: np.log(np.abs(x - r)), z, N, full=True)
            total += est.value
            err += est.error
    return total, err


def log_weight_integral(K: CompactSet, w: Weight, z=None, N: int = DEFAULT_N):
    """``int log w d(omega_z)`` (``z=None`` for the equilibrium measure).

    Returns ``(value, error_estimate, method)``. Products of powers of
    ``|polynomial|`` use the exact identity
    ``int log|x - r| d(rho) = g(r) + log cap``; pullbacks over a matching
    preimage are pushed down to the base set.
    """
    if isinstance(w, Constant):
        return (math.log(w.c) if w.c > 0 else -math.inf), 0.0, "exact"
    if isinstance(w, Scaled):
        v, e, m = log_weight_integral(K, w.base, z, N)
        return v + math.log(w.c), e, m
    if isinstance(w, AbsPolyPower):
        tot, err = 0.0, 0.0
        for p, a in w.factors:
            v, e = _log_abs_poly_integral(K, p, z, N)
            tot += a * v
            err += abs(a) * e
        return tot, err, "factor-identity"
    if isinstance(w, Pullback) and isinstance(K, Preimage) and w.inner == K.p:
        zb = None if z is None else K.p(z)
        return log_weight_integral(K.base, w.base, zb, N)
    if isinstance(w, Restricted) and w.finite:
        return -math.inf, 0.0, "measure-zero support"

    def logw(x):
        with np.errstate(divide="ignore"):
            return np.log(w(x))

    if z is None:
        est = poisson_integral(K, logw, math.inf, N, full=True)
    else:
        est = poisson_integral(K, logw, z, N, full=True)
    return est.value, est.error, "quadrature"


def szego_integral_info(K: CompactSet, w: Weight, N: int = DEFAULT_N) -> SzegoInfo:
    if not has_exact_data(K):
        raise UnsupportedSet(f"Szego integral needs exact potential data for {K!r}")
    lv, err, method = log_weight_integral(K, w, None, N)
    stable = bool(np.isfinite(lv) and lv > -1e3 and err <= 1e-2 * (1 + abs(lv)))
    if not np.isfinite(lv) or lv <= -1e3:
        return SzegoInfo(0.0, -math.inf, err, False, method)
    return SzegoInfo(math.exp(lv), lv, err, stable, method)


def szego_integral(K: CompactSet, w: Weight, N: int = DEFAULT_N) -> float:
    """Exponential Szego integral ``exp(int log w d(rho_K))``."""
    return szego_integral_info(K, w, N).value
