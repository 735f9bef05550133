"""Numerical checks of the norm inequalities for weighted Chebyshev polynomials.

Every check returns a :class:`BoundReport`; ``passed`` holds exactly when
``margin >= -tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C

from .certificates import equality_case_check, extremal_points
from .errors import IrregularOrigin, PoleOnSet, RootOffSet, W2HasZero, WChebError
from .polynomials import Poly, roots
from .potential import DEFAULT_N, capacity, green, log_weight_integral, szego_integral
from .solver import solve, widom_factor
from .weights import AbsPolyPower, Constant, FunctionWeight, eps_weight


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tolerance: float
    provenance: dict = field(default_factory=dict)
    parts: tuple = ()

    def as_row(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
                "pass": self.passed, "tolerance": self.tolerance}


def _report(name, lhs, rhs, tolerance, margin=None, **prov):
    if margin is None:
        margin = rhs - lhs
    return BoundReport(name, float(lhs), float(rhs), float(margin), bool(margin >= -tolerance),
                       float(tolerance), prov)


def _check_grid(K, n):
    # odd counts put the midpoint of every interval on the grid
    return K.sample(max(4001, 400 * n + 1) if K.is_real else 2048)


def _true_norm(P, w, K, n):
    """Sup of w|P| on a fine sample, with local refinement."""
    return extremal_points(P, w, _check_grid(K, n)).norm


# -- comparison of weights ------------------------------------------------------


def compare_weights(K, w1, w2, n: int, tol: float = 1e-6, **solve_opts) -> BoundReport:
    """``t_n(w1) <= sup(w1/w2) t_n(w2)`` plus the two-sided bound against w = 1."""
    grid = _check_grid(K, n)
    v1 = np.asarray(w1(grid.points), dtype=float)
    v2 = np.asarray(w2(grid.points), dtype=float)
    if np.any(v2 <= 0):
        raise W2HasZero("second weight vanishes on the set", count=int(np.sum(v2 <= 0)))
    sup_ratio = float(np.max(v1 / v2))
    t1 = solve(K, w1, n, **solve_opts).norm
    t2 = solve(K, w2, n, **solve_opts).norm
    t0 = solve(K, Constant(1.0), n, **solve_opts).norm
    scale = max(1.0, t1)
    main = _report("t_n(w1) <= sup(w1/w2) t_n(w2)", t1, sup_ratio * t2, tol * scale,
                   sup_ratio=sup_ratio, grid=len(grid))
    upper = _report("t_n(w1) <= sup(w1) t_n(1)", t1, v1.max() * t0, tol * scale)
    lower = _report("inf(w1) t_n(1) <= t_n(w1)", v1.min() * t0, t1, tol * scale)
    parts = (main, upper, lower)
    return BoundReport(main.name, main.lhs, main.rhs, main.margin, all(p.passed for p in parts),
                       main.tolerance, main.provenance, parts)


# -- Bernstein-Walsh --------------------------------------------------------------


def bernstein_walsh_check(K, w, P: Poly, z_samples, N: int = DEFAULT_N, tol: float = 1e-9,
                          norm: float | None = None) -> BoundReport:
    """``|P(z)| <= ||P||_w exp(-PI(log w, z) + n g(z))`` at each sample z.

    Margins are relative to the right-hand side; each one may absorb ten
    times the quadrature error estimate of the Poisson integral plus
    ``tol``. The report carries the worst sample.
    """
    z_samples = np.atleast_1d(np.asarray(z_samples, dtype=complex))
    n = P.degree
    if norm is None:
        norm = _true_norm(P, w, K, n)
    lw_inf, _, _ = log_weight_integral(K, w, None, N)
    if not np.isfinite(lw_inf):
        raise WChebError("weight is not in the Szego class", reason="not_szego")
    rows = []
    for z in z_samples:
        g = float(green(K, z))
        if not g > 0:
            raise PoleOnSet(f"{z} is not in the outer domain")
        lw, err, _ = log_weight_integral(K, w, complex(z), N)
        rhs = norm * math.exp(-lw + n * g)
        lhs = abs(complex(P(z)))
        rows.append((lhs, rhs, (rhs - lhs) / rhs, 10 * err + tol))
    arr = np.array(rows)
    worst = int(np.argmin(arr[:, 2] + arr[:, 3]))
    lhs, rhs, margin, slack = arr[worst]
    rep = _report("Bernstein-Walsh", lhs, rhs, slack, margin=margin, z=complex(z_samples[worst]),
                  samples=int(z_samples.size), quad_N=N, norm=float(norm),
                  margins=arr[:, 2].tolist())
    ok = bool(np.all(arr[:, 2] >= -arr[:, 3]))
    return BoundReport(rep.name, rep.lhs, rep.rhs, rep.margin, ok, rep.tolerance, rep.provenance)


# -- Szego lower bound --------------------------------------------------------------


def szego_lower_bound(K, w, n: int, tol: float = 1e-9, N: int = DEFAULT_N, **solve_opts) -> BoundReport:
    """``W_n(K, w) >= S(w)`` with the equality-case diagnosis attached."""
    rep = widom_factor(K, w, n, N=N, **solve_opts)
    res = rep.result
    if not K.is_real:
        # a discrete solve only sees the grid; use the sup of T on a finer sample
        t = max(res.norm, _true_norm(res.T, w, K, n))
    else:
        t = res.norm
    W = t / rep.capacity**n
    S = rep.S_w
    if not S > 0:
        raise WChebError("weight is not in the Szego class", reason="not_szego")
    ratio = W / S
    try:
        eq = equality_case_check(K, w, res, tol=1e-6, N=N)
    except WChebError as exc:
        eq = exc
    prov = {"n": n, "W_n": W, "S": S, "ratio": ratio, "quad_N": N, "method": res.method,
            "equality": eq, "strict_gap": bool(ratio > 1 + tol)}
    return _report("W_n >= S(w)", 1.0, ratio, tol, margin=ratio - 1.0, **prov)


# -- doubled bound for weights |P_d| with zeros on K ------------------------------------


def doubled_bound_check(K, P_d: Poly, n: int, tol: float = 1e-8, **solve_opts) -> BoundReport:
    """``W_n(K, |P_d|) >= 2 S(|P_d|)`` on a real set via ``t_n(K,|P_d|) >= t_{n+d}(K, 1)``."""
    if not K.is_real:
        raise WChebError("doubled bound needs a real set", reason="not_real")
    for r in roots(P_d):
        if abs(r.imag) > 1e-8 or not bool(K.contains(complex(r.real), 1e-8)):
            raise RootOffSet(f"root {r} of P_d is not on the set", root=complex(r))
    d = P_d.degree
    w = AbsPolyPower.single(P_d)
    cap = capacity(K)
    t_w = solve(K, w, n, **solve_opts).norm
    t_nd = solve(K, Constant(1.0), n + d, **solve_opts).norm
    W = t_w / cap**n
    S = szego_integral(K, w)
    S_exact = abs(P_d.leading) * cap**d
    scale = max(1.0, W)
    chain = _report("t_n(K,|P_d|) >= t_(n+d)(K,1)", t_nd * abs(P_d.leading), t_w, tol * max(1.0, t_w))
    s_chk = _report("S(|P_d|) = |lead| cap^d", 0.0, 0.0, tol * S_exact,
                    margin=-abs(S - S_exact))
    main = _report("W_n(K,|P_d|) >= 2 S(|P_d|)", 2 * S_exact, W, tol * scale, W_n=W, S=S,
                   S_exact=S_exact, t_n=t_w, t_n_plus_d=t_nd, d=d)
    parts = (main, chain, s_chk)
    return BoundReport(main.name, main.lhs, main.rhs, main.margin, all(p.passed for p in parts),
                       main.tolerance, main.provenance, parts)


# -- sharpness ---------------------------------------------------------------------


def chebyshev_interpolant_weight(w, lo: float, hi: float, degree: int):
    """Degree-``degree`` Chebyshev interpolant of ``w`` on ``[lo, hi]`` as a weight.

    Returns ``(weight, min_value)``; the caller decides what to do when the
    interpolant is not positive on the set.
    """
    cheb = C.Chebyshev.interpolate(lambda x: np.asarray(w(x.astype(complex)), dtype=float),
                                   degree, domain=[lo, hi])
    xs = np.linspace(lo, hi, 20001)
    fw = FunctionWeight(lambda z, c=cheb: c(np.real(z)), f"cheb{degree}")
    return fw, float(cheb(xs).min())


def sharpness_sweep(K, n: int, eps_list, use_poly_approx: bool = False,
                    degrees=(8, 16, 32, 64), tol: float = 1e-9, N: int = DEFAULT_N,
                    **solve_opts) -> list:
    """Widom-to-Szego ratio for ``w_eps = (x^2 + eps^2)^(-n/2)`` over ``eps_list``.

    The ceiling ``exp((n/2)(g(i eps) + g(-i eps)))`` follows from
    ``t_n <= ||x^n||_{w_eps} <= 1``. With ``use_poly_approx`` each weight is
    also replaced by Chebyshev interpolants of the given degrees; the ratios
    are stored in the report provenance under ``poly``.
    """
    if not K.is_real:
        raise WChebError("sharpness sweep needs a real set", reason="not_real")
    if not bool(K.contains(0.0, 1e-12)):
        raise IrregularOrigin("0 is not in the set")
    g0 = float(green(K, 0.0))
    if g0 > tol:
        raise IrregularOrigin("0 is not a regular point of the set", green=g0)
    cap = capacity(K)
    out = []
    for eps in eps_list:
        eps = float(eps)
        w = eps_weight(eps, n)
        gp, gm = float(green(K, 1j * eps)), float(green(K, -1j * eps))
        S = math.exp(-(n / 2) * (gp + gm)) * cap**-n
        S_quad = szego_integral(K, w, N)
        res = solve(K, w, n, **solve_opts)
        t = res.norm
        W = t / cap**n
        ratio = W / S
        ceiling = math.exp((n / 2) * (gp + gm))
        prov = {"eps": eps, "n": n, "t_n": t, "W_n": W, "S": S, "S_identity": S_quad,
                "ceiling": ceiling, "ratio": ratio, "result": res}
        if use_poly_approx:
            lo, hi = float(K.hull_box()[0]), float(K.hull_box()[1])
            poly = {}
            for j in degrees:
                wj, wmin = chebyshev_interpolant_weight(w, lo, hi, j)
                if not wmin > 0:
                    # not a weight: the interpolant changes sign on the set
                    poly[j] = {"ratio": math.nan, "min": wmin, "diff": math.inf}
                    continue
                tj = solve(K, wj, n, **solve_opts).norm
                lv, err, _ = log_weight_integral(K, wj, None, N)
                Sj = math.exp(lv)
                rj = (tj / cap**n) / Sj
                poly[j] = {"ratio": rj, "min": wmin, "diff": abs(rj - ratio), "S": Sj, "S_err": err}
            prov["poly"] = poly
        lower_ok = ratio >= 1 - tol
        rep = _report(f"sharpness eps={eps:g}", ratio, ceiling, tol * ceiling, **prov)
        if not lower_ok:
            rep = BoundReport(rep.name, rep.lhs, rep.rhs, rep.margin, False, rep.tolerance, rep.provenance)
        out.append(rep)
    return out
