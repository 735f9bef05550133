"""Complex polynomials in ascending-power coefficient form.

Roots are found with a vectorised Aberth-Ehrlich iteration so that many
fibers ``p(z) = zeta`` can be solved in one sweep.
"""

from __future__ import annotations

import numpy as np

from .errors import NonConvergence, ZeroPolynomial

DEGREE_CAP = 64
_EPS = np.finfo(float).eps


class Poly:
    """Polynomial ``c0 + c1 z + ... + cd z^d`` with ``cd != 0``.

    The zero polynomial is stored as degree 0 with ``c0 = 0`` and
    ``is_zero`` set. Instances are immutable.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1, dtype=complex)
        c.setflags(write=False)
        self._c = c

    @classmethod
    def from_roots(cls, roots, leading=1.0):
        c = np.array([leading], dtype=complex)
        for r in np.atleast_1d(roots):
            c = np.convolve(c, [-r, 1.0])
        return cls(c)

    @classmethod
    def monomial(cls, n, scale=1.0):
        c = np.zeros(n + 1, dtype=complex)
        c[n] = scale
        return cls(c)

    @property
    def coeffs(self):
        return self._c

    @property
    def degree(self):
        return self._c.size - 1

    @property
    def leading(self):
        return self._c[-1]

    @property
    def is_zero(self):
        return self._c.size == 1 and self._c[0] == 0

    @property
    def is_monic(self):
        return self._c[-1] == 1

    @property
    def is_real(self):
        return not np.any(self._c.imag)

    def monic(self):
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no monic normalisation")
        c = self._c / self._c[-1]
        c = np.array(c)
        c[-1] = 1.0
        return Poly(c)

    def derivative(self):
        if self.degree == 0:
            return Poly([0.0])
        return Poly(self._c[1:] * np.arange(1, self._c.size))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self._c[-1], dtype=complex)
        for ck in self._c[-2::-1]:
            out = out * z + ck
        return out if out.ndim else complex(out)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(self._c.size, other._c.size)
        c = np.zeros(n, dtype=complex)
        c[: self._c.size] += self._c
        c[: other._c.size] += other._c
        return Poly(c)

    __radd__ = __add__

    def __neg__(self):
        return Poly(-self._c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return Poly(self._c * other)
        return Poly(np.convolve(self._c, _as_poly(other)._c))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Poly(self._c / scalar)

    def __pow__(self, k):
        out = Poly([1.0])
        for _ in range(int(k)):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        terms = ", ".join(_fmt(c) for c in self._c)
        return f"Poly([{terms}])"


def _fmt(c):
    return repr(float(c.real)) if c.imag == 0 else repr(complex(c))


def _as_poly(x):
    return x if isinstance(x, Poly) else Poly([x])


def eval_poly(p: Poly, z):
    """Horner evaluation, vectorised over ``z``."""
    return p(z)


def compose(outer: Poly, inner: Poly) -> Poly:
    """Coefficients of ``outer(inner(z))`` via Horner in the polynomial ring."""
    out = np.array([outer.coeffs[-1]], dtype=complex)
    ic = inner.coeffs
    for ck in outer.coeffs[-2::-1]:
        out = np.convolve(out, ic)
        out[0] += ck
    return Poly(out)


def _horner_rows(C, Z):
    """Evaluate p and p' row-wise: ``C`` is (B, d+1) ascending, ``Z`` is (B, k)."""
    p = np.repeat(C[:, -1:], Z.shape[1], axis=1).astype(complex)
    dp = np.zeros_like(p)
    for j in range(C.shape[1] - 2, -1, -1):
        dp = dp * Z + p
        p = p * Z + C[:, j : j + 1]
    return p, dp


def _abs_horner(Ca, R):
    out = np.repeat(Ca[:, -1:], R.shape[1], axis=1)
    for j in range(Ca.shape[1] - 2, -1, -1):
        out = out * R + Ca[:, j : j + 1]
    return out


def _initial_guess(C, rng):
    B, d1 = C.shape
    d = d1 - 1
    centre = -C[:, d - 1] / (d * C[:, d])
    shift, _ = _horner_rows(C, centre[:, None])
    rad = (np.abs(shift[:, 0]) / np.abs(C[:, d])) ** (1.0 / d)
    rad = np.where(rad > 0, rad, 1.0)
    ang = 2 * np.pi * np.arange(d) / d + 0.4 + 0.1 * rng.random(d)
    return centre[:, None] + rad[:, None] * np.exp(1j * ang)[None, :]


def aberth_batch(C, z0=None, *, max_iter=500, seed=0):
    """Simultaneous roots of every row of ``C`` (ascending coefficients).

    Returns ``(roots, converged)`` with ``roots`` of shape (B, d) and a
    per-row convergence flag. Convergence is the backward-error test
    ``|p(r)| <= 16 eps sum |c_k| |r|^k`` for every root.
    """
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    B, d1 = C.shape
    d = d1 - 1
    if d < 1:
        raise ValueError("degree must be at least 1")
    if np.any(C[:, -1] == 0):
        raise ZeroPolynomial("leading coefficient is zero")
    if d == 1:
        return (-C[:, :1] / C[:, 1:2]), np.ones(B, dtype=bool)
    Ca = np.abs(C)
    rng = np.random.default_rng(seed)
    Z = _initial_guess(C, rng) if z0 is None else np.array(z0, dtype=complex).reshape(B, d)
    done = np.zeros((B, d), dtype=bool)
    eye = np.eye(d, dtype=bool)
    for _ in range(max_iter):
        p, dp = _horner_rows(C, Z)
        bound = 16 * _EPS * _abs_horner(Ca, np.abs(Z))
        done = np.abs(p) <= bound
        if done.all():
            break
        diff = Z[:, :, None] - Z[:, None, :]
        diff[:, eye] = 1.0
        inv = 1.0 / diff
        inv[:, eye] = 0.0
        s = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            step = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(step)
        if bad.any():
            step[bad] = 1e-8 * (1 + np.abs(Z[bad]))
        step[done] = 0.0
        Z = Z - step
    return Z, done.all(axis=1)


def roots(p: Poly, *, max_iter=500, init=None):
    """All ``deg p`` roots with multiplicity, sorted by (real, imag).

    Raises NonConvergence carrying ``details['best']`` if the iteration
    stalls.
    """
    if p.is_zero:
        raise ZeroPolynomial("roots of the zero polynomial")
    if p.degree < 1:
        raise ValueError("roots needs degree >= 1")
    if p.degree > DEGREE_CAP:
        raise ValueError(f"degree {p.degree} exceeds the supported cap {DEGREE_CAP}")
    Z, ok = aberth_batch(p.coeffs[None, :], None if init is None else [init], max_iter=max_iter)
    r = Z[0]
    r = r[np.lexsort((r.imag, r.real))]
    if not ok[0]:
        raise NonConvergence("Aberth iteration did not converge", best=r)
    return r


def power_sums_fiber(p: Poly, zeta, K: int):
    """Power sums ``S_0..S_K`` of the roots of ``p(z) - zeta``.

    Uses Newton's identities only (no root finding); ``S_0 = m``.
    """
    m = p.degree
    if m < 1:
        raise ValueError("need deg p >= 1")
    a = np.array(p.coeffs, dtype=complex)
    a[0] -= zeta
    S = np.zeros(K + 1, dtype=complex)
    S[0] = m
    am = a[m]
    for k in range(1, K + 1):
        if k < m:
            acc = k * a[m - k]
            for j in range(1, k):
                acc += a[m - k + j] * S[j]
        else:
            acc = a[0] * S[k - m]
            for j in range(k - m + 1, k):
                acc += a[m - k + j] * S[j]
        S[k] = -acc / am
    return S
