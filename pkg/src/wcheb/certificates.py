"""Optimality certificates for weighted Chebyshev polynomials.

Three kinds of certificate are produced:

* ``AlternationChain`` for real sets (n+1 points where w*T alternates),
* ``RivlinShapiro`` multipliers (a convex combination of extremal points
  annihilating every polynomial of degree < n),
* ``Improvable`` with a verified descent direction when P is not optimal.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from .errors import (AmbiguousCertificate, ChainTooShort, EmptyNorm, NoCertificate,
                     WChebError)
from .nnls import nnls
from .polynomials import Poly, compose, roots
from .potential import DEFAULT_N, capacity, eq_quadrature, green, szego_integral

EXTREMAL_TOL = 1e-6


@dataclass(frozen=True)
class ExtremalSet:
    points: np.ndarray
    values: np.ndarray
    tol_rel: float
    norm: float
    P: Poly | None = field(default=None, repr=False)
    grid: object = field(default=None, repr=False)
    weight: object = field(default=None, repr=False)

    def __len__(self):
        return self.points.size


@dataclass(frozen=True)
class AlternationChain:
    points: np.ndarray
    signs: np.ndarray
    values: np.ndarray
    kind: str = "alternation"


@dataclass(frozen=True)
class RivlinShapiro:
    points: np.ndarray
    multipliers: np.ndarray
    residual: float
    raw_residual: float = np.nan
    primal_value: float = np.nan
    primal_agrees: bool = True
    kind: str = "rivlin_shapiro"

    @property
    def m(self):
        return self.points.size


@dataclass(frozen=True)
class Improvable:
    q: Poly
    decrease: float
    step: float
    residual: float
    primal_value: float = np.nan
    primal_agrees: bool = True
    kind: str = "improvable"


@dataclass(frozen=True)
class EqualityCheck:
    equality: bool
    zero_locations_ok: bool
    ae_maximality_ok: bool
    W: float
    S: float
    consistent: bool


# -- extremal sets ------------------------------------------------------------


def _values(P, w, z):
    return np.asarray(w(z), dtype=float) * np.abs(P(z))


def _refine_peak(P, w, grid, i, left, right):
    """Maximise w|P| along the curve through grid point ``i``."""
    seg = grid.segment_of(i)
    if seg is None or seg.kind not in ("interval", "arc") or grid.param is None:
        return None
    t = grid.param
    lo = t[left[i]] if left[i] >= 0 else t[i]
    hi = t[right[i]] if right[i] >= 0 else t[i]
    if seg.kind == "arc":
        # unwrap across the seam of a closed circle
        if left[i] >= 0 and lo > t[i]:
            lo -= 2 * np.pi
        if right[i] >= 0 and hi < t[i]:
            hi += 2 * np.pi
        to_z = lambda s: seg.center + seg.radius * np.exp(1j * s)  # noqa: E731
    else:
        to_z = lambda s: complex(s)  # noqa: E731
    if not hi > lo:
        return None
    r = minimize_scalar(lambda s: -float(_values(P, w, np.array([to_z(s)]))[0]),
                        bounds=(lo, hi), method="bounded", options={"xatol": 1e-14 * (1 + abs(t[i]))})
    return complex(to_z(r.x)), -float(r.fun)


def default_tol_rel(P: Poly, w, grid) -> float:
    """``1e-6`` plus the rounding level of evaluating ``w|P|`` on the grid."""
    z = grid.points
    wz = np.asarray(w(z), dtype=float)
    vals = wz * np.abs(P(z))
    M = vals.max()
    if not M > 0:
        return EXTREMAL_TOL
    absc = Poly(np.abs(P.coeffs))
    cond = (wz * absc(np.abs(z)).real).max() / M
    return EXTREMAL_TOL + 4 * max(P.degree, 1) * np.finfo(float).eps * cond


def extremal_points(P: Poly, w, grid, tol_rel: float | None = None) -> ExtremalSet:
    """Grid points where ``w|P|`` is within ``tol_rel`` of its maximum.

    Local maxima on interval and arc segments are moved to the refined peak
    location; other candidates stay where they are.
    """
    z = np.asarray(grid.points, dtype=complex)
    vals = _values(P, w, z)
    if not np.any(vals > 0):
        raise EmptyNorm("w|P| vanishes on the grid")
    if tol_rel is None:
        tol_rel = default_tol_rel(P, w, grid)
    left, right = grid.neighbours()
    M0 = vals.max()
    pts = z.copy()
    out = vals.copy()
    cand = np.flatnonzero(vals >= (1 - 10 * tol_rel) * M0)
    for i in cand:
        lv = vals[left[i]] if left[i] >= 0 else -np.inf
        rv = vals[right[i]] if right[i] >= 0 else -np.inf
        if vals[i] < lv or vals[i] < rv:
            continue
        ref = _refine_peak(P, w, grid, i, left, right)
        # ignore gains at rounding level (plateaus such as |z^n| on a circle)
        if ref is not None and ref[1] > vals[i] + 64 * np.finfo(float).eps * M0:
            pts[i], out[i] = ref
    M = out.max()
    keep = np.flatnonzero(out >= (1 - tol_rel) * M)
    # several grid points may have been refined onto the same peak
    order = keep[np.argsort(-out[keep], kind="stable")]
    chosen = []
    for i in order:
        if all(abs(pts[i] - pts[j]) > 1e-10 * (1 + abs(pts[i])) for j in chosen):
            chosen.append(i)
    chosen = np.array(sorted(chosen, key=lambda j: (pts[j].real, pts[j].imag)), dtype=int)
    return ExtremalSet(pts[chosen], out[chosen], float(tol_rel), float(M), P, grid, w)


# -- Kolmogorov / Rivlin-Shapiro ------------------------------------------------


def _frame(points):
    c = 0.5 * (points.real.min() + points.real.max()) + 0.5j * (points.imag.min() + points.imag.max())
    s = float(np.max(np.abs(points - c)))
    return c, (s if s > 0 else 1.0)


def _frame_for(E, grid=None):
    # scale by the whole sampled set: a frame fitted to a tight cluster of
    # extremal points makes the monomial coefficients of q explode
    g = grid if grid is not None else E.grid
    pts = np.asarray(g.points if g is not None else E.points, dtype=complex)
    return _frame(pts)


def _columns(P, points, n, frame, raw=False):
    """Real 2n x m matrix of (Re, Im) of phi_k(z_j) * conj(sgn P(z_j))."""
    c, s = frame
    u = (points - c) / s
    Pz = P(points)
    if raw:
        sg = np.conj(Pz) / np.abs(Pz).max()
    else:
        sg = np.conj(Pz / np.abs(Pz))
    B = (u[None, :] ** np.arange(n)[:, None]) * sg[None, :]
    return np.vstack([B.real, B.imag])


def _simplex_nnls(A):
    """Min ||A lam|| over the probability simplex (normalisation row penalty)."""
    d, m = A.shape
    rho = max(1.0, float(np.abs(A).max()))
    Ah = np.vstack([A, np.full((1, m), rho)])
    b = np.zeros(d + 1)
    b[-1] = rho
    lam, _ = nnls(Ah, b)
    tot = lam.sum()
    if not tot > 0:
        return lam, np.inf, np.zeros(d)
    x = A @ lam
    return lam / tot, float(np.linalg.norm(x) / tot), x


def dual_residual(P: Poly, points, lam, n=None) -> float:
    """``|sum_j lam_j phi_k(z_j) conj sgn P(z_j)|`` over k < n, with sum(lam) = 1."""
    points = np.asarray(points, dtype=complex)
    n = P.degree if n is None else n
    lam = np.asarray(lam, dtype=float)
    A = _columns(P, points, n, _frame(points))
    return float(np.linalg.norm(A @ (lam / lam.sum())))


def _primal(P, points, n, frame):
    """LP: min v s.t. Re[P(z_j) conj q(z_j)] / max|P| <= v, coefficients in a box.

    Returns the optimal v (<= 0). A strictly negative value means a
    first-order descent direction exists.
    """
    A = _columns(P, points, n, frame, raw=True)
    d, m = A.shape
    cost = np.zeros(d + 1)
    cost[-1] = 1.0
    A_ub = np.hstack([A.T, -np.ones((m, 1))])
    bounds = [(-1.0, 1.0)] * d + [(None, None)]
    r = linprog(cost, A_ub=A_ub, b_ub=np.zeros(m), bounds=bounds, method="highs")
    if r.status != 0:
        return np.nan
    return float(r.fun)


def _direction(x, n, frame) -> Poly:
    # x = A lam is the min-norm point; q = sum (alpha + i beta) phi_k with
    # alpha = -x_re, beta = +x_im makes Re[P conj q] < 0 on all of E
    c, s = frame
    coef = -x[:n] + 1j * x[n:]
    return compose(Poly(coef), Poly([-c / s, 1.0 / s]))


def _line_search(P, q, w, grid):
    z = grid.points
    wz = np.asarray(w(z), dtype=float)
    N0 = float((wz * np.abs(P(z))).max())
    qv = float((wz * np.abs(q(z))).max())
    if not qv > 0:
        return 0.0, 0.0, N0
    e0 = N0 / qv
    steps = e0 * 2.0 ** -np.arange(0, 60)
    Pz, qz = P(z), q(z)
    norms = np.array([(wz * np.abs(Pz + e * qz)).max() for e in steps])
    k = int(np.argmin(norms))
    return float(steps[k]), float(N0 - norms[k]), N0


def kolmogorov_check(P: Poly, E: ExtremalSet, tol: float = 1e-8, grid=None, w=None):
    """Decide optimality of monic ``P`` on its extremal set.

    Returns :class:`RivlinShapiro` when NNLS finds multipliers with residual
    at most ``tol``; otherwise an :class:`Improvable` whose direction was
    checked to lower the weighted norm on the grid. Residuals in
    ``(tol, 10 tol]`` raise :class:`AmbiguousCertificate`.
    """
    points = np.asarray(E.points, dtype=complex)
    if points.size == 0:
        raise EmptyNorm("empty extremal set")
    n = P.degree
    if n == 0:
        return RivlinShapiro(points, np.full(points.size, 1.0 / points.size), 0.0, 0.0, 0.0, True)
    frame = _frame_for(E, grid)
    A = _columns(P, points, n, frame)
    lam, res, x = _simplex_nnls(A)
    pv = _primal(P, points, n, frame)
    primal_opt = bool(np.isfinite(pv) and -pv <= max(10 * np.sqrt(2 * n) * tol, 1e-7))
    if res <= tol:
        raw = float(np.linalg.norm(_columns(P, points, n, frame, raw=True) @ lam))
        keep = lam > 0
        return RivlinShapiro(points[keep], lam[keep], res, raw, pv, primal_opt)
    if res <= 10 * tol:
        raise AmbiguousCertificate("dual residual within [tol, 10 tol]; refine the grid",
                                   residual=res, tol=tol, primal_value=pv)
    grid = grid if grid is not None else E.grid
    w = w if w is not None else E.weight
    if grid is None or w is None:
        raise ValueError("grid and weight are needed to verify a descent direction")
    q = _direction(x, n, frame)
    step, dec, N0 = _line_search(P, q, w, grid)
    if not dec > 8 * np.finfo(float).eps * N0:
        raise AmbiguousCertificate("dual residual above tol but no verified decrease",
                                   residual=res, tol=tol, primal_value=pv)
    return Improvable(q, dec, step, res, pv, not primal_opt)


def _caratheodory(A, lam):
    """Reduce the support of ``lam`` to at most rank([A; 1]) points, keeping A lam and sum."""
    lam = lam.copy()
    while True:
        S = np.flatnonzero(lam > 0)
        M = np.vstack([A[:, S], np.ones(S.size)])
        if S.size <= M.shape[0]:
            return lam
        v = np.linalg.svd(M)[2][-1]
        if not np.any(v > 0):
            v = -v
        ratio = np.where(v > 0, lam[S] / np.where(v > 0, v, 1.0), np.inf)
        j = int(np.argmin(ratio))
        lam[S] = np.maximum(lam[S] - ratio[j] * v, 0.0)
        lam[S[j]] = 0.0


def rivlin_shapiro_multipliers(P: Poly, E: ExtremalSet, n: int | None = None,
                               tol: float = 1e-8) -> RivlinShapiro:
    """Sparse multipliers on at most 2n+1 extremal points."""
    n = P.degree if n is None else n
    points = np.asarray(E.points, dtype=complex)
    if points.size == 0:
        raise EmptyNorm("empty extremal set")
    frame = _frame_for(E)
    A = _columns(P, points, n, frame)
    lam, res, _ = _simplex_nnls(A)
    if res > tol:
        raise NoCertificate("NNLS residual floor above tol", residual=res, tol=tol)
    support = np.flatnonzero(lam > 0)
    # drop the smallest multiplier while the residual stays below tol
    while support.size > 1:
        trial = np.delete(support, np.argmin(lam[support]))
        l2, r2, _ = _simplex_nnls(A[:, trial])
        if r2 > tol:
            break
        lam = np.zeros_like(lam)
        lam[trial] = l2
        support = trial[l2 > 0]
        res = r2
    if support.size > 2 * n + 1:
        lam = _caratheodory(A, lam)
        lam /= lam.sum()
        support = np.flatnonzero(lam > 0)
        res = float(np.linalg.norm(A @ lam))
        if res > tol:
            raise NoCertificate("support reduction lost accuracy", residual=res, tol=tol)
    if not n + 1 <= support.size <= 2 * n + 1:
        raise NoCertificate("support size outside [n+1, 2n+1]", m=int(support.size), n=n)
    lam_s = lam[support] / lam[support].sum()
    pts = points[support]
    raw = float(np.linalg.norm(_columns(P, pts, n, frame, raw=True) @ lam_s))
    return RivlinShapiro(pts, lam_s, float(res), raw)


# -- alternation ----------------------------------------------------------------


def alternation_verify(result, K, w, tol: float = 1e-6, density: int | None = None) -> AlternationChain:
    """Chain of n+1 alternation points of ``w*T`` on a real set."""
    if not K.is_real:
        raise WChebError("alternation needs a real set", reason="not_real")
    T = result.T
    n = T.degree
    grid = K.sample(density or max(4000, 400 * n))
    E = extremal_points(T, w, grid, tol_rel=tol)
    x = E.points.real
    s = np.asarray(w(E.points), dtype=float) * T(E.points).real
    ok = np.abs(s) >= (1 - tol) * E.norm
    x, s = x[ok], s[ok]
    order = np.argsort(x, kind="stable")
    chain = []
    for i in order:
        if chain and np.sign(s[i]) == np.sign(s[chain[-1]]):
            # same sign as the previous link: keep the larger value
            if abs(s[i]) > abs(s[chain[-1]]):
                chain[-1] = i
        else:
            chain.append(i)
    if chain and s[chain[-1]] < 0:
        chain = chain[:-1]
    if len(chain) < n + 1:
        raise ChainTooShort(f"found {len(chain)} alternation points, need {n + 1}",
                            found=len(chain), needed=n + 1)
    idx = np.array(chain[-(n + 1):])
    return AlternationChain(x[idx], np.sign(s[idx]).astype(int), s[idx])


# -- equality case ----------------------------------------------------------------


def equality_case_check(K, w, result, tol: float = 1e-6, N: int = DEFAULT_N) -> EqualityCheck:
    """Test the two conditions for ``W_n = S(w)`` and cross-check the values."""
    T = result.T
    n = T.degree
    z = roots(T) if n > 0 else np.array([], dtype=complex)
    zeros_ok = bool(np.all(green(K, z) <= tol)) if z.size else True
    rule = eq_quadrature(K, N)
    norm = result.norm
    vals = np.asarray(w(rule.nodes), dtype=float) * np.abs(T(rule.nodes))
    ae_ok = bool(np.all(vals >= (1 - tol) * norm))
    cap = capacity(K)
    W = norm / cap**n
    S = szego_integral(K, w, N)
    equality = zeros_ok and ae_ok
    consistent = (not equality) or abs(W - S) <= tol * S
    if not consistent:
        raise WChebError("equality conditions hold but W_n differs from S(w)",
                         reason="equality_inconsistent", W=W, S=S)
    return EqualityCheck(equality, zeros_ok, ae_ok, float(W), float(S), bool(consistent))


# -- convenience ------------------------------------------------------------------


def certify(result, K, w, tol: float = 1e-8, density: int | None = None):
    """Kolmogorov certificate (plus alternation chain on real sets) for a solve."""
    n = result.T.degree
    if K.is_real:
        grid = K.sample(density or max(4000, 400 * n))
    else:
        grid = K.sample(density or 512)
    E = extremal_points(result.T, w, grid)
    cert = kolmogorov_check(result.T, E, tol, grid, w)
    if isinstance(cert, RivlinShapiro):
        rs = rivlin_shapiro_multipliers(result.T, E, n, tol)
        cert = replace(rs, primal_value=cert.primal_value, primal_agrees=cert.primal_agrees)
    chain = None
    if K.is_real and isinstance(cert, RivlinShapiro):
        try:
            chain = alternation_verify(result, K, w, density=density)
        except ChainTooShort:
            chain = None
    return cert, chain, E
