"""Weighted Chebyshev polynomials: Remez exchange on real sets, Lawson
iteration on finite grids, Widom factors and preimage transfer."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from scipy.optimize import minimize_scalar

from .domains import Circle, CompactSet, Grid, Preimage, SampledSet, as_real_intervals
from .errors import (
    LinearSystemSingular,
    RankDeficient,
    ReferenceDegenerate,
    UndefinedAt,
    UnsupportedSet,
)
from .polynomials import Poly, compose, roots
from .potential import capacity
from .weights import Weight, szego_class_check

REMEZ_TOL = 1e-10
LAWSON_TOL = 1e-8


@dataclass(frozen=True)
class ChebyshevResult:
    T: Poly
    norm: float
    extremal_points: tuple
    iterations: int
    converged: bool
    residual: float
    method: str = ""
    level: float = math.nan

    @property
    def n(self):
        return self.T.degree


@dataclass(frozen=True)
class WidomReport:
    n: int
    t_n: float
    capacity: float
    W_n: float
    S_w: float
    ratio: float | None
    result: ChebyshevResult = field(repr=False, default=None)


def _weights_on(w, z):
    v = np.asarray(w(z), dtype=float)
    if not np.all(np.isfinite(v)):
        raise UndefinedAt("weight is not finite on the set")
    return v


# -- Remez --------------------------------------------------------------------


def _initial_reference(t, cand, n):
    """Chebyshev points of [-1, 1] snapped to distinct candidate indices."""
    idx = np.flatnonzero(cand)
    target = -np.cos(np.pi * np.arange(n + 1) / n)
    ref, prev = [], -1
    for j, tj in enumerate(target):
        pool = idx[idx > prev]
        # leave room for the remaining points
        pool = pool[: max(pool.size - (n - j), 0)]
        if pool.size == 0:
            break
        k = pool[np.argmin(np.abs(t[pool] - tj))]
        ref.append(k)
        prev = k
    if len(ref) < n + 1:
        ref = list(idx[np.linspace(0, idx.size - 1, n + 1).round().astype(int)])
    return np.array(ref)


def _alternating_peaks(x, e):
    """Split into maximal same-sign runs and keep the peak of each run."""
    s = np.sign(e)
    keep = s != 0
    x, e = x[keep], e[keep]
    s = s[keep]
    if x.size == 0:
        return x, e
    brk = np.flatnonzero(np.diff(s)) + 1
    starts = np.r_[0, brk]
    stops = np.r_[brk, x.size]
    px = np.empty(starts.size)
    pe = np.empty(starts.size)
    for i, (a, b) in enumerate(zip(starts, stops)):
        k = a + np.argmax(np.abs(e[a:b]))
        px[i], pe[i] = x[k], e[k]
    return px, pe


def _trim(px, pe, n):
    """Reduce an alternating sequence to n+1 points, keeping the global max."""
    px, pe = list(px), list(pe)
    while len(px) > n + 1:
        g = int(np.argmax(np.abs(pe)))
        if len(px) == n + 2:
            drop = 0 if abs(pe[0]) <= abs(pe[-1]) else len(px) - 1
            if drop == g:
                drop = len(px) - 1 - drop
            del px[drop], pe[drop]
            continue
        order = np.argsort(np.abs(pe))
        i = int(order[0]) if order[0] != g else int(order[1])
        if i in (0, len(px) - 1):
            del px[i], pe[i]
            continue
        j = i - 1 if abs(pe[i - 1]) <= abs(pe[i + 1]) else i + 1
        if j == g:
            j = 2 * i - j
        for k in sorted((i, j), reverse=True):
            del px[k], pe[k]
    return np.array(px), np.array(pe)


def remez_real(K: CompactSet, w: Weight, n: int, tol: float = REMEZ_TOL,
               max_iter: int = 100, density: int | None = None) -> ChebyshevResult:
    """Weighted Chebyshev polynomial on a real set by Remez exchange.

    ``K`` is an :class:`IntervalUnion`, a real :class:`Preimage` or a real
    :class:`SampledSet`. On a continuous set the error is sampled on a
    Chebyshev-spaced grid and each peak is refined by bounded Brent search.
    Convergence means ``(max w|P| - h) / h <= tol`` with ``h`` the levelled
    reference error.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(K, SampledSet):
        if not K.is_real:
            raise UnsupportedSet("discrete Remez needs real points")
        grid = K.sample()
        continuous = False
    else:
        iv = as_real_intervals(K)
        if iv is None:
            raise UnsupportedSet(f"remez_real needs a real set, got {K!r}")
        grid = iv.sample(density or max(4000, 400 * n))
        continuous = True
    x = grid.points.real
    order = np.argsort(x, kind="stable")
    x = x[order]
    wv = _weights_on(w, x.astype(complex))
    cand = wv > 0
    if np.count_nonzero(cand) < n + 2:
        raise ReferenceDegenerate(f"need {n + 2} positive-weight candidates, have {np.count_nonzero(cand)}")
    lo, hi = x[0], x[-1]
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    t = (x - mid) / half
    lead = np.zeros(n + 1)
    lead[n] = 2.0 ** (1 - n)
    sig = (-1.0) ** (n - np.arange(n + 1))

    # bracket for refining a peak: neighbouring grid points inside K
    seg_id = np.empty(x.size, dtype=int)
    if continuous:
        for k, (a, b) in enumerate(iv.intervals):
            seg_id[(x >= a - 1e-12) & (x <= b + 1e-12)] = k

    def err_at(tt):
        tt = np.asarray(tt, dtype=float)
        return _weights_on(w, (mid + half * tt).astype(complex)) * npcheb.chebval(tt, coef)

    def refine(i, e_i):
        lo_i = i - 1 if i > 0 and seg_id[i - 1] == seg_id[i] else i
        hi_i = i + 1 if i + 1 < x.size and seg_id[i + 1] == seg_id[i] else i
        if lo_i == hi_i:
            return t[i], e_i
        s = np.sign(e_i)
        r = minimize_scalar(lambda u: -s * float(err_at(u)), bounds=(t[lo_i], t[hi_i]),
                            method="bounded", options={"xatol": 1e-15})
        val = float(err_at(r.x))
        if s * val > abs(e_i):
            return float(r.x), val
        return t[i], e_i

    ref_t = t[_initial_reference(t, cand, n)]
    coef = lead.copy()
    h = 0.0
    best = None
    it = 0
    for it in range(1, max_iter + 1):
        wr = _weights_on(w, (mid + half * ref_t).astype(complex))
        A = np.empty((n + 1, n + 1))
        A[:, :n] = npcheb.chebvander(ref_t, n - 1)
        A[:, n] = -sig / wr
        rhs = -npcheb.chebval(ref_t, lead)
        try:
            if np.linalg.cond(A) > 1e15:
                raise np.linalg.LinAlgError
            sol = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError as exc:
            raise LinearSystemSingular("singular Remez system", reference=mid + half * ref_t) from exc
        coef = lead.copy()
        coef[:n] = sol[:n]
        h = abs(sol[n])

        e = wv * npcheb.chebval(t, coef)
        e[~cand] = 0.0
        idx = np.flatnonzero(cand)
        pk_x, pk_e = _alternating_peaks(idx.astype(float), e[idx])
        pk_i = pk_x.astype(int)
        pts_t, pts_e = [], []
        for i, ei in zip(pk_i, pk_e):
            ti, vi = refine(i, ei) if continuous else (t[i], ei)
            pts_t.append(ti)
            pts_e.append(vi)
        pts_t, pts_e = np.array(pts_t), np.array(pts_e)
        M = np.max(np.abs(pts_e))
        resid = (M - h) / h if h > 0 else math.inf
        if best is None or M < best[0]:
            best = (M, coef.copy(), pts_t, pts_e, h, resid)
        if resid <= tol:
            break
        if pts_t.size >= n + 1:
            new_t, _ = _trim(pts_t, pts_e, n)
        else:
            new_t = _single_exchange(ref_t, wr, coef, pts_t, pts_e, sig)
        if np.allclose(new_t, ref_t, rtol=0, atol=1e-15):
            break
        ref_t = new_t

    M, coef, pts_t, pts_e, h, resid = best
    converged = resid <= tol
    # back to x: P(x) = half^n * Q((x - mid)/half)
    q_t = Poly(npcheb.cheb2poly(coef))
    P = (compose(q_t, Poly([-mid / half, 1.0 / half])) * half**n).monic()
    scale = half**n
    ext = tuple((complex(mid + half * ti), float(abs(ei) * scale)) for ti, ei in zip(pts_t, pts_e)
                if abs(ei) >= (1 - max(tol, 1e-9) * 10) * M)
    return ChebyshevResult(P, float(M * scale), ext, it, bool(converged), float(resid),
                           "remez", float(h * scale))


def _single_exchange(ref_t, wr, coef, pts_t, pts_e, sig):
    """Swap the global peak into the reference keeping sign alternation."""
    g = int(np.argmax(np.abs(pts_e)))
    tg, sg = pts_t[g], np.sign(pts_e[g])
    ref = list(ref_t)
    sref = list(np.sign(wr * npcheb.chebval(ref_t, coef)))
    pos = int(np.searchsorted(ref, tg))
    if pos == 0:
        if sref[0] == sg:
            ref[0] = tg
        else:
            ref = [tg] + ref[:-1]
    elif pos == len(ref):
        if sref[-1] == sg:
            ref[-1] = tg
        else:
            ref = ref[1:] + [tg]
    else:
        k = pos - 1 if sref[pos - 1] == sg else pos
        ref[k] = tg
    return np.array(ref)


# -- Lawson -------------------------------------------------------------------


def _monic_lsq(zeta, nu, n):
    """Monic degree-n minimiser of ``sum nu |P|^2``: values on ``zeta`` and
    ascending coefficients, built by Arnoldi (Stieltjes) orthogonalisation."""
    N = zeta.size
    phi = np.zeros((n + 1, N), dtype=complex)
    C = np.zeros((n + 1, n + 1), dtype=complex)
    nrm = math.sqrt(nu.sum())
    phi[0] = 1.0 / nrm
    C[0, 0] = 1.0 / nrm
    for k in range(n):
        v = zeta * phi[k]
        cv = np.zeros(n + 1, dtype=complex)
        cv[1:] = C[k, :-1]
        for _ in range(2):
            for j in range(k + 1):
                hj = np.sum(nu * v * np.conj(phi[j]))
                v = v - hj * phi[j]
                cv = cv - hj * C[j]
        if k == n - 1:
            lead = C[k, k]
            return v / lead, cv / lead
        H = math.sqrt(float(np.sum(nu * np.abs(v) ** 2)))
        if H <= 1e-14 * nrm * (1 + np.abs(zeta).max()):
            raise RankDeficient("grid supports fewer than n+1 independent polynomials")
        phi[k + 1] = v / H
        C[k + 1] = cv / H
    # n == 0 never reaches here
    raise ValueError("n must be >= 1")


def lawson_discrete(grid, w: Weight, n: int, tol: float = LAWSON_TOL, max_iter: int = 5000,
                    seed: int | None = None, power: float = 1.0) -> ChebyshevResult:
    """Discrete weighted Chebyshev polynomial by Lawson's iteration.

    Masses ``mu`` on the grid are updated by ``mu <- mu * (w|P|)^power`` after
    each weighted least-squares solve. The stopping test
    ``max w|P| / sqrt(sum mu (w|P|)^2) - 1 <= tol`` certifies that the norm
    is within ``1 + tol`` of the discrete optimum.
    """
    z = np.asarray(grid.points if isinstance(grid, Grid) else grid, dtype=complex).ravel()
    wv = _weights_on(w, z)
    act = wv > 0
    if np.count_nonzero(act) < n + 2:
        raise RankDeficient(f"need {n + 2} positive-weight grid points")
    za, wa = z[act], wv[act]
    c = za.mean()
    s = float(np.abs(za - c).max()) or 1.0
    zeta = (za - c) / s
    if seed is None:
        mu = np.full(za.size, 1.0 / za.size)
    else:
        mu = 1.0 + 0.1 * np.random.default_rng(seed).random(za.size)
        mu /= mu.sum()
    best = None
    resid = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        vals, cq = _monic_lsq(zeta, mu * wa**2, n)
        e = wa * np.abs(vals)
        M = e.max()
        L2 = math.sqrt(float(np.sum(mu * e**2)))
        resid = M / L2 - 1.0
        if best is None or M < best[0]:
            best = (M, cq, e, resid)
        if resid <= tol:
            break
        mu = mu * e**power
        tot = mu.sum()
        if not tot > 0:
            break
        mu /= tot
    M, cq, e, resid_b = best
    P = (compose(Poly(cq), Poly([-c / s, 1.0 / s])) * s**n).monic()
    scale = s**n
    ext_idx = np.flatnonzero(e >= (1 - 1e-6) * M)
    ext = tuple((complex(za[i]), float(e[i] * scale)) for i in ext_idx)
    return ChebyshevResult(P, float(M * scale), ext, it, bool(resid_b <= tol), float(resid_b),
                           "lawson")


# -- dispatch -----------------------------------------------------------------


def solve(K: CompactSet, w: Weight, n: int, *, tol=None, density=None, max_iter=None,
          seed=None) -> ChebyshevResult:
    """Remez on real sets, Lawson on a sample of everything else."""
    if K.is_real:
        kw = {"tol": tol or REMEZ_TOL, "max_iter": max_iter or 100}
        if density:
            kw["density"] = density
        return remez_real(K, w, n, **kw)
    grid = K.sample(density or 512)
    return lawson_discrete(grid, w, n, tol=tol or LAWSON_TOL, max_iter=max_iter or 5000, seed=seed)


def widom_factor(K: CompactSet, w: Weight, n: int, result: ChebyshevResult | None = None,
                 N: int = 512, **solve_opts) -> WidomReport:
    """Widom factor ``t_n / cap^n`` together with the Szego ratio."""
    cap = capacity(K)
    res = result if result is not None else solve(K, w, n, **solve_opts)
    W = res.norm / cap**n
    chk = szego_class_check(K, w, N)
    ratio = W / chk.S if chk.S > 0 else None
    return WidomReport(n, res.norm, cap, W, chk.S, ratio, res)


def preimage_transfer(base_result: ChebyshevResult, p: Poly, base_set=None) -> ChebyshevResult:
    """Chebyshev polynomial on ``p^{-1}(L)`` from the one on ``L``.

    ``T_{nm}(z) = T_n(p(z)) / a_m^n`` and ``t_{nm} = t_n / |a_m|^n``.
    """
    if p.degree < 1:
        raise ValueError("p must have degree >= 1")
    n = base_result.T.degree
    am_n = p.leading**n
    T = (compose(base_result.T, p) / am_n).monic()
    scale = abs(am_n)
    ext = []
    for zeta, val in base_result.extremal_points:
        for z in roots(p - zeta):
            if base_set is not None and p.is_real and getattr(base_set, "is_real", False):
                z = complex(z.real) if abs(z.imag) <= 1e-9 * (1 + abs(z)) else z
            ext.append((complex(z), val / scale))
    return ChebyshevResult(T, base_result.norm / scale, tuple(ext), base_result.iterations,
                           base_result.converged, base_result.residual, "preimage",
                           base_result.level / scale if not math.isnan(base_result.level) else math.nan)
