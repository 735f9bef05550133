"""Compact sets K: interval unions, circles, finite samples and polynomial preimages.

Every set can be sampled into a :class:`Grid`. Grids remember their
one-dimensional structure (segments) so that local maxima on a grid can be
refined along the underlying curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .polynomials import Poly, aberth_batch, roots


class CompactSet:
    """Common interface of the four supported set variants."""

    is_real = False
    is_finite = False

    def sample(self, density: int) -> "Grid":
        raise NotImplementedError

    def hull_box(self):
        """(xmin, xmax, ymin, ymax) of the set."""
        raise NotImplementedError

    def contains(self, z, tol=1e-10):
        raise NotImplementedError


@dataclass(frozen=True)
class Segment:
    """A contiguous run ``points[start:stop]`` of a grid.

    ``kind`` is ``"interval"`` (parameter is x), ``"arc"`` (parameter is the
    angle, ``closed`` for a full circle) or ``"curve"`` (no refinement).
    """

    start: int
    stop: int
    kind: str
    closed: bool = False
    center: complex = 0j
    radius: float = 1.0


@dataclass(frozen=True)
class Grid:
    points: np.ndarray
    weight_mask: np.ndarray
    density: int
    segments: tuple = ()
    param: np.ndarray | None = None

    def __len__(self):
        return self.points.size

    def with_weight(self, w) -> "Grid":
        vals = np.asarray(w(self.points), dtype=float)
        return Grid(self.points, vals > 0, self.density, self.segments, self.param)

    def neighbours(self):
        """Index arrays (left, right) of 1-D neighbours; -1 where none exists."""
        n = self.points.size
        left = np.full(n, -1)
        right = np.full(n, -1)
        for s in self.segments:
            idx = np.arange(s.start, s.stop)
            if s.kind == "point":
                continue
            left[idx[1:]] = idx[:-1]
            right[idx[:-1]] = idx[1:]
            if s.closed and idx.size > 2:
                left[idx[0]] = idx[-1]
                right[idx[-1]] = idx[0]
        return left, right

    def segment_of(self, i):
        for s in self.segments:
            if s.start <= i < s.stop:
                return s
        return None


def _cheb_extrema(a, b, count):
    """``count`` Chebyshev extreme points of [a, b], ascending, endpoints exact."""
    if count == 1:
        return np.array([0.5 * (a + b)])
    k = np.arange(count)
    t = np.sin(np.pi * (2 * k - (count - 1)) / (2 * (count - 1)))
    x = 0.5 * (a + b) + 0.5 * (b - a) * t
    x[0], x[-1] = a, b
    return x


class IntervalUnion(CompactSet):
    """Union of disjoint closed intervals ``[a_i, b_i]`` in ascending order."""

    is_real = True

    def __init__(self, intervals):
        iv = [(float(a), float(b)) for a, b in intervals]
        if not iv:
            raise ValueError("need at least one interval")
        for a, b in iv:
            if not a < b:
                raise ValueError(f"degenerate or reversed interval [{a}, {b}]")
        for (_, b0), (a1, _) in zip(iv, iv[1:]):
            if not b0 < a1:
                raise ValueError("intervals must be disjoint and ascending")
        self.intervals = tuple(iv)

    def __repr__(self):
        return f"IntervalUnion({list(self.intervals)})"

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    @property
    def lo(self):
        return self.intervals[0][0]

    @property
    def hi(self):
        return self.intervals[-1][1]

    def hull_box(self):
        return self.lo, self.hi, 0.0, 0.0

    def contains(self, z, tol=1e-10):
        z = np.asarray(z, dtype=complex)
        ok = np.zeros(z.shape, dtype=bool)
        for a, b in self.intervals:
            ok |= (z.real >= a - tol) & (z.real <= b + tol)
        return ok & (np.abs(z.imag) <= tol)

    def sample(self, density: int) -> Grid:
        if density < 2:
            raise ValueError("density must be >= 2")
        total = sum(b - a for a, b in self.intervals)
        pts, segs = [], []
        start = 0
        for a, b in self.intervals:
            cnt = max(2, int(round(density * (b - a) / total)))
            x = _cheb_extrema(a, b, cnt)
            pts.append(x)
            segs.append(Segment(start, start + cnt, "interval"))
            start += cnt
        x = np.concatenate(pts)
        return Grid(x.astype(complex), np.ones(x.size, dtype=bool), density, tuple(segs), x)


class Circle(CompactSet):
    """The circle curve ``|z - center| = radius``."""

    def __init__(self, center=0j, radius=1.0):
        if not radius > 0:
            raise ValueError("radius must be positive")
        self.center = complex(center)
        self.radius = float(radius)

    def __repr__(self):
        return f"Circle(center={self.center!r}, radius={self.radius!r})"

    def __eq__(self, other):
        return isinstance(other, Circle) and (self.center, self.radius) == (other.center, other.radius)

    def __hash__(self):
        return hash((self.center, self.radius))

    def hull_box(self):
        c, r = self.center, self.radius
        return c.real - r, c.real + r, c.imag - r, c.imag + r

    def contains(self, z, tol=1e-10):
        return np.abs(np.abs(np.asarray(z) - self.center) - self.radius) <= tol * (1 + self.radius)

    def point(self, theta):
        return self.center + self.radius * np.exp(1j * np.asarray(theta))

    def sample(self, density: int) -> Grid:
        if density < 2:
            raise ValueError("density must be >= 2")
        th = 2 * np.pi * np.arange(density) / density
        # snap the axis points so that e.g. density 4 gives exactly {1, i, -1, -i}
        u = np.exp(1j * th)
        u.real[np.abs(u.real) < 1e-15] = 0.0
        u.imag[np.abs(u.imag) < 1e-15] = 0.0
        z = self.center + self.radius * u
        seg = Segment(0, density, "arc", closed=True, center=self.center, radius=self.radius)
        return Grid(z, np.ones(density, dtype=bool), density, (seg,), th)


class SampledSet(CompactSet):
    """A finite set of distinct points."""

    is_finite = True

    def __init__(self, points):
        z = np.unique(np.asarray(points, dtype=complex))
        if z.size == 0:
            raise ValueError("empty point set")
        self.points = z
        self.is_real = bool(np.all(z.imag == 0))
        if self.is_real:
            self.points = np.sort(z.real).astype(complex)

    def __repr__(self):
        return f"SampledSet({self.points.size} points)"

    def hull_box(self):
        z = self.points
        return z.real.min(), z.real.max(), z.imag.min(), z.imag.max()

    def contains(self, z, tol=1e-10):
        z = np.asarray(z, dtype=complex)
        d = np.abs(z[..., None] - self.points)
        return d.min(axis=-1) <= tol

    def sample(self, density: int = 2) -> Grid:
        z = self.points
        segs = tuple(Segment(i, i + 1, "point") for i in range(z.size))
        return Grid(z.copy(), np.ones(z.size, dtype=bool), density, segs,
                    z.real.copy() if self.is_real else None)


def _order_fibers(F):
    """Reorder each row of F to continue the previous row (nearest assignment)."""
    F = F.copy()
    for i in range(1, F.shape[0]):
        cost = np.abs(F[i - 1][:, None] - F[i][None, :])
        _, col = linear_sum_assignment(cost)
        F[i] = F[i][col]
    return F


class Preimage(CompactSet):
    """``K = p^{-1}(base)`` for a polynomial ``p`` of degree ``m >= 1``."""

    def __init__(self, p: Poly, base: CompactSet):
        if p.degree < 1:
            raise ValueError("preimage map must have degree >= 1")
        if not isinstance(base, (IntervalUnion, Circle, Preimage)):
            raise ValueError("preimage base must be an interval union, circle or preimage")
        self.p = p
        self.base = base
        self.m = p.degree
        self.is_real = self._check_real()
        self._intervals = None

    def __repr__(self):
        return f"Preimage({self.p!r}, {self.base!r})"

    def __eq__(self, other):
        return isinstance(other, Preimage) and self.p == other.p and self.base == other.base

    def __hash__(self):
        return hash((self.p, self.base))

    def fiber(self, zeta, init=None):
        """The ``m`` solutions of ``p(z) = zeta``."""
        return fiber(self, zeta, init)

    def fibers(self, zetas, ordered=True):
        """Fibers over an array of base points, shape (len(zetas), m)."""
        zetas = np.atleast_1d(np.asarray(zetas, dtype=complex))
        C = np.repeat(self.p.coeffs[None, :], zetas.size, axis=0).astype(complex)
        C[:, 0] -= zetas
        F, ok = aberth_batch(C)
        if not ok.all():
            # retry stragglers from a fresh start; roots() raises if still stuck
            for i in np.flatnonzero(~ok):
                F[i] = roots(self.p - zetas[i])
        if self.is_real:
            F = _snap_real(F, self.p, zetas)
        return _order_fibers(F) if ordered else F

    def _check_real(self):
        if not (self.p.is_real and self.base.is_real):
            return False
        zs = self.base.sample(64).points
        C = np.repeat(self.p.coeffs[None, :], zs.size, axis=0)
        C[:, 0] -= zs
        F, _ = aberth_batch(C)
        scale = 1 + np.abs(F)
        return bool(np.all(np.abs(F.imag) <= 1e-6 * scale))

    def real_intervals(self) -> IntervalUnion:
        """The set as an :class:`IntervalUnion` (real preimages only)."""
        if not self.is_real:
            raise ValueError("preimage is not a subset of the real line")
        if self._intervals is None:
            base = self.base.real_intervals() if isinstance(self.base, Preimage) else self.base
            brk = []
            for a, b in base.intervals:
                for c in (a, b):
                    r = roots(self.p - c)
                    brk.extend(r.real[np.abs(r.imag) <= 1e-6 * (1 + np.abs(r))])
            brk = np.unique(np.round(np.sort(brk), 14))
            pieces = []
            for x0, x1 in zip(brk[:-1], brk[1:]):
                if x1 - x0 < 1e-12:
                    continue
                mid = self.p(0.5 * (x0 + x1)).real
                if any(a <= mid <= b for a, b in base.intervals):
                    if pieces and abs(pieces[-1][1] - x0) < 1e-12:
                        pieces[-1] = (pieces[-1][0], x1)
                    else:
                        pieces.append((x0, x1))
            self._intervals = IntervalUnion(pieces)
        return self._intervals

    def hull_box(self):
        z = self.sample(256).points
        return z.real.min(), z.real.max(), z.imag.min(), z.imag.max()

    def contains(self, z, tol=1e-10):
        z = np.asarray(z, dtype=complex)
        return self.base.contains(self.p(z), tol * (1 + np.abs(self.p.leading)))

    def sample(self, density: int) -> Grid:
        bg = self.base.sample(density)
        F = self.fibers(bg.points)
        if self.is_real:
            x = np.sort(F.real.ravel())
            segs, start = [], 0
            for a, b in self.real_intervals().intervals:
                stop = start + int(np.count_nonzero((x >= a - 1e-9) & (x <= b + 1e-9)))
                segs.append(Segment(start, stop, "interval"))
                start = stop
            return Grid(x.astype(complex), np.ones(x.size, dtype=bool), density, tuple(segs), x)
        n = bg.points.size
        segs = tuple(Segment(k * n, (k + 1) * n, "curve") for k in range(self.m))
        z = F.T.ravel()
        return Grid(z, np.ones(z.size, dtype=bool), density, segs, None)


def _snap_real(F, p, zetas):
    F = F.copy()
    small = np.abs(F.imag) <= 1e-6 * (1 + np.abs(F))
    cand = F.real.astype(complex)
    resid = np.abs(p(cand) - zetas[:, None])
    ok = small & (resid <= 1e-10 * (1 + np.abs(zetas[:, None])))
    F[ok] = cand[ok]
    return F


def fiber(K: Preimage, zeta, init=None):
    """Solutions of ``p(z) = zeta``; with ``init`` the result is ordered to
    match the previous fiber by nearest-point assignment."""
    r = roots(K.p - zeta)
    if K.is_real:
        r = _snap_real(r[None, :], K.p, np.array([zeta], dtype=complex))[0]
    if init is not None:
        init = np.asarray(init, dtype=complex)
        cost = np.abs(init[:, None] - r[None, :])
        _, col = linear_sum_assignment(cost)
        r = r[col]
    return r


def sample(K: CompactSet, density: int) -> Grid:
    return K.sample(density)


def as_real_intervals(K: CompactSet):
    """IntervalUnion view of a real set, or None for finite/complex sets."""
    if isinstance(K, IntervalUnion):
        return K
    if isinstance(K, Preimage) and K.is_real:
        return K.real_intervals()
    return None
