"""Weight functions ``w: K -> [0, inf)``.

All weights are callables that evaluate elementwise on arrays of complex
points and return float arrays.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import UndefinedAt
from .polynomials import Poly


class Weight:
    def __call__(self, z):
        raise NotImplementedError

    def __mul__(self, other):
        if np.isscalar(other):
            return Scaled(self, float(other))
        return NotImplemented

    __rmul__ = __mul__


class Constant(Weight):
    def __init__(self, c=1.0):
        if c < 0:
            raise ValueError("weight must be nonnegative")
        self.c = float(c)

    def __call__(self, z):
        return np.full(np.shape(z), self.c)

    def __repr__(self):
        return f"Constant({self.c})"


class AbsPolyPower(Weight):
    """``prod |p_i(z)|^alpha_i``.

    A negative exponent makes the weight infinite at the zeros of the
    factor; evaluating there raises :class:`UndefinedAt`.
    """

    def __init__(self, factors):
        self.factors = tuple((p if isinstance(p, Poly) else Poly(p), float(a)) for p, a in factors)

    @classmethod
    def single(cls, p, alpha=1.0):
        return cls([(p, alpha)])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.ones(z.shape)
        for p, a in self.factors:
            v = np.abs(p(z))
            if a < 0 and np.any(v == 0):
                raise UndefinedAt("negative power of a vanishing factor", points=z[v == 0])
            with np.errstate(divide="ignore"):
                out = out * v**a
        return out

    def __repr__(self):
        return f"AbsPolyPower({list(self.factors)})"


class Pullback(Weight):
    """``w_K(z) = w_L(p(z))``."""

    def __init__(self, inner: Poly, base: Weight):
        self.inner = inner
        self.base = base

    def __call__(self, z):
        return self.base(self.inner(np.asarray(z, dtype=complex)))

    def __repr__(self):
        return f"Pullback({self.inner!r}, {self.base!r})"


class Tabulated(Weight):
    """Values attached to grid points.

    ``off_grid`` selects what happens away from the table: ``"zero"``
    (default), ``"error"`` (strict) or ``"nearest"`` (lenient).
    """

    def __init__(self, points, values, off_grid="zero", match_tol=1e-12):
        self.points = np.asarray(points, dtype=complex).ravel()
        self.values = np.asarray(values, dtype=float).ravel()
        if self.points.shape != self.values.shape:
            raise ValueError("points and values differ in length")
        if np.any(self.values < 0):
            raise ValueError("weight values must be nonnegative")
        if off_grid not in ("zero", "error", "nearest"):
            raise ValueError(f"unknown off_grid mode {off_grid!r}")
        self.off_grid = off_grid
        self.match_tol = match_tol
        self._tree = cKDTree(np.c_[self.points.real, self.points.imag])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        d, i = self._tree.query(np.c_[flat.real, flat.imag])
        out = self.values[i].copy()
        miss = d > self.match_tol * (1 + np.abs(flat))
        if miss.any():
            if self.off_grid == "error":
                raise UndefinedAt("tabulated weight evaluated off its grid", points=flat[miss])
            if self.off_grid == "zero":
                out[miss] = 0.0
        return out.reshape(z.shape)

    def __repr__(self):
        return f"Tabulated({self.points.size} points, off_grid={self.off_grid!r})"


class Restricted(Weight):
    """``base`` on a subset, 0 elsewhere.

    ``to`` is a compact set (anything with ``contains``), a finite array of
    points, or a boolean predicate.
    """

    def __init__(self, base: Weight, to, tol=1e-10):
        self.base = base
        self.to = to
        self.tol = tol
        if hasattr(to, "contains"):
            self._member = lambda z: to.contains(z, tol)
            self.finite = bool(getattr(to, "is_finite", False))
        elif callable(to):
            self._member = to
            self.finite = False
        else:
            pts = np.atleast_1d(np.asarray(to, dtype=complex))
            self._member = lambda z: np.min(np.abs(np.asarray(z)[..., None] - pts), axis=-1) <= tol
            self.finite = True

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        inside = np.asarray(self._member(z), dtype=bool)
        out = np.zeros(z.shape)
        if inside.any():
            out[inside] = self.base(z[inside])
        return out

    def __repr__(self):
        return f"Restricted({self.base!r}, {self.to!r})"


class Scaled(Weight):
    def __init__(self, base: Weight, c: float):
        self.base = base
        self.c = c

    def __call__(self, z):
        return self.c * self.base(z)

    def __repr__(self):
        return f"{self.c!r} * {self.base!r}"


class FunctionWeight(Weight):
    """Wrap an arbitrary vectorised nonnegative function."""

    def __init__(self, func: Callable, name: str = "f"):
        self.func = func
        self.name = name

    def __call__(self, z):
        return np.asarray(self.func(np.asarray(z, dtype=complex)), dtype=float)

    def __repr__(self):
        return f"FunctionWeight({self.name})"


def eps_weight(eps: float, n: int) -> AbsPolyPower:
    """``(z^2 + eps^2)^(-n/2)``, the near-extremal weights for real sets."""
    return AbsPolyPower([(Poly([eps * eps, 0.0, 1.0]), -n / 2)])


def eval_weight(w: Weight, z):
    return w(z)


def usc_regularize(w: Weight, grid, radii=None) -> Tabulated:
    """Upper semi-continuous envelope of ``w`` on the points of ``grid``.

    ``radii`` must decrease; the value at a grid point is the sup of ``w``
    over grid points in the open disk of the smallest radius. The default
    schedule is ``[6h, 3h, 1.5h]`` with ``h`` the largest nearest-neighbour
    spacing of the grid.
    """
    pts = np.asarray(grid.points if hasattr(grid, "points") else grid, dtype=complex)
    vals = np.asarray(w(pts), dtype=float)
    xy = np.c_[pts.real, pts.imag]
    tree = cKDTree(xy)
    if radii is None:
        d, _ = tree.query(xy, k=2)
        h = d[:, 1].max()
        radii = [6 * h, 3 * h, 1.5 * h]
    radii = list(radii)
    if any(r1 >= r0 for r0, r1 in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly decreasing")
    env = np.full(pts.size, np.inf)
    for r in radii:
        # nudge below r so that the disk is open
        nb = tree.query_ball_point(xy, r * (1 - 1e-12))
        cur = np.array([vals[ix].max() for ix in nb])
        env = np.minimum(env, cur)
    return Tabulated(pts, np.maximum(env, vals))


class SzegoCheck(NamedTuple):
    is_szego: bool
    S: float


def szego_class_check(K, w: Weight, N: int = 512) -> SzegoCheck:
    from .potential import szego_integral_info

    info = szego_integral_info(K, w, N)
    return SzegoCheck(info.value > 0 and info.stable, info.value)
