import numpy as np
import pytest

from wcheb import (AbsPolyPower, Constant, Poly, Pullback, SampledSet, lawson_discrete, remez_real)
from wcheb.certificates import (AlternationChain, Improvable, RivlinShapiro, alternation_verify,
                                certify, dual_residual, equality_case_check, extremal_points,
                                kolmogorov_check, rivlin_shapiro_multipliers)
from wcheb.errors import ChainTooShort, EmptyNorm
from wcheb.solver import ChebyshevResult
from wcheb.weights import Restricted

one = Constant(1.0)


def _result(T, norm):
    return ChebyshevResult(T, norm, (), 0, True, 0.0)


def test_extremal_examples(unit_interval, unit_circle):
    E = extremal_points(Poly([0, 1]), one, unit_interval.sample(101))
    assert np.allclose(np.sort(E.points.real), [-1, 1])
    g = unit_circle.sample(64)
    E = extremal_points(Poly([0, 0, 1]), one, g)
    assert len(E) == 64
    E = extremal_points(Poly([-0.5, 0, 1]), one, unit_interval.sample(401))
    assert np.allclose(np.sort(E.points.real), [-1, 0, 1], atol=1e-8)
    assert E.norm == pytest.approx(0.5)


def test_extremal_refinement_off_grid(unit_interval):
    # peak of |x^2 - 0.3x - 0.5| inside (-1, 1) sits at x = 0.15
    P = Poly([-0.5, -0.3, 1])
    E = extremal_points(P, one, unit_interval.sample(40), tol_rel=1e-3)
    x = E.points.real
    assert np.min(np.abs(x - 0.15)) < 1e-7 or np.max(np.abs(P(E.points))) > np.abs(P(0.15))


def test_empty_norm(unit_interval):
    with pytest.raises(EmptyNorm):
        extremal_points(Poly([0, 1]), Restricted(one, [5.0]), unit_interval.sample(50))


def test_kolmogorov_line_balance():
    g = SampledSet([-1.0, 0.0, 1.0]).sample()
    E = extremal_points(Poly([0, 1]), one, g)
    cert = kolmogorov_check(Poly([0, 1]), E, 1e-10, g, one)
    assert isinstance(cert, RivlinShapiro)
    assert np.allclose(cert.multipliers, [0.5, 0.5])
    assert cert.residual <= 1e-12 and cert.primal_agrees


def test_kolmogorov_improvable_shift(unit_interval):
    P = Poly([-0.2, 1])
    g = unit_interval.sample(2001)
    E = extremal_points(P, one, g)
    cert = kolmogorov_check(P, E, 1e-8, g, one)
    assert isinstance(cert, Improvable)
    assert cert.decrease > 0
    Q = P + cert.step * cert.q
    x = g.points
    assert np.max(np.abs(Q(x))) < np.max(np.abs(P(x)))
    assert cert.primal_agrees


def test_kolmogorov_circle_uniform(unit_circle):
    g = unit_circle.sample(128)
    P = Poly([0, 0, 1])
    E = extremal_points(P, one, g)
    assert len(E) == 128
    cert = kolmogorov_check(P, E, 1e-8, g, one)
    assert isinstance(cert, RivlinShapiro)
    lam = np.full(128, 1 / 128)
    assert dual_residual(P, E.points, lam, 2) <= 1e-14
    rs = rivlin_shapiro_multipliers(P, E, 2, 1e-8)
    assert 3 <= rs.m <= 5
    assert np.all(rs.multipliers > 0)
    assert rs.multipliers.sum() == pytest.approx(1)


def test_rivlin_shapiro_t2(unit_interval):
    P = Poly([-0.5, 0, 1])
    E = extremal_points(P, one, unit_interval.sample(401))
    rs = rivlin_shapiro_multipliers(P, E, 2, 1e-10)
    order = np.argsort(rs.points.real)
    assert np.allclose(rs.points.real[order], [-1, 0, 1], atol=1e-8)
    # hand solution of lam_j sgn P(x_j) (1, x_j) = 0 with signs (+, -, +)
    A = np.array([[1, -1, 1], [-1, 0, 1], [1, 1, 1]], dtype=float)
    oracle = np.linalg.solve(A, [0, 0, 1])
    assert np.allclose(rs.multipliers[order], oracle, atol=1e-10)
    assert np.allclose(oracle, [0.25, 0.5, 0.25])


def test_rivlin_shapiro_t1(unit_interval):
    E = extremal_points(Poly([0, 1]), one, unit_interval.sample(101))
    assert rivlin_shapiro_multipliers(Poly([0, 1]), E, 1, 1e-10).m == 2


def test_alternation_examples(unit_interval):
    ch = alternation_verify(_result(Poly([0, 1]), 1.0), unit_interval, one)
    assert isinstance(ch, AlternationChain)
    assert np.allclose(ch.points, [-1, 1]) and list(ch.signs) == [-1, 1]
    ch = alternation_verify(_result(Poly([0, -0.75, 0, 1]), 0.25), unit_interval, one)
    assert np.allclose(ch.points, np.cos(np.pi * np.arange(3, -1, -1) / 3), atol=1e-8)
    assert list(ch.signs) == [-1, 1, -1, 1]
    w = AbsPolyPower.single(Poly([0, 1]))
    ch = alternation_verify(_result(Poly([0, 1]), 1.0), unit_interval, w)
    assert np.allclose(ch.points, [-1, 1])


def test_alternation_too_short(unit_interval):
    with pytest.raises(ChainTooShort):
        alternation_verify(_result(Poly([-0.2, 0, 1]), 1.0), unit_interval, one)


def test_equality_examples(unit_interval, unit_circle):
    chk = equality_case_check(unit_circle, one, _result(Poly([0, 0, 1]), 1.0))
    assert chk.equality and chk.zero_locations_ok and chk.ae_maximality_ok
    chk = equality_case_check(unit_interval, one, _result(Poly([-0.5, 0, 1]), 0.5))
    assert not chk.equality and not chk.ae_maximality_ok
    assert chk.W == pytest.approx(2) and chk.S == pytest.approx(1)
    P = Poly([0, -0.3, 1])
    w = Restricted(AbsPolyPower.single(P, -1), unit_circle)
    chk = equality_case_check(unit_circle, w, _result(P, 1.0))
    assert chk.equality and chk.W == pytest.approx(chk.S, rel=1e-9)


def test_duality_exclusive(two_intervals, rng):
    # on every instance the check returns exactly one kind and the other route agrees
    w = Pullback(two_intervals.p, AbsPolyPower.single(Poly([1.3, 0.4])))
    grid = two_intervals.sample(4000)
    for n in (1, 2, 3, 4):
        r = remez_real(two_intervals, w, n)
        E = extremal_points(r.T, w, grid)
        c = kolmogorov_check(r.T, E, 1e-8, grid, w)
        assert isinstance(c, RivlinShapiro) and c.residual <= 1e-8 and c.primal_agrees
        q = Poly(rng.normal(size=n))
        P = r.T + 1e-2 * q / np.abs(q.coeffs).max()
        E2 = extremal_points(P, w, grid)
        c2 = kolmogorov_check(P, E2, 1e-8, grid, w)
        assert isinstance(c2, Improvable) and c2.decrease > 0 and c2.primal_agrees


def test_real_equality_never(unit_interval, two_intervals):
    for K in (unit_interval, two_intervals):
        for w in (one, AbsPolyPower.single(Poly([1, 0, 1]))):
            r = remez_real(K, w, 3)
            assert not equality_case_check(K, w, r).equality


def test_certify_lawson(unit_circle):
    g = unit_circle.sample(512)
    for c in ([2, 0.5], [3, 1], [2, 1j]):
        w = AbsPolyPower.single(Poly(c))
        r = lawson_discrete(g, w, 3)
        cert, chain, E = certify(r, unit_circle, w, tol=1e-8, density=512)
        assert chain is None
        if isinstance(cert, Improvable):
            # the weighted L2 level is a lower bound for the optimum, so no
            # step can gain more than the gap Lawson reports
            gap = r.norm * r.residual / (1 + r.residual)
            assert 0 < cert.decrease <= gap * (1 + 1e-6)
        else:
            assert 4 <= cert.m <= 7


def test_certify_saturated(unit_circle):
    P = Poly([0, -0.3, 1])
    w = Restricted(AbsPolyPower.single(P, -1), unit_circle)
    r = lawson_discrete(unit_circle.sample(512), w, 2)
    cert, _, _ = certify(r, unit_circle, w, tol=1e-8)
    assert isinstance(cert, RivlinShapiro) and 3 <= cert.m <= 5
