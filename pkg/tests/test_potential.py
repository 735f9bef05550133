import math

import numpy as np
import pytest

from wcheb.domains import Circle, IntervalUnion, Preimage, SampledSet
from wcheb.errors import (CapacityUnavailableExact, HarmonicMeasureUnavailable, PoleOnSet,
                          UnsupportedSet)
from wcheb.polynomials import Poly
from wcheb.potential import (Composed, capacity, eq_quadrature, green, green_pole,
                             harmonic_measure_rule, joukowski_exterior, leja_capacity,
                             log_weight_integral, poisson_integral, szego_integral,
                             szego_integral_info)
from wcheb.weights import AbsPolyPower, Constant, FunctionWeight, Pullback, Restricted

from oracles import log_abs_mean_oracle

SQ3 = math.sqrt(3)


# -- capacity -------------------------------------------------------------------


def test_capacity_exact(unit_interval, unit_circle, two_intervals):
    assert capacity(unit_interval) == 0.5
    assert capacity(unit_circle) == 1.0
    assert capacity(two_intervals) == pytest.approx(2**-0.5, rel=1e-15)
    assert capacity(Circle(1j, 3)) == 3.0


def test_capacity_leja_oracle(unit_interval, unit_circle, two_intervals):
    assert abs(leja_capacity(unit_interval, count=2000) - 0.5) < 5e-3
    assert abs(leja_capacity(unit_circle, count=500, density=4000) - 1.0) < 1e-2
    assert abs(leja_capacity(two_intervals, count=4000) - 2**-0.5) < 1e-3


def test_capacity_unavailable():
    K = IntervalUnion([(-2, -1), (1, 3)])
    with pytest.raises(CapacityUnavailableExact):
        capacity(K)
    assert 0.5 < capacity(K, exact=False) < 1.5
    with pytest.raises(CapacityUnavailableExact):
        capacity(SampledSet([0, 1, 2]))


# -- equilibrium measure ----------------------------------------------------------


def test_eq_quadrature_examples(unit_interval, unit_circle, two_intervals):
    r = eq_quadrature(unit_interval, 3)
    k = np.arange(1, 4)
    assert np.allclose(r.nodes, np.cos((2 * k - 1) * np.pi / 6))
    assert np.allclose(r.weights, 1 / 3)
    r = eq_quadrature(unit_circle, 4)
    assert np.allclose(r.nodes, [1, 1j, -1, -1j])
    assert np.allclose(r.weights, 0.25)
    r = eq_quadrature(two_intervals, 64)
    assert abs(r.integrate(lambda z: z**2) - 2) < 1e-10
    for rule in (r, eq_quadrature(unit_interval, 17)):
        assert abs(rule.weights.sum() - 1) < 1e-12 and np.all(rule.weights > 0)


def test_eq_quadrature_unsupported():
    with pytest.raises(UnsupportedSet):
        eq_quadrature(SampledSet([0, 1]), 8)


# -- Green functions ------------------------------------------------------------------


def test_green_examples(unit_interval, two_intervals):
    assert green(unit_interval, 2) == pytest.approx(math.log(2 + SQ3), rel=1e-14)
    assert green(unit_interval, 0.5) == 0
    assert green(two_intervals, 2) == pytest.approx(math.log(2 + SQ3) / 2, rel=1e-14)
    assert green(two_intervals, 1.5) == 0


@pytest.mark.parametrize("name", ["interval", "circle", "preimage"])
def test_green_against_energy_quadrature(name, unit_interval, unit_circle, two_intervals, rng):
    K = {"interval": unit_interval, "circle": unit_circle, "preimage": two_intervals}[name]
    rule = eq_quadrature(K, 2048)
    cap = capacity(K)
    for _ in range(10):
        z = complex(rng.uniform(-3, 3), rng.uniform(0.3, 3))
        g_quad = -math.log(cap) + float(np.sum(rule.weights * np.log(np.abs(z - rule.nodes))))
        assert abs(green(K, z) - g_quad) < 1e-6


def test_green_properties(unit_interval, unit_circle, two_intervals):
    for K in (unit_interval, unit_circle, two_intervals):
        pts = K.sample(1000).points
        assert np.all(green(K, pts) == 0)
        z = 1e6 * np.exp(1j * np.linspace(0, 2 * np.pi, 7))
        assert np.allclose(green(K, z) - np.log(np.abs(z)), -math.log(capacity(K)), atol=1e-5)
        zz = np.random.default_rng(1).normal(size=200) * 2 + 1j * np.random.default_rng(2).normal(size=200)
        assert np.all(green(K, zz) >= 0)


def test_joukowski_branch():
    v = joukowski_exterior(np.array([2.0, -2.0, 0.3j, 0.5]))
    assert np.all(np.abs(v) >= 1 - 1e-15)


def test_green_pole_examples(unit_circle, unit_interval, rng):
    a, z = 2.0, 3.0
    oracle = math.log(abs((1 - z * np.conj(a)) / (z - a)))
    assert green_pole(unit_circle, z, a) == pytest.approx(oracle, abs=1e-10)
    assert oracle == pytest.approx(math.log(5))
    assert green_pole(unit_circle, 0.3 + 0.2j, 2.0) == 0
    with pytest.raises(PoleOnSet):
        green_pole(unit_circle, 3.0, 0.5)
    # exterior-disk oracle on random pairs and symmetry on the interval
    for _ in range(5):
        a = complex(*rng.uniform(-2, 2, 2)) * 1.5
        z = complex(*rng.uniform(-2, 2, 2)) * 1.5
        if abs(a) < 1.1 or abs(z) < 1.1:
            continue
        ex = math.log(abs((1 - z * np.conj(a)) / (z - a)))
        assert abs(green_pole(unit_circle, z, a) - ex) < 1e-8
    for _ in range(5):
        a = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2))
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, -0.2))
        assert abs(green_pole(unit_interval, z, a) - green_pole(unit_interval, a, z)) < 1e-6


# -- Poisson integrals --------------------------------------------------------------


def test_poisson_probability(unit_interval, unit_circle):
    for K, z in ((unit_interval, 1.5j), (unit_circle, 2 - 1j), (unit_interval, math.inf)):
        assert abs(poisson_integral(K, lambda x: np.ones(np.shape(x)), z) - 1) < 1e-12


def test_poisson_closed_forms(unit_interval, unit_circle):
    for z in (2.0, 0.3 + 0.8j, -1.5 - 2j):
        v = complex(joukowski_exterior(z))
        assert abs(poisson_integral(unit_interval, lambda x: x.real, z) - (1 / v).real) < 1e-10
        assert abs(poisson_integral(unit_interval, lambda x: np.abs(x) ** 2, z)
                   - (0.5 + 0.5 * (v**-2).real)) < 1e-10
    for z in (2.0, 1.2j, -3 + 1j):
        assert abs(poisson_integral(unit_circle, lambda x: x.real, z) - (1 / z).real) < 1e-10


def test_poisson_preimage_pushdown(two_intervals):
    p = two_intervals.p
    for h in (lambda s: s.real, lambda s: np.abs(s) ** 2):
        for z in (0.4j, 2.5, -0.3 + 1.1j):
            lhs = poisson_integral(two_intervals, Composed(h, p), z)
            rhs = poisson_integral(two_intervals.base, h, p(z))
            v = complex(joukowski_exterior(p(z)))
            assert abs(lhs - rhs) < 1e-8
            if h(np.array([2.0]))[0] == 2.0:
                assert abs(lhs - (1 / v).real) < 1e-10
    with pytest.raises(HarmonicMeasureUnavailable):
        poisson_integral(two_intervals, lambda x: x.real, 3.0)
    with pytest.raises(HarmonicMeasureUnavailable):
        harmonic_measure_rule(IntervalUnion([(-2, -1), (1, 2)]), 3.0)


def test_poisson_log_szego(unit_interval):
    w = AbsPolyPower.single(Poly([1, 0, 1]))
    lhs = poisson_integral(unit_interval, lambda x: np.log(w(x)), math.inf)
    assert abs(lhs - math.log(szego_integral(unit_interval, w))) < 1e-8


# -- Szego integrals -------------------------------------------------------------------


def test_szego_examples(unit_interval):
    assert szego_integral(unit_interval, AbsPolyPower.single(Poly([0, 1]))) == pytest.approx(0.5, abs=1e-15)
    assert szego_integral(unit_interval, Constant(3.0)) == pytest.approx(3.0, rel=1e-15)
    w = AbsPolyPower.single(Poly([1, 0, 1]))
    assert szego_integral(unit_interval, w) == pytest.approx(((1 + math.sqrt(2)) / 2) ** 2, rel=1e-14)
    fw = FunctionWeight(lambda z: 1 + z.real**2, "1+x^2")
    assert abs(szego_integral(unit_interval, fw) - ((1 + math.sqrt(2)) / 2) ** 2) < 1e-8


def test_szego_non_szego(unit_interval):
    info = szego_integral_info(unit_interval, Restricted(Constant(1), [0.0]))
    assert info.value == 0 and not info.stable
    with pytest.raises(UnsupportedSet):
        szego_integral(IntervalUnion([(-2, -1), (1, 2)]), Constant(1))


@pytest.mark.parametrize("name", ["interval", "circle", "preimage"])
def test_special_weight_identity_against_oracle(name, unit_interval, unit_circle, two_intervals):
    K = {"interval": unit_interval, "circle": unit_circle, "preimage": two_intervals}[name]
    z0s = {"interval": [0.3, -1.0, 0.25j, 2.0, -0.7 + 0.4j],
           "circle": [0.0, 0.5j, 1.0, np.exp(0.7j), 2 - 1j],
           "preimage": [1.5, -SQ3, 0.0, 0.2j, 2.5 + 1j]}[name]
    for z0 in z0s:
        w = AbsPolyPower.single(Poly([-z0, 1]))
        S = szego_integral(K, w)
        assert abs(S - math.exp(green(K, z0)) * capacity(K)) < 1e-12
        assert abs(math.log(S) - log_abs_mean_oracle(K, complex(z0))) < 1e-8


def test_multiplicativity(unit_interval, two_intervals):
    f = Poly([1, 0, 1])
    g = Poly([0.25, 0.3, 1])
    for K in (unit_interval, two_intervals):
        for a, b in ((1.0, 1.0), (0.5, -1.5), (2.0, 0.3)):
            prod = FunctionWeight(lambda z, a=a, b=b: np.abs(f(z)) ** a * np.abs(g(z)) ** b, "fg")
            lhs = szego_integral(K, prod)
            rhs = szego_integral(K, AbsPolyPower.single(f)) ** a * szego_integral(K, AbsPolyPower.single(g)) ** b
            assert abs(lhs - rhs) < 1e-8 * max(1, rhs)


def test_pullback_szego(two_intervals, unit_interval):
    base = AbsPolyPower.single(Poly([1, 0, 1]))
    S_K = szego_integral(two_intervals, Pullback(two_intervals.p, base))
    assert S_K == pytest.approx(szego_integral(unit_interval, base), rel=1e-14)
    fw = FunctionWeight(lambda z: 1 + two_intervals.p(z).real ** 2, "pulled")
    assert abs(szego_integral(two_intervals, fw) - S_K) < 1e-8


def test_log_weight_integral_finite_z(unit_interval):
    w = AbsPolyPower.single(Poly([1, 0, 1]))
    z = 1.5 + 0.5j
    v, err, _ = log_weight_integral(unit_interval, w, z)
    q = poisson_integral(unit_interval, lambda x: np.log(w(x)), z)
    assert abs(v - q) < 1e-8 and err < 1e-8
