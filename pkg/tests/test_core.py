import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from repkernels.core import (
    ANNULUS,
    BALL2,
    DISC,
    HALFPLANE,
    QUARTERPLANE,
    Domain,
    DomainError,
    Point,
    as_point,
    boundary_distance,
    integrate,
    make_area_quadrature,
    make_boundary_quadrature,
    sample_interior,
)

ALL = (DISC, ANNULUS, HALFPLANE, QUARTERPLANE, BALL2)
finite = st.floats(-3, 3, allow_nan=False)


# points -------------------------------------------------------------------

def test_point_dimensions():
    assert Point((1 + 2j,)).dim == 1
    assert Point((1, 2j)).dim == 2
    with pytest.raises(ValueError):
        Point(())
    with pytest.raises(ValueError):
        Point((1, 2, 3))


def test_point_rejects_non_finite():
    with pytest.raises(ValueError):
        Point((complex(math.nan, 0),))
    with pytest.raises(ValueError):
        Point((0, complex(0, math.inf)))


def test_point_is_immutable():
    p = Point((1j,))
    with pytest.raises(Exception):
        p.coords = (2j,)


def test_point_pairs_round_trip():
    p = Point.from_pairs([(0.1, -0.2), (0.3, 0.4)])
    assert p.pairs() == [(0.1, -0.2), (0.3, 0.4)]
    assert as_point(p) is p
    assert as_point(0.5).coords == (0.5 + 0j,)
    assert as_point(np.array([0.1, 0.2j])).dim == 2


# domains ------------------------------------------------------------------

@pytest.mark.parametrize("dom,z,inside", [
    (DISC, 0.99, True), (DISC, 1.0, False),
    (ANNULUS, 1.5j, True), (ANNULUS, 1.0, False), (ANNULUS, 0.5, False), (ANNULUS, 2.0, False),
    (HALFPLANE, 1e-9j, True), (HALFPLANE, 3.0, False),
    (QUARTERPLANE, 1 + 1j, True), (QUARTERPLANE, -1 + 1j, False),
    (BALL2, (0.6, 0.6j), True), (BALL2, (0.8, 0.6), False),
])
def test_contains(dom, z, inside):
    assert dom.contains(z) is inside


@pytest.mark.parametrize("dom,z,d", [
    (DISC, 0.9, 0.1), (QUARTERPLANE, 0.25 + 0.25j, 0.25), (ANNULUS, 1.25, 0.25),
    (HALFPLANE, 3 + 0.5j, 0.5), (BALL2, (0.3, 0.4j), 0.5),
])
def test_boundary_distance_examples(dom, z, d):
    assert boundary_distance(dom, z) == pytest.approx(d, abs=1e-15)


def test_boundary_distance_outside_raises():
    with pytest.raises(DomainError):
        boundary_distance(DISC, 1.5)
    with pytest.raises(DomainError):
        boundary_distance(QUARTERPLANE, -1 - 1j)


@given(finite, finite)
def test_distance_positive_iff_inside(x, y):
    for dom in (DISC, ANNULUS, HALFPLANE, QUARTERPLANE):
        z = complex(x, y)
        try:
            d = dom.boundary_distance(z)
        except DomainError:
            assert not dom.contains(z)
            continue
        assert (d > 0) == dom.contains(z)


def test_distance_monotone_along_ray():
    r = 1 - 2.0 ** -np.arange(1, 20)
    d = [DISC.boundary_distance(x * np.exp(0.3j)) for x in r]
    assert np.all(np.diff(d) < 0) and d[-1] < 1e-5


def test_unknown_tag():
    with pytest.raises(ValueError):
        Domain("square")


def test_dimension_mismatch():
    with pytest.raises(DomainError):
        DISC.contains((0.1, 0.1))


@pytest.mark.parametrize("dom", ALL)
def test_sample_interior_inside(dom, rng):
    pts = sample_interior(dom, rng, 200, margin=0.01)
    for p in pts:
        assert dom.boundary_distance(p) >= 0.01 - 1e-12


# quadrature ---------------------------------------------------------------

def test_area_rule_weight_sums():
    assert abs(np.sum(make_area_quadrature(DISC, 32, 128).weights) - math.pi) <= 1e-12
    assert abs(np.sum(make_area_quadrature(ANNULUS, 32, 128).weights) - 3 * math.pi) <= 1e-12


def test_area_rule_moments():
    rule = make_area_quadrature(DISC, 32, 128)
    assert abs(integrate(rule, lambda z: np.abs(z) ** 2) - math.pi / 2) <= 1e-12
    assert abs(integrate(rule, lambda z: z ** 2 * np.conj(z) ** 2) - math.pi / 3) <= 1e-12
    assert abs(integrate(rule, lambda z: np.ones_like(z)) - math.pi) <= 1e-12


def test_area_rule_rejects_unbounded():
    with pytest.raises(DomainError, match="no area rule for this domain"):
        make_area_quadrature(HALFPLANE)
    with pytest.raises(ValueError):
        make_area_quadrature(DISC, 1, 128)


def test_circle_rule():
    rule = make_boundary_quadrature(DISC, 256)
    assert np.sum(rule.weights) == pytest.approx(2 * math.pi, abs=1e-13)
    assert abs(integrate(rule, lambda z: z)) <= 1e-14
    assert abs(integrate(rule, lambda z: z * np.conj(z)) - 2 * math.pi) <= 1e-13
    assert rule.measure == "arc" and len(rule) == 256


@pytest.mark.parametrize("m", [1, 2, 7, 100, 255, -1, -255])
def test_circle_rule_kills_nonzero_modes(m):
    rule = make_boundary_quadrature(DISC, 256)
    assert abs(integrate(rule, lambda z: z ** m)) <= 1e-12


def test_sphere_rule():
    rule = make_boundary_quadrature(BALL2, 32)
    assert abs(np.sum(rule.weights) - 2 * math.pi ** 2) <= 1e-10
    assert rule.nodes.shape == (32 ** 3, 2)
    assert np.allclose(np.linalg.norm(rule.nodes, axis=1), 1.0, atol=1e-15)
    # |zeta_1|^2 integrates to half the area
    assert abs(integrate(rule, lambda z: np.abs(z[:, 0]) ** 2) - math.pi ** 2) <= 1e-10


def test_boundary_rule_unsupported():
    with pytest.raises(DomainError):
        make_boundary_quadrature(ANNULUS)


def test_rules_are_read_only():
    rule = make_area_quadrature(DISC, 4, 8)
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0
    assert rule.weight_sum_error() <= rule.tolerance


def test_integrate_names_bad_node():
    rule = make_boundary_quadrature(DISC, 16)
    bad = lambda z: np.where(np.arange(z.size) == 5, np.nan, 1.0)
    with pytest.raises(ValueError, match="node 5"):
        integrate(rule, bad)


def test_integrate_pointwise_mode():
    rule = make_boundary_quadrature(DISC, 16)
    val = integrate(rule, lambda p: p.z * p.z.conjugate(), vectorized=False)
    assert val == pytest.approx(2 * math.pi)
