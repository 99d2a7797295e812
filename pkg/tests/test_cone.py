import math
import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from branchfold.cone import (INFINITE, AngleModel, ConeAngle, ConeParams, Irrational,
                             RadiusBoundWarning, angle_of_model, cone_distance, distance,
                             local_holonomy_order, model_of_angle, rational_conifold_verdict,
                             rational_turns)
from branchfold.errors import ParamOutOfRange

# the sampled radii are inside pi/sqrt(k); the stricter bound has its own test
pytestmark = pytest.mark.filterwarnings("ignore::branchfold.cone.RadiusBoundWarning")


# -- independent oracle: embed the two points in the model space -----------------

def embedded_distance(k, t1, t2, theta):
    theta = min(theta, math.pi)
    if k == 0:
        ax, ay = t1, 0.0
        bx, by = t2 * math.cos(theta), t2 * math.sin(theta)
        return math.hypot(ax - bx, ay - by)
    R = 1 / math.sqrt(abs(k))
    if k > 0:
        def point(t, phi):
            a = t / R
            return (R * math.sin(a) * math.cos(phi), R * math.sin(a) * math.sin(phi), R * math.cos(a))
        p, q = point(t1, 0.0), point(t2, theta)
        cross = (p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0])
        dot = sum(x * y for x, y in zip(p, q))
        return R * math.atan2(math.sqrt(sum(c * c for c in cross)), dot)

    def hpoint(t, phi):
        a = t / R
        return (R * math.cosh(a), R * math.sinh(a) * math.cos(phi), R * math.sinh(a) * math.sin(phi))
    p, q = hpoint(t1, 0.0), hpoint(t2, theta)
    mink = p[0] * q[0] - p[1] * q[1] - p[2] * q[2]
    return R * math.acosh(max(mink / (R * R), 1.0))


legs = st.floats(0, 1.5, allow_nan=False)
angles = st.floats(0, 4.0, allow_nan=False)


@given(st.sampled_from([-4.0, -1.0, -0.25, 0.0, 0.3, 1.0]), legs, legs, angles)
def test_distance_matches_embedding(k, t1, t2, theta):
    got = distance(k, t1, t2, theta, r=1.55)
    assert got == pytest.approx(embedded_distance(k, t1, t2, theta), abs=1e-7)


def test_known_values():
    assert distance(0, 3, 4, math.pi / 2) == pytest.approx(5.0)
    assert distance(0, 1, 2, 10.0) == pytest.approx(3.0)      # link distance capped at pi
    assert distance(1, math.pi / 2, math.pi / 2, math.pi / 2, r=math.pi) == pytest.approx(math.pi / 2)
    assert distance(-1, 1, 1, 0) == pytest.approx(0.0, abs=1e-7)


@pytest.mark.parametrize("eps", [1e-6, -1e-6])
def test_continuity_at_zero_curvature(eps):
    rng = random.Random(7)
    for _ in range(200):
        t1, t2, th = rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, math.pi)
        assert abs(distance(eps, t1, t2, th, r=3) - distance(0, t1, t2, th, r=3)) < 1e-4


@pytest.mark.parametrize("k", [-1.0, 0.0, 0.5])
def test_triangle_inequality_on_cone_points(k):
    rng = random.Random(11)

    def link(a, b):
        d = abs(a - b) % (2 * math.pi)
        return min(d, 2 * math.pi - d)

    for _ in range(10_000 // 3):
        pts = [(rng.uniform(0, 1.5), rng.uniform(0, 2 * math.pi)) for _ in range(3)]
        (s1, a1), (s2, a2), (s3, a3) = pts
        d12 = distance(k, s1, s2, link(a1, a2), r=1.6)
        d23 = distance(k, s2, s3, link(a2, a3), r=1.6)
        d13 = distance(k, s1, s3, link(a1, a3), r=1.6)
        assert d13 <= d12 + d23 + 1e-9


@pytest.mark.parametrize("k", [-2.0, 0.0, 0.7])
def test_monotone_in_link_distance(k):
    ths = [i * math.pi / 50 for i in range(51)]
    ds = [distance(k, 0.8, 1.1, th, r=1.5) for th in ths]
    assert all(a <= b + 1e-12 for a, b in zip(ds, ds[1:]))
    assert ds[-1] == pytest.approx(1.9)


def test_parameter_validation():
    with pytest.raises(ParamOutOfRange):
        ConeParams(0, -1, 0, 0, 0)
    with pytest.raises(ParamOutOfRange):
        ConeParams(0, 1, 0, 1.0, 0)          # legs must be shorter than r
    with pytest.raises(ParamOutOfRange):
        ConeParams(0, 1, -0.1, 0, 0)
    with pytest.raises(ParamOutOfRange):
        ConeParams(1, 4, 0, 0, 0)            # beyond pi / sqrt(k)
    with pytest.raises(ParamOutOfRange):
        ConeParams(math.nan, 1, 0, 0, 0)


def test_radius_bound_warning_and_literal_flag():
    with pytest.warns(RadiusBoundWarning):
        ConeParams(1, 2, 0, 0, 0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ConeParams(1, 0.5, 0, 0, 0)
    with pytest.raises(ParamOutOfRange):
        ConeParams(1, 2, 0, 0, 0, literal_bound=True)
    assert cone_distance(ConeParams(1, 0.5, 1, 0.1, 0.2, literal_bound=True)) > 0


# -- angles ---------------------------------------------------------------------

@pytest.mark.parametrize("text,model,order", [
    ("1/3 tau", AngleModel(3, 1), 3),
    ("2/3 tau", AngleModel(3, 2), 3),
    ("1 tau", AngleModel(1, 1), 1),
    ("1/7 tau", AngleModel(7, 1), 7),
    ("6/4 tau", AngleModel(2, 3), 2),
])
def test_angle_table(text, model, order):
    a = ConeAngle.parse(text)
    assert model_of_angle(a) == model
    assert local_holonomy_order(a) == order


def test_round_trip_with_models():
    for h in range(1, 9):
        for k in range(1, 9):
            if math.gcd(h, k) == 1:
                assert model_of_angle(angle_of_model(h, k)) == AngleModel(h, k)


def test_float_angles():
    assert rational_turns(2 * math.pi / 3) == Fraction(1, 3)
    assert model_of_angle(ConeAngle(radians=4 * math.pi / 5)) == AngleModel(5, 2)
    irr = ConeAngle(radians=math.sqrt(2) * math.pi)
    assert model_of_angle(irr) == Irrational()
    assert local_holonomy_order(irr) == INFINITE


def test_angle_errors():
    for bad in ("-1/3 tau", "0 tau", "abc", "-2.0"):
        with pytest.raises(ParamOutOfRange):
            ConeAngle.parse(bad)
    with pytest.raises(ParamOutOfRange):
        angle_of_model(4, 2)


def test_conifold_verdict():
    table = [ConeAngle.parse(t) for t in ("1/3 tau", "2/3 tau", "1 tau", "1/7 tau")]
    assert rational_conifold_verdict(table).rational
    v = rational_conifold_verdict(table + [ConeAngle(radians=math.sqrt(2) * math.pi)])
    assert not v.rational and v.entries[-1][2] == INFINITE


def test_angle_str():
    assert str(ConeAngle.parse("2/4 tau")) == "1/2 tau"
    assert str(ConeAngle.of_turns(2)) == "2 tau"
