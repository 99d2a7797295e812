"""Randomized structural properties."""

import random
from fractions import Fraction

from hypothesis import assume, given, strategies as st

from branchfold import charts as ch
from branchfold import covering as cov
from branchfold import fixtures as fx
from branchfold.complex import (Subcomplex, barycentric_subdivide, is_good_subcomplex,
                                open_complement_components)
from branchfold.perm import Permutation, PermGroup, coset_action, core

CLOSED = {
    "octa": fx.octahedron(),
    "sd-octa": fx.octahedron()._sd_step.complex,
    "s3": fx.sphere3(),
    "rp2": fx.projective_plane(),
    "tetra": fx.tetrahedron_boundary(),
}


def _sub(draw, c, max_dim_offset):
    cap = c.dim - max_dim_offset
    pool = [s for s in c.sorted_simplices if len(s) - 1 <= max(cap, 0)]
    chosen = draw(st.lists(st.sampled_from(pool), max_size=5, unique=True))
    return Subcomplex.closure(c, chosen)


@st.composite
def complex_and_sub(draw, max_dim_offset=2):
    c = CLOSED[draw(st.sampled_from(sorted(CLOSED)))]
    return c, _sub(draw, c, max_dim_offset)


@st.composite
def complex_and_two_subs(draw):
    c = CLOSED[draw(st.sampled_from(sorted(CLOSED)))]
    return c, _sub(draw, c, 2), _sub(draw, c, 2)


@given(complex_and_sub(max_dim_offset=1), st.randoms(use_true_random=False))
def test_goodness_passes_to_subcomplexes(data, rnd):
    c, s = data
    assume(is_good_subcomplex(c, s))
    keep = [t for t in s.simplices if rnd.random() < 0.5]
    assert is_good_subcomplex(c, Subcomplex.closure(c, keep))


@given(complex_and_two_subs())
def test_union_of_good_subcomplexes_is_good(data):
    c, s1, s2 = data
    assert is_good_subcomplex(c, s1) and is_good_subcomplex(c, s2)
    assert is_good_subcomplex(c, s1.union(s2))


@given(complex_and_sub())
def test_good_complement_is_connected(data):
    c, s = data
    assert is_good_subcomplex(c, s)
    assert len(open_complement_components(c, s)) == 1


@given(complex_and_sub(max_dim_offset=0))
def test_goodness_is_codimension_two_on_closed_pseudo_manifolds(data):
    c, s = data
    assert is_good_subcomplex(c, s) == (s.dim <= c.dim - 2)


@given(st.sampled_from(sorted(CLOSED)))
def test_subdivision_keeps_euler_characteristic(name):
    c = CLOSED[name]
    assert barycentric_subdivide(c).complex.euler_characteristic() == c.euler_characteristic()


@given(st.integers(0, 10_000))
def test_random_cocycles_round_trip(seed):
    mc = fx.random_cocycle(random.Random(seed))
    f = cov.fox_complete(mc)
    g = cov.fox_complete(cov.extract_cocycle(f))
    assert cov.is_isomorphic(f, g)
    chi, rh = cov.rh_check(f)
    assert chi == rh


perms4 = st.permutations(range(1, 5)).map(lambda p: Permutation(tuple(p)))
S4 = PermGroup.generate([Permutation((2, 1, 3, 4)), Permutation((2, 3, 4, 1))], 4)


@given(st.lists(perms4, min_size=1, max_size=2))
def test_core_is_the_coset_kernel(gens):
    h = PermGroup.generate(gens, 4)
    c = core(S4, h)
    assert c.is_subgroup_of(h) and c.is_normal_in(S4)
    assert coset_action(S4, h).kernel() == c
    assert coset_action(S4, h).index * h.order() == 24


@given(perms4, perms4)
def test_inverse_of_product(a, b):
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert S4.order() % (a * b).order() == 0


@given(st.integers(1, 6), st.integers(1, 6))
def test_disk_chart_invariants(h, k):
    c = ch.disk_chart(h, k)
    assert ch.chart_index(c) == Fraction(h, k)
    red = ch.reduce_chart(c)
    assert ch.chart_index(red.chart) == Fraction(h, k)
    assert red.chart.is_reduced()
