import random
from fractions import Fraction

import pytest

from branchfold import charts as ch
from branchfold import covering as cov
from branchfold import fixtures as fx
from branchfold.complex import cone
from branchfold.errors import (NotCodimTwo, NotConical, NotEquivalent, NotLiftable,
                               OrientationViolation)
from branchfold.perm import Permutation, PermGroup

P = Permutation.parse


@pytest.fixture(scope="module")
def c32():
    return ch.disk_chart(3, 2)


@pytest.fixture(scope="module")
def c64():
    return ch.disk_chart(6, 4)


@pytest.fixture(scope="module")
def fig2():
    return ch.fig2_chart()


@pytest.fixture(scope="module")
def fig3():
    return ch.fig3_chart()


# -- validation ---------------------------------------------------------------

def test_disk_chart_is_valid(c32):
    rep = ch.validate_chart(c32)
    assert rep.valid, rep.failures()
    assert c32.G.order() == 6 and c32.G.is_cyclic()
    assert len(c32.P.simplices_of_dim(2)) == 12


def test_fig2_chart_is_valid(fig2):
    rep = ch.validate_chart(fig2)
    assert rep.valid, rep.failures()
    assert fig2.G.order() == 4 and not fig2.G.is_cyclic()
    assert fig2.H.order() == fig2.K.order() == 2


def test_non_normal_k_is_reported():
    octa = fx.octahedron()
    rot = P("(1 3 5)(2 4 6)", 7)
    half = P("(1 4)(2 3)(5 6)", 7)
    bad = ch.Chart.make(cone(octa, 7), [rot, half], [rot], [half], apex=7)
    rep = ch.validate_chart(bad)
    assert not rep.valid and not rep["k_normal_in_g"]


def test_orientation_reversing_k_quotient_is_reported():
    # K a reflection of the disk: V is a half-disk, and the rotation part of G
    # does not descend to an orientation preserving map unless it commutes
    disk = fx.disk(4)
    refl = P("(2 4)", 5)
    rot = fx.rotation_perm(4, 2)
    c = ch.Chart.make(disk, [rot, refl], [rot], [refl], apex=5)
    rep = ch.validate_chart(c)
    assert not rep.valid


# -- index, restriction, reduction ---------------------------------------------

def test_indices(c32):
    assert ch.chart_index(c32) == Fraction(3, 2)
    assert ch.chart_index(ch.disk_chart(5, 1)) == 5
    assert ch.chart_index(ch.disk_chart(1, 4)) == Fraction(1, 4)


def test_index_needs_conical_chart():
    c = ch.disk_chart(3, 2)
    flat = ch.Chart(c.P, c.G, c.H, c.K, None)
    with pytest.raises(NotConical):
        ch.chart_index(flat)


def test_fig2_restriction_on_vertical_axis(fig2):
    mid = fig2.P._sd_step.barycenter[(5, 7)]
    for x, level in ((5, 0), (mid, 1)):
        r = ch.conical_restriction(fig2, x, level)
        assert r.G.is_trivial()
        stab = ch.point_stabilizer(fig2, x, level)
        assert stab.order() == 2 and P("(1 2)(3 4)", 7) in stab


def test_restriction_at_apex_is_the_chart(c32):
    r = ch.conical_restriction(c32, c32.apex)
    assert ch.chart_isomorphism(r, c32) is not None


def test_restriction_at_free_vertex_is_trivial(c32):
    r = ch.conical_restriction(c32, 1)
    assert r.G.is_trivial() and r.H.is_trivial() and r.K.is_trivial()


def test_reduce_six_four(c64, c32):
    red = ch.reduce_chart(c64)
    assert red.N.order() == 2
    assert red.chart.is_reduced()
    assert ch.chart_isomorphism(red.chart, c32) is not None
    assert cov.analyze(red.projection).degree == 2


def test_reduce_reduced_and_orbifold(c32):
    red = ch.reduce_chart(c32)
    assert red.N.is_trivial() and red.chart is c32
    orb = ch.disk_chart(5, 1)
    assert ch.reduce_chart(orb).chart is orb


def test_reduction_is_idempotent_and_keeps_index():
    for h, k in [(6, 4), (4, 2), (3, 2), (2, 2), (4, 4)]:
        c = ch.disk_chart(h, k)
        red = ch.reduce_chart(c).chart
        assert red.is_reduced()
        assert ch.reduce_chart(red).N.is_trivial()
        assert ch.chart_index(red) == ch.chart_index(c)


# -- domination and equivalence ------------------------------------------------

def test_dominates(c64, c32):
    d = ch.dominates(c64, c32)
    assert d is not None and d.N.order() == 2
    d = ch.dominates(c32, c32)
    assert d is not None and d.N.is_trivial()
    assert ch.dominates(c32, ch.disk_chart(2, 3)) is None


def test_domination_preserves_index(c64, c32):
    d = ch.dominates(c64, c32)
    assert Fraction(c64.H.order() // d.N.order(), c64.K.order() // d.N.order()) == c32.index()


def test_equivalence_examples(c64, c32, fig3):
    assert ch.charts_equivalent(c64, c32)
    assert not ch.charts_equivalent(c32, ch.disk_chart(3, 1))
    rng = random.Random(3)
    verts = list(fig3.P.vertices)
    shuffled = verts[:]
    rng.shuffle(shuffled)
    assert ch.charts_equivalent(fig3, fig3.relabel(dict(zip(verts, shuffled))))


def test_isomorphism_requires_matching_subgroups(c32):
    assert ch.chart_isomorphism(c32, ch.disk_chart(2, 3)) is None


# -- common domination --------------------------------------------------------

def test_common_dominating_chart(c64):
    c128 = ch.disk_chart(12, 8)
    cd = ch.common_dominating_chart(c64, c128)
    assert ch.validate_chart(cd.chart).valid
    assert cd.over_first is not None and cd.over_second is not None
    assert ch.dominates(cd.chart, c64) is not None and ch.dominates(cd.chart, c128) is not None


def test_common_dominating_chart_of_identical_inputs(c32):
    assert ch.common_dominating_chart(c32, c32).chart is c32


def test_common_dominating_chart_rejects_inequivalent(c32):
    with pytest.raises(NotEquivalent):
        ch.common_dominating_chart(c32, ch.disk_chart(3, 1))


# -- local models -------------------------------------------------------------

def test_classify_codim2(c32, c64, fig2, fig3):
    assert ch.classify_codim2(c32) == ch.CodimTwoModel(3, 2)
    assert ch.classify_codim2(c64) == ch.CodimTwoModel(3, 2)
    assert ch.classify_codim2(ch.disk_chart(1, 1)) == ch.CodimTwoModel(1, 1)
    for bad in (fig2, fig3):
        with pytest.raises(NotCodimTwo):
            ch.classify_codim2(bad)


def test_fig3_chart_shape(fig3):
    assert fig3.G.order() == 6 and fig3.K == fig3.G and fig3.H.order() == 2
    assert ch.chart_index(fig3) == Fraction(1, 3)


def test_classify_kind(c32, fig3):
    assert ch.classify_kind([ch.disk_chart(2, 1), ch.disk_chart(5, 1)]) == "orbifold"
    assert ch.classify_kind([fig3]) == "pure"
    assert ch.classify_kind([c32]) == "mixed"


def test_fig2_stratification(fig2):
    st = ch.stratify_chart(fig2)
    arcs = st.components_of_dim(1)
    points = st.components_of_dim(0)
    assert len(points) == 1 and len(arcs) == 3
    assert sorted(a.hk for a in arcs) == [(1, 2), (2, 1), (2, 1)]
    assert sorted(a.label for a in arcs) == ["1/2", "2", "2"]
    # the three arcs meet at the image of the centre
    centre = next(iter(points[0].simplices))
    for a in arcs:
        assert any(set(centre) < set(s) for s in a.simplices)
    assert [lv.dim for lv in st.levels] == [0, 1]


def test_nonsingular_stratification():
    st = ch.stratify_chart(ch.disk_chart(1, 1))
    assert not st.components and not st.singular.simplices


def test_product_stratification(c32):
    pc = ch.product_chart(c32)
    assert ch.validate_chart(pc, analyze_maps=False).valid
    comps = ch.stratify_chart(pc).components
    assert len(comps) == 1 and comps[0].dim == 1 and comps[0].hk == (3, 2)


@pytest.mark.parametrize("h,k,order", [(2, 1, 2), (3, 2, 3), (5, 3, 5), (1, 4, 1)])
def test_local_characteristic(h, k, order):
    c = ch.disk_chart(h, k)
    lc = ch.local_characteristic(c)
    assert lc.image_order == order
    assert c.H.order() % lc.image_order == 0


def test_local_characteristic_pure_chart(fig3):
    lc = ch.local_characteristic(ch.disk_chart(2, 4))
    assert lc.image_order == 1


# -- lifting and quotients ----------------------------------------------------

def test_lift_through_identity(c32):
    assert ch.lift_chart(cov.identity_covering(c32.U), c32).chart is c32


@pytest.mark.parametrize("h,expected", [(2, 1), (4, 2)])
def test_lift_through_pole_cover(h, expected):
    c = ch.disk_chart(h, 1)
    f = fx.cyclic_cover_at(c.U, c.p_H.vertex_map[c.apex_level], 2)
    lifted = ch.lift_chart(f, c).chart
    assert ch.validate_chart(lifted, analyze_maps=False).valid
    assert lifted.H.order() // ch.reduce_chart(lifted).N.order() == expected
    assert ch.chart_index(lifted) == expected
    # index numerator divides original numerator times the local degree
    assert (h * 2) % ch.chart_index(lifted).numerator == 0


def test_quotient_by_trivial_group(c32):
    q = ch.quotient_chart(c32, [])
    assert q.G == c32.G and q.H == c32.H and q.K == c32.K


@pytest.mark.parametrize("h,k,expected", [(1, 1, (3, 1)), (1, 2, (3, 2))])
def test_quotient_chart_creates_singularity(h, k, expected):
    c = ch.disk_chart(h, k, rim=6)
    q = ch.quotient_chart(c, [fx.rotation_perm(6, 2)])
    assert ch.validate_chart(q).valid
    assert ch.classify_codim2(q) == ch.CodimTwoModel(*expected)


def test_quotient_chart_errors(fig2):
    with pytest.raises(NotLiftable):
        ch.quotient_chart(fig2, [P("(3 5 4 6)", 7)])
    c = ch.disk_chart(1, 1, rim=6)
    with pytest.raises(OrientationViolation):
        ch.quotient_chart(c, [P("(2 6)(3 5)", 7)])
    with pytest.raises(NotLiftable):
        ch.quotient_chart(c, [P("(1 7)", 7)])
