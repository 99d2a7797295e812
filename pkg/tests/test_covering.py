import random

import pytest
from sympy.combinatorics import Permutation as SymPerm
from sympy.combinatorics import PermutationGroup as SymGroup

from branchfold import covering as cov
from branchfold import fixtures as fx
from branchfold.complex import barycentric_subdivide, disjoint_union, is_good_subcomplex
from branchfold.errors import CocycleInvalid, NeitherRegular
from branchfold.perm import Permutation

P = Permutation.parse


def fig3():
    return cov.fox_complete(fx.fig3_cocycle())


def pole(sheets=2, perm="(1 2)"):
    return cov.fox_complete(fx.pole_cocycle(sheets, perm))


def east_west():
    return cov.fox_complete(fx.east_west_cocycle())


def original_points(f, base0):
    """Branch vertices of ``f`` named by the vertex of ``base0`` they subdivide."""
    k = cov._subdivision_gap(f.base, base0)
    prov = barycentric_subdivide(base0, k).provenance if k else {v: (v,) for v in base0.vertices}
    out = set()
    for v in f.branch_set.vertices:
        s = prov[v]
        assert len(s) == 1, "branch vertex is not an original vertex"
        out.add(s[0])
    return out


def sym_group(perms):
    n = perms[0].degree
    return SymGroup([SymPerm([p(i) - 1 for i in range(1, n + 1)]) for p in perms])


# -- construction and analysis ------------------------------------------------

def test_pole_cover():
    f = pole()
    rep = cov.analyze(f)
    assert rep.is_branched_covering and rep.degree == 2
    assert rep.euler_total == 2
    assert len(rep.branch_set.vertices) == 2
    assert sorted(rep.local_degrees[v] for v in rep.singular_set.vertices) == [2, 2]
    assert cov.rh_check(f) == (2, 2)


def test_fig3_cover_counts():
    f = fig3()
    rep = cov.analyze(f)
    assert rep.degree == 3 and rep.connected and rep.euler_total == 2
    assert len(rep.singular_set.vertices) == 3
    assert len(rep.pseudo_singular_set.vertices) == 2
    assert cov.rh_check(f) == (2, 2)
    assert max(rep.local_degrees.values()) == 3


def test_fig3_local_monodromies_up_to_conjugation():
    mc = cov.extract_cocycle(fig3())
    cycle_types = sorted(
        tuple(sorted(len(c) for c in g.generators[0].cycles()))
        for g in (cov.local_monodromy_group(mc, (v,)) for v in mc.branch.vertices)
        if not g.is_trivial())
    assert cycle_types == [(2,), (2,), (3,)]


def test_identity_covering():
    o = fx.octahedron()
    f = cov.fox_complete(fx.identity_cocycle(o))
    rep = cov.analyze(f)
    assert rep.degree == 1 and not rep.singular_set.simplices and not rep.branch_set.simplices
    assert all(d == 1 for d in rep.local_degrees.values())
    assert cov.rh_check(f) == (2, 2)
    assert all(p.is_identity() for p in cov.extract_cocycle(f).transitions.values())


def test_inconsistent_cocycle_rejected():
    with pytest.raises(CocycleInvalid):
        cov.fox_complete(fx.cut_cocycle(fx.octahedron(), [((5, 1), P("(1 2)", 2))], [5], 2))


def test_goodness_of_singular_and_branch_sets():
    for f in (pole(), fig3(), east_west()):
        assert is_good_subcomplex(f.total, f.singular_set)
        assert is_good_subcomplex(f.total, f.branch_preimage)
        assert is_good_subcomplex(f.base, f.branch_set)
        assert {f.vertex_map[v] for v in f.total.vertices} == set(f.base.vertices)


# -- composition --------------------------------------------------------------

def composed_pole_covers():
    f = pole()
    north = next(v for v, w in f.vertex_map.items() if w == 5)
    south = next(v for v, w in f.vertex_map.items() if w == 6)
    g = fx.two_point_cover(f.total, north, south)
    return g, f, cov.compose(g, f)


def test_compose_two_pole_covers():
    g, f, h = composed_pole_covers()
    assert h.degree == 4
    rep = cov.analyze(h)
    assert rep.is_branched_covering
    # Riemann-Hurwitz: two fully branched points
    assert rep.euler_total == 4 * 2 - 2 * 3 == cov.rh_check(h)[1]


def test_composition_laws():
    g, f, h = composed_pole_covers()
    # h = f o g : total(g) -> total(f) -> octahedron
    g2, f2 = cov.align(g, f)
    s_expected = set(g2.singular_set.vertices) | {v for v, w in g2.vertex_map.items()
                                                  if w in set(f2.singular_set.vertices)}
    assert set(h.singular_set.vertices) == s_expected
    b_expected = {f2.vertex_map[w] for w in g2.branch_set.vertices} | set(f2.branch_set.vertices)
    assert set(h.branch_set.vertices) == b_expected


def test_compose_with_identity():
    f = pole()
    ident_base = cov.identity_covering(f.base)
    ident_total = cov.identity_covering(f.total)
    for h in (cov.compose(f, ident_base), cov.compose(ident_total, f)):
        assert h.vertex_map == f.vertex_map and h.degree == f.degree


# -- components ---------------------------------------------------------------

def test_components():
    o = fx.octahedron()
    both, _ = disjoint_union(o, o)
    f = cov.CoveringMap.build(both, o, {v: (v - 1) % 6 + 1 for v in both.vertices})
    assert [p.degree for p in cov.components(f)] == [1, 1]
    parts = cov.components(pole(3, "(1 2)"))
    assert sorted(p.degree for p in parts) == [1, 2]
    assert len(cov.components(fig3())) == 1


# -- regularity ---------------------------------------------------------------

def test_regularity():
    r = cov.is_regular(pole())
    assert r.regular and r.deck.order() == 2
    assert not cov.is_regular(fig3()).regular
    r = cov.is_regular(cov.identity_covering(fx.octahedron()))
    assert r.regular and r.deck.order() == 1


def test_regularity_matches_normal_stabilizer_oracle():
    rng = random.Random(7)
    for _ in range(25):
        f = cov.fox_complete(fx.random_cocycle(rng, 4))
        if not f.total.is_connected():
            continue
        mc = cov.extract_cocycle(f)
        gens = [p for p in mc.transitions.values() if not p.is_identity()] or \
            [Permutation.identity(mc.sheets)]
        g = sym_group(gens)
        stab = g.stabilizer(0)
        assert cov.is_regular(f).regular == stab.is_normal(g)


def test_minimal_regularization():
    reg = cov.minimal_regularization(fig3())
    assert reg.r.degree == 6
    assert cov.is_regular(reg.r).regular and cov.is_regular(reg.r).deck.order() == 6
    assert reg.kernel_core.is_trivial()
    cyc = pole(3, "(1 2 3)")
    reg = cov.minimal_regularization(cyc)
    assert reg.r is cyc and reg.r.degree == 3


def test_minimal_regularization_random():
    rng = random.Random(11)
    for _ in range(15):
        f = cov.fox_complete(fx.random_cocycle(rng, 3))
        if not f.total.is_connected():
            continue
        reg = cov.minimal_regularization(f)
        assert cov.is_regular(reg.r).regular
        assert 6 % reg.r.degree == 0 or reg.r.degree <= 6
        comp = cov.compose(reg.s, f)
        assert comp.degree == reg.r.degree


# -- round trip and pullbacks -------------------------------------------------

@pytest.mark.parametrize("build", [pole, fig3, east_west, lambda: pole(3, "(1 2)")])
def test_fox_round_trip_fixtures(build):
    f = build()
    g = cov.fox_complete(cov.extract_cocycle(f))
    assert cov.is_isomorphic(f, g)


def test_pullback_of_identity():
    f = pole()
    pb = cov.pullback(cov.identity_covering(f.base), f)
    assert pb.f.degree == f.degree
    assert cov.is_isomorphic(pb.f, f)


def test_pullback_pole_with_east_west():
    f1, f2 = pole(), east_west()
    pb = cov.pullback(f1, f2)
    assert pb.f.degree == 4
    assert original_points(pb.f, fx.octahedron()) == {1, 2, 5, 6}


def test_pullback_square_splits():
    f = pole()
    pb = cov.pullback(f, f)
    parts = cov.components(pb.f)
    assert pb.f.degree == 4 and len(parts) == 2
    assert all(cov.is_isomorphic(p, f) for p in parts)


def test_connected_pullbacks():
    f = pole()
    assert cov.is_isomorphic(cov.connected_pullback(f, f).f, f)
    assert cov.is_isomorphic(cov.connected_pullback(cov.identity_covering(f.base), f).f, f)
    cp = cov.connected_pullback(f, east_west()).f
    assert cp.total.is_connected() and cp.degree == 4
    # oracle: product local monodromy at each of the four branch points is a
    # transposition on one factor, so it has two orbits of size two
    local = SymGroup([SymPerm([2, 3, 0, 1])])
    deficiency = 4 * (4 - len(local.orbits()))
    assert cp.total.euler_characteristic() == 4 * 2 - deficiency == 0


def test_connected_pullback_needs_a_regular_factor():
    with pytest.raises(NeitherRegular):
        cov.connected_pullback(fig3(), fig3())


def test_regular_pullback_has_product_deck_group():
    pb = cov.connected_pullback(pole(), east_west())
    reg = cov.is_regular(pb.f)
    assert reg.regular and reg.deck.order() == 4 and reg.deck.is_abelian()
