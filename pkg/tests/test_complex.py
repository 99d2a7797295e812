import pytest

from branchfold.complex import (Complex, Subcomplex, barycentric_subdivide, cone, cycle_complex,
                                euler_characteristic, is_good_subcomplex, is_good_subcomplex_link,
                                is_good_subcomplex_star, is_orientable, is_pseudo_manifold,
                                open_complement_components, orient, sd, star_link)
from branchfold.errors import (ApexCollision, DuplicateVertexInSimplex, MisalignedSubcomplex,
                               NotOrientable, UnknownVertex)
from branchfold.fixtures import (disk, goodness_corpus, octahedron, projective_plane, sphere3,
                                 two_triangles_at_vertex)

TRI = Complex.from_top([(1, 2, 3)])


def test_face_closure_of_a_triangle():
    assert len(TRI.simplices) == 7
    assert len(TRI.simplices_of_dim(0)) == 3 and len(TRI.simplices_of_dim(1)) == 3


def test_single_vertex():
    c = Complex.from_top([(1,)])
    assert c.dim == 0 and len(c.simplices) == 1


def test_octahedron_counts():
    o = octahedron()
    assert len(o.simplices) == 26
    assert o.dim == 2


def test_duplicate_vertex_rejected():
    with pytest.raises(DuplicateVertexInSimplex):
        Complex.from_top([(1, 1, 2)])


def test_simplices_are_canonical_and_closed():
    c = Complex.from_top([(3, 1, 2), (4, 2)])
    for s in c.simplices:
        assert list(s) == sorted(set(s))
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            assert not face or face in c.simplices


def test_link_of_pole_is_square():
    _, link = star_link(octahedron(), 5)
    lc = link.as_complex()
    assert lc.dim == 1 and len(lc.vertices) == 4 and len(lc.simplices_of_dim(1)) == 4
    assert all(len([e for e in lc.simplices_of_dim(1) if v in e]) == 2 for v in lc.vertices)


def test_link_in_a_triangle():
    _, link = star_link(TRI, 1)
    assert link.simplices == {(2,), (3,), (2, 3)}


def test_link_at_pinch_is_disconnected():
    _, link = star_link(two_triangles_at_vertex(), 1)
    assert len(link.as_complex().connected_components()) == 2


def test_unknown_vertex():
    with pytest.raises(UnknownVertex):
        star_link(TRI, 9)


def test_pseudo_manifold_reports():
    assert is_pseudo_manifold(octahedron()).ok
    rep = is_pseudo_manifold(TRI)
    assert not rep.two_cofaces
    glued = Complex.from_top([(1, 2, 3), (2, 3, 4), (4, 5)])
    assert not is_pseudo_manifold(glued).homogeneous


def test_open_complements():
    boundary = Subcomplex.closure(TRI, [(1, 2), (2, 3), (1, 3)])
    assert len(open_complement_components(TRI, boundary)) == 1
    c3, c4 = cycle_complex(3), cycle_complex(4)
    assert len(open_complement_components(c3, Subcomplex.closure(c3, [(1,)]))) == 1
    assert len(open_complement_components(c4, Subcomplex.closure(c4, [(1,), (3,)]))) == 2


def test_goodness_examples():
    o = octahedron()
    assert is_good_subcomplex(o, Subcomplex.closure(o, [(5,), (6,)]))
    assert not is_good_subcomplex(o, Subcomplex.closure(o, [(1, 3)]))
    assert is_good_subcomplex(o, Subcomplex.empty(o))


def test_misaligned_subcomplex_refused():
    with pytest.raises(MisalignedSubcomplex):
        Subcomplex.closure(octahedron(), [(1, 2)])


@pytest.mark.parametrize("name,c,s", goodness_corpus(), ids=[n for n, _, _ in goodness_corpus()])
def test_three_goodness_routes_agree(name, c, s):
    assert is_good_subcomplex(c, s) == is_good_subcomplex_link(c, s) == is_good_subcomplex_star(c, s)


def test_subdivision_counts():
    assert len(sd(TRI).simplices_of_dim(2)) == 6 and len(sd(TRI).vertices) == 7
    edge = Complex.from_top([(1, 2)])
    assert len(sd(edge).simplices_of_dim(1)) == 2 and len(sd(edge).vertices) == 3
    assert len(sd(octahedron()).simplices_of_dim(2)) == 48


def test_subdivision_provenance():
    sub = barycentric_subdivide(TRI, 2)
    prov = sub.provenance
    assert set(prov) == set(sub.complex.vertices)
    assert all(s in TRI.simplices for s in prov.values())


def test_cones():
    sq = cone(cycle_complex(4), 5)
    assert len(sq.simplices_of_dim(2)) == 4
    assert cone(Complex.empty(), 1).simplices == {(1,)}
    co = cone(octahedron(), 7)
    assert co.dim == 3 and euler_characteristic(co) == 1
    with pytest.raises(ApexCollision):
        cone(TRI, 2)


def test_euler_characteristics():
    assert euler_characteristic(octahedron()) == 2
    assert euler_characteristic(cycle_complex(3)) == 0
    assert euler_characteristic(TRI) == 1
    assert euler_characteristic(projective_plane()) == 1
    assert euler_characteristic(sphere3()) == 0


def test_orientation():
    o = orient(octahedron())
    assert set(o.signs.values()) <= {1, -1}
    with pytest.raises(NotOrientable):
        orient(projective_plane())
    assert is_orientable(cycle_complex(3))
    assert is_orientable(disk(6))


def test_orientation_is_coherent_on_octahedron():
    from branchfold.complex import facet_sign
    c = octahedron()
    o = orient(c)
    for f in c.simplices_of_dim(1):
        a, b = c.cofaces[f]
        assert o.sign(a) * facet_sign(a, f) == -o.sign(b) * facet_sign(b, f)
