"""Named complexes, cocycles, actions and charts used by tests, scripts and the CLI.

The octahedron uses vertices ``1 = +e1, 2 = -e1, 3 = +e2, 4 = -e2,
5 = +e3, 6 = -e3``; its faces pick one vertex from each antipodal pair.
Cocycles are described by *cuts*: oriented vertex paths in the 1-skeleton
carrying a permutation that is applied when a dual edge crosses the path
from its left side to its right side.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .complex import Complex, Simplex, Subcomplex, cone, cycle_complex, facet_sign, orient
from .covering import MonodromyCocycle
from .perm import Permutation

P = Permutation.parse


def octahedron() -> Complex:
    return Complex.from_top([(a, b, c) for a in (1, 2) for b in (3, 4) for c in (5, 6)])


def tetrahedron_boundary() -> Complex:
    return Complex.from_top([(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)])


def sphere3() -> Complex:
    """Boundary of the 4-simplex."""
    verts = range(1, 6)
    return Complex.from_top([tuple(v for v in verts if v != x) for x in verts])


def projective_plane() -> Complex:
    return Complex.from_top([(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
                             (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)])


def disk(n: int) -> Complex:
    """Cone over an ``n``-gon with rim ``1..n`` and apex ``n + 1``."""
    return cone(cycle_complex(n), n + 1)


def rotation_perm(n: int, steps: int = 1, extra: int = 1) -> Permutation:
    """Rotation of the rim ``1..n`` by ``steps``, fixing ``extra`` further vertices."""
    return Permutation(tuple(((i - 1 + steps) % n) + 1 for i in range(1, n + 1))
                       + tuple(range(n + 1, n + 1 + extra)))


def _left_side(base: Complex, signs, a: int, b: int) -> tuple[Simplex, Simplex]:
    """Tops on the left and right of the oriented edge ``a -> b`` (2-dimensional base)."""
    edge = tuple(sorted((a, b)))
    tops = [t for t in base.cofaces[edge] if len(t) == 3]
    if len(tops) != 2:
        raise ValueError(f"edge {edge} is not interior")
    left = right = None
    for t in tops:
        c = next(v for v in t if v not in edge)
        seq = (a, b, c)
        # parity of seq relative to sorted order
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if seq[i] > seq[j])
        if signs[t] * (-1 if inv % 2 else 1) == 1:
            left = t
        else:
            right = t
    return left, right


def cut_cocycle(base: Complex, cuts: Iterable[tuple[Sequence[int], Permutation]],
                branch: Iterable[int], sheets: int) -> MonodromyCocycle:
    """Cocycle on a 2-dimensional base from oriented cut paths."""
    signs = orient(base).signs
    trans: dict[tuple[Simplex, Simplex], Permutation] = {}
    for path, perm in cuts:
        for a, b in zip(path, path[1:]):
            left, right = _left_side(base, signs, a, b)
            prev = trans.get((left, right), Permutation.identity(sheets))
            trans[(left, right)] = perm * prev
            trans[(right, left)] = trans[(left, right)].inverse()
    given = {k: v for k, v in trans.items() if k[0] < k[1]}
    return MonodromyCocycle.build(base, [(v,) for v in branch], sheets, given)


def fig3_cocycle() -> MonodromyCocycle:
    """Three-sheeted cover of the octahedron branched at 1, 3, 5."""
    return cut_cocycle(octahedron(), [((1, 5), P("(1 2)", 3)), ((3, 5), P("(2 3)", 3))],
                       (1, 3, 5), 3)


def pole_cocycle(sheets: int = 2, perm: str = "(1 2)") -> MonodromyCocycle:
    return cut_cocycle(octahedron(), [((5, 1, 6), P(perm, sheets))], (5, 6), sheets)


def east_west_cocycle() -> MonodromyCocycle:
    return cut_cocycle(octahedron(), [((1, 3, 2), P("(1 2)", 2))], (1, 2), 2)


def identity_cocycle(base: Complex, sheets: int = 1) -> MonodromyCocycle:
    return MonodromyCocycle.build(base, [], sheets)


# spanning tree of the octahedron 1-skeleton used for random cocycles
RANDOM_TREE = ((5, 1), (5, 2), (5, 3), (5, 4), (1, 6))


def random_cocycle(rng: random.Random, max_sheets: int = 4) -> MonodromyCocycle:
    n = rng.randint(1, max_sheets)
    cuts = []
    for a, b in RANDOM_TREE:
        img = list(range(1, n + 1))
        rng.shuffle(img)
        cuts.append(((a, b), Permutation(tuple(img))))
    return cut_cocycle(octahedron(), cuts, range(1, 7), n)


def octahedron_actions() -> dict[str, list[Permutation]]:
    return {
        "rotation": [P("(1 2)(3 4)", 6)],
        "antipodal": [P("(1 2)(3 4)(5 6)", 6)],
        "reflection": [P("(1 2)", 6)],
    }


def two_triangles_at_vertex() -> Complex:
    return Complex.from_top([(1, 2, 3), (1, 4, 5)])


def goodness_corpus() -> list[tuple[str, Complex, Subcomplex]]:
    """Complex/subcomplex pairs used by the goodness suite."""
    octa = octahedron()
    tri = Complex.from_top([(1, 2, 3)])
    c3 = cycle_complex(3)
    c4 = cycle_complex(4)
    d6 = disk(6)
    s3 = sphere3()
    rp2 = projective_plane()
    pinch = two_triangles_at_vertex()
    sd_octa = octa._sd_step.complex
    out = [
        ("octa-poles", octa, [(5,), (6,)]),
        ("octa-edge", octa, [(1, 3)]),
        ("octa-empty", octa, []),
        ("octa-all-vertices", octa, [(v,) for v in range(1, 7)]),
        ("octa-triangle", octa, [(1, 3, 5)]),
        ("octa-equator", octa, [(1, 3), (3, 2), (2, 4), (4, 1)]),
        ("octa-path", octa, [(5, 1), (1, 6)]),
        ("circle3-vertex", c3, [(1,)]),
        ("circle4-opposite", c4, [(1,), (3,)]),
        ("circle4-empty", c4, []),
        ("triangle-boundary", tri, [(1, 2), (2, 3), (1, 3)]),
        ("triangle-vertex", tri, [(1,)]),
        ("triangle-edge", tri, [(1, 2)]),
        ("disk-apex", d6, [(7,)]),
        ("disk-rim-vertex", d6, [(1,)]),
        ("disk-spoke", d6, [(1, 7)]),
        ("disk-rim-edge", d6, [(1, 2)]),
        ("s3-edge", s3, [(1, 2)]),
        ("s3-triangle", s3, [(1, 2, 3)]),
        ("s3-vertices", s3, [(1,), (4,)]),
        ("rp2-vertex", rp2, [(1,)]),
        ("rp2-edge", rp2, [(1, 2)]),
        ("pinch-vertex", pinch, [(1,)]),
        ("pinch-far-vertex", pinch, [(2,)]),
        ("sd-octa-poles", sd_octa, [(5,), (6,)]),
        ("sd-octa-edge-path", sd_octa, [(1, 7)]),
    ]
    return [(name, c, Subcomplex.closure(c, s)) for name, c, s in out]


def path_to_boundary(base: Complex, start: int) -> list[int]:
    """Shortest edge path from ``start`` to a boundary vertex through interior vertices."""
    from collections import deque

    boundary = {v for f in base.simplices_of_dim(base.dim - 1)
                if len(base.cofaces.get(f, ())) == 1 for v in f}
    prev = {start: None}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in sorted(base.vertex_neighbors[v]):
            if w in prev:
                continue
            prev[w] = v
            if w in boundary:
                path = [w]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return path[::-1]
            queue.append(w)
    raise ValueError("no boundary vertex reachable")


def cyclic_cover_at(base: Complex, point: int, sheets: int):
    """Cyclic cover of a 2-disk branched at one interior vertex, cut out to the rim."""
    from .covering import fox_complete

    rot = Permutation(tuple(i % sheets + 1 for i in range(1, sheets + 1)))
    mc = cut_cocycle(base, [(path_to_boundary(base, point), rot)], [point], sheets)
    return fox_complete(mc)


def path_between(base: Complex, a: int, b: int) -> list[int]:
    """Shortest edge path from ``a`` to ``b`` in the 1-skeleton (least-id tie breaking)."""
    from collections import deque

    prev = {a: None}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for w in sorted(base.vertex_neighbors[v]):
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if b not in prev:
        raise ValueError(f"{b} is not reachable from {a}")
    path = [b]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def two_point_cover(base: Complex, a: int, b: int, sheets: int = 2):
    """Cyclic cover of a closed surface branched at two vertices, cut along a path."""
    from .covering import fox_complete

    rot = Permutation(tuple(i % sheets + 1 for i in range(1, sheets + 1)))
    return fox_complete(cut_cocycle(base, [(path_between(base, a, b), rot)], [a, b], sheets))
