"""Finite abstract simplicial complexes.

Simplices are strictly increasing tuples of positive integer vertex ids and a
:class:`Complex` stores the full face-closed set.  Derived incidence data
(top simplices, coface lists, the dual graph) is cached on first use, which
is safe because complexes are immutable.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (ApexCollision, DuplicateVertexInSimplex, InputError,
                     MisalignedSubcomplex, NotOrientable, NotPseudoManifold,
                     UnknownVertex)

Simplex = tuple[int, ...]


def faces_of(simplex: Simplex) -> Iterator[Simplex]:
    """All nonempty faces of a simplex, itself included."""
    for k in range(1, len(simplex) + 1):
        yield from combinations(simplex, k)


def facets_of(simplex: Simplex) -> Iterator[Simplex]:
    for i in range(len(simplex)):
        yield simplex[:i] + simplex[i + 1:]


@dataclass(frozen=True)
class Complex:
    simplices: frozenset[Simplex]

    # -- construction -------------------------------------------------------
    @classmethod
    def from_top(cls, raw: Iterable[Sequence[int]]) -> "Complex":
        closed: set[Simplex] = set()
        for seq in raw:
            seq = list(seq)
            if not seq:
                raise InputError("empty simplex in input")
            if len(set(seq)) != len(seq):
                raise DuplicateVertexInSimplex(f"repeated vertex in {seq}")
            if any((not isinstance(v, int)) or v < 1 for v in seq):
                raise InputError(f"vertex ids must be positive integers: {seq}")
            simplex = tuple(sorted(seq))
            if simplex in closed:
                continue
            closed.update(faces_of(simplex))
        return cls(frozenset(closed))

    @classmethod
    def empty(cls) -> "Complex":
        return cls(frozenset())

    # -- basic data -----------------------------------------------------------
    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(s[0] for s in self.simplices if len(s) == 1))

    @cached_property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, simplex: object) -> bool:
        return simplex in self.simplices

    @cached_property
    def by_dim(self) -> dict[int, tuple[Simplex, ...]]:
        out: dict[int, list[Simplex]] = defaultdict(list)
        for s in self.simplices:
            out[len(s) - 1].append(s)
        return {d: tuple(sorted(v)) for d, v in sorted(out.items())}

    def simplices_of_dim(self, d: int) -> tuple[Simplex, ...]:
        return self.by_dim.get(d, ())

    @cached_property
    def sorted_simplices(self) -> tuple[Simplex, ...]:
        """Canonical order: by dimension, then lexicographically."""
        return tuple(sorted(self.simplices, key=lambda s: (len(s), s)))

    @cached_property
    def maximal(self) -> tuple[Simplex, ...]:
        """Simplices that are not proper faces of another simplex."""
        nonmax: set[Simplex] = set()
        for s in self.simplices:
            if len(s) > 1:
                nonmax.update(facets_of(s))
        return tuple(sorted(s for s in self.simplices if s not in nonmax))

    @cached_property
    def tops(self) -> tuple[Simplex, ...]:
        """Simplices of top dimension ``dim``."""
        return self.simplices_of_dim(self.dim)

    @cached_property
    def top_cofaces(self) -> dict[Simplex, tuple[Simplex, ...]]:
        """Each simplex mapped to the maximal simplices containing it."""
        out: dict[Simplex, list[Simplex]] = defaultdict(list)
        for t in self.maximal:
            for f in faces_of(t):
                out[f].append(t)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def cofaces(self) -> dict[Simplex, tuple[Simplex, ...]]:
        """Each simplex mapped to its codimension-one cofaces."""
        out: dict[Simplex, list[Simplex]] = defaultdict(list)
        for s in self.simplices:
            if len(s) > 1:
                for f in facets_of(s):
                    out[f].append(s)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def vertex_neighbors(self) -> dict[int, frozenset[int]]:
        out: dict[int, set[int]] = {v: set() for v in self.vertices}
        for s in self.simplices_of_dim(1):
            out[s[0]].add(s[1])
            out[s[1]].add(s[0])
        return {k: frozenset(v) for k, v in out.items()}

    @cached_property
    def dual_adjacency(self) -> dict[Simplex, tuple[tuple[Simplex, Simplex], ...]]:
        """For each top simplex, pairs ``(shared facet, neighbouring top)``."""
        out: dict[Simplex, list[tuple[Simplex, Simplex]]] = {t: [] for t in self.tops}
        for f in self.simplices_of_dim(self.dim - 1):
            tops = [t for t in self.cofaces.get(f, ()) if len(t) == self.dim + 1]
            for a in tops:
                for b in tops:
                    if a != b:
                        out[a].append((f, b))
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _sd_step(self) -> "SdStep":
        return _subdivide_once(self)

    def euler_characteristic(self) -> int:
        return sum((-1) ** (len(s) - 1) for s in self.simplices)

    def is_connected(self) -> bool:
        return len(self.connected_components()) <= 1

    def connected_components(self) -> list["Complex"]:
        parent = {v: v for v in self.vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in self.simplices_of_dim(1):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[Simplex]] = defaultdict(list)
        for s in self.simplices:
            groups[find(s[0])].append(s)
        return [Complex(frozenset(groups[k])) for k in sorted(groups)]

    def relabel(self, mapping: Mapping[int, int]) -> "Complex":
        images = [mapping[v] for v in self.vertices]
        if len(set(images)) != len(images):
            raise InputError("relabeling must be injective")
        return Complex(frozenset(tuple(sorted(mapping[v] for v in s)) for s in self.simplices))

    def full_subcomplex(self, verts: Iterable[int]) -> "Complex":
        vs = set(verts)
        return Complex(frozenset(s for s in self.simplices if set(s) <= vs))

    def __repr__(self) -> str:
        return f"Complex(dim={self.dim}, vertices={len(self.vertices)}, simplices={len(self.simplices)})"


@dataclass(frozen=True)
class Subcomplex:
    """A face-closed subset of the simplices of ``parent``."""

    parent: Complex
    simplices: frozenset[Simplex]

    @classmethod
    def closure(cls, parent: Complex, simplices: Iterable[Sequence[int]]) -> "Subcomplex":
        closed: set[Simplex] = set()
        for s in simplices:
            s = tuple(sorted(s))
            if s not in parent.simplices:
                raise MisalignedSubcomplex(f"{s} is not a simplex of the ambient complex")
            closed.update(faces_of(s))
        return cls(parent, frozenset(closed))

    @classmethod
    def empty(cls, parent: Complex) -> "Subcomplex":
        return cls(parent, frozenset())

    def __post_init__(self) -> None:
        if not self.simplices <= self.parent.simplices:
            raise MisalignedSubcomplex("subcomplex simplices must belong to the parent")

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, s: object) -> bool:
        return s in self.simplices

    def __iter__(self) -> Iterator[Simplex]:
        return iter(sorted(self.simplices, key=lambda s: (len(s), s)))

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(s[0] for s in self.simplices if len(s) == 1))

    def as_complex(self) -> Complex:
        return Complex(self.simplices)

    def union(self, other: "Subcomplex") -> "Subcomplex":
        return Subcomplex(self.parent, self.simplices | other.simplices)


# ---------------------------------------------------------------------------
# Stars, links, cones
# ---------------------------------------------------------------------------

def star_link(c: Complex, x: int) -> tuple[Subcomplex, Subcomplex]:
    if (x,) not in c.simplices:
        raise UnknownVertex(f"vertex {x} not in complex")
    star: set[Simplex] = set()
    for t in c.top_cofaces[(x,)]:
        star.update(faces_of(t))
    link = {s for s in star if x not in s}
    return Subcomplex(c, frozenset(star)), Subcomplex(c, frozenset(link))


def simplex_star(c: Complex, s: Simplex) -> Subcomplex:
    """Closed star of a simplex: all faces of maximal simplices containing it."""
    out: set[Simplex] = set()
    for t in c.top_cofaces[s]:
        out.update(faces_of(t))
    return Subcomplex(c, frozenset(out))


def cone(c: Complex, apex: int) -> Complex:
    if (apex,) in c.simplices:
        raise ApexCollision(f"apex {apex} already a vertex")
    out = set(c.simplices)
    out.add((apex,))
    out.update(tuple(sorted(s + (apex,))) for s in c.simplices)
    return Complex(frozenset(out))


def euler_characteristic(c: Complex) -> int:
    return c.euler_characteristic()


# ---------------------------------------------------------------------------
# Pseudo-manifolds and orientation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PseudoManifoldReport:
    homogeneous: bool
    two_cofaces: bool
    skeleton_good: bool

    @property
    def ok(self) -> bool:
        return self.homogeneous and self.two_cofaces and self.skeleton_good


def is_homogeneous(c: Complex) -> bool:
    return all(len(t) == c.dim + 1 for t in c.maximal)


def facet_coface_counts(c: Complex) -> dict[Simplex, int]:
    return {f: len(c.cofaces.get(f, ())) for f in c.simplices_of_dim(c.dim - 1)}


def boundary_facets(c: Complex) -> tuple[Simplex, ...]:
    return tuple(f for f, n in sorted(facet_coface_counts(c).items()) if n == 1)


def is_pseudo_manifold(c: Complex) -> PseudoManifoldReport:
    homogeneous = is_homogeneous(c)
    two = c.dim >= 1 and all(n == 2 for n in facet_coface_counts(c).values())
    skeleton = Subcomplex(c, frozenset(s for s in c.simplices if len(s) <= c.dim - 1))
    good = is_good_subcomplex(c, skeleton)
    return PseudoManifoldReport(homogeneous, two, good)


def is_pseudo_manifold_with_boundary(c: Complex) -> bool:
    """Homogeneous, every facet in one or two tops, strongly connected dual graph."""
    if c.dim < 1 or not is_homogeneous(c):
        return False
    if any(n not in (1, 2) for n in facet_coface_counts(c).values()):
        return False
    return dual_graph_connected(c)


def dual_graph_connected(c: Complex) -> bool:
    tops = c.tops
    if not tops:
        return False
    seen = {tops[0]}
    queue = [tops[0]]
    adj = c.dual_adjacency
    while queue:
        t = queue.pop()
        for _, u in adj[t]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(tops)


def facet_sign(top: Simplex, facet: Simplex) -> int:
    """Sign of ``facet`` in the boundary of ``top`` (both sorted)."""
    missing = next(v for v in top if v not in facet)
    return -1 if top.index(missing) % 2 else 1


@dataclass(frozen=True)
class Orientation:
    signs: Mapping[Simplex, int]

    def sign(self, top: Simplex) -> int:
        return self.signs[top]


def orient(c: Complex) -> Orientation:
    """Coherent orientation of a pseudo-manifold, possibly with boundary."""
    counts = facet_coface_counts(c)
    if not is_homogeneous(c) or c.dim < 1 or any(n not in (1, 2) for n in counts.values()):
        raise NotPseudoManifold("orientation needs a pseudo-manifold")
    signs: dict[Simplex, int] = {}
    adj = c.dual_adjacency
    for start in c.tops:
        if start in signs:
            continue
        signs[start] = 1
        queue = deque([start])
        while queue:
            t = queue.popleft()
            for f, u in adj[t]:
                want = -signs[t] * facet_sign(t, f) * facet_sign(u, f)
                if u not in signs:
                    signs[u] = want
                    queue.append(u)
                elif signs[u] != want:
                    raise NotOrientable("parity conflict in the dual graph")
    return Orientation(signs)


def is_orientable(c: Complex) -> bool:
    try:
        orient(c)
    except NotOrientable:
        return False
    return True


def permutation_parity(src: Sequence[int], dst: Sequence[int]) -> int:
    """Sign of the permutation taking sequence ``src`` to the sorted order of ``dst``."""
    pos = {v: i for i, v in enumerate(sorted(dst))}
    arr = [pos[v] for v in dst]
    sign = 1
    seen = [False] * len(arr)
    for i in range(len(arr)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = arr[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def map_orientation_sign(c_src: Complex, o_src: Orientation, c_dst: Complex,
                         o_dst: Orientation, vmap: Mapping[int, int]) -> int | None:
    """Global sign (+1/-1) with which a simplicial map respects orientations.

    Returns ``None`` when the sign is not constant over the tops of ``c_src``.
    """
    result = None
    for t in c_src.tops:
        image = [vmap[v] for v in t]
        sorted_img = tuple(sorted(image))
        s = o_src.sign(t) * o_dst.sign(sorted_img) * permutation_parity(sorted_img, image)
        if result is None:
            result = s
        elif s != result:
            return None
    return result


# ---------------------------------------------------------------------------
# Open complements and goodness
# ---------------------------------------------------------------------------

def open_complement_components(c: Complex, s: Subcomplex | Iterable[Simplex]) -> list[frozenset[Simplex]]:
    """Components of the open simplices of ``c`` outside ``s`` under face adjacency."""
    inside = s.simplices if isinstance(s, Subcomplex) else frozenset(s)
    rest = [x for x in c.simplices if x not in inside]
    rest_set = set(rest)
    parent = {x: x for x in rest}

    def find(x: Simplex) -> Simplex:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in rest:
        if len(x) > 1:
            for f in facets_of(x):
                if f in rest_set:
                    rx, rf = find(x), find(f)
                    if rx != rf:
                        parent[rx] = rf
    groups: dict[Simplex, set[Simplex]] = defaultdict(set)
    for x in rest:
        groups[find(x)].add(x)
    comps = [frozenset(g) for g in groups.values()]
    comps.sort(key=lambda g: min(g, key=lambda t: (len(t), t)))
    return comps


def _nowhere_dense(c: Complex, s: Subcomplex) -> bool:
    return not any(t in s.simplices for t in c.maximal)


def is_good_subcomplex(c: Complex, s: Subcomplex) -> bool:
    """Goodness through the face poset.

    For a simplex ``tau`` of ``s`` the link of its barycenter in the first
    subdivision deformation retracts, away from ``s``, onto the order complex
    of the cofaces of ``tau`` outside ``s``; so the link test reduces to
    connectivity of that upper set under comparability.
    """
    if s.parent is not c and s.parent != c:
        raise MisalignedSubcomplex("subcomplex belongs to another complex")
    if not _nowhere_dense(c, s):
        return False
    inside = s.simplices
    for tau in inside:
        upper = [t for t in _strict_cofaces(c, tau) if t not in inside]
        if not upper or not _comparability_connected(upper):
            return False
    return True


def _strict_cofaces(c: Complex, tau: Simplex) -> set[Simplex]:
    out: set[Simplex] = set()
    tset = set(tau)
    for top in c.top_cofaces[tau]:
        others = [v for v in top if v not in tset]
        for k in range(1, len(others) + 1):
            for extra in combinations(others, k):
                out.add(tuple(sorted(tau + extra)))
    return out


def _comparability_connected(items: list[Simplex]) -> bool:
    pool = set(items)
    start = items[0]
    seen = {start}
    queue = [start]
    while queue:
        x = queue.pop()
        # neighbours: proper cofaces and faces inside the pool
        for y in list(pool - seen):
            if (len(y) > len(x) and set(x) <= set(y)) or (len(y) < len(x) and set(y) <= set(x)):
                seen.add(y)
                queue.append(y)
    return len(seen) == len(pool)


def subdivided_subcomplex(sd: "Subdivision", s: Subcomplex) -> Subcomplex:
    """Image of ``s`` in a one-step subdivision: chains made of simplices of ``s``."""
    step = sd.steps[-1]
    inside = s.simplices
    simp = frozenset(x for x in sd.complex.simplices
                     if all(step.simplex_of[v] in inside for v in x))
    return Subcomplex(sd.complex, simp)


def is_good_subcomplex_link(c: Complex, s: Subcomplex) -> bool:
    """Literal link test at every barycenter of ``|s|`` in the first subdivision."""
    if not _nowhere_dense(c, s):
        return False
    sd = barycentric_subdivide(c)
    s1 = subdivided_subcomplex(sd, s)
    for tau in s.simplices:
        b = sd.steps[0].barycenter[tau]
        _, link = star_link(sd.complex, b)
        if len(open_complement_components(link.as_complex(), link.simplices & s1.simplices)) != 1:
            return False
    return True


def is_good_subcomplex_star(c: Complex, s: Subcomplex) -> bool:
    """Star variant: ``St(x) - S`` connected at every barycenter of ``|s|``."""
    if not _nowhere_dense(c, s):
        return False
    sd = barycentric_subdivide(c)
    s1 = subdivided_subcomplex(sd, s)
    for tau in s.simplices:
        b = sd.steps[0].barycenter[tau]
        star, _ = star_link(sd.complex, b)
        if len(open_complement_components(star.as_complex(), star.simplices & s1.simplices)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Barycentric subdivision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SdStep:
    """One barycentric subdivision step with its vertex provenance."""

    source: Complex
    complex: Complex
    barycenter: Mapping[Simplex, int]
    simplex_of: Mapping[int, Simplex]

    def image_of_simplex(self, s: Simplex) -> Simplex:
        return (self.barycenter[s],)


def _subdivide_once(c: Complex) -> SdStep:
    ordered = c.sorted_simplices
    bary = {s: i for i, s in enumerate(ordered, start=1)}
    simplex_of = {i: s for s, i in bary.items()}
    tops: set[Simplex] = set()
    for t in c.maximal:
        for perm in permutations(t):
            chain = tuple(sorted(bary[tuple(sorted(perm[:k]))] for k in range(1, len(perm) + 1)))
            tops.add(chain)
    return SdStep(c, Complex.from_top(tops), bary, simplex_of)


@dataclass(frozen=True)
class Subdivision:
    original: Complex
    steps: tuple[SdStep, ...]

    @property
    def complex(self) -> Complex:
        return self.steps[-1].complex if self.steps else self.original

    @cached_property
    def provenance(self) -> dict[int, Simplex]:
        """New vertex -> smallest simplex of the original complex carrying it."""
        if not self.steps:
            return {v: (v,) for v in self.original.vertices}
        carrier = {v: s for v, s in self.steps[0].simplex_of.items()}
        for step in self.steps[1:]:
            carrier = {v: tuple(sorted(set().union(*(carrier[u] for u in s))))
                       for v, s in step.simplex_of.items()}
        return carrier

    def lift_vertex_map(self, vmap: Mapping[int, int], target: "Subdivision") -> dict[int, int]:
        """Push a simplicial vertex map through the same number of subdivision steps."""
        if len(self.steps) != len(target.steps):
            raise InputError("subdivision depths differ")
        current = dict(vmap)
        for a, b in zip(self.steps, target.steps):
            current = {v: b.barycenter[tuple(sorted({current[u] for u in s}))]
                       for v, s in a.simplex_of.items()}
        return current


def barycentric_subdivide(c: Complex, times: int = 1) -> Subdivision:
    if times < 0:
        raise InputError("times must be nonnegative")
    steps = []
    current = c
    for _ in range(times):
        step = current._sd_step
        steps.append(step)
        current = step.complex
    return Subdivision(c, tuple(steps))


def sd(c: Complex, times: int = 1) -> Complex:
    return barycentric_subdivide(c, times).complex


def subdivide_vertex_map(step_src: SdStep, step_dst: SdStep, vmap: Mapping[int, int]) -> dict[int, int]:
    """Induced map on first subdivisions: ``b(s) -> b(f(s))``."""
    return {v: step_dst.barycenter[tuple(sorted({vmap[u] for u in s}))]
            for v, s in step_src.simplex_of.items()}


def subdivide_subcomplex_times(c: Complex, s: Subcomplex, times: int) -> Subcomplex:
    current_c, current_s = c, s
    for _ in range(times):
        sdv = barycentric_subdivide(current_c)
        current_s = subdivided_subcomplex(sdv, current_s)
        current_c = sdv.complex
    return current_s


def is_simplicial_map(src: Complex, dst: Complex, vmap: Mapping[int, int],
                      nondegenerate: bool = True) -> bool:
    for t in src.maximal:
        img = {vmap[v] for v in t}
        if nondegenerate and len(img) != len(t):
            return False
        if tuple(sorted(img)) not in dst.simplices:
            return False
    return True


# ---------------------------------------------------------------------------
# Small builders used by fixtures and tests
# ---------------------------------------------------------------------------

def cycle_complex(n: int, start: int = 1) -> Complex:
    verts = list(range(start, start + n))
    return Complex.from_top([(verts[i], verts[(i + 1) % n]) for i in range(n)])


def disjoint_union(a: Complex, b: Complex) -> tuple[Complex, dict[int, int]]:
    shift = max(a.vertices, default=0)
    mapping = {v: v + shift for v in b.vertices}
    return Complex(a.simplices | b.relabel(mapping).simplices), mapping


def product_with_interval(c: Complex, order: Mapping[int, int] | None = None
                          ) -> tuple[Complex, dict[tuple[int, int], int]]:
    """Staircase triangulation of ``c x [0, 1]``.

    ``order`` ranks vertices; the staircase is consistent on shared faces as
    long as ranks are distinct within every simplex.  Returns the complex and
    the vertex naming ``(v, level) -> id``.
    """
    rank = order or {v: v for v in c.vertices}
    ids = {}
    for i, v in enumerate(c.vertices):
        ids[(v, 0)] = 2 * i + 1
        ids[(v, 1)] = 2 * i + 2
    tops = []
    for t in c.maximal:
        seq = sorted(t, key=lambda v: rank[v])
        for i in range(len(seq)):
            tops.append([ids[(v, 0)] for v in seq[: i + 1]] + [ids[(v, 1)] for v in seq[i:]])
    return Complex.from_top(tops), ids
