"""Branched coverings of finite pseudo-manifolds.

A :class:`CoveringMap` is a non-degenerate simplicial map with constant
fibre size over top simplices.  Coverings are built from permutation cocycles
by :func:`fox_complete`: sheets are glued across codimension-one faces and
the fibre over every lower simplex is the set of orbits of its local
monodromy.  Sheet transitions follow the convention that
``transition(a, b)`` sends sheet ``i`` over top ``a`` to the sheet over the
adjacent top ``b`` reached by crossing their common face.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .complex import (Complex, Simplex, Subcomplex, dual_graph_connected, faces_of,
                      facets_of, is_good_subcomplex, is_homogeneous, orient, sd)
from .errors import (BaseNotPseudoManifold, BasesDiffer, BranchLocusNotGood,
                     CocycleInvalid, DimensionNotTwo, IncompatibleComplexes,
                     InputError, NeitherRegular, TotalNotConnected)
from .perm import (Permutation, PermGroup, core, coset_action)

Sheet = tuple[Simplex, int]


# ---------------------------------------------------------------------------
# Cocycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MonodromyCocycle:
    base: Complex
    branch: Subcomplex
    sheets: int
    transitions: Mapping[tuple[Simplex, Simplex], Permutation]

    @classmethod
    def build(cls, base: Complex, branch: Subcomplex | Iterable[Sequence[int]], sheets: int,
              given: Mapping[tuple[Sequence[int], Sequence[int]], Permutation] | None = None,
              ) -> "MonodromyCocycle":
        """Fill unlisted dual edges with the identity and reverse edges with inverses."""
        if sheets < 1:
            raise InputError("sheet count must be positive")
        if not isinstance(branch, Subcomplex):
            branch = Subcomplex.closure(base, branch)
        ident = Permutation.identity(sheets)
        trans: dict[tuple[Simplex, Simplex], Permutation] = {}
        for t, nbrs in base.dual_adjacency.items():
            for _, u in nbrs:
                trans[(t, u)] = ident
        explicit: dict[tuple[Simplex, Simplex], Permutation] = {}
        for (a, b), p in (given or {}).items():
            a, b = tuple(sorted(a)), tuple(sorted(b))
            if (a, b) not in trans:
                raise CocycleInvalid(f"{a} and {b} are not adjacent top simplices")
            if p.degree != sheets:
                raise CocycleInvalid(f"permutation {p} has degree {p.degree}, expected {sheets}")
            if (b, a) in explicit and explicit[(b, a)] != p.inverse():
                raise CocycleInvalid(f"transitions on {a}|{b} are not mutually inverse")
            explicit[(a, b)] = p
        for (a, b), p in explicit.items():
            trans[(a, b)] = p
            trans[(b, a)] = p.inverse()
        return cls(base, branch, sheets, trans)

    def transition(self, a: Simplex, b: Simplex) -> Permutation:
        return self.transitions[(a, b)]

    def with_transitions(self, fn: Callable[[Permutation], Permutation], sheets: int) -> "MonodromyCocycle":
        return MonodromyCocycle(self.base, self.branch, sheets,
                                {k: fn(v) for k, v in self.transitions.items()})

    def listed(self) -> list[tuple[Simplex, Simplex, Permutation]]:
        """Non-identity transitions, each unordered edge once."""
        out = []
        for (a, b), p in sorted(self.transitions.items()):
            if a < b and not p.is_identity():
                out.append((a, b, p))
        return out


def gauge_potentials(base: Complex, transitions: Mapping[tuple[Simplex, Simplex], Permutation],
                     sheets: int) -> tuple[dict[Simplex, Permutation], set[frozenset[Simplex]]]:
    """BFS potentials from the least top: ``p[t]`` carries base sheets to sheets at ``t``."""
    root = base.tops[0]
    pot = {root: Permutation.identity(sheets)}
    tree: set[frozenset[Simplex]] = set()
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for _, u in base.dual_adjacency[t]:
            if u not in pot:
                pot[u] = transitions[(t, u)] * pot[t]
                tree.add(frozenset((t, u)))
                queue.append(u)
    return pot, tree


def monodromy_group(mc: MonodromyCocycle) -> PermGroup:
    """Image of the monodromy, from gauge-fixed loops at the least top simplex."""
    pot, tree = gauge_potentials(mc.base, mc.transitions, mc.sheets)
    gens = []
    for (a, b), t in mc.transitions.items():
        if frozenset((a, b)) in tree or a > b:
            continue
        loop = pot[b].inverse() * t * pot[a]
        if not loop.is_identity():
            gens.append(loop)
    return PermGroup.generate(sorted(set(gens)), mc.sheets)


def local_monodromy_group(mc: MonodromyCocycle, s: Simplex) -> PermGroup:
    """Loops in the dual graph of the star of ``s``, based at its least top."""
    star = sorted(mc.base.top_cofaces[s])
    sset = set(s)
    root = star[0]
    pot = {root: Permutation.identity(mc.sheets)}
    queue = deque([root])
    gens: set[Permutation] = set()
    while queue:
        t = queue.popleft()
        for f, u in mc.base.dual_adjacency[t]:
            if not sset <= set(f):
                continue
            step = mc.transitions[(t, u)] * pot[t]
            if u not in pot:
                pot[u] = step
                queue.append(u)
            else:
                loop = pot[u].inverse() * step
                if not loop.is_identity():
                    gens.add(loop)
    return PermGroup.generate(sorted(gens), mc.sheets)


# ---------------------------------------------------------------------------
# Covering maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoveringMap:
    total: Complex
    base: Complex
    vertex_map: Mapping[int, int]
    degree: int
    # provenance for Fox-built totals: vertex -> (base simplex, class of (top, sheet))
    origin: Mapping[int, tuple[Simplex, frozenset[Sheet]]] | None = field(default=None, repr=False)
    fox_subdivided: bool | None = None

    @classmethod
    def build(cls, total: Complex, base: Complex, vertex_map: Mapping[int, int], **kw) -> "CoveringMap":
        vmap = {v: vertex_map[v] for v in total.vertices}
        fibres: dict[Simplex, int] = defaultdict(int)
        for t in total.maximal:
            img = tuple(sorted({vmap[v] for v in t}))
            if len(img) != len(t):
                raise IncompatibleComplexes(f"degenerate image of {t}")
            if img not in base.simplices:
                raise IncompatibleComplexes(f"image {img} of {t} is not a simplex of the base")
            fibres[img] += 1
        counts = {fibres.get(t, 0) for t in base.maximal}
        if len(counts) != 1 or 0 in counts:
            raise IncompatibleComplexes(f"fibre sizes over top simplices differ: {sorted(counts)}")
        return cls(total, base, vmap, counts.pop(), **kw)

    def image(self, s: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_map[v] for v in s}))

    @cached_property
    def lifts(self) -> dict[Simplex, tuple[Simplex, ...]]:
        """Total top simplices over each base top, sorted."""
        out: dict[Simplex, list[Simplex]] = defaultdict(list)
        for t in self.total.tops:
            out[self.image(t)].append(t)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def local_degrees(self) -> dict[Simplex, int]:
        """Local degree of every total simplex (number of tops over one fixed base top)."""
        out = {}
        for tau in self.total.simplices:
            ftau = self.image(tau)
            sigma = self.base.top_cofaces[ftau][0]
            out[tau] = sum(1 for t in self.total.top_cofaces[tau] if self.image(t) == sigma)
        return out

    def local_degree(self, v: int) -> int:
        return self.local_degrees[(v,)]

    @cached_property
    def singular_set(self) -> Subcomplex:
        return Subcomplex(self.total, frozenset(t for t, d in self.local_degrees.items() if d > 1))

    @cached_property
    def branch_set(self) -> Subcomplex:
        return Subcomplex(self.base, frozenset(self.image(t) for t in self.singular_set.simplices))

    @cached_property
    def branch_preimage(self) -> Subcomplex:
        b = self.branch_set.simplices
        return Subcomplex(self.total, frozenset(t for t in self.total.simplices if self.image(t) in b))

    @cached_property
    def pseudo_singular_set(self) -> Subcomplex:
        rest = self.branch_preimage.simplices - self.singular_set.simplices
        closed: set[Simplex] = set()
        for t in rest:
            closed.update(faces_of(t))
        return Subcomplex(self.total, frozenset(closed))

    @cached_property
    def _sheet_data(self) -> tuple["MonodromyCocycle", dict[Sheet, Simplex], dict[Simplex, Sheet]]:
        return _extract(self)

    @property
    def sheet_labels(self) -> dict[Sheet, Simplex]:
        return self._sheet_data[1]

    def is_total_connected(self) -> bool:
        return self.total.is_connected()

    def __repr__(self) -> str:
        return f"CoveringMap(degree={self.degree}, total={self.total!r}, base={self.base!r})"


def identity_covering(c: Complex) -> CoveringMap:
    return CoveringMap(c, c, {v: v for v in c.vertices}, 1)


def covering_from_map(total: Complex, base: Complex, vertex_map: Mapping[int, int]) -> CoveringMap:
    return CoveringMap.build(total, base, vertex_map)


# ---------------------------------------------------------------------------
# Fox completion
# ---------------------------------------------------------------------------

def validate_base(base: Complex) -> None:
    if base.dim < 1 or not is_homogeneous(base):
        raise BaseNotPseudoManifold("base must be a homogeneous complex of positive dimension")
    for f in base.simplices_of_dim(base.dim - 1):
        if len(base.cofaces.get(f, ())) not in (1, 2):
            raise BaseNotPseudoManifold(f"face {f} lies in more than two top simplices")
    if not dual_graph_connected(base):
        raise BaseNotPseudoManifold("base must be strongly connected")


def fibre_classes(mc: MonodromyCocycle) -> dict[Simplex, dict[Sheet, int]]:
    """For every base simplex, the class index of each (top, sheet) in its star."""
    base, n = mc.base, mc.sheets
    out: dict[Simplex, dict[Sheet, int]] = {}
    branch = mc.branch.simplices
    for s in base.sorted_simplices:
        star = base.top_cofaces[s]
        sset = set(s)
        parent: dict[Sheet, Sheet] = {(t, i): (t, i) for t in star for i in range(1, n + 1)}

        def find(x: Sheet) -> Sheet:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t in star:
            for f, u in base.dual_adjacency[t]:
                if t < u and sset <= set(f):
                    p = mc.transitions[(t, u)]
                    for i in range(1, n + 1):
                        a, b = find((t, i)), find((u, p(i)))
                        if a != b:
                            if b < a:
                                a, b = b, a
                            parent[b] = a
        groups: dict[Sheet, list[Sheet]] = defaultdict(list)
        for key in parent:
            groups[find(key)].append(key)
        ordered = sorted(groups.values(), key=min)
        index = {}
        for ci, members in enumerate(ordered):
            if s not in branch:
                tops_seen = [t for t, _ in members]
                if len(tops_seen) != len(set(tops_seen)):
                    raise CocycleInvalid(f"nontrivial monodromy around {s}, which is not in the branch locus")
            for key in members:
                index[key] = ci
        out[s] = index
    return out


def _collision_free(base: Complex, classes: Mapping[Simplex, Mapping[Sheet, int]], n: int) -> bool:
    for s in base.simplices:
        if len(s) == 1:
            continue
        seen: dict[tuple[int, ...], int] = {}
        for key, ci in classes[s].items():
            sig = tuple(classes[(v,)][key] for v in s)
            if seen.setdefault(sig, ci) != ci:
                return False
    return True


def fox_complete(mc: MonodromyCocycle, subdivide: bool | None = None) -> CoveringMap:
    """Branched covering with the given monodromy.

    The total complex lives over ``mc.base`` itself when vertex fibres
    already separate the fibres of every simplex, and over its first
    barycentric subdivision otherwise.  ``subdivide`` forces either choice.
    """
    base, n = mc.base, mc.sheets
    validate_base(base)
    if not mc.branch.simplices <= base.simplices:
        raise CocycleInvalid("branch locus is not a subcomplex of the base")
    if not is_good_subcomplex(base, mc.branch):
        raise BranchLocusNotGood("branch locus is not good in the base")
    classes = fibre_classes(mc)
    if subdivide is None:
        subdivide = not _collision_free(base, classes, n)
    elif not subdivide and not _collision_free(base, classes, n):
        raise CocycleInvalid("fibres over vertices do not separate simplex fibres; subdivide")

    members: dict[tuple[Simplex, int], set[Sheet]] = defaultdict(set)
    for s, idx in classes.items():
        for key, ci in idx.items():
            members[(s, ci)].add(key)

    tops: list[list[int]] = []
    if not subdivide:
        names = sorted({(s[0], ci) for (s, ci) in members if len(s) == 1})
        ids = {name: i for i, name in enumerate(names, start=1)}
        for t in base.tops:
            for i in range(1, n + 1):
                tops.append([ids[(v, classes[(v,)][(t, i)])] for v in t])
        vmap = {ids[(v, ci)]: v for (v, ci) in names}
        origin = {ids[(v, ci)]: ((v,), frozenset(members[((v,), ci)])) for (v, ci) in names}
        new_base = base
    else:
        step = base._sd_step
        bary = step.barycenter
        names = sorted((bary[s], ci, s) for (s, ci) in members)
        ids = {(s, ci): i for i, (_, ci, s) in enumerate(names, start=1)}
        for t in base.tops:
            for perm in permutations(t):
                chain = [tuple(sorted(perm[:k])) for k in range(1, len(perm) + 1)]
                for i in range(1, n + 1):
                    tops.append([ids[(c, classes[c][(t, i)])] for c in chain])
        vmap = {ids[(s, ci)]: b for (b, ci, s) in names}
        origin = {ids[(s, ci)]: (s, frozenset(members[(s, ci)])) for (_, ci, s) in names}
        new_base = step.complex
    total = Complex.from_top(tops)
    return CoveringMap(total, new_base, vmap, n, origin, subdivide)


# ---------------------------------------------------------------------------
# Cocycle extraction and sheet labels
# ---------------------------------------------------------------------------

def _total_neighbour(f: CoveringMap, top: Simplex, base_facet: Simplex) -> Simplex | None:
    face = tuple(v for v in top if f.vertex_map[v] in base_facet)
    for t in f.total.cofaces.get(face, ()):
        if t != top:
            return t
    return None


def _extract(f: CoveringMap) -> tuple[MonodromyCocycle, dict[Sheet, Simplex], dict[Simplex, Sheet]]:
    base = f.base
    n = f.degree
    root = base.tops[0]
    labels: dict[Sheet, Simplex] = {}
    sheet_of: dict[Simplex, Sheet] = {}
    for i, t in enumerate(f.lifts[root], start=1):
        labels[(root, i)] = t
        sheet_of[t] = (root, i)
    seen = {root}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for face, b in base.dual_adjacency[a]:
            if b in seen:
                continue
            seen.add(b)
            queue.append(b)
            for i in range(1, n + 1):
                nb = _total_neighbour(f, labels[(a, i)], face)
                if nb is None or f.image(nb) != b:
                    raise IncompatibleComplexes("total is not a pseudo-manifold over the base")
                labels[(b, i)] = nb
                sheet_of[nb] = (b, i)
    trans: dict[tuple[Simplex, Simplex], Permutation] = {}
    for a, nbrs in base.dual_adjacency.items():
        for face, b in nbrs:
            img = []
            for i in range(1, n + 1):
                nb = _total_neighbour(f, labels[(a, i)], face)
                if nb is None or nb not in sheet_of:
                    raise IncompatibleComplexes("cannot read transition across a shared face")
                img.append(sheet_of[nb][1])
            trans[(a, b)] = Permutation(tuple(img))
    mc = MonodromyCocycle(base, f.branch_set, n, trans)
    return mc, labels, sheet_of


def extract_cocycle(f: CoveringMap) -> MonodromyCocycle:
    return f._sheet_data[0]


def covering_monodromy(f: CoveringMap) -> PermGroup:
    return monodromy_group(extract_cocycle(f))


# ---------------------------------------------------------------------------
# Analysis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoveringReport:
    is_branched_covering: bool
    degree: int
    local_degrees: dict[int, int]
    singular_set: Subcomplex
    pseudo_singular_set: Subcomplex
    branch_set: Subcomplex
    branch_preimage: Subcomplex
    orbit_structure: dict[int, tuple[int, ...]]
    euler_total: int
    euler_base: int
    connected: bool


def analyze(f: CoveringMap) -> CoveringReport:
    fresh = CoveringMap.build(f.total, f.base, f.vertex_map)
    good = (is_good_subcomplex(fresh.total, fresh.singular_set)
            and is_good_subcomplex(fresh.base, fresh.branch_set)
            and fresh.base.is_connected())
    local = {v: fresh.local_degree(v) for v in fresh.total.vertices}
    orbit: dict[int, list[int]] = defaultdict(list)
    for v in fresh.total.vertices:
        y = fresh.vertex_map[v]
        if (y,) in fresh.branch_set.simplices:
            orbit[y].append(local[v])
    return CoveringReport(
        is_branched_covering=good,
        degree=fresh.degree,
        local_degrees=local,
        singular_set=fresh.singular_set,
        pseudo_singular_set=fresh.pseudo_singular_set,
        branch_set=fresh.branch_set,
        branch_preimage=fresh.branch_preimage,
        orbit_structure={y: tuple(sorted(v, reverse=True)) for y, v in sorted(orbit.items())},
        euler_total=fresh.total.euler_characteristic(),
        euler_base=fresh.base.euler_characteristic(),
        connected=fresh.total.is_connected(),
    )


def is_branched_covering(f: CoveringMap) -> bool:
    return analyze(f).is_branched_covering


def rh_check(f: CoveringMap) -> tuple[int, int]:
    if f.base.dim != 2:
        raise DimensionNotTwo("Riemann-Hurwitz check needs a two-dimensional base")
    preimages: dict[int, int] = defaultdict(int)
    for v in f.total.vertices:
        preimages[f.vertex_map[v]] += 1
    deficiency = sum(f.degree - preimages[y] for y in f.branch_set.vertices)
    return f.total.euler_characteristic(), f.degree * f.base.euler_characteristic() - deficiency


# ---------------------------------------------------------------------------
# Subdivision, composition, relabeling
# ---------------------------------------------------------------------------

def subdivide_covering(f: CoveringMap, times: int = 1) -> CoveringMap:
    current = f
    for _ in range(times):
        st, sb = current.total._sd_step, current.base._sd_step
        vmap = {v: sb.barycenter[current.image(s)] for v, s in st.simplex_of.items()}
        current = CoveringMap(st.complex, sb.complex, vmap, current.degree)
    return current


def _subdivision_gap(fine: Complex, coarse: Complex, limit: int = 3) -> int | None:
    current = coarse
    for k in range(limit + 1):
        if current == fine:
            return k
        if len(current.simplices) > len(fine.simplices):
            return None
        current = current._sd_step.complex
    return None


def align(f: CoveringMap, g: CoveringMap) -> tuple[CoveringMap, CoveringMap]:
    """Subdivide one side so that ``f.base == g.total``."""
    k = _subdivision_gap(f.base, g.total)
    if k is not None:
        return f, subdivide_covering(g, k)
    k = _subdivision_gap(g.total, f.base)
    if k is not None:
        return subdivide_covering(f, k), g
    raise IncompatibleComplexes("the base of the first map is not the total of the second")


def compose(f: CoveringMap, g: CoveringMap) -> CoveringMap:
    """The composite ``g o f``."""
    f, g = align(f, g)
    vmap = {v: g.vertex_map[w] for v, w in f.vertex_map.items()}
    return CoveringMap(f.total, g.base, vmap, f.degree * g.degree)


def compose_vertex_maps(f: CoveringMap, g: CoveringMap) -> tuple[CoveringMap, dict[int, int]]:
    """Composite vertex map on a possibly subdivided total; returns the aligned ``f`` too."""
    f2, g2 = align(f, g)
    return f2, {v: g2.vertex_map[w] for v, w in f2.vertex_map.items()}


def relabel_covering(f: CoveringMap, total_map: Mapping[int, int] | None = None,
                     base_map: Mapping[int, int] | None = None) -> CoveringMap:
    tm = total_map or {v: v for v in f.total.vertices}
    bm = base_map or {v: v for v in f.base.vertices}
    vmap = {tm[v]: bm[w] for v, w in f.vertex_map.items()}
    origin = None
    return CoveringMap(f.total.relabel(tm), f.base.relabel(bm), vmap, f.degree, origin,
                       f.fox_subdivided)


def dense_relabeling(c: Complex) -> dict[int, int]:
    return {v: i for i, v in enumerate(c.vertices, start=1)}


def restrict_to_total(f: CoveringMap, part: Complex) -> CoveringMap:
    """Restriction over a union of components of the total, relabeled densely."""
    ren = dense_relabeling(part)
    vmap = {ren[v]: f.vertex_map[v] for v in part.vertices}
    origin = {ren[v]: f.origin[v] for v in part.vertices} if f.origin is not None else None
    return CoveringMap.build(part.relabel(ren), f.base, vmap, origin=origin,
                             fox_subdivided=f.fox_subdivided)


def components(f: CoveringMap) -> list[CoveringMap]:
    return [restrict_to_total(f, c) for c in f.total.connected_components()]


# ---------------------------------------------------------------------------
# Isomorphisms and automorphisms over the base
# ---------------------------------------------------------------------------

def propagate(c1: Complex, c2: Complex, start: Simplex, image: Sequence[int],
              vmap: dict[int, int] | None = None) -> dict[int, int] | None:
    """Extend ``start[i] -> image[i]`` across the dual graph of ``c1``.

    Each step crosses a shared facet; the image of the new vertex is forced
    as the opposite vertex of the other coface in ``c2``.  Returns ``None``
    on any inconsistency.  Only the strongly connected part containing
    ``start`` is mapped.
    """
    phi = dict(vmap or {})
    for a, b in zip(start, image):
        if phi.setdefault(a, b) != b:
            return None
    if tuple(sorted(image)) not in c2.simplices:
        return None
    seen = {start}
    queue = deque([start])
    adj = c1.dual_adjacency
    while queue:
        t = queue.popleft()
        for facet, u in adj[t]:
            if u in seen:
                continue
            img_f = tuple(sorted(phi[v] for v in facet))
            img_t = tuple(sorted(phi[v] for v in t))
            other = [x for x in c2.cofaces.get(img_f, ()) if x != img_t and len(x) == len(t)]
            if len(other) != 1:
                return None
            new_v = next(v for v in u if v not in facet)
            new_w = next(w for w in other[0] if w not in img_f)
            if phi.setdefault(new_v, new_w) != new_w:
                return None
            seen.add(u)
            queue.append(u)
    return phi


def _strong_components(c: Complex) -> list[list[Simplex]]:
    seen: set[Simplex] = set()
    out = []
    for t in c.tops:
        if t in seen:
            continue
        comp = [t]
        seen.add(t)
        queue = [t]
        while queue:
            x = queue.pop()
            for _, u in c.dual_adjacency[x]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    queue.append(u)
        out.append(sorted(comp))
    return out


def _is_simplicial_bijection(c1: Complex, c2: Complex, phi: Mapping[int, int]) -> bool:
    if set(phi) != set(c1.vertices) or len(set(phi.values())) != len(phi):
        return False
    if set(phi.values()) != set(c2.vertices) or len(c1.simplices) != len(c2.simplices):
        return False
    return all(tuple(sorted(phi[v] for v in t)) in c2.simplices for t in c1.maximal)


def isomorphisms_over_base(f: CoveringMap, g: CoveringMap) -> Iterator[dict[int, int]]:
    """Simplicial isomorphisms ``phi`` of totals with ``g o phi = f``."""
    if f.base != g.base or f.degree != g.degree:
        return
    comps = _strong_components(f.total)

    def order_like(t: Simplex, cand: Simplex, fmap, gmap) -> tuple[int, ...] | None:
        by_base = {gmap[w]: w for w in cand}
        try:
            return tuple(by_base[fmap[v]] for v in t)
        except KeyError:
            return None

    def rec(i: int, phi: dict[int, int]) -> Iterator[dict[int, int]]:
        if i == len(comps):
            if _is_simplicial_bijection(f.total, g.total, phi) and \
                    all(g.vertex_map[phi[v]] == f.vertex_map[v] for v in phi):
                yield dict(phi)
            return
        start = comps[i][0]
        used = set(phi.values())
        for cand in g.lifts[f.image(start)]:
            if any(w in used for w in cand):
                continue
            img = order_like(start, cand, f.vertex_map, g.vertex_map)
            if img is None:
                continue
            ext = propagate(f.total, g.total, start, img, phi)
            if ext is None or len(set(ext.values())) != len(ext):
                continue
            if any(g.vertex_map[ext[v]] != f.vertex_map[v] for v in ext):
                continue
            yield from rec(i + 1, ext)

    yield from rec(0, {})


def is_isomorphic(f: CoveringMap, g: CoveringMap) -> bool:
    return next(isomorphisms_over_base(f, g), None) is not None


def deck_transformations(f: CoveringMap) -> list[dict[int, int]]:
    return list(isomorphisms_over_base(f, f))


def vertex_perm(phi: Mapping[int, int], degree: int) -> Permutation:
    return Permutation(tuple(phi.get(i, i) for i in range(1, degree + 1)))


@dataclass(frozen=True)
class Regularity:
    regular: bool
    monodromy: PermGroup
    deck: PermGroup | None

    def __bool__(self) -> bool:
        return self.regular


def is_regular(f: CoveringMap) -> Regularity:
    if not f.total.is_connected():
        raise TotalNotConnected("regularity test needs a connected total")
    g = covering_monodromy(f)
    regular = g.order() == f.degree
    deck = None
    if regular:
        n = max(f.total.vertices)
        perms = [vertex_perm(phi, n) for phi in deck_transformations(f)]
        deck = PermGroup.from_elements(perms, n)
        if deck.order() != f.degree:
            raise IncompatibleComplexes("deck group realization disagrees with the monodromy test")
    return Regularity(regular, g, deck)


# ---------------------------------------------------------------------------
# Induced maps between Fox totals
# ---------------------------------------------------------------------------

def induced_map(f: CoveringMap, target: CoveringMap,
                sheet_fn: Callable[[Simplex, int], int]) -> CoveringMap:
    """Map a Fox-built total onto ``target`` through a sheet assignment.

    ``sheet_fn(top, sheet)`` gives, for a sheet of ``f`` over a base top,
    the sheet label of ``target`` over the same top.  Both coverings must
    share the base on which ``f`` was constructed.
    """
    if f.origin is None:
        raise InputError("induced maps need a Fox-built source")
    labels = target.sheet_labels
    sub = f.fox_subdivided
    vmap = {}
    for v, (s, members) in f.origin.items():
        top, k = min(members)
        tt = labels[(top, sheet_fn(top, k))]
        face = tuple(w for w in tt if target.vertex_map[w] in s)
        vmap[v] = target.total._sd_step.barycenter[face] if sub else face[0]
    base = sd(target.total) if sub else target.total
    return CoveringMap.build(f.total, base, vmap)


# ---------------------------------------------------------------------------
# Pullbacks and regularization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pullback:
    f: CoveringMap
    p1: CoveringMap
    p2: CoveringMap


def product_cocycle(m1: MonodromyCocycle, m2: MonodromyCocycle) -> MonodromyCocycle:
    d2 = m2.sheets
    n = m1.sheets * d2
    trans = {}
    for key, a in m1.transitions.items():
        b = m2.transitions[key]
        trans[key] = Permutation(tuple((a(i) - 1) * d2 + b(j)
                                       for i in range(1, m1.sheets + 1) for j in range(1, d2 + 1)))
    return MonodromyCocycle(m1.base, m1.branch.union(m2.branch), n, trans)


def _split(k: int, d2: int) -> tuple[int, int]:
    return (k - 1) // d2 + 1, (k - 1) % d2 + 1


def common_base(f1: CoveringMap, f2: CoveringMap) -> tuple[CoveringMap, CoveringMap]:
    """Subdivide the coarser of two coverings so that both have the same base."""
    if f1.base == f2.base:
        return f1, f2
    k = _subdivision_gap(f1.base, f2.base)
    if k is not None:
        return f1, subdivide_covering(f2, k)
    k = _subdivision_gap(f2.base, f1.base)
    if k is not None:
        return subdivide_covering(f1, k), f2
    raise BasesDiffer("pullback needs a common base up to barycentric subdivision")


def pullback(f1: CoveringMap, f2: CoveringMap) -> Pullback:
    f1, f2 = common_base(f1, f2)
    m1, m2 = extract_cocycle(f1), extract_cocycle(f2)
    d2 = f2.degree
    f = fox_complete(product_cocycle(m1, m2))
    p1 = induced_map(f, f1, lambda t, k: _split(k, d2)[0])
    p2 = induced_map(f, f2, lambda t, k: _split(k, d2)[1])
    return Pullback(f, p1, p2)


def _restrict_pullback(pb: Pullback, part: Complex) -> Pullback:
    ren = dense_relabeling(part)
    f = restrict_to_total(pb.f, part)

    def restrict(p: CoveringMap) -> CoveringMap:
        vmap = {ren[v]: p.vertex_map[v] for v in part.vertices}
        return CoveringMap.build(f.total, p.base, vmap)

    return Pullback(f, restrict(pb.p1), restrict(pb.p2))


def connected_pullback(f1: CoveringMap, f2: CoveringMap, check: bool = True) -> Pullback:
    if check and not (is_regular(f1).regular or is_regular(f2).regular):
        raise NeitherRegular("connected pullback needs a regular factor")
    f1, f2 = common_base(f1, f2)
    pb = pullback(f1, f2)
    t0 = f1.base.tops[0]
    anchor = next(v for v, (_, members) in sorted(pb.f.origin.items()) if (t0, 1) in members)
    chosen = next(c for c in pb.f.total.connected_components() if (anchor,) in c.simplices)
    return _restrict_pullback(pb, chosen)


@dataclass(frozen=True)
class Regularization:
    r: CoveringMap
    s: CoveringMap
    group: PermGroup
    kernel_core: PermGroup


def minimal_regularization(f: CoveringMap) -> Regularization:
    if not f.total.is_connected():
        raise TotalNotConnected("minimal regularization needs a connected total")
    mc = extract_cocycle(f)
    g = monodromy_group(mc)
    if g.order() == f.degree:
        return Regularization(f, identity_covering(f.total), g, PermGroup.trivial(g.degree))
    stab = g.stabilizer(1)
    n = core(g, stab)
    act = coset_action(g, n)
    reps = [min(c) for c in act.cosets]
    trans = {k: act.image(p) for k, p in mc.transitions.items()}
    rmc = MonodromyCocycle(mc.base, mc.branch, act.index, trans)
    r = fox_complete(rmc)
    s = induced_map(r, f, lambda t, c: reps[c - 1](1))
    return Regularization(r, s, g, n)
