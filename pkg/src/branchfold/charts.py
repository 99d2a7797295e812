"""Branchfold charts ``(U, P, V, G = HK)`` and their calculus.

A :class:`Chart` is a connected complex ``P`` with a simplicial action of a
finite group ``G``, a subgroup ``H`` and a normal subgroup ``K`` with
``HK = G``.  The derived maps ``p_H: P -> U``, ``p_K: P -> V`` and the
projections to ``P/G`` are computed on the least barycentric subdivision of
``P`` where ``G``, ``H`` and ``K`` all act regularly.

Chart isomorphisms are searched by brute force: group isomorphisms carrying
``H`` and ``K`` to their counterparts, then equivariant simplicial
isomorphisms found by propagation across the dual graph.  Triangulations that
differ by barycentric subdivision are compared after subdividing the coarser
one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from . import covering as cov
from .action import (SimplicialAction, is_regular_on, pad, quotient_of, regular_level,
                     singular_simplices)
from .complex import (boundary_facets, Complex, Simplex, Subcomplex, barycentric_subdivide, cone,
                      is_good_subcomplex, is_homogeneous, map_orientation_sign, orient,
                      star_link)
from .covering import CoveringMap
from .errors import (BranchfoldError, ChartInvalid, GroupTooLarge, InputError,
                     NotABranchedCovering, NotCodimTwo, NotConical, NotEquivalent,
                     NotLiftable, NotOrientable, NotPseudoManifold, OrientationViolation)
from .perm import (Permutation, PermGroup, coset_action, core, isomorphisms,
                   subgroup_relations)

ISO_GROUP_CAP = 48
ISO_TOP_CAP = 40000


# ---------------------------------------------------------------------------
# Chart type
# ---------------------------------------------------------------------------

def _group_on(c: Complex, gens: Iterable[Permutation]) -> PermGroup:
    degree = max(c.vertices)
    return PermGroup.generate([pad(g, degree) for g in gens], degree)


def vertex_at_level(c: Complex, v: int, level: int) -> int:
    """Id of an original vertex after ``level`` subdivision steps."""
    current, vid = c, v
    for _ in range(level):
        step = current._sd_step
        vid = step.barycenter[(vid,)]
        current = step.complex
    return vid


def perm_on(vmap: Mapping[int, int], degree: int) -> Permutation:
    return Permutation(tuple(vmap.get(i, i) for i in range(1, degree + 1)))


@dataclass(frozen=True, eq=False)
class Chart:
    P: Complex
    G: PermGroup
    H: PermGroup
    K: PermGroup
    apex: int | None = None
    forced_level: int | None = None

    @classmethod
    def make(cls, P: Complex, G: Iterable[Permutation], H: Iterable[Permutation],
             K: Iterable[Permutation], apex: int | None = None,
             level: int | None = None) -> "Chart":
        return cls(P, _group_on(P, G), _group_on(P, H), _group_on(P, K), apex, level)

    @classmethod
    def from_groups(cls, P: Complex, H: PermGroup, K: PermGroup, apex: int | None = None,
                    level: int | None = None) -> "Chart":
        G = PermGroup.generate(H.generators + K.generators, H.degree)
        return cls(P, G, H, K, apex, level)

    @property
    def action(self) -> SimplicialAction:
        return SimplicialAction(self.P, self.G)

    @cached_property
    def _action(self) -> SimplicialAction:
        return SimplicialAction(self.P, self.G)

    @cached_property
    def level(self) -> int:
        if self.forced_level is not None:
            return self.forced_level
        return regular_level(self._action, [self.H, self.K])

    @cached_property
    def leveled(self):
        return self._action.at_level(self.level)

    @property
    def P_level(self) -> Complex:
        return self.leveled.complex

    def lift(self, g: Permutation) -> Permutation:
        return self.leveled.lift[g]

    def lift_group(self, h: PermGroup) -> PermGroup:
        return self.leveled.induced_group(h)

    @cached_property
    def G_level(self) -> PermGroup:
        return self.lift_group(self.G)

    @cached_property
    def H_level(self) -> PermGroup:
        return self.lift_group(self.H)

    @cached_property
    def K_level(self) -> PermGroup:
        return self.lift_group(self.K)

    @cached_property
    def _U(self):
        return quotient_of(self.P_level, self.H_level)

    @cached_property
    def _V(self):
        return quotient_of(self.P_level, self.K_level)

    @cached_property
    def _W(self):
        return quotient_of(self.P_level, self.G_level)

    @property
    def U(self) -> Complex:
        return self._U[0]

    @property
    def V(self) -> Complex:
        return self._V[0]

    @property
    def W(self) -> Complex:
        return self._W[0]

    @cached_property
    def p_H(self) -> CoveringMap:
        return CoveringMap.build(self.P_level, self.U, self._U[1])

    @cached_property
    def p_K(self) -> CoveringMap:
        return CoveringMap.build(self.P_level, self.V, self._V[1])

    @cached_property
    def pi_G(self) -> CoveringMap:
        return CoveringMap.build(self.P_level, self.W, self._W[1])

    @cached_property
    def p(self) -> CoveringMap:
        nh, ng = self._U[1], self._W[1]
        return CoveringMap.build(self.U, self.W, {nh[v]: ng[v] for v in self.P_level.vertices})

    @cached_property
    def p_GK(self) -> CoveringMap:
        nk, ng = self._V[1], self._W[1]
        return CoveringMap.build(self.V, self.W, {nk[v]: ng[v] for v in self.P_level.vertices})

    @property
    def apex_level(self) -> int | None:
        return None if self.apex is None else vertex_at_level(self.P, self.apex, self.level)

    def is_conical(self) -> bool:
        if self.apex is None or (self.apex,) not in self.P.simplices:
            return False
        if any(g(self.apex) != self.apex for g in self.G.generators):
            return False
        if all(self.apex in t for t in self.P.maximal):
            return True
        # a subdivided cone: the apex must stay off the boundary
        return not any(self.apex in f for f in boundary_facets(self.P))

    def is_reduced(self) -> bool:
        return core(self.G, self.H.intersection(self.K)).is_trivial()

    def index(self) -> Fraction:
        return Fraction(self.H.order(), self.K.order())

    def relabel(self, mapping: Mapping[int, int]) -> "Chart":
        P2 = self.P.relabel(mapping)
        n = max(P2.vertices)
        inv = {mapping[v]: v for v in self.P.vertices}

        def conj(g: Permutation) -> Permutation:
            return perm_on({w: mapping[g(inv[w])] for w in P2.vertices}, n)

        def grp(h: PermGroup) -> PermGroup:
            return PermGroup.generate([conj(g) for g in h.generators], n)

        apex = None if self.apex is None else mapping[self.apex]
        return Chart(P2, grp(self.G), grp(self.H), grp(self.K), apex, self.forced_level)

    def __repr__(self) -> str:
        return (f"Chart(|G|={self.G.order()}, |H|={self.H.order()}, |K|={self.K.order()}, "
                f"P={self.P!r}, apex={self.apex})")


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportEntry:
    key: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class ChartReport:
    entries: tuple[ReportEntry, ...]

    @property
    def valid(self) -> bool:
        return all(e.ok for e in self.entries)

    def failures(self) -> list[str]:
        return [e.key for e in self.entries if not e.ok]

    def __getitem__(self, key: str) -> bool:
        return next(e.ok for e in self.entries if e.key == key)


def _is_pm(c: Complex) -> bool:
    return c.dim >= 1 and is_homogeneous(c) and all(
        len(c.cofaces.get(f, ())) in (1, 2) for f in c.simplices_of_dim(c.dim - 1))


def _orientation_ok(c: Complex) -> tuple[bool, str]:
    if not _is_pm(c):
        return False, "not a pseudo-manifold"
    try:
        orient(c)
    except (NotOrientable, NotPseudoManifold) as exc:
        return False, str(exc)
    return True, ""


def validate_chart(c: Chart, analyze_maps: bool = True) -> ChartReport:
    entries: list[ReportEntry] = []

    def add(key: str, ok: bool, detail: str = "") -> None:
        entries.append(ReportEntry(key, bool(ok), detail))

    rel = subgroup_relations(c.G, c.H, c.K)
    add("h_leq_g", rel.h_leq_g)
    add("k_normal_in_g", rel.k_normal_in_g)
    add("product_is_g", rel.product_is_g)
    add("p_connected", c.P.is_connected())
    simplicial = all(tuple(sorted(g(v) for v in t)) in c.P.simplices
                     for g in c.G.generators for t in c.P.maximal)
    add("action_simplicial", simplicial)
    verts = set(c.P.vertices)
    effective = all(g.is_identity() or any(g(v) != v for v in verts) for g in c.G.elements)
    add("action_effective", effective)
    if not (rel.ok and simplicial and effective and c.P.is_connected()):
        return ChartReport(tuple(entries))
    sing = singular_simplices(c.P_level, c.G_level)
    add("action_good", is_good_subcomplex(c.P_level, sing))
    ok, detail = _orientation_ok(c.P)
    add("p_orientable_pm", ok, detail)
    ok_v, detail = _orientation_ok(c.V)
    add("v_orientable_pm", ok_v, detail)
    if ok_v:
        ov = orient(c.V)
        nk = c._V[1]
        preserved = True
        for g in c.G.generators:
            gl = c.lift(g)
            vmap = {nk[v]: nk[gl(v)] for v in c.P_level.vertices}
            if map_orientation_sign(c.V, ov, c.V, ov, vmap) != 1:
                preserved = False
        add("g_mod_k_preserves_v_orientation", preserved)
    else:
        add("g_mod_k_preserves_v_orientation", False, "V not orientable")
    left = {v: c.p.vertex_map[c.p_H.vertex_map[v]] for v in c.P_level.vertices}
    right = {v: c.p_GK.vertex_map[c.p_K.vertex_map[v]] for v in c.P_level.vertices}
    add("diagram_commutes", left == right)
    if analyze_maps:
        for name, m in (("p_H", c.p_H), ("p_K", c.p_K), ("p", c.p), ("p_G_mod_K", c.p_GK)):
            add(f"{name}_branched_covering", cov.analyze(m).is_branched_covering)
    return ChartReport(tuple(entries))


# ---------------------------------------------------------------------------
# Index, restriction, reduction
# ---------------------------------------------------------------------------

def chart_index(c: Chart) -> Fraction:
    if not c.is_conical():
        raise NotConical("the index is defined for conical charts")
    return c.index()


def _restrict_group(h: PermGroup, ren: Mapping[int, int], n: int) -> PermGroup:
    inv = {w: v for v, w in ren.items()}
    gens = [perm_on({w: ren[g(inv[w])] for w in inv}, n) for g in h.generators]
    return PermGroup.generate(gens, n)


def conical_restriction(c: Chart, x: int, level: int = 0) -> Chart:
    """Restrict to the closed star of vertex ``x`` of ``sd^level(P)``."""
    la = c._action.at_level(level)
    X = la.complex
    star, _ = star_link(X, x)
    sc = star.as_complex()
    ren = {v: i for i, v in enumerate(sc.vertices, start=1)}
    n = len(ren)
    lifted = {g: la.lift[g] for g in c.G.elements}
    stab = [g for g in c.G.elements if lifted[g](x) == x]
    h_x = [g for g in stab if g in c.H]
    k_x = [g for g in stab if g in c.K]
    Hx = PermGroup.from_elements(h_x, c.G.degree)
    Kx = PermGroup.from_elements(k_x, c.G.degree)

    def image(group: PermGroup) -> PermGroup:
        gens = []
        for g in group.generators:
            gl = lifted[g]
            gens.append(perm_on({ren[v]: ren[gl(v)] for v in sc.vertices}, n))
        return PermGroup.generate(gens, n)

    H2, K2 = image(Hx), image(Kx)
    G2 = PermGroup.generate(H2.generators + K2.generators, n)
    return Chart(sc.relabel(ren), G2, H2, K2, ren[x])


def point_stabilizer(c: Chart, x: int, level: int = 0) -> PermGroup:
    """``Stab_G(x)`` for a vertex ``x`` of ``sd^level(P)``, as a subgroup of ``G``."""
    lift = c._action.at_level(level).lift
    return PermGroup.from_elements([g for g in c.G.elements if lift[g](x) == x], c.G.degree)


@dataclass(frozen=True)
class Reduction:
    chart: Chart
    N: PermGroup
    projection: CoveringMap
    source: Chart


def quotient_chart_by_normal(c: Chart, N: PermGroup) -> Reduction:
    """The chart ``(P/N, G/N, H/N, K/N)`` with its domination map."""
    if not N.is_normal_in(c.G):
        raise InputError("N must be normal in G")
    if N.is_trivial():
        proj = cov.identity_covering(c.P)
        return Reduction(c, N, proj, c)
    act = SimplicialAction(c.P, N)
    level = regular_level(act)
    la = c._action.at_level(level)
    X = la.complex
    nN = la.induced_group(N)
    Q, name = quotient_of(X, nN)
    n = max(Q.vertices)

    def down(group: PermGroup) -> PermGroup:
        gens = []
        for g in group.generators:
            gl = la.lift[g]
            gens.append(perm_on({name[v]: name[gl(v)] for v in X.vertices}, n))
        return PermGroup.generate(gens, n)

    apex = None if c.apex is None else name[vertex_at_level(c.P, c.apex, level)]
    out = Chart(Q, down(c.G), down(c.H), down(c.K), apex)
    proj = CoveringMap.build(X, Q, name)
    return Reduction(out, N, proj, c)


def reduce_chart(c: Chart) -> Reduction:
    N = core(c.G, c.H.intersection(c.K))
    return quotient_chart_by_normal(c, N)


# ---------------------------------------------------------------------------
# Isomorphism, domination, equivalence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartIsomorphism:
    eta: dict[Permutation, Permutation]
    vertex_map: dict[int, int]
    levels: tuple[int, int]


def _vertex_invariants(X: Complex, group: PermGroup) -> dict[int, tuple[int, int]]:
    orbit_size = {}
    for v in X.vertices:
        if v not in orbit_size:
            orbit = {g(v) for g in group.elements}
            for w in orbit:
                orbit_size[w] = len(orbit)
    return {v: (len(X.top_cofaces[(v,)]), orbit_size[v]) for v in X.vertices}


def _level_pairs(c1: Chart, c2: Chart, max_level: int = 3) -> list[tuple[int, int]]:
    tops1, tops2 = len(c1.P.tops), len(c2.P.tops)
    m = c1.P.dim
    factor = 1
    for k in range(2, m + 2):
        factor *= k
    pairs = []
    for a in range(max_level + 1):
        for b in range(max_level + 1):
            if tops1 * factor ** a == tops2 * factor ** b and tops1 * factor ** a <= ISO_TOP_CAP:
                pairs.append((a, b))
    pairs.sort(key=lambda ab: (ab[0] + ab[1], ab))
    return pairs


def chart_isomorphism(c1: Chart, c2: Chart, max_level: int = 3) -> ChartIsomorphism | None:
    if (c1.G.order(), c1.H.order(), c1.K.order()) != (c2.G.order(), c2.H.order(), c2.K.order()):
        return None
    if c1.P.dim != c2.P.dim:
        return None
    if c1.G.order() > ISO_GROUP_CAP:
        raise GroupTooLarge("chart isomorphism search is capped at groups of order 48")
    etas = list(isomorphisms(c1.G, c2.G, [(c1.H, c2.H), (c1.K, c2.K)]))
    if not etas:
        return None
    for a, b in _level_pairs(c1, c2, max_level):
        A1 = SimplicialAction(c1.P, c1.G).at_level(a)
        A2 = SimplicialAction(c2.P, c2.G).at_level(b)
        X1, X2 = A1.complex, A2.complex
        if len(X1.simplices) != len(X2.simplices):
            continue
        inv1 = _vertex_invariants(X1, A1.group)
        inv2 = _vertex_invariants(X2, A2.group)
        if sorted(inv1.values()) != sorted(inv2.values()):
            continue
        apex1 = None if c1.apex is None else vertex_at_level(c1.P, c1.apex, a)
        apex2 = None if c2.apex is None else vertex_at_level(c2.P, c2.apex, b)
        t0 = _rarest_top(X1, inv1, apex1)
        sig0 = [inv1[v] for v in t0]
        gens1 = c1.G.generators
        for eta in etas:
            pairs = [(A1.lift[g], A2.lift[eta[g]]) for g in gens1]
            for cand in X2.tops:
                if sorted(inv2[w] for w in cand) != sorted(sig0):
                    continue
                if apex2 is not None and apex1 in t0 and apex2 not in cand:
                    continue
                for order in permutations(cand):
                    if any(inv2[w] != s for w, s in zip(order, sig0)):
                        continue
                    if apex1 is not None and apex2 is not None and apex1 in t0 \
                            and order[t0.index(apex1)] != apex2:
                        continue
                    phi = cov.propagate(X1, X2, t0, order)
                    if phi is None or not cov._is_simplicial_bijection(X1, X2, phi):
                        continue
                    if all(phi[g1(v)] == g2(phi[v]) for g1, g2 in pairs for v in X1.vertices):
                        return ChartIsomorphism(eta, phi, (a, b))
    return None


def _rarest_top(X: Complex, inv: Mapping[int, tuple], apex: int | None) -> Simplex:
    counts: dict[tuple, int] = {}
    for t in X.tops:
        key = tuple(sorted(inv[v] for v in t))
        counts[key] = counts.get(key, 0) + 1
    pool = [t for t in X.tops if apex is None or apex in t] or list(X.tops)
    return min(pool, key=lambda t: (counts[tuple(sorted(inv[v] for v in t))], t))


def charts_isomorphic(c1: Chart, c2: Chart) -> bool:
    return chart_isomorphism(c1, c2) is not None


@dataclass(frozen=True)
class Domination:
    N: PermGroup
    reduction: Reduction
    isomorphism: ChartIsomorphism


def dominates(c1: Chart, c2: Chart) -> Domination | None:
    inter = c1.H.intersection(c1.K)
    for N in inter.subgroups():
        if not N.is_normal_in(c1.G):
            continue
        q = N.order()
        if (c1.G.order() // q, c1.H.order() // q, c1.K.order() // q) != \
                (c2.G.order(), c2.H.order(), c2.K.order()):
            continue
        red = quotient_chart_by_normal(c1, N)
        iso = chart_isomorphism(red.chart, c2)
        if iso is not None:
            return Domination(N, red, iso)
    return None


def charts_equivalent(c1: Chart, c2: Chart) -> bool:
    r1, r2 = reduce_chart(c1), reduce_chart(c2)
    return chart_isomorphism(r1.chart, r2.chart) is not None


# ---------------------------------------------------------------------------
# Chart from a regular covering and its deck group
# ---------------------------------------------------------------------------

def _deck(r: CoveringMap) -> PermGroup:
    reg = cov.is_regular(r)
    if not reg.regular:
        raise NotABranchedCovering("expected a regular covering")
    return reg.deck


def _stabilizing(deck: PermGroup, vmap: Mapping[int, int]) -> PermGroup:
    keep = [d for d in deck.elements if all(vmap[d(v)] == w for v, w in vmap.items())]
    return PermGroup.from_elements(keep, deck.degree)


def _unique_vertex_over(m: CoveringMap, target: int | None) -> int | None:
    if target is None:
        return None
    hits = [v for v, w in m.vertex_map.items() if w == target]
    return hits[0] if len(hits) == 1 else None


def _dense_chart(R: Complex, H: PermGroup, K: PermGroup, apex: int | None) -> Chart:
    ren = {v: i for i, v in enumerate(R.vertices, start=1)}
    n = len(ren)
    H2 = _restrict_group(H, ren, n)
    K2 = _restrict_group(K, ren, n)
    G2 = PermGroup.generate(H2.generators + K2.generators, n)
    return Chart(R.relabel(ren), G2, H2, K2, None if apex is None else ren[apex])


def _apex_target(c: Chart, base: Complex) -> int | None:
    """The apex of ``c`` in whatever subdivision of ``P_level`` ``base`` is."""
    if c.apex is None:
        return None
    current, vid = c.P_level, c.apex_level
    for _ in range(4):
        if current == base:
            return vid
        step = current._sd_step
        vid = step.barycenter[(vid,)]
        current = step.complex
    return None


# ---------------------------------------------------------------------------
# Common dominating chart
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommonDomination:
    chart: Chart
    over_first: Domination | None
    over_second: Domination | None


def common_dominating_chart(c1: Chart, c2: Chart) -> CommonDomination:
    if c1 is c2:
        same = dominates(c1, c1)
        return CommonDomination(c1, same, same)
    r1, r2 = reduce_chart(c1), reduce_chart(c2)
    iso = chart_isomorphism(r2.chart, r1.chart)
    if iso is None:
        raise NotEquivalent("the charts have non-isomorphic reductions")
    a2, a1 = iso.levels
    pi1 = cov.subdivide_covering(r1.projection, a1)
    pi2 = cov.subdivide_covering(r2.projection, a2)
    pi2 = cov.CoveringMap(pi2.total, pi1.base,
                          {v: iso.vertex_map[w] for v, w in pi2.vertex_map.items()}, pi2.degree)
    pb = cov.connected_pullback(pi1, pi2, check=False)
    # composite to P/G of the common reduction
    k = cov._subdivision_gap(r1.chart.pi_G.total, pb.f.base)
    if k:
        pb = cov.Pullback(*(cov.subdivide_covering(m, k) for m in (pb.f, pb.p1, pb.p2)))
    f, g = cov.align(pb.f, r1.chart.pi_G)
    comp = cov.CoveringMap(f.total, g.base, {v: g.vertex_map[w] for v, w in f.vertex_map.items()},
                           f.degree * g.degree)
    reg = cov.minimal_regularization(comp)
    m1 = cov.compose(reg.s, pb.p1)
    deck = _deck(reg.r)
    u1 = cov.compose(m1, _lift_to(c1.p_H, c1, r1, a1))
    v1 = cov.compose(m1, _lift_to(c1.p_K, c1, r1, a1))
    Hn = _stabilizing(deck, u1.vertex_map)
    Kn = _stabilizing(deck, v1.vertex_map)
    apex = _unique_vertex_over(m1, _apex_target(c1, m1.base))
    chart = _dense_chart(reg.r.total, Hn, Kn, apex)
    d1, d2 = dominates(chart, c1), dominates(chart, c2)
    if d1 is None or d2 is None:
        raise NotEquivalent("assembled chart does not dominate both inputs")
    return CommonDomination(chart, d1, d2)


def _lift_to(m: CoveringMap, c: Chart, r: Reduction, a: int) -> CoveringMap:
    """``m`` (defined on ``P_level``) re-expressed on the domain of the domination map."""
    src = r.projection.total
    if src == m.total:
        return m
    k = cov._subdivision_gap(src, m.total)
    if k is not None:
        return cov.subdivide_covering(m, k)
    k = cov._subdivision_gap(m.total, src)
    if k is not None:
        return m
    raise NotEquivalent("domination map and chart projection live on unrelated triangulations")


# ---------------------------------------------------------------------------
# Lifting and quotients of charts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LiftedChart:
    chart: Chart
    regularization: cov.Regularization
    to_P: CoveringMap
    to_X: CoveringMap


def lift_chart(f: CoveringMap, c: Chart, component: int = 0) -> LiftedChart:
    """Lift ``c`` through a branched covering ``f`` of its ``U`` side."""
    if cov._subdivision_gap(f.base, c.U) is None:
        raise NotABranchedCovering("the covering is not over the chart's U")
    if f.degree == 1 and f.total == f.base and all(v == w for v, w in f.vertex_map.items()) \
            and f.base == c.U:
        ident = cov.identity_covering(c.P_level)
        return LiftedChart(c, cov.Regularization(ident, ident, c.G, PermGroup.trivial(1)),
                           ident, cov.identity_covering(c.U))
    parts = cov.components(f)
    f = parts[component]
    if not cov.analyze(f).is_branched_covering:
        raise NotABranchedCovering("input map is not a branched covering")
    pH = _subdivided_to(c.p_H, f.base)
    pb = cov.connected_pullback(pH, f, check=False)
    comp = cov.compose(pb.p1, c.pi_G)
    reg = cov.minimal_regularization(comp)
    m1 = cov.compose(reg.s, pb.p1)
    m2 = cov.compose(reg.s, pb.p2)
    deck = _deck(reg.r)
    kmap = cov.compose(m1, c.p_K)
    Hn = _stabilizing(deck, m2.vertex_map)
    Kn = _stabilizing(deck, kmap.vertex_map)
    apex = _unique_vertex_over(m1, _apex_target(c, m1.base))
    chart = _dense_chart(reg.r.total, Hn, Kn, apex)
    return LiftedChart(chart, reg, m1, m2)


def _subdivided_to(m: CoveringMap, base: Complex) -> CoveringMap:
    k = cov._subdivision_gap(base, m.base)
    if k is None:
        raise NotABranchedCovering("bases are unrelated")
    return cov.subdivide_covering(m, k)


def quotient_chart(c: Chart, L: Sequence[Permutation]) -> Chart:
    """Quotient by chart automorphisms of ``P`` normalizing ``H`` and ``K``."""
    degree = c.G.degree
    gens = [pad(l, degree) for l in L]
    for l in gens:
        if any(tuple(sorted(l(v) for v in t)) not in c.P.simplices for t in c.P.maximal):
            raise NotLiftable(f"{l} is not a simplicial automorphism of P")
        if c.apex is not None and l(c.apex) != c.apex:
            raise NotLiftable(f"{l} moves the apex")
        li = l.inverse()
        for grp, name in ((c.H, "H"), (c.K, "K")):
            if any(l * h * li not in grp for h in grp.generators):
                raise NotLiftable(f"{l} does not normalize {name}, so it does not descend")
    if gens:
        o = orient(c.P)
        for l in gens:
            if map_orientation_sign(c.P, o, c.P, o, {v: l(v) for v in c.P.vertices}) != 1:
                raise OrientationViolation(f"{l} reverses the orientation of P")
    Hbar = PermGroup.generate(c.H.generators + tuple(gens), degree)
    Gbar = PermGroup.generate(Hbar.generators + c.K.generators, degree)
    out = Chart(c.P, Gbar, Hbar, c.K, c.apex)
    rel = subgroup_relations(Gbar, Hbar, c.K)
    if not rel.ok or not c.H.is_normal_in(Hbar):
        raise NotLiftable("lifted automorphisms do not assemble into a chart")
    level = max(out.level, c.level,
                regular_level(SimplicialAction(c.P, Gbar), [Hbar, c.K, c.H]))
    return Chart(c.P, Gbar, Hbar, c.K, c.apex, level)


def induced_projection(c: Chart, cbar: Chart) -> CoveringMap:
    """The map ``U = P/H -> P/Hbar`` between a chart and its quotient chart."""
    la = cbar.leveled
    X = la.complex
    Hc = la.induced_group(c.H)
    if not is_regular_on(X, Hc):
        raise NotLiftable("quotient chart level is not regular for H")
    U, nh = quotient_of(X, Hc)
    nbar = cbar._U[1]
    return CoveringMap.build(U, cbar.U, {nh[v]: nbar[v] for v in X.vertices})


# ---------------------------------------------------------------------------
# Local models
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModelType:
    """Reduced local group data ``(G, H, K)`` with ``G`` acting faithfully."""

    G: PermGroup
    H: PermGroup
    K: PermGroup

    def is_trivial(self) -> bool:
        return self.G.is_trivial()

    def index(self) -> Fraction:
        return Fraction(self.H.order(), self.K.order())

    def codim2(self) -> tuple[int, int] | None:
        if self.G.is_cyclic() and self.H.intersection(self.K).is_trivial():
            return self.H.order(), self.K.order()
        return None

    def same_as(self, other: "ModelType") -> bool:
        if (self.G.order(), self.H.order(), self.K.order()) != \
                (other.G.order(), other.H.order(), other.K.order()):
            return False
        return next(isomorphisms(self.G, other.G, [(self.H, other.H), (self.K, other.K)]),
                    None) is not None


def model_type(G: PermGroup, H: PermGroup, K: PermGroup) -> ModelType:
    N = core(G, H.intersection(K))
    act = coset_action(G, N)
    deg = act.index

    def img(h: PermGroup) -> PermGroup:
        return PermGroup.generate([act.image(x) for x in h.generators], deg)

    return ModelType(img(G), img(H), img(K))


def model_at_simplex(c: Chart, s: Simplex) -> ModelType:
    """Group-level local model at points of the open simplex ``s`` of ``P_level``."""
    stab = [g for g in c.G.elements if all(c.lift(g)(v) == v for v in s)]
    Hs = PermGroup.from_elements([g for g in stab if g in c.H], c.G.degree)
    Ks = PermGroup.from_elements([g for g in stab if g in c.K], c.G.degree)
    Gs = PermGroup.generate(Hs.generators + Ks.generators, c.G.degree)
    return model_type(Gs, Hs, Ks)


def chart_local_models(c: Chart) -> dict[Simplex, ModelType]:
    """Local model at every simplex of ``U`` (equivalently every vertex of ``U'``)."""
    nh = c._U[1]
    rep: dict[Simplex, Simplex] = {}
    for s in c.P_level.sorted_simplices:
        rep.setdefault(tuple(sorted(nh[v] for v in s)), s)
    cache: dict[frozenset, ModelType] = {}
    out = {}
    for u, s in rep.items():
        stab = frozenset(g for g in c.G.elements if all(c.lift(g)(v) == v for v in s))
        if stab not in cache:
            cache[stab] = model_at_simplex(c, s)
        out[u] = cache[stab]
    return out


def local_model(c: Chart, x: int, level: int = 0) -> Chart:
    """Reduced conical chart at vertex ``x`` of ``sd^level(P)``."""
    return reduce_chart(conical_restriction(c, x, level)).chart


@dataclass(frozen=True)
class CodimTwoModel:
    h: int
    k: int

    def __post_init__(self) -> None:
        if self.h < 1 or self.k < 1 or gcd(self.h, self.k) != 1:
            raise InputError(f"(h, k) = ({self.h}, {self.k}) must be coprime positive integers")

    def index(self) -> Fraction:
        return Fraction(self.h, self.k)


def classify_codim2(model: Chart | ModelType) -> CodimTwoModel:
    if isinstance(model, Chart):
        red = reduce_chart(model).chart if not model.is_reduced() else model
        G, H, K = red.G, red.H, red.K
    else:
        red, (G, H, K) = None, (model.G, model.H, model.K)
    if not (G.is_cyclic() and H.is_cyclic() and K.is_cyclic()):
        raise NotCodimTwo("local group is not cyclic")
    if not H.intersection(K).is_trivial():
        raise NotCodimTwo("model is not reduced")
    if red is not None and not G.is_trivial():
        sing = singular_simplices(red.P_level, red.G_level)
        if sing.dim != red.P.dim - 2:
            raise NotCodimTwo("singular set is not of codimension two")
        fixed_sets = set()
        for g in red.G_level.elements:
            if not g.is_identity():
                fixed_sets.add(frozenset(s for s in red.P_level.simplices
                                         if all(g(v) == v for v in s)))
        if len(fixed_sets) != 1 or next(iter(fixed_sets)) != sing.simplices:
            raise NotCodimTwo("the group does not act by rotations about one axis")
    return CodimTwoModel(H.order(), K.order())


def classify_kind(models: Iterable[Chart | ModelType]) -> str:
    ms = list(models)
    if all(m.K.is_trivial() for m in ms):
        return "orbifold"
    if all(m.H.is_subgroup_of(m.K) for m in ms):
        return "pure"
    return "mixed"


# ---------------------------------------------------------------------------
# Stratification
# ---------------------------------------------------------------------------

def index_label(fr: Fraction) -> str:
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


@dataclass(frozen=True)
class StratumComponent:
    dim: int
    simplices: frozenset[Simplex]
    model: ModelType
    label: str
    hk: tuple[int, int] | None


@dataclass(frozen=True)
class Stratification:
    complex: Complex
    singular: Subcomplex
    levels: tuple[Subcomplex, ...]        # Sigma_0 <= ... <= Sigma_{m-2}
    components: tuple[StratumComponent, ...]

    def components_of_dim(self, d: int) -> list[StratumComponent]:
        return [c for c in self.components if c.dim == d]


def stratify(X: Complex, models: Mapping[Simplex, ModelType]) -> Stratification:
    from .errors import InconsistentModels
    from .complex import open_complement_components

    sing = {s for s, m in models.items() if not m.is_trivial()}
    for s in sing:
        for f in (s[:i] + s[i + 1:] for i in range(len(s))):
            if f and f not in sing:
                raise InconsistentModels(f"face {f} of singular {s} has trivial model")
    stratum: dict[Simplex, int] = {}
    for s in sing:
        best = len(s) - 1
        for rho in sing:
            if len(rho) - 1 > best and set(s) <= set(rho) and models[rho].same_as(models[s]):
                best = len(rho) - 1
        stratum[s] = best
    top_dim = max(X.dim - 2, 0)
    levels = []
    for i in range(top_dim + 1):
        levels.append(Subcomplex(X, frozenset(s for s in sing if stratum[s] <= i)))
    comps = []
    for i in range(X.dim + 1):
        open_i = {s for s in sing if stratum[s] == i}
        if not open_i:
            continue
        closure = Complex.from_top(open_i) if open_i else Complex.empty()
        rest = closure.simplices - open_i
        for part in open_complement_components(closure, rest):
            members = sorted(part, key=lambda s: (len(s), s))
            m0 = models[members[0]]
            if not all(models[s].same_as(m0) for s in members):
                raise InconsistentModels("local model varies along a stratum component")
            hk = m0.codim2()
            comps.append(StratumComponent(i, frozenset(part), m0, index_label(m0.index()), hk))
    return Stratification(X, Subcomplex(X, frozenset(sing)), tuple(levels), tuple(comps))


def stratify_chart(c: Chart) -> Stratification:
    return stratify(c.U, chart_local_models(c))


# ---------------------------------------------------------------------------
# Local characteristic group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalCharacteristic:
    generator_images: tuple[Permutation, ...]   # dual-loop generators on H/(H cap K)
    image_order: int
    coset_count: int
    kernel_generators: tuple[int, ...]          # indices of loop generators in Gamma_x


def local_characteristic(c: Chart) -> LocalCharacteristic:
    report = validate_chart(c, analyze_maps=False)
    if not report.valid:
        raise ChartInvalid(f"invalid chart: {report.failures()}")
    pH = c.p_H
    mc = cov.extract_cocycle(pH)
    labels = pH.sheet_labels
    root = pH.base.tops[0]
    lift1 = labels[(root, 1)]
    Hl = c.H_level
    deck_for_sheet = {}
    for h in Hl.elements:
        img = tuple(sorted(h(v) for v in lift1))
        for i in range(1, pH.degree + 1):
            if labels[(root, i)] == img:
                deck_for_sheet[i] = h
    HK = c.H.intersection(c.K)
    HKl = c.lift_group(HK)
    act = coset_action(Hl, HKl)
    pot, tree = cov.gauge_potentials(mc.base, mc.transitions, mc.sheets)
    images = []
    for (a, b), t in sorted(mc.transitions.items()):
        if a > b or frozenset((a, b)) in tree:
            continue
        loop = pot[b].inverse() * t * pot[a]
        images.append(act.image(deck_for_sheet[loop(1)]))
    group = PermGroup.generate(images, act.index) if images else PermGroup.trivial(act.index)
    kernel = tuple(i for i, p in enumerate(images) if p.is_identity())
    return LocalCharacteristic(tuple(images), group.order(), act.index, kernel)


# ---------------------------------------------------------------------------
# Model builders
# ---------------------------------------------------------------------------

def disk_chart(h: int, k: int, rim: int | None = None) -> Chart:
    """Rotation model on a cone over a polygon: ``H`` of order ``h``, ``K`` of order ``k``.

    ``G`` is cyclic of order ``lcm(h, k)``; the default rim has
    ``2 lcm(h, k)`` vertices (six when ``lcm = 1``).
    """
    L = lcm(h, k)
    n = rim if rim is not None else (2 * L if L > 1 else 6)
    if n % L or n < 3:
        raise InputError("rim size must be a multiple of lcm(h, k) and at least 3")
    from .fixtures import disk, rotation_perm
    P = disk(n)
    rho = rotation_perm(n, n // L)
    return Chart.make(P, [rho], [rho ** (L // h)], [rho ** (L // k)], apex=n + 1)


def cone_chart_from_action(link: Complex, H: PermGroup, K: PermGroup) -> Chart:
    apex = max(link.vertices) + 1
    P = cone(link, apex)
    n = apex
    return Chart.from_groups(P, _pad_group(H, n), _pad_group(K, n), apex)


def _pad_group(h: PermGroup, n: int) -> PermGroup:
    return PermGroup.generate([pad(g, n) for g in h.generators], n)


def fig2_chart() -> Chart:
    """Klein four-group of half-turns on the cone over the octahedron."""
    from .fixtures import octahedron
    P = cone(octahedron(), 7)
    sigma = Permutation.parse("(3 4)(5 6)", 7)
    rho = Permutation.parse("(1 2)(5 6)", 7)
    return Chart.make(P, [sigma, rho], [sigma], [rho], apex=7)


def fig3_chart() -> Chart:
    """Cone over the minimal regularization of the three-sheeted cover of the sphere."""
    from .fixtures import fig3_cocycle
    f = cov.fox_complete(fig3_cocycle())
    reg = cov.minimal_regularization(f)
    deck = _deck(reg.r)
    H = _stabilizing(deck, reg.s.vertex_map)
    R = reg.r.total
    apex = max(R.vertices) + 1
    P = cone(R, apex)
    return Chart.from_groups(P, _pad_group(H, apex), _pad_group(deck, apex), apex)


def product_chart(c: Chart) -> Chart:
    """``c`` times an interval, triangulated equivariantly (staircase over ``P'``)."""
    from .complex import product_with_interval
    step = c.P._sd_step
    rank = {v: len(s) for v, s in step.simplex_of.items()}
    X, ids = product_with_interval(step.complex, rank)
    n = max(X.vertices)
    la = c._action.at_level(1)

    def move(g: Permutation) -> Permutation:
        gl = la.lift[g]
        return perm_on({ids[(v, t)]: ids[(gl(v), t)] for (v, t) in ids}, n)

    G = PermGroup.generate([move(g) for g in c.G.generators], n)
    H = PermGroup.generate([move(g) for g in c.H.generators], n)
    K = PermGroup.generate([move(g) for g in c.K.generators], n)
    return Chart(X, G, H, K, None)
