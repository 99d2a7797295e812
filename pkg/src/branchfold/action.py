"""Finite simplicial group actions and their quotients.

Quotients are formed on an iterated barycentric subdivision of the acted-on
complex.  :func:`quotient` uses the second subdivision by default, which is
always regular; :func:`regular_level` finds the least subdivision level on
which a family of subgroups acts regularly, and the chart calculus works
there to keep complexes small.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .complex import (Complex, Simplex, Subcomplex, barycentric_subdivide, faces_of,
                      is_good_subcomplex, is_homogeneous)
from .covering import CoveringMap, is_regular
from .errors import (ActionInvalid, NotEffective, NotGoodAction, NotSimplicial,
                     NotSubgroup)
from .perm import Permutation, PermGroup

DEFAULT_LEVEL = 2
MAX_LEVEL = 2


@dataclass(frozen=True, eq=False)
class SimplicialAction:
    complex: Complex
    group: PermGroup
    names: tuple[str, ...] = ()

    @classmethod
    def from_generators(cls, c: Complex, gens: Sequence[Permutation],
                        names: Sequence[str] = ()) -> "SimplicialAction":
        degree = max(c.vertices)
        padded = [pad(g, degree) for g in gens]
        return cls(c, PermGroup.generate(padded, degree), tuple(names))

    @property
    def degree(self) -> int:
        return self.group.degree

    def apply(self, g: Permutation, s: Simplex) -> Simplex:
        return tuple(sorted(g(v) for v in s))

    @cached_property
    def _levels(self) -> dict[int, "LeveledAction"]:
        return {}

    def at_level(self, level: int) -> "LeveledAction":
        cache = self._levels
        if level not in cache:
            cache[level] = _build_level(self, level)
        return cache[level]

    def restrict(self, h: PermGroup) -> "SimplicialAction":
        if not h.is_subgroup_of(self.group):
            raise NotSubgroup("restriction needs a subgroup of the acting group")
        return SimplicialAction(self.complex, h)


def pad(g: Permutation, degree: int) -> Permutation:
    if g.degree == degree:
        return g
    if g.degree > degree:
        if any(g(i) != i for i in range(degree + 1, g.degree + 1)):
            raise NotSimplicial(f"{g} moves points that are not vertices")
        return Permutation(g.images[:degree])
    return Permutation(g.images + tuple(range(g.degree + 1, degree + 1)))


@dataclass(frozen=True, eq=False)
class LeveledAction:
    """An action transported to ``sd^level`` of the original complex."""

    action: SimplicialAction
    level: int
    complex: Complex
    lift: dict[Permutation, Permutation]  # original element -> induced element

    def induced(self, g: Permutation) -> Permutation:
        return self.lift[g]

    def induced_group(self, h: PermGroup) -> PermGroup:
        n = max(self.complex.vertices)
        return PermGroup.from_elements((self.lift[x] for x in h.elements), n)

    @cached_property
    def group(self) -> PermGroup:
        return self.induced_group(self.action.group)


def induce_on_subdivision(c: Complex, g: Permutation, level: int) -> Permutation:
    sdv = barycentric_subdivide(c, level)
    vmap = {v: g(v) for v in c.vertices}
    lifted = sdv.lift_vertex_map(vmap, sdv)
    n = max(sdv.complex.vertices)
    return Permutation(tuple(lifted.get(i, i) for i in range(1, n + 1)))


def _build_level(a: SimplicialAction, level: int) -> LeveledAction:
    sdv = barycentric_subdivide(a.complex, level)
    n = max(sdv.complex.vertices)
    lift = {}
    for g in a.group.elements:
        vmap = {v: g(v) for v in a.complex.vertices}
        lifted = sdv.lift_vertex_map(vmap, sdv)
        lift[g] = Permutation(tuple(lifted.get(i, i) for i in range(1, n + 1)))
    return LeveledAction(a, level, sdv.complex, lift)


# ---------------------------------------------------------------------------
# Validation and regularity
# ---------------------------------------------------------------------------

def validate_action(a: SimplicialAction) -> bool:
    c = a.complex
    verts = set(c.vertices)
    for g in a.group.generators:
        for i in range(1, a.degree + 1):
            if i not in verts and g(i) != i:
                raise NotSimplicial(f"{g} moves the non-vertex {i}")
        for t in c.maximal:
            if a.apply(g, t) not in c.simplices:
                raise NotSimplicial(f"{g} sends {t} outside the complex")
    for g in a.group.elements:
        if not g.is_identity() and all(g(v) == v for v in verts):
            raise NotEffective(f"{g} fixes every vertex")
    return True


def vertex_orbit_names(c: Complex, group: PermGroup) -> dict[int, int]:
    """Each vertex mapped to the least member of its orbit."""
    name = {}
    for v in c.vertices:
        if v in name:
            continue
        orbit = {g(v) for g in group.elements}
        least = min(orbit)
        for w in orbit:
            name[w] = least
    return name


def is_regular_on(c: Complex, group: PermGroup) -> bool:
    """Regularity of a simplicial action in the sense needed for clean quotients.

    (i) vertices of each simplex lie in distinct orbits, and (ii) simplices
    with the same orbit pattern form a single orbit.  Together these give
    Bredon's conditions, so the orbit map is simplicial, non-degenerate and
    has the group orbits as fibres.
    """
    name = vertex_orbit_names(c, group)
    for t in c.maximal:
        if len({name[v] for v in t}) != len(t):
            return False
    classes: dict[Simplex, list[Simplex]] = defaultdict(list)
    for s in c.simplices:
        classes[tuple(sorted(name[v] for v in s))].append(s)
    for members in classes.values():
        first = members[0]
        orbit = {tuple(sorted(g(v) for v in first)) for g in group.elements}
        if len(orbit) != len(members):
            return False
    return True


def regular_level(a: SimplicialAction, subgroups: Iterable[PermGroup] = (),
                  start: int = 0) -> int:
    """Least level at which the group and all listed subgroups act regularly."""
    groups = [a.group, *subgroups]
    for level in range(start, MAX_LEVEL + 1):
        la = a.at_level(level)
        if all(is_regular_on(la.complex, la.induced_group(h)) for h in groups):
            return level
    return MAX_LEVEL


# ---------------------------------------------------------------------------
# Quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuotientData:
    action: SimplicialAction
    level: int
    subdivided: Complex
    group: PermGroup          # induced group on the subdivided complex
    quotient: Complex
    projection: dict[int, int]
    singular: Subcomplex      # S_G
    branch: Subcomplex        # B_G

    @cached_property
    def covering(self) -> CoveringMap:
        return CoveringMap.build(self.subdivided, self.quotient, self.projection)


def quotient_of(c: Complex, group: PermGroup) -> tuple[Complex, dict[int, int]]:
    name = vertex_orbit_names(c, group)
    images = {tuple(sorted({name[v] for v in t})) for t in c.maximal}
    return Complex.from_top(images), name


def singular_simplices(c: Complex, group: PermGroup) -> Subcomplex:
    """Simplices whose pointwise stabilizer exceeds that of their closed star."""
    out = set()
    elems = [g for g in group.elements if not g.is_identity()]
    for s in c.simplices:
        star_vertices = set().union(*c.top_cofaces[s])
        for g in elems:
            if all(g(v) == v for v in s) and any(g(v) != v for v in star_vertices):
                out.add(s)
                break
    return Subcomplex(c, frozenset(out))


def fixed_point_singular_set(c: Complex, group: PermGroup) -> Subcomplex:
    """Oracle for the singular set from the fixed subcomplex of each element.

    A simplex is singular when it lies in ``Fix(g)`` for some ``g != 1`` but
    is a face of a top simplex that ``g`` does not fix.  Computed element by
    element, independently of :func:`singular_simplices`.
    """
    out: set[Simplex] = set()
    for g in group.elements:
        if g.is_identity():
            continue
        fixed = {s for s in c.simplices if all(g(v) == v for v in s)}
        moved_tops = [t for t in c.maximal if t not in fixed]
        for t in moved_tops:
            for s in faces_of(t):
                if s in fixed:
                    out.add(s)
    return Subcomplex(c, frozenset(out))


def quotient(a: SimplicialAction, level: int | None = DEFAULT_LEVEL) -> QuotientData:
    """Quotient by the action on ``sd^level``; ``level=None`` picks the least regular level."""
    try:
        validate_action(a)
    except (NotSimplicial, NotEffective) as exc:
        raise ActionInvalid(str(exc)) from exc
    if level is None:
        level = regular_level(a)
    la = a.at_level(level)
    group = la.group
    q, name = quotient_of(la.complex, group)
    sing = singular_simplices(la.complex, group)
    branch = Subcomplex(q, frozenset(tuple(sorted({name[v] for v in s})) for s in sing.simplices))
    return QuotientData(a, level, la.complex, group, q, name, sing, branch)


@dataclass(frozen=True)
class GoodnessReport:
    good: bool
    by_goodness: bool
    by_dimension: bool | None


def good_action_report(a: SimplicialAction, level: int | None = DEFAULT_LEVEL) -> GoodnessReport:
    qd = quotient(a, level)
    by_good = is_good_subcomplex(qd.subdivided, qd.singular)
    c = qd.subdivided
    pm = is_homogeneous(c) and all(len(c.cofaces.get(f, ())) in (1, 2)
                                   for f in c.simplices_of_dim(c.dim - 1))
    by_dim = (qd.singular.dim <= c.dim - 2) if pm else None
    if by_dim is not None and by_dim != by_good:
        raise ActionInvalid("goodness and dimension criteria disagree")
    return GoodnessReport(by_good, by_good, by_dim)


def is_good_action(a: SimplicialAction, level: int | None = DEFAULT_LEVEL) -> bool:
    return good_action_report(a, level).good


def projection_as_covering(a: SimplicialAction, level: int | None = DEFAULT_LEVEL,
                           verify: bool = True) -> CoveringMap:
    if not is_good_action(a, level):
        raise NotGoodAction("the action is not good")
    qd = quotient(a, level)
    f = qd.covering
    if verify and f.total.is_connected():
        reg = is_regular(f)
        if not reg.regular or reg.deck.elements != qd.group.elements:
            raise NotGoodAction("projection is not regular with deck group G")
    return f


@dataclass(frozen=True)
class Restriction:
    action: SimplicialAction
    level: int
    intermediate: CoveringMap
    regular: bool
    normal: bool


def restrict_to_subgroup(a: SimplicialAction, h: PermGroup, level: int | None = None) -> Restriction:
    if not h.is_subgroup_of(a.group):
        raise NotSubgroup("h must be a subgroup of the acting group")
    if level is None:
        level = regular_level(a, [h])
    la = a.at_level(level)
    gh = la.induced_group(h)
    qh, name_h = quotient_of(la.complex, gh)
    qg, name_g = quotient_of(la.complex, la.group)
    vmap = {name_h[v]: name_g[v] for v in la.complex.vertices}
    inter = CoveringMap.build(qh, qg, vmap)
    regular = is_regular(inter).regular if qh.is_connected() else False
    return Restriction(a.restrict(h), level, inter, regular, h.is_normal_in(a.group))
