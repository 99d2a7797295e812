"""Finite permutation groups stored by full element enumeration.

Permutations act on ``{1..n}`` and compose right-to-left:
``(p * q)(x) == p(q(x))``.  Groups are small (the worked examples never
exceed a few dozen elements), so every group materializes its element set
by breadth-first closure and all algorithms are direct set computations.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GroupTooLarge, InputError, NotSubgroup

DEFAULT_GROUP_CAP = 10**6

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of ``{1..n}`` stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise InputError(f"not a permutation of 1..{n}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        img = list(range(1, n + 1))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= n:
                    raise InputError(f"point {a} outside 1..{n}")
                if a in seen:
                    raise InputError(f"point {a} repeated in cycle notation")
                seen.add(a)
            for i, a in enumerate(cyc):
                img[a - 1] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Permutation":
        """Parse disjoint-cycle notation such as ``"(1 2)(3 4)"`` or ``"()"``."""
        stripped = text.replace(" ", "").replace(",", "")
        if _CYCLE_RE.sub("", stripped):
            raise InputError(f"bad cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            parts = body.replace(",", " ").split()
            if parts:
                cycles.append([int(p) for p in parts])
        top = max((a for c in cycles for a in c), default=0)
        if n is None:
            n = top
        if top > n:
            raise InputError(f"cycle {text!r} moves points beyond degree {n}")
        return cls.from_cycles(cycles, n)

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, int], n: int) -> "Permutation":
        return cls(tuple(mapping.get(i, i) for i in range(1, n + 1)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise InputError("degree mismatch in product")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        result = 1
        for cyc in self.cycles():
            result = result * len(cyc) // gcd(result, len(cyc))
        return result

    def sign(self) -> int:
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def fixed_points(self) -> set[int]:
        return {i for i in range(1, self.degree + 1) if self(i) == i}

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self})"


@dataclass(frozen=True, eq=False)
class PermGroup:
    """A subgroup of the symmetric group on ``{1..degree}``."""

    degree: int
    generators: tuple[Permutation, ...] = ()
    cap: int = field(default=DEFAULT_GROUP_CAP, compare=False)

    def __post_init__(self) -> None:
        for g in self.generators:
            if g.degree != self.degree:
                raise InputError(f"generator {g} has degree {g.degree}, expected {self.degree}")

    # -- construction -------------------------------------------------------
    @classmethod
    def generate(cls, gens: Iterable[Permutation], degree: int | None = None,
                 cap: int = DEFAULT_GROUP_CAP) -> "PermGroup":
        gens = tuple(gens)
        if degree is None:
            if not gens:
                raise InputError("degree required for an empty generator list")
            degree = gens[0].degree
        group = cls(degree, gens, cap)
        _ = group.elements
        return group

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, ())

    @classmethod
    def symmetric(cls, degree: int) -> "PermGroup":
        if degree < 2:
            return cls.trivial(degree)
        cyc = Permutation.from_cycles([list(range(1, degree + 1))], degree)
        tr = Permutation.from_cycles([[1, 2]], degree)
        return cls(degree, (tr, cyc))

    @classmethod
    def from_elements(cls, elements: Iterable[Permutation], degree: int) -> "PermGroup":
        """Wrap a set already known to be closed, choosing a small generating set."""
        elems = frozenset(elements) | {Permutation.identity(degree)}
        gens = _small_generating_set(sorted(elems), degree)
        group = cls(degree, tuple(gens))
        if group.elements != elems:
            raise InputError("element set is not closed under products")
        return group

    # -- materialization ----------------------------------------------------
    @cached_property
    def elements(self) -> frozenset[Permutation]:
        ident = Permutation.identity(self.degree)
        seen = {ident}
        queue = deque([ident])
        gens = [g for g in self.generators if not g.is_identity()]
        while queue:
            x = queue.popleft()
            for g in gens:
                y = g * x
                if y not in seen:
                    seen.add(y)
                    if len(seen) > self.cap:
                        raise GroupTooLarge(f"group exceeds cap of {self.cap} elements")
                    queue.append(y)
        return frozenset(seen)

    @cached_property
    def sorted_elements(self) -> tuple[Permutation, ...]:
        return tuple(sorted(self.elements))

    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.sorted_elements)

    def __contains__(self, p: object) -> bool:
        return p in self.elements

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermGroup):
            return NotImplemented
        return self.degree == other.degree and self.elements == other.elements

    def __hash__(self) -> int:
        return hash((self.degree, self.elements))

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, order={self.order()}, gens=[{gens}])"

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_trivial(self) -> bool:
        return self.order() == 1

    # -- subgroup structure ---------------------------------------------------
    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.elements <= other.elements

    def is_normal_in(self, other: "PermGroup") -> bool:
        if not self.is_subgroup_of(other):
            return False
        return all(g * h * g.inverse() in self.elements
                   for g in other.generators for h in self.generators)

    def intersection(self, other: "PermGroup") -> "PermGroup":
        return PermGroup.from_elements(self.elements & other.elements, self.degree)

    def join(self, other: "PermGroup") -> "PermGroup":
        return PermGroup.generate(self.generators + other.generators, self.degree, self.cap)

    def product_set(self, other: "PermGroup") -> frozenset[Permutation]:
        return frozenset(h * k for h in self.elements for k in other.elements)

    def conjugate(self, g: Permutation) -> "PermGroup":
        gi = g.inverse()
        return PermGroup.generate([g * h * gi for h in self.generators], self.degree)

    def orbits(self) -> list[frozenset[int]]:
        """Orbit partition of ``{1..n}``, ordered by least element."""
        remaining = set(range(1, self.degree + 1))
        out = []
        while remaining:
            start = min(remaining)
            orbit = {start}
            queue = [start]
            while queue:
                x = queue.pop()
                for g in self.generators:
                    y = g(x)
                    if y not in orbit:
                        orbit.add(y)
                        queue.append(y)
            out.append(frozenset(orbit))
            remaining -= orbit
        return out

    def is_transitive(self) -> bool:
        return len(self.orbits()) <= 1

    def stabilizer(self, point: int) -> "PermGroup":
        return PermGroup.from_elements((g for g in self.elements if g(point) == point), self.degree)

    def pointwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        pts = tuple(points)
        return PermGroup.from_elements(
            (g for g in self.elements if all(g(p) == p for p in pts)), self.degree)

    def setwise_stabilizer(self, points: Iterable[int]) -> "PermGroup":
        pts = frozenset(points)
        return PermGroup.from_elements(
            (g for g in self.elements if frozenset(g(p) for p in pts) == pts), self.degree)

    def is_cyclic(self) -> bool:
        n = self.order()
        return any(g.order() == n for g in self.elements)

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(a * b == b * a for a in gens for b in gens)

    def element_of_order(self, k: int) -> Permutation | None:
        for g in self.sorted_elements:
            if g.order() == k:
                return g
        return None

    def subgroups(self) -> list["PermGroup"]:
        """All subgroups, by closing cyclic subgroups under joins."""
        cyclic = {}
        for g in self.sorted_elements:
            sub = PermGroup.generate([g], self.degree)
            cyclic.setdefault(sub.elements, sub)
        found = dict(cyclic)
        frontier = list(found.values())
        while frontier:
            new = []
            for a in frontier:
                for b in cyclic.values():
                    if b.elements <= a.elements:
                        continue
                    j = PermGroup.generate(a.generators + b.generators, self.degree)
                    if j.elements not in found:
                        found[j.elements] = j
                        new.append(j)
            frontier = new
        return sorted(found.values(), key=lambda s: (s.order(), s.sorted_elements))

    def normal_subgroups(self) -> list["PermGroup"]:
        return [s for s in self.subgroups() if s.is_normal_in(self)]

    def left_cosets(self, h: "PermGroup") -> list[frozenset[Permutation]]:
        if not h.is_subgroup_of(self):
            raise NotSubgroup("coset computation needs h <= g")
        seen: set[Permutation] = set()
        cosets = []
        for g in self.sorted_elements:
            if g in seen:
                continue
            coset = frozenset(g * x for x in h.elements)
            seen |= coset
            cosets.append(coset)
        cosets.sort(key=min)
        return cosets


def _small_generating_set(elements: Sequence[Permutation], degree: int) -> list[Permutation]:
    target = set(elements)
    gens: list[Permutation] = []
    current = {Permutation.identity(degree)}
    for g in sorted(elements, key=lambda p: (-p.order(), p)):
        if len(current) == len(target):
            break
        if g in current:
            continue
        gens.append(g)
        current = set(PermGroup.generate(gens, degree).elements)
    return gens


# ---------------------------------------------------------------------------
# Free-standing group operations
# ---------------------------------------------------------------------------

def generate(gens: Sequence[Permutation], degree: int | None = None,
             cap: int = DEFAULT_GROUP_CAP) -> PermGroup:
    return PermGroup.generate(gens, degree, cap)


def orbits(g: PermGroup) -> list[frozenset[int]]:
    return g.orbits()


@dataclass(frozen=True)
class SubgroupRelations:
    h_leq_g: bool
    k_normal_in_g: bool
    product_is_g: bool

    @property
    def ok(self) -> bool:
        return self.h_leq_g and self.k_normal_in_g and self.product_is_g


def subgroup_relations(g: PermGroup, h: PermGroup, k: PermGroup) -> SubgroupRelations:
    if not (g.degree == h.degree == k.degree):
        raise InputError("groups must share a degree")
    h_leq = h.is_subgroup_of(g)
    k_norm = k.is_normal_in(g)
    prod = h.product_set(k) == g.elements
    return SubgroupRelations(h_leq, k_norm, prod)


def core(g: PermGroup, h: PermGroup) -> PermGroup:
    """Largest normal subgroup of ``g`` contained in ``h``."""
    if not h.is_subgroup_of(g):
        raise NotSubgroup("core needs h <= g")
    elems = set(h.elements)
    for x in g.sorted_elements:
        if len(elems) == 1:
            break
        xi = x.inverse()
        elems &= {x * y * xi for y in h.elements}
    return PermGroup.from_elements(elems, g.degree)


@dataclass(frozen=True)
class CosetAction:
    """Action of ``g`` on the left cosets of ``h``, numbered by least representative."""

    group: PermGroup
    subgroup: PermGroup
    cosets: tuple[frozenset[Permutation], ...]
    index: int

    def image(self, x: Permutation) -> Permutation:
        pos = self._position
        return Permutation(tuple(pos[x * min(c)] for c in self.cosets))

    @cached_property
    def _position(self) -> dict[Permutation, int]:
        return {y: i for i, c in enumerate(self.cosets, start=1) for y in c}

    @cached_property
    def generator_images(self) -> tuple[Permutation, ...]:
        return tuple(self.image(x) for x in self.group.generators)

    @cached_property
    def image_group(self) -> PermGroup:
        return PermGroup.generate(self.generator_images, self.index)

    def coset_of(self, x: Permutation) -> int:
        return self._position[x]

    def kernel(self) -> PermGroup:
        return PermGroup.from_elements(
            (x for x in self.group.elements if self.image(x).is_identity()), self.group.degree)


def coset_action(g: PermGroup, h: PermGroup) -> CosetAction:
    cosets = g.left_cosets(h)
    return CosetAction(g, h, tuple(cosets), len(cosets))


# ---------------------------------------------------------------------------
# Homomorphisms and isomorphism search
# ---------------------------------------------------------------------------

def extend_homomorphism(gens: Sequence[Permutation], images: Sequence[Permutation],
                        source: PermGroup) -> dict[Permutation, Permutation] | None:
    """Extend ``gens[i] -> images[i]`` to a homomorphism on ``source``.

    Returns ``None`` when the assignment is not well defined.
    """
    ident_s = source.identity
    ident_t = images[0] * images[0].inverse() if images else None
    if ident_t is None:
        return {ident_s: ident_s}
    hom = {ident_s: ident_t}
    queue = deque([ident_s])
    while queue:
        x = queue.popleft()
        for a, b in zip(gens, images):
            y = a * x
            val = b * hom[x]
            known = hom.get(y)
            if known is None:
                hom[y] = val
                queue.append(y)
            elif known != val:
                return None
    return hom


def isomorphisms(g1: PermGroup, g2: PermGroup,
                 constraints: Sequence[tuple[PermGroup, PermGroup]] = (),
                 ) -> Iterator[dict[Permutation, Permutation]]:
    """Yield isomorphisms ``g1 -> g2`` carrying each ``a`` onto ``b`` for ``(a, b)`` in constraints."""
    if g1.order() != g2.order():
        return
    gens = _small_generating_set(g1.sorted_elements, g1.degree)
    if not gens:
        if all(b.order() == 1 for _, b in constraints):
            yield {g1.identity: g2.identity}
        return
    by_order: dict[int, list[Permutation]] = {}
    for y in g2.sorted_elements:
        by_order.setdefault(y.order(), []).append(y)
    choices = [by_order.get(x.order(), []) for x in gens]
    for imgs in product(*choices):
        hom = extend_homomorphism(gens, imgs, g1)
        if hom is None or len(set(hom.values())) != g1.order():
            continue
        if all(frozenset(hom[x] for x in a.elements) == b.elements for a, b in constraints):
            yield hom
