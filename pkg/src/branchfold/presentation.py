"""Finite presentations of the branchfold fundamental group for codimension-2 loci.

Generators are the dual edges of the complement of a spanning tree of the
dual graph.  Each codimension-2 simplex off the singular locus contributes the
loop of top simplices around it as a relation; each singular component ``C``
with local model ``(h, k)`` contributes its meridian raised to the ``h``-th
power.  In the ``(h, k)`` model the characteristic group is generated by
``mu^h``, which reduces to the orbifold exponent when ``k = 1``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .complex import Complex, Simplex
from .errors import InputError, SingularLocusNotCodimTwo

Word = tuple[tuple[int, int], ...]   # (generator index, +1/-1) letters


@dataclass(frozen=True)
class SingularComponent:
    simplices: tuple[Simplex, ...]
    h: int
    k: int = 1


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relations: tuple[Word, ...]

    def abelian_invariants(self) -> tuple[int, ...]:
        """Invariant factors of the abelianization, ``0`` standing for a free ``Z``."""
        from sympy import Matrix, ZZ
        from sympy.matrices.normalforms import smith_normal_form

        n = len(self.generators)
        if n == 0:
            return ()
        rows = []
        for rel in self.relations:
            row = [0] * n
            for g, e in rel:
                row[g] += e
            if any(row):
                rows.append(row)
        if not rows:
            return (0,) * n
        snf = smith_normal_form(Matrix(rows), domain=ZZ)
        diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
        factors = [d for d in diag if d != 1 and d != 0]
        free = n - sum(1 for d in diag if d != 0)
        return tuple(sorted(factors)) + (0,) * free

    def to_sympy(self):
        from sympy.combinatorics.fp_groups import FpGroup
        from sympy.combinatorics.free_groups import free_group

        if not self.generators:
            F, = free_group("x")[:1]
            return FpGroup(F, [F.generators[0]])
        F, *gens = free_group(",".join(self.generators) + ("," if len(self.generators) == 1 else ""))
        rels = []
        for rel in self.relations:
            w = F.identity
            for g, e in rel:
                w = w * gens[g] ** e
            rels.append(w)
        return FpGroup(F, rels)

    def order(self) -> int | float:
        """Group order by coset enumeration (``inf`` when infinite)."""
        from sympy.combinatorics.fp_groups import simplify_presentation

        ab = self.abelian_invariants()
        if 0 in ab:
            return float("inf")
        return int(simplify_presentation(self.to_sympy()).order())

    def render(self) -> str:
        def word(rel: Word) -> str:
            runs: list[list[int]] = []
            for g, e in rel:
                if runs and runs[-1][0] == g:
                    runs[-1][1] += e
                else:
                    runs.append([g, e])
            return " ".join(self.generators[g] + ("" if e == 1 else f"^{e}") for g, e in runs if e)

        body = ", ".join(word(r) for r in self.relations if r)
        return f"< {', '.join(self.generators)} | {body} >"


def _spanning_tree(c: Complex) -> set[frozenset[Simplex]]:
    root = c.tops[0]
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for _, u in c.dual_adjacency[t]:
            if u not in seen:
                seen.add(u)
                tree.add(frozenset((t, u)))
                queue.append(u)
    return tree


def loops_around(c: Complex, e: Simplex) -> list[list[Simplex]]:
    """Cyclic sequences of top simplices around a codimension-2 simplex.

    Boundary simplices (whose tops form a path rather than a cycle) yield no
    loop.
    """
    tops = list(c.top_cofaces[e])
    around = {t: [u for f, u in c.dual_adjacency[t] if set(e) <= set(f)] for t in tops}
    seen: set[Simplex] = set()
    out = []
    for start in sorted(tops):
        if start in seen:
            continue
        if any(len(v) != 2 for v in around.values()):
            comp = _collect(start, around)
            seen |= set(comp)
            continue
        cycle, prev, cur = [start], None, start
        while True:
            nxt = next((u for u in around[cur] if u != prev), None)
            if nxt is None or nxt == start:
                break
            cycle.append(nxt)
            prev, cur = cur, nxt
        seen |= set(cycle)
        out.append(cycle)
    return out


def _collect(start: Simplex, around) -> list[Simplex]:
    seen, stack = {start}, [start]
    while stack:
        for u in around[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return list(seen)


def branchfold_pi1(c: Complex, singular: Iterable[SingularComponent] = ()) -> Presentation:
    comps = list(singular)
    m = c.dim
    sing_simplices: set[Simplex] = set()
    for comp in comps:
        if comp.h < 1 or comp.k < 1:
            raise InputError("local model orders must be positive")
        for s in comp.simplices:
            s = tuple(sorted(s))
            if s not in c.simplices or len(s) != m - 1:
                raise SingularLocusNotCodimTwo(f"{s} is not a codimension-2 simplex")
            sing_simplices.add(s)
    # closure of the singular locus, so that lower faces are excluded too
    closed = {f for s in sing_simplices for f in _faces(s)}
    tree = _spanning_tree(c)
    gens: dict[tuple[Simplex, Simplex], int] = {}
    for t in c.tops:
        for _, u in c.dual_adjacency[t]:
            if t < u and frozenset((t, u)) not in tree:
                gens[(t, u)] = len(gens)

    def crossing(t: Simplex, u: Simplex) -> tuple[tuple[int, int], ...]:
        if (t, u) in gens:
            return ((gens[(t, u)], 1),)
        if (u, t) in gens:
            return ((gens[(u, t)], -1),)
        return ()

    def loop_word(cycle: Sequence[Simplex]) -> Word:
        out: list[tuple[int, int]] = []
        for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
            out.extend(crossing(a, b))
        return tuple(out)

    relations: list[Word] = []
    for e in c.simplices_of_dim(m - 2):
        if e in closed:
            continue
        for cycle in loops_around(c, e):
            w = loop_word(cycle)
            if w:
                relations.append(w)
    for comp in comps:
        e = tuple(sorted(comp.simplices[0]))
        cycles = loops_around(c, e)
        if not cycles:
            raise SingularLocusNotCodimTwo(f"{e} lies on the boundary")
        mu = loop_word(cycles[0])
        relations.append(mu * comp.h)
    names = tuple(f"x{i + 1}" for i in range(len(gens)))
    return Presentation(names, tuple(_free_reduce(r) for r in relations))


def _faces(s: Simplex) -> Iterable[Simplex]:
    from itertools import combinations

    for r in range(1, len(s) + 1):
        yield from combinations(s, r)


def _free_reduce(w: Word) -> Word:
    out: list[tuple[int, int]] = []
    for letter in w:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)
