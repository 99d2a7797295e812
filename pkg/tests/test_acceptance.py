"""Acceptance criteria 1-9, one test each.

Every test gathers its individual checks, prints a single
``criterion N: PASS|FAIL`` line to the terminal and then asserts.
"""

import itertools
import math
import random

import pytest

from branchfold import action as act
from branchfold import charts as ch
from branchfold import covering as cov
from branchfold import fixtures as fx
from branchfold.complex import (Subcomplex, is_good_subcomplex, is_good_subcomplex_link,
                                is_good_subcomplex_star, open_complement_components)
from branchfold.cone import (AngleModel, ConeAngle, Irrational, distance,
                             local_holonomy_order, model_of_angle, rational_conifold_verdict)
from branchfold.errors import NotGoodAction


@pytest.fixture
def report(capsys):
    def emit(n: int, title: str, failures: list[str]) -> None:
        status = "PASS" if not failures else "FAIL"
        detail = "" if not failures else " (" + "; ".join(failures[:5]) + ")"
        with capsys.disabled():
            print(f"\ncriterion {n}: {status} {title}{detail}")
        assert not failures, failures
    return emit


def check(failures: list[str], ok: bool, label: str) -> None:
    if not ok:
        failures.append(label)


# 1 ---------------------------------------------------------------------------

def test_criterion_1_goodness(report):
    bad: list[str] = []
    corpus = fx.goodness_corpus()
    check(bad, len(corpus) >= 20, "fewer than 20 fixtures")
    names = {n for n, _, _ in corpus}
    check(bad, {"octa-poles", "octa-edge", "circle4-opposite"} <= names, "required fixtures missing")
    good_by_complex: dict[int, list[Subcomplex]] = {}
    for name, c, s in corpus:
        g = is_good_subcomplex(c, s)
        check(bad, g == is_good_subcomplex_star(c, s) == is_good_subcomplex_link(c, s),
              f"{name}: routes disagree")
        if not g:
            continue
        good_by_complex.setdefault(id(c), [c]).append(s)
        tops = s.as_complex().maximal
        for t in tops:
            smaller = Subcomplex.closure(c, [u for u in tops if u != t])
            check(bad, is_good_subcomplex(c, smaller), f"{name}: goodsub fails dropping {t}")
        if c.is_connected():
            check(bad, len(open_complement_components(c, s)) == 1, f"{name}: goodconnect")
    for c, *subs in good_by_complex.values():
        for s1, s2 in itertools.combinations(subs, 2):
            check(bad, is_good_subcomplex(c, s1.union(s2)), "goodunion fails")
    report(1, "goodness routes agree; goodsub, goodunion, goodconnect hold", bad)


# 2 ---------------------------------------------------------------------------

def test_criterion_2_fig3(report):
    bad: list[str] = []
    f = cov.fox_complete(fx.fig3_cocycle())
    rep = cov.analyze(f)
    check(bad, f.degree == 3, f"degree {f.degree}")
    check(bad, rep.connected, "total disconnected")
    check(bad, rep.euler_total == 2, f"chi {rep.euler_total}")
    check(bad, len(rep.singular_set.vertices) == 3 and rep.singular_set.dim == 0, "|S_f| != 3")
    check(bad, len(rep.pseudo_singular_set.vertices) == 2 and rep.pseudo_singular_set.dim == 0,
          "|S'_f| != 2")
    check(bad, not cov.is_regular(f).regular, "reported regular")
    reg = cov.minimal_regularization(f)
    check(bad, reg.r.degree == 6, f"regularization degree {reg.r.degree}")
    check(bad, len(cov.deck_transformations(reg.r)) == 6, "deck group order")
    check(bad, reg.group.order() == 6, "regularization group order")
    chi, rh = cov.rh_check(f)
    check(bad, chi == rh == 2, f"Riemann-Hurwitz {chi} vs {rh}")
    chi, rh = cov.rh_check(reg.r)
    check(bad, chi == rh, f"Riemann-Hurwitz on regularization {chi} vs {rh}")
    report(2, "three-sheeted cover with monodromies (1 2), (2 3), (1 2 3)", bad)


# 3 ---------------------------------------------------------------------------

def test_criterion_3_fox_round_trip(report):
    bad: list[str] = []
    corpus = [("fig3", fx.fig3_cocycle()), ("pole", fx.pole_cocycle()),
              ("pole3", fx.pole_cocycle(3, "(1 2 3)")), ("east-west", fx.east_west_cocycle()),
              ("identity", fx.identity_cocycle(fx.octahedron(), 2))]
    corpus += [(f"seed{s}", fx.random_cocycle(random.Random(s))) for s in range(100)]
    covers = []
    for name, mc in corpus:
        f = cov.fox_complete(mc)
        check(bad, cov.is_isomorphic(cov.fox_complete(cov.extract_cocycle(f)), f),
              f"{name}: round trip")
        covers.append((name, f))
    partner = cov.fox_complete(fx.pole_cocycle())
    for name, f in covers:
        a, b = cov.common_base(f, partner)
        pb = cov.pullback(a, b)
        check(bad, pb.f.degree == a.degree * b.degree, f"{name}: degree law")
        union = set(a.branch_set.vertices) | set(b.branch_set.vertices)
        check(bad, set(pb.f.branch_set.vertices) == union, f"{name}: branch union law")
    report(3, f"Fox round trip and pullback laws on {len(corpus)} cocycles", bad)


# 4 ---------------------------------------------------------------------------

def test_criterion_4_quotients(report):
    bad: list[str] = []
    acts = fx.octahedron_actions()

    def make(name):
        return act.SimplicialAction.from_generators(fx.octahedron(), acts[name])

    rot = act.quotient(make("rotation"))
    check(bad, rot.quotient.euler_characteristic() == 2, "rotation chi")
    check(bad, len(rot.branch.vertices) == 2 and rot.branch.dim == 0, "rotation branch points")
    anti = act.quotient(make("antipodal"))
    check(bad, anti.quotient.euler_characteristic() == 1, "antipodal chi")
    check(bad, not anti.branch.simplices, "antipodal branch set not empty")
    check(bad, not act.is_good_action(make("reflection")), "reflection accepted")
    try:
        act.projection_as_covering(make("reflection"))
        bad.append("reflection projection built")
    except NotGoodAction:
        pass
    report(4, "rotation, antipodal and reflection quotients of the octahedron", bad)


# 5 ---------------------------------------------------------------------------

def test_criterion_5_chart_calculus(report):
    bad: list[str] = []
    c32, c64, c128 = ch.disk_chart(3, 2), ch.disk_chart(6, 4), ch.disk_chart(12, 8)
    red = ch.reduce_chart(c64)
    check(bad, ch.chart_isomorphism(red.chart, c32) is not None, "reduce (6,4) is not (3,2)")
    family = {"3/2": c32, "6/4": c64, "12/8": c128, "3/1": ch.disk_chart(3, 1),
              "2/1": ch.disk_chart(2, 1), "fig2": ch.fig2_chart()}
    for name, c in family.items():
        idx = ch.chart_index(c)
        check(bad, ch.chart_index(ch.reduce_chart(c).chart) == idx, f"{name}: index under reduction")
    d = ch.dominates(c128, c32)
    check(bad, d is not None, "(12,8) does not dominate (3,2)")
    eq = {(a, b): ch.charts_equivalent(family[a], family[b]) for a in family for b in family}
    for a in family:
        check(bad, eq[(a, a)], f"{a}: not reflexive")
        for b in family:
            check(bad, eq[(a, b)] == eq[(b, a)], f"{a},{b}: not symmetric")
            for c in family:
                if eq[(a, b)] and eq[(b, c)]:
                    check(bad, eq[(a, c)], f"{a},{b},{c}: not transitive")
            if eq[(a, b)]:
                check(bad, ch.chart_index(family[a]) == ch.chart_index(family[b]),
                      f"{a},{b}: index differs across equivalence")
    check(bad, eq[("3/2", "12/8")] and not eq[("3/2", "3/1")], "unexpected equivalence classes")
    cd = ch.common_dominating_chart(c64, c128)
    check(bad, ch.validate_chart(cd.chart).valid, "common chart invalid")
    check(bad, ch.dominates(cd.chart, c64) is not None and ch.dominates(cd.chart, c128) is not None,
          "common chart does not dominate both inputs")
    report(5, "reduction, index invariance, equivalence relation, common domination", bad)


# 6 ---------------------------------------------------------------------------

def test_criterion_6_local_characteristic(report):
    bad: list[str] = []
    for (h, k), want in {(2, 1): 2, (3, 2): 3, (5, 3): 5, (1, 4): 1}.items():
        c = ch.disk_chart(h, k)
        got = ch.local_characteristic(c).image_order
        check(bad, got == want, f"({h},{k}): image order {got}, expected {want}")
        model = ch.classify_codim2(c)
        check(bad, (model.h, model.k) == (h, k), f"({h},{k}): model {model}")
    check(bad, ch.local_characteristic(ch.disk_chart(4, 1)).image_order == 4, "orbifold order != |H|")
    report(6, "local characteristic orders 2, 3, 5, 1", bad)


# 7 ---------------------------------------------------------------------------

@pytest.mark.filterwarnings("ignore::branchfold.cone.RadiusBoundWarning")
def test_criterion_7_cone_metric(report):
    bad: list[str] = []
    check(bad, abs(distance(0, 3, 4, math.pi / 2, r=10) - 5) <= 1e-12, "3-4-5")
    d = distance(1, math.pi / 2, math.pi / 2, math.pi / 2, r=math.pi)
    check(bad, abs(d - math.pi / 2) <= 1e-12, f"spherical quarter {d}")
    rng = random.Random(2024)
    for _ in range(500):
        t1, t2, th = rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, math.pi)
        flat = distance(0, t1, t2, th, r=3)
        for eps in (1e-6, -1e-6):
            if abs(distance(eps, t1, t2, th, r=3) - flat) > 1e-4:
                bad.append(f"continuity at k={eps}")

    def link(a, b):
        x = abs(a - b) % (2 * math.pi)
        return min(x, 2 * math.pi - x)

    for k in (-1.0, 0.0, 1.0):
        rng = random.Random(int(k * 10) + 99)
        for _ in range(10_000):
            (s1, a1), (s2, a2), (s3, a3) = [(rng.uniform(0, 1.5), rng.uniform(0, 2 * math.pi))
                                            for _ in range(3)]
            lhs = distance(k, s1, s3, link(a1, a3), r=1.6)
            rhs = distance(k, s1, s2, link(a1, a2), r=1.6) + distance(k, s2, s3, link(a2, a3), r=1.6)
            if lhs > rhs + 1e-9:
                bad.append(f"triangle inequality at k={k}")
                break
    report(7, "cone metric exact cases, continuity, triangle inequality", bad)


# 8 ---------------------------------------------------------------------------

def test_criterion_8_rational_conifold(report):
    bad: list[str] = []
    table = {2 * math.pi / 3: AngleModel(3, 1), 4 * math.pi / 3: AngleModel(3, 2),
             2 * math.pi: AngleModel(1, 1)}
    for rad, model in table.items():
        check(bad, model_of_angle(ConeAngle(radians=rad)) == model, f"{rad}: model")
    for text, model in (("1/3 tau", AngleModel(3, 1)), ("2/3 tau", AngleModel(3, 2)),
                        ("1 tau", AngleModel(1, 1))):
        check(bad, model_of_angle(ConeAngle.parse(text)) == model, f"{text}: model")
    irr = ConeAngle(radians=math.sqrt(2) * math.pi)
    check(bad, model_of_angle(irr) == Irrational(), "irrational accepted")
    angles = [ConeAngle(radians=r) for r in table] + [irr]
    v = rational_conifold_verdict(angles)
    check(bad, not v.rational, "verdict with an irrational angle")
    check(bad, all((o != math.inf) == (local_holonomy_order(a) != math.inf)
                   for a, _, o in v.entries), "per-angle rows")
    check(bad, rational_conifold_verdict(angles[:3]).rational, "rational table rejected")
    report(8, "rational cone angle table and verdicts", bad)


# 9 ---------------------------------------------------------------------------

def test_criterion_9_lift_quotient_duality(report):
    bad: list[str] = []
    for h, k in ((1, 1), (1, 2)):
        c = ch.disk_chart(h, k, rim=6)
        cbar = ch.quotient_chart(c, [fx.rotation_perm(6, 2)])
        proj = ch.induced_projection(c, cbar)
        check(bad, proj.degree == 3, f"({h},{k}): projection degree {proj.degree}")
        lifted = ch.lift_chart(proj, cbar).chart
        check(bad, ch.charts_equivalent(lifted, c), f"({h},{k}): lift not equivalent")
    report(9, "lifting a Z3 quotient recovers the chart", bad)
