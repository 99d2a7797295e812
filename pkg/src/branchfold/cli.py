"""Command-line front end.

Exit codes: 0 for success or a true verdict, 1 for a false verdict or a
domain error (for example two charts that are not equivalent), 2 for bad
input (usage errors, unreadable or malformed files, out-of-range numbers).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import action as act
from . import charts as ch
from . import cone
from . import covering as cov
from . import io
from .complex import (is_good_subcomplex, is_good_subcomplex_link, is_good_subcomplex_star,
                      is_pseudo_manifold)
from .errors import BranchfoldError, InputError, IOFailure
from .perm import PermGroup
from .presentation import branchfold_pi1

DEFAULT_SEED = 0


@dataclass
class Outcome:
    ok: bool
    result: dict[str, Any] = field(default_factory=dict)
    entries: list[dict[str, Any]] = field(default_factory=list)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D401 - argparse hook
        raise UsageError(message)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _entries(report: ch.ChartReport) -> list[dict[str, Any]]:
    out = []
    for e in report.entries:
        d = {"key": e.key, "ok": e.ok}
        if e.detail:
            d["detail"] = e.detail
        out.append(d)
    return out


def _frac(x: Fraction) -> dict:
    return io.rational_to_json(x)


def _summary(f: cov.CoveringMap) -> dict[str, Any]:
    rep = cov.analyze(f)
    return {
        "degree": f.degree,
        "euler_total": rep.euler_total,
        "euler_base": rep.euler_base,
        "connected": rep.connected,
        "branched_covering": rep.is_branched_covering,
        "singular_points": len(rep.singular_set.vertices),
        "branch_points": len(rep.branch_set.vertices),
        "pseudo_singular_points": len(rep.pseudo_singular_set.vertices),
        "regular": cov.is_regular(f).regular if rep.connected else False,
    }


def _save(ctx, name: str | None, obj: Any) -> str | None:
    if not name:
        return None
    path = ctx.ws.path(name)
    io.write_document(path, io.to_json(obj))
    return str(path)


def _chart(ctx, name: str) -> ch.Chart:
    return ctx.ws.load(name, "chart")


def _perms(text: str, degree: int):
    return [io.perm_from_text(t, degree) for t in text.split(";") if t.strip()]


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def check_good(ctx, a) -> Outcome:
    c = ctx.ws.load(a.complex, "complex")
    s = io.subcomplex_from_json(c, io.read_document(ctx.ws.path(a.sub)))
    route = {"poset": is_good_subcomplex, "link": is_good_subcomplex_link,
             "star": is_good_subcomplex_star}[a.route]
    good = route(c, s)
    return Outcome(good, {"good": good, "route": a.route})


def check_pm(ctx, a) -> Outcome:
    c = ctx.ws.load(a.complex, "complex")
    rep = is_pseudo_manifold(c)
    entries = [{"key": "homogeneous", "ok": rep.homogeneous},
               {"key": "two_cofaces", "ok": rep.two_cofaces},
               {"key": "skeleton_good", "ok": rep.skeleton_good}]
    return Outcome(rep.ok, {"pseudo_manifold": rep.ok}, entries)


# ---------------------------------------------------------------------------
# cover
# ---------------------------------------------------------------------------

def cover_build(ctx, a) -> Outcome:
    mc = ctx.ws.load(a.monodromy, "monodromy")
    sub = {"auto": None, "always": True, "never": False}[a.subdivide]
    f = cov.fox_complete(mc, subdivide=sub)
    out = _summary(f)
    out["subdivided_base"] = bool(f.fox_subdivided)
    out["written"] = _save(ctx, a.out, f)
    return Outcome(True, out)


def cover_analyze(ctx, a) -> Outcome:
    f = ctx.ws.load(a.file, "covering")
    out = _summary(f)
    if out["connected"]:
        out["riemann_hurwitz"] = list(cov.rh_check(f)) if f.total.dim == 2 else None
    return Outcome(out["branched_covering"], out)


def cover_compose(ctx, a) -> Outcome:
    f = ctx.ws.load(a.first, "covering")
    g = ctx.ws.load(a.second, "covering")
    h = cov.compose(f, g)
    return Outcome(True, {"degree": h.degree, "written": _save(ctx, a.out, h)})


def cover_pullback(ctx, a) -> Outcome:
    f1 = ctx.ws.load(a.first, "covering")
    f2 = ctx.ws.load(a.second, "covering")
    pb = cov.connected_pullback(f1, f2) if a.connected else cov.pullback(f1, f2)
    out = _summary(pb.f)
    out["written"] = _save(ctx, a.out, pb.f)
    return Outcome(True, out)


def cover_regularize(ctx, a) -> Outcome:
    f = ctx.ws.load(a.file, "covering")
    reg = cov.minimal_regularization(f)
    deck = cov.is_regular(reg.r).deck
    return Outcome(True, {"degree": reg.r.degree, "deck_order": deck.order(),
                          "already_regular": reg.r is f, "written": _save(ctx, a.out, reg.r)})


def cover_components(ctx, a) -> Outcome:
    f = ctx.ws.load(a.file, "covering")
    parts = cov.components(f)
    written = []
    if a.out_prefix:
        for i, p in enumerate(parts, start=1):
            written.append(_save(ctx, f"{a.out_prefix}{i}.json", p))
    return Outcome(True, {"count": len(parts), "degrees": [p.degree for p in parts],
                          "written": written})


# ---------------------------------------------------------------------------
# action
# ---------------------------------------------------------------------------

def action_validate(ctx, a) -> Outcome:
    sa = ctx.ws.load(a.file, "action")
    try:
        act.validate_action(sa)
    except BranchfoldError as exc:
        return Outcome(False, {"valid": False, "reason": str(exc)})
    return Outcome(True, {"valid": True, "order": sa.group.order()})


def _level(text: str | None) -> int | None:
    if text in (None, "auto"):
        return None
    try:
        return int(text)
    except ValueError as exc:
        raise InputError(f"bad level {text!r}") from exc


def action_quotient(ctx, a) -> Outcome:
    sa = ctx.ws.load(a.file, "action")
    qd = act.quotient(sa, _level(a.level) if a.level else act.DEFAULT_LEVEL)
    good = act.is_good_action(sa, qd.level)
    out = {"level": qd.level, "euler": qd.quotient.euler_characteristic(),
           "branch_points": len(qd.branch.vertices), "singular_dim": qd.singular.dim,
           "good": good}
    if a.out:
        out["written"] = _save(ctx, a.out, qd.quotient)
    return Outcome(True, out)


def action_good(ctx, a) -> Outcome:
    sa = ctx.ws.load(a.file, "action")
    rep = act.good_action_report(sa, _level(a.level) if a.level else act.DEFAULT_LEVEL)
    return Outcome(rep.good, {"good": rep.good, "by_dimension": rep.by_dimension})


def action_restrict(ctx, a) -> Outcome:
    sa = ctx.ws.load(a.file, "action")
    h = PermGroup.generate(_perms(a.subgroup, sa.degree), sa.degree)
    r = act.restrict_to_subgroup(sa, h)
    return Outcome(True, {"degree": r.intermediate.degree, "regular": r.regular,
                          "normal": r.normal, "level": r.level})


# ---------------------------------------------------------------------------
# chart
# ---------------------------------------------------------------------------

def chart_validate(ctx, a) -> Outcome:
    c = _chart(ctx, a.file)
    rep = ch.validate_chart(c)
    return Outcome(rep.valid, {"valid": rep.valid, "failures": rep.failures()}, _entries(rep))


def chart_index(ctx, a) -> Outcome:
    c = _chart(ctx, a.file)
    idx = ch.chart_index(c)
    return Outcome(True, {"index": _frac(idx), "label": ch.index_label(idx)})


def _describe(c: ch.Chart) -> dict[str, Any]:
    return {"G": c.G.order(), "H": c.H.order(), "K": c.K.order(), "apex": c.apex,
            "tops": len(c.P.maximal)}


def chart_restrict(ctx, a) -> Outcome:
    c = _chart(ctx, a.file)
    r = ch.conical_restriction(c, a.vertex, a.level)
    stab = ch.point_stabilizer(c, a.vertex, a.level)
    out = _describe(r)
    out["stabilizer_order"] = stab.order()
    out["written"] = _save(ctx, a.out, r)
    return Outcome(True, out)


def chart_reduce(ctx, a) -> Outcome:
    c = _chart(ctx, a.file)
    red = ch.reduce_chart(c)
    out = _describe(red.chart)
    out["N"] = red.N.order()
    out["written"] = _save(ctx, a.out, red.chart)
    return Outcome(True, out)


def chart_dominates(ctx, a) -> Outcome:
    d = ch.dominates(_chart(ctx, a.first), _chart(ctx, a.second))
    return Outcome(d is not None, {"dominates": d is not None,
                                   "N": d.N.order() if d else None})


def chart_equiv(ctx, a) -> Outcome:
    eq = ch.charts_equivalent(_chart(ctx, a.first), _chart(ctx, a.second))
    return Outcome(eq, {"equivalent": eq})


def chart_common(ctx, a) -> Outcome:
    cd = ch.common_dominating_chart(_chart(ctx, a.first), _chart(ctx, a.second))
    rep = ch.validate_chart(cd.chart, analyze_maps=False)
    out = _describe(cd.chart)
    out.update(valid=rep.valid, written=_save(ctx, a.out, cd.chart))
    return Outcome(rep.valid, out, _entries(rep))


def chart_lift(ctx, a) -> Outcome:
    f = ctx.ws.load(a.covering, "covering")
    c = _chart(ctx, a.chart)
    lc = ch.lift_chart(f, c, a.component)
    out = _describe(lc.chart)
    out["written"] = _save(ctx, a.out, lc.chart)
    return Outcome(True, out)


def chart_quotient(ctx, a) -> Outcome:
    c = _chart(ctx, a.file)
    cbar = ch.quotient_chart(c, _perms(a.by, c.G.degree))
    out = _describe(cbar)
    out["written"] = _save(ctx, a.out, cbar)
    return Outcome(True, out)


def chart_local_char(ctx, a) -> Outcome:
    lc = ch.local_characteristic(_chart(ctx, a.file))
    return Outcome(True, {"image_order": lc.image_order, "cosets": lc.coset_count,
                          "generator_images": [str(p) for p in lc.generator_images],
                          "kernel_generators": list(lc.kernel_generators)})


# ---------------------------------------------------------------------------
# branchfold
# ---------------------------------------------------------------------------

def bf_stratify(ctx, a) -> Outcome:
    st = ch.stratify_chart(_chart(ctx, a.file))
    comps = [{"dim": c.dim, "label": c.label, "size": len(c.simplices),
              "hk": list(c.hk) if c.hk else None} for c in st.components]
    return Outcome(True, {"singular_simplices": len(st.singular.simplices), "components": comps})


def bf_classify(ctx, a) -> Outcome:
    c = _chart(ctx, a.file)
    models = list(ch.chart_local_models(c).values())
    out: dict[str, Any] = {"kind": ch.classify_kind(models + [ch.model_type(c.G, c.H, c.K)])}
    try:
        m = ch.classify_codim2(c)
        out["codim2"] = [m.h, m.k]
    except BranchfoldError as exc:
        out["codim2"] = None
        out["reason"] = str(exc)
    return Outcome(True, out)


def bf_pi1(ctx, a) -> Outcome:
    c, comps = ctx.ws.load(a.file, "branchfold")
    p = branchfold_pi1(c, comps)
    out: dict[str, Any] = {"generators": len(p.generators), "relations": len(p.relations),
                           "presentation": p.render(),
                           "abelianization": list(p.abelian_invariants())}
    if a.order:
        order = p.order()
        out["order"] = None if order == math.inf else order
    return Outcome(True, out)


# ---------------------------------------------------------------------------
# cone
# ---------------------------------------------------------------------------

def cone_dist(ctx, a) -> Outcome:
    d = cone.distance(a.k, a.t1, a.t2, a.theta, a.r, a.literal_bound)
    return Outcome(True, {"distance": d})


def _angle_json(x: cone.ConeAngle) -> dict[str, Any]:
    t = x.exact_turns()
    return {"turns": _frac(t) if t is not None else None, "radians": x.value, "text": str(x)}


def cone_angle(ctx, a) -> Outcome:
    return Outcome(True, _angle_json(cone.angle_of_model(a.h, a.k)))


def cone_model(ctx, a) -> Outcome:
    m = cone.model_of_angle(cone.ConeAngle.parse(a.angle))
    if isinstance(m, cone.Irrational):
        return Outcome(False, {"rational": False, "model": None})
    return Outcome(True, {"rational": True, "model": [m.h, m.k]})


def cone_holonomy(ctx, a) -> Outcome:
    order = cone.local_holonomy_order(cone.ConeAngle.parse(a.angle))
    finite = order != cone.INFINITE
    return Outcome(finite, {"finite": finite, "order": order if finite else None})


def cone_rational(ctx, a) -> Outcome:
    texts = list(a.angles)
    if a.file:
        doc = io.read_document(ctx.ws.path(a.file))
        io.validate(doc, "angles")
        texts += doc["angles"]
    verdict = cone.rational_conifold_verdict(cone.ConeAngle.parse(t) for t in texts)
    rows = []
    for angle, model, order in verdict.entries:
        rows.append({"angle": str(angle),
                     "model": None if isinstance(model, cone.Irrational) else [model.h, model.k],
                     "holonomy_order": None if order == cone.INFINITE else order})
    return Outcome(verdict.rational, {"rational": verdict.rational, "angles": rows})


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def fixtures_install(ctx, a) -> Outcome:
    from .corpus import install

    ws = install(ctx.ws.root, ctx.seed)
    files = sorted(ws.manifest())
    return Outcome(True, {"root": str(ws.root), "files": files})


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="branchfold", description="Branched coverings and branchfold charts.")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workspace", default=".", help="directory for relative file names")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def group(name: str, help_: str):
        g = top.add_parser(name, help=help_)
        return g.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(sub, name: str, fn: Callable, help_: str = ""):
        q = sub.add_parser(name, help=help_)
        q.set_defaults(fn=fn)
        return q

    g = group("check", "complex properties")
    q = cmd(g, "good", check_good, "goodness of a subcomplex")
    q.add_argument("--complex", required=True)
    q.add_argument("--sub", required=True)
    q.add_argument("--route", choices=("poset", "link", "star"), default="poset")
    q = cmd(g, "pm", check_pm, "pseudo-manifold test")
    q.add_argument("--complex", required=True)

    g = group("cover", "branched coverings")
    q = cmd(g, "build", cover_build, "Fox completion of a monodromy cocycle")
    q.add_argument("--monodromy", required=True)
    q.add_argument("--out")
    q.add_argument("--subdivide", choices=("auto", "always", "never"), default="auto")
    q = cmd(g, "analyze", cover_analyze)
    q.add_argument("file")
    q = cmd(g, "compose", cover_compose, "second after first")
    q.add_argument("first")
    q.add_argument("second")
    q.add_argument("--out")
    q = cmd(g, "pullback", cover_pullback)
    q.add_argument("first")
    q.add_argument("second")
    q.add_argument("--connected", action="store_true")
    q.add_argument("--out")
    q = cmd(g, "regularize", cover_regularize)
    q.add_argument("file")
    q.add_argument("--out")
    q = cmd(g, "components", cover_components)
    q.add_argument("file")
    q.add_argument("--out-prefix")

    g = group("action", "simplicial group actions")
    cmd(g, "validate", action_validate).add_argument("file")
    q = cmd(g, "quotient", action_quotient)
    q.add_argument("file")
    q.add_argument("--level", help="subdivision level or 'auto' (default 2)")
    q.add_argument("--out")
    q = cmd(g, "good", action_good)
    q.add_argument("file")
    q.add_argument("--level")
    q = cmd(g, "restrict", action_restrict)
    q.add_argument("file")
    q.add_argument("--subgroup", required=True, help="generators separated by ';'")

    g = group("chart", "branchfold charts")
    cmd(g, "validate", chart_validate).add_argument("file")
    cmd(g, "index", chart_index).add_argument("file")
    q = cmd(g, "restrict", chart_restrict)
    q.add_argument("file")
    q.add_argument("--vertex", type=int, required=True)
    q.add_argument("--level", type=int, default=0)
    q.add_argument("--out")
    q = cmd(g, "reduce", chart_reduce)
    q.add_argument("file")
    q.add_argument("--out")
    for name, fn in (("dominates", chart_dominates), ("equiv", chart_equiv)):
        q = cmd(g, name, fn)
        q.add_argument("first")
        q.add_argument("second")
    q = cmd(g, "common", chart_common)
    q.add_argument("first")
    q.add_argument("second")
    q.add_argument("--out")
    q = cmd(g, "lift", chart_lift)
    q.add_argument("--covering", required=True)
    q.add_argument("--chart", required=True)
    q.add_argument("--component", type=int, default=0)
    q.add_argument("--out")
    q = cmd(g, "quotient", chart_quotient)
    q.add_argument("file")
    q.add_argument("--by", required=True, help="automorphisms of P separated by ';'")
    q.add_argument("--out")
    cmd(g, "local-char", chart_local_char).add_argument("file")

    g = group("branchfold", "singular loci and fundamental groups")
    cmd(g, "stratify", bf_stratify).add_argument("file")
    cmd(g, "classify", bf_classify).add_argument("file")
    q = cmd(g, "pi1", bf_pi1)
    q.add_argument("file")
    q.add_argument("--order", action="store_true", help="also compute the group order")

    g = group("cone", "cone metrics and angles")
    q = cmd(g, "dist", cone_dist)
    for name in ("--k", "--t1", "--t2", "--theta"):
        q.add_argument(name, type=float, required=True)
    q.add_argument("--r", type=float)
    q.add_argument("--literal-bound", action="store_true")
    q = cmd(g, "angle", cone_angle)
    q.add_argument("--h", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    cmd(g, "model", cone_model).add_argument("angle")
    cmd(g, "holonomy", cone_holonomy).add_argument("angle")
    q = cmd(g, "rational", cone_rational)
    q.add_argument("angles", nargs="*")
    q.add_argument("--file")

    g = group("fixtures", "fixture corpus")
    cmd(g, "install", fixtures_install)
    return p


@dataclass
class Context:
    ws: io.Workspace
    seed: int


def _render_human(command: str, outcome: Outcome) -> str:
    lines = []
    for e in outcome.entries:
        mark = "pass" if e["ok"] else "FAIL"
        lines.append(f"[{mark}] {e['key']}" + (f"  ({e['detail']})" if e.get("detail") else ""))
    for key, value in outcome.result.items():
        if value is None or value == []:
            continue
        lines.append(f"{key}: {_human_value(value)}")
    return "\n".join(lines)


def _human_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.4f}"
    if isinstance(v, dict) and set(v) == {"num", "den"}:
        return f"{v['num']}/{v['den']}"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args_list = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    as_json = "--json" in args_list
    seed = DEFAULT_SEED
    command = " ".join(a for a in args_list if not a.startswith("-"))[:80] or "branchfold"
    try:
        args = parser.parse_args(args_list)
        seed = args.seed
        command = f"{args.group} {args.command}"
        ctx = Context(io.Workspace(args.workspace), seed)
        outcome = args.fn(ctx, args)
        code = 0 if outcome.ok else 1
        error = None
    except (UsageError, InputError, IOFailure) as exc:
        outcome, code = Outcome(False), 2
        error = {"type": type(exc).__name__, "message": str(exc)}
    except BranchfoldError as exc:
        outcome, code = Outcome(False), 1
        error = {"type": type(exc).__name__, "message": str(exc)}
    if as_json:
        doc: dict[str, Any] = {"command": command, "ok": outcome.ok, "exit_code": code,
                               "seed": seed, "entries": outcome.entries, "result": outcome.result}
        if error:
            doc["error"] = error
        stdout.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        text = _render_human(command, outcome)
        if text:
            stdout.write(text + "\n")
        if error:
            sys.stderr.write(f"error ({error['type']}): {error['message']}\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
