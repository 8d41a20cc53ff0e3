"""Command line surface.

Every subcommand reads a workspace file, runs one query, prints a plain
text report (or the same data as JSON with --json), and exits with:

    0   success / holds / derived / all checks pass
    1   counterexample / not derived / invalid proof
    2   budget or bound exhausted without a decision
    64  usage error (bad flags, unknown names)
    65  workspace parse error
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from .core import Category, MorphismSet, MorRef, semantic_consequence
from .dsl import DslError, Workspace, parse, proof_to_text
from .graphs import GraphCategory, clique, empty_graph, loop_point, GraphHom
from .lattice import LatticeCategory, presentation_from_pairs
from .proofs import (
    RULES,
    Cancel,
    Compose,
    CoprodN,
    Hyp,
    Identity,
    ProofError,
    ProofTerm,
    Push,
    WidePushN,
    check_proof,
    prove,
    saturate,
    used_hypotheses,
)
from .reflection import reflect, trace_to_text
from .sentences import render_regular_sentence

__all__ = ["main"]


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise UsageError(message)


def _load(path: str) -> Workspace:
    try:
        source = Path(path).read_text()
    except OSError as err:
        raise UsageError(f"cannot read {path!r}: {err.strerror}") from err
    return parse(source)


def _category_arg(ws: Workspace, name: str) -> Category:
    if name in ws.lattices:
        return ws.lattices[name].category
    if name in ("graph", "graphs"):
        return ws.graph_category
    raise UsageError(f"unknown category {name!r}: use a declared lattice name or 'graphs'")


def _object_arg(ws: Workspace, cat: Category, name: str):
    if isinstance(cat, GraphCategory):
        decl = ws.graphs.get(name)
        if decl is None:
            raise UsageError(f"unknown graph {name!r}")
        return decl.obj
    assert isinstance(cat, LatticeCategory)
    if name.startswith(f"{cat.p.name}."):
        name = name[len(cat.p.name) + 1 :]
    if name not in cat.p.elements:
        raise UsageError(f"lattice {cat.p.name!r} has no element {name!r}")
    return cat.obj(name)


def _mor_arg(ws: Workspace, name: str) -> MorRef:
    decl = ws.morphisms.get(name)
    if decl is None:
        raise UsageError(f"unknown morphism {name!r}")
    return decl.ref


def _hset_arg(ws: Workspace, name: str) -> MorphismSet:
    decl = ws.hsets.get(name)
    if decl is None:
        raise UsageError(f"unknown hset {name!r}")
    return decl.morphisms


def _same_category(cat: Category, hset: MorphismSet, what: str) -> None:
    for m in hset.morphisms():
        if m.dom.cat_id != cat.cat_id:
            raise UsageError(f"{what} is not in the selected category")


def _hset_category(ws: Workspace, hset: MorphismSet, fallback: MorRef | None = None) -> Category:
    mors = hset.morphisms()
    if mors:
        return ws.category_of(mors[0])
    if fallback is not None:
        return ws.category_of(fallback)
    raise UsageError("cannot infer the category from an empty hset")


def _term_category(ws: Workspace, term: ProofTerm) -> Category | None:
    if isinstance(term, Identity):
        return ws.category_of(term.obj)
    if isinstance(term, Compose):
        return _term_category(ws, term.outer) or _term_category(ws, term.inner)
    if isinstance(term, Cancel):
        return ws.category_of(term.first)
    if isinstance(term, Push):
        return _term_category(ws, term.proof) or ws.category_of(term.along)
    if isinstance(term, (CoprodN, WidePushN)):
        for part in term.parts:
            cat = _term_category(ws, part)
            if cat is not None:
                return cat
    return None


# ---------------------------------------------------------------------------
# subcommands: each returns (exit code, report dict, text lines)


def _cmd_check_inj(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    cat = _category_arg(ws, args.cat)
    obj = _object_arg(ws, cat, args.object)
    hset = _hset_arg(ws, args.hset)
    _same_category(cat, hset, f"hset {args.hset!r}")
    members = []
    lines = []
    for name, h in hset:
        res = cat.is_injective(obj, h)
        witness = None if res.holds else cat.morphism_label(res.counterexample)
        members.append({"name": name, "injective": res.holds, "counterexample": witness})
        if res.holds:
            lines.append(f"{name}: injective")
        else:
            lines.append(f"{name}: not injective (no extension of {witness})")
    verdict = "all-injective" if all(m["injective"] for m in members) else "not-injective"
    lines.append(f"verdict: {verdict}")
    report = {
        "command": "check-inj",
        "object": cat.object_label(obj),
        "members": members,
        "verdict": verdict,
    }
    return (0 if verdict == "all-injective" else 1), report, lines


def _cmd_consequence(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    goal = _mor_arg(ws, args.goal)
    hset = _hset_arg(ws, args.hset)
    cat = ws.category_of(goal)
    _same_category(cat, hset, f"hset {args.hset!r}")
    if isinstance(cat, GraphCategory):
        bound = args.max_size
        verdict = semantic_consequence(
            cat, hset, goal, cat.universe(bound), exact=False, bound=bound
        )
    else:
        verdict = semantic_consequence(
            cat, hset, goal, cat.search_universe(), exact=True
        )
    label = verdict.label()
    witness = (
        None if verdict.counterexample is None else cat.object_label(verdict.counterexample)
    )
    lines = [f"verdict: {label}"]
    if witness is not None:
        lines.append(f"counterexample: {witness}")
    if not verdict.exact:
        lines.append(f"bound: {verdict.bound} nodes (finite graphs up to the bound only)")
    report = {
        "command": "consequence",
        "goal": cat.morphism_label(goal),
        "verdict": label,
        "counterexample": witness,
        "exact": verdict.exact,
        "bound": verdict.bound,
    }
    if label == "holds":
        code = 0
    elif label == "counterexample":
        code = 1
    else:
        code = 2
    return code, report, lines


def _cmd_prove(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    goal = _mor_arg(ws, args.goal)
    hset = _hset_arg(ws, args.hset)
    cat = ws.category_of(goal)
    _same_category(cat, hset, f"hset {args.hset!r}")
    result = prove(cat, hset, goal, node_cap=args.node_cap, depth_cap=args.depth)
    proof_text = None if result.proof is None else proof_to_text(ws, result.proof)
    lines = [f"verdict: {result.status}", f"rounds: {result.rounds_used}"]
    if proof_text is not None:
        lines.append(f"proof: {proof_text}")
        if args.emit_proof:
            Path(args.emit_proof).write_text(f"proof found {{ {proof_text} }}\n")
            lines.append(f"wrote {args.emit_proof}")
    report = {
        "command": "prove",
        "goal": cat.morphism_label(goal),
        "verdict": result.status,
        "rounds": result.rounds_used,
        "proof": proof_text,
    }
    code = {"found": 0, "refuted": 1}.get(result.status, 2)
    return code, report, lines


def _cmd_check_proof(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    decl = ws.proofs.get(args.proof)
    if decl is None:
        raise UsageError(f"unknown proof {args.proof!r}")
    hset = _hset_arg(ws, args.hset)
    cat = _term_category(ws, decl.term)
    if cat is None:
        cat = _hset_category(ws, hset)
    _same_category(cat, hset, f"hset {args.hset!r}")
    try:
        conclusion = check_proof(cat, hset, decl.term)
    except ProofError as err:
        report = {
            "command": "check-proof",
            "proof": args.proof,
            "verdict": "invalid",
            "error": str(err),
            "conclusion": None,
        }
        return 1, report, ["verdict: invalid", f"error: {err}"]
    label = cat.morphism_label(conclusion)
    used = used_hypotheses(decl.term)
    lines = [
        "verdict: valid",
        f"conclusion: {label}",
        f"hypotheses used: {', '.join(used) if used else '(none)'}",
    ]
    report = {
        "command": "check-proof",
        "proof": args.proof,
        "verdict": "valid",
        "conclusion": label,
        "hypotheses": used,
    }
    return 0, report, lines


def _cmd_saturate(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    cat = _category_arg(ws, args.cat)
    if not isinstance(cat, LatticeCategory):
        raise UsageError("saturation needs a finite closed category: pick a lattice")
    hset = _hset_arg(ws, args.hset)
    _same_category(cat, hset, f"hset {args.hset!r}")
    rules = tuple(r for r in RULES if r not in set(args.disable))
    result = saturate(cat, hset, rules)
    derived = [
        {
            "morphism": cat.morphism_label(m),
            "proof": proof_to_text(ws, result.provenance[m]),
        }
        for m in result.derived
    ]
    lines = [f"rules: {', '.join(rules) if rules else '(none)'}"]
    lines += [f"derived {d['morphism']}  via {d['proof']}" for d in derived]
    report = {
        "command": "saturate",
        "rules": list(rules),
        "rounds": result.rounds,
        "derived": derived,
    }
    if args.goal is not None:
        goal = _mor_arg(ws, args.goal)
        ok = result.has(goal)
        verdict = "derived" if ok else "not-derived"
        lines.append(f"goal {cat.morphism_label(goal)}: {verdict}")
        report["goal"] = cat.morphism_label(goal)
        report["verdict"] = verdict
        lines.append(f"verdict: {verdict}")
        return (0 if ok else 1), report, lines
    semantic = [
        m
        for m in cat.all_morphisms()
        if semantic_consequence(cat, hset, m, cat.search_universe(), exact=True).holds
    ]
    missing = [cat.morphism_label(m) for m in semantic if not result.has(m)]
    extra = [
        cat.morphism_label(m) for m in result.derived if m not in set(semantic)
    ]
    verdict = "complete" if not missing and not extra else "incomplete"
    report["missing"] = missing
    report["unsound"] = extra
    report["verdict"] = verdict
    for label in missing:
        lines.append(f"missing {label}")
    for label in extra:
        lines.append(f"unsound {label}")
    lines.append(f"verdict: {verdict}")
    return (0 if verdict == "complete" else 1), report, lines


def _cmd_reflect(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    cat = _category_arg(ws, args.cat)
    obj = _object_arg(ws, cat, args.object)
    hset = _hset_arg(ws, args.hset)
    _same_category(cat, hset, f"hset {args.hset!r}")
    trace = reflect(cat, hset, obj, max_rounds=args.max_rounds)
    text = trace_to_text(cat, trace)
    verdict = "converged" if trace.converged else "not-converged"
    lines = text.rstrip("\n").split("\n")
    lines.append(f"verdict: {verdict}")
    if args.emit_trace:
        Path(args.emit_trace).write_text(text)
        lines.append(f"wrote {args.emit_trace}")
    report = {
        "command": "reflect",
        "start": cat.object_label(trace.start),
        "apex": cat.object_label(trace.apex),
        "rounds": len(trace.rounds),
        "verdict": verdict,
        "trace": text,
    }
    return (0 if trace.converged else 2), report, lines


def _cmd_sentence(args) -> tuple[int, dict, list[str]]:
    ws = _load(args.file)
    ref = _mor_arg(ws, args.mor)
    cat = ws.category_of(ref)
    if not isinstance(cat, GraphCategory):
        raise UsageError("sentences are rendered for graph morphisms only")
    sentence = render_regular_sentence(cat.hom_of(ref))
    report = {
        "command": "sentence",
        "morphism": args.mor,
        "sentence": sentence,
        "verdict": "ok",
    }
    return 0, report, [sentence]


def _demo_checks() -> list[tuple[str, bool]]:
    chain = LatticeCategory(
        presentation_from_pairs("chain", ["0", "1", "2"], [("0", "1"), ("1", "2")])
    )
    diamond = LatticeCategory(
        presentation_from_pairs(
            "diamond", ["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]
        )
    )
    checks: list[tuple[str, bool]] = []

    def without(rule: str):
        return tuple(r for r in RULES if r != rule)

    h_cancel = MorphismSet.of([("h", chain.mor("0", "2"))])
    goal = chain.mor("0", "1")
    ok = saturate(chain, h_cancel).has(goal) and not saturate(
        chain, h_cancel, without("cancellation")
    ).has(goal)
    checks.append(("cancellation needed: 0->1 from {0->2} on the 3-chain", ok))

    h_comp = MorphismSet.of([("p", chain.mor("0", "1")), ("q", chain.mor("1", "2"))])
    goal = chain.mor("0", "2")
    ok = saturate(chain, h_comp).has(goal) and not saturate(
        chain, h_comp, without("composition")
    ).has(goal)
    checks.append(("composition needed: 0->2 from {0->1, 1->2} on the 3-chain", ok))

    h_push = MorphismSet.of([("p", diamond.mor("0", "a"))])
    goal = diamond.mor("b", "1")
    ok = saturate(diamond, h_push).has(goal) and not saturate(
        diamond, h_push, without("pushout")
    ).has(goal)
    checks.append(("pushout needed: b->1 from {0->a} on the diamond", ok))

    empty = MorphismSet.of([])
    with_id = saturate(chain, empty)
    no_id = saturate(chain, empty, without("identity"))
    ok = (
        all(with_id.has(chain.identity(x)) for x in chain.objects())
        and len(no_id.derived) == 0
    )
    checks.append(("identity axiom: identities from H = {} and nothing without it", ok))

    G = GraphCategory()
    zero = empty_graph()
    to_c4 = G.mor(GraphHom(zero, clique(4), ()))
    ok = all(
        G.graph_of(x).has_loop()
        for x in G.universe(3)
        if G.is_injective(x, to_c4).holds
    )
    checks.append(("every graph on <= 3 nodes injective for {} -> C4 has a loop", ok))

    hset = MorphismSet.of(
        [(f"c{k}", G.mor(GraphHom(zero, clique(k), ()))) for k in range(1, 5)]
    )
    goal = G.mor(GraphHom(zero, loop_point(), ()))
    verdict = semantic_consequence(G, hset, goal, G.universe(4), exact=False, bound=4)
    c4 = G.obj(clique(4))
    ok = (
        not verdict.holds
        and verdict.counterexample == c4
        and not clique(4).has_loop()
        and all(G.is_injective(c4, h).holds for h in hset.morphisms())
    )
    checks.append(("C4 is the bound-4 counterexample to a forced loop", ok))

    result = prove(G, hset, goal, node_cap=8, depth_cap=4)
    checks.append(
        ("proof search for the forced loop stays inconclusive", result.status == "inconclusive")
    )
    return checks


def _cmd_demo(args) -> tuple[int, dict, list[str]]:
    checks = _demo_checks()
    lines = [f"{'pass' if ok else 'FAIL'}  {name}" for name, ok in checks]
    note = (
        "bounded graph verdicts inspect the finite graphs up to the bound only; "
        "holds-up-to(N) is never reported as holds"
    )
    lines.append(f"note: {note}")
    all_ok = all(ok for _, ok in checks)
    lines.append(f"verdict: {'pass' if all_ok else 'fail'}")
    report = {
        "command": "demo",
        "topic": args.topic,
        "checks": [{"name": name, "pass": ok} for name, ok in checks],
        "note": note,
        "verdict": "pass" if all_ok else "fail",
    }
    return (0 if all_ok else 1), report, lines


# ---------------------------------------------------------------------------


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="injlog", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", parser_class=_ArgumentParser)

    def add(name: str, handler, with_file: bool = True):
        p = sub.add_parser(name)
        if with_file:
            p.add_argument("file", help="workspace file")
        p.add_argument("--json", action="store_true", help="print the report as JSON")
        p.set_defaults(handler=handler)
        return p

    p = add("check-inj", _cmd_check_inj)
    p.add_argument("--cat", required=True, help="lattice name or 'graphs'")
    p.add_argument("--object", required=True)
    p.add_argument("--hset", required=True)

    p = add("consequence", _cmd_consequence)
    p.add_argument("--hset", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--max-size", type=int, default=4, help="graph node bound")

    p = add("prove", _cmd_prove)
    p.add_argument("--hset", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--node-cap", type=int, default=12)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--emit-proof", metavar="OUT")

    p = add("check-proof", _cmd_check_proof)
    p.add_argument("--proof", required=True)
    p.add_argument("--hset", required=True)

    p = add("saturate", _cmd_saturate)
    p.add_argument("--cat", required=True, help="lattice name")
    p.add_argument("--hset", required=True)
    p.add_argument("--disable", action="append", default=[], choices=RULES, metavar="RULE")
    p.add_argument("--goal")

    p = add("reflect", _cmd_reflect)
    p.add_argument("--cat", required=True, help="lattice name or 'graphs'")
    p.add_argument("--object", required=True)
    p.add_argument("--hset", required=True)
    p.add_argument("--max-rounds", type=int, default=16)
    p.add_argument("--emit-trace", metavar="OUT")

    p = add("sentence", _cmd_sentence)
    p.add_argument("--mor", required=True)

    p = add("demo", _cmd_demo, with_file=False)
    p.add_argument("topic", choices=["section7"])

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 64
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        return 64
    start = time.perf_counter()
    try:
        code, report, lines = args.handler(args)
    except UsageError as err:
        if getattr(args, "json", False):
            print(json.dumps({"verdict": "usage-error", "error": str(err)}))
        else:
            print(f"usage error: {err}", file=sys.stderr)
        return 64
    except DslError as err:
        diag = err.diagnostic
        if getattr(args, "json", False):
            print(
                json.dumps(
                    {
                        "verdict": "parse-error",
                        "error": diag.render(),
                        "line": diag.line,
                        "col": diag.col,
                    }
                )
            )
        else:
            print(f"parse error: {diag.render()}", file=sys.stderr)
        return 65
    report["timing"] = round(time.perf_counter() - start, 6)
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
