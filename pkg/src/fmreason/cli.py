"""Command-line front end.

Subcommands:
    analyze      backward-reason a target output failure into cut sets
    truth-table  dump a Boolean component's failure truth table
    impact       score a proposed value change against the output failure
    validate     check a model file and list diagnostics

Reports go to stdout; diagnostics and errors to stderr.  Identical inputs
produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .algebra import Lit, MODE_BY_LETTER
from .engine import AnalysisResult, backward_reason, explain
from .errors import FmrError
from .impact import ImpactQuery, baseline_from_model, impact
from .model import (
    CauseMode,
    Kind,
    KnowledgeContext,
    ValuePolicy,
    ValueType,
    parse_model,
    validate,
)
from .oracle import render_truth_table, truth_table


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fmreason",
                                     description="Failure-mode reasoning over dataflow models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, target=False):
        p.add_argument("--model", required=True, help="path to the model JSON file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if target:
            p.add_argument("--target", required=True, help="system output variable")
            p.add_argument("--mode", required=True, choices=("h", "l", "t", "f"),
                           help="observed output failure mode")

    p_an = sub.add_parser("analyze", help="derive the fault cut sets for an output failure")
    common(p_an, target=True)
    p_an.add_argument("--policy", choices=("certain", "minimum"), default="certain",
                      help="certain causes or minimum conditions")
    p_an.add_argument("--values", choices=("independent", "dependent"), default="independent",
                      help="whether known values may sharpen the reasoning")
    p_an.add_argument("--dnf-cap", type=int, default=100_000,
                      help="abort if normalization exceeds this many terms")
    p_an.add_argument("--trace", action="store_true", help="include the substitution trace")
    p_an.add_argument("--seed", type=int, default=0, help="recorded in the report for reproducibility")

    p_tt = sub.add_parser("truth-table", help="print a Boolean failure truth table")
    p_tt.add_argument("kind", choices=("And", "Or", "Not"))
    p_tt.add_argument("--format", choices=("text", "json"), default="text")

    p_im = sub.add_parser("impact", help="impact index of a reported-value change")
    common(p_im)
    p_im.add_argument("--impact", required=True, metavar="VAR=V:W",
                      help="variable and its current/proposed reported values")

    p_va = sub.add_parser("validate", help="validate a model file")
    common(p_va)
    return parser


def _load_model(path: str):
    with open(path, "rb") as fh:
        return parse_model(fh.read())


def _lit_json(lit: Lit) -> dict:
    return {"var": lit.var, "mode": lit.mode.value}


def _expr_json(expr) -> dict:
    from .algebra import And, Const

    if isinstance(expr, Lit):
        return _lit_json(expr)
    if isinstance(expr, Const):
        return {"const": expr.value}
    op = "and" if isinstance(expr, And) else "or"
    return {"op": op, "args": [_expr_json(a) for a in expr.args]}


def expr_from_json(doc: dict):
    from .algebra import Const, conj, disj

    if "const" in doc:
        return Const(doc["const"])
    if "var" in doc:
        return Lit(doc["var"], MODE_BY_LETTER[doc["mode"]])
    build = conj if doc["op"] == "and" else disj
    return build(*(expr_from_json(a) for a in doc["args"]))


def report_to_json(result: AnalysisResult, seed: int = 0, with_trace: bool = False) -> dict:
    doc = {
        "target": _lit_json(result.target),
        "policy": result.causes_policy,
        "values": result.values_policy,
        "weakened": result.weakened,
        "seed": seed,
        "cause": _expr_json(result.cause),
        "cut_sets": [[_lit_json(l) for l in term] for term in explain(result)],
        "premises": [{"var": p.var, "claim": p.claim, "value": p.value}
                     for p in result.premises],
        "loops": [{"var": b.var, "consumer": b.consumer, "pinned": b.pinned}
                  for b in result.loop_bindings],
        "notes": list(result.notes),
    }
    if with_trace:
        doc["trace"] = [
            {"component": s.component, "effect": _lit_json(s.effect),
             "cause": _expr_json(s.local_cause), "weakened": s.weakened}
            for s in result.trace
        ]
    return doc


def report_from_json(text: str) -> dict:
    """Parse a machine-readable analyze report back into its document form."""
    doc = json.loads(text)
    doc["cause"] = _expr_json(expr_from_json(doc["cause"]))  # normalize key order
    return doc


def _format_report(result: AnalysisResult, fmt: str, seed: int, with_trace: bool) -> str:
    if fmt == "json":
        return json.dumps(report_to_json(result, seed, with_trace), indent=2, sort_keys=True) + "\n"
    lines = [
        f"target: {result.target}",
        f"policy: {result.causes_policy} causes, value-{result.values_policy}",
        f"weakened: {'yes' if result.weakened else 'no'}",
    ]
    cut_sets = explain(result)
    if not cut_sets:
        lines.append("cut sets: none (no consistent cause)")
    elif cut_sets == [[]]:
        lines.append("cut sets: unconstrained (any fault state)")
    else:
        lines.append("cut sets:")
        for i, term in enumerate(cut_sets, start=1):
            lines.append(f"  {i}. " + " & ".join(str(l) for l in term))
    if result.premises:
        lines.append("premises:")
        for p in result.premises:
            lines.append(f"  - {p}")
    if result.loop_bindings:
        lines.append("loops broken:")
        for b in result.loop_bindings:
            lines.append(f"  - {b.var} into {b.consumer} (pinned fault-free as {b.pinned})")
    for note in result.notes:
        lines.append(f"note: {note}")
    if with_trace:
        lines.append("trace:")
        for s in result.trace:
            lines.append(f"  {s.effect}  <=  {s.local_cause}   [{s.component}]")
    return "\n".join(lines) + "\n"


def _cmd_analyze(args) -> int:
    model = _load_model(args.model)
    ctx = KnowledgeContext(
        model=model,
        causes=CauseMode(args.policy),
        values=ValuePolicy(args.values),
        dnf_cap=args.dnf_cap,
    )
    mode = MODE_BY_LETTER[args.mode]
    result = backward_reason(model, Lit(args.target, mode), ctx)
    sys.stdout.write(_format_report(result, args.format, args.seed, args.trace))
    return 0


def _cmd_truth_table(args) -> int:
    table = truth_table(Kind(args.kind))
    if args.format == "json":
        doc = {
            "kind": table.kind.value,
            "inputs": list(table.inputs),
            "output": table.output,
            "rows": [[[cell[0], cell[1], cell[2].value] for cell in row] for row in table.rows],
        }
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_truth_table(table))
    return 0


def _parse_value(raw: str, vtype: ValueType):
    if vtype is ValueType.BOOL:
        if raw in ("T", "true", "True"):
            return True
        if raw in ("F", "false", "False"):
            return False
        raise FmrError(f"expected a Boolean value (T/F), got {raw!r}")
    try:
        return float(raw)
    except ValueError:
        raise FmrError(f"expected a real value, got {raw!r}") from None


def _cmd_impact(args) -> int:
    model = _load_model(args.model)
    probe = args.impact
    if "=" not in probe or ":" not in probe.split("=", 1)[1]:
        raise FmrError("--impact takes VAR=V:W")
    name, rest = probe.split("=", 1)
    raw_v, raw_w = rest.split(":", 1)
    var = model.var_map.get(name)
    if var is None:
        raise FmrError(f"unknown variable {name!r}")
    query = ImpactQuery(
        variable=name,
        from_value=_parse_value(raw_v, var.vtype),
        to_value=_parse_value(raw_w, var.vtype),
    )
    score = impact(model, query, baseline_from_model(model))
    if args.format == "json":
        doc = {"variable": name, "from": query.from_value, "to": query.to_value,
               "outputs": list(model.outputs), "impact": score}
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(f"impact of {name}: {query.from_value} -> {query.to_value}: {score}\n")
    return 0


def _cmd_validate(args) -> int:
    with open(args.model, "rb") as fh:
        raw = fh.read()
    from .errors import ModelFormatError, ModelValidationError

    try:
        model = parse_model(raw)
    except ModelValidationError as e:
        for d in e.diagnostics:
            sys.stderr.write(f"{d}\n")
        return 1
    except ModelFormatError as e:
        sys.stderr.write(f"format error: {e}\n")
        return 1
    diags = validate(model)
    if diags:  # unreachable after parse_model, kept for direct API parity
        for d in diags:
            sys.stderr.write(f"{d}\n")
        return 1
    if args.format == "json":
        sys.stdout.write(json.dumps({"ok": True, "diagnostics": []}) + "\n")
    else:
        sys.stdout.write("ok\n")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {
        "analyze": _cmd_analyze,
        "truth-table": _cmd_truth_table,
        "impact": _cmd_impact,
        "validate": _cmd_validate,
    }[args.command]
    try:
        return handler(args)
    except FileNotFoundError as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except FmrError as e:
        sys.stderr.write(f"error [{type(e).__name__}]: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
