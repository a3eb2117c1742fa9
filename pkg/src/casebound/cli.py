"""Command-line interface.

Subcommands: ``validate`` (parse and semantic checks), ``consistency``
(priority-ordering conflicts), ``decide`` (the staged decision process, with
optional authority filtering and solution synthesis), ``explain`` (why each
precedent is or is not citable for one concern), and ``fmt`` (canonical
form).  Reports go to stdout, diagnostics to stderr.

Exit codes: 0 success, 1 semantic violation, 2 parse or usage error,
3 I/O failure, 10 inconsistent case base, 11 ambiguous verdict, 12 no
decision possible.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .authority import decide_with_authority, precedent_statuses
from .casebase import consistent
from .classifier import UNDECIDED, casebase_from_model
from .dsl import LoadedModel, document_of, load_model, parse, serialize
from .errors import (
    AlreadyDecided,
    CaseboundError,
    DanglingFactor,
    DslError,
    MissingMetadata,
    NotAFavoredTarget,
    UnknownStateId,
)
from .hierarchy import Concern
from .oracle import enumerate_solutions, random_model
from .reasoning import DecisionTrace, decide, synthesize_solutions

OK = 0
SEMANTIC = 1
USAGE = 2
IO = 3
INCONSISTENT = 10
AMBIGUOUS = 11
NO_DECISION = 12


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return USAGE
    try:
        return args.handler(args)
    except DslError as err:
        _diag(f"{args.path}:{err.line}:{err.column}: error[{err.code}]: {err}")
        return USAGE
    except (UnknownStateId, AlreadyDecided, NotAFavoredTarget) as err:
        _diag(f"error[{err.code}]: {err}")
        return USAGE
    except OSError as err:
        _diag(f"i/o error: {err}")
        return IO
    except CaseboundError as err:
        _diag(f"{args.path}: error[{err.code}]: {err}")
        return SEMANTIC


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casebound",
        description="Precedential-constraint reasoning over factor hierarchies.",
    )
    sub = parser.add_subparsers(
        metavar="{validate,consistency,decide,explain,fmt}"
    )

    p = sub.add_parser("validate", help="parse a model file and run all semantic checks")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("consistency", help="check the case base for priority conflicts")
    p.add_argument("path")
    p.add_argument("--concern", help="restrict to one concern, e.g. p or p/p'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_consistency)

    p = sub.add_parser("decide", help="run the decision process for a query state")
    p.add_argument("path")
    p.add_argument("--case", required=True, help="id of an undecided state")
    p.add_argument(
        "--authority",
        action="store_true",
        help="cite only binding precedents without exceptions (needs courts and timestamps)",
    )
    p.add_argument(
        "--solutions", action="store_true", help="also synthesize admissible rule sets"
    )
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_decide)

    p = sub.add_parser("explain", help="show the citability checks for one concern")
    p.add_argument("path")
    p.add_argument("--case", required=True)
    p.add_argument("--concern", required=True)
    p.set_defaults(handler=cmd_explain)

    p = sub.add_parser("fmt", help="print the canonical form of a model file")
    p.add_argument("path")
    p.set_defaults(handler=cmd_fmt)

    p = sub.add_parser("oracle")  # developer tooling, hidden from the listing
    osub = p.add_subparsers(metavar="{gen,solutions}")
    g = osub.add_parser("gen")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--courts", action="store_true")
    g.set_defaults(handler=cmd_oracle_gen, path="<generated>")
    s = osub.add_parser("solutions")
    s.add_argument("path")
    s.add_argument("--case", required=True)
    s.set_defaults(handler=cmd_oracle_solutions)

    return parser


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str) -> Tuple[LoadedModel, str]:
    text = _read(path)
    loaded = load_model(text)
    digest = hashlib.sha256(serialize(loaded.document).encode("utf-8")).hexdigest()
    return loaded, digest


def _resolve_concern(loaded: LoadedModel, token: str) -> Concern:
    return loaded.hierarchy.concern(token)


# -- validate -----------------------------------------------------------------

def cmd_validate(args) -> int:
    text = _read(args.path)
    try:
        loaded = load_model(text)
    except DslError:
        raise
    except CaseboundError as err:
        if args.json:
            print(json.dumps({"valid": False, "diagnostics": [
                {"code": err.code, "message": str(err)}]}, indent=2))
        else:
            _diag(f"{args.path}: error[{err.code}]: {err}")
        return SEMANTIC
    if args.json:
        print(json.dumps({"valid": True, "diagnostics": []}, indent=2))
    else:
        decided = len(loaded.model.decided_states)
        queries = len(loaded.model.states) - decided
        print(
            f"ok: {len(loaded.hierarchy.base)} base factors, "
            f"{len(loaded.hierarchy.intermediate) // 2} intermediate pairs, "
            f"{decided} decided states, {queries} queries"
        )
    return OK


# -- consistency -----------------------------------------------------------------

def cmd_consistency(args) -> int:
    loaded, digest = _load(args.path)
    concern = _resolve_concern(loaded, args.concern) if args.concern else None
    report = consistent(casebase_from_model(loaded.model), concern)
    witnesses = [
        {
            "concern": w.concern.label,
            "positive_set": sorted(w.positive_reasons),
            "negative_set": sorted(w.negative_reasons),
            "positive_case": w.positive_source,
            "negative_case": w.negative_source,
            "positive_rule": _rule_json(w.positive_rule),
            "negative_rule": _rule_json(w.negative_rule),
        }
        for w in report.witnesses
    ]
    if args.json:
        print(
            json.dumps(
                {
                    "model": digest,
                    "concern": concern.label if concern else None,
                    "consistent": report.consistent,
                    "witnesses": witnesses,
                },
                indent=2,
            )
        )
    else:
        scope = f" wrt {concern.label}" if concern else ""
        if report.consistent:
            print(f"consistent{scope}")
        else:
            print(f"inconsistent{scope}")
            for w in report.witnesses:
                print(
                    f"  {w.concern.label}: {_set(w.negative_reasons)} < "
                    f"{_set(w.positive_reasons)} (via {w.positive_source}: "
                    f"{w.positive_rule}) and {_set(w.positive_reasons)} < "
                    f"{_set(w.negative_reasons)} (via {w.negative_source}: "
                    f"{w.negative_rule})"
                )
    return OK if report.consistent else INCONSISTENT


# -- decide ----------------------------------------------------------------------

def cmd_decide(args) -> int:
    loaded, digest = _load(args.path)
    model = loaded.model
    if args.authority:
        if loaded.courts is None:
            raise MissingMetadata("--authority needs a courts block in the model")
        trace = decide_with_authority(model, loaded.courts, args.case)
    else:
        trace = decide(model, args.case)

    solutions = None
    if args.solutions and len(trace.verdict) == 1:
        solutions = sorted(
            synthesize_solutions(model, args.case, trace),
            key=lambda sol: sorted(str(r) for r in sol.rules),
        )

    if args.json:
        print(json.dumps(_trace_json(digest, trace, solutions), indent=2))
    else:
        _print_trace(trace, solutions)

    if not trace.verdict:
        return NO_DECISION
    if len(trace.verdict) > 1:
        return AMBIGUOUS
    return OK


def _rule_json(rule) -> Dict:
    return {"antecedent": sorted(rule.antecedent), "conclusion": rule.conclusion}


def _trace_json(
    digest: str, trace: DecisionTrace, solutions
) -> Dict:
    stages = []
    for record in trace.records:
        stages.append(
            {
                "degree": record.degree,
                "concern": record.concern.label,
                "cite_for": list(record.cite[record.concern.positive]),
                "cite_against": list(record.cite[record.concern.negative]),
                "forced": sorted(record.forced),
                "ambiguity": record.ambiguity,
                "negligible": record.negligible,
            }
        )
    payload = {
        "model": digest,
        "stages": stages,
        "final": {
            "verdict": sorted(trace.verdict),
            "F": sorted(trace.final_factors),
        },
        "solutions": None
        if solutions is None
        else [[_rule_json(r) for r in sol] for sol in solutions],
        "authority": None
        if not trace.authority
        else {
            "statuses": [
                {
                    "state": note.state_id,
                    "concern": note.concern.label,
                    "status": note.status,
                    "other": note.other,
                }
                for note in trace.authority
            ]
        },
    }
    return payload


def _set(tokens) -> str:
    return "{%s}" % ", ".join(sorted(tokens))


def _print_trace(trace: DecisionTrace, solutions) -> None:
    print(f"case {trace.query_id}")
    for record in trace.records:
        pos, neg = record.concern.positive, record.concern.negative
        cite_for = " ".join(record.cite[pos]) or "-"
        cite_against = " ".join(record.cite[neg]) or "-"
        forced = " ".join(sorted(record.forced)) or "-"
        note = record.ambiguity
        if record.negligible:
            note += ", negligible"
        print(
            f"  degree {record.degree}  {record.concern.label}: "
            f"for [{cite_for}] against [{cite_against}] -> {forced} ({note})"
        )
    verdict = " ".join(sorted(trace.verdict)) or "none"
    print(f"verdict: {verdict}")
    print(f"established: {_set(trace.final_factors)}")
    if trace.authority:
        print("authority:")
        for note in trace.authority:
            print(
                f"  {note.state_id} {note.concern.label}: {note.status}"
                + (f" ({note.other})" if note.other else "")
            )
    if solutions is not None:
        print(f"solutions ({len(solutions)}):")
        for sol in solutions:
            print("  " + "; ".join(str(r) for r in sol))


# -- explain ----------------------------------------------------------------------

def cmd_explain(args) -> int:
    loaded, _ = _load(args.path)
    model = loaded.model
    h = loaded.hierarchy
    concern = _resolve_concern(loaded, args.concern)
    trace = decide(model, args.case)
    degree = h.degree(concern)
    context = trace.established[degree - 1]
    target = model.view(args.case)

    print(f"case {args.case}, concern {concern.label} (degree {degree})")
    print(f"established before stage {degree}: {_set(context)}")
    for state in model.decided_states:
        view = model.view(state.id)
        side = view.decision_on(concern)
        if side == UNDECIDED:
            print(f"{state.id}: no ruling on {concern.label}")
            continue
        other = h.opposite(side)
        reason = view.reason_for(side)
        pro = context & h.favoring(side)
        con = context & h.favoring(other)
        rejected = view.favoring_within(h, other)
        ok_reason = reason <= pro
        ok_rejected = con <= rejected
        print(f"{state.id}: ruled {side} by {_fmt_rule(view, side)}")
        print(
            f"  reason {_set(reason)} within established-for {_set(pro)}: "
            + _containment(reason, pro)
        )
        print(
            f"  established-against {_set(con)} within its rejected factors "
            f"{_set(rejected)}: " + _containment(con, rejected)
        )
        verdict = "citable for " + side if ok_reason and ok_rejected else "not citable"
        print(f"  => {verdict}")
    return OK


def _fmt_rule(view, side) -> str:
    return "{%s} -> %s" % (", ".join(sorted(view.reason_for(side))), side)


def _containment(smaller, larger) -> str:
    if smaller <= larger:
        return "yes"
    return "no (missing: %s)" % ", ".join(sorted(smaller - larger))


# -- fmt -------------------------------------------------------------------------

def cmd_fmt(args) -> int:
    text = _read(args.path)
    print(serialize(parse(text)), end="")
    return OK


# -- hidden oracle tooling -----------------------------------------------------------

def cmd_oracle_gen(args) -> int:
    generated = random_model(args.seed, with_courts=args.courts)
    print(serialize(document_of(generated.model, generated.courts)), end="")
    return OK


def cmd_oracle_solutions(args) -> int:
    loaded, _ = _load(args.path)
    state = loaded.model.state(args.case)
    sols = sorted(
        enumerate_solutions(loaded.hierarchy, state.facts),
        key=lambda sol: sorted(str(r) for r in sol.rules),
    )
    print(f"{len(sols)} applicable solutions over {_set(state.facts)}")
    for sol in sols:
        print("  " + "; ".join(str(r) for r in sol))
    return OK


if __name__ == "__main__":
    sys.exit(main())
