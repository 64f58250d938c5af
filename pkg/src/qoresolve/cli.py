"""Command-line front end: parse inputs, resolve, validate, emit artifacts.

Exit codes: 0 success, 2 input error, 3 step cap exceeded, 4 oracle
divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import driver, oracle
from .driver import ResolutionTree, StepCapExceeded, TreeNode, center_name
from .invariant import INF
from .pairs import PairError, PairList, UnsupportedInversion, pair_list


class ParseError(Exception):
    pass


class NormalizationRejected(Exception):
    pass


@dataclass
class RunSpec:
    mode: str  # resolve | validate | invariant-only
    state: Optional[driver.ChartState] = None
    binomial: Optional[oracle.BinomialSurface] = None
    outputs: tuple[str, ...] = ("trace",)
    step_cap: int = 10000
    path: str = "leftmost"
    out_dir: Optional[Path] = None
    workers: int = 1


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad fraction {text!r}: {exc}") from None


def _pairs_from_strings(entries) -> PairList:
    try:
        return pair_list(*[(_parse_fraction(a), _parse_fraction(b)) for a, b in entries])
    except PairError as exc:
        raise ParseError(str(exc)) from None


def parse_input(doc: dict) -> RunSpec:
    """Build a RunSpec from a configuration document (already JSON-decoded).

    Exactly one of {"m", "pairs"} or {"binomial"} must be present.  Pair
    inputs are normalized (with the applied moves logged as a warning when
    nontrivial); binomial inputs are converted through the oracle.
    """
    spec = RunSpec(mode=str(doc.get("mode", "resolve")))
    has_pairs = "pairs" in doc
    has_binom = "binomial" in doc
    if has_pairs == has_binom:
        raise ParseError("provide exactly one of 'pairs' or 'binomial'")
    if has_binom:
        b = doc["binomial"]
        try:
            spec.binomial = oracle.BinomialSurface(int(b["m"]), int(b["a"]), int(b["b"]))
        except (KeyError, ValueError, oracle.OracleError) as exc:
            raise ParseError(f"bad binomial input: {exc}") from None
        m, pairs, _ghost = oracle.oracle_pairs(spec.binomial)
    else:
        entries = doc["pairs"]
        pairs = _pairs_from_strings(entries)
        m = int(doc.get("m", pairs.denominator))
        if m < 1:
            raise ParseError(f"bad degree m={m}")
    try:
        spec.state = driver.initial_state(m, pairs)
    except (UnsupportedInversion, PairError) as exc:
        raise NormalizationRejected(str(exc)) from None
    if spec.state.input_moves:
        print(
            f"warning: input normalized via moves {list(spec.state.input_moves)}",
            file=sys.stderr,
        )
    if "step_cap" in doc:
        spec.step_cap = int(doc["step_cap"])
    if "outputs" in doc:
        spec.outputs = tuple(doc["outputs"])
    return spec


def _frac_str(f: Fraction) -> str:
    return str(f)


def _slots_json(inv) -> list:
    from .invariant import INF

    return ["inf" if v is INF else str(v) for v in inv.slots]


def _node_dict(node: TreeNode) -> dict:
    state = node.state
    out = {
        "year": state.year,
        "cycle_year": state.cycle_year,
        "cycle_start": state.cycle_start,
        "m": state.m,
        "pairs": [[_frac_str(p.x_exp), _frac_str(p.y_exp)] for p in state.pairs],
        "ghost": None
        if state.ghost is None
        else {
            "x_exp": _frac_str(state.ghost.x_exp),
            "y_exp": _frac_str(state.ghost.y_exp),
            "dominant": state.ghost.dominant,
        },
        "divisors": [
            {
                "birth": d.birth,
                "kind": d.kind.value,
                "exponents": None
                if d.exponents is None
                else [_frac_str(d.exponents[0]), _frac_str(d.exponents[1])],
                "dominant": d.dominant,
                "label": d.label(),
            }
            for d in state.config
        ],
        "history": [
            {"slots": _slots_json(h), "partial": h.partial} for h in state.history
        ],
        "invariant": node.result.invariant.render(),
        "d_monomial": node.result.d_monomial_str(),
        "resolved": node.resolved,
        "center": None if node.center is None else center_name(node.center),
        "children": {e.chart: _node_dict(e.node) for e in node.children},
    }
    return out


def state_from_node(doc: dict) -> driver.ChartState:
    """Rebuild a chart state from its JSON form (for subtree round-trips)."""
    from . import divisors as dv
    from .invariant import INF, Invariant
    from .pairs import CharPair, GhostMonomial

    def slot(v, i):
        if v == "inf":
            return INF
        return int(v) if i % 2 == 1 else Fraction(v)

    history = tuple(
        Invariant(
            tuple(slot(v, i) for i, v in enumerate(h["slots"])), h["partial"]
        )
        for h in doc["history"]
    )
    kinds = {k.value: k for k in dv.Kind}
    config = dv.DivisorConfig(
        tuple(
            dv.Divisor(
                d["birth"],
                kinds[d["kind"]],
                None
                if d["exponents"] is None
                else (Fraction(d["exponents"][0]), Fraction(d["exponents"][1])),
                d["dominant"],
            )
            for d in doc["divisors"]
        )
    )
    ghost = None
    if doc["ghost"] is not None:
        ghost = GhostMonomial(
            Fraction(doc["ghost"]["x_exp"]),
            Fraction(doc["ghost"]["y_exp"]),
            doc["ghost"]["dominant"],
        )
    pairs = PairList(
        tuple(CharPair(Fraction(a), Fraction(b)) for a, b in doc["pairs"])
    )
    return driver.ChartState(
        m=doc["m"],
        pairs=pairs,
        ghost=ghost,
        config=config,
        history=history,
        year=doc["year"],
        cycle_start=doc["cycle_start"],
    )


def tree_json(tree: ResolutionTree) -> str:
    return json.dumps({"nodes": tree.node_count, "root": _node_dict(tree.root)}, indent=1)


def tree_dot(tree: ResolutionTree) -> str:
    lines = ["digraph resolution {", '  node [shape=box, fontname="monospace"];']
    ids: dict[int, int] = {}

    def visit(node: TreeNode) -> int:
        idx = ids.setdefault(id(node), len(ids))
        inv = node.result.invariant.render()
        label = f"inv={inv} m={node.state.m}"
        if node.resolved:
            label += " resolved"
        lines.append(f'  n{idx} [label="{label}"];')
        for edge in node.children:
            cidx = visit(edge.node)
            lines.append(
                f'  n{idx} -> n{cidx} [label="{center_name(node.center)}/{edge.chart}"];'
            )
        return idx

    visit(tree.root)
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_outputs(tree: ResolutionTree, spec: RunSpec) -> dict[str, str]:
    """Render the requested artifacts; write them under out_dir if set."""
    artifacts: dict[str, str] = {}
    if "trace" in spec.outputs:
        artifacts["trace"] = driver.format_trace(tree, spec.path) + "\n"
    if "json" in spec.outputs:
        artifacts["json"] = tree_json(tree) + "\n"
    if "dot" in spec.outputs:
        artifacts["dot"] = tree_dot(tree)
    if spec.out_dir is not None:
        spec.out_dir.mkdir(parents=True, exist_ok=True)
        names = {"trace": "trace.txt", "json": "tree.json", "dot": "graph.dot"}
        for kind, text in artifacts.items():
            (spec.out_dir / names[kind]).write_text(text)
    return artifacts


def _build_argparser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qoresolve",
        description=(
            "Resolve a quasi-ordinary surface singularity canonically from its "
            "characteristic exponent pairs."
        ),
    )
    ap.add_argument("--input", type=Path, help="JSON configuration document")
    ap.add_argument("--binomial", help="m,a,b for the surface z^m + x^a y^b")
    ap.add_argument("--pairs", help="semicolon-separated pairs, e.g. '2/3,4/3;1,2'")
    ap.add_argument(
        "--emit", default="trace", help="comma-separated subset of trace,json,dot"
    )
    ap.add_argument("--out", type=Path, help="directory for emitted files")
    ap.add_argument("--step-cap", type=int, default=10000)
    ap.add_argument("--validate", action="store_true", help="cross-check against the oracle")
    ap.add_argument("--path", default="leftmost", choices=["leftmost", "all"])
    ap.add_argument("--workers", type=int, default=1)
    return ap


def _spec_from_args(args) -> RunSpec:
    if args.input:
        try:
            doc = json.loads(args.input.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read {args.input}: {exc}") from None
    elif args.binomial:
        parts = args.binomial.split(",")
        if len(parts) != 3:
            raise ParseError("--binomial expects m,a,b")
        doc = {"binomial": {"m": parts[0], "a": parts[1], "b": parts[2]}}
    elif args.pairs:
        entries = []
        for chunk in args.pairs.split(";"):
            comps = chunk.split(",")
            if len(comps) != 2:
                raise ParseError(f"bad pair {chunk!r}")
            entries.append(comps)
        doc = {"pairs": entries}
    else:
        raise ParseError("one of --input, --binomial, --pairs is required")
    spec = parse_input(doc)
    spec.outputs = tuple(s for s in args.emit.split(",") if s)
    for kind in spec.outputs:
        if kind not in ("trace", "json", "dot"):
            raise ParseError(f"unknown output kind {kind!r}")
    spec.step_cap = args.step_cap
    spec.path = args.path
    spec.out_dir = args.out
    spec.workers = args.workers
    if args.validate:
        spec.mode = "validate"
        if spec.binomial is None:
            raise ParseError("--validate requires a binomial input")
    return spec


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_argparser().parse_args(argv)
    try:
        spec = _spec_from_args(args)
    except (ParseError, NormalizationRejected) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if spec.mode == "validate":
        report = oracle.cross_validate(spec.binomial, step_cap=spec.step_cap)
        print(report.text())
        if not report.ok:
            return 4
        return 0

    try:
        tree = driver.resolve(spec.state, step_cap=spec.step_cap, workers=spec.workers)
    except StepCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    artifacts = emit_outputs(tree, spec)
    if spec.out_dir is None:
        for kind in ("trace", "json", "dot"):
            if kind in artifacts:
                sys.stdout.write(artifacts[kind])
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
