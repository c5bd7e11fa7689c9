"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 mathematically inconsistent
data (divisibility, residue class, genus), 3 size gate.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .balanced import enumerate_balanced, is_stably_balanced
from .exceptions import GenusError, InconsistentClassError, SizeGateError
from .graph import DualGraph, QuasistableModel, arithmetic_genus
from .homology import ResidueVector
from .picard import chi_diagnostics, riass_dimension, shat_fiber
from .strata import FactoredCount, fiber_inventory, spin_class


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated integers, got {text!r}") from None


PRESETS = {
    # two components meeting in three nodes
    "example-4.2": lambda: DualGraph.from_edges([1, 1], [(0, 1)] * 3),
    "fibra": lambda: DualGraph.from_edges([1, 1], [(0, 1)] * 3),
}


def load_curve(text: str) -> DualGraph:
    """A preset name, ``compact-chain:g1,g2,...`` or a path to a JSON file."""
    try:
        if text in PRESETS:
            return PRESETS[text]()
        if text.startswith("compact-chain:"):
            genera = _ints(text.split(":", 1)[1])
            if not genera:
                raise InputError("compact-chain needs at least one genus")
            return DualGraph.from_edges(genera, [(i, i + 1) for i in range(len(genera) - 1)])
        path = Path(text)
        if not path.is_file():
            raise InputError(f"no preset or file named {text!r}")
        return DualGraph.from_json(json.loads(path.read_text()))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"invalid curve: {exc}") from None


def parse_class(graph: DualGraph, r: int, text: str):
    """Returns ``(graph, target, l)``; spin classes with markings return a
    graph carrying those markings and ``l``, other classes ``l = None``."""
    if text == "zero":
        return graph, ResidueVector(r, [0] * graph.n_vertices), None
    if text.startswith("spin:"):
        l, marks = None, [dict(m) for m in graph.markings]
        for i, item in enumerate(text[5:].split(",")):
            key, _, val = item.partition("=")
            if key == "l" and i == 0:
                l = _ints(val)[0] if val else None
            elif key == "m":
                v, _, c = val.partition(":")
                try:
                    v, c = int(v), int(c)
                except ValueError:
                    raise InputError(f"bad marking {item!r}; expected m=vertex:coefficient") from None
                if not 0 <= v < graph.n_vertices:
                    raise InputError(f"marking on unknown vertex {v}")
                marks[v][f"m{sum(len(x) for x in marks)}"] = c
            else:
                raise InputError(f"bad class item {item!r}")
        if l is None:
            raise InputError("spin class needs l=<int> first")
        graph = DualGraph.from_edges(graph.genera, graph.edges, marks)
        return graph, spin_class(graph, r, l, use_markings=True), l
    values = _ints(text)
    if len(values) != graph.n_vertices:
        raise InputError(f"class has {len(values)} entries, curve has {graph.n_vertices} components")
    return graph, ResidueVector(r, values), None


def _count(c: FactoredCount) -> str:
    return f"{c} = {c.value}"


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[str(x) for x in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]
    return "\n".join("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells)


def _fmt_delta(delta) -> str:
    return "{" + ",".join(str(e) for e in sorted(delta)) + "}"


def cmd_limit_roots(args):
    graph = load_curve(args.curve)
    if args.r < 2:
        raise InputError("r must be at least 2")
    graph, target, l = parse_class(graph, args.r, args.cls)
    if target.total() != 0:
        raise InconsistentClassError(f"class entries sum to {target.total()} mod {args.r}")
    if l is None:
        report = fiber_inventory(graph, args.r, target=target)
    else:
        report = fiber_inventory(graph, args.r, l=l, use_markings=True)
    data = {"curve": graph.to_json(), "command": "limit-roots", **report.to_json()}
    rows = []
    for s in report.strata:
        row = [
            _fmt_delta(s.weighting.delta),
            " ".join(f"{u}/{v}" for _, _, u, _, v in s.weighting.half_edge_weights()) or "-",
            _count(s.root_count),
            s.multiplicity,
            s.aut_order,
            "yes" if s.smooth_point else "no",
        ]
        if s.limit_root_multidegree is not None:
            row.append(list(s.limit_root_multidegree.values))
        rows.append(row)
    headers = ["delta", "u/v", "roots", "mult", "aut", "smooth"]
    if report.l is not None:
        headers.append("multidegree")
    length = report.length
    text = "\n".join([
        f"limit roots of order {args.r}, class {list(target.values)}, {len(report.strata)} strata",
        _table(headers, rows),
        f"total length {_count(length)}  (r^(2g) = {report.expected_length})",
    ])
    return data, text


def cmd_balanced(args):
    graph = load_curve(args.curve)
    if args.multidegree is not None:
        delta = frozenset(_ints(args.delta)) if args.delta else frozenset()
        if any(not 0 <= e < graph.n_edges for e in delta):
            raise InputError("delta refers to an unknown edge")
        model = QuasistableModel(graph, delta)
        d = _ints(args.multidegree)
        if len(d) != model.derived_graph.n_vertices:
            raise InputError(
                f"multidegree has {len(d)} entries, the model has {model.derived_graph.n_vertices} components"
            )
        verdict = is_stably_balanced(model, d)
        data = {"curve": graph.to_json(), "command": "balanced", "delta": sorted(delta),
                "multidegree": d, **verdict.to_json()}
        lines = [f"{d} on X_{_fmt_delta(delta)}: {verdict.status.value}"]
        for w in verdict.witnesses:
            lines.append(f"  witness Z={list(w.vertices)} ({w.kind}): d_Z={w.d_Z} w_Z={w.w_Z} k_Z={w.k_Z}")
        return data, "\n".join(lines)
    if args.degree is None:
        raise InputError("give --degree, or --multidegree to check one")
    found = enumerate_balanced(graph, args.degree, stably_only=args.stable, parallel=args.parallel)
    models, rows = [], []
    for model, degrees in found.items():
        entries = []
        for d in degrees:
            verdict = is_stably_balanced(model, d)
            entry = {"d": list(d.values), **verdict.to_json()}
            entries.append(entry)
            rows.append([_fmt_delta(model.delta), list(d.values), verdict.status.value])
        if not degrees:
            rows.append([_fmt_delta(model.delta), "none", ""])
        models.append({"delta": sorted(model.delta), "multidegrees": entries})
    data = {"curve": graph.to_json(), "command": "balanced", "degree": args.degree,
            "stable_only": args.stable, "models": models}
    text = f"balanced multidegrees of degree {args.degree}\n" + _table(["delta", "d", "status"], rows)
    return data, text


def _shat_summary(report) -> str:
    parts = [f"isolated points: {_count(report.isolated_points)}"]
    by_dim: dict[int, FactoredCount] = {}
    for s in report.strata:
        if s.families is not None:
            dim = s.dimension.value
            by_dim[dim] = by_dim[dim] + s.families if dim in by_dim else s.families
    for dim, count in sorted(by_dim.items()):
        parts.append(f"families of dimension {dim}: {_count(count)}")
    bounds = [s for s in report.strata if not s.dimension.exact]
    if bounds:
        parts.append(f"{len(bounds)} strata with dimension only bounded by {bounds[0].dimension.value}")
    return "; ".join(parts)


def cmd_shat_fiber(args):
    graph = load_curve(args.curve)
    report = shat_fiber(graph, args.r, args.l, parallel=args.parallel)
    data = {"curve": graph.to_json(), "command": "shat-fiber", "summary": _shat_summary(report),
            **report.to_json()}
    rows = [
        [_fmt_delta(s.model.delta), list(s.twister.t.values), list(s.multidegree.values),
         s.verdict.status.value, s.limit_root_classes, str(s.dimension)]
        for s in report.strata
    ]
    text = "\n".join([
        f"fiber over a genus {arithmetic_genus(graph)} curve, r={args.r}, l={args.l}",
        _table(["delta", "twister", "d", "status", "root classes", "dim"], rows),
        _shat_summary(report),
    ])
    return data, text


def cmd_riass(args):
    if args.table:
        cases = []
        for k in range(2, 7):
            for r in range(2, 8):
                for a in range(r):
                    cases.append(riass_dimension(k, r, 1, a, (-a) % r))
    else:
        if args.k is None or args.r is None or args.res is None:
            raise InputError("give --k, --r and --res, or --table")
        res = _ints(args.res)
        if len(res) != 2:
            raise InputError("--res takes two residues")
        cases = [riass_dimension(args.k, args.r, 1, res[0], res[1])]
    data = {"command": "riass", "cases": [c.to_json() for c in cases]}
    rows = [[c.k, c.r, f"{c.residues[0]},{c.residues[1]}", c.dimension, c.via, "yes" if c.agrees else "NO"]
            for c in cases]
    return data, _table(["k", "r", "lw mod r", "dim", "via", "agrees"], rows)


def cmd_chi(args):
    graph = load_curve(args.curve)
    report = chi_diagnostics(graph, args.r, args.l)
    data = {"curve": graph.to_json(), "command": "chi", **report.to_json()}
    rows = [[_fmt_delta(s.model.delta), list(s.weighting.weights), list(s.limit_root_multidegree.values),
             s.balanced.status.value] for s in report.strata]
    flag = report.shat_positive_dimensional
    text = "\n".join([
        report.summary(),
        f"positive-dimensional strata in the Picard-side fiber: {'unknown' if flag is None else flag}",
        _table(["delta", "weights", "d", "status"], rows),
    ])
    return data, text


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--parallel", action="store_true", help="enumerate models in worker processes")

    parser = _Parser(prog="rootstrata", description="Limit roots and balanced multidegrees on nodal curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limit-roots", parents=[common], help="strata of limit r-th roots")
    p.add_argument("--curve", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--class", dest="cls", default="zero",
                   help="zero | spin:l=N[,m=v:c,...] | comma-separated residues")
    p.set_defaults(func=cmd_limit_roots)

    p = sub.add_parser("balanced", parents=[common], help="balanced multidegrees on all blow-ups")
    p.add_argument("--curve", required=True)
    p.add_argument("--degree", type=int)
    p.add_argument("--stable", action="store_true", help="keep only stably balanced ones")
    p.add_argument("--multidegree", help="check one multidegree on the blow-up given by --delta")
    p.add_argument("--delta", help="comma-separated blown-up edge ids")
    p.set_defaults(func=cmd_balanced)

    p = sub.add_parser("shat-fiber", parents=[common], help="twister strata of the Picard-side fiber")
    p.add_argument("--curve", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_shat_fiber)

    p = sub.add_parser("riass", parents=[common], help="fiber dimension over two components")
    p.add_argument("--k", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--res", help="l*w1,l*w2 mod r")
    p.add_argument("--table", action="store_true", help="sweep k in 2..6, r in 2..7")
    p.set_defaults(func=cmd_riass)

    p = sub.add_parser("chi", parents=[common], help="balancedness of every limit-root stratum")
    p.add_argument("--curve", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(func=cmd_chi)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        data, text = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (InconsistentClassError, GenusError) as exc:
        print(f"inconsistent: {exc}", file=sys.stderr)
        return 2
    except SizeGateError as exc:
        print(f"too large: {exc}", file=sys.stderr)
        return 3
    if args.format == "json":
        print(json.dumps(data, sort_keys=True, indent=2))
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
