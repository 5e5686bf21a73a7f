"""Command-line front end.

Every command prints one JSON report (or CSV with ``--format csv``) to
stdout.  Exit codes: 0 success, 1 violated under ``--assert-satisfied``,
2 bad input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .behavior import Behavior, fixture_nc, fixture_p1, fixture_p2
from .distance import KINDS, DistanceKind, check_axioms, random_triple_joint
from .errors import SolverError, TriangleKitError
from .inequality import ChainedInequality, InequalityResult, evaluate, objective_for
from .monogamy import MonogamyResult, bell_bell_monogamy, chsh_kcbs_monogamy, monogamy_bound_via_lp
from .polytope import JpdVerdict, Objective, assignment_of, jpd_exists, max_over_no_disturbance
from .quantum import CHSH_OPTIMAL_ANGLES, GNC5_SIGNS, chsh_quantum_behavior, kcbs_quantum_behavior, optimize_quantum_value
from .scenario import scenario_by_name


class InputError(Exception):
    pass


def _num(x: float) -> float:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    x = float(x)
    if not math.isfinite(x):
        return x
    return float(f"{x:.12g}")


def _clean(obj):
    """Round every float to 12 significant digits, recursively."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    return obj


def inequality_item(r: InequalityResult) -> dict:
    return {
        "type": "inequality",
        "name": r.name,
        "value": r.value,
        "bound": r.bound,
        "violated": r.violated,
        "verdict": r.verdict,
        "witness_terms": [[k, v] for k, v in r.witness_terms],
    }


def chained_item(c: ChainedInequality) -> dict:
    return {
        "type": "chained",
        "kind": c.kind.variant,
        "cycle": list(c.cycle),
        "lhs_edge": list(c.lhs_edge),
        "rhs_edges": [list(e) for e in c.rhs_edges],
        "lhs_value": c.lhs_value,
        "rhs_values": list(c.rhs_values),
        "rhs_value": c.rhs_value,
        "satisfied": c.satisfied,
        "violated": c.violated,
    }


def jpd_item(v: JpdVerdict, variables) -> dict:
    d = {"type": "jpd", "exists": v.exists, "violated": not v.exists}
    if v.exists:
        d["weights"] = [
            {"index": i, "assignment": assignment_of(i, variables), "weight": w} for i, w in sorted(v.weights.items())
        ]
        d["residual"] = v.residual
    else:
        d["certificate"] = list(v.certificate)
    return d


def monogamy_item(m: MonogamyResult) -> dict:
    return {
        "type": "monogamy",
        "relation": m.relation,
        "kind": m.kind.variant,
        "lhs_value": m.lhs_value,
        "rhs_value": m.rhs_value,
        "satisfied": m.satisfied,
        "violated": not m.satisfied,
        "first_expression": inequality_item(m.first_expression),
        "second_expression": inequality_item(m.second_expression),
        "lhs_terms": [[k, v] for k, v in m.lhs_terms],
        "rhs_terms": [[k, v] for k, v in m.rhs_terms],
    }


def _load_behavior(path: str) -> Behavior:
    try:
        return Behavior.load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def cmd_eval(args) -> tuple[list[dict], None]:
    b = _load_behavior(args.behavior)
    r = evaluate(b, args.inequality, args.kind)
    return [chained_item(r) if isinstance(r, ChainedInequality) else inequality_item(r)], None


def cmd_jpd(args):
    b = _load_behavior(args.behavior)
    return [jpd_item(jpd_exists(b), b.scenario.variables)], None


def cmd_maximize(args):
    s = scenario_by_name(args.scenario)
    path = Path(args.objective)
    if path.suffix == ".json" or path.exists():
        try:
            obj = Objective.from_dict(json.loads(path.read_text()))
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        label = str(path)
    else:
        obj = objective_for(args.objective)
        label = args.objective
    value, witness = max_over_no_disturbance(s, obj)
    item = {
        "type": "maximum",
        "scenario": args.scenario,
        "objective": label,
        "value": value,
        "upper_bound": obj.upper_bound(),
        "witness": witness.to_dict(),
    }
    return [item], None


def cmd_quantum_max(args):
    opt = optimize_quantum_value(args.target, args.restarts, args.seed)
    item = {
        "type": "quantum",
        "target": opt.target,
        "value": opt.value,
        "parameters": opt.parameters,
        "restart_values": opt.restart_values,
        "behavior": opt.behavior.to_dict(),
    }
    return [item], args.seed


def cmd_monogamy(args):
    rel = args.relation
    head, _, rest = rel.partition(":")
    if head == "mono-bound":
        value = monogamy_bound_via_lp(rest)
        return [{"type": "monogamy-bound", "relation": rest, "kind": "covariance", "value": value}], None
    if head != "mono":
        raise InputError(f"unknown relation {rel!r}; expected mono:<which>:<kind> or mono-bound:<which>")
    which, _, kind = rest.partition(":")
    if not args.behavior:
        raise InputError(f"{rel} needs --behavior")
    b = _load_behavior(args.behavior)
    fn = {"hybrid": chsh_kcbs_monogamy, "tripartite": bell_bell_monogamy}.get(which)
    if fn is None:
        raise InputError(f"unknown monogamy scenario {which!r}")
    return [monogamy_item(fn(b, DistanceKind(kind or "covariance")))], None


def cmd_fixtures(args):
    out = Path(args.emit)
    out.mkdir(parents=True, exist_ok=True)
    behaviors = {
        "p1": fixture_p1(),
        "p2": fixture_p2(),
        "nc": fixture_nc(),
        "chsh_quantum": chsh_quantum_behavior(*CHSH_OPTIMAL_ANGLES),
        "kcbs_quantum": kcbs_quantum_behavior(),
        "kcbs_quantum_gnc": kcbs_quantum_behavior(signs=GNC5_SIGNS),
    }
    items = []
    for name, b in behaviors.items():
        path = out / f"{name}.json"
        b.save(path)
        items.append({"type": "fixture", "name": name, "path": str(path)})
    return items, None


def cmd_axioms(args):
    kind = DistanceKind(args.kind)
    rng = np.random.default_rng(args.seed)
    fails = {"nonnegative": 0, "symmetric": 0, "triangle": 0, "identity": 0}
    for _ in range(args.samples):
        j = random_triple_joint(rng)
        k = kind
        if kind.variant == "kolmogorov":
            k = DistanceKind("kolmogorov", {v: int(rng.choice([1, -1])) for v in "XYZ"})
        rep = check_axioms(k, j)
        for name in fails:
            fails[name] += not getattr(rep, name)
    total = sum(fails.values())
    return [{"type": "axioms", "kind": args.kind, "samples": args.samples, "failures": fails, "violated": total > 0}], args.seed


COMMANDS = {
    "eval": cmd_eval,
    "jpd": cmd_jpd,
    "maximize": cmd_maximize,
    "quantum-max": cmd_quantum_max,
    "monogamy": cmd_monogamy,
    "fixtures": cmd_fixtures,
    "axioms": cmd_axioms,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trianglekit", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--assert-satisfied", action="store_true", help="exit 1 if any result is violated")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a named inequality on a behavior file")
    p.add_argument("--behavior", required=True)
    p.add_argument("--inequality", required=True, help="gnc:N, gne:N, specker, ch, excl:N, chained:<kind>:N")
    p.add_argument("--kind", choices=KINDS)

    p = sub.add_parser("jpd", help="decide joint-distribution existence")
    p.add_argument("--behavior", required=True)

    p = sub.add_parser("maximize", help="maximize an objective over the no-disturbance polytope")
    p.add_argument("--scenario", required=True, help="cycle:N, bell:N, hybrid, tripartite")
    p.add_argument("--objective", required=True, help="objective JSON file or inequality name")

    p = sub.add_parser("quantum-max", help="search quantum measurement angles")
    p.add_argument("--target", required=True)
    p.add_argument("--restarts", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("monogamy", help="check a monogamy relation")
    p.add_argument("--behavior")
    p.add_argument("--relation", required=True, help="mono:hybrid:<kind>, mono:tripartite:<kind>, mono-bound:<which>")

    p = sub.add_parser("fixtures", help="write fixture and quantum behaviors as JSON")
    p.add_argument("--emit", required=True, metavar="DIR")

    p = sub.add_parser("axioms", help="check distance axioms on random triple joints")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _flatten(prefix: str, obj, row: dict) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, row)
    elif isinstance(obj, list) and not any(isinstance(v, (dict, list)) for v in obj):
        row[prefix] = ";".join(str(v) for v in obj)
    elif isinstance(obj, list):
        row[prefix] = json.dumps(obj)
    else:
        row[prefix] = obj


def to_csv(items: list[dict]) -> str:
    rows = []
    for item in items:
        row = {}
        _flatten("", {k: v for k, v in item.items() if k not in ("witness", "behavior")}, row)
        rows.append(row)
    fields = []
    for row in rows:
        fields += [k for k in row if k not in fields]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def run(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    start = time.perf_counter()
    try:
        items, seed = COMMANDS[args.command](args)
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except (InputError, TriangleKitError, ValueError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2

    items = _clean(items)
    if args.format == "csv":
        stdout.write(to_csv(items))
    else:
        report = {
            "command": argv,
            "version": __version__,
            "seed": seed,
            "items": items,
            "duration_s": round(time.perf_counter() - start, 6),
        }
        stdout.write(json.dumps(report, indent=2) + "\n")

    if args.assert_satisfied and any(item.get("violated") for item in items):
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
