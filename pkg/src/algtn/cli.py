"""Command-line front end.

Exit codes: 0 ok, 2 parse error, 3 validation error, 4 deviation above
tolerance, 5 violated size/rank bound.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from dataclasses import dataclass, field

from . import circuit as qc
from . import decomp as dc
from . import distinct as ed
from . import generators as gen
from . import network as nw
from . import reduce as rd
from . import verify as vf
from .boolean import assignments, format_assignment, parse_assignment
from .convert import convert, verify_against_oracle

EXIT_OK, EXIT_PARSE, EXIT_VALIDATE, EXIT_TOLERANCE, EXIT_BOUND = 0, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    seed: int = 0
    tolerance: float = 1e-9
    max_qubits: int = qc.MAX_ORACLE_QUBITS
    fmt: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise CliError(EXIT_PARSE, f"seed {self.seed} is not a 64-bit unsigned integer")


# input helpers


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {e.strerror}")


def _load_json(path: str) -> dict:
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(EXIT_PARSE, f"{path}: parse error at line {e.lineno} column {e.colno} (char {e.pos}): {e.msg}")


def _structure(path: str, what: str, fn, d):
    try:
        return fn(d)
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise CliError(EXIT_PARSE, f"{path}: not a valid {what} document: {e!r}")


def load_circuit(path: str, cfg: RunConfig) -> qc.QuantumCircuit:
    C = _structure(path, "circuit", qc.from_json, _load_json(path))
    problems = qc.validate_circuit(C)
    if problems:
        raise CliError(EXIT_VALIDATE, f"{path}: invalid circuit: " + "; ".join(problems))
    if C.num_qubits > cfg.max_qubits:
        raise CliError(EXIT_VALIDATE, f"{path}: {C.num_qubits} qubits exceeds --max-qubits {cfg.max_qubits}")
    return C


def load_network(path: str) -> nw.TensorNetwork:
    d = _load_json(path)
    if "vertices" in d:  # a circuit: use its tensor network
        C = _structure(path, "circuit", qc.from_json, d)
        problems = qc.validate_circuit(C)
        if problems:
            raise CliError(EXIT_VALIDATE, f"{path}: invalid circuit: " + "; ".join(problems))
        return convert(C)
    N = _structure(path, "network", nw.from_json, d)
    problems = nw.validate(N)
    if problems:
        raise CliError(EXIT_VALIDATE, f"{path}: invalid network: " + "; ".join(problems))
    return N


def _assignment(text: str) -> dict:
    try:
        return parse_assignment(text)
    except ValueError as e:
        raise CliError(EXIT_PARSE, f"assignment: {e}")


def _names(text: str | None) -> list[str]:
    return [s.strip() for s in (text or "").split(",") if s.strip()]


# subcommands


def cmd_simulate(cfg: RunConfig) -> tuple[dict, int]:
    path = cfg.inputs[0]
    C = load_circuit(path, cfg)
    N = convert(C)
    given = cfg.options.get("assign")
    if given is not None:
        alpha = _assignment(given)
        missing = set(C.variables) - set(alpha)
        if missing:
            raise CliError(EXIT_PARSE, f"assignment leaves {sorted(missing)} unassigned")
        alphas = [{v: alpha[v] for v in C.variables}]
    else:
        alphas = list(assignments(C.variables))
    rows = []
    worst = 0.0
    for alpha in alphas:
        p_oracle = qc.output_probability(C, alpha)
        p_net = nw.value(N, alpha)
        dev = abs(p_oracle - p_net)
        worst = max(worst, dev)
        rows.append({"assignment": format_assignment(alpha), "oracle": p_oracle, "network": p_net, "deviation": dev})
    report = {"circuit": path, "tolerance": cfg.tolerance, "max_deviation": worst, "rows": rows}
    return report, EXIT_TOLERANCE if worst > cfg.tolerance else EXIT_OK


def cmd_convert(cfg: RunConfig) -> tuple[dict, int]:
    path = cfg.inputs[0]
    C = load_circuit(path, cfg)
    N = convert(C)
    report = {"circuit": path, "tensors": len(N), "rank": N.rank, "degree": N.degree,
              "total_degree": N.total_degree}
    code = EXIT_OK
    if cfg.options.get("check", True):
        rep = verify_against_oracle(C, network=N, tol=cfg.tolerance, rng=random.Random(cfg.seed))
        report["oracle_check"] = {"checked": rep.checked, "max_deviation": rep.max_deviation, "witness": rep.witness}
        if not rep.ok:
            code = EXIT_TOLERANCE
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(nw.dumps(N))
        report["output"] = cfg.output
    else:
        report["network"] = nw.to_json(N)
    return report, code


def _carving_for(G, path: str | None):
    if path is None:
        return None
    d = _load_json(path)
    if "carving_decomposition" in d:
        d = d["carving_decomposition"]
    obj = _structure(path, "decomposition", dc.decomposition_from_json, d)
    if isinstance(obj, dc.TreeDecomposition):
        problems = dc.validate_tree_decomposition(G, obj)
        if problems:
            raise CliError(EXIT_VALIDATE, f"{path}: " + "; ".join(problems))
        obj = dc.carving_from_tree_decomposition(G, obj)
    problems = dc.validate_carving_decomposition(G, obj)
    if problems:
        raise CliError(EXIT_VALIDATE, f"{path}: " + "; ".join(problems))
    return obj


def cmd_reduce(cfg: RunConfig) -> tuple[dict, int]:
    path = cfg.inputs[0]
    N = load_network(path)
    ys = _names(cfg.options.get("ys")) or list(N.varset)
    unknown = set(ys) - set(N.varset)
    if unknown:
        raise CliError(EXIT_VALIDATE, f"Y mentions unknown variables {sorted(unknown)}")
    beta = _assignment(cfg.options.get("beta") or "")
    outside = set(N.varset) - set(ys)
    if set(beta) != outside:
        raise CliError(EXIT_VALIDATE, f"beta must assign exactly the variables outside Y: {sorted(outside)}")
    bound = nw.substitute(N, beta) if beta else N
    cd = _carving_for(nw.build_graph(bound), cfg.options.get("decomposition"))
    try:
        red = rd.reduce_subfunction(N, ys, beta, cd=cd, strict=False)
    except rd.BoundViolation as e:
        raise CliError(EXIT_BOUND, str(e))
    st = red.stats
    report = {"network": path, "ys": ys, "beta": format_assignment(beta), "stats": st.as_dict()}
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(nw.dumps(red.network))
        report["output"] = cfg.output
    else:
        report["reduced"] = nw.to_json(red.network)
    return report, EXIT_BOUND if st.violations else EXIT_OK


def cmd_decomp(cfg: RunConfig) -> tuple[dict, int]:
    path = cfg.inputs[0]
    N = load_network(path)
    G = nw.build_graph(N)
    td = dc.heuristic_tree_decomposition(G)
    cd = dc.carving_from_tree_decomposition(G, td)
    report = {
        "input": path,
        "vertices": G.number_of_nodes(),
        "edges": G.number_of_edges(),
        "max_degree": dc.max_degree(G),
        "treewidth_upper": td.width,
        "carving_width_upper": dc.carving_width(G, cd),
        "c_conv": dc.C_CONV,
        "tree_decomposition": dc.td_to_json(td),
        "carving_decomposition": dc.cd_to_json(cd),
    }
    if cfg.options.get("exact"):
        try:
            w, ecd = dc.exact_carving_decomposition(G)
        except dc.GraphTooLarge as e:
            raise CliError(EXIT_VALIDATE, str(e))
        report["carving_width_exact"] = w
        report["carving_decomposition"] = dc.cd_to_json(ecd)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            json.dump(report["carving_decomposition"], fh, indent=1)
        report["output"] = cfg.output
    return report, EXIT_OK


def cmd_distinct(cfg: RunConfig) -> tuple[dict, int]:
    ks = [int(k) for k in _names(cfg.options.get("ks") or "2,4")]
    try:
        reports = ed.subfunction_table(ks)
    except (ed.SizeCapExceeded, ValueError) as e:
        raise CliError(EXIT_VALIDATE, str(e))
    rows = [r.as_dict() for r in reports]
    return {"rows": rows}, EXIT_OK if all(r.ok for r in reports) else EXIT_TOLERANCE


_BOUND_PROPERTIES = {"y_node_bounds", "tree_to_carving"}


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    caps = vf.Caps(max_qubits=min(cfg.max_qubits, vf.Caps.max_qubits), tolerance=cfg.tolerance)
    report = vf.run_suite(cfg.seed, cfg.options.get("count", 20), caps, mutate=cfg.options.get("mutate", False))
    failed = [p["name"] for p in report["properties"] if not p["passed"]]
    if not failed:
        return report, EXIT_OK
    return report, EXIT_BOUND if failed[0] in _BOUND_PROPERTIES else EXIT_TOLERANCE


def cmd_bench(cfg: RunConfig) -> tuple[dict, int]:
    """Time greedy versus carving-guided contraction on seeded random circuits."""
    rng = random.Random(cfg.seed)
    rows = []
    for k in range(cfg.options.get("count", 10)):
        C = gen.random_circuit(rng, min(cfg.max_qubits, 10), 30, 4, min_qubits=2)
        N = convert(C)
        G = nw.build_graph(N)
        cd = dc.carving_decomposition(G)
        row = {"instance": k, "tensors": len(N), "carving_width": dc.carving_width(G, cd)}
        for name, kw in (("greedy", {"order": nw.greedy_path(N)}), ("carving", {"decomposition": cd})):
            t = time.perf_counter()
            nw.contract_all(N, **kw)
            row[f"{name}_seconds"] = round(time.perf_counter() - t, 6)
        rows.append(row)
    return {"rows": rows}, EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "convert": cmd_convert,
    "reduce": cmd_reduce,
    "decomp": cmd_decomp,
    "distinct": cmd_distinct,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


# output


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj if not isinstance(obj, list) else json.dumps(obj)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    buf = io.StringIO()
    rows = report.get("rows")
    if isinstance(rows, list) and rows and all(isinstance(r, dict) for r in rows):
        cols = list(rows[0])
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({c: json.dumps(r[c]) if isinstance(r.get(c), (list, dict)) else r.get(c) for c in cols})
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(_flatten(report))
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--max-qubits", type=int, default=qc.MAX_ORACLE_QUBITS)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--in", dest="in_path")
    common.add_argument("--out", dest="out_path")

    p = argparse.ArgumentParser(prog="algtn", description="Algebraic tensor networks for quantum circuits.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("simulate", parents=[common], help="oracle vs network probability")
    s.add_argument("path", nargs="?")
    s.add_argument("--assign", help='e.g. "x=1,y=0"; default: every assignment')

    s = sub.add_parser("convert", parents=[common], help="circuit to tensor network")
    s.add_argument("path", nargs="?")
    s.add_argument("--no-check", dest="check", action="store_false", help="skip the oracle comparison")

    s = sub.add_parser("reduce", parents=[common], help="size reduction of a network over Y")
    s.add_argument("path", nargs="?")
    s.add_argument("--ys", help="comma-separated Y variables; default: all")
    s.add_argument("--beta", default="", help="assignment of the variables outside Y")
    s.add_argument("--decomposition", help="carving or tree decomposition JSON")

    s = sub.add_parser("decomp", parents=[common], help="tree and carving decompositions of a network graph")
    s.add_argument("path", nargs="?")
    s.add_argument("--exact", action="store_true", help="exact carving width (at most 10 vertices)")

    s = sub.add_parser("distinct", parents=[common], help="element distinctness subfunction counts")
    s.add_argument("--ks", default="2,4")

    s = sub.add_parser("verify", parents=[common], help="randomised property suite")
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--mutate", action="store_true", help="corrupt one gate entry per circuit (self-test)")

    s = sub.add_parser("bench", parents=[common], help="contraction timing")
    s.add_argument("--count", type=int, default=10)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    common = {"subcommand", "seed", "tolerance", "max_qubits", "format", "in_path", "out_path", "path"}
    inputs = [x for x in (getattr(args, "path", None) or args.in_path,) if x]
    if args.subcommand in ("simulate", "convert", "reduce", "decomp") and not inputs:
        raise CliError(EXIT_PARSE, f"{args.subcommand}: an input path is required")
    options = {k: v for k, v in vars(args).items() if k not in common}
    return RunConfig(args.subcommand, inputs, args.out_path, args.seed, args.tolerance, args.max_qubits,
                     args.format, options)


def run(cfg: RunConfig) -> tuple[dict, int]:
    return COMMANDS[cfg.subcommand](cfg)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        report, code = run(cfg)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    sys.stdout.write(render(report, cfg.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
