"""Randomised property suite behind ``algtn verify`` and the acceptance tests.

Every check takes a ``random.Random`` and an instance count and returns a
:class:`PropertyResult`; the first failing instance is kept as a JSON
counterexample.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import circuit as qc
from . import decomp as dc
from . import distinct as ed
from . import generators as gen
from . import network as nw
from . import reduce as rd
from . import tensor as tn
from .boolean import assignments
from .convert import convert, verify_against_oracle
from .poly import degree, max_coeff_diff, squared_magnitude


@dataclass
class Caps:
    max_qubits: int = 6
    max_gates: int = 12
    max_vars: int = 4
    gate_set: tuple = ("H", "X", "T", "CNOT", "CZ")
    net_size: int = 8
    net_rank: int = 4
    orders: int = 20
    y_max: int = 6
    l_max: int = 10
    graph_n: int = 30
    y_net_size: int = 14
    tolerance: float = 1e-9


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    failures: int = 0
    worst: float = 0.0
    counterexample: dict | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, example: dict):
        self.failures += 1
        if self.counterexample is None:
            self.counterexample = example

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "instances": self.instances,
            "failures": self.failures,
            "worst": self.worst,
            "notes": self.notes,
            "counterexample": self.counterexample,
        }


def _graph_json(G) -> dict:
    return {"nodes": sorted(G.nodes), "edges": sorted([sorted(e) for e in G.edges()])}


def mutate_gate_entry(N: nw.TensorNetwork, C: qc.QuantumCircuit) -> nw.TensorNetwork:
    """Add 1 to the all-K00 entry of the first gate tensor (test hook)."""
    tensors = list(N.tensors)
    for pos, v in enumerate(C.vertices):
        if v.kind == "gate":
            g = tensors[pos]
            data = dict(g.data)
            arr = data.get((), np.zeros(g.shape, dtype=complex)).copy()
            arr[(0,) * g.rank] += 1.0
            data[()] = arr
            tensors[pos] = tn.AlgebraicTensor(g.indices, data, g.varset)
            break
    return nw.TensorNetwork(tuple(tensors), N.varset)


def check_oracle_equivalence(rng: random.Random, count: int, caps: Caps = Caps(), mutate: bool = False) -> PropertyResult:
    res = PropertyResult("oracle_equivalence")
    for _ in range(count):
        C = gen.random_circuit(rng, caps.max_qubits, caps.max_gates, caps.max_vars, caps.gate_set)
        N = convert(C)
        if mutate:
            N = mutate_gate_entry(N, C)
        rep = verify_against_oracle(C, network=N, tol=caps.tolerance)
        res.instances += 1
        res.worst = max(res.worst, rep.max_deviation)
        if not rep.ok:
            res.fail({"circuit": qc.to_json(C), "witness": rep.witness, "deviation": rep.max_deviation})
    return res


def check_circuit_oracle(rng: random.Random, count: int, caps: Caps = Caps()) -> PropertyResult:
    """Probability bounds, norm preservation and gate-order independence."""
    res = PropertyResult("circuit_oracle")
    for _ in range(count):
        C = gen.random_circuit(rng, caps.max_qubits, caps.max_gates, caps.max_vars, caps.gate_set)
        alpha = {v: rng.randint(0, 1) for v in C.variables}
        res.instances += 1
        norms: list[float] = []
        qc.final_state(C, alpha, norm_log=norms)
        drift = max((abs(n - 1) for n in norms), default=0.0)
        p0 = qc.output_probability(C, alpha)
        p1 = qc.output_probability(C, alpha, rng=random.Random(rng.getrandbits(32)))
        res.worst = max(res.worst, drift, abs(p0 - p1))
        if drift > 1e-7 or abs(p0 - p1) > caps.tolerance or not 0 <= p0 <= 1:
            res.fail({"circuit": qc.to_json(C), "alpha": alpha, "drift": drift, "p": [p0, p1]})
    return res


def _degree_checked_contract(N: nw.TensorNetwork, path, res: PropertyResult, example: Callable[[], dict]):
    """Contract along ``path`` checking per-step degree additivity and the occurrence invariant."""
    items = dict(enumerate(N.tensors))
    nxt = len(items)
    for a, b in path:
        g, h = items.pop(a), items.pop(b)
        out = tn.contract(g, h)
        if out.degree > g.degree + h.degree:
            res.fail({**example(), "step": [a, b], "reason": "degree additivity"})
        if set(out.indices) != set(g.indices) ^ set(h.indices):
            res.fail({**example(), "step": [a, b], "reason": "symmetric difference"})
        items[nxt] = out
        nxt += 1
        counts: dict[int, int] = {}
        for t in items.values():
            for i in t.indices:
                counts[i] = counts.get(i, 0) + 1
        if any(c != 2 for c in counts.values()):
            res.fail({**example(), "step": [a, b], "reason": "two-occurrence invariant"})
    return next(iter(items.values())).as_polynomial()


def check_order_invariance(rng: random.Random, count: int, caps: Caps = Caps()) -> tuple[PropertyResult, PropertyResult]:
    """Order invariance and the degree laws on one corpus of random networks."""
    inv = PropertyResult("order_invariance")
    deg = PropertyResult("degree_laws")
    for _ in range(count):
        N = gen.random_network(rng, caps.net_size, caps.net_rank)
        ex = lambda: {"network": nw.to_json(N)}  # noqa: E731
        ref = nw.contract_all(N)
        inv.instances += 1
        deg.instances += 1
        for _ in range(caps.orders):
            path = nw.random_path(N, rng)
            p = _degree_checked_contract(N, path, deg, ex)
            d = max_coeff_diff(ref, p)
            inv.worst = max(inv.worst, d)
            if d > caps.tolerance:
                inv.fail({**ex(), "path": path, "diff": d})
        tdeg = nw.total_degree(N)
        sq = squared_magnitude(ref)
        if degree(ref) > tdeg or degree(sq) > 2 * tdeg:
            deg.fail({**ex(), "reason": "value degree", "deg": degree(ref), "tdeg": tdeg})
        alpha = {v: rng.randint(0, 1) for v in N.varset}
        num = nw.contract_numeric(N, alpha)
        sym = complex(ref(alpha))
        inv.worst = max(inv.worst, abs(num - sym))
        if abs(num - sym) > caps.tolerance:
            inv.fail({**ex(), "alpha": alpha, "reason": "numeric vs symbolic", "diff": abs(num - sym)})
    return inv, deg


def check_y_node_bounds(rng: random.Random, count: int, caps: Caps = Caps()) -> PropertyResult:
    res = PropertyResult("y_node_bounds")
    ys = ("y1", "y2", "y3")
    for _ in range(count):
        size = rng.randint(1, caps.y_net_size)
        l = rng.randint(0, size)
        N = gen.random_y_network(rng, ys, l, size, caps.net_rank)
        G = nw.build_graph(N)
        cd = gen.random_carving(G, rng) if rng.random() < 0.5 else dc.carving_decomposition(G)
        w = dc.carving_width(G, cd)
        y_t = rd.find_y_tensors(N, ys)
        y_nodes = rd.find_y_nodes(cd, y_t)
        forest = rd.forest_components(cd, y_nodes)
        L = len(y_t)
        res.instances += 1
        problems = []
        if L and len(y_nodes) != 2 * L - 1:
            problems.append(f"|Y-nodes| = {len(y_nodes)} != {2 * L - 1}")
        if not L and y_nodes:
            problems.append("Y-nodes without Y-leaves")
        if L and len(forest) > 2 * L - 1:
            problems.append(f"k = {len(forest)} > {2 * L - 1}")
        for part in forest:
            split = rd.graph_components(G, cd, part)
            if len(split.components) > max(2 * w, 1):
                problems.append(f"c_i = {len(split.components)} > 2w = {2 * w}")
            if split.boundary > 2 * w:
                problems.append(f"boundary {split.boundary} > 2w = {2 * w}")
        if problems:
            res.fail({"graph": _graph_json(G), "carving": dc.cd_to_json(cd), "y_tensors": sorted(y_t),
                      "problems": problems})
    return res


def check_reduction(rng: random.Random, count: int, caps: Caps = Caps()) -> PropertyResult:
    res = PropertyResult("reduction")
    for k in range(count):
        if k % 2:
            C = gen.random_circuit(rng, caps.max_qubits, caps.max_gates, min(caps.max_vars, caps.y_max),
                                   caps.gate_set, min_qubits=2)
            N = convert(C)
            ys = N.varset
        else:
            ys = tuple(f"y{i + 1}" for i in range(rng.randint(1, caps.y_max)))
            size = rng.randint(2, 16)
            l = rng.randint(1, min(caps.l_max, size))
            N = gen.random_y_network(rng, ys, l, size, caps.net_rank)
        res.instances += 1
        red = rd.reduce_network(N, ys=ys, strict=False)
        st = red.stats
        problems = list(st.violations)
        path_in, path_out = nw.greedy_path(N), nw.greedy_path(red.network)
        worst = 0.0
        for alpha in assignments(N.varset):
            d = abs(nw.value(N, alpha, path=path_in) - nw.value(red.network, alpha, path=path_out))
            worst = max(worst, d)
        res.worst = max(res.worst, worst)
        if worst > caps.tolerance:
            problems.append(f"value deviation {worst:.3e}")
        res.notes["max_l"] = max(res.notes.get("max_l", 0), st.l)
        res.notes["max_w"] = max(res.notes.get("max_w", 0), st.w)
        if st.l:
            res.notes["min_size_margin"] = min(res.notes.get("min_size_margin", 10**9), st.size_bound - st.size_out)
        if problems:
            res.fail({"network": nw.to_json(N), "stats": st.as_dict(), "problems": problems})
    return res


def check_tree_to_carving(rng: random.Random, count: int, caps: Caps = Caps()) -> PropertyResult:
    res = PropertyResult("tree_to_carving")
    worst_ratio = 0.0
    for _ in range(count):
        n = rng.randint(1, caps.graph_n)
        G = gen.random_simple_graph(rng, n) if rng.random() < 0.5 else gen.random_multigraph(rng, n, rng.randint(2, 5))
        td = dc.heuristic_tree_decomposition(G)
        cd = dc.carving_from_tree_decomposition(G, td)
        res.instances += 1
        problems = dc.validate_tree_decomposition(G, td) + dc.validate_carving_decomposition(G, cd)
        if not problems:
            w = dc.carving_width(G, cd)
            delta = dc.max_degree(G)
            bound = dc.C_CONV * delta * (td.width + 1)
            if delta:
                worst_ratio = max(worst_ratio, w / (delta * (td.width + 1)))
            if w > bound:
                problems.append(f"width {w} > C_CONV*D*(t+1) = {bound}")
            if n <= dc.EXACT_MAX_VERTICES:
                exact = dc.exact_carving_width(G)
                if exact > w:
                    problems.append(f"exact width {exact} > produced width {w}")
        if problems:
            res.fail({"graph": _graph_json(G), "problems": problems})
    res.notes["c_conv"] = dc.C_CONV
    res.notes["max_measured_ratio"] = round(worst_ratio, 6)
    return res


def check_element_distinctness(rng: random.Random | None = None, count: int = 1, caps: Caps = Caps()) -> PropertyResult:
    res = PropertyResult("element_distinctness")
    if count <= 0:
        return res
    res.instances = 1
    bv = ed.BlockedVarSet(2)
    table = ed.element_distinctness(2)
    direct = ed.distinct_direct(bv)
    mism = [a for a in assignments(bv.varset) if table(a) != direct(a)]
    if mism:
        res.fail({"k": 2, "mismatch": mism[0]})
    reports = ed.subfunction_table((2, 4))
    for r in reports:
        if not r.ok:
            res.fail(r.as_dict())
    if reports[0].counts[0] != 4:
        res.fail({"k": 2, "count": reports[0].counts[0], "expected": 4})
    res.notes["counts"] = {r.k: r.counts for r in reports}
    return res


def run_suite(seed: int, count: int, caps: Caps = Caps(), mutate: bool = False) -> dict:
    """Deterministic report for ``count`` instances per randomised property."""
    report = {"seed": seed, "count": count, "properties": [], "passed": True}
    if count <= 0:
        return report
    rng = random.Random(seed)
    results = [
        check_oracle_equivalence(random.Random(rng.getrandbits(64)), count, caps, mutate=mutate),
        check_circuit_oracle(random.Random(rng.getrandbits(64)), count, caps),
        *check_order_invariance(random.Random(rng.getrandbits(64)), count, caps),
        check_y_node_bounds(random.Random(rng.getrandbits(64)), count, caps),
        check_reduction(random.Random(rng.getrandbits(64)), count, caps),
        check_tree_to_carving(random.Random(rng.getrandbits(64)), count, caps),
        check_element_distinctness(None, 1, caps),
    ]
    report["properties"] = [r.as_dict() for r in results]
    report["passed"] = all(r.passed for r in results)
    return report
