"""Quantum circuits as labeled DAGs plus a dense state-vector oracle.

Wire convention: position ``p`` in a gate's ``in_ports`` is qubit ``p`` of its
unitary, with qubit 0 the most significant bit of the matrix index; the wire
leaving through ``out_ports[p]`` carries that same qubit onwards. The tensor
conversion in :mod:`algtn.convert` uses the same convention.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from .boolean import GAP_EPS, threshold_computes

MAX_ORACLE_QUBITS = 14
UNITARY_TOL = 1e-9
KETS = ("ket0", "ket1")

# gate and measurement library
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.diag([1, -1]).astype(complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.diag([1, 1j]).astype(complex)
T = np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
PROJ0 = np.diag([1, 0]).astype(complex)
PROJ1 = np.diag([0, 1]).astype(complex)

GATES = {"I": I2, "X": X, "Y": Y, "Z": Z, "H": H, "S": S, "T": T, "CNOT": CNOT, "CZ": CZ, "SWAP": SWAP}
MEASUREMENTS = {"P0": PROJ0, "P1": PROJ1, "I": I2}


class InvalidCircuit(ValueError):
    pass


class TooManyQubits(ValueError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    kind: str  # "input" | "gate" | "output"
    label: object  # variable name / "ket0" / "ket1" / matrix
    in_ports: tuple[int, ...] = ()
    out_ports: tuple[int, ...] = ()
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "in_ports", tuple(self.in_ports))
        object.__setattr__(self, "out_ports", tuple(self.out_ports))
        if self.kind in ("gate", "output"):
            object.__setattr__(self, "label", np.asarray(self.label, dtype=complex))


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int


@dataclass(frozen=True)
class QuantumCircuit:
    variables: tuple[str, ...]
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _by_id: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "_by_id", {v.id: v for v in self.vertices})

    def vertex(self, vid) -> Vertex:
        return self._by_id[vid]

    @property
    def inputs(self) -> list[Vertex]:
        return [v for v in self.vertices if v.kind == "input"]

    @property
    def gates(self) -> list[Vertex]:
        return [v for v in self.vertices if v.kind == "gate"]

    @property
    def outputs(self) -> list[Vertex]:
        return [v for v in self.vertices if v.kind == "output"]

    @property
    def num_qubits(self) -> int:
        return len(self.inputs)

    @property
    def max_arity(self) -> int:
        return max((len(v.in_ports) for v in self.gates), default=1)

    def digraph(self) -> nx.MultiDiGraph:
        G = nx.MultiDiGraph()
        G.add_nodes_from(v.id for v in self.vertices)
        for e in self.edges:
            G.add_edge(e.src, e.dst, key=e.id)
        return G

    def graph(self) -> nx.MultiGraph:
        """Underlying undirected multigraph (edge key = edge label)."""
        G = nx.MultiGraph()
        G.add_nodes_from(v.id for v in self.vertices)
        for e in self.edges:
            G.add_edge(e.src, e.dst, key=e.id, label=e.id)
        return G


class CircuitBuilder:
    """Incremental construction: ``b.input("x"); b.gate(H, [0]); b.measure_all(PROJ1)``.

    Qubits are addressed by creation order of inputs; every call allocates
    fresh vertex and edge ids.
    """

    def __init__(self, variables: Sequence[str] = ()):
        self.variables = list(variables)
        self._vertices: list[dict] = []
        self._edges: list[list] = []  # [id, src, dst]
        self._open: list[int] = []  # per qubit, index into _edges of the dangling wire

    def _new_vertex(self, kind, label, name=""):
        vid = len(self._vertices)
        self._vertices.append({"id": vid, "kind": kind, "label": label, "in": [], "out": [], "name": name})
        return vid

    def _new_edge(self, src):
        eid = len(self._edges) + 1
        self._edges.append([eid, src, None])
        self._vertices[src]["out"].append(eid)
        return eid - 1

    def input(self, label: str) -> int:
        if label not in KETS and label not in self.variables:
            self.variables.append(label)
        vid = self._new_vertex("input", label)
        self._open.append(self._new_edge(vid))
        return len(self._open) - 1

    def gate(self, matrix, qubits: Sequence[int], name: str = "") -> int:
        matrix = GATES[matrix] if isinstance(matrix, str) else matrix
        vid = self._new_vertex("gate", np.asarray(matrix, dtype=complex), name)
        for q in qubits:
            e = self._open[q]
            self._edges[e][2] = vid
            self._vertices[vid]["in"].append(self._edges[e][0])
        for q in qubits:
            self._open[q] = self._new_edge(vid)
        return vid

    def measure(self, qubit: int, matrix=PROJ1) -> int:
        matrix = MEASUREMENTS[matrix] if isinstance(matrix, str) else matrix
        vid = self._new_vertex("output", np.asarray(matrix, dtype=complex))
        e = self._open[qubit]
        self._edges[e][2] = vid
        self._vertices[vid]["in"].append(self._edges[e][0])
        self._open[qubit] = None
        return vid

    def measure_all(self, matrices=None):
        for q in range(len(self._open)):
            if self._open[q] is not None:
                m = PROJ1 if matrices is None else matrices[q]
                self.measure(q, m)

    def build(self) -> QuantumCircuit:
        if any(e is not None for e in self._open):
            raise InvalidCircuit("unmeasured qubits remain; call measure/measure_all")
        vertices = tuple(
            Vertex(v["id"], v["kind"], v["label"], v["in"], v["out"], v["name"]) for v in self._vertices
        )
        edges = tuple(Edge(*e) for e in self._edges)
        return QuantumCircuit(tuple(self.variables), vertices, edges)


def _is_psd(M: np.ndarray, tol: float) -> bool:
    if not np.allclose(M, M.conj().T, atol=tol):
        return False
    return bool(np.linalg.eigvalsh((M + M.conj().T) / 2).min() >= -tol)


def validate_circuit(C: QuantumCircuit) -> list[str]:
    problems: list[str] = []
    ids = [v.id for v in C.vertices]
    if len(set(ids)) != len(ids):
        problems.append("duplicate vertex ids")
    eids = sorted(e.id for e in C.edges)
    if eids != list(range(1, len(C.edges) + 1)):
        problems.append(f"edge labels {eids} are not a bijection onto 1..{len(C.edges)}")
    if len(set(C.variables)) != len(C.variables):
        problems.append("duplicate variable names")

    known = set(ids)
    outgoing: dict = {v: [] for v in ids}
    incoming: dict = {v: [] for v in ids}
    for e in C.edges:
        if e.src not in known or e.dst not in known:
            problems.append(f"edge {e.id} references unknown vertex")
            continue
        outgoing[e.src].append(e.id)
        incoming[e.dst].append(e.id)
    if problems:
        return problems

    for v in C.vertices:
        tag = f"vertex {v.id}"
        if sorted(v.in_ports) != sorted(incoming[v.id]) or len(set(v.in_ports)) != len(v.in_ports):
            problems.append(f"{tag}: in_ports {list(v.in_ports)} disagree with incoming edges {incoming[v.id]}")
        if sorted(v.out_ports) != sorted(outgoing[v.id]) or len(set(v.out_ports)) != len(v.out_ports):
            problems.append(f"{tag}: out_ports {list(v.out_ports)} disagree with outgoing edges {outgoing[v.id]}")
        n_in, n_out = len(incoming[v.id]), len(outgoing[v.id])
        if v.kind == "input":
            if (n_in, n_out) != (0, 1):
                problems.append(f"{tag}: input needs in-degree 0 and out-degree 1, has {n_in}/{n_out}")
            if not isinstance(v.label, str) or (v.label not in KETS and v.label not in C.variables):
                problems.append(f"{tag}: input label {v.label!r} is neither a variable nor ket0/ket1")
        elif v.kind == "gate":
            if n_in != n_out or n_in == 0:
                problems.append(f"{tag}: gate has {n_in} in-edges and {n_out} out-edges")
            dim = 1 << n_in
            U = v.label
            if U.shape != (dim, dim):
                problems.append(f"{tag}: gate matrix shape {U.shape}, expected {(dim, dim)}")
            elif not np.allclose(U.conj().T @ U, np.eye(dim), atol=UNITARY_TOL, rtol=0):
                problems.append(f"{tag}: gate matrix is not unitary")
        elif v.kind == "output":
            if (n_in, n_out) != (1, 0):
                problems.append(f"{tag}: output needs in-degree 1 and out-degree 0, has {n_in}/{n_out}")
            M = v.label
            if M.shape != (2, 2):
                problems.append(f"{tag}: measurement shape {M.shape}, expected (2, 2)")
            elif not (_is_psd(M, UNITARY_TOL) and _is_psd(np.eye(2) - M, UNITARY_TOL)):
                problems.append(f"{tag}: M and I-M must both be positive semidefinite")
        else:
            problems.append(f"{tag}: unknown kind {v.kind!r}")
    if problems:
        return problems

    if not nx.is_directed_acyclic_graph(C.digraph()):
        problems.append("circuit has a directed cycle")
        return problems

    edge = {e.id: e for e in C.edges}
    for v in C.inputs:
        eid = v.out_ports[0]
        for _ in range(len(C.edges) + 1):
            w = C.vertex(edge[eid].dst)
            if w.kind != "gate":
                break
            eid = w.out_ports[w.in_ports.index(eid)]
        if w.kind != "output":
            problems.append(f"wire from input {v.id} does not reach an output")
    return problems


def check_circuit(C: QuantumCircuit) -> None:
    problems = validate_circuit(C)
    if problems:
        raise InvalidCircuit("; ".join(problems))


def bind(C: QuantumCircuit, alpha: Mapping[str, int]) -> QuantumCircuit:
    """Replace every variable input by the basis state given by ``alpha``."""
    missing = set(C.variables) - set(alpha)
    if missing:
        raise KeyError(f"no value for {sorted(missing)}")
    vertices = tuple(
        replace(v, label=f"ket{int(alpha[v.label])}") if v.kind == "input" and v.label not in KETS else v
        for v in C.vertices
    )
    return QuantumCircuit((), vertices, C.edges)


def topological_gate_order(C: QuantumCircuit, rng: random.Random | None = None) -> list[Vertex]:
    """Gates in a topological order; lexicographic by vertex id, or random with ``rng``."""
    G = C.digraph()
    indeg = {v: G.in_degree(v) for v in G.nodes}
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while ready:
        k = rng.randrange(len(ready)) if rng is not None else 0
        v = ready.pop(k)
        order.append(v)
        for _, w in G.out_edges(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    return [C.vertex(v) for v in order if C.vertex(v).kind == "gate"]


def apply_gate(state: np.ndarray, U: np.ndarray, qubits: Sequence[int]) -> np.ndarray:
    """Apply ``U`` to ``qubits`` of a state of shape ``(2,) * m``."""
    k = len(qubits)
    Ut = U.reshape((2,) * (2 * k))
    out = np.tensordot(Ut, state, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits))


def final_state(C: QuantumCircuit, alpha: Mapping[str, int] = None, rng=None, norm_log=None):
    """Return ``(state, qubit_of_output)`` after all gates.

    ``norm_log`` (a list) receives the state norm after every gate.
    """
    if alpha is not None and C.variables:
        C = bind(C, alpha)
    m = C.num_qubits
    if m > MAX_ORACLE_QUBITS:
        raise TooManyQubits(f"{m} qubits exceeds the oracle cap of {MAX_ORACLE_QUBITS}")
    qubit_of: dict[int, int] = {}
    state = np.zeros((2,) * m, dtype=complex)
    basis = []
    for q, v in enumerate(C.inputs):
        if v.label not in KETS:
            raise KeyError(f"input {v.id} still carries variable {v.label!r}")
        basis.append(int(v.label[-1]))
        qubit_of[v.out_ports[0]] = q
    state[tuple(basis)] = 1.0
    for g in topological_gate_order(C, rng):
        qs = [qubit_of[e] for e in g.in_ports]
        state = apply_gate(state, g.label, qs)
        for e_out, q in zip(g.out_ports, qs):
            qubit_of[e_out] = q
        if norm_log is not None:
            norm_log.append(float(np.linalg.norm(state)))
    measured = {v.id: qubit_of[v.in_ports[0]] for v in C.outputs}
    return state, measured


def output_probability(C: QuantumCircuit, alpha: Mapping[str, int] | None = None, rng=None) -> float:
    """Acceptance probability ``Tr(M U rho U^dagger)`` with ``M`` the product of output elements."""
    check_circuit(C)
    if C.num_qubits > MAX_ORACLE_QUBITS:
        raise TooManyQubits(f"{C.num_qubits} qubits exceeds the oracle cap of {MAX_ORACLE_QUBITS}")
    state, measured = final_state(C, alpha or {}, rng)
    phi = state
    for v in C.outputs:
        phi = apply_gate(phi, v.label, [measured[v.id]])
    p = float(np.vdot(state, phi).real)
    return min(1.0, max(0.0, p))


def computes_function(C: QuantumCircuit, f, gap: float = GAP_EPS) -> bool:
    check_circuit(C)
    return threshold_computes(C.variables, lambda a: output_probability(C, a), f, gap)


# JSON format


def _mat_to_json(M: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def _mat_from_json(rows) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def to_json(C: QuantumCircuit) -> dict:
    verts = []
    for v in C.vertices:
        d = {"id": v.id, "kind": v.kind}
        d["label"] = v.label if v.kind == "input" else _mat_to_json(v.label)
        if v.name:
            d["name"] = v.name
        d["in_ports"] = list(v.in_ports)
        d["out_ports"] = list(v.out_ports)
        verts.append(d)
    return {
        "variables": list(C.variables),
        "vertices": verts,
        "edges": [{"id": e.id, "src": e.src, "dst": e.dst} for e in C.edges],
    }


def from_json(d: Mapping) -> QuantumCircuit:
    verts = []
    for v in d["vertices"]:
        label = v["label"]
        if v["kind"] in ("gate", "output"):
            named = GATES if v["kind"] == "gate" else MEASUREMENTS
            label = named[label] if isinstance(label, str) else _mat_from_json(label)
        verts.append(Vertex(v["id"], v["kind"], label, v.get("in_ports", ()), v.get("out_ports", ()), v.get("name", "")))
    edges = [Edge(e["id"], e["src"], e["dst"]) for e in d["edges"]]
    return QuantumCircuit(tuple(d.get("variables", ())), tuple(verts), tuple(edges))


def dumps(C: QuantumCircuit) -> str:
    return json.dumps(to_json(C), indent=1)


def loads(text: str) -> QuantumCircuit:
    return from_json(json.loads(text))
