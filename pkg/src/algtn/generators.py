"""Seeded random instances: circuits, networks, graphs and carving trees."""

from __future__ import annotations

import itertools
import random
from typing import Sequence

import networkx as nx
import numpy as np

from . import circuit as qc
from .decomp import CarvingDecomposition
from .network import TensorNetwork
from .poly import monomial
from .tensor import AlgebraicTensor

DEFAULT_GATES = ("H", "X", "T", "CNOT", "CZ")


def _np_rng(rng: random.Random) -> np.random.Generator:
    return np.random.default_rng(rng.getrandbits(64))


def random_unitary(k: int, rng: random.Random) -> np.ndarray:
    g = _np_rng(rng)
    dim = 1 << k
    z = (g.normal(size=(dim, dim)) + 1j * g.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_measurement(rng: random.Random) -> np.ndarray:
    """A random 2x2 element with spectrum in [0, 1] (usually complex off-diagonal)."""
    V = random_unitary(1, rng)
    lam = [rng.random(), rng.random()]
    return V @ np.diag(lam) @ V.conj().T


def random_circuit(
    rng: random.Random,
    max_qubits: int = 6,
    max_gates: int = 12,
    max_vars: int = 4,
    gate_set: Sequence[str] = DEFAULT_GATES,
    measurements: str = "mixed",
    min_qubits: int = 1,
) -> qc.QuantumCircuit:
    """Connected random circuit.

    Qubits ``1..m-1`` are each tied to an earlier qubit by one two-qubit gate
    so that the circuit graph is connected; the remaining gates are drawn
    from ``gate_set`` and everything is shuffled.
    """
    m = rng.randint(min_qubits, max_qubits)
    n_vars = rng.randint(0, max_vars)
    names = [chr(ord("a") + i) for i in range(n_vars)]
    b = qc.CircuitBuilder(names)
    for _ in range(m):
        b.input(rng.choice(names + ["ket0", "ket1"]) if names else rng.choice(["ket0", "ket1"]))
    two = [g for g in gate_set if qc.GATES.get(g, np.eye(2)).shape[0] == 4] or ["CNOT"]
    one = [g for g in gate_set if qc.GATES.get(g, np.eye(4)).shape[0] == 2] or ["H"]
    ops = []
    for q in range(1, m):
        p = rng.randrange(q)
        ops.append((rng.choice(two), [p, q] if rng.random() < 0.5 else [q, p]))
    budget = max(0, max_gates - len(ops))
    for _ in range(rng.randint(0, budget)):
        if m >= 2 and rng.random() < 0.35:
            ops.append((rng.choice(two), rng.sample(range(m), 2)))
        else:
            ops.append((rng.choice(one), [rng.randrange(m)]))
    rng.shuffle(ops)
    for name, qubits in ops:
        b.gate(name, qubits, name=name)
    for q in range(m):
        if measurements == "projector":
            M = qc.PROJ1
        else:
            r = rng.random()
            M = qc.PROJ1 if r < 0.6 else qc.PROJ0 if r < 0.75 else qc.I2 if r < 0.85 else random_measurement(rng)
        b.measure(q, M)
    return b.build()


def random_multigraph(rng: random.Random, n: int, max_degree: int, extra_edges: int | None = None) -> nx.MultiGraph:
    """Connected loop-free multigraph on ``0..n-1`` with all degrees at most ``max_degree``."""
    G = nx.MultiGraph()
    G.add_nodes_from(range(n))
    if n <= 1:
        return G
    if max_degree < 2 and n > 2:
        raise ValueError("a connected graph on more than 2 vertices needs max_degree >= 2")
    for v in range(1, n):
        cands = [u for u in range(v) if G.degree(u) < max_degree]
        G.add_edge(rng.choice(cands), v)
    if extra_edges is None:
        extra_edges = rng.randint(0, n)
    for _ in range(extra_edges):
        free = [u for u in G.nodes if G.degree(u) < max_degree]
        if len(free) < 2:
            break
        a, b = rng.sample(free, 2)
        G.add_edge(a, b)
    return G


def random_simple_graph(rng: random.Random, n: int, p: float | None = None) -> nx.MultiGraph:
    """Connected simple graph: random spanning tree plus Erdos-Renyi extras."""
    p = rng.uniform(0.05, 0.5) if p is None else p
    G = nx.MultiGraph()
    G.add_nodes_from(range(n))
    for v in range(1, n):
        G.add_edge(rng.randrange(v), v)
    for a, b in itertools.combinations(range(n), 2):
        if not G.has_edge(a, b) and rng.random() < p:
            G.add_edge(a, b)
    return G


def _labels_for(G: nx.MultiGraph, rng: random.Random) -> dict:
    edges = list(G.edges(keys=True))
    labels = rng.sample(range(1, 3 * len(edges) + 2), len(edges))
    return dict(zip(edges, labels))


def _random_coeffs(shape, g: np.random.Generator, scale: float) -> np.ndarray:
    a = g.normal(size=shape) + 1j * g.normal(size=shape)
    norm = np.linalg.norm(a)
    return a * (scale / norm) if norm else a


def network_on_graph(
    G: nx.MultiGraph,
    rng: random.Random,
    varset: Sequence[str] = (),
    var_tensors: Sequence[int] | None = None,
    max_var_degree: int = 1,
    monomials_per_tensor: int = 2,
) -> TensorNetwork:
    """Random tensors on the vertices of ``G`` (vertex ``j`` -> tensor ``j``).

    Tensors listed in ``var_tensors`` (default: all, when ``varset`` is
    non-empty) get at least one non-constant monomial. Each evaluated tensor
    has Frobenius norm at most 1, which keeps network values within [0, 1].
    """
    varset = tuple(varset)
    g = _np_rng(rng)
    labels = _labels_for(G, rng)
    idx: dict[int, list[int]] = {v: [] for v in G.nodes}
    for (a, b, k), lab in labels.items():
        idx[a].append(lab)
        idx[b].append(lab)
    if var_tensors is None:
        var_tensors = list(G.nodes) if varset else []
    var_tensors = set(var_tensors)
    tensors = []
    for v in sorted(G.nodes):
        indices = idx[v]
        rng.shuffle(indices)
        shape = (4,) * len(indices)
        monos = [()]
        if v in var_tensors and varset:
            count = rng.randint(1, monomials_per_tensor)
            for _ in range(count):
                d = rng.randint(1, max_var_degree)
                monos.append(monomial((rng.choice(varset), 1) for _ in range(d)))
        monos = list(dict.fromkeys(monos))
        if len(monos) == 1 and v in var_tensors and varset:
            monos.append(((varset[0], 1),))
        scale = 1.0 / len(monos)
        data = {m: _random_coeffs(shape, g, scale) for m in monos}
        tensors.append(AlgebraicTensor(indices, data, varset))
    return TensorNetwork(tuple(tensors), varset)


def random_network(
    rng: random.Random,
    max_size: int = 8,
    max_rank: int = 4,
    varset: Sequence[str] = ("x", "y", "z"),
    max_var_degree: int = 2,
    min_size: int = 1,
) -> TensorNetwork:
    n = rng.randint(min_size, max_size)
    G = random_multigraph(rng, n, max_rank)
    var_tensors = [v for v in G.nodes if rng.random() < 0.6]
    return network_on_graph(G, rng, varset, var_tensors, max_var_degree)


def random_y_network(
    rng: random.Random,
    ys: Sequence[str],
    l: int,
    size: int,
    max_rank: int = 4,
    max_var_degree: int = 1,
) -> TensorNetwork:
    """Network over ``ys`` in which exactly ``l`` tensors mention a variable."""
    G = random_multigraph(rng, size, max_rank)
    var_tensors = rng.sample(range(size), min(l, size))
    return network_on_graph(G, rng, ys, var_tensors, max_var_degree)


def random_carving(G: nx.Graph, rng: random.Random) -> CarvingDecomposition:
    """Uniformly random merge tree over the vertices of ``G``."""
    leaf_map = {}
    live = []
    nxt = itertools.count()
    for v in sorted(G.nodes):
        u = next(nxt)
        leaf_map[u] = v
        live.append(u)
    children = {}
    while len(live) > 1:
        a, b = rng.sample(range(len(live)), 2)
        left, right = live[a], live[b]
        for k in sorted((a, b), reverse=True):
            live.pop(k)
        u = next(nxt)
        children[u] = (left, right)
        live.append(u)
    return CarvingDecomposition(live[0], children, leaf_map)


def random_carving_tree(rng: random.Random, n_leaves: int) -> CarvingDecomposition:
    """Random rooted binary tree whose leaves map to ``0..n_leaves-1``."""
    G = nx.Graph()
    G.add_nodes_from(range(n_leaves))
    return random_carving(G, rng)
