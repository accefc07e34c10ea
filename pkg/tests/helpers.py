"""Independent reference implementations used as test oracles."""

from __future__ import annotations

import itertools

import numpy as np

from algtn import circuit as qc
from algtn.decomp import CarvingDecomposition
from algtn.poly import Polynomial
from algtn.tensor import AlgebraicTensor, PI_MATRICES


def naive_contract(g: AlgebraicTensor, h: AlgebraicTensor) -> dict:
    """Entry-by-entry summation over the shared Pi tuples; returns {(out_labels, key): Polynomial}."""
    shared = [i for i in g.indices if i in h.indices]
    out = sorted(set(g.indices) ^ set(h.indices))
    result = {}
    for okey in itertools.product(range(4), repeat=len(out)):
        total = Polynomial.zero(g.varset)
        assign = dict(zip(out, okey))
        for skey in itertools.product(range(4), repeat=len(shared)):
            assign.update(zip(shared, skey))
            gk = tuple(assign[i] for i in g.indices)
            hk = tuple(assign[i] for i in h.indices)
            total = total + g.entry(gk) * h.entry(hk)
        result[okey] = total
    return {"indices": tuple(out), "entries": result}


def _embed(U: np.ndarray, qubits, m: int) -> np.ndarray:
    """Full 2^m x 2^m matrix of U acting on ``qubits`` (qubit 0 most significant)."""
    k = len(qubits)
    dim = 1 << m
    full = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> (m - 1 - q)) & 1 for q in range(m)]
        a = 0
        for q in qubits:
            a = (a << 1) | bits[q]
        for c in range(1 << k):
            amp = U[c, a]
            if amp == 0:
                continue
            nb = list(bits)
            for p, q in enumerate(qubits):
                nb[q] = (c >> (k - 1 - p)) & 1
            row = 0
            for b in nb:
                row = (row << 1) | b
            full[row, col] += amp
    return full


def density_oracle(C: qc.QuantumCircuit, alpha) -> float:
    """Pr(C(alpha)) from the full unitary and density matrix, wire tracing done here."""
    inputs = [v for v in C.vertices if v.kind == "input"]
    m = len(inputs)
    qubit = {}
    bits = []
    for q, v in enumerate(inputs):
        qubit[v.out_ports[0]] = q
        bits.append(int(alpha[v.label]) if v.label in alpha else int(v.label[-1]))
    idx = 0
    for b in bits:
        idx = (idx << 1) | b
    psi = np.zeros(1 << m, dtype=complex)
    psi[idx] = 1
    rho = np.outer(psi, psi.conj())
    done = set()
    pending = [v for v in C.vertices if v.kind == "gate"]
    U_total = np.eye(1 << m, dtype=complex)
    while pending:
        for v in pending:
            if all(e in qubit for e in v.in_ports):
                qs = [qubit[e] for e in v.in_ports]
                U_total = _embed(v.label, qs, m) @ U_total
                for e, q in zip(v.out_ports, qs):
                    qubit[e] = q
                done.add(v.id)
        pending = [v for v in pending if v.id not in done]
    mats = [None] * m
    for v in C.vertices:
        if v.kind == "output":
            mats[qubit[v.in_ports[0]]] = v.label
    M = np.array([[1.0 + 0j]])
    for A in mats:
        M = np.kron(M, A)
    return float(np.trace(M @ U_total @ rho @ U_total.conj().T).real)


def all_carving_trees(vertices):
    """Every rooted binary tree with leaves labelled by ``vertices`` (as nested tuples)."""
    vertices = list(vertices)
    if len(vertices) == 1:
        yield vertices[0]
        return
    first, rest = vertices[0], vertices[1:]
    for r in range(len(rest)):
        for extra in itertools.combinations(rest, r):
            left = [first, *extra]
            right = [v for v in rest if v not in extra]
            for lt in all_carving_trees(left):
                for rt in all_carving_trees(right):
                    yield (lt, rt)


def nested_to_cd(tree) -> CarvingDecomposition:
    children, leaf_map = {}, {}
    counter = itertools.count()

    def walk(t):
        u = next(counter)
        if isinstance(t, tuple):
            children[u] = (walk(t[0]), walk(t[1]))
        else:
            leaf_map[u] = t
        return u

    root = walk(tree)
    return CarvingDecomposition(root, children, leaf_map)


def brute_carving_width(G) -> int:
    from algtn.decomp import carving_width

    return min(carving_width(G, nested_to_cd(t)) for t in all_carving_trees(sorted(G.nodes)))


def pi_trace(A: np.ndarray, s: int) -> complex:
    return complex(np.trace(A @ PI_MATRICES[s]))
