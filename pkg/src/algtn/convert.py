"""Circuit to algebraic tensor network conversion.

Every vertex becomes one tensor whose index labels are the labels of its
incident edges. Entries are coefficients of the circuit's density-matrix
evolution in the matrix-unit basis:

* variable input ``x``:  ``Tr(|x><x| s)`` with ``|x><x| = diag(1 - x, x)``
* basis input ``|b>``:   ``Tr(|b><b| s)``
* gate ``U`` on ``k`` wires, index order (in wires, out wires):
  ``Tr(t^dagger U s U^dagger)`` with ``s``, ``t`` tensor products of matrix units
* output element ``M``:  ``Tr(M t)``

With these entries the network value at ``alpha`` equals the acceptance
probability of the circuit with inputs initialised by ``alpha``.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

import numpy as np

from . import circuit as qc
from .boolean import assignments
from .network import TensorNetwork, greedy_path, value
from .poly import Polynomial
from .tensor import AlgebraicTensor, PiElement


@functools.lru_cache(maxsize=256)
def _gate_table(raw: bytes, k: int) -> np.ndarray:
    U = np.frombuffer(raw, dtype=complex).reshape((1 << k, 1 << k))
    Ur = U.reshape((2,) * (2 * k))  # axes (c_1..c_k, a_1..a_k)
    # P[c, a, d, b] = U[c, a] * conj(U[d, b])
    P = np.multiply.outer(Ur, Ur.conj())
    c_ax = list(range(k))
    a_ax = list(range(k, 2 * k))
    d_ax = list(range(2 * k, 3 * k))
    b_ax = list(range(3 * k, 4 * k))
    order = [ax for p in range(k) for ax in (a_ax[p], b_ax[p])]
    order += [ax for p in range(k) for ax in (c_ax[p], d_ax[p])]
    table = P.transpose(order).reshape((4,) * (2 * k))
    table.setflags(write=False)
    return table


def gate_table(U: np.ndarray) -> np.ndarray:
    """Entries of a gate tensor as an array of shape ``(4,) * 2k``."""
    U = np.ascontiguousarray(U, dtype=complex)
    k = int(np.log2(U.shape[0]))
    return _gate_table(U.tobytes(), k)


def measurement_table(M: np.ndarray) -> np.ndarray:
    # entry at |c><d| is Tr(M |c><d|) = M[d, c]
    return np.asarray(M, dtype=complex).T.reshape(4).copy()


def input_tensor(label: str, index: int, varset) -> AlgebraicTensor:
    if label in qc.KETS:
        b = int(label[-1])
        arr = np.zeros(4, dtype=complex)
        arr[3 * b] = 1.0
        return AlgebraicTensor.constant((index,), arr, varset)
    x = Polynomial.var(label, varset)
    return AlgebraicTensor.from_entries(
        (index,), {(PiElement.K00,): 1 - x, (PiElement.K11,): x}, varset
    )


def vertex_tensor(v: qc.Vertex, varset) -> AlgebraicTensor:
    if v.kind == "input":
        return input_tensor(v.label, v.out_ports[0], varset)
    if v.kind == "gate":
        return AlgebraicTensor.constant(v.in_ports + v.out_ports, gate_table(v.label), varset)
    if v.kind == "output":
        return AlgebraicTensor.constant((v.in_ports[0],), measurement_table(v.label), varset)
    raise qc.InvalidCircuit(f"unknown vertex kind {v.kind!r}")


def convert(C: qc.QuantumCircuit) -> TensorNetwork:
    """Tensor ``j`` of the result belongs to ``C.vertices[j]``."""
    qc.check_circuit(C)
    varset = tuple(C.variables)
    return TensorNetwork(tuple(vertex_tensor(v, varset) for v in C.vertices), varset)


def vertex_positions(C: qc.QuantumCircuit) -> dict:
    """Circuit vertex id -> tensor position in :func:`convert`'s output."""
    return {v.id: pos for pos, v in enumerate(C.vertices)}


@dataclass
class OracleReport:
    checked: int = 0
    max_deviation: float = 0.0
    witness: dict | None = None
    tolerance: float = 1e-9
    deviations: list = field(default_factory=list, repr=False)

    @property
    def ok(self) -> bool:
        return self.max_deviation <= self.tolerance

    def raise_if_failed(self):
        if not self.ok:
            raise AssertionError(
                f"network and oracle differ by {self.max_deviation:.3e} at {self.witness}"
            )


def verify_against_oracle(
    C: qc.QuantumCircuit,
    network: TensorNetwork | None = None,
    tol: float = 1e-9,
    max_exhaustive: int = 1 << 16,
    samples: int = 1024,
    rng: random.Random | None = None,
) -> OracleReport:
    """Compare network value with the state-vector probability on every assignment.

    Above ``max_exhaustive`` assignments a random sample of ``samples`` is
    used instead. ``network`` defaults to ``convert(C)``.
    """
    N = convert(C) if network is None else network
    path = greedy_path(N)
    varset = tuple(C.variables)
    if (1 << len(varset)) <= max_exhaustive:
        alphas = assignments(varset)
    else:
        rng = rng or random.Random(0)
        alphas = ({v: rng.randint(0, 1) for v in varset} for _ in range(samples))
    report = OracleReport(tolerance=tol)
    for alpha in alphas:
        dev = abs(value(N, alpha, path=path) - qc.output_probability(C, alpha))
        report.checked += 1
        report.deviations.append(dev)
        if report.witness is None or dev > report.max_deviation:
            report.max_deviation = dev
            report.witness = dict(alpha)
    return report
