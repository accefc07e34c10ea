import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from algtn import circuit as qc

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# 3-qubit gate setting target ^= (a OR b) on (a, b, target)
OR_INTO = np.eye(8, dtype=complex)
for _a in (1, 2, 3):
    _i, _j = 2 * _a, 2 * _a + 1
    OR_INTO[[_i, _j]] = OR_INTO[[_j, _i]]


def one_qubit(gate: str, label: str = "x", M=qc.PROJ1):
    b = qc.CircuitBuilder([label] if label not in qc.KETS else [])
    q = b.input(label)
    b.gate(gate, [q], name=gate)
    b.measure(q, M)
    return b.build()


@pytest.fixture
def x_circuit():
    return one_qubit("X")


@pytest.fixture
def h_circuit():
    return one_qubit("H")


@pytest.fixture
def bell_circuit():
    b = qc.CircuitBuilder()
    q0, q1 = b.input("ket0"), b.input("ket0")
    b.gate("H", [q0])
    b.gate("CNOT", [q0, q1])
    b.measure_all()
    return b.build()


def delta4_circuit():
    """Pr = 1 iff blocks (x1,x2) and (y1,y2) differ; an OR gate writes into an ancilla."""
    b = qc.CircuitBuilder(["x1", "x2", "y1", "y2"])
    x1, x2, y1, y2 = (b.input(v) for v in ("x1", "x2", "y1", "y2"))
    anc = b.input("ket0")
    b.gate("CNOT", [x1, y1])
    b.gate("CNOT", [x2, y2])
    b.gate(OR_INTO, [y1, y2, anc], name="OR")
    for q in (x1, x2, y1, y2):
        b.measure(q, qc.I2)
    b.measure(anc, qc.PROJ1)
    return b.build()


def fig1_style_circuit():
    """Two-variable circuit in which x labels two inputs."""
    b = qc.CircuitBuilder(["x", "y"])
    a, c, d = b.input("x"), b.input("y"), b.input("x")
    b.gate("H", [a])
    b.gate("CNOT", [a, c])
    b.gate("CNOT", [c, d])
    b.gate("CZ", [a, d])
    b.gate("T", [d])
    b.measure(a, qc.PROJ1)
    b.measure(c, qc.PROJ0)
    b.measure(d, qc.PROJ1)
    return b.build()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
