import numpy as np
import pytest
from hypothesis import given, strategies as st

from algtn.convert import gate_table
from algtn.circuit import CNOT, H
from algtn.poly import Polynomial
from algtn.tensor import (
    PI_MATRICES,
    AlgebraicTensor,
    NotContractible,
    PiElement,
    contract,
    format_key,
    max_abs_diff,
    parse_key,
    rank,
    tensor_degree,
)
from helpers import naive_contract, pi_trace

VS = ("x", "y")
x, y = (Polynomial.var(v, VS) for v in VS)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)


def test_pi_basis():
    assert len(PiElement) == 4
    for s in PiElement:
        m = np.zeros((2, 2))
        m[s.row, s.col] = 1
        assert np.array_equal(s.matrix, m)
        assert np.array_equal(PI_MATRICES[s], m)


def test_key_text():
    assert parse_key("K00,K11") == (PiElement.K00, PiElement.K11)
    assert format_key((0, 3)) == "K00,K11"
    with pytest.raises(ValueError):
        parse_key("K02")


def test_rank_examples():
    g = AlgebraicTensor.constant((3, 7), np.ones((4, 4)))
    assert rank(g) == 2
    assert rank(AlgebraicTensor.scalar(Polynomial.const(2))) == 0
    assert gate_table(H).ndim == 2
    assert gate_table(CNOT).ndim == 4


def test_degree_examples():
    assert tensor_degree(AlgebraicTensor.constant((1,), np.ones(4))) == 0
    g = AlgebraicTensor.from_entries((1,), {"K00": 1 - x, "K11": x}, VS)
    assert tensor_degree(g) == 1
    assert tensor_degree(AlgebraicTensor.from_entries((1,), {"K00": x, "K01": x * y}, VS)) == 2


def test_invalid_tensors():
    with pytest.raises(ValueError):
        AlgebraicTensor.constant((1, 1), np.ones((4, 4)))
    with pytest.raises(ValueError):
        AlgebraicTensor.constant((0,), np.ones(4))
    with pytest.raises(ValueError):
        AlgebraicTensor.constant((1, 2), np.ones(4))


def test_trace_pair_contracts_to_one():
    g = AlgebraicTensor.constant((1,), [pi_trace(P0, s) for s in range(4)])
    g2 = AlgebraicTensor.constant((1,), [complex(np.trace(PI_MATRICES[s].conj().T @ P0)) for s in range(4)])
    out = contract(g, g2)
    assert out.rank == 0
    assert out.as_polynomial() == Polynomial.const(1)


def test_zero_annihilates():
    g = AlgebraicTensor.from_entries((1, 2), {"K00,K01": 1 - x}, VS)
    zero = AlgebraicTensor.from_entries((2, 5), {}, VS)
    out = contract(g, zero)
    assert out.indices == (1, 5)
    assert out.entries() == {}


def test_degree_one_operands():
    g = AlgebraicTensor.from_entries((1,), {"K00": 1 - x, "K11": x}, VS)
    h = AlgebraicTensor.from_entries((1, 2), {"K00,K00": y, "K11,K01": 1 - y}, VS)
    assert tensor_degree(contract(g, h)) <= 2


def test_not_contractible():
    g = AlgebraicTensor.constant((1,), np.ones(4))
    h = AlgebraicTensor.constant((2,), np.ones(4))
    with pytest.raises(NotContractible):
        contract(g, h)
    assert contract(g, h, allow_outer=True).indices == (1, 2)


def test_shared_all_indices_gives_scalar():
    g = AlgebraicTensor.constant((4, 2), np.arange(16).reshape(4, 4))
    h = AlgebraicTensor.constant((2, 4), np.eye(4))
    assert contract(g, h).as_polynomial() == Polynomial.const(np.trace(np.arange(16).reshape(4, 4)))


def test_substitute_and_evaluate():
    g = AlgebraicTensor.from_entries((1,), {"K00": 1 - x, "K11": x * y}, VS)
    s = g.substitute({"x": 1})
    assert s.varset == ("y",)
    assert s.entry((3,)) == Polynomial.var("y")
    assert np.allclose(g.evaluate({"x": 1, "y": 1}), [0, 0, 0, 1])


# random small tensors

labels = st.lists(st.integers(1, 6), min_size=0, max_size=3, unique=True)
entry = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)


@st.composite
def tensors(draw, idx=None, constant=False):
    idx = draw(labels) if idx is None else idx
    n = 4 ** len(idx)
    const = np.array(draw(st.lists(entry, min_size=n, max_size=n)), dtype=complex).reshape((4,) * len(idx))
    data = {(): const}
    if not constant:
        lin = np.array(draw(st.lists(entry, min_size=n, max_size=n)), dtype=complex).reshape((4,) * len(idx))
        data[(draw(st.sampled_from(VS)), 1),] = lin
    return AlgebraicTensor(idx, data, VS)


@st.composite
def pairs(draw, constant=False):
    a = draw(labels)
    b = draw(labels)
    if not set(a) & set(b):
        b = b + [a[0]] if a and a[0] not in b else b
    if not set(a) & set(b):
        a, b = [1] + [i for i in a if i != 1], [1] + [i for i in b if i != 1]
    return draw(tensors(a, constant)), draw(tensors(b, constant))


def _aligned(out, ref):
    perm = [out.indices.index(i) for i in ref["indices"]]
    return out.transpose(ref["indices"]) if perm else out


@given(pairs(constant=True))
def test_matches_naive_summation_constant(gh):
    g, h = gh
    out = contract(g, h)
    ref = naive_contract(g, h)
    out = _aligned(out, ref)
    for key, p in ref["entries"].items():
        assert abs(out.entry(key).terms.get((), 0) - p.terms.get((), 0)) <= 1e-9


@given(pairs())
def test_laws(gh):
    g, h = gh
    out = contract(g, h)
    assert set(out.indices) == set(g.indices) ^ set(h.indices)
    assert list(out.indices) == sorted(out.indices)
    assert out.degree <= g.degree + h.degree
    assert max_abs_diff(out, contract(h, g)) <= 1e-9
    ref = naive_contract(g, h)
    out = _aligned(out, ref)
    for key, p in ref["entries"].items():
        q = out.entry(key)
        for m in set(p.terms) | set(q.terms):
            assert abs(p.terms.get(m, 0) - q.terms.get(m, 0)) <= 1e-9
