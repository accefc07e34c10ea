"""Algebraic tensors over the basis of 2x2 matrix units and their contraction.

An algebraic tensor with index labels ``(i_1, ..., i_k)`` assigns a
polynomial to every tuple ``(s_1, ..., s_k)`` of basis elements. Storage is
monomial-major: for every monomial that occurs anywhere in the tensor we keep
one dense complex array of shape ``(4,) * k`` holding its coefficient in every
entry. Contracting two tensors is then a sum of ``tensordot`` calls over
monomial pairs, which is what makes symbolic contraction cheap.
"""

from __future__ import annotations

import enum
import itertools
from typing import Iterable, Mapping

import numpy as np

from .poly import (
    ZERO_EPS,
    Monomial,
    Polynomial,
    VarsetMismatch,
    make_varset,
    monomial,
    monomial_degree,
    monomial_mul,
    monomial_vars,
)


class PiElement(enum.IntEnum):
    K00 = 0  # |0><0|
    K01 = 1  # |0><1|
    K10 = 2  # |1><0|
    K11 = 3  # |1><1|

    @property
    def matrix(self) -> np.ndarray:
        return PI_MATRICES[self]

    @property
    def row(self) -> int:
        return self.value >> 1

    @property
    def col(self) -> int:
        return self.value & 1


PI_MATRICES = np.zeros((4, 2, 2), dtype=complex)
for _s in range(4):
    PI_MATRICES[_s, _s >> 1, _s & 1] = 1.0
PI_MATRICES.setflags(write=False)


class NotContractible(ValueError):
    pass


def parse_key(text: str) -> tuple[PiElement, ...]:
    text = text.strip()
    if not text:
        return ()
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in PiElement.__members__:
            raise ValueError(f"unknown Pi element {tok!r} in key {text!r}")
        out.append(PiElement[tok])
    return tuple(out)


def format_key(key: Iterable[int]) -> str:
    return ",".join(PiElement(s).name for s in key)


def _clean(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr[np.abs(arr) <= ZERO_EPS] = 0
    return arr


class AlgebraicTensor:
    """A tensor whose entries are polynomials in ``varset``.

    Parameters
    ----------
    indices : sequence of int
        Distinct positive index labels; axis ``a`` of every coefficient array
        corresponds to ``indices[a]``.
    data : mapping Monomial -> ndarray
        Coefficient arrays of shape ``(4,) * rank``.
    varset : sequence of str
    """

    __slots__ = ("indices", "data", "varset")

    def __init__(self, indices, data: Mapping[Monomial, np.ndarray], varset=()):
        indices = tuple(int(i) for i in indices)
        if len(set(indices)) != len(indices):
            raise ValueError(f"repeated index label in {indices}")
        if any(i <= 0 for i in indices):
            raise ValueError(f"index labels must be positive, got {indices}")
        varset = make_varset(varset)
        known = set(varset)
        shape = (4,) * len(indices)
        clean: dict[Monomial, np.ndarray] = {}
        for m, arr in data.items():
            m = monomial(m)
            stray = monomial_vars(m) - known
            if stray:
                raise VarsetMismatch(f"variables {sorted(stray)} not in varset {varset}")
            arr = _clean(arr)
            if arr.shape != shape:
                raise ValueError(f"coefficient array shape {arr.shape}, expected {shape}")
            if m in clean:
                arr = _clean(clean[m] + arr)
            if np.any(arr):
                clean[m] = arr
        self.indices = indices
        self.data = clean
        self.varset = varset

    # construction

    @classmethod
    def from_entries(cls, indices, entries: Mapping, varset=()) -> AlgebraicTensor:
        """Build from a ``{key: Polynomial | number}`` mapping; missing keys are zero."""
        indices = tuple(indices)
        shape = (4,) * len(indices)
        data: dict[Monomial, np.ndarray] = {}
        for key, p in entries.items():
            if isinstance(key, str):
                key = parse_key(key)
            key = tuple(int(s) for s in key)
            if len(key) != len(indices):
                raise ValueError(f"key {key} does not match rank {len(indices)}")
            if not isinstance(p, Polynomial):
                p = Polynomial.const(p, varset)
            for m, c in p.terms.items():
                arr = data.setdefault(m, np.zeros(shape, dtype=complex))
                arr[key] += c
        return cls(indices, data, varset)

    @classmethod
    def constant(cls, indices, array, varset=()) -> AlgebraicTensor:
        return cls(indices, {(): np.asarray(array, dtype=complex)}, varset)

    @classmethod
    def scalar(cls, p: Polynomial) -> AlgebraicTensor:
        return cls((), {m: np.array(c, dtype=complex) for m, c in p.terms.items()}, p.varset)

    # basic queries

    @property
    def rank(self) -> int:
        return len(self.indices)

    @property
    def degree(self) -> int:
        return max((monomial_degree(m) for m in self.data), default=0)

    @property
    def shape(self) -> tuple[int, ...]:
        return (4,) * self.rank

    def variables(self) -> frozenset[str]:
        out: set[str] = set()
        for m in self.data:
            out |= monomial_vars(m)
        return frozenset(out)

    def entry(self, key) -> Polynomial:
        if isinstance(key, str):
            key = parse_key(key)
        key = tuple(int(s) for s in key)
        return Polynomial({m: arr[key] for m, arr in self.data.items()}, self.varset)

    def __getitem__(self, key) -> Polynomial:
        return self.entry(key)

    def keys(self):
        return itertools.product(PiElement, repeat=self.rank)

    def entries(self) -> dict[tuple[PiElement, ...], Polynomial]:
        """All non-zero entries, in lexicographic key order."""
        out = {}
        for key in self.keys():
            p = self.entry(key)
            if not p.is_zero():
                out[key] = p
        return out

    def as_polynomial(self) -> Polynomial:
        if self.rank:
            raise ValueError(f"tensor has rank {self.rank}, not 0")
        return self.entry(())

    # transformations

    def transpose(self, indices) -> AlgebraicTensor:
        """Reorder axes so that they follow ``indices`` (a permutation of ``self.indices``)."""
        indices = tuple(indices)
        if sorted(indices) != sorted(self.indices):
            raise ValueError(f"{indices} is not a permutation of {self.indices}")
        perm = [self.indices.index(i) for i in indices]
        return AlgebraicTensor(indices, {m: a.transpose(perm) for m, a in self.data.items()}, self.varset)

    def canonical(self) -> AlgebraicTensor:
        return self.transpose(sorted(self.indices))

    def relabel(self, mapping: Mapping[int, int]) -> AlgebraicTensor:
        return AlgebraicTensor([mapping.get(i, i) for i in self.indices], self.data, self.varset)

    def with_varset(self, varset) -> AlgebraicTensor:
        return AlgebraicTensor(self.indices, self.data, varset)

    def evaluate(self, alpha: Mapping[str, int | complex]) -> np.ndarray:
        """Substitute every variable; returns a complex array of shape ``(4,) * rank``."""
        out = np.zeros(self.shape, dtype=complex)
        for m, arr in self.data.items():
            v = 1.0 + 0j
            for var, e in m:
                v *= alpha[var] ** e
            if v != 0:
                out = out + v * arr
        return out

    def substitute(self, beta: Mapping[str, int | complex], varset=None) -> AlgebraicTensor:
        if varset is None:
            varset = tuple(v for v in self.varset if v not in beta)
        data: dict[Monomial, np.ndarray] = {}
        for m, arr in self.data.items():
            c = 1.0 + 0j
            rest = []
            for var, e in m:
                if var in beta:
                    c *= beta[var] ** e
                else:
                    rest.append((var, e))
            key = tuple(rest)
            if key in data:
                data[key] = data[key] + c * arr
            else:
                data[key] = c * arr
        return AlgebraicTensor(self.indices, data, varset)

    def __repr__(self):
        return (
            f"AlgebraicTensor(indices={self.indices}, monomials={len(self.data)}, "
            f"degree={self.degree}, varset={self.varset})"
        )


def rank(g: AlgebraicTensor) -> int:
    return g.rank


def tensor_degree(g: AlgebraicTensor) -> int:
    return g.degree


def contract(g: AlgebraicTensor, h: AlgebraicTensor, allow_outer: bool = False) -> AlgebraicTensor:
    """Sum the product of ``g`` and ``h`` over their shared indices.

    The result carries the symmetric difference of the two index sets, sorted
    ascending. ``allow_outer`` permits index-disjoint operands (plain outer
    product); otherwise such a pair raises :class:`NotContractible`.
    """
    if g.varset != h.varset:
        raise VarsetMismatch(f"varsets differ: {g.varset} vs {h.varset}")
    shared = [i for i in g.indices if i in h.indices]
    if not shared and not allow_outer:
        raise NotContractible(f"index sets {g.indices} and {h.indices} are disjoint")
    ax_g = [g.indices.index(i) for i in shared]
    ax_h = [h.indices.index(i) for i in shared]
    free = [i for i in g.indices if i not in shared] + [i for i in h.indices if i not in shared]
    out_indices = tuple(sorted(free))
    perm = [free.index(i) for i in out_indices]

    data: dict[Monomial, np.ndarray] = {}
    for m1, a in g.data.items():
        for m2, b in h.data.items():
            c = np.tensordot(a, b, axes=(ax_g, ax_h))
            m = monomial_mul(m1, m2)
            if m in data:
                data[m] += c
            else:
                data[m] = c
    data = {m: arr.transpose(perm) for m, arr in data.items()}
    return AlgebraicTensor(out_indices, data, g.varset)


def contract_numeric(a: np.ndarray, a_idx, b: np.ndarray, b_idx, allow_outer: bool = True):
    """Numeric counterpart of :func:`contract` on plain arrays; returns ``(array, indices)``."""
    a_idx, b_idx = tuple(a_idx), tuple(b_idx)
    shared = [i for i in a_idx if i in b_idx]
    if not shared and not allow_outer:
        raise NotContractible(f"index sets {a_idx} and {b_idx} are disjoint")
    free = [i for i in a_idx if i not in shared] + [i for i in b_idx if i not in shared]
    c = np.tensordot(a, b, axes=([a_idx.index(i) for i in shared], [b_idx.index(i) for i in shared]))
    out = tuple(sorted(free))
    return c.transpose([free.index(i) for i in out]), out


def max_abs_diff(g: AlgebraicTensor, h: AlgebraicTensor) -> float:
    """Largest coefficient difference after aligning ``h`` to ``g``'s axis order."""
    if sorted(g.indices) != sorted(h.indices):
        return float("inf")
    h = h.transpose(g.indices)
    worst = 0.0
    zero = np.zeros(g.shape, dtype=complex)
    for m in set(g.data) | set(h.data):
        d = np.max(np.abs(g.data.get(m, zero) - h.data.get(m, zero)), initial=0.0)
        worst = max(worst, float(d))
    return worst
