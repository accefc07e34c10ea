"""Element distinctness and subfunction counting at desk scale."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .boolean import TruthTable, assignments

MAX_VARIABLES = 24
MAX_FIXED = 20


class SizeCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class BlockedVarSet:
    """``k`` blocks of ``2 log2 k`` variables each; variable ``y{i}_{j}`` is bit ``j`` of block ``i``."""

    k: int

    def __post_init__(self):
        if self.k < 2 or self.k & (self.k - 1):
            raise ValueError(f"k must be a power of two >= 2, got {self.k}")

    @property
    def block_size(self) -> int:
        return 2 * (self.k.bit_length() - 1)

    @property
    def n(self) -> int:
        return self.k * self.block_size

    @property
    def blocks(self) -> list[tuple[str, ...]]:
        return [tuple(f"y{i + 1}_{j + 1}" for j in range(self.block_size)) for i in range(self.k)]

    @property
    def varset(self) -> tuple[str, ...]:
        return tuple(v for b in self.blocks for v in b)

    def block_values(self, alpha) -> list[int]:
        """Integer value of each block, first variable most significant."""
        out = []
        for b in self.blocks:
            x = 0
            for v in b:
                x = (x << 1) | int(alpha[v])
            out.append(x)
        return out


def element_distinctness(k: int) -> TruthTable:
    """Truth table of ``delta_n``: 1 iff all ``k`` block values are pairwise distinct."""
    bv = BlockedVarSet(k)
    if bv.n > MAX_VARIABLES:
        raise SizeCapExceeded(f"n = {bv.n} exceeds the cap of {MAX_VARIABLES} variables")
    b = bv.block_size
    idx = np.arange(1 << bv.n, dtype=np.int64)
    shift = bv.n
    vals = []
    for _ in range(k):
        shift -= b
        vals.append((idx >> shift) & ((1 << b) - 1))
    ok = np.ones(idx.shape, dtype=bool)
    for i, j in itertools.combinations(range(k), 2):
        ok &= vals[i] != vals[j]
    return TruthTable(bv.varset, ok)


def count_subfunctions(f: TruthTable, ys: Sequence[str]) -> int:
    """Number of distinct restrictions of ``f`` to ``ys`` over all settings of the other variables."""
    ys = list(ys)
    unknown = set(ys) - set(f.varset)
    if unknown:
        raise ValueError(f"variables {sorted(unknown)} are not inputs of f")
    fixed = [v for v in f.varset if v not in ys]
    if len(fixed) > MAX_FIXED:
        raise SizeCapExceeded(f"{len(fixed)} fixed variables exceeds the cap of {MAX_FIXED}")
    cube = f.bits.reshape((2,) * len(f.varset)) if f.varset else f.bits.reshape(())
    axis = {v: a for a, v in enumerate(f.varset)}
    perm = [axis[v] for v in fixed] + [axis[v] for v in ys]
    rows = np.transpose(cube, perm).reshape(1 << len(fixed), 1 << len(ys))
    return int(np.unique(np.packbits(rows, axis=1), axis=0).shape[0])


def count_subfunctions_direct(f: Callable[[dict], int], varset, ys) -> int:
    """Reference count: evaluate ``f`` on every assignment and collect restriction tables."""
    ys = list(ys)
    fixed = [v for v in varset if v not in ys]
    seen = set()
    for beta in assignments(fixed):
        seen.add(tuple(int(f({**beta, **alpha})) for alpha in assignments(ys)))
    return len(seen)


def distinct_direct(bv: BlockedVarSet) -> Callable[[dict], int]:
    def f(alpha):
        vals = bv.block_values(alpha)
        return int(len(set(vals)) == len(vals))

    return f


@dataclass
class SubfunctionReport:
    k: int
    n: int
    counts: list[int]
    oracle_counts: list[int]
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def as_dict(self) -> dict:
        return {"k": self.k, "n": self.n, "counts": self.counts, "oracle_counts": self.oracle_counts,
                "ok": self.ok, "problems": self.problems}


def check_block_counts(k: int) -> SubfunctionReport:
    """Per-block subfunction counts, checked against direct enumeration and block symmetry."""
    bv = BlockedVarSet(k)
    table = element_distinctness(k)
    direct = distinct_direct(bv)
    counts, oracle = [], []
    for block in bv.blocks:
        counts.append(count_subfunctions(table, block))
        oracle.append(count_subfunctions_direct(direct, bv.varset, block))
    report = SubfunctionReport(k, bv.n, counts, oracle)
    if counts != oracle:
        report.problems.append(f"fast counts {counts} differ from enumeration {oracle}")
    if len(set(counts)) != 1:
        report.problems.append(f"counts differ across blocks: {counts}")
    return report


def subfunction_table(ks: Sequence[int] = (2, 4)) -> list[SubfunctionReport]:
    """Reports for increasing ``k``; flags a count that fails to grow."""
    reports = [check_block_counts(k) for k in sorted(ks)]
    for prev, cur in zip(reports, reports[1:]):
        if min(cur.counts) < max(prev.counts):
            cur.problems.append(f"count at k={cur.k} is below the count at k={prev.k}")
    return reports
