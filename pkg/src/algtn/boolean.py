"""Truth tables, assignment enumeration and the >1/2 / <1/2 acceptance rule."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

GAP_EPS = 1e-9


def assignments(varset: Sequence[str]) -> Iterator[dict[str, int]]:
    """All Boolean assignments in canonical order (first variable most significant)."""
    for bits in itertools.product((0, 1), repeat=len(varset)):
        yield dict(zip(varset, bits))


def assignment_index(varset: Sequence[str], alpha: Mapping[str, int]) -> int:
    idx = 0
    for v in varset:
        idx = (idx << 1) | (int(alpha[v]) & 1)
    return idx


def parse_assignment(text: str) -> dict[str, int]:
    """Parse ``"x=1,y=0"``; the empty string is the empty assignment."""
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, val = part.partition("=")
        if not sep or val.strip() not in ("0", "1"):
            raise ValueError(f"bad assignment item {part!r}, expected name=0|1")
        out[name.strip()] = int(val)
    return out


def format_assignment(alpha: Mapping[str, int]) -> str:
    return ",".join(f"{k}={v}" for k, v in alpha.items())


@dataclass(frozen=True)
class TruthTable:
    """A Boolean function given by its values on all assignments in canonical order."""

    varset: tuple[str, ...]
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=bool).reshape(-1)
        if bits.size != 1 << len(self.varset):
            raise ValueError(f"truth table needs {1 << len(self.varset)} entries, got {bits.size}")
        bits.setflags(write=False)
        object.__setattr__(self, "varset", tuple(self.varset))
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_function(cls, varset, f: Callable[[dict[str, int]], int]) -> TruthTable:
        varset = tuple(varset)
        return cls(varset, [bool(f(a)) for a in assignments(varset)])

    def __call__(self, alpha: Mapping[str, int]) -> int:
        return int(self.bits[assignment_index(self.varset, alpha)])

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.varset == other.varset and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self):
        return hash((self.varset, self.bits.tobytes()))

    def count_ones(self) -> int:
        return int(self.bits.sum())


class AmbiguousThreshold(ValueError):
    """A value landed within ``GAP_EPS`` of 1/2."""

    def __init__(self, alpha, value):
        self.alpha = dict(alpha)
        self.value = value
        super().__init__(f"value {value!r} within gap of 1/2 at {format_assignment(alpha)}")


def threshold_computes(varset, value_of: Callable[[dict], float], f, gap: float = GAP_EPS) -> bool:
    """True iff ``value_of(a) > 1/2`` exactly where ``f(a) == 1``.

    Raises :class:`AmbiguousThreshold` on the first assignment whose value is
    within ``gap`` of 1/2.
    """
    ok = True
    for alpha in assignments(varset):
        v = value_of(alpha)
        if abs(v - 0.5) <= gap:
            raise AmbiguousThreshold(alpha, v)
        if (v > 0.5) != bool(f(alpha)):
            ok = False
    return ok
