"""Algebraic tensor networks: validation, graphs, full contraction and value."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence

import networkx as nx
import numpy as np

from . import tensor as tn
from .boolean import GAP_EPS, assignments, threshold_computes
from .poly import Polynomial, evaluate, from_text, make_varset, to_text
from .tensor import AlgebraicTensor, NotContractible, format_key


class InvalidNetwork(ValueError):
    pass


@dataclass(frozen=True)
class TensorNetwork:
    tensors: tuple[AlgebraicTensor, ...]
    varset: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tensors", tuple(self.tensors))
        object.__setattr__(self, "varset", make_varset(self.varset))

    def __len__(self):
        return len(self.tensors)

    def __iter__(self):
        return iter(self.tensors)

    def __getitem__(self, i):
        return self.tensors[i]

    def __eq__(self, other):
        if not isinstance(other, TensorNetwork):
            return NotImplemented
        return self.varset == other.varset and len(self) == len(other) and all(
            _same_tensor(a, b) for a, b in zip(self.tensors, other.tensors)
        )

    __hash__ = None

    def labels(self) -> list[int]:
        return sorted({i for g in self.tensors for i in g.indices})

    @property
    def rank(self) -> int:
        return network_rank(self)

    @property
    def degree(self) -> int:
        return max((g.degree for g in self.tensors), default=0)

    @property
    def total_degree(self) -> int:
        return total_degree(self)


def _same_tensor(a: AlgebraicTensor, b: AlgebraicTensor) -> bool:
    if a.indices != b.indices or a.varset != b.varset or set(a.data) != set(b.data):
        return False
    return all(np.array_equal(a.data[m], b.data[m]) for m in a.data)


def network_rank(N: TensorNetwork) -> int:
    return max((g.rank for g in N.tensors), default=0)


def total_degree(N: TensorNetwork) -> int:
    return sum(g.degree for g in N.tensors)


def validate(N: TensorNetwork) -> list[str]:
    """Return a list of human-readable violations; empty means well formed."""
    problems = []
    if not N.tensors:
        return ["network is empty"]
    for pos, g in enumerate(N.tensors):
        if len(set(g.indices)) != len(g.indices):
            problems.append(f"tensor {pos} repeats an index label")
        if g.varset != N.varset:
            problems.append(f"tensor {pos} varset {g.varset} differs from network varset {N.varset}")
    counts = Counter(i for g in N.tensors for i in set(g.indices))
    for label in sorted(counts):
        if counts[label] != 2:
            problems.append(f"index {label} occurs {counts[label]} times")
    if not nx.is_connected(_raw_graph(N)):
        problems.append("graph disconnected")
    return problems


def check(N: TensorNetwork) -> None:
    problems = validate(N)
    if problems:
        raise InvalidNetwork("; ".join(problems))


def _raw_graph(N: TensorNetwork) -> nx.MultiGraph:
    G = nx.MultiGraph()
    G.add_nodes_from(range(len(N.tensors)))
    where: dict[int, list[int]] = {}
    for pos, g in enumerate(N.tensors):
        for i in g.indices:
            where.setdefault(i, []).append(pos)
    for label, owners in sorted(where.items()):
        if len(owners) == 2:
            G.add_edge(owners[0], owners[1], key=label, label=label)
    return G


def build_graph(N: TensorNetwork) -> nx.MultiGraph:
    """Vertex ``j`` carries tensor ``j``; one edge (key = label) per index label."""
    check(N)
    G = _raw_graph(N)
    for pos, g in enumerate(N.tensors):
        G.nodes[pos]["tensor"] = g
    return G


# contraction paths are SSA-style: inputs are ids 0..m-1, step k creates id m+k


def greedy_path(N: TensorNetwork) -> list[tuple[int, int]]:
    """Contract the contractible pair with the smallest result rank first."""
    live = {pos: frozenset(g.indices) for pos, g in enumerate(N.tensors)}
    nxt = len(live)
    path = []
    while len(live) > 1:
        best = None
        ids = sorted(live)
        for a_pos, a in enumerate(ids):
            for b in ids[a_pos + 1:]:
                if live[a] & live[b]:
                    key = (len(live[a] ^ live[b]), a, b)
                    if best is None or key < best:
                        best = key
        if best is None:
            # disconnected remainder; fall back to an outer product
            best = (0, ids[0], ids[1])
        _, a, b = best
        live[nxt] = live.pop(a) ^ live.pop(b)
        path.append((a, b))
        nxt += 1
    return path


def carving_path(N: TensorNetwork, cd) -> list[tuple[int, int]]:
    """Bottom-up path along a carving decomposition whose leaves map to tensor positions."""
    ssa: dict[int, int] = {}
    nxt = len(N.tensors)
    path = []
    for node in cd.postorder():
        if node in cd.children:
            left, right = cd.children[node]
            path.append((ssa[left], ssa[right]))
            ssa[node] = nxt
            nxt += 1
        else:
            ssa[node] = cd.leaf_map[node]
    return path


def random_path(N: TensorNetwork, rng: random.Random) -> list[tuple[int, int]]:
    live = {pos: frozenset(g.indices) for pos, g in enumerate(N.tensors)}
    nxt = len(live)
    path = []
    while len(live) > 1:
        ids = sorted(live)
        pairs = [(a, b) for k, a in enumerate(ids) for b in ids[k + 1:] if live[a] & live[b]]
        a, b = rng.choice(pairs)
        if rng.random() < 0.5:
            a, b = b, a
        live[nxt] = live.pop(a) ^ live.pop(b)
        path.append((a, b))
        nxt += 1
    return path


def default_path(N: TensorNetwork, decomposition=None) -> list[tuple[int, int]]:
    if decomposition is not None:
        return carving_path(N, decomposition)
    return greedy_path(N)


def _run_path(items: dict, path, combine, strict: bool, on_step=None):
    nxt = len(items)
    for step, (a, b) in enumerate(path):
        if a not in items or b not in items or a == b:
            raise NotContractible(f"step {step}: ({a}, {b}) does not name two live tensors")
        try:
            items[nxt] = combine(items.pop(a), items.pop(b), strict)
        except NotContractible as exc:
            raise NotContractible(f"step {step}: {exc}") from None
        if on_step is not None:
            on_step(step, items)
        nxt += 1
    if len(items) != 1:
        raise NotContractible(f"path leaves {len(items)} tensors uncontracted")
    return next(iter(items.values()))


def contract_all(
    N: TensorNetwork,
    order: Sequence[tuple[int, int]] | None = None,
    decomposition=None,
    on_step=None,
) -> Polynomial:
    """Contract every tensor of ``N`` into its value polynomial.

    ``order`` is an SSA path: a pair ``(a, b)`` names two live tensor ids and
    the result receives the next fresh id. Each pair of a user-given order must
    share an index. Without an order the contraction follows ``decomposition``
    (a carving decomposition of the network graph) when given, else a greedy
    minimum-result-rank rule.
    """
    check(N)
    strict = order is not None
    path = list(order) if order is not None else default_path(N, decomposition)
    if len(path) != len(N.tensors) - 1:
        raise NotContractible(f"path has {len(path)} steps, need {len(N.tensors) - 1}")
    items = dict(enumerate(N.tensors))
    g = _run_path(items, path, lambda x, y, s: tn.contract(x, y, allow_outer=not s), strict, on_step)
    return g.as_polynomial()


def contract_numeric(N: TensorNetwork, alpha: Mapping[str, int], path=None) -> complex:
    """Substitute ``alpha`` into every tensor, then contract complex arrays."""
    if path is None:
        path = greedy_path(N)
    items = {pos: (g.evaluate(alpha), g.indices) for pos, g in enumerate(N.tensors)}

    def combine(x, y, strict):
        return tn.contract_numeric(x[0], x[1], y[0], y[1], allow_outer=not strict)

    arr, idx = _run_path(items, path, combine, strict=False)
    assert idx == ()
    return complex(arr)


def value(N: TensorNetwork, alpha: Mapping[str, int], mode: str = "numeric", path=None) -> float:
    """Magnitude of the contracted network at a Boolean assignment."""
    missing = set(N.varset) - set(alpha)
    if missing:
        raise KeyError(f"no value for {sorted(missing)}")
    if mode == "numeric":
        return abs(contract_numeric(N, alpha, path))
    if mode == "symbolic":
        return abs(evaluate(contract_all(N, order=path), alpha))
    raise ValueError(f"unknown mode {mode!r}")


def value_table(N: TensorNetwork, path=None) -> dict[tuple[int, ...], float]:
    if path is None:
        path = greedy_path(N)
    return {tuple(a.values()): value(N, a, path=path) for a in assignments(N.varset)}


def computes(N: TensorNetwork, f, gap: float = GAP_EPS) -> bool:
    check(N)
    path = greedy_path(N)
    return threshold_computes(N.varset, lambda a: value(N, a, path=path), f, gap)


def substitute(N: TensorNetwork, beta: Mapping[str, int]) -> TensorNetwork:
    """Fix the variables of ``beta``; the result lives over the remaining variables."""
    varset = tuple(v for v in N.varset if v not in beta)
    return TensorNetwork(tuple(g.substitute(beta, varset) for g in N.tensors), varset)


# JSON format


def tensor_to_json(g: AlgebraicTensor) -> dict:
    entries = [{"key": format_key(k), "poly": to_text(p)} for k, p in g.entries().items()]
    return {"indices": list(g.indices), "entries": entries}


def tensor_from_json(d: Mapping, varset) -> AlgebraicTensor:
    entries = {}
    for e in d.get("entries", []):
        entries[tn.parse_key(e["key"])] = from_text(e["poly"], varset)
    return AlgebraicTensor.from_entries(d["indices"], entries, varset)


def to_json(N: TensorNetwork) -> dict:
    return {"variables": list(N.varset), "tensors": [tensor_to_json(g) for g in N.tensors]}


def from_json(d: Mapping) -> TensorNetwork:
    varset = tuple(d.get("variables", []))
    return TensorNetwork(tuple(tensor_from_json(t, varset) for t in d["tensors"]), varset)


def dumps(N: TensorNetwork) -> str:
    return json.dumps(to_json(N), indent=1)


def loads(text: str) -> TensorNetwork:
    return from_json(json.loads(text))
