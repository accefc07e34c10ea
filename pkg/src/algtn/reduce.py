"""Size reduction of algebraic tensor networks guided by a carving decomposition.

Given a network whose variables all lie in ``Y`` and a carving decomposition
of its graph of width ``w``, the tensors that mention no ``Y`` variable are
grouped into connected pieces (one per component of the subgraph induced by
each tree of the forest left after deleting the Y-nodes) and each piece is
contracted into a single tensor. With ``l`` Y-tensors the result has at most
``4 l (w + 1)`` tensors and the same value at every assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import networkx as nx

from . import tensor as tn
from .decomp import CarvingDecomposition, carving_decomposition, carving_width
from .network import TensorNetwork, build_graph, check, substitute


class BoundViolation(AssertionError):
    pass


def find_y_tensors(N: TensorNetwork, ys: Iterable[str]) -> set[int]:
    ys = set(ys)
    return {pos for pos, g in enumerate(N.tensors) if not g.variables().isdisjoint(ys)}


def find_y_nodes(cd: CarvingDecomposition, y_tensors) -> set[int]:
    """Y-leaves plus internal nodes with Y-leaves below both children."""
    y_tensors = set(y_tensors)
    has_y: dict[int, bool] = {}
    nodes = set()
    for u in cd.postorder():
        if u in cd.children:
            left, right = cd.children[u]
            has_y[u] = has_y[left] or has_y[right]
            if has_y[left] and has_y[right]:
                nodes.add(u)
        else:
            has_y[u] = cd.leaf_map[u] in y_tensors
            if has_y[u]:
                nodes.add(u)
    return nodes


def forest_components(cd: CarvingDecomposition, y_nodes) -> list[frozenset]:
    """Components of the tree with the Y-nodes deleted, in postorder of their roots."""
    y_nodes = set(y_nodes)
    parents = cd.parents()
    comps = []
    for u in reversed(cd.postorder()):  # preorder-like: parents before children
        if u in y_nodes:
            continue
        p = parents.get(u)
        if p is None or p in y_nodes:
            members, stack = [], [u]
            while stack:
                x = stack.pop()
                members.append(x)
                stack.extend(c for c in cd.children.get(x, ()) if c not in y_nodes)
            comps.append(frozenset(members))
    pos = {u: k for k, u in enumerate(cd.postorder())}
    comps.sort(key=lambda c: max(pos[u] for u in c))
    return comps


@dataclass
class PieceSplit:
    components: list[list[int]]  # tensor positions, each sorted
    boundary: int


def graph_components(G: nx.MultiGraph, cd: CarvingDecomposition, tree_part, width: int | None = None) -> PieceSplit:
    """Components of the subgraph induced by the vertices at the leaves of ``tree_part``.

    With ``width`` given, raises :class:`BoundViolation` if there are more than
    ``2 * width`` components or boundary edges.
    """
    verts = {cd.leaf_map[u] for u in tree_part if u not in cd.children}
    H = G.subgraph(verts)
    comps = sorted((sorted(c) for c in nx.connected_components(H)), key=lambda c: c[0])
    boundary = sum(1 for a, b in G.edges() if (a in verts) != (b in verts))
    if width is not None:
        if len(comps) > 2 * width and not (width == 0 and len(comps) == 1):
            raise BoundViolation(f"{len(comps)} components exceed 2w = {2 * width}")
        if boundary > 2 * width:
            raise BoundViolation(f"{boundary} boundary edges exceed 2w = {2 * width}")
    return PieceSplit(comps, boundary)


def contract_piece(N: TensorNetwork, G: nx.MultiGraph, positions) -> tn.AlgebraicTensor:
    """Contract tensors along a DFS spanning tree from the lowest position."""
    positions = sorted(positions)
    H = G.subgraph(positions)
    order = list(nx.dfs_preorder_nodes(H, positions[0]))
    acc = N.tensors[order[0]]
    for v in order[1:]:
        # strict: every DFS step shares the tree edge's index with the accumulator
        acc = tn.contract(acc, N.tensors[v])
    return acc


@dataclass
class ReductionStats:
    l: int
    w: int
    size_in: int
    size_out: int
    size_bound: int
    rank_out: int
    rank_bound: int
    degree_in: int
    degree_out: int
    y_nodes: int
    forest_components: int
    graph_components: list[int] = field(default_factory=list)
    boundaries: list[int] = field(default_factory=list)
    decomposition: str = "given"

    @property
    def violations(self) -> list[str]:
        out = []
        L = self.l
        if L and self.y_nodes != 2 * L - 1:
            out.append(f"Y-node count {self.y_nodes} != 2l-1 = {2 * L - 1}")
        if L and self.forest_components > 2 * L - 1:
            out.append(f"forest components {self.forest_components} > 2l-1 = {2 * L - 1}")
        for c in self.graph_components:
            if c > max(2 * self.w, 1):
                out.append(f"piece count {c} > 2w = {2 * self.w}")
        for b in self.boundaries:
            if b > 2 * self.w:
                out.append(f"boundary {b} > 2w = {2 * self.w}")
        if L and self.size_out > self.size_bound:
            out.append(f"size {self.size_out} > 4l(w+1) = {self.size_bound}")
        if self.rank_out > self.rank_bound:
            out.append(f"rank {self.rank_out} > bound {self.rank_bound}")
        if self.degree_out != self.degree_in:
            out.append(f"degree changed from {self.degree_in} to {self.degree_out}")
        return out

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["size_margin"] = self.size_bound - self.size_out
        d["rank_margin"] = self.rank_bound - self.rank_out
        d["two_w"] = 2 * self.w
        d["violations"] = self.violations
        return d


@dataclass
class Reduction:
    network: TensorNetwork
    stats: ReductionStats
    y_tensors: list[int]
    pieces: list[list[int]]


def reduce_network(
    N: TensorNetwork,
    cd: CarvingDecomposition | None = None,
    ys: Iterable[str] | None = None,
    strict: bool = True,
) -> Reduction:
    """Keep the Y-tensors and contract every remaining piece into one tensor.

    ``ys`` defaults to all variables of ``N``; every variable of ``N`` must be
    in ``ys``. With ``strict`` any violated bound raises :class:`BoundViolation`.
    """
    check(N)
    ys = tuple(N.varset if ys is None else ys)
    stray = set(N.varset) - set(ys)
    if stray:
        raise ValueError(f"variables {sorted(stray)} are outside Y; bind them first")
    G = build_graph(N)
    source = "given"
    if cd is None:
        cd = carving_decomposition(G)
        source = "heuristic"
    w = carving_width(G, cd)
    y_tensors = sorted(find_y_tensors(N, ys))
    y_nodes = find_y_nodes(cd, y_tensors)
    forest = forest_components(cd, y_nodes)

    pieces, counts, boundaries = [], [], []
    for part in forest:
        split = graph_components(G, cd, part, width=w if strict else None)
        counts.append(len(split.components))
        boundaries.append(split.boundary)
        pieces.extend(split.components)

    new_tensors = [N.tensors[p] for p in y_tensors]
    new_tensors += [contract_piece(N, G, piece) for piece in pieces]
    out = TensorNetwork(tuple(new_tensors), N.varset)

    l = len(y_tensors)
    y_rank = max((N.tensors[p].rank for p in y_tensors), default=0)
    stats = ReductionStats(
        l=l,
        w=w,
        size_in=len(N),
        size_out=len(out),
        size_bound=4 * l * (w + 1),
        rank_out=out.rank,
        rank_bound=max(2 * w, y_rank),
        degree_in=N.degree,
        degree_out=out.degree,
        y_nodes=len(y_nodes),
        forest_components=len(forest),
        graph_components=counts,
        boundaries=boundaries,
        decomposition=source,
    )
    if strict and stats.violations:
        raise BoundViolation("; ".join(stats.violations))
    return Reduction(out, stats, y_tensors, pieces)


def reduce_subfunction(
    N: TensorNetwork,
    ys: Iterable[str],
    beta: Mapping[str, int],
    cd: CarvingDecomposition | None = None,
    strict: bool = True,
) -> Reduction:
    """Fix the variables outside ``ys`` by ``beta``, then reduce."""
    ys = tuple(ys)
    outside = set(N.varset) - set(ys)
    missing = outside - set(beta)
    if missing:
        raise KeyError(f"beta leaves {sorted(missing)} unassigned")
    extra = set(beta) - outside
    if extra:
        raise ValueError(f"beta assigns variables {sorted(extra)} that are not outside Y")
    bound = substitute(N, beta) if beta else N
    return reduce_network(bound, cd, ys, strict=strict)

