"""Tree decompositions, rooted carving decompositions and conversions between them.

Graphs are ``networkx`` (multi)graphs; edge multiplicities count towards
degrees and carving widths. Loops are ignored.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Hashable, Mapping

import networkx as nx

# Width factor achieved by carving_from_tree_decomposition: every edge leaving
# the vertex set of a carving node has an endpoint in one bag of the tree
# decomposition, so the width is at most max_degree * (treewidth + 1).
C_CONV = 1

EXACT_MAX_VERTICES = 10


class InvalidDecomposition(ValueError):
    pass


class GraphTooLarge(ValueError):
    pass


def max_degree(G: nx.Graph) -> int:
    return max((d for _, d in G.degree()), default=0)


def _vertex_order(G) -> dict:
    try:
        ordered = sorted(G.nodes)
    except TypeError:
        ordered = sorted(G.nodes, key=repr)
    return {v: k for k, v in enumerate(ordered)}


# tree decompositions


@dataclass
class TreeDecomposition:
    tree: nx.Graph
    bags: dict[Hashable, frozenset]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


def validate_tree_decomposition(G: nx.Graph, td: TreeDecomposition) -> list[str]:
    problems = []
    T = td.tree
    if set(T.nodes) != set(td.bags):
        problems.append("tree nodes and bag keys differ")
        return problems
    if T.number_of_nodes() == 0:
        if G.number_of_nodes():
            problems.append("empty decomposition for a non-empty graph")
        return problems
    if not nx.is_tree(T):
        problems.append("decomposition tree is not a tree")
        return problems
    vertices = set(G.nodes)
    covered = set().union(*td.bags.values())
    for v in sorted(vertices - covered, key=repr):
        problems.append(f"vertex {v!r} is in no bag")
    for v in sorted(covered - vertices, key=repr):
        problems.append(f"bag vertex {v!r} is not in the graph")
    for a, b in set(tuple(e) for e in G.edges()):
        if a != b and not any(a in bag and b in bag for bag in td.bags.values()):
            problems.append(f"edge {{{a!r}, {b!r}}} is in no bag")
    for v in sorted(vertices & covered, key=repr):
        holders = [u for u, bag in td.bags.items() if v in bag]
        if not nx.is_connected(T.subgraph(holders)):
            problems.append(f"bags containing {v!r} do not form a connected subtree")
    return problems


def min_fill_order(G: nx.Graph) -> list:
    """Elimination order by minimum fill-in, ties by degree, then vertex order."""
    rank = _vertex_order(G)
    adj = {v: set(G.neighbors(v)) - {v} for v in G.nodes}
    order = []
    while adj:
        def cost(v):
            nbrs = list(adj[v])
            fill = sum(1 for a, b in itertools.combinations(nbrs, 2) if b not in adj[a])
            return (fill, len(nbrs), rank[v])

        v = min(adj, key=cost)
        nbrs = adj.pop(v)
        for a in nbrs:
            adj[a].discard(v)
            adj[a] |= nbrs - {a}
        order.append(v)
    return order


def tree_decomposition_from_order(G: nx.Graph, order) -> TreeDecomposition:
    pos = {v: k for k, v in enumerate(order)}
    adj = {v: set(G.neighbors(v)) - {v} for v in G.nodes}
    bags: dict[int, frozenset] = {}
    parent_vertex: dict[int, Hashable] = {}
    for k, v in enumerate(order):
        nbrs = adj.pop(v)
        bags[k] = frozenset(nbrs | {v})
        if nbrs:
            parent_vertex[k] = min(nbrs, key=pos.__getitem__)
        for a in nbrs:
            adj[a].discard(v)
            adj[a] |= nbrs - {a}
    T = nx.Graph()
    T.add_nodes_from(bags)
    for k in range(len(order)):
        if k in parent_vertex:
            T.add_edge(k, pos[parent_vertex[k]])
        elif k + 1 < len(order):
            # last vertex of a component: hang the next bag here to keep one tree
            T.add_edge(k, k + 1)
    return TreeDecomposition(T, bags)


def heuristic_tree_decomposition(G: nx.Graph) -> TreeDecomposition:
    return tree_decomposition_from_order(G, min_fill_order(G))


# carving decompositions


@dataclass
class CarvingDecomposition:
    """Rooted binary tree; ``children[u] = (left, right)``, ``leaf_map[leaf] = vertex``."""

    root: int
    children: dict[int, tuple[int, int]]
    leaf_map: dict[int, Hashable]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def nodes(self) -> list[int]:
        return self.postorder()

    def leaves(self) -> list[int]:
        return [u for u in self.postorder() if u not in self.children]

    def parents(self) -> dict[int, int]:
        return {c: u for u, kids in self.children.items() for c in kids}

    def postorder(self) -> list[int]:
        if "postorder" not in self._cache:
            out, stack, seen = [], [(self.root, False)], set()
            while stack:
                u, done = stack.pop()
                if done:
                    out.append(u)
                    continue
                if u in seen:
                    raise InvalidDecomposition(f"node {u} reached twice")
                seen.add(u)
                stack.append((u, True))
                for c in reversed(self.children.get(u, ())):
                    stack.append((c, False))
            self._cache["postorder"] = out
        return self._cache["postorder"]

    def vertex_sets(self) -> dict[int, frozenset]:
        """``V(u)``: graph vertices at the leaves below each node."""
        if "vsets" not in self._cache:
            vs: dict[int, frozenset] = {}
            for u in self.postorder():
                if u in self.children:
                    left, right = self.children[u]
                    vs[u] = vs[left] | vs[right]
                else:
                    vs[u] = frozenset([self.leaf_map[u]])
            self._cache["vsets"] = vs
        return self._cache["vsets"]

    def leaf_sets(self) -> dict[int, frozenset]:
        """Leaf nodes below each node."""
        ls: dict[int, frozenset] = {}
        for u in self.postorder():
            if u in self.children:
                left, right = self.children[u]
                ls[u] = ls[left] | ls[right]
            else:
                ls[u] = frozenset([u])
        return ls


def validate_carving_decomposition(G: nx.Graph, cd: CarvingDecomposition) -> list[str]:
    problems = []
    for u, kids in cd.children.items():
        if len(kids) != 2 or kids[0] == kids[1]:
            problems.append(f"node {u} must have exactly two distinct children, has {kids}")
    if problems:
        return problems
    try:
        order = cd.postorder()
    except InvalidDecomposition as exc:
        return [str(exc)]
    reached = set(order)
    for u in cd.children:
        if u not in reached:
            problems.append(f"node {u} is not reachable from the root")
    leaves = [u for u in order if u not in cd.children]
    if set(cd.leaf_map) != set(leaves):
        problems.append("leaf map keys differ from the tree's leaves")
    images = [cd.leaf_map.get(u) for u in leaves]
    if len(set(images)) != len(images):
        problems.append("leaf map is not injective")
    if set(images) != set(G.nodes):
        problems.append("leaf map is not onto the graph's vertices")
    return problems


def _cut_sizes(G: nx.Graph, cd: CarvingDecomposition) -> dict[int, int]:
    vs = cd.vertex_sets()
    out = {}
    for u in cd.postorder():
        if u in cd.children:
            left, right = cd.children[u]
            between = sum(_mult(G, a, b) for a in vs[left] for b in G.neighbors(a) if b in vs[right])
            out[u] = out[left] + out[right] - 2 * between
        else:
            v = cd.leaf_map[u]
            out[u] = G.degree(v) - 2 * _mult(G, v, v)
    return out


def _mult(G, a, b) -> int:
    if not G.has_edge(a, b):
        return 0
    return G.number_of_edges(a, b)


def cut_sizes(G: nx.Graph, cd: CarvingDecomposition) -> dict[int, int]:
    """``|E(V(u))|`` for every node ``u``."""
    problems = validate_carving_decomposition(G, cd)
    if problems:
        raise InvalidDecomposition("; ".join(problems))
    return _cut_sizes(G, cd)


def carving_width(G: nx.Graph, cd: CarvingDecomposition) -> int:
    return max(cut_sizes(G, cd).values(), default=0)


def carving_from_tree_decomposition(G: nx.Graph, td: TreeDecomposition) -> CarvingDecomposition:
    """Turn a tree decomposition into a rooted carving decomposition.

    Each vertex is attached to the bag closest to the root that contains it;
    the leaves of a bag and the carvings of its child subtrees are merged
    into a caterpillar.
    """
    problems = validate_tree_decomposition(G, td)
    if problems:
        raise InvalidDecomposition("; ".join(problems))
    if G.number_of_nodes() == 0:
        raise InvalidDecomposition("graph has no vertices")
    rank = _vertex_order(G)
    T = td.tree
    root = min(T.nodes, key=_vertex_order(T).__getitem__)
    depth = nx.single_source_shortest_path_length(T, root)
    home: dict[Hashable, list] = {u: [] for u in T.nodes}
    for v in G.nodes:
        top = min((u for u, bag in td.bags.items() if v in bag), key=lambda u: (depth[u], repr(u)))
        home[top].append(v)

    children_of = {u: [] for u in T.nodes}
    order = list(nx.dfs_preorder_nodes(T, root))
    pre = {u: k for k, u in enumerate(order)}
    for u, p in nx.bfs_predecessors(T, root):
        children_of[p].append(u)

    nxt = itertools.count()
    kids: dict[int, tuple[int, int]] = {}
    leaf_map: dict[int, Hashable] = {}
    built: dict[Hashable, int | None] = {}
    for u in reversed(order):
        items = []
        for v in sorted(home[u], key=rank.__getitem__):
            leaf = next(nxt)
            leaf_map[leaf] = v
            items.append(leaf)
        for c in sorted(children_of[u], key=pre.__getitem__):
            if built[c] is not None:
                items.append(built[c])
        if not items:
            built[u] = None
            continue
        cur = items[0]
        for it in items[1:]:
            node = next(nxt)
            kids[node] = (cur, it)
            cur = node
        built[u] = cur
    return CarvingDecomposition(built[root], kids, leaf_map)


def carving_decomposition(G: nx.Graph) -> CarvingDecomposition:
    """Heuristic pipeline: min-fill tree decomposition, then conversion."""
    return carving_from_tree_decomposition(G, heuristic_tree_decomposition(G))


def exact_carving_decomposition(G: nx.Graph) -> tuple[int, CarvingDecomposition]:
    """Minimum-width rooted carving decomposition by memoised branch and bound."""
    n = G.number_of_nodes()
    if n > EXACT_MAX_VERTICES:
        raise GraphTooLarge(f"{n} vertices exceeds the exact search cap of {EXACT_MAX_VERTICES}")
    if n == 0:
        raise InvalidDecomposition("graph has no vertices")
    verts = sorted(G.nodes, key=_vertex_order(G).__getitem__)
    bit = {v: 1 << k for k, v in enumerate(verts)}
    edges = [(bit[a], bit[b]) for a, b in G.edges() if a != b]

    cut_memo: dict[int, int] = {}

    def cut(S):
        if S not in cut_memo:
            cut_memo[S] = sum(1 for a, b in edges if bool(S & a) != bool(S & b))
        return cut_memo[S]

    best: dict[int, tuple[int, int]] = {}  # mask -> (width, chosen left submask)

    def solve(S) -> int:
        if S in best:
            return best[S][0]
        if S & (S - 1) == 0:
            best[S] = (cut(S), 0)
            return best[S][0]
        floor = cut(S)
        low = S & -S
        rest = S ^ low
        top_w, top_a = None, 0
        sub = rest
        # enumerate submasks A of S containing the lowest bit, A != S
        while True:
            A = low | sub
            if A != S:
                B = S ^ A
                bound = max(floor, cut(A), cut(B))
                if top_w is None or bound < top_w:
                    w = max(floor, solve(A), solve(B))
                    if top_w is None or w < top_w:
                        top_w, top_a = w, A
                        if w == floor:
                            break
            if sub == 0:
                break
            sub = (sub - 1) & rest
        best[S] = (top_w, top_a)
        return top_w

    full = (1 << n) - 1
    width = solve(full)

    nxt = itertools.count()
    kids: dict[int, tuple[int, int]] = {}
    leaf_map: dict[int, Hashable] = {}

    def build(S) -> int:
        if S & (S - 1) == 0:
            leaf = next(nxt)
            leaf_map[leaf] = verts[S.bit_length() - 1]
            return leaf
        A = best[S][1]
        left, right = build(A), build(S ^ A)
        node = next(nxt)
        kids[node] = (left, right)
        return node

    root = build(full)
    return width, CarvingDecomposition(root, kids, leaf_map)


def exact_carving_width(G: nx.Graph) -> int:
    return exact_carving_decomposition(G)[0]


# JSON formats


def td_to_json(td: TreeDecomposition) -> dict:
    ids = {u: k + 1 for k, u in enumerate(sorted(td.bags, key=repr))}
    return {
        "type": "tree_decomposition",
        "width": td.width,
        "bags": [{"id": ids[u], "vertices": sorted(td.bags[u], key=repr)} for u in sorted(td.bags, key=repr)],
        "edges": sorted([sorted([ids[a], ids[b]]) for a, b in td.tree.edges()]),
    }


def td_from_json(d: Mapping) -> TreeDecomposition:
    T = nx.Graph()
    bags = {}
    for b in d["bags"]:
        bags[b["id"]] = frozenset(b["vertices"])
        T.add_node(b["id"])
    T.add_edges_from(tuple(e) for e in d["edges"])
    return TreeDecomposition(T, bags)


def cd_to_json(cd: CarvingDecomposition) -> dict:
    return {
        "type": "carving_decomposition",
        "root": cd.root,
        "children": [[u, l, r] for u, (l, r) in sorted(cd.children.items())],
        "leaves": [[u, v] for u, v in sorted(cd.leaf_map.items())],
    }


def cd_from_json(d: Mapping) -> CarvingDecomposition:
    children = {int(u): (int(l), int(r)) for u, l, r in d["children"]}
    leaf_map = {int(u): v for u, v in d["leaves"]}
    return CarvingDecomposition(int(d["root"]), children, leaf_map)


def decomposition_from_json(d: Mapping):
    kind = d.get("type")
    if kind == "tree_decomposition":
        return td_from_json(d)
    if kind == "carving_decomposition":
        return cd_from_json(d)
    raise ValueError(f"unknown decomposition type {kind!r}")


def dumps(obj) -> str:
    if isinstance(obj, TreeDecomposition):
        return json.dumps(td_to_json(obj), indent=1)
    return json.dumps(cd_to_json(obj), indent=1)
