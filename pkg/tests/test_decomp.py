import copy
import json
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from algtn import decomp as dc
from algtn import generators as gen
from conftest import fig1_style_circuit
from helpers import all_carving_trees, brute_carving_width, nested_to_cd


def multigraph(edges, nodes=()):
    G = nx.MultiGraph()
    G.add_nodes_from(nodes)
    G.add_edges_from(edges)
    return G


K2 = multigraph([(0, 1)])
P3 = multigraph([(0, 1), (1, 2)])
STAR = multigraph([(0, 1), (0, 2), (0, 3)])
C5 = multigraph([(i, (i + 1) % 5) for i in range(5)])
K4 = multigraph([(a, b) for a in range(4) for b in range(a + 1, 4)])
SINGLE = multigraph([], [0])


def grid(n):
    return nx.MultiGraph(nx.convert_node_labels_to_integers(nx.grid_2d_graph(n, n)))


def td_of(bags, edges):
    T = nx.Graph()
    T.add_nodes_from(bags)
    T.add_edges_from(edges)
    return dc.TreeDecomposition(T, {u: frozenset(b) for u, b in bags.items()})


def test_tree_decomposition_examples():
    td = td_of({0: {0, 1}}, [])
    assert dc.validate_tree_decomposition(K2, td) == []
    assert td.width == 1
    missing = td_of({0: {0, 1}, 1: {2}}, [(0, 1)])
    assert any("edge" in p for p in dc.validate_tree_decomposition(P3, missing))


def test_fig1_style_width_two():
    G = fig1_style_circuit().graph()
    td = dc.heuristic_tree_decomposition(G)
    assert dc.validate_tree_decomposition(G, td) == []
    assert td.width == 2


def test_td_mutations_rejected():
    G = grid(3)
    td = dc.heuristic_tree_decomposition(G)
    assert dc.validate_tree_decomposition(G, td) == []
    for u, bag in td.bags.items():
        for v in bag:
            bags = dict(td.bags)
            bags[u] = bag - {v}
            mutated = dc.TreeDecomposition(td.tree, bags)
            # dropping a vertex either uncovers it or an edge, or breaks nothing if redundant
            problems = dc.validate_tree_decomposition(G, mutated)
            still_ok = all(any(a in b and c in b for b in bags.values()) for a, c in G.edges()) and all(
                any(x in b for b in bags.values()) for x in G.nodes
            ) and all(nx.is_connected(td.tree.subgraph([w for w, b in bags.items() if x in b])) for x in G.nodes)
            assert (problems == []) == still_ok


def test_td_structural_mutations():
    P4 = multigraph([(0, 1), (1, 2), (2, 3)])
    good = {0: {0, 1}, 1: {1, 2}, 2: {2, 3}}
    assert dc.validate_tree_decomposition(P4, td_of(good, [(0, 1), (1, 2)])) == []
    cyclic = td_of(good, [(0, 1), (1, 2), (2, 0)])
    assert dc.validate_tree_decomposition(P4, cyclic) == ["decomposition tree is not a tree"]
    split = td_of({**good, 2: {0, 2, 3}}, [(0, 1), (1, 2)])
    assert dc.validate_tree_decomposition(P4, split) == ["bags containing 0 do not form a connected subtree"]
    stray = td_of({**good, 2: {2, 3, 9}}, [(0, 1), (1, 2)])
    assert dc.validate_tree_decomposition(P4, stray)


def test_cd_mutations_rejected():
    cd = dc.carving_decomposition(C5)
    assert dc.validate_carving_decomposition(C5, cd) == []
    leaves = cd.leaves()
    lm = dict(cd.leaf_map)
    lm[leaves[0]] = lm[leaves[1]]
    assert dc.validate_carving_decomposition(C5, dc.CarvingDecomposition(cd.root, cd.children, lm))
    lm = dict(cd.leaf_map)
    lm[leaves[0]] = 99
    assert dc.validate_carving_decomposition(C5, dc.CarvingDecomposition(cd.root, cd.children, lm))
    kids = copy.deepcopy(cd.children)
    u = next(iter(kids))
    kids[u] = (kids[u][0], kids[u][0])
    assert dc.validate_carving_decomposition(C5, dc.CarvingDecomposition(cd.root, kids, cd.leaf_map))
    kids = dict(cd.children)
    kids[cd.root] = (kids[cd.root][0],)
    assert dc.validate_carving_decomposition(C5, dc.CarvingDecomposition(cd.root, kids, cd.leaf_map))
    lm = dict(cd.leaf_map)
    del lm[leaves[0]]
    assert dc.validate_carving_decomposition(C5, dc.CarvingDecomposition(cd.root, cd.children, lm))
    with pytest.raises(dc.InvalidDecomposition):
        dc.carving_width(C5, dc.CarvingDecomposition(cd.root, cd.children, lm))


def test_carving_width_examples():
    for t in all_carving_trees([0, 1, 2, 3]):
        assert dc.carving_width(STAR, nested_to_cd(t)) == 3
    assert brute_carving_width(P3) == 2
    assert dc.carving_width(SINGLE, dc.carving_decomposition(SINGLE)) == 0


def test_enumeration_count():
    # (2n-3)!! rooted binary trees on n labelled leaves
    assert sum(1 for _ in all_carving_trees(range(5))) == 105


def test_heuristic_td_examples():
    tree = multigraph([(0, 1), (1, 2), (1, 3), (3, 4)])
    assert dc.heuristic_tree_decomposition(tree).width == 1
    assert dc.heuristic_tree_decomposition(nx.MultiGraph(C5)).width == 2
    assert dc.heuristic_tree_decomposition(K4).width == 3
    # deterministic
    G = grid(4)
    a, b = dc.heuristic_tree_decomposition(G), dc.heuristic_tree_decomposition(G)
    assert a.bags == b.bags and sorted(a.tree.edges()) == sorted(b.tree.edges())


def test_conversion_examples():
    tree = multigraph([(0, 1), (0, 2), (0, 3), (1, 4)])
    td = dc.heuristic_tree_decomposition(tree)
    cd = dc.carving_from_tree_decomposition(tree, td)
    assert td.width == 1 and dc.max_degree(tree) == 3
    assert dc.validate_carving_decomposition(tree, cd) == []
    assert dc.carving_width(tree, cd) <= 6
    assert dc.carving_width(tree, cd) >= dc.exact_carving_width(tree)
    assert dc.carving_width(K2, dc.carving_decomposition(K2)) == 1
    G = grid(3)
    td = dc.heuristic_tree_decomposition(G)
    cd = dc.carving_from_tree_decomposition(G, td)
    assert dc.carving_width(G, cd) <= dc.C_CONV * dc.max_degree(G) * (td.width + 1)


def test_conversion_rejects_invalid_td():
    with pytest.raises(dc.InvalidDecomposition):
        dc.carving_from_tree_decomposition(P3, td_of({0: {0, 1}}, []))


def test_exact_examples():
    assert dc.exact_carving_width(STAR) == 3
    assert dc.exact_carving_width(P3) == 2
    assert dc.exact_carving_width(K2) == 1
    assert dc.exact_carving_width(SINGLE) == 0
    with pytest.raises(dc.GraphTooLarge):
        dc.exact_carving_width(grid(4))


def test_exact_matches_enumeration():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 6)
        G = gen.random_multigraph(rng, n, 4)
        w, cd = dc.exact_carving_decomposition(G)
        assert dc.validate_carving_decomposition(G, cd) == []
        assert dc.carving_width(G, cd) == w
        assert w == brute_carving_width(G)


def test_json_roundtrip():
    G = grid(3)
    td = dc.heuristic_tree_decomposition(G)
    cd = dc.carving_from_tree_decomposition(G, td)
    td2 = dc.decomposition_from_json(json.loads(dc.dumps(td)))
    assert dc.validate_tree_decomposition(G, td2) == [] and td2.width == td.width
    cd2 = dc.decomposition_from_json(json.loads(dc.dumps(cd)))
    assert cd2.root == cd.root and cd2.children == cd.children and cd2.leaf_map == cd.leaf_map


@given(st.integers(0, 2**32 - 1))
def test_conversion_bound_random(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 30)
    G = gen.random_multigraph(rng, n, rng.randint(2, 5)) if seed % 2 else gen.random_simple_graph(rng, n)
    td = dc.heuristic_tree_decomposition(G)
    assert dc.validate_tree_decomposition(G, td) == []
    cd = dc.carving_from_tree_decomposition(G, td)
    assert dc.validate_carving_decomposition(G, cd) == []
    w = dc.carving_width(G, cd)
    assert w <= dc.C_CONV * dc.max_degree(G) * (td.width + 1)
    if n <= 7:
        assert dc.exact_carving_width(G) <= w
