import itertools
import math
import random

import pytest

from dcmzk.dcm import dcm_decide, dcm_factorize
from dcmzk.errors import ParseError, SizeMismatch
from dcmzk.gi import (
    CANONICAL_NO,
    Graph,
    all_graphs,
    conjugation_group_generators,
    cross_map,
    edge_points,
    edge_set_stabilizer_generators,
    format_graph,
    isomorphic_bruteforce,
    parse_graph,
    reduce_gi,
    square_point_index,
)
from dcmzk.permgroup import schreier_sims

TRIANGLE = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def test_square_index():
    assert square_point_index(0, 0, 5) == 0
    assert square_point_index(4, 4, 5) == 24
    assert square_point_index(1, 2, 4) == 6
    with pytest.raises(ValueError):
        square_point_index(4, 0, 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_conjugation_group(n):
    gs = conjugation_group_generators(n)
    assert len(gs.generators) == math.comb(n, 2)
    assert gs.degree == n * n
    assert all((g * g).is_identity() for g in gs.generators)
    assert schreier_sims(gs).order == math.factorial(n)


@pytest.mark.parametrize(
    "points,degree,order",
    [((), 4, 24), ((0, 1, 2, 3), 4, 24), ((0, 3), 4, 4), ((1, 2, 5), 7, 6 * 24), ((0,), 5, 24)],
)
def test_stabilizer_order(points, degree, order):
    gs = edge_set_stabilizer_generators(points, degree)
    b = schreier_sims(gs)
    assert b.order == order
    for g in gs.generators:
        assert {g(x) for x in points} == set(points)


def test_cross_map():
    assert cross_map({0, 2}, {0, 2}, 4).is_identity()
    assert cross_map({0}, {1}, 2).images == (1, 0)
    rng = random.Random(3)
    for _ in range(50):
        d = rng.randint(1, 12)
        k = rng.randint(0, d)
        a, b = set(rng.sample(range(d), k)), set(rng.sample(range(d), k))
        s = cross_map(a, b, d)
        assert {s(x) for x in a} == b
    with pytest.raises(SizeMismatch):
        cross_map({0}, {0, 1}, 3)


def test_small_examples():
    assert dcm_decide(reduce_gi(TRIANGLE, TRIANGLE))
    assert not isomorphic_bruteforce(TRIANGLE, PATH3)
    assert reduce_gi(TRIANGLE, PATH3) == CANONICAL_NO
    assert not dcm_decide(CANONICAL_NO)
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    path = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    inst = reduce_gi(star, path)
    assert inst.degree == 16 and not dcm_decide(inst)


def test_exhaustive_small_and_witness_maps_edges():
    for n in (1, 2, 3):
        graphs = all_graphs(n)
        for a, b in itertools.product(graphs, repeat=2):
            inst = reduce_gi(a, b)
            yes = dcm_decide(inst)
            assert yes == isomorphic_bruteforce(a, b)
            if yes:
                assert inst.degree == n * n
                f = dcm_factorize(inst)
                assert {f.g0(x) for x in edge_points(a)} == edge_points(b)


def test_different_vertex_counts():
    assert reduce_gi(Graph.from_edges(2, []), Graph.from_edges(3, [])) == CANONICAL_NO


def test_graph_validation_and_files():
    with pytest.raises(ValueError):
        Graph(2, ((False, True), (False, False)))
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])
    g = parse_graph("n 4\n1 2\n2 3\n# comment\n3 4\n")
    assert g.edges() == [(0, 1), (1, 2), (2, 3)]
    assert parse_graph(format_graph(g)) == g
    for bad in ["", "n x\n", "n 3\n1 1\n", "n 3\n1 4\n", "n 3\n1 2 3\n"]:
        with pytest.raises(ParseError):
            parse_graph(bad)
