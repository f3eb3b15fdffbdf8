from __future__ import annotations

import numpy as np
import pytest

from graphpe.services.errors import InvalidArgumentError
from graphpe.services.graphs import (
    cartesian_product,
    complete_graph,
    cycle_graph,
    directed_path,
    empty_graph,
    graph_from_matrix,
    graph_from_spec,
    neighborhood_embedding,
    random_graph,
    star_graph,
    undirected_cycle,
)
from tests.utils.oracle import walk_average


def test_directed_path_shape():
    g = directed_path(5)
    assert g.num_vertices == 5
    assert g.num_arcs == 4
    dense = g.to_dense()
    assert all(dense[i, i + 1] == 1.0 for i in range(4))
    assert not g.is_symmetric()


def test_directed_path_single_vertex():
    g = directed_path(1)
    assert g.num_vertices == 1
    assert g.num_arcs == 0


@pytest.mark.parametrize("builder", [directed_path, complete_graph, empty_graph])
def test_zero_vertices_rejected(builder):
    with pytest.raises(InvalidArgumentError):
        builder(0)


def test_complete_graph_four_vertices():
    g = complete_graph(4)
    assert g.num_vertices == 4
    assert g.num_arcs == 12  # 6 undirected edges
    assert g.is_symmetric()
    assert np.all(np.diag(g.to_dense()) == 0)


def test_complete_graph_single_vertex():
    g = complete_graph(1)
    assert g.num_vertices == 1
    assert g.num_arcs == 0


def test_empty_graph():
    g = empty_graph(4)
    assert g.num_vertices == 4
    assert g.num_arcs == 0


def test_cycles_and_star():
    assert cycle_graph(4).num_arcs == 4
    assert undirected_cycle(5).num_arcs == 10
    assert undirected_cycle(5).is_symmetric()
    star = star_graph(5)
    assert star.num_arcs == 8
    assert star.to_dense()[0].tolist() == [0, 1, 1, 1, 1]
    with pytest.raises(InvalidArgumentError):
        undirected_cycle(2)


def test_random_graph_is_seeded_and_symmetric():
    a = random_graph(7, 0.5, seed=3)
    b = random_graph(7, 0.5, seed=3)
    assert np.array_equal(a.to_dense(), b.to_dense())
    assert a.is_symmetric()
    assert np.all(np.diag(a.to_dense()) == 0)
    with pytest.raises(InvalidArgumentError):
        random_graph(3, 1.5)


@pytest.mark.parametrize(
    "matrix, fragment",
    [
        ([[0, 1, 0], [1, 0, 1]], "square"),
        ([[0, -1], [1, 0]], "(0, 1)"),
        ([[0, 1], [1, 2]], "(1, 1)"),
        ([[0, float("nan")], [1, 0]], "(0, 1)"),
    ],
)
def test_graph_from_matrix_rejects(matrix, fragment):
    with pytest.raises(InvalidArgumentError) as exc:
        graph_from_matrix(np.array(matrix, dtype=float))
    assert fragment in str(exc.value)


def test_graph_from_matrix_keeps_weights():
    g = graph_from_matrix(np.array([[0, 2.5], [0.5, 0]]))
    assert g.total_weight == 3.0
    assert g.num_arcs == 2


def test_graph_from_spec():
    assert graph_from_spec("complete", 3).num_arcs == 6
    assert graph_from_spec("empty", 3).num_arcs == 0
    assert graph_from_spec("path", 3).num_arcs == 2
    with pytest.raises(InvalidArgumentError):
        graph_from_spec("wheel", 3)


def test_cartesian_product_counts():
    g, h = directed_path(6), complete_graph(3)
    prod = cartesian_product(g, h)
    assert prod.num_vertices == 18
    assert prod.total_weight == 3 * g.num_arcs + 6 * h.num_arcs


def test_cartesian_product_index_layout():
    prod = cartesian_product(directed_path(3), complete_graph(2)).to_dense()
    # (t, s) -> t * 2 + s
    assert prod[0, 2] == 1.0  # (0,0) -> (1,0)
    assert prod[0, 1] == 1.0  # (0,0) -> (0,1)
    assert prod[2, 0] == 0.0  # the path is directed
    assert prod[4, 5] == 1.0 and prod[5, 4] == 1.0


def test_embedding_on_directed_path_is_delay_embedding(rng):
    x = rng.random(12)
    emb = neighborhood_embedding(directed_path(12), x, m=3, L=2)
    assert emb.valid_count == 12 - 4
    for i in range(8):
        assert emb.values[i].tolist() == [x[i], x[i + 2], x[i + 4]]
    assert not emb.valid[8:].any()
    assert np.isnan(emb.values[8:, 1:]).all()
    assert emb.values[8:, 0].tolist() == x[8:].tolist()


@pytest.mark.parametrize(
    "kwargs",
    [{"m": 1, "L": 1}, {"m": 3, "L": 0}],
)
def test_embedding_rejects_bad_params(kwargs):
    with pytest.raises(InvalidArgumentError):
        neighborhood_embedding(complete_graph(3), np.zeros(3), **kwargs)


def test_embedding_rejects_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        neighborhood_embedding(complete_graph(3), np.zeros(4), m=2, L=1)


def test_embedding_matches_walk_enumeration(rng):
    graphs = [
        undirected_cycle(6),
        star_graph(5),
        complete_graph(4),
        random_graph(8, 0.4, seed=11, directed=True),
        graph_from_matrix(np.array([[0, 2.0, 0.5], [1.0, 0, 0], [0, 3.0, 0]])),
    ]
    for g in graphs:
        dense = g.to_dense()
        x = rng.normal(size=g.num_vertices)
        emb = neighborhood_embedding(g, x, m=3, L=2)
        for i in range(g.num_vertices):
            for k in (1, 2):
                expected = walk_average(dense, x, i, k * 2)
                if expected is None:
                    assert not emb.valid[i]
                elif emb.valid[i]:
                    assert emb.values[i, k] == pytest.approx(float(expected), abs=1e-12)


def test_sparse_and_dense_storage_agree(monkeypatch, rng):
    from graphpe.config import get_settings

    x = rng.random(40)
    sparse = directed_path(40)
    assert sparse.is_sparse
    monkeypatch.setenv("GRAPHPE_DENSE_THRESHOLD", "0")
    get_settings.cache_clear()
    dense = directed_path(40)
    assert not dense.is_sparse
    a = neighborhood_embedding(sparse, x, m=4, L=1)
    b = neighborhood_embedding(dense, x, m=4, L=1)
    assert np.array_equal(a.valid, b.valid)
    assert np.allclose(a.values, b.values, equal_nan=True)


def _weighted_digraph(rng, n, prob=0.5):
    weights = rng.uniform(0.5, 3.0, size=(n, n)) * (rng.random((n, n)) < prob)
    np.fill_diagonal(weights, 0.0)
    return graph_from_matrix(weights)


def test_cartesian_product_matches_pairwise_rule(rng):
    for n, p in [(1, 4), (3, 3), (5, 2), (7, 6), (10, 10)]:
        g, h = _weighted_digraph(rng, n), _weighted_digraph(rng, p)
        a_g, a_h = g.to_dense(), h.to_dense()
        prod = cartesian_product(g, h).to_dense()
        expected = np.zeros((n * p, n * p))
        for t in range(n):
            for s in range(p):
                for t2 in range(n):
                    for s2 in range(p):
                        if s == s2:
                            expected[t * p + s, t2 * p + s2] = a_g[t, t2]
                        elif t == t2:
                            expected[t * p + s, t2 * p + s2] = a_h[s, s2]
        assert np.array_equal(prod, expected)


def test_cartesian_product_is_symmetric_up_to_relabelling(rng):
    g, h = _weighted_digraph(rng, 4), _weighted_digraph(rng, 3)
    gh = cartesian_product(g, h).to_dense()
    hg = cartesian_product(h, g).to_dense()
    perm = np.zeros((12, 12))
    for t in range(4):
        for s in range(3):
            perm[t * 3 + s, s * 4 + t] = 1.0
    assert np.array_equal(gh, perm @ hg @ perm.T)


def test_path_times_empty_is_two_disjoint_paths():
    prod = cartesian_product(directed_path(3), empty_graph(2))
    assert prod.num_vertices == 6
    assert prod.num_arcs == 4
    dense = prod.to_dense()
    assert dense[0, 2] == dense[2, 4] == dense[1, 3] == dense[3, 5] == 1.0


def test_embedding_on_triangle():
    emb = neighborhood_embedding(complete_graph(3), np.array([1.0, 2.0, 3.0]), m=2, L=1)
    assert emb.values[:, 1].tolist() == [2.5, 2.0, 1.5]
    assert emb.valid.all()


@pytest.mark.parametrize("a, b", [(3.0, -1.0), (-2.5, 0.75), (-1.0, 0.0), (0.25, 100.0)])
def test_embedding_is_affine_equivariant(rng, a, b):
    for g in (random_graph(20, 0.2, seed=3), star_graph(7), directed_path(9)):
        x = rng.random(g.num_vertices)
        base = neighborhood_embedding(g, x, m=4, L=1)
        moved = neighborhood_embedding(g, a * x + b, m=4, L=1)
        assert np.array_equal(base.valid, moved.valid)
        np.testing.assert_allclose(
            moved.values, a * base.values + b, rtol=0, atol=1e-12, equal_nan=True
        )


def test_embedding_keeps_walks_with_tiny_weights():
    g = graph_from_matrix(np.array([[0.0, 1e-200], [1e-200, 0.0]]))
    emb = neighborhood_embedding(g, np.array([1.0, 2.0]), m=2, L=2)
    assert emb.valid.tolist() == [True, True]
    # a walk of length 2 returns to its start
    assert emb.values[:, 1].tolist() == [1.0, 2.0]


def test_embedding_survives_long_walks():
    emb = neighborhood_embedding(complete_graph(50), np.arange(50.0), m=4, L=61)
    assert emb.valid.all()
    assert np.isfinite(emb.values).all()
    # long walks on a complete graph forget the start and average to the mean
    np.testing.assert_allclose(emb.values[:, 1:], 24.5, rtol=1e-9)
