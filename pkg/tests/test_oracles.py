import math

import numpy as np
import pytest

from rainbowsim.graphs import ColouredGraph, is_rainbow
from rainbowsim.models import RngStream, colour_uniform, sample_gnp
from rainbowsim.oracles import (TooLargeError, borel_pmf, enumerate_forests,
                                exact_max_rainbow_tree,
                                exact_min_deleted_component_expectation,
                                forest_count)


# ---------------------------------------------------------------------------
# forest enumeration

def test_forest_counts_match_closed_form():
    assert enumerate_forests(3, 1).count == 3
    assert enumerate_forests(5, 2).count == 50
    assert enumerate_forests(4, 4).count == 1
    for m in range(1, 7):
        for t in range(1, m + 1):
            assert enumerate_forests(m, t).count == forest_count(m, t)


def test_forest_encodings_distinct():
    res = enumerate_forests(5, 2)
    assert len(set(res.encodings)) == res.count


def test_forest_enumeration_guard():
    with pytest.raises(TooLargeError):
        enumerate_forests(9, 1)


# ---------------------------------------------------------------------------
# exact maximum rainbow tree

def test_max_rainbow_tree_triangle_with_repeat():
    g = ColouredGraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 2)], c=2)
    best = exact_max_rainbow_tree(g)
    assert len(best) == 2
    assert is_rainbow(g, best)


def test_max_rainbow_tree_rainbow_k4():
    g = ColouredGraph.from_edges(4, [(0, 1, 1), (0, 2, 2), (0, 3, 3),
                                     (1, 2, 4), (1, 3, 5), (2, 3, 6)], c=6)
    best = exact_max_rainbow_tree(g)
    assert len(best) == 3  # spanning tree, order 4


def test_max_rainbow_tree_disjoint_shared_colour():
    g = ColouredGraph.from_edges(4, [(0, 1, 5), (2, 3, 5)], c=5)
    best = exact_max_rainbow_tree(g)
    assert len(best) == 1


def test_max_rainbow_tree_guard():
    g = sample_gnp(10, 1.0, RngStream(1))
    g = colour_uniform(g, 45, RngStream(2))
    with pytest.raises(TooLargeError):
        exact_max_rainbow_tree(g)


def _tree_order(g, edge_ids):
    if len(edge_ids) == 0:
        return 1
    return len(np.unique(np.concatenate([g.u[edge_ids], g.v[edge_ids]])))


def test_max_rainbow_tree_maximality_and_structure():
    # rainbow + acyclic + connected, and no single-edge augmentation exists
    for seed in range(25):
        gen = RngStream(600 + seed).generator()
        g = colour_uniform(sample_gnp(7, 0.45, gen), 6, gen)
        best = exact_max_rainbow_tree(g)
        assert is_rainbow(g, best)
        chosen = set(best.tolist())
        if not chosen:
            continue
        verts = set(np.concatenate([g.u[best], g.v[best]]).tolist())
        assert len(best) == len(verts) - 1
        used = set(g.colour[best].tolist())
        for e in range(g.m):
            if e in chosen:
                continue
            a, b, col = int(g.u[e]), int(g.v[e]), int(g.colour[e])
            # an augmenting edge would attach a new vertex with a new colour
            if col not in used and ((a in verts) != (b in verts)):
                raise AssertionError("single-edge augmentation exists")


# ---------------------------------------------------------------------------
# exact split expectation

def test_min_split_expectation_small():
    assert exact_min_deleted_component_expectation(2) == 1.0
    assert exact_min_deleted_component_expectation(3) == 1.0
    # 12 path trees contribute splits (1,2,1); 4 stars contribute (1,1,1)
    assert exact_min_deleted_component_expectation(4) == pytest.approx(60 / 48)


def test_min_split_guard():
    with pytest.raises(TooLargeError):
        exact_min_deleted_component_expectation(8)


# ---------------------------------------------------------------------------
# Borel point masses

def test_borel_values():
    assert borel_pmf(1) == pytest.approx(math.exp(-1), abs=1e-12)
    assert borel_pmf(2) == pytest.approx(math.exp(-2), abs=1e-12)


def test_borel_partial_sum_near_one():
    ks = np.arange(1, 10 ** 6 + 1, dtype=np.float64)
    from scipy.special import gammaln
    log_terms = -ks + (ks - 1) * np.log(ks) - gammaln(ks + 1)
    total = float(np.exp(log_terms).sum())
    assert abs(total - 1.0) <= 1e-2


def test_borel_decreasing_and_bounded():
    prev = borel_pmf(2)
    for k in range(3, 50):
        cur = borel_pmf(k)
        assert 0.0 < cur < prev < 1.0
        prev = cur
