import logging
import math
import random
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from advrobust.complex import validate_filtration
from advrobust.errors import DomainError, MalformedInputError
from advrobust.homcut import robustness, robustness_by_matching
from advrobust.persistence import reduce
from advrobust.rips import (GradedBar, MetricData, certify_bars, exhaustive_removal_maximum,
                            graded_bars, hausdorff_heuristic, hausdorff_removal_distance,
                            rips_filtration)

LINE = MetricData.from_points([[0], [1], [10]])


def circle(n, r=1.0):
    return [(r * math.cos(2 * math.pi * i / n), r * math.sin(2 * math.pi * i / n)) for i in range(n)]


def longest_h1(f):
    return max((b for b in reduce(f).of_dim(1) if b.finite), key=lambda b: b.length)


def test_metric_validation():
    with pytest.raises(MalformedInputError):
        MetricData([[0, 1], [2, 0]])
    with pytest.raises(MalformedInputError):
        MetricData([[1, 0], [0, 1]])
    with pytest.raises(MalformedInputError):
        MetricData([[0, -1], [-1, 0]])
    with pytest.raises(MalformedInputError):
        MetricData([[0, 1]])
    with pytest.raises(MalformedInputError):
        MetricData([[0, 1], [1, 0]], order=[0, 0])


def test_triangle_inequality_violation_only_warns(caplog):
    with caplog.at_level(logging.WARNING):
        X = MetricData([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    assert "triangle" in caplog.text
    assert X.n == 3


def test_rips_filtration_examples():
    f = rips_filtration(MetricData([[0, 1], [1, 0]]), 1)
    assert f.order == ((0,), (1,), (0, 1)) and f.grades == (0, 0, 1)
    f = rips_filtration(MetricData([[0, 1, 1], [1, 0, 1], [1, 1, 0]]), 2)
    assert f.order == ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2))
    assert f.grades == (0, 0, 0, 1, 1, 1, 1)
    f = rips_filtration(MetricData.from_points([(0, 0), (1, 0), (1, 1), (0, 1)]), 1)
    assert f.grades[4:8] == (1, 1, 1, 1)
    assert f.grades[8:] == pytest.approx((math.sqrt(2), math.sqrt(2)))
    assert set(f.order[8:]) == {(0, 2), (1, 3)}


def test_rips_ties_follow_point_order():
    X = MetricData([[0, 1, 1], [1, 0, 1], [1, 1, 0]], order=[2, 0, 1])
    f = rips_filtration(X, 1)
    assert f.order[:3] == ((2,), (0,), (1,))
    assert f.order[3:] == ((0, 2), (1, 2), (0, 1))


def test_hausdorff_removal_examples():
    assert hausdorff_removal_distance(LINE, []) == 0
    assert hausdorff_removal_distance(LINE, [2]) == 9
    X = MetricData.from_points([[0], [1], [2], [3]])
    assert hausdorff_removal_distance(X, [1, 2]) == 1
    with pytest.raises(DomainError):
        hausdorff_removal_distance(LINE, [0, 1, 2])


def test_heuristic_examples():
    X = MetricData.from_points([[0], [1], [2], [3]])
    assert hausdorff_heuristic(X, 1).H == 1
    res = hausdorff_heuristic(LINE, 1)
    assert res.H == 9 and res.center == 2 and res.neighbours == (1,)
    assert res.witness == (2,) and res.witness_k_plus_1 == (1, 2)
    assert exhaustive_removal_maximum(LINE, 1) == 9
    rng = np.random.default_rng(3)
    P = rng.random((7, 2))
    X = MetricData.from_points(P)
    assert hausdorff_heuristic(X, 6).H == X.dist.max()
    with pytest.raises(DomainError):
        hausdorff_heuristic(LINE, 3)
    with pytest.raises(DomainError):
        hausdorff_heuristic(LINE, 0)


def test_heuristic_witness_attains_value():
    rng = np.random.default_rng(5)
    X = MetricData.from_points(rng.random((9, 2)))
    for k in (1, 2, 3):
        res = hausdorff_heuristic(X, k)
        assert len(res.witness) == k and len(res.witness_k_plus_1) == k + 1
        assert hausdorff_removal_distance(X, res.witness) == res.H


def test_certify_examples(caplog):
    f = rips_filtration(MetricData.from_points([[0], [1]]), 1)
    bar = reduce(f).find(0, 1)
    a = GradedBar(bar, 10.0)
    b = GradedBar(bar, 9.0)
    cert, unc = certify_bars([a, b], 9.0)
    assert cert == [a] and unc == [b]
    with caplog.at_level(logging.INFO):
        certify_bars([b], 9.0)
    assert "exactly" in caplog.text


def test_circle_bar_certified_and_survives_single_removals():
    X = MetricData.from_points(circle(12))
    f = rips_filtration(X, 2)
    bar = longest_h1(f)
    H = hausdorff_heuristic(X, 1).H
    cert, _ = certify_bars(graded_bars([bar]), H)
    assert cert
    robust, A = robustness_by_matching(f, bar, 0, 1)
    assert robust and A is None


def test_heuristic_is_weaker_than_exact_test():
    # a dense circle plus one far outlier: H is large, yet the circle's bar is robust
    X = MetricData.from_points(circle(12) + [(10.0, 0.0)])
    f = rips_filtration(X, 2)
    bar = longest_h1(f)
    H = hausdorff_heuristic(X, 1).H
    assert bar.length < H
    _, unc = certify_bars(graded_bars([bar]), H)
    assert unc
    assert robustness(f, bar, 0, 1).robust
    assert robustness_by_matching(f, bar, 0, 1)[0]


def test_rips_filtration_is_valid():
    rng = np.random.default_rng(1)
    f = rips_filtration(MetricData.from_points(rng.random((7, 2))), 2)
    assert validate_filtration(f) is None
    assert len(f) == 7 + 21 + 35


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 10), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_heuristic_equals_exhaustive_maximum(n, k, seed):
    if k >= n:
        return
    rng = np.random.default_rng(seed)
    X = MetricData.from_points(rng.integers(0, 6, size=(n, 2)) + rng.random((n, 2)) * 0.01)
    assert hausdorff_heuristic(X, k).H == exhaustive_removal_maximum(X, k)


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 7), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_certified_bars_survive_every_removal(n, k, seed):
    if k >= n:
        return
    rng = np.random.default_rng(seed)
    X = MetricData.from_points(rng.random((n, 2)))
    f = rips_filtration(X, 2)
    H = hausdorff_heuristic(X, k).H
    finite = [b for b in reduce(f) if b.finite]
    cert, _ = certify_bars(graded_bars(finite), H)
    for gb in cert:
        assert robustness_by_matching(f, gb.bar, 0, k)[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 2**32 - 1))
def test_rips_is_permutation_invariant(n, seed):
    rng = np.random.default_rng(seed)
    P = rng.integers(0, 4, size=(n, 2)).astype(float)
    P += np.arange(n)[:, None] * 1e-3
    perm = rng.permutation(n)
    inv = np.argsort(perm)
    X = MetricData.from_points(P)
    Y = MetricData.from_points(P[perm], order=[int(inv[i]) for i in range(n)])
    f, g = rips_filtration(X, 2), rips_filtration(Y, 2)
    relabel = [tuple(sorted(int(perm[v]) for v in s)) for s in g.order]
    assert relabel == list(f.order)
    assert g.grades == pytest.approx(f.grades)
