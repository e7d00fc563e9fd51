import json
import random
from itertools import permutations
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permgf.funceq import TriPoly
from permgf.oracle import (
    AVOID132,
    ONE132,
    JointTable,
    PatternStats,
    avoiders,
    batch_stats,
    check_decomposition,
    check_functional_equation,
    count_patterns,
    count_patterns_reference,
    joint_distribution,
    weight_poly,
)


def catalan(n):
    return comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("pi,expected", [
    ([1, 2, 3], (3, 1, 0)),
    ([1, 3, 2], (2, 0, 1)),
    ([2, 4, 1, 3], (3, 0, 1)),
    ([], (0, 0, 0)),
])
def test_count_examples(pi, expected):
    stats = PatternStats(len(pi), *expected)
    assert count_patterns(pi) == stats
    assert count_patterns_reference(pi) == stats


def test_count_rejects_non_permutation():
    with pytest.raises(ValueError):
        count_patterns([1, 1, 2])
    with pytest.raises(ValueError):
        count_patterns_reference([0, 1])


def test_counters_agree_on_random_permutations():
    rng = random.Random(20261015)
    for _ in range(10_000):
        pi = list(range(1, rng.randint(0, 50) + 1))
        rng.shuffle(pi)
        assert count_patterns(pi) == count_patterns_reference(pi)


@given(st.permutations(list(range(1, 13))))
@settings(max_examples=200)
def test_stats_bounds(pi):
    s = count_patterns(pi)
    n = len(pi)
    assert 0 <= s.c12 <= comb(n, 2)
    assert s.c123 + s.c132 <= comb(n, 3)


@pytest.mark.parametrize("n", range(7))
def test_batch_counter_matches_reference(n):
    perms = list(permutations(range(1, n + 1)))
    arr = np.array(perms, dtype=np.int8).reshape(len(perms), n)
    c12, c123, c132 = batch_stats(arr)
    for i, pi in enumerate(perms):
        ref = count_patterns_reference(pi)
        assert (c12[i], c123[i], c132[i]) == (ref.c12, ref.c123, ref.c132)


def test_joint_n3():
    assert joint_distribution(3).counts == {(0, 0): 4, (1, 0): 1, (0, 1): 1}


def test_joint_n1_and_n0():
    assert joint_distribution(1).counts == {(0, 0): 1}
    assert joint_distribution(0).counts == {(0, 0): 1}


def test_joint_n4():
    jt = joint_distribution(4)
    assert jt[0, 0] == 8 and jt[1, 0] == 4 and jt[0, 1] == 4
    assert jt.total() == 24


@pytest.mark.parametrize("n", range(10))
def test_joint_sums(n):
    jt = joint_distribution(n)
    assert jt.total() == factorial(n)
    assert jt.marginal_s(0) == catalan(n)


@pytest.mark.parametrize("n", [5, 7])
def test_joint_independent_of_enumeration_order(n):
    counts = {}
    # reverse lexicographic, per-permutation counter
    for pi in reversed(list(permutations(range(1, n + 1)))):
        s = count_patterns(pi)
        counts[s.c123, s.c132] = counts.get((s.c123, s.c132), 0) + 1
    assert counts == joint_distribution(n).counts


def test_joint_independent_of_worker_count():
    assert joint_distribution(7, workers=3).counts == joint_distribution(7, workers=1).counts


def test_joint_guard():
    with pytest.raises(ValueError):
        joint_distribution(10)
    with pytest.raises(ValueError):
        joint_distribution(-1)


def test_joint_json_and_tsv():
    jt = joint_distribution(3)
    obj = json.loads(jt.dumps())
    assert obj == {"n": 3, "counts": [
        {"r": 0, "s": 0, "count": 4},
        {"r": 0, "s": 1, "count": 1},
        {"r": 1, "s": 0, "count": 1},
    ]}
    assert JointTable.from_json(obj) == jt
    assert jt.to_tsv() == "r\ts\tcount\n0\t0\t4\n0\t1\t1\n1\t0\t1\n"


def tp(d):
    return TriPoly({(i, 0, k): c for (i, k), c in d.items()})


def test_weight_examples():
    assert weight_poly(2, AVOID132).poly == tp({(0, 0): 1, (0, 1): 1})
    assert weight_poly(3, AVOID132).poly == tp({(1, 3): 1, (0, 2): 1, (0, 1): 2, (0, 0): 1})
    assert weight_poly(3, ONE132).poly == tp({(0, 2): 1})


@pytest.mark.parametrize("n", range(1, 10))
def test_weight_evaluations(n):
    w = weight_poly(n, AVOID132)
    assert w.evaluate(1, 1) == catalan(n)
    assert w.evaluate(0, 1) == 2 ** (n - 1)
    assert weight_poly(n, ONE132).evaluate(1, 1) == joint_distribution(n).marginal_s(1)


def test_functional_equation_report():
    report = check_functional_equation(8)
    assert report.passed
    assert len(report.results) == 2 * 9
    assert [r.n for r in report.results if r.name == "P-equation"] == list(range(9))


def test_decomposition_examples():
    from permgf.oracle import _decompose_one

    assert _decompose_one([2, 3, 4, 1]).passed
    assert _decompose_one([1]).passed
    report = check_decomposition(5)
    assert report.passed and len(report.results) == 42


def test_decomposition_catches_non_avoider():
    from permgf.oracle import _decompose_one

    # 1 3 2 contains a 132; its left part {1} is not the top value set
    assert not _decompose_one([1, 3, 2]).passed


def test_avoiders_match_brute_filter():
    for n in range(7):
        brute = [p for p in permutations(range(1, n + 1)) if count_patterns_reference(p).c132 == 0]
        assert avoiders(n) == brute
