"""Brute-force ground truth by enumerating permutations.

Nothing here depends on the solver: pattern counts come straight from the
definitions, and the functional equations are checked as polynomial
identities between the enumerated weight polynomials.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .funceq import TriPoly

DEFAULT_MAX_N = 9
HARD_MAX_N = 11

AVOID132 = "AVOID132"
ONE132 = "ONE132"


class PatternStats(NamedTuple):
    n: int
    c12: int
    c123: int
    c132: int


def _check_perm(pi: Sequence[int]) -> list[int]:
    pi = list(pi)
    if sorted(pi) != list(range(1, len(pi) + 1)):
        raise ValueError(f"{pi!r} is not a permutation of 1..{len(pi)}")
    return pi


def count_patterns_reference(pi: Sequence[int]) -> PatternStats:
    """Direct scan over all position pairs and triples."""
    pi = _check_perm(pi)
    c12 = sum(1 for a, b in combinations(pi, 2) if a < b)
    c123 = c132 = 0
    for a, b, c in combinations(pi, 3):
        if a < b < c:
            c123 += 1
        elif a < c < b:
            c132 += 1
    return PatternStats(len(pi), c12, c123, c132)


def count_patterns(pi: Sequence[int]) -> PatternStats:
    """Quadratic counter.

    c123 sums (smaller before) * (larger after) over middle positions.  For
    c132, each pair j < k with pi[k] < pi[j] contributes the number of
    earlier positions i < j holding a value below pi[k].
    """
    pi = _check_perm(pi)
    n = len(pi)
    smaller_before = [0] * n
    larger_after = [0] * n
    for j in range(n):
        v = pi[j]
        smaller_before[j] = sum(1 for i in range(j) if pi[i] < v)
        larger_after[j] = sum(1 for k in range(j + 1, n) if pi[k] > v)
    c12 = sum(smaller_before)
    c123 = sum(a * b for a, b in zip(smaller_before, larger_after))
    c132 = 0
    for k in range(n):
        v = pi[k]
        below = 0  # positions i < j with pi[i] < v, as j sweeps left to right
        for j in range(k):
            if pi[j] > v:
                c132 += below
            elif pi[j] < v:
                below += 1
    return PatternStats(n, c12, c123, c132)


# -- batch enumeration -------------------------------------------------------


@lru_cache(maxsize=None)
def _perm_indices(m: int) -> np.ndarray:
    """All permutations of range(m) in lexicographic order, one per row."""
    if m == 0:
        return np.zeros((1, 0), dtype=np.int8)
    sub = _perm_indices(m - 1)
    blocks = []
    for first in range(m):
        rest = np.array([v for v in range(m) if v != first], dtype=np.int8)
        head = np.full((sub.shape[0], 1), first, dtype=np.int8)
        blocks.append(np.hstack([head, rest[sub]]))
    return np.vstack(blocks)


def _perms_with_prefix(n: int, prefix: tuple[int, ...]) -> np.ndarray:
    rest = np.array([v for v in range(1, n + 1) if v not in prefix], dtype=np.int8)
    body = rest[_perm_indices(len(rest))]
    head = np.broadcast_to(np.array(prefix, dtype=np.int8), (body.shape[0], len(prefix)))
    return np.hstack([head, body])


def batch_stats(perms: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(c12, c123, c132) for every row of ``perms``, vectorized over rows."""
    rows, n = perms.shape
    c12 = np.zeros(rows, dtype=np.int64)
    c123 = np.zeros(rows, dtype=np.int64)
    c132 = np.zeros(rows, dtype=np.int64)
    if n < 2:
        return c12, c123, c132
    cols = [perms[:, i] for i in range(n)]
    less = {(i, j): cols[i] < cols[j] for i in range(n) for j in range(n) if i != j}
    smaller_before = [sum((less[i, j] for i in range(j)), np.zeros(rows, np.int64)) for j in range(n)]
    larger_after = [sum((less[j, k] for k in range(j + 1, n)), np.zeros(rows, np.int64)) for j in range(n)]
    for j in range(n):
        c12 += smaller_before[j]
        c123 += smaller_before[j] * larger_after[j]
    for k in range(n):
        below = np.zeros(rows, dtype=np.int64)
        for j in range(k):
            c132 += less[k, j] * below
            below += less[j, k]
    return c12, c123, c132


def _prefixes(n: int) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    if n <= 9:
        return [(a,) for a in range(1, n + 1)]
    return [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a != b]


def _joint_chunk(args: tuple[int, tuple[int, ...]]) -> dict[tuple[int, int], int]:
    n, prefix = args
    _, c123, c132 = batch_stats(_perms_with_prefix(n, prefix))
    keys, counts = np.unique(np.stack([c123, c132], axis=1), axis=0, return_counts=True)
    return {(int(r), int(s)): int(c) for (r, s), c in zip(keys, counts)}


def _weight_chunk(args: tuple[int, tuple[int, ...], int]) -> dict[tuple[int, int], int]:
    n, prefix, s = args
    c12, c123, c132 = batch_stats(_perms_with_prefix(n, prefix))
    sel = c132 == s
    if not sel.any():
        return {}
    keys, counts = np.unique(np.stack([c123[sel], c12[sel]], axis=1), axis=0, return_counts=True)
    return {(int(a), int(b)): int(c) for (a, b), c in zip(keys, counts)}


def _fan_out(func, tasks: list, workers: int) -> list[dict]:
    if workers <= 1 or len(tasks) == 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))


def _merge(parts: Iterable[dict]) -> dict:
    out: dict = {}
    for part in parts:
        for k, v in part.items():
            out[k] = out.get(k, 0) + v
    return out


def _check_n(n: int, max_n: int) -> None:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > max_n:
        raise ValueError(f"n = {n} exceeds the configured maximum {max_n} ({factorial(n)} permutations)")


@dataclass
class JointTable:
    """(r = #123, s = #132) -> number of permutations of length n."""

    n: int
    counts: dict[tuple[int, int], int]

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.counts.get(key, 0)

    def total(self) -> int:
        return sum(self.counts.values())

    def marginal_s(self, s: int) -> int:
        return sum(c for (_, ss), c in self.counts.items() if ss == s)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "counts": [{"r": r, "s": s, "count": c} for (r, s), c in sorted(self.counts.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "JointTable":
        return cls(obj["n"], {(e["r"], e["s"]): e["count"] for e in obj["counts"]})

    def to_tsv(self) -> str:
        lines = ["r\ts\tcount"]
        lines += [f"{r}\t{s}\t{c}" for (r, s), c in sorted(self.counts.items())]
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def joint_distribution(n: int, workers: int = 1, max_n: int = DEFAULT_MAX_N) -> JointTable:
    """Exact (#123, #132) distribution over all n! permutations of length n."""
    _check_n(n, max_n)
    return JointTable(n, _joint_distribution(n, workers))


@lru_cache(maxsize=None)
def _joint_cached(n: int) -> tuple:
    return tuple(sorted(_merge(_fan_out(_joint_chunk, [(n, p) for p in _prefixes(n)], 1)).items()))


def _joint_distribution(n: int, workers: int) -> dict:
    if workers <= 1:
        return dict(_joint_cached(n))
    return _merge(_fan_out(_joint_chunk, [(n, p) for p in _prefixes(n)], workers))


@dataclass
class WeightPoly:
    """Sum of q^#123 * t^#12 over a class of permutations of length n."""

    n: int
    poly: TriPoly
    cls: str = AVOID132

    def evaluate(self, q, t):
        return sum(c * q**i * t**k for (i, _, k), c in self.poly.terms.items())


@lru_cache(maxsize=None)
def _weight_cached(n: int, s: int) -> TriPoly:
    counts = _merge(_fan_out(_weight_chunk, [(n, p, s) for p in _prefixes(n)], 1))
    return TriPoly({(a, 0, b): c for (a, b), c in counts.items()})


def weight_poly(n: int, cls: str = AVOID132, max_n: int = DEFAULT_MAX_N) -> WeightPoly:
    _check_n(n, max_n)
    if cls not in (AVOID132, ONE132):
        raise ValueError(f"unknown class {cls!r}")
    return WeightPoly(n, _weight_cached(n, 0 if cls == AVOID132 else 1), cls)


# -- identity checks ---------------------------------------------------------


def _t_to_qt(p: TriPoly) -> TriPoly:
    out: dict = {}
    for (i, j, k), c in p.terms.items():
        out[(i + k, j, k)] = out.get((i + k, j, k), 0) + c
    return TriPoly(out)


def _t_power(k: int) -> TriPoly:
    return TriPoly({(0, 0, k): 1})


@dataclass
class CheckResult:
    name: str
    n: int
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "n": self.n, "passed": self.passed, "detail": self.detail}


@dataclass
class Report:
    title: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {"title": self.title, "passed": self.passed,
                "results": [r.to_json() for r in self.results]}

    def lines(self) -> list[str]:
        return [f"[{'PASS' if r.passed else 'FAIL'}] {r.name} n={r.n}"
                + (f" ({r.detail})" if r.detail else "") for r in self.results]


def check_functional_equation(N: int, max_n: int = DEFAULT_MAX_N) -> Report:
    """Coefficient-wise check of both functional equations for n <= N.

    With W_n the weight polynomial of length n:
      P:  W^P_n = sum_{a+b=n-1} t^a W^P_a(q, qt) W^P_b(q, t)
      Q:  W^Q_n = sum_{a+b=n-1} t^a [W^P_a(q,qt) W^Q_b + W^Q_a(q,qt) W^P_b]
                  + t^2 sum_{a+b=n-2, b>=1} t^a W^P_a(q,qt) W^P_b
    """
    _check_n(N, max_n)
    WP = [weight_poly(n, AVOID132, max_n).poly for n in range(N + 1)]
    WQ = [weight_poly(n, ONE132, max_n).poly for n in range(N + 1)]
    WPi = [_t_to_qt(w) * _t_power(a) for a, w in enumerate(WP)]
    WQi = [_t_to_qt(w) * _t_power(a) for a, w in enumerate(WQ)]
    report = Report("functional equations")
    for n in range(N + 1):
        rhs = TriPoly({(0, 0, 0): 1}) if n == 0 else TriPoly()
        for a in range(n):
            rhs = rhs + WPi[a] * WP[n - 1 - a]
        ok = rhs == WP[n]
        report.results.append(CheckResult("P-equation", n, ok, "" if ok else f"{WP[n]} != {rhs}"))

        rhs = TriPoly()
        for a in range(n):
            b = n - 1 - a
            rhs = rhs + WPi[a] * WQ[b] + WQi[a] * WP[b]
        for a in range(n - 2):
            b = n - 2 - a
            rhs = rhs + _t_power(2) * WPi[a] * WP[b]
        ok = rhs == WQ[n]
        report.results.append(CheckResult("Q-equation", n, ok, "" if ok else f"{WQ[n]} != {rhs}"))
    return report


def avoiders(n: int) -> list[tuple[int, ...]]:
    """All 132-avoiding permutations of length n, in lexicographic order."""
    out = []
    for prefix in _prefixes(n):
        perms = _perms_with_prefix(n, prefix)
        keep = batch_stats(perms)[2] == 0
        out.extend(tuple(int(v) for v in row) for row in perms[keep])
    return out


def _standardize(seq: Sequence[int]) -> list[int]:
    rank = {v: i + 1 for i, v in enumerate(sorted(seq))}
    return [rank[v] for v in seq]


def check_decomposition(n: int, max_n: int = DEFAULT_MAX_N) -> Report:
    """Split each 132-avoider at its maximum and check the count identities
    plus the claim that the left part holds exactly the top k-1 values."""
    _check_n(n, max_n)
    if n < 1:
        raise ValueError("n must be at least 1")
    report = Report(f"decomposition n={n}")
    for pi in avoiders(n):
        report.results.append(_decompose_one(pi))
    return report


def _decompose_one(pi: Sequence[int]) -> CheckResult:
    n = len(pi)
    k = list(pi).index(n) + 1
    left, right = list(pi[: k - 1]), list(pi[k:])
    whole = count_patterns_reference(pi)
    s1 = count_patterns_reference(_standardize(left))
    s2 = count_patterns_reference(_standardize(right))
    problems = []
    if whole.c123 != s1.c123 + s2.c123 + s1.c12:
        problems.append("#123")
    if whole.c12 != s1.c12 + s2.c12 + len(left):
        problems.append("#12")
    if set(left) != set(range(n - k + 1, n)):
        problems.append("left values")
    if set(right) != set(range(1, n - k + 1)):
        problems.append("right values")
    if s1.c132 or s2.c132:
        problems.append("parts not 132-avoiding")
    return CheckResult(f"split {list(pi)}", n, not problems, ", ".join(problems))
