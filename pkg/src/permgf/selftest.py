"""Quick invariant checks runnable from the command line (``permgf selftest``)."""

from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial
from typing import Callable

from .exact import ONE, Poly, RatFun, ratfun_equal, series_expand
from .funceq import INNER, OUTER, POINTS, all_derivatives, build_equations, differentiate, specialize
from .known import PUBLISHED, published
from .oracle import count_patterns, count_patterns_reference, joint_distribution
from .solver import back_substitution_failures, extract_gf, solve_system


def random_ratfun(rng: random.Random, max_deg: int = 3) -> RatFun:
    def poly():
        return Poly(Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rng.randint(1, max_deg + 1)))

    den = poly()
    while not den:
        den = poly()
    return RatFun(poly(), den)


def check_field_axioms(seed: int = 0, rounds: int = 50) -> bool:
    rng = random.Random(seed)
    for _ in range(rounds):
        f, g, h = (random_ratfun(rng) for _ in range(3))
        if not ratfun_equal((f + g) + h, f + (g + h)):
            return False
        if not ratfun_equal(f * (g + h), f * g + f * h):
            return False
        if f and not ratfun_equal(f * f.inverse(), ONE):
            return False
        for v in (f + g, f * g, f - h):
            if not v.is_normalized():
                return False
    return True


def check_series_product(seed: int = 1, rounds: int = 30, N: int = 8) -> bool:
    rng = random.Random(seed)
    done = 0
    while done < rounds:
        f, g = random_ratfun(rng), random_ratfun(rng)
        if not f.den[0] or not g.den[0]:
            continue
        a, b = series_expand(f, N), series_expand(g, N)
        conv = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N + 1)]
        if series_expand(f * g, N) != conv:
            return False
        done += 1
    return True


def check_derivatives_commute(order: int = 2) -> bool:
    for e in build_equations():
        ders = all_derivatives(e, order)
        for m, d in ders.items():
            if sum(m) == order:
                continue
            for u in range(3):
                for v in range(u + 1, 3):
                    if differentiate(differentiate(d, u), v) != differentiate(differentiate(d, v), u):
                        return False
        if len(ders) != comb(order + 3, 3):
            return False
        if any(f.args not in (OUTER, INNER) for d in ders.values() for f in d.factors()):
            return False
        for d in ders.values():
            for point in POINTS:
                if any(k.point not in POINTS for k in specialize(d, point).keys()):
                    return False
    return True


def check_solver(r: int = 3) -> bool:
    table = solve_system(r, True)
    if back_substitution_failures(table):
        return False
    low = solve_system(2, True)
    if any(table[k] != v for k, v in low.items()):
        return False
    return all(
        ratfun_equal(extract_gf(rr, s, table), published(rr, s))
        for (rr, s) in PUBLISHED if rr <= r
    )


def check_oracle(seed: int = 2, rounds: int = 200, N: int = 7) -> bool:
    rng = random.Random(seed)
    for _ in range(rounds):
        pi = list(range(1, rng.randint(0, 15) + 1))
        rng.shuffle(pi)
        if count_patterns(pi) != count_patterns_reference(pi):
            return False
    catalan = [comb(2 * n, n) // (n + 1) for n in range(N + 1)]
    for n in range(N + 1):
        jt = joint_distribution(n)
        if jt.total() != factorial(n) or jt.marginal_s(0) != catalan[n]:
            return False
    return True


def check_oracle_agreement(r: int = 3, N: int = 7) -> bool:
    table = solve_system(r, True)
    tables = [joint_distribution(n) for n in range(N + 1)]
    for s in (0, 1):
        for rr in range(r + 1):
            coeffs = series_expand(extract_gf(rr, s, table), N)
            if any(coeffs[n] != tables[n][rr, s] for n in range(N + 1)):
                return False
    return True


CHECKS: list[tuple[str, Callable[[], bool]]] = [
    ("exact: field axioms and normal form", check_field_axioms),
    ("exact: series of product is convolution", check_series_product),
    ("funceq: mixed partials commute, closure", check_derivatives_commute),
    ("solver: back-substitution, consistency, published forms", check_solver),
    ("oracle: counters agree, n! and Catalan sums", check_oracle),
    ("solver vs oracle coefficients", check_oracle_agreement),
]


def run_selftest() -> list[tuple[str, bool]]:
    return [(name, bool(fn())) for name, fn in CHECKS]
