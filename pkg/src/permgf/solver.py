"""Staged exact solving for the derivative values and extraction of the
generating functions AR(r, z) (no 132) and Aaron(r, z) (exactly one 132).

Unknowns are the partial derivatives of P and Q of total order <= r at the
points A, B, C.  Points are processed C, B, A (the inner argument of each
point is an earlier point), orders increasing, P before Q.  Within a stage
every relation is linear in the stage's unknowns once earlier values are
substituted, and the stage is solved by Gaussian elimination over RatFun.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterator

from .exact import ONE_POLY, ZERO, Poly, RatFun, ratfun_sum
from .funceq import (
    DerivKey,
    EqExpr,
    MultilinearRelation,
    all_derivatives,
    build_equations,
    multi_indices,
    specialize,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_ORDER = 8
STAGE_POINTS = ("C", "B", "A")


class SolverError(RuntimeError):
    pass


class SingularStageError(SolverError):
    def __init__(self, stage: "SolveStage", detail: str):
        super().__init__(f"stage {stage.label()} has no unique solution: {detail}")
        self.stage = stage


class InconsistentStageError(SolverError):
    def __init__(self, stage: "SolveStage", detail: str):
        super().__init__(f"stage {stage.label()} is inconsistent: {detail}")
        self.stage = stage


@dataclass
class LinearRelation:
    """``sum coeffs[k] * k + constant = 0``."""

    coeffs: dict[DerivKey, RatFun]
    constant: RatFun
    source: str = ""

    def is_trivial(self) -> bool:
        return not self.coeffs and not self.constant


@dataclass
class SolveStage:
    point: str
    order: int
    func: str
    relations: list[LinearRelation] = field(default_factory=list)
    unknowns: list[DerivKey] = field(default_factory=list)

    def label(self) -> str:
        return f"{self.func}@{self.point}/order {self.order}"


class DerivTable(Mapping):
    """Immutable map DerivKey -> RatFun produced by :func:`solve_system`."""

    def __init__(self, values: dict[DerivKey, RatFun], r: int, funcs: tuple[str, ...]):
        self._values = dict(values)
        self.r = r
        self.funcs = funcs

    def __getitem__(self, key: DerivKey) -> RatFun:
        return self._values[key]

    def __iter__(self) -> Iterator[DerivKey]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"DerivTable(r={self.r}, funcs={self.funcs}, {len(self)} entries)"


@lru_cache(maxsize=None)
def _equations() -> dict[str, EqExpr]:
    p_eq, q_eq = build_equations()
    return {"P": p_eq, "Q": q_eq}


_derivative_cache: dict[str, dict] = {}


def equation_derivatives(func: str, r: int) -> dict[tuple[int, int, int], EqExpr]:
    """Mixed partials of the ``func`` equation up to order r (memoized, grows on demand)."""
    have = _derivative_cache.get(func)
    if have is None or max(sum(m) for m in have) < r:
        have = all_derivatives(_equations()[func], r)
        _derivative_cache[func] = have
    return {m: e for m, e in have.items() if sum(m) <= r}


@lru_cache(maxsize=None)
def _specialized(func: str, m: tuple[int, int, int], point: str) -> MultilinearRelation:
    e = equation_derivatives(func, sum(m))[m]
    return specialize(e, point, source=f"D{list(m)} {func}-equation at {point}")


def stage_relations(func: str, point: str, order: int) -> list[MultilinearRelation]:
    return [_specialized(func, m, point) for m in multi_indices(order, exact=True)]


def _product_sum(parts: list[tuple[Poly, list[RatFun]]]) -> RatFun:
    """Sum of ``coef * prod(values)`` with one normalization per distinct denominator."""
    groups: dict[Poly, Poly] = {}
    for coef, vals in parts:
        num, den = coef, ONE_POLY
        for v in vals:
            if not v.num:
                num = None
                break
            num = num * v.num
            if not v.den.is_one():
                den = den * v.den
        if num is None or not num:
            continue
        prev = groups.get(den)
        groups[den] = num if prev is None else prev + num
    return ratfun_sum(RatFun(n, d) for d, n in groups.items() if n)


def linearize(
    rel: MultilinearRelation,
    known: Mapping[DerivKey, RatFun],
    unknowns: set[DerivKey],
) -> LinearRelation:
    """Substitute known values; the remainder must be linear in ``unknowns``."""
    const_parts: list[tuple[Poly, list[RatFun]]] = []
    coef_parts: dict[DerivKey, list[tuple[Poly, list[RatFun]]]] = {}
    for keys, c in rel.terms.items():
        vals = []
        free = None
        for k in keys:
            v = known.get(k)
            if v is not None:
                vals.append(v)
            elif k in unknowns and free is None:
                free = k
            elif k in unknowns:
                raise SolverError(f"{rel.source}: product of two unknowns {free} * {k}")
            else:
                raise SolverError(f"{rel.source}: references unsolved {k}")
        if free is None:
            const_parts.append((c, vals))
        else:
            coef_parts.setdefault(free, []).append((c, vals))
    coeffs = {}
    for k, parts in coef_parts.items():
        v = _product_sum(parts)
        if v:
            coeffs[k] = v
    return LinearRelation(coeffs, _product_sum(const_parts), rel.source)


def _references_only(rel: MultilinearRelation, known, unknowns) -> bool:
    return all(k in known or k in unknowns for k in rel.keys())


def gauss_solve(stage: SolveStage) -> dict[DerivKey, RatFun]:
    """Gauss-Jordan elimination over RatFun for one stage.

    Pivots are chosen with the smallest numerator+denominator degree.
    """
    rows = [(dict(rel.coeffs), rel.constant) for rel in stage.relations]
    pivots: dict[DerivKey, tuple[dict, RatFun]] = {}
    for u in stage.unknowns:
        best, best_size = None, None
        for i, (cs, _) in enumerate(rows):
            c = cs.get(u)
            if c is not None and (best_size is None or c.size < best_size):
                best, best_size = i, c.size
        if best is None:
            continue
        cs, const = rows.pop(best)
        inv = cs[u].inverse()
        cs = {k: v * inv for k, v in cs.items()}
        const = const * inv
        new_rows = []
        for ocs, oconst in rows:
            f = ocs.get(u)
            if f is None:
                new_rows.append((ocs, oconst))
                continue
            ocs = dict(ocs)
            for k, v in cs.items():
                nv = ocs.get(k, ZERO) - f * v
                if nv:
                    ocs[k] = nv
                else:
                    ocs.pop(k, None)
            new_rows.append((ocs, oconst - f * const))
        rows = new_rows
        for k, (pcs, pconst) in list(pivots.items()):
            f = pcs.get(u)
            if f is None:
                continue
            pcs = dict(pcs)
            for kk, v in cs.items():
                nv = pcs.get(kk, ZERO) - f * v
                if nv:
                    pcs[kk] = nv
                else:
                    pcs.pop(kk, None)
            pivots[k] = (pcs, pconst - f * const)
        pivots[u] = (cs, const)
    for cs, const in rows:
        if not cs and const:
            raise InconsistentStageError(stage, f"leftover relation 0 = {const}")
    missing = [u for u in stage.unknowns if u not in pivots]
    if missing:
        raise SingularStageError(stage, "no pivot for " + ", ".join(map(str, missing)))
    out = {}
    for u, (cs, const) in pivots.items():
        others = [k for k in cs if k != u]
        if others:
            raise SingularStageError(stage, f"{u} depends on free {others}")
        out[u] = -const
    return out


def iter_stages(r: int, include_q: bool) -> Iterator[tuple[str, int, str]]:
    funcs = ("P", "Q") if include_q else ("P",)
    for point in STAGE_POINTS:
        for k in range(r + 1):
            for func in funcs:
                yield point, k, func


def _solve(r: int, include_q: bool) -> DerivTable:
    known: dict[DerivKey, RatFun] = {}
    for point, k, func in iter_stages(r, include_q):
        stage = SolveStage(point, k, func)
        stage.unknowns = [DerivKey(func, m, point) for m in multi_indices(k, exact=True)]
        unknown_set = set(stage.unknowns)
        stage.relations = [
            linearize(rel, known, unknown_set) for rel in stage_relations(func, point, k)
        ]
        try:
            solved = gauss_solve(stage)
        except SingularStageError:
            if k >= r:
                raise
            # admit next-order relations that stay inside this stage
            extra = [
                rel for rel in stage_relations(func, point, k + 1)
                if _references_only(rel, known, unknown_set)
            ]
            if not extra:
                raise
            log.info("stage %s underdetermined; admitting %d order-%d relations",
                     stage.label(), len(extra), k + 1)
            stage.relations += [linearize(rel, known, unknown_set) for rel in extra]
            solved = gauss_solve(stage)
        log.debug("solved stage %s (%d unknowns)", stage.label(), len(solved))
        known.update(solved)
    return DerivTable(known, r, ("P", "Q") if include_q else ("P",))


@lru_cache(maxsize=16)
def solve_system(r: int, include_q: bool = True, max_order: int = DEFAULT_MAX_ORDER) -> DerivTable:
    """All derivatives of P (and Q) of total order <= r at A, B, C."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r > max_order:
        raise ValueError(f"r = {r} exceeds the configured maximum order {max_order}")
    return _solve(r, include_q)


def extract_gf(r: int, s: int, table: DerivTable | None = None,
               max_order: int = DEFAULT_MAX_ORDER) -> RatFun:
    """Generating function in z for permutations with ``s`` 132-patterns
    (s = 0 or 1) and exactly ``r`` 123-patterns.

    It is the r-th q-derivative of P (s=0) or Q (s=1) at q=0, t=1, over r!.
    """
    if s not in (0, 1):
        raise ValueError("s must be 0 or 1")
    if r < 0:
        raise ValueError("r must be nonnegative")
    func = "P" if s == 0 else "Q"
    if table is None or table.r < r or func not in table.funcs:
        table = solve_system(r, include_q=(s == 1), max_order=max_order)
    return table[DerivKey(func, (r, 0, 0), "A")] / factorial(r)


def AR(r: int) -> RatFun:
    return extract_gf(r, 0)


def Aaron(r: int) -> RatFun:
    return extract_gf(r, 1)


def back_substitution_failures(table: DerivTable) -> list[str]:
    """Every specialized relation of every derivative up to ``table.r``,
    evaluated with the table's values; returns descriptions of nonzero ones."""
    bad = []
    for func in table.funcs:
        for m in multi_indices(table.r):
            for point in STAGE_POINTS:
                rel = _specialized(func, m, point)
                missing = [k for k in rel.keys() if k not in table]
                if missing:
                    bad.append(f"{rel.source}: missing {missing}")
                    continue
                lin = linearize(rel, table, set())
                if lin.constant:
                    bad.append(f"{rel.source}: residual {lin.constant}")
    return bad
