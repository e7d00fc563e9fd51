"""The two functional equations for P (132-avoiders) and Q (exactly one 132),
their chain-rule derivatives in q, z, t, and specialization at the three
evaluation points.

Every unknown-function factor is evaluated either at the outer arguments
``(q, z, t)`` or at the inner composition ``(q, z*t, q*t)``.  Differentiating
never produces any other argument tuple, and specializing lands on one of

* ``A``: q=0, t=1, z free
* ``B``: q=0, t=0, z free
* ``C``: q=0, t=0, z=0

with inner arguments mapping A -> B -> C -> C.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, NamedTuple

from .exact import Poly

VARS = ("q", "z", "t")
OUTER = "outer"
INNER = "inner"
POINTS = ("A", "B", "C")

# (q, t, z-is-symbolic) at each point
POINT_VALUES = {"A": (0, 1, True), "B": (0, 0, True), "C": (0, 0, False)}
INNER_IMAGE = {"A": "B", "B": "C", "C": "C"}

_ARG_TEXT = {OUTER: "(q,z,t)", INNER: "(q,z*t,q*t)"}


class InvariantError(RuntimeError):
    """Internal modeling invariant violated."""


class FuncDeriv(NamedTuple):
    """``D^order func`` evaluated at the argument tuple ``args``."""

    func: str
    order: tuple[int, int, int]
    args: str

    def bump(self, slot: int) -> "FuncDeriv":
        o = list(self.order)
        o[slot] += 1
        return FuncDeriv(self.func, tuple(o), self.args)

    def __str__(self) -> str:
        name = self.func if self.order == (0, 0, 0) else f"{self.func}[{','.join(map(str, self.order))}]"
        return name + _ARG_TEXT[self.args]


class DerivKey(NamedTuple):
    func: str
    order: tuple[int, int, int]
    point: str

    def __str__(self) -> str:
        return f"{self.func}[{','.join(map(str, self.order))}]@{self.point}"


def point_of(args: str, point: str) -> str:
    """Where an argument tuple lands when (q, z, t) is set to ``point``."""
    if args == OUTER:
        return point
    if args == INNER:
        return INNER_IMAGE[point]
    raise InvariantError(f"unknown argument tuple {args!r}")


class TriPoly:
    """Sparse polynomial in (q, z, t): exponent triple -> nonzero Fraction."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], object] | None = None):
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "TriPoly":
        p = object.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def monomial(cls, q: int = 0, z: int = 0, t: int = 0, c=1) -> "TriPoly":
        return cls({(q, z, t): c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        return f"TriPoly({self})"

    def __add__(self, other: "TriPoly") -> "TriPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return TriPoly._raw(out)

    def __neg__(self) -> "TriPoly":
        return TriPoly._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "TriPoly") -> "TriPoly":
        return self + (-other)

    def __mul__(self, other: "TriPoly") -> "TriPoly":
        out: dict = {}
        for (a, b, c), x in self.terms.items():
            for (d, e, f), y in other.terms.items():
                k = (a + d, b + e, c + f)
                v = out.get(k, 0) + x * y
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return TriPoly._raw(out)

    def diff(self, var: int) -> "TriPoly":
        out = {}
        for e, c in self.terms.items():
            if e[var]:
                k = list(e)
                k[var] -= 1
                out[tuple(k)] = c * e[var]
        return TriPoly._raw(out)

    def mul_monomial(self, e2: tuple[int, int, int]) -> "TriPoly":
        return TriPoly._raw(
            {(a + e2[0], b + e2[1], c + e2[2]): x for (a, b, c), x in self.terms.items()}
        )

    def subs(self, q=None, z=None, t=None) -> "TriPoly":
        """Substitute numbers for any of the variables (exponent set to 0)."""
        vals = (q, z, t)
        out: dict = {}
        for e, c in self.terms.items():
            k = list(e)
            for i, v in enumerate(vals):
                if v is not None:
                    c = c * Fraction(v) ** e[i]
                    k[i] = 0
            if c:
                k = tuple(k)
                s = out.get(k, 0) + c
                if s:
                    out[k] = s
                else:
                    out.pop(k)
        return TriPoly._raw(out)

    def at_point(self, point: str) -> Poly:
        """Evaluate at a specialization point; the result is a polynomial in z."""
        q, t, zfree = POINT_VALUES[point]
        coeffs: dict[int, Fraction] = {}
        for (i, j, k), c in self.terms.items():
            if i and not q:
                continue
            if k and not t:
                continue
            if j and not zfree:
                continue
            coeffs[j] = coeffs.get(j, 0) + c
        if not coeffs:
            return Poly(())
        return Poly([coeffs.get(j, 0) for j in range(max(coeffs) + 1)])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), e)):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(VARS, e) if k
            )
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += sign + body
        return s


_TP_ONE = TriPoly.monomial()

# chain rule for a factor at INNER = (q, z*t, q*t):
#   d/dq F(q, zt, qt) = D1 F + t * D3 F
#   d/dz             = t * D2 F
#   d/dt             = z * D2 F + q * D3 F
# each entry: (slot to bump, monomial exponent of the multiplier)
_CHAIN = {
    OUTER: {0: ((0, (0, 0, 0)),), 1: ((1, (0, 0, 0)),), 2: ((2, (0, 0, 0)),)},
    INNER: {
        0: ((0, (0, 0, 0)), (2, (0, 0, 1))),
        1: ((1, (0, 0, 1)),),
        2: ((1, (0, 1, 0)), (2, (1, 0, 0))),
    },
}


class EqExpr:
    """Sum of ``coefficient * product of FuncDeriv factors``.

    ``terms`` maps a sorted tuple of factors to its nonzero TriPoly
    coefficient, so equal expressions compare equal structurally.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[TriPoly, Iterable[FuncDeriv]]] = ()):
        acc: dict[tuple, TriPoly] = {}
        for coef, factors in terms:
            _accumulate(acc, tuple(sorted(factors)), coef)
        self.terms = acc

    @classmethod
    def _raw(cls, terms: dict) -> "EqExpr":
        e = object.__new__(cls)
        e.terms = terms
        return e

    def __eq__(self, other) -> bool:
        if not isinstance(other, EqExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def factors(self) -> set[FuncDeriv]:
        return {f for fs in self.terms for f in fs}

    def __repr__(self) -> str:
        return f"EqExpr({render(self)})"

    def __str__(self) -> str:
        return render(self)


def _accumulate(acc: dict, key: tuple, coef: TriPoly) -> None:
    prev = acc.get(key)
    s = coef if prev is None else prev + coef
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def render(e: EqExpr) -> str:
    """Maple-like text, e.g. ``-z*P[1,0,0](q,z*t,q*t)*P(q,z,t)``."""
    if not e.terms:
        return "0"
    pieces = []
    for factors in sorted(e.terms, key=lambda fs: (len(fs), fs)):
        coef = e.terms[factors]
        cs = str(coef)
        neg = False
        if len(coef.terms) == 1:
            neg = next(iter(coef.terms.values())) < 0
            if neg:
                cs = str(-coef)
        elif factors:
            cs = f"({cs})"
        fs = [str(f) for f in factors]
        if fs and cs == "1":
            body = "*".join(fs)
        else:
            body = "*".join([cs] + fs)
        pieces.append(("-" if neg else "+", body))
    s = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
    for sign, body in pieces[1:]:
        s += sign + body
    return s


def _f(func: str, args: str, order=(0, 0, 0)) -> FuncDeriv:
    return FuncDeriv(func, tuple(order), args)


def build_equations() -> tuple[EqExpr, EqExpr]:
    """Both functional equations in the form ``expr = 0``.

    P = 1 + z*P(q,zt,qt)*P
    Q = z*P(q,zt,qt)*Q + z*Q(q,zt,qt)*P + t^2*z^2*P(q,zt,qt)*(P - 1)
    """
    one = _TP_ONE
    z = TriPoly.monomial(z=1)
    t2z2 = TriPoly.monomial(z=2, t=2)
    p_out, p_in = _f("P", OUTER), _f("P", INNER)
    q_out, q_in = _f("Q", OUTER), _f("Q", INNER)
    p_eq = EqExpr([
        (one, [p_out]),
        (-one, []),
        (-z, [p_in, p_out]),
    ])
    q_eq = EqExpr([
        (one, [q_out]),
        (-z, [p_in, q_out]),
        (-z, [q_in, p_out]),
        (-t2z2, [p_in, p_out]),
        (t2z2, [p_in]),
    ])
    return p_eq, q_eq


def differentiate(e: EqExpr, var) -> EqExpr:
    """Partial derivative in ``var`` (``"q"``, ``"z"``, ``"t"`` or 0/1/2)."""
    v = VARS.index(var) if isinstance(var, str) else var
    acc: dict[tuple, TriPoly] = {}
    for factors, coef in e.terms.items():
        dc = coef.diff(v)
        if dc:
            _accumulate(acc, factors, dc)
        for i, f in enumerate(factors):
            rest = factors[:i] + factors[i + 1:]
            for slot, mono in _CHAIN[f.args][v]:
                new = rest + (f.bump(slot),)
                _accumulate(acc, tuple(sorted(new)), coef.mul_monomial(mono))
    return EqExpr._raw(acc)


def multi_indices(r: int, exact: bool = False) -> list[tuple[int, int, int]]:
    """All (a, b, c) with a+b+c <= r (or == r), ordered by total then lexicographically."""
    out = []
    for k in range(0 if not exact else r, r + 1):
        for a in range(k, -1, -1):
            for b in range(k - a, -1, -1):
                out.append((a, b, k - a - b))
    return out


def all_derivatives(e: EqExpr, r: int) -> dict[tuple[int, int, int], EqExpr]:
    """Every mixed partial of ``e`` of total order <= r, keyed by multi-index.

    Mixed partials commute, so each multi-index is computed once, from its
    predecessor with one fewer q- (else z-, else t-) derivative.
    """
    if r < 0:
        return {}
    out = {(0, 0, 0): e}
    for m in multi_indices(r):
        if m in out:
            continue
        a, b, c = m
        if a:
            out[m] = differentiate(out[(a - 1, b, c)], 0)
        elif b:
            out[m] = differentiate(out[(0, b - 1, c)], 1)
        else:
            out[m] = differentiate(out[(0, 0, c - 1)], 2)
    return out


def derivative_count(r: int) -> int:
    return comb(r + 3, 3)


class MultilinearRelation(NamedTuple):
    """``sum coeff(z) * prod(values of keys) = 0`` after specialization."""

    point: str
    source: str
    terms: dict[tuple[DerivKey, ...], Poly]

    def keys(self) -> set[DerivKey]:
        return {k for ks in self.terms for k in ks}


def specialize(e: EqExpr, point: str, source: str = "") -> MultilinearRelation:
    """Evaluate coefficients at ``point`` and map each factor to a DerivKey.

    Terms whose coefficient vanishes at the point are dropped.
    """
    if point not in POINT_VALUES:
        raise InvariantError(f"unknown point {point!r}")
    out: dict[tuple[DerivKey, ...], Poly] = {}
    for factors, coef in e.terms.items():
        c = coef.at_point(point)
        if not c:
            continue
        keys = tuple(sorted(DerivKey(f.func, f.order, point_of(f.args, point)) for f in factors))
        prev = out.get(keys)
        s = c if prev is None else prev + c
        if s:
            out[keys] = s
        else:
            out.pop(keys, None)
    return MultilinearRelation(point, source, out)


def substitute_series(
    e: EqExpr,
    series: Mapping[str, list[TriPoly]],
    N: int,
) -> list[TriPoly]:
    """Plug truncated power series into an underived expression.

    ``series[F][n]`` is the (q, t) coefficient of z^n of F.  Returns the
    coefficients of z^0..z^N of the resulting expression, each a TriPoly in
    (q, t) (z-exponent 0).
    """

    def expand(f: FuncDeriv) -> list[TriPoly]:
        if f.order != (0, 0, 0):
            raise ValueError("substitute_series only handles underived factors")
        coeffs = series[f.func]
        out = []
        for n in range(N + 1):
            w = coeffs[n] if n < len(coeffs) else TriPoly()
            if f.args == INNER:
                # F(q, z*t, q*t): t -> q*t in the coefficient, times t^n
                w = _t_to_qt(w).mul_monomial((0, 0, n))
            out.append(w)
        return out

    total = [TriPoly() for _ in range(N + 1)]
    for factors, coef in e.terms.items():
        prod = [_TP_ONE] + [TriPoly() for _ in range(N)]
        for f in factors:
            prod = _series_mul(prod, expand(f), N)
        cz = _split_z(coef, N)
        term = _series_mul(prod, cz, N)
        total = [a + b for a, b in zip(total, term)]
    return total


def _t_to_qt(w: TriPoly) -> TriPoly:
    out: dict = {}
    for (i, j, k), c in w.terms.items():
        key = (i + k, j, k)
        out[key] = out.get(key, 0) + c
    return TriPoly(out)


def _split_z(coef: TriPoly, N: int) -> list[TriPoly]:
    out = [dict() for _ in range(N + 1)]
    for (i, j, k), c in coef.terms.items():
        if j <= N:
            out[j][(i, 0, k)] = c
    return [TriPoly(d) for d in out]


def _series_mul(a: list[TriPoly], b: list[TriPoly], N: int) -> list[TriPoly]:
    out = [TriPoly() for _ in range(N + 1)]
    for i in range(N + 1):
        if not a[i]:
            continue
        for j in range(N + 1 - i):
            if b[j]:
                out[i + j] = out[i + j] + a[i] * b[j]
    return out
