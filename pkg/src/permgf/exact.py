"""Exact arithmetic in one variable ``z``: rationals, dense polynomials and
reduced rational functions, plus truncated power-series expansion.

Rationals are :class:`fractions.Fraction`.  Polynomials store coefficients in
ascending order.  A :class:`RatFun` is always kept in normal form: numerator
and denominator coprime, denominator monic.  Because the normal form is
unique, ``==`` and ``hash`` are structural.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and not coeffs[n - 1]:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Dense univariate polynomial over the rationals."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([Fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        # coeffs already Fractions with no trailing zeros
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c=1) -> "Poly":
        return cls([0] * degree + [c])

    # -- inspection -------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip([Fraction(other)])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self)

    def is_one(self) -> bool:
        return self.coeffs == (_ONE,)

    def __call__(self, x):
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- ring operations --------------------------------------------------

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly._raw(_strip(out))

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw(())
        if len(b) == 1:
            return self.scale(b[0])
        if len(a) == 1:
            return other.scale(a[0])
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(_strip(out))

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        if not c:
            return Poly._raw(())
        if c == 1:
            return self
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def __pow__(self, k: int) -> "Poly":
        out = Poly._raw((_ONE,))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, k: int) -> "Poly":
        """Multiply by z**k."""
        if not self.coeffs or k == 0:
            return self
        return Poly._raw((_ZERO,) * k + self.coeffs)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        b = other.coeffs
        db = len(b) - 1
        rem = list(self.coeffs)
        if len(rem) <= db:
            return Poly._raw(()), self
        lb = b[-1]
        quot = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            if lb != 1:
                c = c / lb
            quot[k - db] = c
            for j in range(db):
                rem[k - db + j] -= c * b[j]
            rem[k] = _ZERO
        return Poly._raw(_strip(quot)), Poly._raw(_strip(rem[:db]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(1 / self.coeffs[-1])

    def derivative(self) -> "Poly":
        return Poly._raw(tuple(i * c for i, c in enumerate(self.coeffs) if i))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is 0."""
    if a.degree < b.degree:
        a, b = b, a
    if not b:
        return a.monic()
    if b.degree == 0 or a.degree == 0:
        return Poly._raw((_ONE,))
    a, b = a.monic(), b.monic()
    while b:
        a, b = b, (a % b).monic()
        if b.degree == 0:
            return Poly._raw((_ONE,))
    return a


Z = Poly((0, 1))
ONE_POLY = Poly((1,))
ZERO_POLY = Poly(())


class RatFun:
    """Reduced quotient ``num/den`` of polynomials in ``z`` with monic ``den``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num)
        if den is None:
            den = ONE_POLY
        elif not isinstance(den, Poly):
            den = Poly.const(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = ZERO_POLY, ONE_POLY
            return
        if den.degree > 0:
            g = poly_gcd(num, den)
            if not g.is_one():
                num, den = num // g, den // g
        lc = den.lead
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFun":
        f = object.__new__(cls)
        f.num, f.den = num, den
        return f

    @classmethod
    def from_poly(cls, p: Poly) -> "RatFun":
        return cls._raw(p, ONE_POLY)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFun):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Poly)):
            return self == as_ratfun(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFun({format_poly(self.num)!r}, {format_poly(self.den)!r})"

    def __str__(self) -> str:
        return canonical_str(self)

    @property
    def size(self) -> int:
        """Crude complexity measure used for pivot selection."""
        return self.num.degree + self.den.degree + 2

    def __neg__(self) -> "RatFun":
        return RatFun._raw(-self.num, self.den)

    def __add__(self, other) -> "RatFun":
        other = as_ratfun(other)
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a:
            return other
        if not c:
            return self
        if b == d:
            if b.is_one():
                return RatFun._raw(a + c, b)
            return RatFun(a + c, b)
        if b.is_one():
            return RatFun._raw(a * d + c, d)
        if d.is_one():
            return RatFun._raw(a + c * b, b)
        g = poly_gcd(b, d)
        if g.is_one():
            return RatFun._raw(a * d + b * c, b * d)
        bg, dg = b // g, d // g
        s = a * dg + c * bg
        g2 = poly_gcd(s, g)
        if g2.is_one():
            return RatFun._raw(s, bg * d)
        return RatFun._raw(s // g2, bg * (d // g2))

    __radd__ = __add__

    def __sub__(self, other) -> "RatFun":
        return self + (-as_ratfun(other))

    def __rsub__(self, other) -> "RatFun":
        return as_ratfun(other) - self

    def __mul__(self, other) -> "RatFun":
        if isinstance(other, Poly):
            return self.mul_poly(other)
        other = as_ratfun(other)
        a, b, c, d = self.num, self.den, other.num, other.den
        if not a or not c:
            return ZERO
        g1 = poly_gcd(a, d) if d.degree > 0 else ONE_POLY
        g2 = poly_gcd(c, b) if b.degree > 0 else ONE_POLY
        if not g1.is_one():
            a, d = a // g1, d // g1
        if not g2.is_one():
            c, b = c // g2, b // g2
        return RatFun._raw(a * c, b * d)

    __rmul__ = __mul__

    def mul_poly(self, p: Poly) -> "RatFun":
        if not p or not self.num:
            return ZERO
        if self.den.is_one():
            return RatFun._raw(self.num * p, self.den)
        if p.degree == 0:
            return RatFun._raw(self.num.scale(p.coeffs[0]), self.den)
        g = poly_gcd(p, self.den)
        if g.is_one():
            return RatFun._raw(self.num * p, self.den)
        return RatFun._raw(self.num * (p // g), self.den // g)

    def inverse(self) -> "RatFun":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        lc = self.num.lead
        return RatFun._raw(self.den.scale(1 / lc), self.num.scale(1 / lc))

    def __truediv__(self, other) -> "RatFun":
        return self * as_ratfun(other).inverse()

    def __rtruediv__(self, other) -> "RatFun":
        return as_ratfun(other) * self.inverse()

    def __pow__(self, k: int) -> "RatFun":
        if k < 0:
            return self.inverse() ** (-k)
        return RatFun._raw(self.num**k, self.den**k)

    def __call__(self, x):
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"pole at z = {x}")
        return self.num(x) / d

    def is_normalized(self) -> bool:
        return (
            bool(self.den)
            and self.den.lead == 1
            and (poly_gcd(self.num, self.den).is_one() or not self.num and self.den.is_one())
        )


ZERO = RatFun._raw(ZERO_POLY, ONE_POLY)
ONE = RatFun._raw(ONE_POLY, ONE_POLY)


def as_ratfun(x) -> RatFun:
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Poly):
        return RatFun._raw(x, ONE_POLY)
    return RatFun._raw(Poly.const(x), ONE_POLY)


def ratfun_normalize(num: Poly, den: Poly) -> RatFun:
    return RatFun(num, den)


def ratfun_equal(f: RatFun, g: RatFun) -> bool:
    """Equality by cross-multiplication; does not rely on normal form."""
    return f.num * g.den == g.num * f.den


def ratfun_sum(terms: Iterable[RatFun]) -> RatFun:
    """Sum many rational functions, batching numerators over equal denominators.

    Summing term by term would run a gcd per addition; here terms sharing a
    denominator are added as plain polynomials first.
    """
    groups: dict[Poly, Poly] = {}
    for f in terms:
        if not f.num:
            continue
        prev = groups.get(f.den)
        groups[f.den] = f.num if prev is None else prev + f.num
    total = ZERO
    for den, num in groups.items():
        if num:
            total = total + (RatFun._raw(num, den) if den.is_one() else RatFun(num, den))
    return total


def series_expand(f: RatFun, order: int) -> list[Fraction]:
    """Coefficients c_0..c_order of the Taylor expansion of ``f`` at z = 0."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    d = f.den.coeffs
    if not d[0]:
        raise ZeroDivisionError("rational function has a pole at z = 0")
    d0 = d[0]
    out: list[Fraction] = []
    for n in range(order + 1):
        acc = f.num[n]
        for k in range(1, min(n, len(d) - 1) + 1):
            acc -= d[k] * out[n - k]
        out.append(acc / d0)
    return out


# -- rendering ---------------------------------------------------------------


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly, var: str = "z") -> str:
    """Maple-style rendering with descending powers, e.g. ``z^2-3*z+1/2``."""
    if not p:
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = _fmt_rational(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{_fmt_rational(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        s += sign + body
    return s


def canonical_str(f: RatFun) -> str:
    num = format_poly(f.num)
    if f.den.is_one():
        return num
    if len([c for c in f.num.coeffs if c]) > 1:
        num = f"({num})"
    den = format_poly(f.den)
    if len([c for c in f.den.coeffs if c]) > 1:
        den = f"({den})"
    return f"{num}/{den}"


_ONE_MINUS_Z = Poly((1, -1))
_ONE_MINUS_2Z = Poly((1, -2))


def _peel(p: Poly, factor: Poly) -> tuple[Poly, int]:
    k = 0
    while p.degree >= 1:
        q, r = divmod(p, factor)
        if r:
            break
        p, k = q, k + 1
    return p, k


def _primitive(p: Poly) -> tuple[Fraction, list[int]]:
    """Split ``p`` into rational content and primitive integer coefficients
    whose leading (highest-degree) coefficient is positive."""
    from math import gcd, lcm

    den = lcm(*(c.denominator for c in p.coeffs))
    ints = [int(c * den) for c in p.coeffs]
    g = gcd(*ints)
    if ints[-1] < 0:
        g = -g
    return Fraction(g, den), [c // g for c in ints]


def _factor_parts(p: Poly) -> tuple[Fraction, dict[str, int], Poly]:
    p, kz = _peel(p, Z)
    p, k1 = _peel(p, _ONE_MINUS_Z)
    p, k2 = _peel(p, _ONE_MINUS_2Z)
    content, ints = _primitive(p)
    return content, {"z": kz, "(1-z)": k1, "(1-2*z)": k2}, Poly(ints)


def _join(factors: dict[str, int], rest: Poly) -> list[str]:
    out = []
    for name, k in factors.items():
        if k:
            out.append(name if k == 1 else f"{name}^{k}")
    if rest.degree >= 1:
        out.append(f"({format_poly(rest)})")
    return out


def factored_str(f: RatFun) -> str:
    """Factored display pulling out powers of z, (1-z) and (1-2*z).

    Only these three factors are recognized; whatever remains is shown as a
    primitive integer polynomial with positive leading coefficient.
    """
    if not f.num:
        return "0"
    cn, fn, rn = _factor_parts(f.num)
    cd, fd, rd = _factor_parts(f.den)
    const = cn / cd
    num_parts = _join(fn, rn)
    den_parts = _join(fd, rd)
    sign = "-" if const < 0 else ""
    const = abs(const)
    if const.denominator != 1:
        den_parts.insert(0, str(const.denominator))
    if const.numerator != 1 or not num_parts:
        num_parts.insert(0, str(const.numerator))
    s = sign + "*".join(num_parts)
    if den_parts:
        den = "*".join(den_parts)
        if len(den_parts) > 1:
            den = f"({den})"
        s += "/" + den
    return s


# -- serialization -----------------------------------------------------------


def _parse_rational(s: str) -> Fraction:
    if not isinstance(s, str):
        raise ValueError(f"expected a string coefficient, got {s!r}")
    return Fraction(s)


def ratfun_to_json(f: RatFun) -> dict:
    return {
        "num": [_fmt_rational(c) for c in f.num.coeffs],
        "den": [_fmt_rational(c) for c in f.den.coeffs],
    }


def ratfun_from_json(obj: dict) -> RatFun:
    num = Poly(_parse_rational(s) for s in obj["num"])
    den = Poly(_parse_rational(s) for s in obj["den"])
    return RatFun(num, den)


def rationals_to_json(cs: Sequence[Fraction]) -> list[str]:
    return [_fmt_rational(Fraction(c)) for c in cs]


def parse_ratfun(text: str) -> RatFun:
    """Parse a closed form such as ``-z^4*(z^3-6*z^2+4*z-1)/(1-2*z)^4``.

    Supports +, -, *, /, ^ with nonnegative integer exponents, integer
    literals, parentheses and the single variable ``z``.
    """
    return _Parser(text).parse()


class _Parser:
    def __init__(self, text: str):
        self.s = text.replace(" ", "")
        self.i = 0

    def parse(self) -> RatFun:
        v = self.expr()
        if self.i != len(self.s):
            raise ValueError(f"unexpected {self.s[self.i:]!r} in {self.s!r}")
        return v

    def peek(self) -> str:
        return self.s[self.i] if self.i < len(self.s) else ""

    def expr(self) -> RatFun:
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.s[self.i]
            self.i += 1
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> RatFun:
        v = self.unary()
        while self.peek() in ("*", "/"):
            op = self.s[self.i]
            self.i += 1
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self) -> RatFun:
        if self.peek() == "-":
            self.i += 1
            return -self.unary()
        if self.peek() == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self) -> RatFun:
        v = self.atom()
        if self.peek() == "^":
            self.i += 1
            v = v ** self.integer()
        return v

    def integer(self) -> int:
        j = self.i
        while self.peek().isdigit():
            self.i += 1
        if j == self.i:
            raise ValueError(f"expected integer at {j} in {self.s!r}")
        return int(self.s[j : self.i])

    def atom(self) -> RatFun:
        c = self.peek()
        if c == "(":
            self.i += 1
            v = self.expr()
            if self.peek() != ")":
                raise ValueError(f"missing ')' in {self.s!r}")
            self.i += 1
            return v
        if c == "z":
            self.i += 1
            return as_ratfun(Z)
        if c.isdigit():
            return as_ratfun(self.integer())
        raise ValueError(f"unexpected {c!r} at {self.i} in {self.s!r}")
