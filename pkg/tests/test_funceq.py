from math import comb

import pytest

from permgf.exact import Poly
from permgf.funceq import (
    INNER,
    OUTER,
    POINTS,
    DerivKey,
    EqExpr,
    FuncDeriv,
    TriPoly,
    all_derivatives,
    build_equations,
    differentiate,
    multi_indices,
    point_of,
    render,
    specialize,
    substitute_series,
)
from permgf.oracle import AVOID132, ONE132, weight_poly

P_EQ, Q_EQ = build_equations()


def fd(func, args, order=(0, 0, 0)):
    return FuncDeriv(func, tuple(order), args)


def mono(q=0, z=0, t=0, c=1):
    return TriPoly.monomial(q, z, t, c)


def test_p_equation_terms():
    expected = EqExpr([
        (mono(), [fd("P", OUTER)]),
        (mono(c=-1), []),
        (mono(z=1, c=-1), [fd("P", INNER), fd("P", OUTER)]),
    ])
    assert P_EQ == expected
    assert len(P_EQ) == 3


def test_q_equation_terms():
    assert len(Q_EQ) == 5
    pair = tuple(sorted([fd("P", INNER), fd("P", OUTER)]))
    assert Q_EQ.terms[pair] == mono(z=2, t=2, c=-1)
    assert Q_EQ.terms[(fd("P", INNER),)] == mono(z=2, t=2)


def test_render_golden():
    assert render(P_EQ) == "-1+P(q,z,t)-z*P(q,z*t,q*t)*P(q,z,t)"
    assert render(Q_EQ) == (
        "z^2*t^2*P(q,z*t,q*t)+Q(q,z,t)-z^2*t^2*P(q,z*t,q*t)*P(q,z,t)"
        "-z*P(q,z*t,q*t)*Q(q,z,t)-z*P(q,z,t)*Q(q,z*t,q*t)"
    )
    assert "-z*P(q,z,t)*P[1,0,0](q,z*t,q*t)" in render(differentiate(P_EQ, "q"))


def test_empty_permutation_base_case():
    # P = 1 identically, z = 0: only the constant coefficient survives
    assert substitute_series(P_EQ, {"P": [mono()]}, 0) == [TriPoly()]


def test_dq_of_product_term():
    e = EqExpr([(mono(z=1), [fd("P", INNER), fd("P", OUTER)])])
    expected = EqExpr([
        (mono(z=1), [fd("P", INNER, (1, 0, 0)), fd("P", OUTER)]),
        (mono(z=1, t=1), [fd("P", INNER, (0, 0, 1)), fd("P", OUTER)]),
        (mono(z=1), [fd("P", INNER), fd("P", OUTER, (1, 0, 0))]),
    ])
    assert differentiate(e, "q") == expected


def test_dz_of_constant_is_empty():
    assert len(differentiate(EqExpr([(mono(c=-1), [])]), "z")) == 0


def test_dt_of_q_equation_term():
    e = EqExpr([(mono(z=2, t=2), [fd("P", INNER)])])
    expected = EqExpr([
        (mono(z=2, t=1, c=2), [fd("P", INNER)]),
        (mono(z=3, t=2), [fd("P", INNER, (0, 1, 0))]),
        (mono(q=1, z=2, t=2), [fd("P", INNER, (0, 0, 1))]),
    ])
    assert differentiate(e, "t") == expected


def test_all_derivatives_base_case():
    assert all_derivatives(P_EQ, 0) == {(0, 0, 0): P_EQ}
    assert all_derivatives(P_EQ, -1) == {}


def test_all_derivatives_order_one():
    d = all_derivatives(P_EQ, 1)
    assert set(d.values()) == {P_EQ} | {differentiate(P_EQ, v) for v in "qzt"}
    assert len(d) == 4


def _ders_by_sequences(e, r):
    """Every derivative along every ordered variable sequence, deduplicated as a set."""
    found = {e}
    frontier = {e}
    for _ in range(r):
        frontier = {differentiate(x, v) for x in frontier for v in range(3)}
        found |= frontier
    return found


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("eq", [P_EQ, Q_EQ], ids=["P", "Q"])
def test_all_derivatives_matches_sequence_enumeration(eq, r):
    brute = _ders_by_sequences(eq, r)
    mine = all_derivatives(eq, r)
    assert len(mine) == comb(r + 3, 3)
    assert set(mine.values()) == brute
    assert len(brute) == comb(r + 3, 3)


@pytest.mark.parametrize("eq", [P_EQ, Q_EQ], ids=["P", "Q"])
def test_mixed_partials_commute_to_order_3(eq):
    # order <= 1 expressions, two more derivatives: total order up to 3
    for e in all_derivatives(eq, 1).values():
        for u, v in [(0, 1), (0, 2), (1, 2)]:
            assert differentiate(differentiate(e, u), v) == differentiate(differentiate(e, v), u)


@pytest.mark.parametrize("eq", [P_EQ, Q_EQ], ids=["P", "Q"])
def test_argument_and_point_closure(eq):
    for e in all_derivatives(eq, 4).values():
        assert all(f.args in (OUTER, INNER) for f in e.factors())
        for point in POINTS:
            assert all(k.point in POINTS for k in specialize(e, point).keys())


def test_point_closure_table():
    assert [point_of(OUTER, p) for p in "ABC"] == ["A", "B", "C"]
    assert [point_of(INNER, p) for p in "ABC"] == ["B", "C", "C"]


def key(point, func="P", order=(0, 0, 0)):
    return DerivKey(func, order, point)


def test_specialize_p_at_c():
    rel = specialize(P_EQ, "C")
    assert rel.terms == {(key("C"),): Poly([1]), (): Poly([-1])}


def test_specialize_p_at_b():
    rel = specialize(P_EQ, "B")
    assert rel.terms == {
        (key("B"),): Poly([1]),
        (): Poly([-1]),
        tuple(sorted([key("B"), key("C")])): Poly([0, -1]),
    }


def test_specialize_p_at_a():
    rel = specialize(P_EQ, "A")
    assert rel.terms == {
        (key("A"),): Poly([1]),
        (): Poly([-1]),
        tuple(sorted([key("A"), key("B")])): Poly([0, -1]),
    }


def test_specialize_drops_vanishing_coefficients():
    # the t^2 z^2 terms vanish at B and C
    assert len(specialize(Q_EQ, "B").terms) == 3
    assert all(k.point in "BC" for k in specialize(Q_EQ, "B").keys())


def test_specialize_rejects_unknown_point():
    with pytest.raises(RuntimeError):
        specialize(P_EQ, "D")


def test_multi_indices_counts():
    assert len(multi_indices(2)) == 10
    assert len(multi_indices(3, exact=True)) == 10
    assert all(sum(m) == 3 for m in multi_indices(3, exact=True))


@pytest.mark.parametrize("N", [4, 7])
def test_brute_force_series_satisfy_equations(N):
    series = {
        "P": [weight_poly(n, AVOID132).poly for n in range(N + 1)],
        "Q": [weight_poly(n, ONE132).poly for n in range(N + 1)],
    }
    for eq in (P_EQ, Q_EQ):
        assert all(not c for c in substitute_series(eq, series, N))


def test_wrong_series_is_detected():
    series = {
        "P": [weight_poly(n, AVOID132).poly for n in range(6)],
        "Q": [weight_poly(n, ONE132).poly for n in range(6)],
    }
    series["P"][3] = series["P"][3] + mono(t=1)
    assert any(substitute_series(P_EQ, series, 5))
