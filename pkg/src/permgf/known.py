"""Closed forms printed in the published results table, keyed by (r, s)."""

from .exact import RatFun, parse_ratfun

PUBLISHED = {
    (0, 0): "(1-z)/(1-2*z)",
    (1, 0): "z^3/(1-2*z)^2",
    (2, 0): "z^4*(1-z)/(1-2*z)^3",
    (3, 0): "z^5*(z-1)^2/(1-2*z)^4",
    (4, 0): "-z^4*(z^5-3*z^4+11*z^3-13*z^2+6*z-1)/(1-2*z)^5",
    (5, 0): "z^5*(z-1)*(z^5-3*z^4+19*z^3-25*z^2+12*z-2)/(1-2*z)^6",
    (0, 1): "z^3/(1-2*z)^2",
    (1, 1): "2*z^5/(1-2*z)^3",
    (2, 1): "-z^4*(z^3-6*z^2+4*z-1)/(1-2*z)^4",
    (3, 1): "2*z^5*(1-z)*(5*z^2-4*z+1)/(1-2*z)^5",
    (4, 1): "z^6*(z^5+12*z^4-55*z^3+65*z^2-30*z+5)/(1-2*z)^6",
}


def published(r: int, s: int) -> RatFun:
    return parse_ratfun(PUBLISHED[r, s])


def name(r: int, s: int) -> str:
    return f"{'AR' if s == 0 else 'Aaron'}({r},z)"
