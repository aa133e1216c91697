"""Reference operator pairs used by tests and the command line driver."""

from __future__ import annotations

from fractions import Fraction

from .errors import PreconditionError
from .operators import GradedOp


def kdv_coefficients(degree: int = 24) -> list[Fraction]:
    """Series solution of u'' = -3 u^2 with u(0) = 0, u'(0) = 1."""
    u = [Fraction(0)] * (degree + 1)
    if degree >= 1:
        u[1] = Fraction(1)
    for n in range(degree - 1):
        s = sum(u[i] * u[n - i] for i in range(n + 1))
        u[n + 2] = Fraction(-3) * s / ((n + 2) * (n + 1))
    return u


def kdv_pair(degree: int = 24) -> tuple[GradedOp, GradedOp]:
    """The commuting stationary pair Q = d^2 + u, P = d^3 + (3/2)u d + (3/4)u'.

    The coefficient series is exact through x-degree ``degree``; the windows
    record what is unknown beyond that.
    """
    u = kdv_coefficients(degree)
    q_items = [(0, 2, 1)] + [(n, 0, u[n]) for n in range(1, degree + 1) if u[n]]
    Q = GradedOp.from_monomials(1, q_items).restrict(floor=-degree)
    p_items = [(0, 3, 1)]
    p_items += [(n, 1, Fraction(3, 2) * u[n]) for n in range(1, degree + 1) if u[n]]
    p_items += [(n - 1, 0, Fraction(3, 4) * n * u[n]) for n in range(1, degree + 1) if u[n]]
    P = GradedOp.from_monomials(1, p_items).restrict(floor=-(degree - 1))
    return P, Q


def generic_pair() -> tuple[GradedOp, GradedOp]:
    """(d^3 + x, d^2 + x): a noncommuting pair of normalized operators."""
    P = GradedOp.from_monomials(1, [(0, 3, 1), (1, 0, 1)])
    Q = GradedOp.from_monomials(1, [(0, 2, 1), (1, 0, 1)])
    return P, Q


def power_pair() -> tuple[GradedOp, GradedOp]:
    return GradedOp.d_op(1, 3), GradedOp.d_op(1, 2)


def airy_like_pair() -> tuple[GradedOp, GradedOp]:
    """(d^3 + (3/2)x d + 3/4, d^2 + x): commutator is (3/2) x, nonzero."""
    P = GradedOp.from_monomials(1, [(0, 3, 1), (1, 1, Fraction(3, 2)), (0, 0, Fraction(3, 4))])
    Q = GradedOp.from_monomials(1, [(0, 2, 1), (1, 0, 1)])
    return P, Q


_NAMED = {
    "kdv24": lambda: kdv_pair(24),
    "kdv48": lambda: kdv_pair(48),
    "generic": generic_pair,
    "powers": power_pair,
    "airy-like": airy_like_pair,
}


def named_pair(name: str) -> tuple[GradedOp, GradedOp]:
    try:
        return _NAMED[name]()
    except KeyError:
        raise PreconditionError(
            f"unknown fixture {name!r}; available: {', '.join(sorted(_NAMED))}") from None
