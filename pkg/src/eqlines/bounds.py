"""Classical upper bounds on equiangular lines and the explicit linear-bound constant chain."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb, isqrt

from .exactmat import format_rational

# N_{1/5}(d) = floor(3(d-1)/2) is only known "for d large enough"; this cutoff is an assumption
N_ONE_FIFTH_THRESHOLD = 185


@dataclass(frozen=True)
class GerzonBound:
    bound: int
    equality_possible: bool


def gerzon(d: int) -> GerzonBound:
    if d < 1:
        raise ValueError("dimension must be positive")
    s = d + 2
    r = isqrt(s)
    odd_square = r * r == s and r % 2 == 1
    return GerzonBound(d * (d + 1) // 2, d in (2, 3) or odd_square)


def relative_bound(d: int, alpha) -> Fraction | float | None:
    """d(1 - a^2)/(1 - d a^2) when d < 1/a^2, else None."""
    if d < 1:
        raise ValueError("dimension must be positive")
    a2 = alpha * alpha
    if d * a2 >= 1:
        return None
    return d * (1 - a2) / (1 - d * a2)


@dataclass(frozen=True)
class ClassicalCaps:
    two_d_applies: bool
    known_exact: int | None
    threshold_assumed: bool = False


def classical_caps(alpha, d: int, one_fifth_threshold: int = N_ONE_FIFTH_THRESHOLD) -> ClassicalCaps:
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    inv = 1 / alpha
    odd = inv.denominator == 1 and inv.numerator % 2 == 1
    if alpha == Fraction(1, 3) and d >= 15:
        return ClassicalCaps(not odd, 2 * d - 2)
    if alpha == Fraction(1, 5) and d >= one_fifth_threshold:
        return ClassicalCaps(not odd, 3 * (d - 1) // 2, threshold_assumed=True)
    return ClassicalCaps(not odd, None)


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


@dataclass(frozen=True)
class BukhBreakdown:
    beta: Fraction
    t: Fraction
    eps: Fraction
    n0: Fraction
    B: int
    delta: Fraction
    n: int
    R_bound: int
    pow_term: int
    M: int
    c: int

    def as_rows(self) -> list[tuple[str, str]]:
        rows = []
        for key, value in asdict(self).items():
            rows.append((key, format_rational(value) if isinstance(value, Fraction) else str(value)))
        return rows

    def to_dict(self) -> dict:
        return dict(self.as_rows())


def window_size(t: Fraction, delta: Fraction, n0: Fraction) -> int:
    return max(_ceil(Fraction(n0)), _ceil(Fraction(t) / Fraction(delta)))


def lemma6_M(n: int, eps: Fraction, beta: Fraction) -> tuple[int, int, int]:
    """(R_bound, pow_term, M) for window size n.

    R is replaced by the binomial estimate C(n + ceil(1/beta) + 1, n); true R is smaller.
    """
    r_bound = comb(n + _ceil(1 / beta) + 1, n)
    pow_term = _ceil((1 / Fraction(eps) + 1) * 2 ** n)
    return r_bound, pow_term, max(r_bound, pow_term)


def bukh_constant(beta) -> BukhBreakdown:
    """Every constant in the chain behind |P| <= B M d for L = [-1,-beta] u {alpha}."""
    beta = Fraction(beta)
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    t = 1 / beta + 1
    eps = beta * beta / 2
    n0 = 1 + 8 / (beta * beta)
    big_b = _ceil(1 / beta + 1)
    delta = Fraction(1, (big_b + 1) ** 2)
    n = window_size(t, delta, n0)
    r_bound, pow_term, m = lemma6_M(n, eps, beta)
    return BukhBreakdown(beta, t, eps, n0, big_b, delta, n, r_bound, pow_term, m, big_b * m)
