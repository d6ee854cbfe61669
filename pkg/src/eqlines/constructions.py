"""Exact lower-bound constructions and a gallery of classical equiangular witnesses."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .codes import Code, LSet, float_lset, parse_lset
from .exactmat import SymMatrix, identity, kron, ones


class UnknownName(KeyError):
    pass


def simplex(n: int) -> Code:
    """Regular simplex: n+1 unit vectors in R^n with all inner products -1/n."""
    if n < 1:
        raise ValueError("simplex needs n >= 1")
    c = Fraction(1, n)
    gram = (identity(n + 1) * (1 + c)) - (ones(n + 1) * c)
    return Code(gram=gram, label=f"simplex-{n}")


@dataclass(frozen=True)
class FamilyParams:
    r: int
    t: int
    tau: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "tau", Fraction(self.tau))
        if self.r < 2 or self.t < 1:
            raise ValueError("need r >= 2 and t >= 1")
        # tau = 1 collapses the negative value to 0; keep both values nonzero
        if not 0 < self.tau < 1:
            raise ValueError("tau must lie strictly between 0 and 1")

    @property
    def values(self) -> tuple[Fraction, Fraction]:
        """(negative, positive) off-diagonal values of the Gram matrix."""
        s = self.r - 1 + self.tau
        return -(1 - self.tau) / s, self.tau / s

    @property
    def dimension(self) -> int:
        return (self.r - 1) * self.t + 1

    def lset(self) -> LSet:
        neg, pos = self.values
        return LSet(((Fraction(-1), neg),), (pos,))


def ls_inner_matrix(r: int, t: int) -> SymMatrix:
    """(r-1) I_{rt} - (J_r - I_r) (x) I_t: PSD with nullity t."""
    off = kron(ones(r) - identity(r), identity(t))
    return identity(r * t) * (r - 1) - off


def ls_family(r: int, t: int, tau=Fraction(1, 2)) -> Code:
    """Gram code (M + tau J) / (r - 1 + tau) of size rt in dimension (r-1)t + 1.

    Point k*t + i belongs to block k; points i and i + t, i + 2t, ... share the
    negative inner product.
    """
    p = FamilyParams(r, t, tau)
    m = ls_inner_matrix(r, t)
    gram = (m + ones(r * t) * p.tau) * (1 / (r - 1 + p.tau))
    return Code(gram=gram, label=f"ls-r{r}-t{t}-tau{p.tau}")


def _icosahedron() -> Code:
    phi = (1 + 5 ** 0.5) / 2
    raw = np.array(
        [[0, 1, phi], [0, -1, phi], [1, phi, 0], [-1, phi, 0], [phi, 0, 1], [phi, 0, -1]],
        dtype=float,
    ).T
    return Code.from_vectors(raw / np.linalg.norm(raw, axis=0), label="icosahedron-6")


def _e7_28() -> Code:
    vecs = []
    for pair in combinations(range(8), 2):
        vecs.append([3 if k in pair else -1 for k in range(8)])
    gram = [[Fraction(sum(a * b for a, b in zip(u, v)), 24) for v in vecs] for u in vecs]
    return Code(gram=SymMatrix(gram), label="e7-28")


PETERSEN_EDGES = (
    [(i, (i + 1) % 5) for i in range(5)]
    + [(i, i + 5) for i in range(5)]
    + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
)


def _petersen_10() -> Code:
    adj = [[0] * 10 for _ in range(10)]
    for u, v in PETERSEN_EDGES:
        adj[u][v] = adj[v][u] = 1
    # Seidel matrix S = J - I - 2A; Gram = I + S/3
    gram = [
        [Fraction(1) if i == j else Fraction(1 - 2 * adj[i][j], 3) for j in range(10)]
        for i in range(10)
    ]
    return Code(gram=SymMatrix(gram), label="petersen-10")


_GALLERY = {
    "icosahedron-6": (_icosahedron, lambda: float_lset([-(5 ** -0.5), 5 ** -0.5]), 3),
    "e7-28": (_e7_28, lambda: parse_lset("[-1,-1/3]u{1/3}"), 7),
    "petersen-10": (_petersen_10, lambda: parse_lset("[-1,-1/3]u{1/3}"), 5),
}

GALLERY_NAMES = tuple(_GALLERY)


def gallery(name: str) -> Code:
    try:
        build = _GALLERY[name][0]
    except KeyError:
        raise UnknownName(f"unknown gallery code {name!r}; choose from {', '.join(GALLERY_NAMES)}") from None
    return build()


def gallery_lset(name: str) -> LSet:
    """The L-set each gallery code is declared against."""
    if name not in _GALLERY:
        raise UnknownName(name)
    return _GALLERY[name][1]()


def gallery_rank(name: str) -> int:
    if name not in _GALLERY:
        raise UnknownName(name)
    return _GALLERY[name][2]
