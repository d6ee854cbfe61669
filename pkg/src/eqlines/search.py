"""Exhaustive search for maximum equiangular line systems through Seidel matrices.

A normalized Seidel matrix of order m has +1 throughout row 0 (always reachable
by switching), so it is encoded by the C(m-1, 2) signs among vertices 1..m-1:
bit b is set when pair b, in the order (1,2), (1,3), ..., (m-2,m-1), carries -1.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .codes import Code, code_to_dict, realize
from .exactmat import SymMatrix, charpoly, format_rational, identity, ldlt_certify, polyval, rank

MAX_ORDER = 8
CLUSTER_TOL = 1e-8
MAX_DENOMINATOR = 100
BATCH = 1 << 15


class OrderTooLarge(ValueError):
    pass


class InfeasibleAlpha(ValueError):
    pass


def pair_index(m: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, m) for j in range(i + 1, m)]


@dataclass(frozen=True)
class SeidelMatrix:
    order: int
    code: int

    @classmethod
    def from_graph(cls, m: int, minus_edges: Sequence[tuple[int, int]]) -> "SeidelMatrix":
        """Normalize the Seidel matrix whose -1 entries are ``minus_edges`` by switching."""
        s = [[0 if i == j else 1 for j in range(m)] for i in range(m)]
        for u, v in minus_edges:
            s[u][v] = s[v][u] = -1
        flip = [1] + [s[0][j] for j in range(1, m)]
        code = 0
        for b, (i, j) in enumerate(pair_index(m)):
            if s[i][j] * flip[i] * flip[j] < 0:
                code |= 1 << b
        return cls(m, code)

    def dense(self) -> list[list[int]]:
        m = self.order
        s = [[0 if i == j else 1 for j in range(m)] for i in range(m)]
        for b, (i, j) in enumerate(pair_index(m)):
            if self.code >> b & 1:
                s[i][j] = s[j][i] = -1
        return s

    def minus_edges(self) -> list[tuple[int, int]]:
        return [p for b, p in enumerate(pair_index(self.order)) if self.code >> b & 1]

    def exact(self) -> SymMatrix:
        return SymMatrix(self.dense())

    def to_float(self) -> np.ndarray:
        return np.array(self.dense(), dtype=float)


def _check_order(m: int) -> None:
    if m > MAX_ORDER:
        raise OrderTooLarge(f"order {m} exceeds the enumeration limit {MAX_ORDER}")
    if m < 1:
        raise ValueError("order must be positive")


def normalized_codes(m: int, dedup: bool = False) -> np.ndarray:
    _check_order(m)
    if dedup:
        return _kernels.orbit_representatives(m)
    nbits = (m - 1) * (m - 2) // 2 if m >= 2 else 0
    return np.arange(1 << nbits, dtype=np.int64)


def enumerate_switching_classes(m: int, dedup: bool = False) -> Iterator[SeidelMatrix]:
    """Every normalized Seidel matrix of order m (one per relabelling orbit with ``dedup``)."""
    for c in normalized_codes(m, dedup):
        yield SeidelMatrix(m, int(c))


@dataclass(frozen=True)
class SpectralCert:
    lambda_min: float
    multiplicity: int
    alpha: Fraction | float
    d_min: int
    exactness: str  # "rational-certified" | "float-certified"
    tolerance: float = CLUSTER_TOL

    def to_dict(self) -> dict:
        a = format_rational(self.alpha) if isinstance(self.alpha, Fraction) else repr(float(self.alpha))
        return {
            "lambda_min": repr(float(self.lambda_min)),
            "multiplicity": self.multiplicity,
            "alpha": a,
            "d_min": self.d_min,
            "exactness": self.exactness,
            "tolerance": self.tolerance,
        }


def spectral_feasibility(s: SeidelMatrix) -> SpectralCert:
    """Smallest eigenvalue, its multiplicity, the implied angle and the minimal dimension.

    Float clustering first; a smallest eigenvalue that rounds to a rational with
    small denominator is re-certified exactly (characteristic polynomial root,
    exact nullity, exact rank of I + alpha S).
    """
    m = s.order
    w = np.linalg.eigvalsh(s.to_float())
    lam = float(w[0])
    mult = int(np.sum(np.abs(w - lam) <= CLUSTER_TOL))
    if lam >= -1 - CLUSTER_TOL:
        raise InfeasibleAlpha(f"smallest eigenvalue {lam:.12g} >= -1 gives alpha >= 1")
    q = Fraction(lam).limit_denominator(MAX_DENOMINATOR)
    if abs(float(q) - lam) <= CLUSTER_TOL:
        ex = s.exact()
        if polyval(charpoly(ex), q) == 0:
            shifted = ex - identity(m) * q
            mult_exact = m - rank(shifted)
            alpha = -1 / q
            cert = ldlt_certify(identity(m) + ex * alpha)
            if not cert.is_psd or cert.rank != m - mult_exact:  # pragma: no cover
                raise AssertionError("exact recertification disagrees with the spectrum")
            return SpectralCert(float(q), mult_exact, alpha, m - mult_exact, "rational-certified", 0.0)
    return SpectralCert(lam, mult, -1.0 / lam, m - mult, "float-certified")


@dataclass(frozen=True)
class SearchResult:
    d: int
    m_max: int
    witness: SeidelMatrix
    cert: SpectralCert
    exhaustive: bool

    def witness_gram(self) -> SymMatrix | np.ndarray:
        a = self.cert.alpha
        if isinstance(a, Fraction):
            return identity(self.witness.order) + self.witness.exact() * a
        return np.eye(self.witness.order) + a * self.witness.to_float()

    def witness_code(self) -> Code:
        g = self.witness_gram()
        label = f"seidel-m{self.m_max}-code{self.witness.code}"
        if isinstance(g, SymMatrix):
            return Code(gram=g, label=label)
        w, q = np.linalg.eigh(g)
        keep = w > 1e-8
        v = (q[:, keep] * np.sqrt(w[keep])).T
        return Code.from_vectors(v, label=label)

    def to_dict(self) -> dict:
        return {
            "search": {
                "d": self.d,
                "m_max": self.m_max,
                "exhaustive": self.exhaustive,
                "seidel_order": self.witness.order,
                "seidel_code": self.witness.code,
                "minus_edges": [list(e) for e in self.witness.minus_edges()],
            },
            "certificate": self.cert.to_dict(),
            "witness": code_to_dict(self.witness_code()),
        }

    def to_text(self) -> str:
        a = self.cert.alpha
        a_txt = format_rational(a) if isinstance(a, Fraction) else f"{a:.12g}"
        return (
            f"dimension {self.d}: maximum {self.m_max} equiangular lines "
            f"({'exhaustive' if self.exhaustive else 'partial'} scan)\n"
            f"  witness: Seidel order {self.witness.order}, code {self.witness.code}, "
            f"-1 pairs {self.witness.minus_edges()}\n"
            f"  lambda_min = {self.cert.lambda_min:.12g} (x{self.cert.multiplicity}), alpha = {a_txt}, "
            f"d_min = {self.cert.d_min}, {self.cert.exactness}\n"
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def _scan_chunk(args) -> int | None:
    """Least code in the chunk whose smallest eigenvalue is < -1 with d_min <= d."""
    m, d, codes = args
    need = m - d  # required multiplicity of the smallest eigenvalue
    for start in range(0, len(codes), BATCH):
        chunk = codes[start:start + BATCH]
        mats = _kernels.seidel_fill(m, chunk)
        w = np.linalg.eigvalsh(mats)
        lam = w[:, 0]
        mult = np.sum(np.abs(w - lam[:, None]) <= CLUSTER_TOL, axis=1)
        ok = (lam < -1 - CLUSTER_TOL) & (mult >= need)
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(chunk[hit[0]])
    return None


def scan_order(m: int, d: int, dedup: bool = False, workers: int = 1) -> SeidelMatrix | None:
    """Least-code normalized matrix of order m realizable as m lines in R^d, if any."""
    codes = normalized_codes(m, dedup)
    if workers <= 1 or len(codes) < 4 * BATCH:
        found = _scan_chunk((m, d, codes))
    else:
        parts = np.array_split(codes, workers * 4)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            hits = [h for h in pool.map(_scan_chunk, [(m, d, p) for p in parts]) if h is not None]
        found = min(hits) if hits else None
    return None if found is None else SeidelMatrix(m, found)


def max_lines(d: int, m_cap: int, dedup: bool = False, workers: int = 1) -> SearchResult:
    """Largest m <= m_cap admitting m equiangular lines in R^d, scanning m downwards."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    _check_order(m_cap)
    if m_cap < d + 1:
        raise ValueError(f"max order {m_cap} must exceed the dimension {d}")
    for m in range(m_cap, d, -1):
        s = scan_order(m, d, dedup, workers)
        if s is not None:
            cert = spectral_feasibility(s)
            return SearchResult(d, m, s, cert, exhaustive=True)
    raise AssertionError("the regular simplex always gives d + 1 lines")  # pragma: no cover


def witness_lset(result: SearchResult):
    from .codes import LSet, float_lset

    a = result.cert.alpha
    if isinstance(a, Fraction):
        return LSet((), (-a, a))
    return float_lset([-a, a])


def witness_realization(result: SearchResult, tol: float = 1e-9) -> Code:
    code = result.witness_code()
    return realize(code, tol) if code.is_exact else code
