"""L-sets, spherical codes in Gram or vector form, validation and the attachment graph."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .exactmat import SymMatrix, format_rational, ldlt_certify, parse_rational
from .graphs import Graph

DEFAULT_TOL = 1e-9


class ParseError(ValueError):
    def __init__(self, position: int, message: str):
        super().__init__(f"at position {position}: {message}")
        self.position = position


class RangeError(ValueError):
    pass


class NotUnit(ValueError):
    pass


class NotPsd(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class AmbiguousL(ValueError):
    pass


class ToleranceUnachievable(ArithmeticError):
    pass


class CodeFormatError(ValueError):
    pass


Scalar = Fraction | float


def _fmt(x: Scalar) -> str:
    return format_rational(x) if isinstance(x, Fraction) else repr(float(x))


@dataclass(frozen=True)
class LSet:
    """Closed intervals plus isolated points inside [-1, 1)."""

    intervals: tuple[tuple[Scalar, Scalar], ...] = ()
    points: tuple[Scalar, ...] = ()

    def __post_init__(self):
        for lo, hi in self.intervals:
            if not (-1 <= lo <= hi < 1):
                raise RangeError(f"interval [{_fmt(lo)},{_fmt(hi)}] not inside [-1,1)")
        for p in self.points:
            if not (-1 <= p < 1):
                raise RangeError(f"point {_fmt(p)} not inside [-1,1)")
        ivs = sorted(self.intervals)
        for (a, b), (c, d) in zip(ivs, ivs[1:]):
            if c <= b:
                raise RangeError("intervals overlap")
        for p in self.points:
            if any(lo <= p <= hi for lo, hi in self.intervals):
                raise RangeError(f"point {_fmt(p)} lies inside an interval")
        if len(set(self.points)) != len(self.points):
            raise RangeError("repeated point")

    @property
    def exact(self) -> bool:
        vals = [v for iv in self.intervals for v in iv] + list(self.points)
        return all(isinstance(v, Fraction) for v in vals)

    def contains(self, x: Scalar, tol: float = 0.0) -> bool:
        if tol == 0:
            return any(lo <= x <= hi for lo, hi in self.intervals) or any(x == p for p in self.points)
        x = float(x)
        return any(float(lo) - tol <= x <= float(hi) + tol for lo, hi in self.intervals) or any(
            abs(x - float(p)) <= tol for p in self.points
        )

    def in_negative_part(self, x: Scalar, tol: float = 0.0) -> bool:
        if tol == 0:
            return any(lo <= x <= hi for lo, hi in self.intervals)
        return any(float(lo) - tol <= float(x) <= float(hi) + tol for lo, hi in self.intervals)

    def theorem_shape(self) -> tuple[Scalar, Scalar]:
        """Return ``(alpha, beta)`` for L = [-1,-beta] u {alpha}-style sets.

        Several negative intervals are allowed; beta is read off the one closest
        to zero.
        """
        if len(self.points) != 1 or not self.intervals or any(hi > 0 for _, hi in self.intervals):
            raise AmbiguousL(f"{self} is not of the form [-1,-beta] u {{alpha}}")
        alpha = self.points[0]
        beta = -max(hi for _, hi in self.intervals)
        return alpha, beta

    def __str__(self) -> str:
        terms = [f"[{_fmt(lo)},{_fmt(hi)}]" for lo, hi in self.intervals]
        terms += [f"{{{_fmt(p)}}}" for p in self.points]
        return "u".join(terms)


_NUM = re.compile(r"\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?)")


def parse_lset(text: str) -> LSet:
    """Parse ``term ('u' term)*`` with ``term = '[' num ',' num ']' | '{' num '}'``."""
    pos = 0
    intervals: list[tuple[Fraction, Fraction]] = []
    points: list[Fraction] = []

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(ch: str):
        nonlocal pos
        skip()
        if pos >= len(text) or text[pos] != ch:
            got = text[pos] if pos < len(text) else "end of input"
            raise ParseError(pos, f"expected {ch!r}, got {got!r}")
        pos += 1

    def number() -> Fraction:
        nonlocal pos
        m = _NUM.match(text, pos)
        if not m:
            raise ParseError(pos, "expected a number")
        pos = m.end()
        try:
            return parse_rational(m.group(1))
        except (ValueError, ZeroDivisionError):
            raise ParseError(m.start(1), f"bad number {m.group(1)!r}") from None

    while True:
        skip()
        if pos >= len(text):
            raise ParseError(pos, "expected '[' or '{'")
        if text[pos] == "[":
            pos += 1
            lo = number()
            expect(",")
            hi = number()
            expect("]")
            if lo > hi:
                raise RangeError(f"empty interval [{lo},{hi}]")
            intervals.append((lo, hi))
        elif text[pos] == "{":
            pos += 1
            points.append(number())
            expect("}")
        else:
            raise ParseError(pos, f"expected '[' or '{{', got {text[pos]!r}")
        skip()
        if pos == len(text):
            break
        if text[pos] not in "uU":
            raise ParseError(pos, f"expected 'u', got {text[pos]!r}")
        pos += 1
    for v in [x for iv in intervals for x in iv] + points:
        if not -1 <= v < 1:
            raise RangeError(f"value {format_rational(v)} outside [-1,1)")
    return LSet(tuple(intervals), tuple(points))


@dataclass(frozen=True)
class Code:
    """A spherical code, either as an exact Gram matrix or as floating column vectors."""

    gram: SymMatrix | None = None
    vectors: np.ndarray | None = field(default=None, compare=False)
    tol: float = DEFAULT_TOL
    label: str = ""

    def __post_init__(self):
        if (self.gram is None) == (self.vectors is None):
            raise ValueError("exactly one of gram / vectors must be given")
        if self.vectors is not None:
            v = np.asarray(self.vectors, dtype=float)
            if v.ndim != 2:
                raise ValueError("vectors must be a d x m array")
            object.__setattr__(self, "vectors", v)

    @classmethod
    def from_gram(cls, gram, label: str = "") -> "Code":
        g = gram if isinstance(gram, SymMatrix) else SymMatrix(gram)
        return cls(gram=g, label=label)

    @classmethod
    def from_vectors(cls, vectors, tol: float = DEFAULT_TOL, label: str = "") -> "Code":
        return cls(vectors=np.asarray(vectors, dtype=float), tol=tol, label=label)

    @property
    def is_exact(self) -> bool:
        return self.gram is not None

    @property
    def size(self) -> int:
        return self.gram.order if self.gram is not None else self.vectors.shape[1]

    def inner(self, i: int, j: int) -> Scalar:
        if self.gram is not None:
            return self.gram.rows[i][j]
        return float(self.vectors[:, i] @ self.vectors[:, j])

    def float_gram(self) -> np.ndarray:
        if self.gram is not None:
            return self.gram.to_float()
        return gram_of(self)


@dataclass
class ValidationReport:
    ok: bool
    dimension: int
    size: int
    offending_pairs: list[tuple[int, int, Scalar]]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "dimension": self.dimension,
            "size": self.size,
            "offending_pairs": [[i, j, _fmt(v)] for i, j, v in self.offending_pairs],
        }


def _float_rank(g: np.ndarray, tol: float) -> int:
    if g.size == 0:
        return 0
    w = np.linalg.eigvalsh(g)
    return int(np.sum(w > max(tol, 1e-12) * max(1.0, g.shape[0]) * 10))


def validate(code: Code, lset: LSet) -> ValidationReport:
    """Check every off-diagonal inner product against ``lset``.

    Raises :class:`NotUnit` for a non-unit point and :class:`NotPsd` when an exact
    Gram matrix is not positive semidefinite.
    """
    m = code.size
    offending = []
    if code.is_exact:
        g = code.gram
        for i in range(m):
            if g.rows[i][i] != 1:
                raise NotUnit(f"diagonal entry {i} is {format_rational(g.rows[i][i])}, not 1")
        cert = ldlt_certify(g)
        if not cert.is_psd:
            raise NotPsd("Gram matrix is not positive semidefinite", cert.failure_witness)
        dim = cert.rank
        for i in range(m):
            row = g.rows[i]
            for j in range(i + 1, m):
                if not lset.contains(row[j]):
                    offending.append((i, j, row[j]))
    else:
        v = code.vectors
        norms = np.linalg.norm(v, axis=0)
        bad = np.nonzero(np.abs(norms - 1.0) > code.tol)[0]
        if bad.size:
            raise NotUnit(f"column {int(bad[0])} has norm {norms[bad[0]]!r}")
        g = v.T @ v
        dim = _float_rank(g, code.tol)
        for i in range(m):
            for j in range(i + 1, m):
                if not lset.contains(g[i, j], code.tol):
                    offending.append((i, j, float(g[i, j])))
    return ValidationReport(not offending, dim, m, offending)


def attachment_graph(code: Code, lset: LSet) -> Graph:
    """Graph joining pairs whose inner product lies in the negative interval part of L."""
    lset.theorem_shape()
    m = code.size
    tol = 0.0 if code.is_exact else code.tol
    edges = []
    if code.is_exact:
        rows = code.gram.rows
        for i in range(m):
            for j in range(i + 1, m):
                if lset.in_negative_part(rows[i][j]):
                    edges.append((i, j))
    else:
        g = gram_of(code)
        for i in range(m):
            for j in range(i + 1, m):
                if lset.in_negative_part(g[i, j], tol):
                    edges.append((i, j))
    return Graph.from_edges(m, edges)


def realize(code: Code, tol: float = DEFAULT_TOL) -> Code:
    """Produce floating coordinates for an exact Gram code at its certified rank."""
    if not code.is_exact:
        return code
    cert = ldlt_certify(code.gram)
    if not cert.is_psd:
        raise NotPsd("cannot realize a non-PSD Gram matrix", cert.failure_witness)
    d = cert.rank
    g = code.gram.to_float()
    w, q = np.linalg.eigh(g)
    idx = np.argsort(w)[::-1][:d]
    lam = np.clip(w[idx], 0.0, None)
    v = (q[:, idx] * np.sqrt(lam)).T
    err = float(np.max(np.abs(v.T @ v - g))) if g.size else 0.0
    if err > tol:
        raise ToleranceUnachievable(f"round-trip error {err:.3e} exceeds {tol:.1e}")
    return Code.from_vectors(v, tol=tol, label=code.label)


def gram_of(code: Code) -> np.ndarray:
    if code.is_exact:
        return code.gram.to_float()
    return code.vectors.T @ code.vectors


# ---------------------------------------------------------------- file format

def code_to_dict(code: Code) -> dict:
    if code.is_exact:
        return {
            "kind": "gram",
            "scalar": "rational",
            "order": code.size,
            "entries": [[format_rational(x) for x in r] for r in code.gram.rows],
            "label": code.label,
            "tolerance": 0,
        }
    d, m = code.vectors.shape
    return {
        "kind": "vectors",
        "scalar": "float64",
        "dim": d,
        "order": m,
        "entries": [[repr(float(x)) for x in r] for r in code.vectors],
        "label": code.label,
        "tolerance": code.tol,
    }


def code_from_dict(data: dict) -> Code:
    try:
        kind, scalar = data["kind"], data["scalar"]
        entries = data["entries"]
        label = data.get("label", "")
        if kind == "gram" and scalar == "rational":
            g = SymMatrix([[parse_rational(x) for x in r] for r in entries])
            if g.order != data["order"]:
                raise CodeFormatError("order does not match entries")
            return Code(gram=g, label=label)
        if kind == "gram" and scalar == "float64":
            g = np.array([[float(x) for x in r] for r in entries])
            tol = float(data.get("tolerance", DEFAULT_TOL))
            w, q = np.linalg.eigh(g)
            keep = w > tol
            v = (q[:, keep] * np.sqrt(w[keep])).T
            return Code.from_vectors(v, tol=tol, label=label)
        if kind == "vectors":
            v = np.array([[float(x) for x in r] for r in entries], dtype=float)
            if v.shape != (data["dim"], data["order"]):
                raise CodeFormatError("dim/order do not match entries")
            return Code.from_vectors(v, tol=float(data.get("tolerance", DEFAULT_TOL)), label=label)
    except (KeyError, TypeError) as exc:
        raise CodeFormatError(f"malformed code file: {exc}") from exc
    raise CodeFormatError(f"unsupported kind/scalar: {kind}/{scalar}")


def dumps_code(code: Code) -> str:
    return json.dumps(code_to_dict(code), indent=1, sort_keys=True) + "\n"


def loads_code(text: str) -> Code:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CodeFormatError(str(exc)) from exc
    return code_from_dict(data)


def save_code(code: Code, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_code(code))


def load_code(path) -> Code:
    with open(path, encoding="utf-8") as fh:
        return loads_code(fh.read())


def float_lset(values: Sequence[Real], intervals: Sequence[tuple[Real, Real]] = ()) -> LSet:
    """L-set with floating endpoints, for irrational angles such as 1/sqrt(5)."""
    return LSet(tuple((float(a), float(b)) for a, b in intervals), tuple(float(v) for v in values))
