"""Checkable consequences of the linear-bound argument, on concrete codes and exact grids.

Covers the inverse of alpha J + (1 - alpha) I, projection inner products from
Gram data, the quadratic R(m, n) and its lower bound, the corner-minimum claim,
negative-family counting, the windowed bad-vertex audit and the peeling loop.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping, Sequence

from .bounds import _ceil, bukh_constant, lemma6_M, window_size
from .codes import Code, LSet, attachment_graph, validate
from .exactmat import SingularMatrix, SymMatrix, format_rational, identity, inverse, ones, rank, solve
from .graphs import Graph, independent_search, transversal_clique


class DomainError(ValueError):
    pass


class SingularBasis(ValueError):
    pass


class NotIndependent(ValueError):
    pass


class PreconditionViolated(ValueError):
    def __init__(self, message: str, offending=()):
        super().__init__(message)
        self.offending = list(offending)


class InvalidCode(ValueError):
    pass


def _fmt(x) -> str:
    return format_rational(x) if isinstance(x, Fraction) else str(x)


# ------------------------------------------------------------------ inverse

def phi(n: int, alpha) -> Fraction:
    alpha = Fraction(alpha)
    return alpha / (1 + (n - 1) * alpha)


def closed_form_inverse(n: int, alpha) -> tuple[SymMatrix, Fraction]:
    """Inverse of alpha J + (1 - alpha) I as (I - phi J)/(1 - alpha), together with phi."""
    alpha = Fraction(alpha)
    if n < 1 or not 0 < alpha < 1:
        raise DomainError("need n >= 1 and 0 < alpha < 1")
    f = phi(n, alpha)
    mat = (identity(n) - ones(n) * f) * (1 / (1 - alpha))
    return mat, f


def equiangular_gram(n: int, alpha) -> SymMatrix:
    alpha = Fraction(alpha)
    return ones(n) * alpha + identity(n) * (1 - alpha)


# ------------------------------------------------------------------ projections

def projection_inner(code: Code, basis: Sequence[int], i: int, j: int, lset: LSet | None = None) -> Fraction:
    """<v_i, v_j> for the projections of points i, j onto span(basis), from Gram data only.

    With ``lset`` given, the basis must also be independent in the attachment graph.
    """
    if not code.is_exact:
        raise TypeError("projection_inner needs an exact Gram code")
    if lset is not None:
        g = attachment_graph(code, lset)
        if not g.is_independent(basis):
            raise NotIndependent(f"basis {list(basis)} is not independent in the attachment graph")
    rows = code.gram.rows
    gb = code.gram.principal(list(basis))
    s = [rows[b][i] for b in basis]
    s2 = [rows[b][j] for b in basis]
    try:
        x = solve(gb, s2)
    except SingularMatrix as exc:
        raise SingularBasis(str(exc)) from None
    return sum((a * b for a, b in zip(s, x)), Fraction(0))


def projection_gram(code: Code, basis: Sequence[int], points: Sequence[int]) -> SymMatrix:
    """Gram matrix of the projections of ``points`` onto span(basis)."""
    rows = code.gram.rows
    gb = code.gram.principal(list(basis))
    try:
        inv = inverse(gb)
    except SingularMatrix as exc:
        raise SingularBasis(str(exc)) from None
    svecs = [[rows[b][p] for b in basis] for p in points]
    ys = [inv.apply(s) for s in svecs]
    return SymMatrix([[sum((a * b for a, b in zip(s, y)), Fraction(0)) for y in ys] for s in svecs])


def residual_gram(code: Code, basis: Sequence[int], points: Sequence[int]) -> SymMatrix:
    """Gram matrix of the components of ``points`` orthogonal to span(basis)."""
    proj = projection_gram(code, basis, points)
    full = code.gram.principal(list(points))
    return full - proj


# ------------------------------------------------------------------ R(m, n)

@dataclass(frozen=True)
class Lemma4Quantities:
    t: Fraction
    t_star: Fraction
    eps: Fraction
    n0: Fraction


def lemma4_quantities(alpha, beta) -> Lemma4Quantities:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not 0 < beta <= alpha < 1:
        raise DomainError(f"need 0 < beta <= alpha < 1, got alpha={alpha}, beta={beta}")
    return Lemma4Quantities(
        t=1 / beta + 1,
        t_star=t_star(alpha, beta),
        eps=beta * beta / 2,
        n0=1 + 8 / (beta * beta),
    )


def t_star(alpha, beta) -> Fraction:
    alpha, beta = Fraction(alpha), Fraction(beta)
    return (1 - alpha) * (alpha - beta) / (alpha * (alpha + beta))


def r_poly(m, n: int, alpha, beta) -> Fraction:
    """alpha^2 (n-m) + beta^2 m - phi ((n-m) alpha - m beta)^2, with phi = phi(n, alpha)."""
    m, alpha, beta = Fraction(m), Fraction(alpha), Fraction(beta)
    if n < 1:
        raise DomainError("n must be positive")
    return alpha * alpha * (n - m) + beta * beta * m - phi(n, alpha) * ((n - m) * alpha - m * beta) ** 2


def r_at_one_closed_form(n: int, alpha, beta) -> Fraction:
    alpha, beta = Fraction(alpha), Fraction(beta)
    return alpha * (1 - alpha) + (alpha + beta) ** 2 - alpha * (1 + beta) ** 2 / (1 + alpha * (n - 1))


def lemma4_threshold(alpha, beta) -> Fraction:
    """alpha(1 - alpha) + (alpha + beta)^2 / 2, the bound R(m, n) must exceed."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    return alpha * (1 - alpha) + (alpha + beta) ** 2 / 2


def lemma4_m_range(n: int, alpha, beta) -> range:
    """Integers m with 1 <= m <= n - t_star - 1."""
    top = Fraction(n) - t_star(alpha, beta) - 1
    return range(1, top.numerator // top.denominator + 1)


def verify_lemma4_bound(alpha, beta, n_range: Iterable[int], m_range: Iterable[int] | None = None) -> bool:
    """True iff R(m, n) > alpha(1-alpha) + (alpha+beta)^2/2 on the whole range, exactly.

    ``m_range`` defaults to every admissible m for each n. Points outside
    n >= n0, 1 <= m <= n - t_star - 1 raise :class:`DomainError`.
    """
    q = lemma4_quantities(alpha, beta)
    thr = lemma4_threshold(alpha, beta)
    for n in n_range:
        if n < q.n0:
            raise DomainError(f"n={n} below n0={_fmt(q.n0)}")
        admissible = lemma4_m_range(n, alpha, beta)
        ms = admissible if m_range is None else m_range
        for m in ms:
            if m not in admissible:
                raise DomainError(f"m={m} outside [1, n - t_star - 1] for n={n}")
            if not r_poly(m, n, alpha, beta) > thr:
                return False
    return True


def optim_value(alpha, n: int, betas: Sequence, betas2: Sequence) -> Fraction:
    """alpha^2 (n-m) + sum b_i b'_i - phi (sum s_i)(sum s'_i) with s = (-b_1..-b_m, alpha..alpha)."""
    alpha = Fraction(alpha)
    m = len(betas)
    s = (n - m) * alpha - sum(betas, Fraction(0))
    s2 = (n - m) * alpha - sum(betas2, Fraction(0))
    cross = sum((Fraction(a) * b for a, b in zip(betas, betas2)), Fraction(0))
    return alpha * alpha * (n - m) + cross - phi(n, alpha) * s * s2


def corner_grid(beta, step) -> list[Fraction]:
    beta, step = Fraction(beta), Fraction(step)
    vals = []
    v = beta
    while v < 1:
        vals.append(v)
        v += step
    vals.append(Fraction(1))
    return vals


def verify_corner_minimum(alpha, beta, m: int, n: int, grid_step) -> bool:
    """Brute force: does the all-beta corner attain the minimum over the grid?"""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not 1 <= m < n:
        raise DomainError("need 1 <= m < n")
    vals = corner_grid(beta, grid_step)
    # scale to integers so the 2m-fold product loop stays in int arithmetic
    den = 1
    for v in vals + [alpha, phi(n, alpha)]:
        den = den * v.denominator // _gcd(den, v.denominator)
    iv = [int(v * den) for v in vals]
    a = int(alpha * den)
    f_num = phi(n, alpha)
    p_num, p_den = f_num.numerator, f_num.denominator

    def scaled(bs, bps):
        # den^2 * optim_value * p_den
        s = (n - m) * a - sum(bs)
        s2 = (n - m) * a - sum(bps)
        cross = sum(x * y for x, y in zip(bs, bps))
        return (a * a * (n - m) + cross) * p_den - p_num * s * s2

    corner = scaled([iv[0]] * m, [iv[0]] * m)
    for combo in product(iv, repeat=2 * m):
        if scaled(combo[:m], combo[m:]) < corner:
            return False
    return True


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ------------------------------------------------------------------ negative families

@dataclass(frozen=True)
class NegativeFamilyCheck:
    count: int
    bound: Fraction
    ok: bool
    sum_of_entries: Fraction  # equals ||sum u_i||^2 for genuine vectors
    certificate_nonnegative: bool


def check_negative_family(gram: SymMatrix, gamma) -> NegativeFamilyCheck:
    """Count vectors of norm <= 1 with pairwise inner products <= -gamma against 1/gamma + 1."""
    gamma = Fraction(gamma)
    if gamma <= 0:
        raise PreconditionViolated("gamma must be positive")
    n = gram.order
    bad = []
    for i in range(n):
        if gram.rows[i][i] > 1:
            bad.append((i, i, gram.rows[i][i]))
        for j in range(i + 1, n):
            if gram.rows[i][j] > -gamma:
                bad.append((i, j, gram.rows[i][j]))
    if bad:
        raise PreconditionViolated(f"{len(bad)} entries violate the preconditions", bad)
    total = sum((x for r in gram.rows for x in r), Fraction(0))
    bound = 1 / gamma + 1
    return NegativeFamilyCheck(n, bound, n <= bound, total, total >= 0)


def check_independent_rank(code: Code, indep: Sequence[int], lset: LSet) -> bool:
    """True iff the independent set's Gram submatrix has full rank."""
    g = attachment_graph(code, lset)
    if not g.is_independent(indep):
        raise NotIndependent(f"{list(indep)} is not independent in the attachment graph")
    return rank(code.gram.principal(list(indep))) == len(indep)


# ------------------------------------------------------------------ bad-vertex audit

@dataclass
class WindowAudit:
    index: int
    window: list[int]
    bad_types: dict[tuple[int, ...], list[int]]


@dataclass
class AuditReport:
    window_size: int
    t: Fraction
    eps: Fraction
    delta: Fraction
    regime: str  # "default-constants" or "overrides"
    applicable: bool
    independent_set: list[int]
    windows: list[WindowAudit] = field(default_factory=list)
    bad_vertices: list[int] = field(default_factory=list)
    good_vertices: dict[int, int] = field(default_factory=dict)  # vertex -> degree into I
    lemma5_violations: list[dict] = field(default_factory=list)
    oversized_classes: list[dict] = field(default_factory=list)
    lemma6_conclusion_holds: bool = True
    bad_cap: Fraction = Fraction(0)
    bad_total_bound: int = 0

    @property
    def bad_total(self) -> int:
        return len(self.bad_vertices)

    @property
    def ok(self) -> bool:
        return not self.applicable or (self.lemma6_conclusion_holds and not self.lemma5_violations)

    def to_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "regime": self.regime,
            "window_size": self.window_size,
            "t": _fmt(self.t),
            "eps": _fmt(self.eps),
            "delta": _fmt(self.delta),
            "independent_set": self.independent_set,
            "windows": [
                {
                    "index": w.index,
                    "window": w.window,
                    "bad_types": [{"type": list(k), "vertices": v} for k, v in sorted(w.bad_types.items())],
                }
                for w in self.windows
            ],
            "bad_total": self.bad_total,
            "bad_vertices": self.bad_vertices,
            "bad_type_cap": _fmt(self.bad_cap),
            "bad_total_bound": self.bad_total_bound,
            "good_vertices": [[v, d] for v, d in sorted(self.good_vertices.items())],
            "lemma5_violations": self.lemma5_violations,
            "oversized_classes": self.oversized_classes,
            "lemma6_conclusion_holds": self.lemma6_conclusion_holds,
            "ok": self.ok,
        }

    def to_text(self) -> str:
        lines = [
            f"bad-vertex audit ({self.regime})",
            f"  |I| = {len(self.independent_set)}, window size n = {self.window_size}, "
            f"t = {_fmt(self.t)}, eps = {_fmt(self.eps)}, delta = {_fmt(self.delta)}",
        ]
        if not self.applicable:
            lines.append(f"  applicable: no (needs |I| >= n + 1 = {self.window_size + 1})")
            return "\n".join(lines) + "\n"
        classes = sum(len(w.bad_types) for w in self.windows)
        lines += [
            "  applicable: yes",
            f"  windows: {len(self.windows)}, bad type classes: {classes}",
            f"  bad vertices: {self.bad_total} (bound {self.bad_total_bound})",
            f"  good vertices: {len(self.good_vertices)}",
            f"  per-type cap 1/eps + 1 = {_fmt(self.bad_cap)}; oversized classes: {len(self.oversized_classes)}; "
            f"violations: {len(self.lemma5_violations)}",
            f"  good vertices adjacent to >= (1 - delta)|I|: {'yes' if self.lemma6_conclusion_holds else 'no'}",
        ]
        low = [(v, d) for v, d in sorted(self.good_vertices.items())
               if d < (1 - self.delta) * len(self.independent_set)]
        for v, d in low:
            lines.append(f"    vertex {v}: degree {d} into I")
        return "\n".join(lines) + "\n"


def _theorem_params(lset: LSet) -> tuple[Fraction, Fraction]:
    alpha, beta = lset.theorem_shape()
    if beta <= 0:
        from .codes import AmbiguousL

        raise AmbiguousL("the negative interval must end strictly below 0")
    return alpha, beta


def resolve_constants(beta, overrides: Mapping | None) -> tuple[int, Fraction, Fraction, Fraction, str]:
    """(n, t, eps, delta, regime) from the constant chain, with overrides applied.

    Unless n is overridden it is recomputed as max(ceil(n0), ceil(t/delta)).
    """
    ov = {k: v for k, v in (overrides or {}).items() if v is not None}
    bc = bukh_constant(beta)
    t = Fraction(ov.get("t", bc.t))
    eps = Fraction(ov.get("eps", bc.eps))
    delta = Fraction(ov.get("delta", bc.delta))
    n = int(ov["n"]) if "n" in ov else window_size(t, delta, bc.n0)
    return n, t, eps, delta, ("overrides" if ov else "default-constants")


def bad_vertex_audit(
    code: Code,
    lset: LSet,
    indep: Sequence[int],
    overrides: Mapping | None = None,
    universe: Sequence[int] | None = None,
    shuffle_seed: int | None = None,
    graph: Graph | None = None,
) -> AuditReport:
    """Classify vertices outside ``indep`` against every circular window of ``indep``.

    ``indep`` is read in the given cyclic order (optionally shuffled with a
    seeded generator). A vertex is i-bad when its degree into window S_i lies in
    [1, n - t]; its type is its exact neighbour set in S_i. Degree 0 and degree
    above n - t are out of scope and never bad.
    """
    alpha, beta = _theorem_params(lset)
    if not validate(code, lset).ok:
        raise InvalidCode("code does not validate against L")
    g = graph if graph is not None else attachment_graph(code, lset)
    order = list(indep)
    if not g.is_independent(order):
        raise NotIndependent(f"{order} is not independent in the attachment graph")
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(order)
    n, t, eps, delta, regime = resolve_constants(beta, overrides)
    big_n = len(order)
    report = AuditReport(n, t, eps, delta, regime, big_n >= n + 1, order)
    report.bad_cap = 1 / eps + 1
    if not report.applicable:
        return report
    report.bad_total_bound = _ceil(big_n * (1 / eps + 1) * (2 ** n - 1))

    in_i = set(order)
    pool = list(range(code.size)) if universe is None else list(universe)
    outside = [p for p in pool if p not in in_i]
    bad: set[int] = set()
    for i in range(big_n):
        window = [order[(i + k) % big_n] for k in range(n)]
        wmask = 0
        for v in window:
            wmask |= 1 << v
        types: dict[tuple[int, ...], list[int]] = {}
        for p in outside:
            nb = g.adj[p] & wmask
            deg = bin(nb).count("1")
            if 1 <= deg <= n - t:
                key = tuple(sorted(v for v in window if nb >> v & 1))
                types.setdefault(key, []).append(p)
                bad.add(p)
        report.windows.append(WindowAudit(i, window, types))
        for key, members in sorted(types.items()):
            if len(members) > report.bad_cap:
                entry = {"window": i, "type": list(key), "vertices": members}
                report.oversized_classes.append(entry)
                if code.is_exact and _all_projected_exceed(code, window, members, alpha + eps):
                    report.lemma5_violations.append(entry)
    report.bad_vertices = sorted(bad)
    floor_deg = (1 - delta) * big_n
    for p in outside:
        if p not in bad:
            report.good_vertices[p] = g.degree_into(p, order)
    report.lemma6_conclusion_holds = all(d >= floor_deg for d in report.good_vertices.values())
    return report


def _all_projected_exceed(code: Code, basis: Sequence[int], members: Sequence[int], threshold) -> bool:
    pg = projection_gram(code, basis, members)
    k = len(members)
    return all(pg.rows[a][b] > threshold for a in range(k) for b in range(k))


def audit_order_robustness(code, lset, indep, overrides=None, shuffles: int = 5, seed: int = 0) -> list[bool]:
    """Lemma-6 conclusion under ``shuffles`` seeded re-orderings of the circle."""
    rng = random.Random(seed)
    out = []
    for _ in range(shuffles):
        rep = bad_vertex_audit(code, lset, indep, overrides, shuffle_seed=rng.randrange(2 ** 32))
        out.append(rep.ok)
    return out


def lemma5_family_check(code: Code, basis: Sequence[int], family: Sequence[int], alpha, eps) -> NegativeFamilyCheck:
    """Check a family whose projected inner products all exceed alpha + eps.

    Pairwise inner products of the family must be at most alpha, so the
    residuals orthogonal to span(basis) pairwise fall below -eps and the
    negative-family count applies to them.
    """
    alpha, eps = Fraction(alpha), Fraction(eps)
    pg = projection_gram(code, basis, family)
    k = len(family)
    if not all(pg.rows[a][b] > alpha + eps for a in range(k) for b in range(k)):
        raise PreconditionViolated("projected inner products do not all exceed alpha + eps")
    return check_negative_family(residual_gram(code, basis, family), eps)


# ------------------------------------------------------------------ peeling

@dataclass
class PeelingRound:
    U_size: int
    I: list[int]
    survivor_count: int | None
    applicable: bool
    lemma6_ok: bool
    shrink_ok: bool  # |U_{k+1}| >= |U_k| - M d


@dataclass
class PeelingReport:
    B: int
    delta: Fraction
    M: int
    dimension: int
    rounds: list[PeelingRound] = field(default_factory=list)
    terminated_at: int = 0
    stop_reason: str = ""
    cross_degree_ok: bool = True  # vertices of I_s see >= (1-delta)|I_r| of I_r, r < s
    cross_degree_failures: list[tuple[int, int, int]] = field(default_factory=list)
    transversal_searched: bool = False
    clique_found: list[int] | None = None
    clique_cap: Fraction = Fraction(0)
    probability_bound: Fraction = Fraction(0)

    @property
    def I_sizes(self) -> list[int]:
        return [len(r.I) for r in self.rounds]

    @property
    def ok(self) -> bool:
        return self.clique_found is None or len(self.clique_found) <= self.clique_cap

    def to_dict(self) -> dict:
        return {
            "B": self.B,
            "delta": _fmt(self.delta),
            "M": self.M,
            "dimension": self.dimension,
            "rounds": [
                {
                    "U_size": r.U_size,
                    "I": r.I,
                    "I_size": len(r.I),
                    "survivor_count": r.survivor_count,
                    "applicable": r.applicable,
                    "lemma6_ok": r.lemma6_ok,
                    "shrink_ok": r.shrink_ok,
                }
                for r in self.rounds
            ],
            "terminated_at": self.terminated_at,
            "stop_reason": self.stop_reason,
            "cross_degree_ok": self.cross_degree_ok,
            "transversal_searched": self.transversal_searched,
            "clique_found": self.clique_found,
            "clique_cap": _fmt(self.clique_cap),
            "probability_bound": _fmt(self.probability_bound),
            "ok": self.ok,
        }

    def to_text(self) -> str:
        lines = [f"peeling audit (B = {self.B}, delta = {_fmt(self.delta)}, M = {self.M}, d = {self.dimension})"]
        for k, r in enumerate(self.rounds):
            surv = "-" if r.survivor_count is None else str(r.survivor_count)
            lines.append(
                f"  round {k}: |U| = {r.U_size}, |I| = {len(r.I)}, survivors = {surv}, "
                f"applicable = {'yes' if r.applicable else 'no'}"
            )
        lines.append(f"  terminated after {self.terminated_at} rounds ({self.stop_reason})")
        lines.append(f"  cross-layer degree property: {'holds' if self.cross_degree_ok else 'fails'}")
        if self.transversal_searched:
            found = "none" if self.clique_found is None else str(self.clique_found)
            lines.append(f"  transversal clique of size B + 1: {found} (probability bound {_fmt(self.probability_bound)})")
        lines.append(f"  clique cap 1/beta + 1 = {_fmt(self.clique_cap)}: {'respected' if self.ok else 'EXCEEDED'}")
        return "\n".join(lines) + "\n"


def peeling_audit(code: Code, lset: LSet, overrides: Mapping | None = None) -> PeelingReport:
    """Run the nested peeling U_0 > U_1 > ... and search for a transversal clique.

    Each round takes a maximum independent set I_k of U_k and keeps the good
    vertices of the bad-vertex audit as U_{k+1}. Stops when U is empty, after
    B + 1 rounds, or on an inapplicable round.
    """
    alpha, beta = _theorem_params(lset)
    rep = validate(code, lset)
    if not rep.ok:
        raise InvalidCode("code does not validate against L")
    g = attachment_graph(code, lset)
    bc = bukh_constant(beta)
    n, t, eps, delta, _ = resolve_constants(beta, overrides)
    _, _, big_m = lemma6_M(n, eps, beta)
    report = PeelingReport(bc.B, delta, big_m, rep.dimension)
    report.clique_cap = 1 / beta + 1
    report.probability_bound = 1 - comb(bc.B + 1, 2) * delta

    u = list(range(code.size))
    layers: list[list[int]] = []
    while True:
        if not u:
            report.stop_reason = "U empty"
            break
        if len(layers) == bc.B + 1:
            report.stop_reason = "B + 1 rounds"
            break
        sub = g.induced(u)
        res = independent_search(sub)
        i_k = sorted(u[k] for k in res.vertices)
        audit = bad_vertex_audit(code, lset, i_k, overrides, universe=u, graph=g)
        layers.append(i_k)
        if not audit.applicable:
            report.rounds.append(PeelingRound(len(u), i_k, None, False, True, True))
            report.stop_reason = "inapplicable round"
            break
        survivors = sorted(audit.good_vertices)
        shrink_ok = len(survivors) >= len(u) - big_m * rep.dimension
        report.rounds.append(PeelingRound(len(u), i_k, len(survivors), True, audit.ok, shrink_ok))
        u = survivors
    report.terminated_at = len(report.rounds)

    for s in range(len(layers)):
        for r in range(s):
            need = (1 - delta) * len(layers[r])
            for v in layers[s]:
                deg = g.degree_into(v, layers[r])
                if deg < need:
                    report.cross_degree_failures.append((r, s, v))
    report.cross_degree_ok = not report.cross_degree_failures

    if len(layers) >= bc.B + 1 and all(layers[: bc.B + 1]):
        report.transversal_searched = True
        report.clique_found = transversal_clique(g, layers[: bc.B + 1])
    return report


def dumps_report(report, fmt: str = "text") -> str:
    if fmt == "structured":
        return json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n"
    return report.to_text()
