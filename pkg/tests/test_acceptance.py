"""One test per acceptance criterion, each under its own time budget.

Every test appends a PASS/FAIL line to the terminal summary.
"""
import functools
import json
import random
import time
from fractions import Fraction
from itertools import product
from math import comb, log2

import numpy as np
import pytest
import sympy

from conftest import ACCEPTANCE_LINES, random_rational_code
from eqlines import bounds
from eqlines.cli import run
from eqlines.codes import Code, LSet, parse_lset, realize, validate
from eqlines.constructions import gallery, gallery_lset, ls_family, simplex
from eqlines.exactmat import identity, ones, rank
from eqlines.graphs import Graph, transversal_clique
from eqlines.prooflab import (
    SingularBasis,
    bad_vertex_audit,
    check_negative_family,
    closed_form_inverse,
    lemma4_quantities,
    lemma5_family_check,
    peeling_audit,
    projection_inner,
    r_at_one_closed_form,
    r_poly,
    residual_gram,
    t_star,
    verify_corner_minimum,
    verify_lemma4_bound,
)
from eqlines.search import max_lines, witness_lset, witness_realization

F = Fraction
L13 = parse_lset("[-1,-1/3]u{1/3}")


def criterion(number: int, title: str, budget: float):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            start = time.perf_counter()
            status, detail = "FAIL", ""
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - start
                if elapsed >= budget:
                    detail = " (over budget)"
                    raise AssertionError(f"criterion {number} took {elapsed:.2f}s, budget {budget}s")
                status = "PASS"
            finally:
                elapsed = time.perf_counter() - start
                line = f"criterion {number} {status}: {title} [{elapsed:.2f}s / {budget:g}s]{detail}"
                ACCEPTANCE_LINES.append(line)
                print(line)
        return inner
    return wrap


@criterion(1, "construction and known-value reproduction", 5)
def test_criterion_1_constructions():
    l = LSet((), (F(-1, 3), F(1, 3)))
    for t in range(2, 21):
        code = ls_family(2, t, F(1, 2))
        rep = validate(code, l)
        assert rep.ok and rep.size == 2 * t and rep.dimension == t + 1
        d = t + 1
        if d >= 15:
            assert rep.size == bounds.classical_caps(F(1, 3), d).known_exact == 2 * d - 2
    rep = validate(ls_family(3, 5, F(1, 2)), parse_lset("{-1/5}u{1/5}"))
    assert rep.ok and rep.size == 15 == (3 * (11 - 1)) // 2 and rep.dimension == 11


def hand_chain(beta: Fraction) -> dict:
    """Recompute the chain with plain integer arithmetic on numerator and denominator."""
    p, q = beta.numerator, beta.denominator
    # 1/beta = q/p
    t = F(q + p, p)
    eps = F(p * p, 2 * q * q)
    n0 = F(p * p + 8 * q * q, p * p)
    big_b = (q + p + p - 1) // p
    delta = F(1, (big_b + 1) ** 2)
    n = max(-(-n0.numerator // n0.denominator), -(-(t.numerator * delta.denominator) // (t.denominator * delta.numerator)))
    r_bound = comb(n + (q + p - 1) // p + 1, n)
    inv_eps = F(2 * q * q, p * p)
    pow_num = (inv_eps.numerator + inv_eps.denominator) * 2 ** n
    pow_term = -(-pow_num // inv_eps.denominator)
    m = max(r_bound, pow_term)
    return dict(t=t, eps=eps, n0=n0, B=big_b, delta=delta, n=n, R_bound=r_bound, pow_term=pow_term, M=m, c=big_b * m)


@criterion(2, "constant pipeline", 1)
def test_criterion_2_constants():
    b = bounds.bukh_constant(1)
    got = dict(t=b.t, eps=b.eps, n0=b.n0, B=b.B, delta=b.delta, n=b.n, R_bound=b.R_bound, M=b.M, c=b.c)
    assert got == dict(t=2, eps=F(1, 2), n0=9, B=2, delta=F(1, 9), n=18, R_bound=190, M=786432, c=1572864)
    for beta in (F(1), F(1, 2), F(1, 3), F(1, 4), F(2, 3), F(3, 7)):
        h = hand_chain(beta)
        b = bounds.bukh_constant(beta)
        assert {k: getattr(b, k) for k in h} == h
    for beta in (F(1), F(1, 2), F(1, 3), F(1, 4)):
        assert log2(bounds.bukh_constant(beta).M) <= 64 / beta ** 2
    cs = [bounds.bukh_constant(F(k, 24)).c for k in range(1, 25)]
    assert all(a >= b for a, b in zip(cs, cs[1:]))


@criterion(3, "closed-form inverse identity", 5)
def test_criterion_3_inverse():
    for k in range(1, 10):
        alpha = F(k, 10)
        for n in range(1, 41):
            inv, f = closed_form_inverse(n, alpha)
            a = ones(n) * alpha + identity(n) * (1 - alpha)
            assert a @ ((identity(n) - ones(n) * f) * (1 / (1 - alpha))) == identity(n)
            assert a @ inv == identity(n)
            assert f <= F(1, n)


def normal_equations_oracle(gram, basis, i, j) -> Fraction:
    gb = sympy.Matrix([[sympy.Rational(gram[a][b].numerator, gram[a][b].denominator) for b in basis] for a in basis])
    col = lambda k: sympy.Matrix([sympy.Rational(gram[a][k].numerator, gram[a][k].denominator) for a in basis])
    val = (col(i).T * gb.LUsolve(col(j)))[0, 0]
    return F(int(val.p), int(val.q))


def lstsq_oracle(vectors: np.ndarray, basis, i, j) -> float:
    b = vectors[:, basis]
    pi = b @ np.linalg.lstsq(b, vectors[:, i], rcond=None)[0]
    pj = b @ np.linalg.lstsq(b, vectors[:, j], rcond=None)[0]
    return float(pi @ pj)


@criterion(4, "projection oracle equivalence on 200 random configurations", 30)
def test_criterion_4_projection():
    rng = random.Random(20261015)
    done = 0
    while done < 200:
        order = rng.randint(2, 8)
        dim = rng.randint(2, 6)
        code = random_rational_code(rng, order, dim)
        k = rng.randint(1, min(dim, order - 1))
        pts = list(range(order))
        rng.shuffle(pts)
        basis, i, j = pts[:k], rng.choice(pts), rng.choice(pts)
        rows = code.gram.rows
        if rank(code.gram.principal(basis)) < k:
            with pytest.raises(SingularBasis):
                projection_inner(code, basis, i, j)
            continue
        got = projection_inner(code, basis, i, j)
        assert got == normal_equations_oracle(rows, basis, i, j)
        vec = realize(code, 1e-9).vectors
        assert abs(float(got) - lstsq_oracle(vec, basis, i, j)) <= 1e-8
        done += 1


@criterion(5, "quadratic bound suite", 120)
def test_criterion_5_quadratic():
    grid = [F(k, 10) for k in range(1, 10)]
    for a, b in product(grid, grid):
        ts = t_star(a, b)
        for n in range(1, 61):
            assert r_poly(1, n, a, b) == r_at_one_closed_form(n, a, b)
            for m in range(0, n + 1):
                assert r_poly(m, n, a, b) == r_poly(n - ts - m, n, a, b)
    pairs = [(F(1, 3), F(1, 3)), (F(1, 2), F(1, 4)), (F(2, 3), F(1, 3))]
    for a, b in pairs:
        n0 = lemma4_quantities(a, b).n0
        lo = -(-n0.numerator // n0.denominator)
        assert verify_lemma4_bound(a, b, range(lo, lo + 31))
    for a, b in pairs:
        for m in range(1, 4):
            for n in range(m + 1, 13):
                assert verify_corner_minimum(a, b, m, n, F(1, 6)), (a, b, m, n)


def synthetic_family(c: Fraction, k: int) -> Code:
    off = c * c - (1 - c * c) / (k - 1)
    rows = [[F(1)] + [c] * k]
    for i in range(k):
        rows.append([c] + [F(1) if i == j else off for j in range(k)])
    return Code.from_gram(rows)


@criterion(6, "negative-family suite", 10)
def test_criterion_6_negative_families():
    for n in range(1, 51):
        chk = check_negative_family(simplex(n).gram, F(1, n))
        assert chk.count == n + 1 == chk.bound and chk.ok
    for c in (F(1, 2), F(3, 5), F(2, 3), F(4, 5), F(9, 10)):
        for k in range(2, 13):
            code = synthetic_family(c, k)
            alpha = code.gram.rows[1][2]
            gap = (1 - c * c) / (k - 1)
            for eps in (gap / 2, gap * 9 / 10, gap / 7):
                chk = lemma5_family_check(code, [0], list(range(1, k + 1)), alpha, eps)
                assert chk.ok and chk.count == k <= 1 / eps + 1
                direct = check_negative_family(residual_gram(code, [0], list(range(1, k + 1))), eps)
                assert direct == chk


def recount_bad_types(t: int, n: int, bad_hi: int) -> dict:
    """In ls_family(2, t) with I = 0..t-1, vertex t+k is attached to k alone."""
    out = {}
    for i in range(t):
        for s in range(n):
            k = (i + s) % t
            if 1 <= bad_hi:
                out[(i, (k,))] = [t + k]
    return out


def layered(size: int, layers: int, missing) -> tuple[Graph, list[list[int]]]:
    ls = [[k * size + v for v in range(size)] for k in range(layers)]
    miss = {tuple(sorted(p)) for p in missing}
    edges = [
        (u, v)
        for u in range(size * layers)
        for v in range(u + 1, size * layers)
        if u // size != v // size and (u, v) not in miss
    ]
    return Graph.from_edges(size * layers, edges), ls


@criterion(7, "audit pipeline", 30)
def test_criterion_7_audit():
    code = ls_family(2, 20, F(1, 2))
    rep = bad_vertex_audit(code, L13, list(range(20)), {"n": 6, "t": 4, "delta": F(1, 2)})
    got = {(w.index, k): v for w in rep.windows for k, v in w.bad_types.items()}
    assert rep.applicable and got == recount_bad_types(20, 6, 6 - 4)
    assert not bad_vertex_audit(code, L13, list(range(20))).applicable

    codes = [(gallery(n), gallery_lset(n)) for n in ("e7-28", "petersen-10")]
    codes += [(ls_family(2, t), L13) for t in range(2, 21)]
    codes += [(ls_family(3, 5), parse_lset("[-1,-1/5]u{1/5}")), (simplex(4), parse_lset("[-1,-1/4]u{1/4}"))]
    for c, l in codes:
        for overrides in (None, {"n": 2, "t": 1, "delta": F(1, 2)}):
            peel = peeling_audit(c, l, overrides)
            assert peel.ok, c.label

    rng = random.Random(7)
    for big_b in (2, 3):
        pairs = comb(big_b + 1, 2)
        size = pairs + 1  # each vertex misses one vertex per earlier layer: delta = 1/size < 1/pairs
        assert F(1, size) < F(1, pairs)
        for _ in range(5):
            missing = [
                (s * size + v, r * size + rng.randrange(size))
                for s in range(big_b + 1)
                for r in range(s)
                for v in range(size)
            ]
            g, layers = layered(size, big_b + 1, missing)
            found = transversal_clique(g, layers)
            assert found is not None and g.is_clique(found)
            assert any(g.is_clique(c) for c in product(*layers))


@criterion(8, "search reproduction of known maxima", 120)
def test_criterion_8_search():
    expected = {2: (3, F(1, 2)), 3: (6, None), 4: (6, F(1, 3))}
    for d, (m, alpha) in expected.items():
        res = max_lines(d, 7)
        assert res.m_max == m and res.exhaustive
        if alpha is None:
            assert abs(res.cert.alpha - 5 ** -0.5) <= 1e-9
        else:
            assert res.cert.alpha == alpha
        assert validate(witness_realization(res), witness_lset(res)).ok
    l = LSet((), (F(-1, 3), F(1, 3)))
    pet = validate(gallery("petersen-10"), l)
    assert pet.ok and pet.size == 10 and pet.dimension == 5
    e7 = validate(gallery("e7-28"), l)
    assert e7.ok and e7.size == 28 == bounds.gerzon(7).bound and e7.dimension == 7
    assert bounds.relative_bound(5, F(1, 3)) == 10
    assert bounds.relative_bound(7, F(1, 3)) == 28
    # the parallel path must agree with the serial scan
    assert max_lines(4, 7, workers=8).witness == max_lines(4, 7).witness


@criterion(9, "end-to-end CLI determinism", 5)
def test_criterion_9_cli(tmp_path, capsys):
    path = str(tmp_path / "c.json")
    outputs = []
    for _ in range(2):
        codes = []
        assert run(["construct", "--family", "ls", "--r", "2", "--t", "14", "--tau", "1/2", "--out", path]) == 0
        capsys.readouterr()
        with open(path, "rb") as fh:
            file_bytes = fh.read()
        codes.append(run(["verify", path, "--L", "[-1,-1/3]u{1/3}"]))
        first = capsys.readouterr().out
        codes.append(run(["bound", "--bukh", "1"]))
        second = capsys.readouterr().out
        codes.append(run(["verify", path, "--L", "{1/3}"]))
        third = capsys.readouterr().out
        assert codes == [0, 0, 1]
        assert "size 28, dimension 15" in first
        assert second.rstrip("\n").endswith("c = 1572864")
        assert "offending pairs" in third
        outputs.append((file_bytes, first, second, third))
    assert outputs[0] == outputs[1]
    json.loads(outputs[0][0])
