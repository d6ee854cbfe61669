from fractions import Fraction

import numpy as np
import pytest

from eqlines.codes import attachment_graph, parse_lset, validate
from eqlines.constructions import (
    FamilyParams,
    UnknownName,
    gallery,
    gallery_lset,
    gallery_rank,
    ls_family,
    ls_inner_matrix,
    simplex,
)
from eqlines.exactmat import ldlt_certify
from eqlines.prooflab import check_negative_family

F = Fraction


@pytest.mark.parametrize("n", [1, 3, 4])
def test_simplex(n):
    code = simplex(n)
    assert code.size == n + 1
    rep = validate(code, parse_lset(f"{{-1/{n}}}"))
    assert rep.ok and rep.dimension == n


def test_simplex_lemma1_equality():
    chk = check_negative_family(simplex(4).gram, F(1, 4))
    assert (chk.count, chk.bound, chk.ok) == (5, 5, True)


def test_ls_family_small():
    code = ls_family(2, 2)
    rows = code.gram.rows
    assert rows[0][2] == rows[1][3] == F(-1, 3)
    assert rows[0][1] == rows[0][3] == F(1, 3)
    assert ldlt_certify(code.gram).rank == 3


def test_ls_family_known_witnesses():
    rep = validate(ls_family(2, 14), parse_lset("[-1,-1/3]u{1/3}"))
    assert (rep.size, rep.dimension) == (28, 15)
    assert rep.size == 2 * 15 - 2
    rep = validate(ls_family(3, 5), parse_lset("[-1,-1/5]u{1/5}"))
    assert (rep.size, rep.dimension) == (15, 11)
    assert rep.size == 3 * (11 - 1) // 2


@pytest.mark.parametrize("r", [2, 3, 4, 5])
@pytest.mark.parametrize("tau", [F(1, 4), F(1, 2), F(3, 4)])
def test_ls_family_grid(r, tau):
    for t in range(1, 21, 3 if r > 3 else 1):
        p = FamilyParams(r, t, tau)
        code = ls_family(r, t, tau)
        neg, pos = p.values
        assert neg == -(1 - tau) / (r - 1 + tau) and pos == tau / (r - 1 + tau)
        offs = {x for i, row in enumerate(code.gram.rows) for j, x in enumerate(row) if i != j}
        assert offs <= {neg, pos}
        cert = ldlt_certify(code.gram)
        assert cert.is_psd and cert.rank == (r - 1) * t + 1 == p.dimension
        inner = ldlt_certify(ls_inner_matrix(r, t))
        assert inner.is_psd and r * t - inner.rank == t
        # size = r/(r-1) * dimension - r/(r-1), exactly
        assert r * t == F(r, r - 1) * p.dimension - F(r, r - 1)


def test_tau_bounds():
    with pytest.raises(ValueError):
        ls_family(2, 3, 1)
    with pytest.raises(ValueError):
        ls_family(2, 3, 0)
    with pytest.raises(ValueError):
        ls_family(1, 3)


def test_gallery_e7():
    code = gallery("e7-28")
    rep = validate(code, parse_lset("[-1,-1/3]u{1/3}"))
    assert rep.ok and rep.size == 28 and rep.dimension == 7


def test_gallery_petersen():
    code = gallery("petersen-10")
    rep = validate(code, parse_lset("{-1/3}u{1/3}"))
    assert rep.ok and rep.size == 10 and rep.dimension == 5


def test_gallery_icosahedron():
    code = gallery("icosahedron-6")
    assert code.vectors.shape == (3, 6)
    g = code.vectors.T @ code.vectors
    assert np.allclose(np.abs(g[np.triu_indices(6, 1)]), 1 / np.sqrt(5), atol=1e-9)


@pytest.mark.parametrize("name", ["icosahedron-6", "e7-28", "petersen-10"])
def test_gallery_declared(name):
    rep = validate(gallery(name), gallery_lset(name))
    assert rep.ok and rep.dimension == gallery_rank(name)


def test_gallery_unknown():
    with pytest.raises(UnknownName):
        gallery("leech")


def test_petersen_matching_structure():
    g = attachment_graph(gallery("petersen-10"), parse_lset("[-1,-1/3]u{1/3}"))
    assert len(g.edges()) == 15
