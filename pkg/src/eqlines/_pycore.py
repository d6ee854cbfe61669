"""Pure-Python kernels. Same signatures as the compiled ``_core`` extension."""
from __future__ import annotations

from itertools import permutations

import numpy as np

BACKEND = "python"


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _color_bound(p: int, adj: list[int]) -> int:
    # greedy sequential coloring; number of classes bounds the clique inside p
    colors = 0
    while p:
        colors += 1
        q = p
        while q:
            v = (q & -q).bit_length() - 1
            q &= ~(1 << v)
            q &= ~adj[v]
            p &= ~(1 << v)
    return colors


def max_clique_bits(adj: list[int]) -> int:
    """Lexicographically least maximum clique, as a bitmask.

    ``adj[v]`` is the neighbourhood bitmask of ``v``. Branches on candidates in
    increasing index order (include first), so the first maximum clique reached
    is the lex-least one.
    """
    n = len(adj)
    best = [0, 0]  # size, mask

    def expand(r: int, rsize: int, p: int) -> None:
        if rsize > best[0]:
            best[0], best[1] = rsize, r
        while p:
            if rsize + _popcount(p) <= best[0]:
                return
            if rsize + _color_bound(p, adj) <= best[0]:
                return
            v = (p & -p).bit_length() - 1
            bit = 1 << v
            expand(r | bit, rsize + 1, p & adj[v])
            p &= ~bit

    expand(0, 0, (1 << n) - 1)
    return best[1]


def pair_index(m: int) -> list[tuple[int, int]]:
    """Bit order for normalized Seidel matrices: pairs (i, j), 1 <= i < j < m."""
    return [(i, j) for i in range(1, m) for j in range(i + 1, m)]


def seidel_fill(m: int, codes: np.ndarray) -> np.ndarray:
    """Dense float Seidel matrices for a batch of normalized codes."""
    codes = np.asarray(codes, dtype=np.int64)
    k = codes.shape[0]
    out = np.ones((k, m, m), dtype=np.float64)
    idx = np.arange(m)
    out[:, idx, idx] = 0.0
    for b, (i, j) in enumerate(pair_index(m)):
        s = 1.0 - 2.0 * ((codes >> b) & 1)
        out[:, i, j] = s
        out[:, j, i] = s
    return out


def _perm_bitmaps(m: int) -> np.ndarray:
    pairs = pair_index(m)
    pos = {p: b for b, p in enumerate(pairs)}
    maps = []
    for perm in permutations(range(1, m)):
        sigma = (0,) + perm
        row = []
        for i, j in pairs:
            a, c = sigma[i], sigma[j]
            row.append(pos[(min(a, c), max(a, c))])
        maps.append(row)
    return np.array(maps, dtype=np.int64).reshape(len(maps), len(pairs))


def orbit_representatives(m: int) -> np.ndarray:
    """Least code of every orbit under relabelling vertices 1..m-1."""
    nbits = (m - 1) * (m - 2) // 2
    total = 1 << nbits
    if nbits == 0:
        return np.zeros(1, dtype=np.int64)
    seen = np.zeros(total, dtype=bool)
    maps = _perm_bitmaps(m)
    weights = np.left_shift(np.int64(1), maps)  # value of source bit b at its image position
    reps = []
    for code in range(total):
        if not seen[code]:
            reps.append(code)
            bits = (code >> np.arange(nbits)) & 1
            images = (weights * bits[np.newaxis, :]).sum(axis=1)
            seen[images] = True
    return np.array(reps, dtype=np.int64)
