"""Brute-force oracles that share no code with the package's chain machinery.

Everything here works over the ground field with full tensor powers and
sympy's sparse domain matrices for ranks.
"""

from itertools import product

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _rank(cols: list[dict], nrows: int) -> int:
    cols = [c for c in cols if c]
    if not cols or not nrows:
        return 0
    sdm = {j: {i: QQ(x.numerator, x.denominator) if hasattr(x, "numerator") else QQ(x) for i, x in c.items()}
           for j, c in enumerate(cols)}
    # rows of this matrix are the given columns; rank is transpose-invariant
    return DomainMatrix(sdm, (len(cols), nrows), QQ).rank()


def rank_of_columns(cols: list[dict], nrows: int) -> int:
    return _rank(cols, nrows)


def _table(structure):
    """Sparse products e_i e_j as dicts."""
    n = len(structure)
    return [[{k: c for k, c in enumerate(structure[i][j]) if c} for j in range(n)] for i in range(n)]


def _index(word, d):
    k = 0
    for w in word:
        k = k * d + w
    return k


def hochschild_boundaries(structure, N: int):
    """Unnormalized b on A^{(x) n+1}, n = 1..N, as lists of sparse columns."""
    d = len(structure)
    mul = _table(structure)
    out = {}
    for n in range(1, N + 1):
        cols = []
        for word in product(range(d), repeat=n + 1):
            col: dict = {}
            for i in range(n):
                for k, c in mul[word[i]][word[i + 1]].items():
                    w = word[:i] + (k,) + word[i + 2:]
                    key = _index(w, d)
                    col[key] = col.get(key, 0) + (-1) ** i * c
            for k, c in mul[word[n]][word[0]].items():
                w = (k,) + word[1:n]
                key = _index(w, d)
                col[key] = col.get(key, 0) + (-1) ** n * c
            cols.append({k: v for k, v in col.items() if v})
        out[n] = cols
    return out


def hochschild_dims(structure, N: int) -> list[int]:
    """dim HH_n(A) for n < N from the full bar complex."""
    d = len(structure)
    bs = hochschild_boundaries(structure, N)
    ranks = {n: _rank(bs[n], d ** n) for n in bs}
    return [d ** (n + 1) - ranks.get(n, 0) - ranks[n + 1] for n in range(N)]


def _rotation(word):
    return (word[-1],) + word[:-1]


def cyclic_dims(structure, N: int) -> list[int]:
    """dim HC_n(A) for n < N from Connes' quotient complex A^{(x) n+1} / (1 - t)."""
    d = len(structure)
    bs = hochschild_boundaries(structure, N)

    def one_minus_t(n):
        cols = []
        for word in product(range(d), repeat=n + 1):
            sign = (-1) ** n
            col = {_index(word, d): 1}
            k = _index(_rotation(word), d)
            col[k] = col.get(k, 0) - sign
            cols.append({a: b for a, b in col.items() if b})
        return cols

    imt = {n: one_minus_t(n) for n in range(N + 1)}
    rk_imt = {n: _rank(imt[n], d ** (n + 1)) for n in imt}
    # rank of b modulo the image of 1 - t in the target
    rb = {n: _rank(bs[n] + imt[n - 1], d ** n) - rk_imt[n - 1] for n in range(1, N + 1)}
    return [d ** (n + 1) - rk_imt[n] - rb.get(n, 0) - rb[n + 1] for n in range(N)]


def tor_dims(structure, right_action, left_action, n_dim: int, m_dim: int, N: int) -> list[int]:
    """dim Tor^R_n(Nmod, M) for n < N from the full bar complex Nmod (x) R^{(x) n} (x) M.

    right_action[k] and left_action[k] are dense matrices (column j = image of basis j)
    of basis element k of R on Nmod and M respectively.
    """
    d = len(structure)
    mul = _table(structure)

    def act(mat, j):
        return {i: row[j] for i, row in enumerate(mat) if row[j]}

    def size(n):
        return n_dim * d ** n * m_dim

    def idx(a, word, m):
        return (a * d ** len(word) + _index(word, d)) * m_dim + m

    ranks = {}
    for n in range(1, N + 1):
        cols = []
        for a in range(n_dim):
            for word in product(range(d), repeat=n):
                for m in range(m_dim):
                    col: dict = {}
                    for a2, c in act(right_action[word[0]], a).items():
                        key = idx(a2, word[1:], m)
                        col[key] = col.get(key, 0) + c
                    for i in range(n - 1):
                        for k, c in mul[word[i]][word[i + 1]].items():
                            key = idx(a, word[:i] + (k,) + word[i + 2:], m)
                            col[key] = col.get(key, 0) + (-1) ** (i + 1) * c
                    for m2, c in act(left_action[word[-1]], m).items():
                        key = idx(a, word[:-1], m2)
                        col[key] = col.get(key, 0) + (-1) ** n * c
                    cols.append({k: v for k, v in col.items() if v})
        ranks[n] = _rank(cols, size(n - 1))
    return [size(n) - ranks.get(n, 0) - ranks[n + 1] for n in range(N)]


def hochschild_cohomology_dims(structure, N: int) -> list[int]:
    """dim HH^n(A, A) for n < N from Hom(A^{(x) n}, A) with the standard coboundary."""
    d = len(structure)
    mul = _table(structure)

    def cochain_index(word, out):
        return _index(word, d) * d + out

    ranks = {}
    for n in range(N):
        # delta: C^n -> C^{n+1}; column per basis cochain f = (word -> out)
        cols = []
        for word in product(range(d), repeat=n):
            for out in range(d):
                col: dict = {}

                def add(w, vec, sign):
                    for k, c in vec.items():
                        key = cochain_index(w, k)
                        col[key] = col.get(key, 0) + sign * c

                for w in product(range(d), repeat=n + 1):
                    if w[1:] == word:
                        add(w, mul[w[0]][out], 1)
                    for i in range(n):
                        merged = w[:i] + (None,) + w[i + 2:]
                        for k, c in mul[w[i]][w[i + 1]].items():
                            if merged[:i] + (k,) + merged[i + 1:] == word:
                                add(w, {out: c}, (-1) ** (i + 1))
                    if w[:n] == word:
                        add(w, mul[out][w[n]], (-1) ** (n + 1))
                cols.append({k: v for k, v in col.items() if v})
        ranks[n] = _rank(cols, d ** (n + 2))
    return [d ** n * d - ranks[n] - ranks.get(n - 1, 0) for n in range(N)]
