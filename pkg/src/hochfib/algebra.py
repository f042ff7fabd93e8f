"""Finite-dimensional unital associative algebras given by structure constants."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .exactla import Matrix, Subspace, as_scalar, kernel_rows, rank_rows

Vec = dict  # sparse coordinate vector: basis index -> Fraction


class AlgebraError(ValueError):
    pass


def _vec(v) -> dict[int, Fraction]:
    if isinstance(v, dict):
        return {int(k): as_scalar(x) for k, x in v.items() if x}
    return {k: as_scalar(x) for k, x in enumerate(v) if x}


def vec_add(a: dict, b: dict, c=1) -> dict:
    out = dict(a)
    for k, x in b.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_scale(a: dict, c) -> dict:
    return {k: c * x for k, x in a.items()} if c else {}


def dense(v: dict, n: int) -> list[Fraction]:
    out = [Fraction(0)] * n
    for k, x in v.items():
        out[k] = x
    return out


class Algebra:
    """Algebra on a labelled basis with e_i e_j = sum_k c[i][j][k] e_k."""

    def __init__(self, labels: Sequence[str], products: dict, unit, *, validate: bool = True):
        self.labels = tuple(str(x) for x in labels)
        self.dim = len(self.labels)
        n = self.dim
        table = [[() for _ in range(n)] for _ in range(n)]
        for (i, j), v in products.items():
            table[i][j] = tuple(sorted(_vec(v).items()))
        self._table = tuple(tuple(r) for r in table)
        self.unit = _vec(unit)
        if validate:
            problems = validate_algebra(self, first_only=True)
            if problems:
                raise AlgebraError(problems[0])

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return self.labels

    @property
    def structure(self) -> list[list[list[Fraction]]]:
        n = self.dim
        out = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for k, c in self._table[i][j]:
                    out[i][j][k] = c
        return out

    def basis_product(self, i: int, j: int) -> tuple:
        return self._table[i][j]

    def mul(self, a: dict, b: dict) -> dict:
        out: dict[int, Fraction] = {}
        for i, x in a.items():
            row = self._table[i]
            for j, y in b.items():
                xy = x * y
                for k, c in row[j]:
                    z = out.get(k, 0) + xy * c
                    if z:
                        out[k] = z
                    else:
                        out.pop(k, None)
        return out

    def basis_vector(self, i: int) -> dict:
        return {i: Fraction(1)}

    def left_matrix(self, a: dict) -> Matrix:
        """Matrix of x -> a x in the basis."""
        cols = [self.mul(a, {j: Fraction(1)}) for j in range(self.dim)]
        return Matrix.from_sparse_columns(self.dim, cols)

    def right_matrix(self, a: dict) -> Matrix:
        cols = [self.mul({j: Fraction(1)}, a) for j in range(self.dim)]
        return Matrix.from_sparse_columns(self.dim, cols)

    def products(self) -> dict:
        return {(i, j): dict(self._table[i][j])
                for i in range(self.dim) for j in range(self.dim) if self._table[i][j]}

    def is_commutative(self) -> bool:
        return all(self._table[i][j] == self._table[j][i]
                   for i in range(self.dim) for j in range(i + 1, self.dim))

    def __eq__(self, other):
        return (isinstance(other, Algebra) and self.labels == other.labels
                and self._table == other._table and self.unit == other.unit)

    def __hash__(self):
        return hash((self.labels, self._table))

    def __repr__(self):
        return f"Algebra(dim={self.dim})"


def validate_algebra(A: Algebra, first_only: bool = False) -> list[str]:
    """Associativity on basis triples and both unit laws."""
    problems = []
    n = A.dim
    for i, j, k in product(range(n), repeat=3):
        left = A.mul(dict(A.basis_product(i, j)), {k: Fraction(1)})
        right = A.mul({i: Fraction(1)}, dict(A.basis_product(j, k)))
        if left != right:
            problems.append(f"associativity fails on (e{i} e{j}) e{k} != e{i} (e{j} e{k})"
                            f" [{A.labels[i]}, {A.labels[j]}, {A.labels[k]}]")
            if first_only:
                return problems
    for i in range(n):
        e = {i: Fraction(1)}
        if A.mul(A.unit, e) != e:
            problems.append(f"left unit law fails on e{i} [{A.labels[i]}]")
        if A.mul(e, A.unit) != e:
            problems.append(f"right unit law fails on e{i} [{A.labels[i]}]")
        if first_only and problems:
            return problems
    return problems


def from_structure_constants(labels, structure, unit) -> Algebra:
    n = len(labels)
    if len(structure) != n or any(len(r) != n or any(len(c) != n for c in r) for r in structure):
        raise AlgebraError(f"structure table must be {n}x{n}x{n}")
    prods = {}
    for i in range(n):
        for j in range(n):
            v = _vec(structure[i][j])
            if v:
                prods[i, j] = v
    if len(unit) != n:
        raise AlgebraError("unit vector has the wrong length")
    return Algebra(labels, prods, _vec(unit))


# ---------------------------------------------------------------------------
# constructors

def ground_field() -> Algebra:
    return Algebra(["1"], {(0, 0): {0: 1}}, {0: 1})


def matrix_algebra(n: int) -> Algebra:
    labels = [f"e{p + 1}{q + 1}" for p in range(n) for q in range(n)]
    prods = {}
    for p, q, r in product(range(n), repeat=3):
        prods[p * n + q, q * n + r] = {p * n + r: 1}
    return Algebra(labels, prods, {p * n + p: 1 for p in range(n)})


def upper_triangular(n: int) -> Algebra:
    pairs = [(p, q) for p in range(n) for q in range(p, n)]
    idx = {pq: i for i, pq in enumerate(pairs)}
    prods = {}
    for (p, q) in pairs:
        for (q2, r) in pairs:
            if q == q2:
                prods[idx[p, q], idx[q, r]] = {idx[p, r]: 1}
    return Algebra([f"e{p + 1}{q + 1}" for p, q in pairs], prods, {idx[p, p]: 1 for p in range(n)})


def truncated_polynomial(n: int, var: str = "x") -> Algebra:
    """k[x]/(x^n) on the monomial basis."""
    labels = ["1"] + [var if d == 1 else f"{var}^{d}" for d in range(1, n)]
    prods = {(i, j): {i + j: 1} for i in range(n) for j in range(n) if i + j < n}
    return Algebra(labels, prods, {0: 1})


def diagonal_algebra(n: int) -> Algebra:
    """k x ... x k on the primitive idempotents."""
    return Algebra([f"p{i + 1}" for i in range(n)], {(i, i): {i: 1} for i in range(n)},
                   {i: 1 for i in range(n)})


def opposite(A: Algebra) -> Algebra:
    prods = {(j, i): dict(v) for (i, j), v in A.products().items()}
    return Algebra(A.labels, prods, A.unit, validate=False)


def tensor_product(A: Algebra, B: Algebra) -> Algebra:
    """A (x) B with basis a_i (x) b_j at index i * dim B + j."""
    m = B.dim
    labels = [f"{a}*{b}" for a in A.labels for b in B.labels]
    prods = {}
    for (i, k), u in A.products().items():
        for (j, l), v in B.products().items():
            prods[i * m + j, k * m + l] = {p * m + q: x * y for p, x in u.items() for q, y in v.items()}
    unit = {i * m + j: x * y for i, x in A.unit.items() for j, y in B.unit.items()}
    return Algebra(labels, prods, unit, validate=False)


def enveloping(A: Algebra) -> Algebra:
    return tensor_product(A, opposite(A))


def direct_product(A: Algebra, B: Algebra) -> Algebra:
    n = A.dim
    prods = {k: dict(v) for k, v in A.products().items()}
    for (i, j), v in B.products().items():
        prods[n + i, n + j] = {n + k: x for k, x in v.items()}
    unit = dict(A.unit)
    unit.update({n + k: x for k, x in B.unit.items()})
    return Algebra([f"({a},0)" for a in A.labels] + [f"(0,{b})" for b in B.labels], prods, unit,
                   validate=False)


# ---------------------------------------------------------------------------
# groups

class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple
    identity: int = 0
    labels: tuple = field(default=())

    def __post_init__(self):
        t = tuple(tuple(int(x) for x in r) for r in self.table)
        object.__setattr__(self, "table", t)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"g{i}" for i in range(len(t))))
        problems = validate_group(self)
        if problems:
            raise GroupError(problems[0])

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inverse(self, a: int) -> int:
        return next(b for b in range(self.order) if self.table[a][b] == self.identity)

    def conjugacy_classes(self) -> list[frozenset]:
        seen, out = set(), []
        for a in range(self.order):
            if a in seen:
                continue
            cls = frozenset(self.mul(self.mul(g, a), self.inverse(g)) for g in range(self.order))
            seen |= cls
            out.append(cls)
        return out


def validate_group(G: FiniteGroup) -> list[str]:
    n = len(G.table)
    t = G.table
    if n == 0:
        return ["empty group"]
    if any(len(r) != n or any(not 0 <= x < n for x in r) for r in t):
        return ["multiplication table is not closed"]
    e = G.identity
    problems = []
    if not 0 <= e < n:
        return ["identity index out of range"]
    for a in range(n):
        if t[e][a] != a or t[a][e] != a:
            problems.append(f"identity law fails at {a}")
        if not any(t[a][b] == e for b in range(n)):
            problems.append(f"element {a} has no inverse")
    for a, b, c in product(range(n), repeat=3):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            problems.append(f"associativity fails at ({a},{b},{c})")
            break
    return problems


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((a + b) % n for b in range(n)) for a in range(n)), 0,
                       tuple(f"g^{a}" if a else "e" for a in range(n)))


def permutation_group(generators: Iterable[Sequence[int]], degree: int) -> tuple[FiniteGroup, list[tuple]]:
    """Closure of a set of permutations of range(degree); returns the group and its elements.

    Element 0 is the identity; the table is composition (p*q)(x) = p(q(x)).
    """
    ident = tuple(range(degree))
    gens = [tuple(g) for g in generators]
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[x]] for x in range(degree))
                if q not in index:
                    index[q] = len(elems)
                    elems.append(q)
                    nxt.append(q)
        frontier = nxt
    table = tuple(tuple(index[tuple(p[q[x]] for x in range(degree))] for q in elems) for p in elems)
    return FiniteGroup(table, 0, tuple(str(list(p)) for p in elems)), elems


def group_algebra(G: FiniteGroup) -> Algebra:
    prods = {(a, b): {G.mul(a, b): 1} for a in range(G.order) for b in range(G.order)}
    return Algebra(list(G.labels), prods, {G.identity: 1})


# ---------------------------------------------------------------------------
# maps

@dataclass(frozen=True)
class AlgebraMap:
    source: Algebra
    target: Algebra
    matrix: Matrix  # dim target x dim source

    def __post_init__(self):
        if (self.matrix.rows, self.matrix.cols) != (self.target.dim, self.source.dim):
            raise ValueError(f"map matrix must be {self.target.dim}x{self.source.dim}, "
                             f"got {self.matrix.rows}x{self.matrix.cols}")

    def image_of(self, v: dict) -> dict:
        out: dict[int, Fraction] = {}
        m = self.matrix
        for j, x in v.items():
            for i in range(m.rows):
                c = m.entries[i * m.cols + j]
                if c:
                    out[i] = out.get(i, 0) + c * x
        return {k: x for k, x in out.items() if x}

    def images(self) -> list[dict]:
        return [self.image_of({j: Fraction(1)}) for j in range(self.source.dim)]

    def is_injective(self) -> bool:
        return rank_rows(self.images(), self.target.dim) == self.source.dim

    @classmethod
    def identity(cls, A: Algebra) -> "AlgebraMap":
        return cls(A, A, Matrix.identity(A.dim))

    @classmethod
    def from_images(cls, source: Algebra, target: Algebra, images: Sequence[dict]) -> "AlgebraMap":
        return cls(source, target, Matrix.from_sparse_columns(target.dim, [_vec(v) for v in images]))

    @classmethod
    def unit_map(cls, B: Algebra) -> "AlgebraMap":
        return cls.from_images(ground_field(), B, [B.unit])


def check_map(phi: AlgebraMap) -> list[str]:
    """Violated multiplicativity/unitality constraints; empty means valid."""
    A, B = phi.source, phi.target
    imgs = phi.images()
    problems = []
    if phi.image_of(A.unit) != B.unit:
        problems.append("not unital: image of 1 is not 1")
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = phi.image_of(dict(A.basis_product(i, j)))
            rhs = B.mul(imgs[i], imgs[j])
            if lhs != rhs:
                problems.append(f"not multiplicative on ({A.labels[i]}, {A.labels[j]})")
    return problems


# ---------------------------------------------------------------------------
# radical, centre, commutators

def trace_form(A: Algebra) -> list[list[Fraction]]:
    """t(e_i, e_j) = trace(L_{e_i} L_{e_j}) for the left regular representation."""
    n = A.dim
    # trace(L_x) = sum_k coefficient of e_k in x e_k
    tr = [sum((c for k in range(n) for kk, c in A.basis_product(i, k) if kk == k), Fraction(0))
          for i in range(n)]
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[i][j] = sum((c * tr[k] for k, c in A.basis_product(i, j)), Fraction(0))
    return out


def radical(A: Algebra) -> Subspace:
    """Jacobson radical in characteristic 0: the kernel of the trace form."""
    t = trace_form(A)
    return Subspace(A.dim, kernel_rows([dict((j, x) for j, x in enumerate(r) if x) for r in t], A.dim))


def is_semisimple(A: Algebra) -> bool:
    return radical(A).dim == 0


def center(A: Algebra) -> Subspace:
    n = A.dim
    rows = []
    for j in range(n):
        # coefficient equations of x e_j - e_j x = 0 for x = sum a_i e_i
        eqs: dict[int, dict[int, Fraction]] = {}
        for i in range(n):
            for k, c in A.basis_product(i, j):
                eqs.setdefault(k, {})[i] = eqs.get(k, {}).get(i, 0) + c
            for k, c in A.basis_product(j, i):
                eqs.setdefault(k, {})[i] = eqs.get(k, {}).get(i, 0) - c
        rows.extend({i: x for i, x in e.items() if x} for e in eqs.values())
    return Subspace(n, kernel_rows(rows, n))


def commutator_subspace(A: Algebra) -> Subspace:
    vecs = []
    for i in range(A.dim):
        for j in range(A.dim):
            d = vec_add(dict(A.basis_product(i, j)), dict(A.basis_product(j, i)), -1)
            if d:
                vecs.append(d)
    return Subspace(A.dim, vecs)


def is_ideal(A: Algebra, sub: Subspace) -> bool:
    for v in sub.sparse_basis:
        for i in range(A.dim):
            e = {i: Fraction(1)}
            if not sub.contains(A.mul(e, v)) or not sub.contains(A.mul(v, e)):
                return False
    return True


def quotient_algebra(A: Algebra, ideal: Subspace) -> Algebra:
    """A / ideal on the non-pivot basis vectors of the ideal's echelon basis."""
    piv = set(ideal.pivots)
    keep = [i for i in range(A.dim) if i not in piv]
    pos = {i: k for k, i in enumerate(keep)}

    def proj(v: dict) -> dict:
        r = ideal.reduce(v)
        return {pos[i]: x for i, x in r.items()}

    prods = {}
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            p = proj(dict(A.basis_product(i, j)))
            if p:
                prods[a, b] = p
    return Algebra([A.labels[i] for i in keep], prods, proj(A.unit))


def generated_subalgebra(A: Algebra, elements: Sequence[dict], base: Sequence[dict] = ()) -> Subspace:
    """Span of all products of the given elements together with 1 and the base elements."""
    span = Subspace(A.dim, [A.unit] + list(base) + list(elements))
    gens = [A.unit] + list(base) + list(elements)
    while True:
        new = [A.mul(u, g) for u in span.sparse_basis for g in gens]
        bigger = Subspace(A.dim, span.sparse_basis + new)
        if bigger.dim == span.dim:
            return span
        span = bigger


def algebra_generators(A: Algebra, candidates: Sequence[dict], base: Sequence[dict] = ()) -> list[dict]:
    """Greedy subset of candidates that together with base generates A as an algebra."""
    chosen: list[dict] = []
    span = generated_subalgebra(A, [], base)
    for c in candidates:
        if span.dim == A.dim:
            break
        if span.contains(c):
            continue
        chosen.append(c)
        span = generated_subalgebra(A, chosen, base)
    if span.dim != A.dim:
        raise AlgebraError("candidates do not generate the algebra")
    return chosen


def ideal_product_span(A: Algebra, left: Sequence[dict], right: Sequence[dict]) -> Subspace:
    return Subspace(A.dim, [A.mul(a, b) for a in left for b in right])


# ---------------------------------------------------------------------------
# idempotent systems (Peirce frames)

def orthogonal_idempotent_basis(A: Algebra) -> list[int] | None:
    """Basis indices of orthogonal idempotents summing to 1 that grade every basis vector.

    Returns None when no such subset exists.  The unit itself counts when it is
    a basis vector.
    """
    n = A.dim
    idem = [i for i in range(n) if A.basis_product(i, i) == ((i, Fraction(1)),)]
    cand = [i for i in idem if i in A.unit]
    if sorted(cand) != sorted(A.unit) or any(A.unit[i] != 1 for i in cand):
        return None
    for a in cand:
        for b in cand:
            if a != b and A.basis_product(a, b):
                return None
    for j in range(n):
        lefts = [a for a in cand if A.basis_product(a, j)]
        rights = [a for a in cand if A.basis_product(j, a)]
        if len(lefts) != 1 or len(rights) != 1:
            return None
        if A.basis_product(lefts[0], j) != ((j, Fraction(1)),):
            return None
        if A.basis_product(j, rights[0]) != ((j, Fraction(1)),):
            return None
    return sorted(cand)
