"""Distributive laws, twisted products, canonical maps and the fibration classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .algebra import (Algebra, AlgebraMap, FiniteGroup, algebra_generators, check_map, group_algebra,
                      opposite, vec_add)
from .bimodule import (Bimodule, BimoduleMap, ExtensionTensor, ModuleError, _subspace_bimodule,
                       commutator_quotient, is_faithfully_flat, is_projective_bimodule, mho,
                       multiplication_map, regular_bimodule, restrict, sigma)
from .exactla import Matrix, Subspace, kernel_rows, rank_rows, solve_rows
from .homology import DEFAULT_BUDGET, DEFAULT_DEGREE, _model, hh, jz_verify, relative_hh

ONE = Fraction(1)


class FibrationError(ValueError):
    pass


def _acc(out: dict, v: dict, c=ONE) -> None:
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)


# ---------------------------------------------------------------------------
# distributive laws

class DistributiveLaw:
    """A linear map C (x) B -> B (x) C.

    Column c * dim B + b holds the image of c (x) b in coordinates b' * dim C + c'.
    """

    def __init__(self, b_algebra: Algebra, c_algebra: Algebra, matrix: Matrix):
        nb, nc = b_algebra.dim, c_algebra.dim
        if (matrix.rows, matrix.cols) != (nb * nc, nb * nc):
            raise FibrationError(f"law matrix must be {nb * nc}x{nb * nc}")
        self.b_algebra, self.c_algebra, self.matrix = b_algebra, c_algebra, matrix
        cols: list[dict] = [{} for _ in range(nb * nc)]
        for i in range(matrix.rows):
            for j in range(matrix.cols):
                x = matrix.entries[i * matrix.cols + j]
                if x:
                    cols[j][i] = x
        self._cols = cols

    @classmethod
    def from_function(cls, B: Algebra, C: Algebra, f: Callable[[int, int], dict]) -> "DistributiveLaw":
        cols = [f(c, b) for c in range(C.dim) for b in range(B.dim)]
        return cls(B, C, Matrix.from_sparse_columns(B.dim * C.dim, cols))

    @classmethod
    def flip(cls, B: Algebra, C: Algebra) -> "DistributiveLaw":
        return cls.from_function(B, C, lambda c, b: {b * C.dim + c: ONE})

    def basis_image(self, c: int, b: int) -> dict:
        return self._cols[c * self.b_algebra.dim + b]

    def apply(self, cv: dict, bv: dict) -> dict:
        out: dict = {}
        for c, x in cv.items():
            for b, y in bv.items():
                _acc(out, self.basis_image(c, b), x * y)
        return out

    def split(self, v: dict) -> list[tuple[int, int, Fraction]]:
        nc = self.c_algebra.dim
        return [(i // nc, i % nc, x) for i, x in v.items()]

    def rank(self) -> int:
        return rank_rows(self._cols, self.matrix.rows)


def _bc(nc: int, bv: dict, cv: dict) -> dict:
    return {b * nc + c: x * y for b, x in bv.items() for c, y in cv.items() if x * y}


def left_transposition_failures(law: DistributiveLaw) -> list[str]:
    """Compatibility with the product and unit of C."""
    B, C = law.b_algebra, law.c_algebra
    nc = C.dim
    bad = []
    for b in range(B.dim):
        if law.apply(C.unit, {b: ONE}) != _bc(nc, {b: ONE}, C.unit):
            bad.append(f"unit of C not preserved at b={B.labels[b]}")
    for c1 in range(nc):
        for c2 in range(nc):
            for b in range(B.dim):
                lhs = law.apply(C.mul({c1: ONE}, {c2: ONE}), {b: ONE})
                rhs: dict = {}
                for b1, c2p, x in law.split(law.basis_image(c2, b)):
                    for b2, c1p, y in law.split(law.basis_image(c1, b1)):
                        _acc(rhs, _bc(nc, {b2: ONE}, C.mul({c1p: ONE}, {c2p: ONE})), x * y)
                if lhs != rhs:
                    bad.append(f"product of C fails at ({C.labels[c1]}, {C.labels[c2]}, {B.labels[b]})")
    return bad


def right_transposition_failures(law: DistributiveLaw) -> list[str]:
    """Compatibility with the product and unit of B."""
    B, C = law.b_algebra, law.c_algebra
    nc = C.dim
    bad = []
    for c in range(nc):
        if law.apply({c: ONE}, B.unit) != _bc(nc, B.unit, {c: ONE}):
            bad.append(f"unit of B not preserved at c={C.labels[c]}")
    for c in range(nc):
        for b1 in range(B.dim):
            for b2 in range(B.dim):
                lhs = law.apply({c: ONE}, B.mul({b1: ONE}, {b2: ONE}))
                rhs: dict = {}
                for b1p, cp, x in law.split(law.basis_image(c, b1)):
                    for b2p, cpp, y in law.split(law.basis_image(cp, b2)):
                        _acc(rhs, _bc(nc, B.mul({b1p: ONE}, {b2p: ONE}), {cpp: ONE}), x * y)
                if lhs != rhs:
                    bad.append(f"product of B fails at ({C.labels[c]}, {B.labels[b1]}, {B.labels[b2]})")
    return bad


def is_left_transposition(law: DistributiveLaw) -> bool:
    return not left_transposition_failures(law)


def is_right_transposition(law: DistributiveLaw) -> bool:
    return not right_transposition_failures(law)


def distributive_law_failures(law: DistributiveLaw) -> list[str]:
    return left_transposition_failures(law) + right_transposition_failures(law)


def is_distributive_law(law: DistributiveLaw) -> bool:
    return not distributive_law_failures(law)


def twisted_product(law: DistributiveLaw, validate: bool = True) -> Algebra:
    """B (x) C with (b (x) c)(b' (x) c') = b law(c (x) b') c'; basis index b * dim C + c."""
    if validate:
        bad = distributive_law_failures(law)
        if bad:
            raise FibrationError(f"not a distributive law: {bad[0]}")
    B, C = law.b_algebra, law.c_algebra
    nc = C.dim
    prods = {}
    for b in range(B.dim):
        for c in range(nc):
            for b2 in range(B.dim):
                for c2 in range(nc):
                    out: dict = {}
                    for bp, cp, x in law.split(law.basis_image(c, b2)):
                        _acc(out, _bc(nc, B.mul({b: ONE}, {bp: ONE}), C.mul({cp: ONE}, {c2: ONE})), x)
                    if out:
                        prods[b * nc + c, b2 * nc + c2] = out
    labels = [f"{x}#{y}" for x in B.labels for y in C.labels]
    return Algebra(labels, prods, _bc(nc, B.unit, C.unit), validate=validate)


def check_invariance(generators: Sequence[dict], law: DistributiveLaw) -> bool:
    """Each law(c (x) x) lies in the line x (x) C."""
    C = law.c_algebra
    nc = C.dim
    n = law.b_algebra.dim * nc
    for x in generators:
        line = Subspace(n, [_bc(nc, x, {c: ONE}) for c in range(nc)])
        for c in range(nc):
            if not line.contains(law.apply({c: ONE}, x)):
                return False
    return True


# ---------------------------------------------------------------------------
# fibrations

@dataclass
class Grading:
    """A grading of B by a finite group, given by homogeneous vectors spanning B."""
    group: FiniteGroup
    homogeneous: list        # (vector in B, degree)

    def of_degree(self, g: int) -> list[dict]:
        return [v for v, d in self.homogeneous if d == g]


def twisted_bimodule(B: Algebra, T: Algebra, nc: int, c_unit: dict) -> Bimodule:
    """B (x) C as a B-bimodule through b -> b (x) 1."""
    def emb(k):
        return _bc(nc, {k: ONE}, c_unit)
    lc = [[T.mul(emb(k), {t: ONE}) for t in range(T.dim)] for k in range(B.dim)]
    rc = [[T.mul({t: ONE}, emb(k)) for t in range(T.dim)] for k in range(B.dim)]
    return Bimodule.from_columns(B, T.dim, lc, rc, T.labels, validate=False)


class Fibration:
    """Extension A -> B, fibre C, law C (x) B -> B (x) C and can: B (x)_A B -> B (x) C."""

    def __init__(self, extension: AlgebraMap, fibre: Algebra, law: DistributiveLaw,
                 can_matrix: Matrix, invariance_generators: Sequence[dict] | None = None,
                 grading: Grading | None = None, name: str = "", validate: bool = True):
        self.extension = extension
        self.fibre = fibre
        self.law = law
        self.name = name
        self.grading = grading
        A, B = extension.source, extension.target
        if law.b_algebra != B or law.c_algebra != fibre:
            raise FibrationError("law does not act on the extension's target and the fibre")
        self.invariance_generators = (list(invariance_generators) if invariance_generators is not None
                                      else [{k: ONE} for k in range(A.dim)])
        self.square = ExtensionTensor(extension)
        self.twisted = twisted_product(law, validate=validate)
        self.square_bimodule = self.square.bimodule()
        self.twisted_bimodule = twisted_bimodule(B, self.twisted, fibre.dim, fibre.unit)
        self.can = BimoduleMap(self.square_bimodule, self.twisted_bimodule, can_matrix, validate=False)
        if validate:
            problems = self.failures()
            if problems:
                raise FibrationError(problems[0])

    @property
    def A(self) -> Algebra:
        return self.extension.source

    @property
    def B(self) -> Algebra:
        return self.extension.target

    def failures(self) -> list[str]:
        bad = [f"extension map: {p}" for p in check_map(self.extension)]
        if not self.can.intertwines():
            bad.append("can does not intertwine the outer B-actions")
        gens = [self.extension.image_of(x) for x in self.invariance_generators]
        if not check_invariance(gens, self.law):
            bad.append("the image of A is not invariant under the law")
        return bad


def _bimodule_section(f: BimoduleMap) -> bool:
    """Does the bimodule surjection f admit a bimodule section?"""
    S, T = f.source, f.target
    B = S.over
    gens = algebra_generators(B, [{k: ONE} for k in range(B.dim)])
    ns, nt = S.dim, T.dim

    def var(i, j):      # s[i, j]: coefficient of source basis i in s(target basis j)
        return i * nt + j
    rows, rhs = [], []
    for j in range(nt):
        eqs: dict[int, dict] = {}
        for i in range(ns):
            for r, x in f.image_of({i: ONE}).items():
                eqs.setdefault(r, {})[var(i, j)] = x
        for r in range(nt):
            rows.append(eqs.get(r, {}))
            rhs.append(ONE if r == j else 0)
    for g in gens:
        for side in ("left", "right"):
            act_s = (lambda v: S.left(g, v)) if side == "left" else (lambda v: S.right(v, g))
            act_t = (lambda v: T.left(g, v)) if side == "left" else (lambda v: T.right(v, g))
            for j in range(nt):
                # s(g t_j) - g s(t_j) = 0
                eq: dict[int, dict] = {}
                for j2, x in act_t({j: ONE}).items():
                    for i in range(ns):
                        eq.setdefault(i, {})
                        eq[i][var(i, j2)] = eq[i].get(var(i, j2), 0) + x
                for i in range(ns):
                    for i2, y in act_s({i: ONE}).items():
                        eq.setdefault(i2, {})
                        eq[i2][var(i, j)] = eq[i2].get(var(i, j), 0) - y
                for r in eq.values():
                    r = {k: x for k, x in r.items() if x}
                    if r:
                        rows.append(r)
                        rhs.append(0)
    return solve_rows(rows, rhs, ns * nt) is not None


def central_unit_element(iota: AlgebraMap, square: ExtensionTensor | None = None) -> dict | None:
    """An element e of B (x)_A B with b e = e b for all b and e -> 1 under multiplication."""
    sq = square or ExtensionTensor(iota)
    B = iota.target
    gens = algebra_generators(B, [{k: ONE} for k in range(B.dim)])
    rows: dict[tuple, dict] = {}
    for t in range(sq.dim):
        for gi, g in enumerate(gens):
            d = vec_add(sq.left_b(g, t), sq.right_b(t, g), -1)
            for i, x in d.items():
                rows.setdefault((gi, i), {})[t] = x
    ker = kernel_rows(list(rows.values()), sq.dim) if rows else [{t: ONE} for t in range(sq.dim)]
    mu = multiplication_map(sq)
    images = []
    for v in ker:
        w: dict = {}
        for t, x in v.items():
            _acc(w, mu[t], x)
        images.append(w)
    # coefficients y with sum y_k images_k = 1
    eqs: list[dict] = [{} for _ in range(B.dim)]
    for k, w in enumerate(images):
        for i, x in w.items():
            eqs[i][k] = x
    y = solve_rows(eqs, [B.unit.get(i, 0) for i in range(B.dim)], len(ker))
    if y is None:
        return None
    e: dict = {}
    for k, c in y.items():
        _acc(e, ker[k], c)
    return e


FLAG_NAMES = ("is_fibration", "unramified", "etale", "separable_fibration", "smooth_fibration", "galois",
              "ext_reduced_flat", "ext_almost_smooth", "ext_smooth", "ext_separable", "ext_faithfully_flat")


def classify(f: Fibration) -> dict[str, bool]:
    """Boolean flags of the fibration and of its underlying extension."""
    can = f.can
    S, T = can.source, can.target
    rk = can.rank()
    is_epi = rk == T.dim
    galois = S.dim == T.dim and is_epi
    law_rank = f.law.rank()
    n_law = f.law.matrix.rows
    flags = {
        "is_fibration": is_epi and not f.failures(),
        "unramified": law_rank == n_law,
        "etale": law_rank == f.law.matrix.cols,
        "galois": galois,
    }
    if galois:
        flags["separable_fibration"] = True
    elif is_epi:
        flags["separable_fibration"] = _bimodule_section(can)
    else:
        flags["separable_fibration"] = False
    if rk == S.dim:
        flags["smooth_fibration"] = True
    else:
        cols = [can.image_of({i: ONE}) for i in range(S.dim)]
        rows: list[dict] = [{} for _ in range(T.dim)]
        for i, c in enumerate(cols):
            for r, x in c.items():
                rows[r][i] = x
        ker = Subspace(S.dim, kernel_rows([r for r in rows if r], S.dim))
        K = _subspace_bimodule(f.B, ker, S.left, S.right)
        flags["smooth_fibration"] = is_projective_bimodule(K)
    flags.update(extension_flags(f.extension, f.square))
    return {k: flags[k] for k in FLAG_NAMES}


def extension_flags(iota: AlgebraMap, square: ExtensionTensor | None = None) -> dict[str, bool]:
    flags = {}
    try:
        flags["ext_reduced_flat"] = is_projective_bimodule(mho(iota))
    except ModuleError:
        flags["ext_reduced_flat"] = False
    Sg, _ = sigma(iota)
    # flat and projective agree for finite-dimensional modules
    flags["ext_smooth"] = is_projective_bimodule(Sg)
    flags["ext_almost_smooth"] = flags["ext_smooth"]
    flags["ext_separable"] = central_unit_element(iota, square) is not None
    flags["ext_faithfully_flat"] = is_faithfully_flat(iota)
    return flags


# ---------------------------------------------------------------------------
# canonical maps

def canonical_map_from_element(square: ExtensionTensor, T: Algebra, nc: int, c_unit: dict,
                               eps: dict) -> Matrix:
    """can(b (x) b') = (b (x) 1) eps (b' (x) 1) on the basis strings of B (x)_A B."""
    cols = []
    for s in square.level.strings:
        left = _bc(nc, {s[0]: ONE}, c_unit)
        right = _bc(nc, {s[1]: ONE}, c_unit)
        cols.append(T.mul(T.mul(left, eps), right))
    return Matrix.from_sparse_columns(T.dim, cols)


def commutant(T: Algebra, elements: Sequence[dict]) -> list[dict]:
    rows: dict[tuple, dict] = {}
    for ei, e in enumerate(elements):
        for t in range(T.dim):
            d = vec_add(T.mul(e, {t: ONE}), T.mul({t: ONE}, e), -1)
            for i, x in d.items():
                rows.setdefault((ei, i), {})[t] = x
    return kernel_rows(list(rows.values()), T.dim)


def _candidates(basis: list[dict]):
    yield from basis
    for p in (1, 2, 3):
        v: dict = {}
        for j, b in enumerate(basis):
            _acc(v, b, Fraction((j + 1) ** p))
        yield v


def balanced_canonical_map(iota: AlgebraMap, law: DistributiveLaw, square: ExtensionTensor | None = None
                           ) -> Matrix:
    """can(b (x) b') = b eps b' for the first element eps of the commutant of A in B (x) C
    (basis vectors, then fixed generic combinations) that makes can bijective, or the
    first basis vector when none does."""
    sq = square or ExtensionTensor(iota)
    C = law.c_algebra
    T = twisted_product(law, validate=False)
    nc = C.dim
    a_images = [_bc(nc, v, C.unit) for v in iota.images()]
    basis = commutant(T, a_images)
    if not basis:
        raise FibrationError("the image of A has trivial commutant")
    first = None
    for eps in _candidates(basis):
        m = canonical_map_from_element(sq, T, nc, C.unit, eps)
        if first is None:
            first = m
        if m.rows == m.cols and rank_rows(_matrix_columns(m), m.rows) == m.rows:
            return m
    return first


def _matrix_columns(m: Matrix) -> list[dict]:
    return [{i: m.entries[i * m.cols + j] for i in range(m.rows) if m.entries[i * m.cols + j]}
            for j in range(m.cols)]


def trivial_fibration(B: Algebra) -> Fibration:
    """A = B, C = k, flip law, can = multiplication."""
    from .algebra import ground_field
    iota = AlgebraMap.identity(B)
    k = ground_field()
    law = DistributiveLaw.flip(B, k)
    sq = ExtensionTensor(iota)
    mu = multiplication_map(sq)
    can = Matrix.from_sparse_columns(B.dim, mu)
    trivial_group = FiniteGroup(((0,),))
    grading = Grading(trivial_group, [({i: ONE}, 0) for i in range(B.dim)])
    return Fibration(iota, k, law, can, grading=grading, name="trivial")


# ---------------------------------------------------------------------------
# smash products

def _validate_action(L: Algebra, G: FiniteGroup, action: Sequence[Matrix]) -> None:
    if len(action) != G.order:
        raise FibrationError("need one action matrix per group element")
    maps = []
    for g, m in enumerate(action):
        try:
            phi = AlgebraMap(L, L, m)
        except ValueError as e:
            raise FibrationError(f"action of {G.labels[g]}: {e}") from None
        bad = check_map(phi)
        if bad:
            raise FibrationError(f"action of {G.labels[g]} is not an algebra map: {bad[0]}")
        maps.append(phi)
    if action[G.identity] != Matrix.identity(L.dim):
        raise FibrationError("the identity does not act trivially")
    for g in range(G.order):
        for h in range(G.order):
            if action[G.mul(g, h)] != action[g] @ action[h]:
                raise FibrationError(f"action is not multiplicative at ({G.labels[g]}, {G.labels[h]})")


def _act(action: Sequence[Matrix], g: int, v: dict) -> dict:
    m = action[g]
    out: dict = {}
    for j, x in v.items():
        for i in range(m.rows):
            y = m.entries[i * m.cols + j]
            if y:
                out[i] = out.get(i, 0) + x * y
    return {k: x for k, x in out.items() if x}


def group_action_law(L: Algebra, G: FiniteGroup, action: Sequence[Matrix]) -> DistributiveLaw:
    """g (x) u -> (g . u) (x) g, a law kG (x) L -> L (x) kG."""
    n = G.order
    return DistributiveLaw.from_function(
        L, group_algebra(G), lambda g, u: {w * n + g: x for w, x in _act(action, g, {u: ONE}).items()})


def smash_algebra(L: Algebra, G: FiniteGroup, action: Sequence[Matrix]) -> tuple[Algebra, AlgebraMap]:
    """L # kG with (u g)(v h) = u (g.v) gh, basis u * |G| + g, and kG -> L # kG."""
    n = G.order
    B = twisted_product(group_action_law(L, G, action))
    kG = group_algebra(G)
    iota = AlgebraMap.from_images(kG, B, [_bc(n, L.unit, {g: ONE}) for g in range(n)])
    return B, iota


def _rational_characters(G: FiniteGroup, limit: int = 12) -> list[tuple]:
    if G.order > limit:
        return []
    out = []
    for values in product((1, -1), repeat=G.order):
        if values[G.identity] != 1:
            continue
        if all(values[G.mul(a, b)] == values[a] * values[b] for a in range(G.order) for b in range(G.order)):
            out.append(values)
    return out


def _smash_grading(L: Algebra, G: FiniteGroup, action: Sequence[Matrix], B: Algebra) -> Grading | None:
    """Grading of L # kG by the rational characters of G when it has A in degree zero."""
    chars = _rational_characters(G)
    n = G.order
    pieces = []
    for chi in chars:
        rows = []
        for g in range(n):
            for i in range(L.dim):
                r = {j: action[g].entries[i * L.dim + j] for j in range(L.dim)}
                r[i] = r.get(i, 0) - chi[g]
                r = {j: x for j, x in r.items() if x}
                if r:
                    rows.append(r)
        eig = kernel_rows(rows, L.dim) if rows else [{j: ONE} for j in range(L.dim)]
        if eig:
            pieces.append((chi, eig))
    if sum(len(e) for _, e in pieces) != L.dim or len(pieces[0][1]) != 1 or pieces[0][0] != chars[0]:
        return None
    present = [chi for chi, _ in pieces]
    index = {chi: i for i, chi in enumerate(present)}
    try:
        table = tuple(tuple(index[tuple(x * y for x, y in zip(a, b))] for b in present) for a in present)
    except KeyError:
        return None
    gamma = FiniteGroup(table, 0, tuple("chi" + str(i) for i in range(len(present))))
    homog = []
    for chi, eig in pieces:
        for v in eig:
            for g in range(n):
                homog.append((_bc(n, v, {g: ONE}), index[chi]))
    return Grading(gamma, homog)


def smash_fibration(L: Algebra, G: FiniteGroup, action: Sequence[Matrix]) -> Fibration:
    """B = L # kG over A = kG with fibre L^op and law v (x) wh -> wh (x) (h^-1 . v)."""
    _validate_action(L, G, action)
    n = G.order
    B, iota = smash_algebra(L, G, action)
    C = opposite(L)
    nc = C.dim

    def law_of(v, b):
        w, h = divmod(b, n)
        return {b * nc + u: x for u, x in _act(action, G.inverse(h), {v: ONE}).items()}
    law = DistributiveLaw.from_function(B, C, law_of)
    sq = ExtensionTensor(iota)
    can = balanced_canonical_map(iota, law, sq)
    grading = _smash_grading(L, G, action, B)
    return Fibration(iota, C, law, can, grading=grading, name="smash")


def permutation_action(L_dim: int, G: FiniteGroup, perms: Sequence[Sequence[int]]) -> list[Matrix]:
    """Action matrices permuting the coordinate idempotents of k^n."""
    out = []
    for p in perms:
        out.append(Matrix.from_sparse_columns(L_dim, [{p[j]: ONE} for j in range(L_dim)]))
    return out


# ---------------------------------------------------------------------------
# verifiers

@dataclass
class VerifierReport:
    name: str
    passed: bool
    first_failure: str | None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "first_failure": self.first_failure,
                "details": self.details}


def translation_elements(f: Fibration) -> dict[int, list[tuple[dict, dict, Fraction]]]:
    """For each degree g, terms (a, b, c) with a of degree g^-1, b of degree g and sum c a b = 1."""
    gr = f.grading
    if gr is None:
        raise FibrationError("fibration carries no grading")
    B = f.B
    G = gr.group
    out = {}
    for g in range(G.order):
        lefts = gr.of_degree(G.inverse(g))
        rights = gr.of_degree(g)
        pairs = [(a, b) for a in lefts for b in rights]
        eqs: list[dict] = [{} for _ in range(B.dim)]
        for k, (a, b) in enumerate(pairs):
            for i, x in B.mul(a, b).items():
                eqs[i][k] = x
        y = solve_rows(eqs, [B.unit.get(i, 0) for i in range(B.dim)], len(pairs))
        if y is None:
            raise FibrationError(f"no translation element in degree {G.labels[g]}: grading is not strong")
        out[g] = [(pairs[k][0], pairs[k][1], c) for k, c in sorted(y.items())]
    return out


def fibre_coefficients(f: Fibration, X: Bimodule) -> Bimodule:
    """X/[X,A] as a bimodule over the group algebra of the grading group: g acts on the left
    by [x] -> [sum c b x a] over the translation element of degree g, trivially on the right."""
    gr = f.grading
    G = gr.group
    kG = group_algebra(G)
    Xa = restrict(X, f.extension)
    cq = commutator_quotient(Xa)
    theta = translation_elements(f)
    left = []
    for g in range(G.order):
        cols = []
        for j in cq.sel:
            acc: dict = {}
            for a, b, c in theta[g]:
                _acc(acc, X.left(b, X.right({j: ONE}, a)), c)
            cols.append(cq.proj(acc))
        left.append(Matrix.from_sparse_columns(cq.dim, cols))
    right = [Matrix.identity(cq.dim) for _ in range(G.order)]
    return Bimodule(kG, cq.dim, left, right, validate=True)


def homological_fibre(f: Fibration) -> Algebra:
    return group_algebra(f.grading.group) if f.grading is not None else f.fibre


def relative_chain_dims(f: Fibration, X: Bimodule, N: int, budget=DEFAULT_BUDGET) -> list[int]:
    """Dimensions of the unnormalized relative chains CH_n(B|A, X), n < N."""
    m = _model(f.B, f.extension, X, N, False, budget, "CH(B|A)", relative=True)
    return [m.space(n).dim for n in range(N)]


def verify_main_hjz(f: Fibration, X: Bimodule | None = None, N: int = DEFAULT_DEGREE,
                    budget: int | None = DEFAULT_BUDGET) -> VerifierReport:
    """HH_n(B|A, X) against HH_n(fibre, X/[X,A]) and the chain-level dimension count."""
    X = X if X is not None else regular_bimodule(f.B)
    name = "MainHJZ"
    if not classify(f)["galois"]:
        return VerifierReport(name, False, "MainHJZ precondition: fibration is not Galois")
    if f.grading is None:
        return VerifierReport(name, False, "MainHJZ: no fibre action on X/[X,A] is available "
                                           "(fibration carries no grading)")
    lhs = relative_hh(f.extension, X, N, budget)
    M = fibre_coefficients(f, X)
    rhs = hh(homological_fibre(f), M, N, budget)
    chains = relative_chain_dims(f, X, N, budget)
    expected = [M.dim * f.fibre.dim ** n for n in range(N)]
    failure = None
    for n in range(N):
        if lhs[n] != rhs[n]:
            failure = f"MainHJZ dimension mismatch at degree {n}: {lhs[n]} != {rhs[n]}"
            break
    if failure is None:
        for n in range(N):
            if chains[n] != expected[n]:
                failure = f"MainHJZ chain dimension mismatch at degree {n}: {chains[n]} != {expected[n]}"
                break
    details = {"HH_rel": list(lhs.dims), "HH_fibre": list(rhs.dims), "coinvariants_dim": M.dim,
               "fibre_dim": f.fibre.dim, "chain_dims": chains, "expected_chain_dims": expected,
               "reliable_range": [0, N - 1]}
    return VerifierReport(name, failure is None, failure, details)


def verify_main_cjz(f: Fibration, N: int = DEFAULT_DEGREE, budget: int | None = DEFAULT_BUDGET,
                    include_cyclic: bool = True) -> VerifierReport:
    """Jacobi-Zariski exactness for X = B plus HH_n(B|A,B) = dim(B/[B,A]) dim HH_n(fibre)."""
    from .cyclic import cyclic_jz_verify
    name = "MainCJZ"
    flags = classify(f)
    if not (flags["galois"] and flags["ext_reduced_flat"]):
        return VerifierReport(name, False, "MainCJZ precondition: needs a Galois, reduced flat fibration",
                              {"flags": flags})
    jz = jz_verify(f.extension, None, N, budget)
    rel = jz.hh_rel
    coinv = commutator_quotient(restrict(regular_bimodule(f.B), f.extension)).dim
    hf = hh(homological_fibre(f), None, N, budget)
    failure = jz.first_failure
    book = {}
    for n in range(1, N):
        book[n] = [rel[n], coinv * hf[n]]
        if rel[n] != coinv * hf[n] and failure is None:
            failure = f"MainCJZ dimension mismatch at degree {n}: {rel[n]} != {coinv} * {hf[n]}"
    details = {"hochschild": jz.as_dict(), "coinvariants_dim": coinv, "HH_fibre": list(hf.dims),
               "product_check": {str(k): v for k, v in book.items()}}
    if include_cyclic:
        cj = cyclic_jz_verify(f.extension, N + 1, budget)
        details["cyclic"] = cj.as_dict()
        if cj.first_failure and failure is None:
            failure = cj.first_failure
    return VerifierReport(name, failure is None, failure, details)
