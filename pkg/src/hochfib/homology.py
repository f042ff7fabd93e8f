"""Chain complexes, bar and Hochschild complexes, Tor, Amitsur, and exactness checks."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import Algebra, AlgebraMap, orthogonal_idempotent_basis
from .bimodule import Bimodule, frame_for, regular_bimodule, restrict
from .exactla import SparseMatrix, Subspace, kernel_rows
from .tensor_strings import BudgetExceeded, Closure, Frame, Level, Piece, QuotientPiece, Tower

ONE = Fraction(1)
DEFAULT_DEGREE = 4
DEFAULT_BUDGET = 20000
WARN_DIM = 5000


class ComplexError(ValueError):
    pass


class ChainComplex:
    """Finite complex C_0..C_N with sparse differentials.

    Homological: differentials[n] maps C_n -> C_{n-1} (n = 1..N).
    Cohomological: differentials[n] maps C^n -> C^{n+1} (n = 0..N-1).
    """

    def __init__(self, dims: Sequence[int], differentials: dict[int, SparseMatrix],
                 cohomological: bool = False, name: str = "", validate: bool = True):
        self.dims = list(dims)
        self.top_degree = len(self.dims) - 1
        self.cohomological = cohomological
        self.name = name
        self._d = dict(differentials)
        for n, m in self._d.items():
            src = n
            tgt = n + 1 if cohomological else n - 1
            if not (0 <= tgt <= self.top_degree) or (m.rows, m.cols) != (self.dims[tgt], self.dims[src]):
                raise ComplexError(f"differential out of degree {n} has the wrong shape")
        if validate:
            bad = self.square_zero_failures()
            if bad:
                raise ComplexError(f"d o d != 0 in degree {bad[0]}")

    def differential(self, n: int) -> SparseMatrix:
        """The differential leaving degree n."""
        m = self._d.get(n)
        if m is not None:
            return m
        tgt = n + 1 if self.cohomological else n - 1
        rows = self.dims[tgt] if 0 <= tgt <= self.top_degree else 0
        cols = self.dims[n] if 0 <= n <= self.top_degree else 0
        return SparseMatrix.zeros(rows, cols)

    def incoming(self, n: int) -> SparseMatrix:
        return self.differential(n - 1 if self.cohomological else n + 1)

    def square_zero_failures(self) -> list[int]:
        bad = []
        for n in range(self.top_degree + 1):
            nxt = n + 1 if self.cohomological else n - 1
            if not 0 <= nxt <= self.top_degree:
                continue
            if n not in self._d or nxt not in self._d:
                continue
            if not (self._d[nxt] @ self._d[n]).is_zero():
                bad.append(n)
        return bad


@dataclass(frozen=True)
class HomologyTable:
    dims: tuple
    name: str = ""
    reliable: tuple = (0, -1)

    def __getitem__(self, n):
        return self.dims[n]

    def __len__(self):
        return len(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def as_dict(self) -> dict:
        return {"name": self.name, "dims": list(self.dims), "reliable_range": list(self.reliable)}


def homology_dims(c: ChainComplex, name: str = "") -> HomologyTable:
    """dim ker - rank of incoming map, for degrees 0..N-1."""
    ranks = {}

    def rk(m: SparseMatrix, key):
        if key not in ranks:
            ranks[key] = m.rank()
        return ranks[key]

    out = []
    for n in range(c.top_degree):
        out_rank = rk(c.differential(n), ("out", n))
        in_deg = n - 1 if c.cohomological else n + 1
        in_rank = rk(c.differential(in_deg), ("out", in_deg)) if 0 <= in_deg <= c.top_degree else 0
        out.append(c.dims[n] - out_rank - in_rank)
    return HomologyTable(tuple(out), name or c.name, (0, c.top_degree - 1))


class ChainMap:
    def __init__(self, source: ChainComplex, target: ChainComplex, maps: dict[int, SparseMatrix],
                 validate: bool = True, name: str = ""):
        self.source, self.target, self.maps, self.name = source, target, dict(maps), name
        if validate:
            bad = self.failures()
            if bad:
                raise ComplexError(f"{name or 'map'} is not a chain map in degree {bad[0]}")

    def failures(self) -> list[int]:
        bad = []
        for n in range(1, self.source.top_degree + 1):
            if n not in self.maps or n - 1 not in self.maps:
                continue
            lhs = self.target.differential(n) @ self.maps[n]
            rhs = self.maps[n - 1] @ self.source.differential(n)
            if not (lhs - rhs).is_zero():
                bad.append(n)
        return bad


# ---------------------------------------------------------------------------
# bases for relative tensor strings

@dataclass
class Base:
    """Subalgebra R containing the frame's idempotents: its algebra generators and a spanning set."""
    frame: Frame
    gens: list = field(default_factory=list)
    span: list = field(default_factory=list)

    @classmethod
    def idempotents(cls, frame: Frame) -> "Base":
        return cls(frame, [], list(frame.idems))

    @classmethod
    def subalgebra(cls, frame: Frame, vectors: Sequence[dict]) -> "Base":
        return cls(frame, frame.generators_of(vectors), list(vectors) + list(frame.idems))


def extension_frame(iota: AlgebraMap | None, B: Algebra, bimodules: Sequence[Bimodule] = ()) -> Frame:
    """Frame on B coming from the idempotent basis of A (or of B when iota is None)."""
    src = iota.source if iota is not None else B

    def test(fr):
        frb = fr.pushed(iota) if iota is not None else fr
        Piece.regular(frb).vertices()
        for X in bimodules:
            X.as_piece(frb).vertices()
        return frb

    fr = frame_for(src, test)
    return fr.pushed(iota) if iota is not None else fr


# ---------------------------------------------------------------------------
# Hochschild-type string complexes

class HochschildModel:
    """CH_n(B|R, X) = X (x)_{R^e} F^{(x)_R n}, F = B/R (normalized) or B.

    Strings (x, b_1, ..., b_n) with faces x b_1, b_i b_{i+1}, b_n x.
    """

    def __init__(self, X: Bimodule | None, base: Base, N: int, normalized: bool = True,
                 budget: int | None = DEFAULT_BUDGET, name: str = ""):
        self.base = base
        frame = base.frame
        self.B = frame.algebra
        self.N = N
        self.normalized = normalized
        self.X = X if X is not None else regular_bimodule(self.B)
        self.xpiece = Piece.regular(frame) if X is None else X.as_piece(frame)
        self.slot = QuotientPiece(frame, base.span if normalized else [])
        self.tower = Tower([self.xpiece, self.slot], base.gens, budget)
        self.budget = budget
        self.name = name
        self._closures: dict[int, Closure] = {}
        self._complex = None

    def space(self, n: int) -> Closure:
        c = self._closures.get(n)
        if c is None:
            lvl = self.tower.level(n, degree=n)
            c = self._closures[n] = Closure(lvl, self.base.gens)
            if self.budget is not None and c.dim > self.budget:
                raise BudgetExceeded(n, c.dim, self.budget)
            if c.dim > WARN_DIM:
                warnings.warn(f"{self.name or 'Hochschild'} chain space in degree {n} has dimension {c.dim}")
        return c

    def project(self, n: int, vectors: Sequence[dict]) -> dict:
        return self.space(n).project(self.tower.level(n).reduce(vectors))

    def faces(self, s: Sequence[int]) -> list[tuple[int, list[dict]]]:
        n = len(s) - 1
        sl = self.slot
        xp = self.xpiece
        unit = [{i: ONE} for i in s]
        out = []
        if n == 0:
            return out
        out.append((1, [xp.act_right(s[0], sl.lift(s[1]))] + unit[2:]))
        for i in range(1, n):
            out.append(((-1) ** i, unit[:i] + [sl.mul(s[i], s[i + 1])] + unit[i + 2:]))
        out.append(((-1) ** n, [xp.act_left(sl.lift(s[n]), s[0])] + unit[1:n]))
        return out

    def boundary(self, n: int) -> SparseMatrix:
        src = self.space(n)
        tgt = self.space(n - 1)
        lvl = self.tower.level(n - 1)
        cols = []
        for s in src.strings:
            acc: dict = {}
            for sign, vecs in self.faces(s):
                v = tgt.project(lvl.reduce(vecs))
                for k, x in v.items():
                    y = acc.get(k, 0) + sign * x
                    if y:
                        acc[k] = y
                    else:
                        del acc[k]
            cols.append(acc)
        return SparseMatrix(tgt.dim, src.dim, cols)

    def complex(self) -> ChainComplex:
        if self._complex is None:
            dims = [self.space(n).dim for n in range(self.N + 1)]
            ds = {n: self.boundary(n) for n in range(1, self.N + 1)}
            self._complex = ChainComplex(dims, ds, name=self.name)
        return self._complex

    def map_to(self, target: "HochschildModel", x_map: Callable[[int], dict],
               slot_map: Callable[[int], dict], degrees=None) -> dict[int, SparseMatrix]:
        out = {}
        for n in (degrees if degrees is not None else range(self.N + 1)):
            src = self.space(n)
            tgt = target.space(n)
            cols = [target.project(n, [x_map(s[0])] + [slot_map(f) for f in s[1:]]) for s in src.strings]
            out[n] = SparseMatrix(tgt.dim, src.dim, cols)
        return out


def _model(B: Algebra, iota: AlgebraMap | None, X: Bimodule | None, N: int, normalized: bool,
           budget, name: str = "", relative: bool = False) -> HochschildModel:
    """Model over B: relative to iota(A) if relative, else over the idempotents."""
    mods = [X] if X is not None else []
    frame = extension_frame(iota, B, mods)
    if relative:
        base = Base.subalgebra(frame, iota.images())
    else:
        base = Base.idempotents(frame)
    return HochschildModel(X, base, N, normalized, budget, name)


def hochschild_chain(B: Algebra, iota: AlgebraMap | None = None, X: Bimodule | None = None,
                     N: int = DEFAULT_DEGREE, normalized: bool = True,
                     budget: int | None = DEFAULT_BUDGET) -> ChainComplex:
    """CH_*(B|A, X); with iota None the chains are taken over the idempotent frame of B."""
    rel = iota is not None
    return _model(B, iota, X, N, normalized, budget, "CH", relative=rel).complex()


def hh(B: Algebra, X: Bimodule | None = None, N: int = DEFAULT_DEGREE,
       budget: int | None = DEFAULT_BUDGET, frame: Frame | None = None,
       base_vectors: Sequence[dict] | None = None) -> HomologyTable:
    """HH_n(B, X) for n < N.

    Chains are relative to a separable subalgebra: by default the span of an
    idempotent frame, optionally a larger separable subalgebra given by
    base_vectors.  Both give the absolute groups.
    """
    if frame is None:
        frame = extension_frame(None, B, [X] if X is not None else [])
    base = Base.subalgebra(frame, base_vectors) if base_vectors else Base.idempotents(frame)
    m = HochschildModel(X, base, N, True, budget, "HH")
    return homology_dims(m.complex(), "HH")


def relative_hh(iota: AlgebraMap, X: Bimodule | None = None, N: int = DEFAULT_DEGREE,
                budget: int | None = DEFAULT_BUDGET, normalized: bool = True) -> HomologyTable:
    m = _model(iota.target, iota, X, N, normalized, budget, "HH(B|A)", relative=True)
    return homology_dims(m.complex(), "HH(B|A)")


# ---------------------------------------------------------------------------
# bar complex

def relative_bar(B: Algebra, iota: AlgebraMap | None, N: int = DEFAULT_DEGREE,
                 budget: int | None = DEFAULT_BUDGET, warn_dim: int = WARN_DIM) -> ChainComplex:
    """CB_n(B|A) = B (x)_A ... (x)_A B with n+2 factors."""
    if iota is None:
        iota = AlgebraMap.unit_map(B)
    A = iota.source

    def test(fr):
        p = Piece.pulled_back(Piece.regular(fr.pushed(iota)), iota, fr)
        p.vertices()
        return p

    fr = frame_for(A, test)
    rb = test(fr)
    gens = fr.generators_of([{k: ONE} for k in range(A.dim)])
    tower = Tower([rb], gens, budget)
    levels = [tower.level(n + 1, degree=n) for n in range(N + 1)]
    for n, lv in enumerate(levels):
        if lv.dim > warn_dim:
            warnings.warn(f"bar complex degree {n} has dimension {lv.dim}")
    ds = {}
    for n in range(1, N + 1):
        src, tgt = levels[n], levels[n - 1]
        cols = []
        for s in src.strings:
            acc: dict = {}
            for i in range(n + 1):
                vecs = ([{j: ONE} for j in s[:i]] + [B.mul({s[i]: ONE}, {s[i + 1]: ONE})]
                        + [{j: ONE} for j in s[i + 2:]])
                for k, x in tgt.reduce(vecs).items():
                    y = acc.get(k, 0) + (-1) ** i * x
                    if y:
                        acc[k] = y
                    else:
                        del acc[k]
            cols.append(acc)
        ds[n] = SparseMatrix(tgt.dim, src.dim, cols)
    return ChainComplex([lv.dim for lv in levels], ds, name="CB")


# ---------------------------------------------------------------------------
# Tor over enveloping algebras

def tor_env(M: Bimodule, X: Bimodule, N: int = DEFAULT_DEGREE, budget: int | None = DEFAULT_BUDGET,
            base_vectors: Sequence[dict] | None = None) -> HomologyTable:
    """Tor^{A^e}_n(M, X) from the bar resolution A (x)_R Abar^{(x)_R n} (x)_R X of X.

    The resolution is projective when X is projective as a right A-module.
    R is the idempotent frame of A, or the separable subalgebra base_vectors.
    """
    A = M.over
    if X.over != A:
        raise ComplexError("Tor arguments over different algebras")

    def test(fr):
        M.as_piece(fr).vertices()
        X.as_piece(fr).vertices()
        Piece.regular(fr).vertices()
        return fr

    fr = frame_for(A, test)
    base = Base.subalgebra(fr, base_vectors) if base_vectors else Base.idempotents(fr)
    mp, xp = M.as_piece(fr), X.as_piece(fr)
    slot = QuotientPiece(fr, base.span)
    tower = Tower([mp, slot], base.gens, budget)
    spaces = []
    caps = []
    # M (x)_{A^e} (A (x)_R ... (x)_R X): the outer identification runs over all of A
    every = [{k: ONE} for k in range(A.dim)]
    for n in range(N + 1):
        cap = Level(tower.level(n, degree=n), xp, base.gens, budget, n)
        cl = Closure(cap, every)
        if budget is not None and cl.dim > budget:
            raise BudgetExceeded(n, cl.dim, budget)
        caps.append(cap)
        spaces.append(cl)
    ds = {}
    for n in range(1, N + 1):
        cols = []
        for s in spaces[n].strings:
            unit = [{i: ONE} for i in s]
            acc: dict = {}
            terms = [(1, [mp.act_right(s[0], slot.lift(s[1]))] + unit[2:])]
            for i in range(1, n):
                terms.append(((-1) ** i, unit[:i] + [slot.mul(s[i], s[i + 1])] + unit[i + 2:]))
            terms.append(((-1) ** n, unit[:n] + [xp.act_left(slot.lift(s[n]), s[n + 1])]))
            for sign, vecs in terms:
                for k, x in spaces[n - 1].project(caps[n - 1].reduce(vecs)).items():
                    y = acc.get(k, 0) + sign * x
                    if y:
                        acc[k] = y
                    else:
                        del acc[k]
            cols.append(acc)
        ds[n] = SparseMatrix(spaces[n - 1].dim, spaces[n].dim, cols)
    c = ChainComplex([s.dim for s in spaces], ds, name="Tor")
    return homology_dims(c, "Tor")


# ---------------------------------------------------------------------------
# cochains

def hochschild_cochain(B: Algebra, iota: AlgebraMap | None = None, X: Bimodule | None = None,
                       N: int = DEFAULT_DEGREE, budget: int | None = DEFAULT_BUDGET) -> ChainComplex:
    """CH^n(B|A, X) = Hom_{A^e}((B/A)^{(x)_A n}, X), normalized, as a cochain complex."""
    if X is None:
        X = regular_bimodule(B)
    frame = extension_frame(iota, B, [X])
    if iota is not None:
        base = Base.subalgebra(frame, iota.images())
    else:
        base = Base.idempotents(frame)
    K = frame.algebra
    xp = X.as_piece(frame)
    slot = QuotientPiece(frame, base.span)
    xlv, xrv = xp.vertices()
    hom_gens = []
    for g in base.gens:
        for p in frame.homogeneous_parts(g):
            w = next(v for v, e in enumerate(frame.idems) if K.mul(e, p))
            u = next(v for v, e in enumerate(frame.idems) if K.mul(p, e))
            hom_gens.append((p, w, u))

    # degree-n words: level n-1 of the slot tower (n >= 1); degree 0 is the frame itself
    tower = Tower([slot], base.gens, budget)

    def words(n):
        if n == 0:
            return None
        return tower.level(n - 1, degree=n)

    def variables(n):
        if n == 0:
            return [(None, x) for x in range(X.dim) if xlv[x] == xrv[x]]
        lvl = words(n)
        return [(t, x) for t in range(lvl.dim) for x in range(X.dim)
                if lvl.lv[t] == xlv[x] and lvl.rv[t] == xrv[x]]

    var_lists = [variables(n) for n in range(N + 1)]
    var_pos = [{v: i for i, v in enumerate(vs)} for vs in var_lists]

    def linearity(n) -> list[dict]:
        """Constraints f(r t) = r f(t), f(t r) = f(t) r in variable coordinates."""
        pos = var_pos[n]
        if n == 0:
            eqs = []
            for p, w, u in hom_gens:
                per_out: dict = {}
                for x in range(X.dim):
                    if xlv[x] != xrv[x]:
                        continue
                    d = {}
                    for y, c in xp.act_left(p, x).items():
                        d[y] = d.get(y, 0) + c
                    for y, c in xp.act_right(x, p).items():
                        d[y] = d.get(y, 0) - c
                    for y, c in d.items():
                        if c:
                            per_out.setdefault(y, {})[pos[(None, x)]] = c
                eqs.extend(per_out.values())
            return eqs
        lvl = words(n)
        eqs = []
        for p, w, u in hom_gens:
            for side in ("left", "right"):
                per: dict = {}
                for t in range(lvl.dim):
                    if side == "left" and lvl.lv[t] != u:
                        continue
                    if side == "right" and lvl.rv[t] != w:
                        continue
                    rt = lvl.act_left(p, t) if side == "left" else lvl.act_right(t, p)
                    # f(rt) - r f(t) = 0, coordinatewise in X, indexed by (t, output x')
                    for x in range(X.dim):
                        if (t, x) in pos:
                            acted = xp.act_left(p, x) if side == "left" else xp.act_right(x, p)
                            for y, c in acted.items():
                                key = (t, y)
                                per.setdefault(key, {})
                                j = pos[(t, x)]
                                per[key][j] = per[key].get(j, 0) - c
                    for t2, c in rt.items():
                        for x in range(X.dim):
                            if (t2, x) in pos:
                                key = (t, x)
                                per.setdefault(key, {})
                                j = pos[(t2, x)]
                                per[key][j] = per[key].get(j, 0) + c
                eqs.extend({j: c for j, c in row.items() if c} for row in per.values())
        return [e for e in eqs if e]

    spaces = [Subspace(len(var_lists[n]), kernel_rows(linearity(n), len(var_lists[n])))
              for n in range(N + 1)]

    def coboundary(n) -> SparseMatrix:
        """delta: C^n -> C^{n+1} in the echelon coordinates of the cochain spaces."""
        src, tgt = spaces[n], spaces[n + 1]
        lvl_next = words(n + 1)
        lvl = words(n)
        tpos = var_pos[n + 1]
        cols = []
        for f in src.sparse_basis:
            # f as a function: word t -> vector in X
            fval: dict = {}
            for j, c in f.items():
                t, x = var_lists[n][j]
                fval.setdefault(t, {})
                fval[t][x] = fval[t].get(x, 0) + c

            def ev(vec):
                out: dict = {}
                for t, c in vec.items():
                    for x, y in fval.get(t, {}).items():
                        out[x] = out.get(x, 0) + c * y
                return {k: v for k, v in out.items() if v}

            img: dict = {}
            for t2, s in enumerate(lvl_next.strings):
                m = len(s)  # = n + 1
                val: dict = {}

                def add(vec, c=1):
                    for k, v in vec.items():
                        val[k] = val.get(k, 0) + c * v

                if n == 0:
                    x0 = fval.get(None, {})
                    add(xp.act_left_vec(slot.lift(s[0]), x0))
                    add(xp.act_right_vec(x0, slot.lift(s[0])), -1)
                else:
                    unit = [{i: ONE} for i in s]
                    add(xp.act_left_vec(slot.lift(s[0]), ev(lvl.reduce(unit[1:]))))
                    for i in range(m - 1):
                        vecs = unit[:i] + [slot.mul(s[i], s[i + 1])] + unit[i + 2:]
                        add(ev(lvl.reduce(vecs)), (-1) ** (i + 1))
                    add(xp.act_right_vec(ev(lvl.reduce(unit[:-1])), slot.lift(s[-1])), (-1) ** m)
                for x, c in val.items():
                    if c:
                        img[tpos[(t2, x)]] = c
            piv = tgt.pivots
            coords = {k: img[p] for k, p in enumerate(piv) if img.get(p)}
            if tgt.reduce(img):
                raise ComplexError(f"coboundary leaves the cochain space in degree {n + 1}")
            cols.append(coords)
        return SparseMatrix(tgt.dim, src.dim, cols)

    ds = {n: coboundary(n) for n in range(N)}
    return ChainComplex([s.dim for s in spaces], ds, cohomological=True, name="CH^")


def hochschild_cohomology(B: Algebra, iota: AlgebraMap | None = None, X: Bimodule | None = None,
                          N: int = DEFAULT_DEGREE) -> HomologyTable:
    return homology_dims(hochschild_cochain(B, iota, X, N), "HH^")


# ---------------------------------------------------------------------------
# induced maps

def _ab_models(iota: AlgebraMap, N: int, budget, X: Bimodule | None = None):
    """Models for CH(A, Res X), CH(B, X) and CH(B|A, X) with a shared frame."""
    A, B = iota.source, iota.target
    Xb = X if X is not None else regular_bimodule(B)
    frame_b = extension_frame(iota, B, [Xb])
    # the A-side frame is the source frame when adapted, else trivial
    if frame_b.size > 1:
        idx = orthogonal_idempotent_basis(A)
        frame_a = Frame(A, [{i: ONE} for i in idx])
    else:
        frame_a = Frame.trivial(A)
    Xa = restrict(Xb, iota)
    ma = HochschildModel(Xa, Base.idempotents(frame_a), N, True, budget, "CH(A)")
    mb = HochschildModel(Xb, Base.idempotents(frame_b), N, True, budget, "CH(B)")
    mr = HochschildModel(Xb, Base.subalgebra(frame_b, iota.images()), N, True, budget, "CH(B|A)")
    return ma, mb, mr


def _alpha_maps(iota, ma, mb, x_map=None):
    A_slot, B_slot = ma.slot, mb.slot
    xm = x_map or (lambda i: {i: ONE})
    return ma.map_to(mb, xm, lambda f: B_slot.proj(iota.image_of(A_slot.lift(f))))


def _beta_maps(mb, mr):
    return mb.map_to(mr, lambda i: {i: ONE}, lambda f: mr.slot.proj(mb.slot.lift(f)))


def induced_inclusion_map(iota: AlgebraMap, N: int = DEFAULT_DEGREE,
                          budget: int | None = DEFAULT_BUDGET) -> ChainMap:
    """CH(A) -> CH(B) induced by iota on coefficients and on every slot."""
    A, B = iota.source, iota.target
    frame_b = extension_frame(iota, B, [])
    if frame_b.size > 1:
        frame_a = Frame(A, [{i: ONE} for i in orthogonal_idempotent_basis(A)])
    else:
        frame_a = Frame.trivial(A)
    ma = HochschildModel(None, Base.idempotents(frame_a), N, True, budget, "CH(A)")
    mb = HochschildModel(None, Base.idempotents(frame_b), N, True, budget, "CH(B)")
    maps = _alpha_maps(iota, ma, mb, x_map=lambda i: iota.image_of({i: ONE}))
    return ChainMap(ma.complex(), mb.complex(), maps, name="inclusion")


def induced_quotient_map(iota: AlgebraMap, N: int = DEFAULT_DEGREE,
                         budget: int | None = DEFAULT_BUDGET) -> ChainMap:
    """CH(B) -> CH(B|A) induced by the surjection onto relative strings."""
    _, mb, mr = _ab_models(iota, N, budget)
    return ChainMap(mb.complex(), mr.complex(), _beta_maps(mb, mr), name="quotient")


# ---------------------------------------------------------------------------
# Amitsur complex

@dataclass
class AmitsurReport:
    dims: list
    cohomology: list
    exact_through: int
    complex: ChainComplex = field(repr=False, default=None)

    @property
    def exact(self) -> bool:
        return all(h == 0 for h in self.cohomology)


def amitsur(iota: AlgebraMap, N: int = DEFAULT_DEGREE, budget: int | None = DEFAULT_BUDGET) -> AmitsurReport:
    """A -> B -> B (x)_A B -> ... with d = sum (-1)^i (insert 1 at slot i)."""
    A, B = iota.source, iota.target

    def test(fr):
        p = Piece.pulled_back(Piece.regular(fr.pushed(iota)), iota, fr)
        p.vertices()
        return p

    fr = frame_for(A, test)
    rb = test(fr)
    gens = fr.generators_of([{k: ONE} for k in range(A.dim)])
    tower = Tower([rb], gens, budget)
    levels = [None] + [tower.level(n - 1, degree=n) for n in range(1, N + 1)]
    dims = [A.dim] + [levels[n].dim for n in range(1, N + 1)]
    ds = {0: SparseMatrix(dims[1], A.dim, iota.images())}
    for n in range(1, N):
        tgt = levels[n + 1]
        cols = []
        for s in levels[n].strings:
            acc: dict = {}
            unit = [{i: ONE} for i in s]
            for i in range(n + 1):
                vecs = unit[:i] + [dict(B.unit)] + unit[i:]
                for k, x in tgt.reduce(vecs).items():
                    y = acc.get(k, 0) + (-1) ** i * x
                    if y:
                        acc[k] = y
                    else:
                        del acc[k]
            cols.append(acc)
        ds[n] = SparseMatrix(dims[n + 1], dims[n], cols)
    c = ChainComplex(dims, ds, cohomological=True, name="Amitsur")
    # cohomology in degrees 0..N-1 (degree 0 measures injectivity of A -> B)
    coh = list(homology_dims(c))
    exact_through = -1
    for n, h in enumerate(coh):
        if h:
            break
        exact_through = n
    return AmitsurReport(dims, coh, exact_through, c)


# ---------------------------------------------------------------------------
# Jacobi-Zariski exactness

@dataclass
class JZReport:
    hh_a: tuple
    hh_b: tuple
    hh_rel: tuple
    rank_alpha: list
    exact_at_b: list          # im alpha_n == ker beta_n
    bookkeeping: dict         # n -> (lhs, rhs) for n >= 2
    first_failure: str | None = None
    exact_from: int = 1
    label: str = "HH"

    @property
    def passed(self) -> bool:
        return self.first_failure is None

    def as_dict(self) -> dict:
        L = self.label
        return {f"{L}_A": list(self.hh_a), f"{L}_B": list(self.hh_b), f"{L}_rel": list(self.hh_rel),
                "rank_alpha": self.rank_alpha, "exact_at_B": self.exact_at_b,
                "exactness_asserted_from": self.exact_from,
                "bookkeeping": {str(k): list(v) for k, v in self.bookkeeping.items()},
                "passed": self.passed, "first_failure": self.first_failure}


def _combine(basis: list[dict], combos: list[dict]) -> list[dict]:
    out = []
    for cmb in combos:
        v: dict = {}
        for j, c in cmb.items():
            for i, x in basis[j].items():
                v[i] = v.get(i, 0) + c * x
        out.append({i: x for i, x in v.items() if x})
    return out


def exact_at(incoming_cycles: list[dict], f: Callable[[dict], dict], cycles: Subspace,
             boundaries: Subspace, g: Callable[[dict], dict], target_boundaries: Subspace) -> tuple[bool, int]:
    """Exactness of H(U) -f-> H(V) -g-> H(W) at H(V), given chain-level data.

    incoming_cycles spans Z(U); returns (exact, rank of f on homology).
    """
    ambient = cycles.ambient_dim
    u1 = Subspace(ambient, [f(z) for z in incoming_cycles] + boundaries.sparse_basis)
    zb = cycles.sparse_basis
    rows: dict[int, dict] = {}
    for j, z in enumerate(zb):
        for i, x in target_boundaries.reduce(g(z)).items():
            rows.setdefault(i, {})[j] = x
    combos = kernel_rows(list(rows.values()), len(zb))
    u2 = Subspace(ambient, _combine(zb, combos))
    return u1 == u2, u1.dim - boundaries.dim


def exactness_check(ca: ChainComplex, cb: ChainComplex, cr: ChainComplex,
                    alpha: dict[int, SparseMatrix], beta: dict[int, SparseMatrix],
                    top: int, label: str = "HH", exact_from: int = 1,
                    bookkeeping_from: int = 2) -> JZReport:
    """Exactness of H(A) -> H(B) -> H(rel) at H(B) plus the dimension bookkeeping.

    Degrees 0..top are computed; exactness is asserted from exact_from on and
    the bookkeeping identity from bookkeeping_from on.  Chains must exist
    through degree top + 1.
    """
    ha = homology_dims(ca)
    hb = homology_dims(cb)
    hr = homology_dims(cr)
    rank_alpha = []
    exact = []
    failure = None
    for n in range(top + 1):
        ok, rk = exact_at(ca.differential(n).kernel().sparse_basis, alpha[n].apply,
                          cb.differential(n).kernel(), cb.differential(n + 1).image(),
                          beta[n].apply, cr.differential(n + 1).image())
        exact.append(ok)
        rank_alpha.append(rk)
        if not ok and n >= exact_from and failure is None:
            failure = f"{label} Jacobi-Zariski exactness fails at degree {n}: im alpha != ker beta"
    book = {}
    for n in range(bookkeeping_from, top + 1):
        coker = hb[n] - rank_alpha[n]
        ker_prev = ha[n - 1] - rank_alpha[n - 1]
        book[n] = (hr[n], coker + ker_prev)
        if hr[n] != coker + ker_prev and failure is None:
            failure = (f"{label} Jacobi-Zariski dimension mismatch at degree {n}: "
                       f"relative {hr[n]} != coker {coker} + ker {ker_prev}")
    return JZReport(tuple(ha.dims[:top + 1]), tuple(hb.dims[:top + 1]), tuple(hr.dims[:top + 1]),
                    rank_alpha, exact, book, failure, exact_from, label)


def jz_verify(iota: AlgebraMap, X: Bimodule | None = None, N: int = DEFAULT_DEGREE,
              budget: int | None = DEFAULT_BUDGET) -> JZReport:
    ma, mb, mr = _ab_models(iota, N, budget, X)
    ca, cb, cr = ma.complex(), mb.complex(), mr.complex()
    alpha = ChainMap(ca, cb, _alpha_maps(iota, ma, mb), name="alpha").maps
    beta = ChainMap(cb, cr, _beta_maps(mb, mr), name="beta").maps
    return exactness_check(ca, cb, cr, alpha, beta, N - 1, "HH")
