"""Mixed complexes, cyclic homology via the (b, B) bicomplex, and relative cyclic homology."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, AlgebraMap, orthogonal_idempotent_basis
from .exactla import SparseMatrix, Subspace
from .homology import (DEFAULT_BUDGET, DEFAULT_DEGREE, Base, ChainComplex, ComplexError, HochschildModel,
                       HomologyTable, JZReport, _alpha_maps, exact_at, exactness_check,
                       extension_frame, homology_dims)
from .tensor_strings import Frame

ONE = Fraction(1)


class MixedComplex:
    """Spaces C_0..C_N with b: C_n -> C_{n-1} and B_op: C_n -> C_{n+1} (n < N)."""

    def __init__(self, dims: Sequence[int], b: dict[int, SparseMatrix], B_op: dict[int, SparseMatrix],
                 validate: bool = True, name: str = ""):
        self.dims = list(dims)
        self.top_degree = len(self.dims) - 1
        self.b = dict(b)
        self.B_op = dict(B_op)
        self.name = name
        if validate:
            bad = self.identity_failures()
            if bad:
                raise ComplexError(f"mixed complex identity fails: {bad[0]}")

    def _bm(self, n):
        m = self.b.get(n)
        return m if m is not None else SparseMatrix.zeros(self.dims[n - 1] if n > 0 else 0, self.dims[n])

    def identity_failures(self) -> list[str]:
        bad = []
        N = self.top_degree
        for n in range(2, N + 1):
            if not (self._bm(n - 1) @ self._bm(n)).is_zero():
                bad.append(f"b^2 != 0 in degree {n}")
        for n in range(N - 1):
            if not (self.B_op[n + 1] @ self.B_op[n]).is_zero():
                bad.append(f"B^2 != 0 in degree {n}")
        for n in range(N):
            lhs = self._bm(n + 1) @ self.B_op[n]
            if n >= 1:
                rhs = self.B_op[n - 1] @ self._bm(n)
                total = SparseMatrix(lhs.rows, lhs.cols,
                                     [_add(a, c) for a, c in zip(lhs.columns, rhs.columns)])
            else:
                total = lhs
            if not total.is_zero():
                bad.append(f"bB + Bb != 0 in degree {n}")
        return bad

    def total(self) -> "TotalComplex":
        return TotalComplex(self)


def _add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, x in b.items():
        y = out.get(k, 0) + x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


class TotalComplex:
    """Tot_n = C_n + C_{n-2} + ... with d = b + B_op."""

    def __init__(self, mc: MixedComplex):
        self.mc = mc
        N = mc.top_degree
        self.parts = []   # per degree: list of (component degree, offset)
        dims = []
        for n in range(N + 1):
            off = 0
            parts = []
            for p in range(n, -1, -2):
                parts.append((p, off))
                off += mc.dims[p]
            self.parts.append(parts)
            dims.append(off)
        ds = {}
        for n in range(1, N + 1):
            cols: list[dict] = []
            tgt_off = dict(self.parts[n - 1])
            for p, _ in self.parts[n]:
                bm = mc._bm(p) if p >= 1 else None
                Bm = mc.B_op.get(p) if p + 1 <= n - 1 else None
                for j in range(mc.dims[p]):
                    col: dict = {}
                    if bm is not None and p - 1 in tgt_off:
                        o = tgt_off[p - 1]
                        for i, x in bm.columns[j].items():
                            col[o + i] = x
                    if Bm is not None and p + 1 in tgt_off:
                        o = tgt_off[p + 1]
                        for i, x in Bm.columns[j].items():
                            col[o + i] = col.get(o + i, 0) + x
                    cols.append({k: x for k, x in col.items() if x})
            ds[n] = SparseMatrix(dims[n - 1], dims[n], cols)
        self.complex = ChainComplex(dims, ds, name="Tot")

    def embed(self, n: int, p: int, v: dict) -> dict:
        off = dict(self.parts[n])[p]
        return {off + i: x for i, x in v.items()}

    def component(self, n: int, p: int, v: dict) -> dict:
        off = dict(self.parts[n])[p]
        size = self.mc.dims[p]
        return {i - off: x for i, x in v.items() if off <= i < off + size}


# ---------------------------------------------------------------------------
# construction from algebras

def connes_operator(model: HochschildModel, n: int) -> SparseMatrix:
    """B_op: C_n -> C_{n+1}, (a_0..a_n) -> sum_i (-1)^{ni} (1, a_i..a_n, a_0..a_{i-1})."""
    src = model.space(n)
    tgt = model.space(n + 1)
    lvl = model.tower.level(n + 1)
    unit = dict(model.B.unit)
    slot = model.slot
    cols = []
    for s in src.strings:
        a = [slot.proj({s[0]: ONE})] + [{f: ONE} for f in s[1:]]
        acc: dict = {}
        for i in range(n + 1):
            vecs = [unit] + a[i:] + a[:i]
            sign = -1 if (n * i) % 2 else 1
            for k, x in tgt.project(lvl.reduce(vecs)).items():
                y = acc.get(k, 0) + sign * x
                if y:
                    acc[k] = y
                else:
                    del acc[k]
        cols.append(acc)
    return SparseMatrix(tgt.dim, src.dim, cols)


def mixed_from_model(model: HochschildModel, N: int) -> MixedComplex:
    if model.X is not None and model.xpiece.dim != model.B.dim:
        raise ComplexError("Connes' operator needs the regular coefficients")
    dims = [model.space(n).dim for n in range(N + 1)]
    b = {n: model.boundary(n) for n in range(1, N + 1)}
    Bop = {n: connes_operator(model, n) for n in range(N)}
    return MixedComplex(dims, b, Bop, name=model.name)


def mixed_of_algebra(B: Algebra, N: int = DEFAULT_DEGREE, frame: Frame | None = None,
                     base_vectors: Sequence[dict] | None = None,
                     budget: int | None = DEFAULT_BUDGET) -> MixedComplex:
    """Normalized Hochschild chains with Connes' operator, relative to a separable base."""
    if frame is None:
        frame = extension_frame(None, B)
    base = Base.subalgebra(frame, base_vectors) if base_vectors else Base.idempotents(frame)
    model = HochschildModel(None, base, N, True, budget, "CC")
    return mixed_from_model(model, N)


def hc(B: Algebra, N: int = DEFAULT_DEGREE, frame: Frame | None = None,
       base_vectors: Sequence[dict] | None = None, budget: int | None = DEFAULT_BUDGET) -> HomologyTable:
    """HC_n(B) for the reliable range 0..N-2."""
    mc = mixed_of_algebra(B, N - 1, frame, base_vectors, budget)
    t = homology_dims(mc.total().complex, "HC")
    return HomologyTable(t.dims, "HC", (0, N - 2))


# ---------------------------------------------------------------------------
# relative cyclic homology

@dataclass
class QuotientComplex:
    complex: ChainComplex
    ambient: ChainComplex
    subspaces: list = field(default_factory=list)   # image of the subcomplex per degree
    keep: list = field(default_factory=list)        # surviving coordinates per degree

    def project(self, n: int, v: dict) -> dict:
        pos = {j: k for k, j in enumerate(self.keep[n])}
        r = self.subspaces[n].reduce(v) if self.subspaces[n].dim else v
        return {pos[j]: x for j, x in r.items()}


def quotient_complex(ambient: ChainComplex, images: list[list[dict]]) -> QuotientComplex:
    """ambient / (subcomplex spanned by images[n] in each degree)."""
    N = ambient.top_degree
    subs = [Subspace(ambient.dims[n], images[n]) for n in range(N + 1)]
    keep = []
    for n in range(N + 1):
        piv = set(subs[n].pivots)
        keep.append([j for j in range(ambient.dims[n]) if j not in piv])
    qc = QuotientComplex(None, ambient, subs, keep)
    ds = {}
    for n in range(1, N + 1):
        d = ambient.differential(n)
        cols = [qc.project(n - 1, d.columns[j]) for j in keep[n]]
        ds[n] = SparseMatrix(len(keep[n - 1]), len(keep[n]), cols)
    qc.complex = ChainComplex([len(k) for k in keep], ds, name="quotient")
    return qc


def _regular_models(iota: AlgebraMap, N: int, budget):
    A, B = iota.source, iota.target
    frame_b = extension_frame(iota, B, [])
    if frame_b.size > 1:
        frame_a = Frame(A, [{i: ONE} for i in orthogonal_idempotent_basis(A)])
    else:
        frame_a = Frame.trivial(A)
    ma = HochschildModel(None, Base.idempotents(frame_a), N, True, budget, "CC(A)")
    mb = HochschildModel(None, Base.idempotents(frame_b), N, True, budget, "CC(B)")
    return ma, mb


class CyclicPair:
    """Total complexes of A and B over a shared frame and the induced map between them."""

    def __init__(self, iota: AlgebraMap, N: int, budget: int | None = DEFAULT_BUDGET):
        ma, mb = _regular_models(iota, N, budget)
        self.ma, self.mb = ma, mb
        self.mca = mixed_from_model(ma, N)
        self.mcb = mixed_from_model(mb, N)
        self.ta = self.mca.total()
        self.tb = self.mcb.total()
        chain = _alpha_maps(iota, ma, mb, x_map=lambda i: iota.image_of({i: ONE}))
        self.alpha_chain = chain
        # degreewise map on total complexes
        self.alpha: dict[int, SparseMatrix] = {}
        for n in range(N + 1):
            cols = []
            for p, _ in self.ta.parts[n]:
                for j in range(self.mca.dims[p]):
                    cols.append(self.tb.embed(n, p, chain[p].columns[j]))
            self.alpha[n] = SparseMatrix(self.tb.complex.dims[n], self.ta.complex.dims[n], cols)
        images = [self.alpha[n].columns for n in range(N + 1)]
        self.quotient = quotient_complex(self.tb.complex, images)
        self.beta = {}
        for n in range(N + 1):
            cols = [self.quotient.project(n, {j: ONE}) for j in range(self.tb.complex.dims[n])]
            self.beta[n] = SparseMatrix(self.quotient.complex.dims[n], self.tb.complex.dims[n], cols)


def relative_hc(iota: AlgebraMap, N: int = DEFAULT_DEGREE, budget: int | None = DEFAULT_BUDGET) -> HomologyTable:
    """Homology of Tot(B) / image Tot(A), reliable for 0..N-2."""
    pair = CyclicPair(iota, N - 1, budget)
    t = homology_dims(pair.quotient.complex, "HC(B|A)")
    return HomologyTable(t.dims, "HC(B|A)", (0, N - 2))


@dataclass
class PeriodicityReport:
    table: tuple
    checked: list
    first_failure: str | None

    @property
    def passed(self) -> bool:
        return self.first_failure is None


def periodicity_check(iota: AlgebraMap, N: int = 6, budget: int | None = DEFAULT_BUDGET,
                      table: HomologyTable | None = None) -> PeriodicityReport:
    """dim HC_{n+2}(B|A) = dim HC_n(B|A) for 1 <= n <= N-4."""
    t = table if table is not None else relative_hc(iota, N, budget)
    checked, failure = [], None
    for n in range(1, N - 3):
        checked.append(n)
        if t[n + 2] != t[n] and failure is None:
            failure = f"HC periodicity fails at degree {n}: {t[n + 2]} != {t[n]}"
    return PeriodicityReport(tuple(t.dims), checked, failure)


def cyclic_jz_verify(iota: AlgebraMap, N: int = DEFAULT_DEGREE, budget: int | None = DEFAULT_BUDGET) -> JZReport:
    """HC(A) -> HC(B) -> HC(B|A) exactness and bookkeeping in the reliable range 0..N-2."""
    pair = CyclicPair(iota, N - 1, budget)
    return exactness_check(pair.ta.complex, pair.tb.complex, pair.quotient.complex,
                           pair.alpha, pair.beta, N - 2, "HC", exact_from=0)


# ---------------------------------------------------------------------------
# Connes' periodicity sequence

@dataclass
class SBIReport:
    hh: tuple
    hc: tuple
    exact: dict       # (spot, degree) -> bool
    first_failure: str | None

    @property
    def passed(self) -> bool:
        return self.first_failure is None


def sbi_check(mc: MixedComplex) -> SBIReport:
    """Exactness of ... HH_n -I-> HC_n -S-> HC_{n-2} -B-> HH_{n-1} ... in the reliable range.

    With chains through degree N, HH is reliable for n < N and HC for n < N,
    so every spot with degree at most N-2 is checked.
    """
    tot = mc.total()
    hc_c = tot.complex
    hh_c = ChainComplex(mc.dims, {n: mc._bm(n) for n in range(1, mc.top_degree + 1)}, name="C")
    N = mc.top_degree
    hh_t = homology_dims(hh_c)
    hc_t = homology_dims(hc_c)

    def Z(c, n):
        return c.differential(n).kernel()

    def Bd(c, n):
        return c.differential(n + 1).image()

    def I(n):
        return lambda v: tot.embed(n, n, v)

    def S(n):
        # Tot_n -> Tot_{n-2}: drop the C_n component
        def f(v):
            size = mc.dims[n]
            return {i - size: x for i, x in v.items() if i >= size}
        return f

    def Bconn(n):
        # HC_{n-1} -> HH_n: y -> B_op(top component of y)
        def f(v):
            top = tot.component(n - 1, n - 1, v)
            return mc.B_op[n - 1].apply(top)
        return f

    exact, failure = {}, None
    for n in range(0, N - 1):
        # at HC_n: im I_n = ker S_n
        if n >= 2:
            ok, _ = exact_at(Z(hh_c, n).sparse_basis, I(n), Z(hc_c, n), Bd(hc_c, n), S(n), Bd(hc_c, n - 2))
        else:
            ok, _ = exact_at(Z(hh_c, n).sparse_basis, I(n), Z(hc_c, n), Bd(hc_c, n),
                             lambda v: {}, Subspace(0))
        exact[("HC", n)] = ok
        # at HH_n: im B = ker I
        if n >= 1:
            ok2, _ = exact_at(Z(hc_c, n - 1).sparse_basis, Bconn(n), Z(hh_c, n), Bd(hh_c, n), I(n), Bd(hc_c, n))
        else:
            ok2, _ = exact_at([], lambda v: {}, Z(hh_c, 0), Bd(hh_c, 0), I(0), Bd(hc_c, 0))
        exact[("HH", n)] = ok2
        # at HC_{n-2} (as target of S_n): im S = ker B
        if n >= 2:
            ok3, _ = exact_at(Z(hc_c, n).sparse_basis, S(n), Z(hc_c, n - 2), Bd(hc_c, n - 2),
                              Bconn(n - 1), Bd(hh_c, n - 1))
            exact[("S", n)] = ok3
        for key in (("HC", n), ("HH", n), ("S", n)):
            if key in exact and not exact[key] and failure is None:
                failure = f"SBI sequence not exact at {key[0]} spot, degree {key[1]}"
    return SBIReport(tuple(hh_t.dims[:N - 1]), tuple(hc_t.dims[:N - 1]), exact, failure)
