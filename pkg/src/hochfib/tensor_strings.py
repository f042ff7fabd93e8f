"""Relative tensor strings M_0 (x)_R M_1 (x)_R ... (x)_R M_k and their cyclic closure.

All factors are bimodules over one acting algebra K.  A *frame* is a family of
orthogonal idempotents e_v of K summing to 1 such that every basis vector of
every factor lies in a single Peirce block e_w M e_v.  Tensoring over the span S
of the frame is then combinatorial: only composable basis strings survive.
Balancing over a larger subalgebra R containing S is imposed level by level by
quotienting out t.r (x) f - t (x) r.f for homogeneous algebra generators r of R
over S.  The quotient at each level keeps the non-pivot candidates of a
blockwise echelon form, so every basis vector is represented by a pure string.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .algebra import Algebra, AlgebraMap, generated_subalgebra, orthogonal_idempotent_basis, vec_add
from .exactla import Subspace, rref_rows

ONE = Fraction(1)


class BudgetExceeded(RuntimeError):
    def __init__(self, degree: int, dim: int, budget: int, what: str = "chain space"):
        self.degree, self.dim, self.budget = degree, dim, budget
        super().__init__(f"{what} in degree {degree} has dimension {dim} > budget {budget}")


class NotAdapted(ValueError):
    """A basis vector is not homogeneous for the chosen idempotent frame."""


def _lin(pairs) -> dict:
    out: dict = {}
    for k, c in pairs:
        if c:
            x = out.get(k, 0) + c
            if x:
                out[k] = x
            else:
                del out[k]
    return out


class Frame:
    def __init__(self, algebra: Algebra, idems: Sequence[dict]):
        self.algebra = algebra
        self.idems = [dict(e) for e in idems]

    @property
    def size(self) -> int:
        return len(self.idems)

    @classmethod
    def trivial(cls, K: Algebra) -> "Frame":
        return cls(K, [K.unit])

    @classmethod
    def of_algebra(cls, K: Algebra) -> "Frame":
        idx = orthogonal_idempotent_basis(K)
        if idx is None:
            return cls.trivial(K)
        return cls(K, [{i: ONE} for i in idx])

    def pushed(self, phi: AlgebraMap) -> "Frame":
        return Frame(phi.target, [phi.image_of(e) for e in self.idems])

    def homogeneous_parts(self, v: dict) -> list[dict]:
        K = self.algebra
        out = []
        for e in self.idems:
            ev = K.mul(e, v)
            if not ev:
                continue
            for f in self.idems:
                p = K.mul(ev, f)
                if p:
                    out.append(p)
        return out

    def generators_of(self, span: Sequence[dict]) -> list[dict]:
        """Homogeneous algebra generators of the subalgebra spanned by span, relative to S."""
        K = self.algebra
        target = generated_subalgebra(K, list(span), self.idems)
        parts = [p for v in span for p in self.homogeneous_parts(v)]
        chosen: list[dict] = []
        cur = generated_subalgebra(K, [], self.idems)
        for p in parts:
            if cur.dim == target.dim:
                break
            if cur.contains(p):
                continue
            chosen.append(p)
            cur = generated_subalgebra(K, chosen, self.idems)
        return chosen

    def is_adapted(self, pieces) -> bool:
        try:
            for p in pieces:
                p.vertices()
        except NotAdapted:
            return False
        return True


class Piece:
    """A K-bimodule with a basis, acting on basis vectors through memoized callables."""

    def __init__(self, frame: Frame, dim: int, left_basis, right_basis, labels=None):
        self.frame = frame
        self.K = frame.algebra
        self.dim = dim
        self._lb = left_basis    # (k, i) -> dict : e_k . m_i
        self._rb = right_basis   # (i, k) -> dict : m_i . e_k
        self._lmemo: dict = {}
        self._rmemo: dict = {}
        self.labels = labels or [str(i) for i in range(dim)]
        self._lv = self._rv = None

    def left_basis(self, k: int, i: int) -> dict:
        key = (k, i)
        v = self._lmemo.get(key)
        if v is None:
            v = self._lmemo[key] = self._lb(k, i)
        return v

    def right_basis(self, i: int, k: int) -> dict:
        key = (i, k)
        v = self._rmemo.get(key)
        if v is None:
            v = self._rmemo[key] = self._rb(i, k)
        return v

    def act_left(self, a: dict, i: int) -> dict:
        return _lin((j, c * x) for k, c in a.items() for j, x in self.left_basis(k, i).items())

    def act_right(self, i: int, a: dict) -> dict:
        return _lin((j, c * x) for k, c in a.items() for j, x in self.right_basis(i, k).items())

    def act_left_vec(self, a: dict, v: dict) -> dict:
        return _lin((j, c * y) for i, c in v.items() for j, y in self.act_left(a, i).items())

    def act_right_vec(self, v: dict, a: dict) -> dict:
        return _lin((j, c * y) for i, c in v.items() for j, y in self.act_right(i, a).items())

    def vertices(self):
        if self._lv is None:
            lv, rv = [], []
            for i in range(self.dim):
                unit_i = {i: ONE}
                ls = [v for v, e in enumerate(self.frame.idems) if self.act_left(e, i)]
                rs = [v for v, e in enumerate(self.frame.idems) if self.act_right(i, e)]
                if (len(ls) != 1 or len(rs) != 1
                        or self.act_left(self.frame.idems[ls[0]], i) != unit_i
                        or self.act_right(i, self.frame.idems[rs[0]]) != unit_i):
                    raise NotAdapted(f"basis vector {i} is not homogeneous for the frame")
                lv.append(ls[0])
                rv.append(rs[0])
            self._lv, self._rv = lv, rv
        return self._lv, self._rv

    @property
    def lv(self):
        return self.vertices()[0]

    @property
    def rv(self):
        return self.vertices()[1]

    # -- constructors --------------------------------------------------------
    @classmethod
    def regular(cls, frame: Frame) -> "Piece":
        K = frame.algebra
        return cls(frame, K.dim, lambda k, i: dict(K.basis_product(k, i)),
                   lambda i, k: dict(K.basis_product(i, k)), list(K.labels))

    @classmethod
    def from_matrices(cls, frame: Frame, dim: int, left_cols, right_cols, labels=None) -> "Piece":
        """left_cols[k][i] is the sparse column of the left action of e_k on basis vector i."""
        return cls(frame, dim, lambda k, i: left_cols[k][i], lambda i, k: right_cols[k][i], labels)

    @classmethod
    def pulled_back(cls, piece: "Piece", phi: AlgebraMap, frame: Frame) -> "Piece":
        """Restrict the actions of piece along phi: frame.algebra -> piece.K."""
        imgs = phi.images()
        return cls(frame, piece.dim, lambda k, i: piece.act_left(imgs[k], i),
                   lambda i, k: piece.act_right(i, imgs[k]), piece.labels)


class QuotientPiece(Piece):
    """K modulo the span of sub (an S-sub-bimodule of K).

    Basis: the K-basis vectors left over after echelon reduction of the block
    components of sub.  Only actions by elements preserving sub are meaningful.
    """

    def __init__(self, frame: Frame, sub: Sequence[dict]):
        K = frame.algebra
        reg = Piece.regular(frame)
        lv, rv = reg.vertices()
        comps = [p for v in sub for p in frame.homogeneous_parts(v)]
        space = Subspace(K.dim, comps)
        self.space = space
        piv = set(space.pivots)
        self.sel = [i for i in range(K.dim) if i not in piv]
        self.pos = {i: k for k, i in enumerate(self.sel)}
        super().__init__(frame, len(self.sel),
                         lambda k, i: self.proj(K.mul({k: ONE}, {self.sel[i]: ONE})),
                         lambda i, k: self.proj(K.mul({self.sel[i]: ONE}, {k: ONE})),
                         [K.labels[i] for i in self.sel])
        self._lv = [lv[i] for i in self.sel]
        self._rv = [rv[i] for i in self.sel]

    def proj(self, v: dict) -> dict:
        r = self.space.reduce(v) if self.space.dim else v
        return {self.pos[i]: x for i, x in r.items()}

    def lift(self, i: int) -> dict:
        return {self.sel[i]: ONE}

    def mul(self, i: int, j: int) -> dict:
        K = self.K
        return self.proj(dict(K.mul({self.sel[i]: ONE}, {self.sel[j]: ONE})))


class Level:
    """T_k = T_{k-1} (x)_R piece, or T_0 = piece."""

    def __init__(self, prev: "Level | None", piece: Piece, gens: Sequence[dict] = (),
                 budget: int | None = None, degree: int = 0):
        self.prev = prev
        self.piece = piece
        self.depth = 0 if prev is None else prev.depth + 1
        if prev is None:
            self.dim = piece.dim
            self.lv, self.rv = list(piece.lv), list(piece.rv)
            self.strings = [(i,) for i in range(piece.dim)]
            self.red = None
            return
        plv = piece.lv
        by_vertex: dict[int, list[int]] = {}
        for f in range(piece.dim):
            by_vertex.setdefault(plv[f], []).append(f)
        cands = [(t, f) for t in range(prev.dim) for f in by_vertex.get(prev.rv[t], ())]
        if budget is not None and len(cands) > 8 * budget:
            raise BudgetExceeded(degree, len(cands), budget, "candidate tensor space")
        frame = piece.frame
        K = piece.K
        hgens = []
        for g in gens:
            for p in frame.homogeneous_parts(g):
                # vertex pair (w, u) with p = e_w p e_u
                w = next(v for v, e in enumerate(frame.idems) if K.mul(e, p))
                u = next(v for v, e in enumerate(frame.idems) if K.mul(p, e))
                hgens.append((p, w, u))
        blocks: dict[tuple, list[tuple]] = {}
        for c in cands:
            key = (prev.lv[c[0]], piece.rv[c[1]])
            blocks.setdefault(key, []).append(c)
        red: dict[tuple, dict] = {}
        basis: list[tuple] = []
        if not hgens:
            for c in cands:
                red[c] = {len(basis): ONE}
                basis.append(c)
        else:
            t_by_rv: dict[int, list[int]] = {}
            for t in range(prev.dim):
                t_by_rv.setdefault(prev.rv[t], []).append(t)
            rels_by_block: dict[tuple, list[dict]] = {}
            for p, w, u in hgens:
                for t in t_by_rv.get(w, ()):
                    tr = prev.act_right(t, p)
                    for f in by_vertex.get(u, ()):
                        rf = piece.act_left(p, f)
                        rel: dict = {}
                        for t2, c in tr.items():
                            key = (t2, f)
                            rel[key] = rel.get(key, 0) + c
                        for f2, c in rf.items():
                            key = (t, f2)
                            rel[key] = rel.get(key, 0) - c
                        rel = {k: x for k, x in rel.items() if x}
                        if rel:
                            bkey = (prev.lv[t], piece.rv[f])
                            rels_by_block.setdefault(bkey, []).append(rel)
            pending = []
            for bkey, members in blocks.items():
                local = {c: n for n, c in enumerate(members)}
                rows = [{local[k]: x for k, x in r.items()} for r in rels_by_block.get(bkey, ())]
                ech, pivs = rref_rows(rows, len(members)) if rows else ([], [])
                pivset = set(pivs)
                keep = {}
                for n, c in enumerate(members):
                    if n not in pivset:
                        keep[n] = len(basis)
                        red[c] = {len(basis): ONE}
                        basis.append(c)
                for row, pv in zip(ech, pivs):
                    pending.append((members[pv], {keep[n]: -x for n, x in row.items() if n != pv}))
            for c, v in pending:
                red[c] = {k: x for k, x in v.items() if x}
        if budget is not None and len(basis) > budget:
            raise BudgetExceeded(degree, len(basis), budget)
        self.dim = len(basis)
        self.cands = basis
        self.lv = [prev.lv[t] for t, _ in basis]
        self.rv = [piece.rv[f] for _, f in basis]
        self.strings = [prev.strings[t] + (f,) for t, f in basis]
        self.red = red

    # -- arithmetic ------------------------------------------------------------
    def extend(self, prev_vec: dict, fvec: dict) -> dict:
        """(prev_vec) (x) (fvec) in level coordinates."""
        red = self.red
        out: dict = {}
        prv = self.prev.rv
        plv = self.piece.lv
        for t, c in prev_vec.items():
            rt = prv[t]
            for f, d in fvec.items():
                if plv[f] != rt:
                    continue
                for k, x in red[t, f].items():
                    y = out.get(k, 0) + c * d * x
                    if y:
                        out[k] = y
                    else:
                        del out[k]
        return out

    def reduce(self, vectors: Sequence[dict]) -> dict:
        if self.prev is None:
            return dict(vectors[0])
        return self.extend(self.prev.reduce(vectors[:-1]), vectors[-1])

    def reduce_string(self, s: Sequence[int]) -> dict:
        return self.reduce([{i: ONE} for i in s])

    def act_right(self, t: int, a: dict) -> dict:
        if self.prev is None:
            return self.piece.act_right(t, a)
        tp, f = self.cands[t]
        return self.extend({tp: ONE}, self.piece.act_right(f, a))

    def act_left(self, a: dict, t: int) -> dict:
        if self.prev is None:
            return self.piece.act_left(a, t)
        tp, f = self.cands[t]
        return self.extend(self.prev.act_left(a, tp), {f: ONE})

    def act_left_vec(self, a: dict, v: dict) -> dict:
        return _lin((j, c * y) for t, c in v.items() for j, y in self.act_left(a, t).items())

    def act_right_vec(self, v: dict, a: dict) -> dict:
        return _lin((j, c * y) for t, c in v.items() for j, y in self.act_right(t, a).items())


class Tower:
    """Levels over pieces[0], pieces[1], ..., repeating the last piece indefinitely."""

    def __init__(self, pieces: Sequence[Piece], gens: Sequence[Sequence[dict]] | Sequence[dict] = (),
                 budget: int | None = None, uniform_gens: bool = True):
        self.pieces = list(pieces)
        self.uniform = uniform_gens
        self.gens = list(gens)
        self.budget = budget
        self.levels: list[Level] = [Level(None, self.pieces[0])]

    def piece(self, k: int) -> Piece:
        return self.pieces[min(k, len(self.pieces) - 1)]

    def junction_gens(self, k: int):
        if self.uniform:
            return self.gens
        return self.gens[min(k - 1, len(self.gens) - 1)]

    def level(self, k: int, degree: int | None = None) -> Level:
        while len(self.levels) <= k:
            j = len(self.levels)
            self.levels.append(Level(self.levels[-1], self.piece(j), self.junction_gens(j),
                                     self.budget, j if degree is None else degree))
        return self.levels[k]


class Closure:
    """Cyclic closure of a level: closed strings modulo t.r - r.t for generators r of R."""

    def __init__(self, level: Level, gens: Sequence[dict] = ()):
        self.level = level
        frame = level.piece.frame
        K = level.piece.K
        closed = [t for t in range(level.dim) if level.lv[t] == level.rv[t]]
        cpos = {t: n for n, t in enumerate(closed)}
        rows = []
        if gens:
            by_pair: dict[tuple, list[int]] = {}
            for t in range(level.dim):
                by_pair.setdefault((level.lv[t], level.rv[t]), []).append(t)
            for g in gens:
                for p in frame.homogeneous_parts(g):
                    w = next(v for v, e in enumerate(frame.idems) if K.mul(e, p))
                    u = next(v for v, e in enumerate(frame.idems) if K.mul(p, e))
                    for t in by_pair.get((u, w), ()):
                        rel = vec_add(level.act_right(t, p), level.act_left(p, t), -1)
                        if rel:
                            rows.append({cpos[k]: x for k, x in rel.items()})
        ech, pivs = rref_rows(rows, len(closed)) if rows else ([], [])
        pivset = set(pivs)
        self.basis = [t for n, t in enumerate(closed) if n not in pivset]
        bpos = {t: n for n, t in enumerate(self.basis)}
        self._map: dict[int, dict] = {t: {bpos[t]: ONE} for t in self.basis}
        for row, pv in zip(ech, pivs):
            self._map[closed[pv]] = {bpos[closed[n]]: -x for n, x in row.items() if n != pv}
        self.dim = len(self.basis)
        self.strings = [level.strings[t] for t in self.basis]

    def project(self, v: dict) -> dict:
        """Level vector -> closure coordinates; open-block components vanish."""
        out: dict = {}
        m = self._map
        for t, c in v.items():
            img = m.get(t)
            if img is None:
                continue
            for k, x in img.items():
                y = out.get(k, 0) + c * x
                if y:
                    out[k] = y
                else:
                    del out[k]
        return out
