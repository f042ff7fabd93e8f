"""Simple graphs, unramified coverings, monodromy, and groupoid algebras."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from .algebra import Algebra, AlgebraMap, FiniteGroup, permutation_group

ONE = Fraction(1)


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset

    def __init__(self, vertices: Sequence[Hashable], edges: Sequence[Sequence[Hashable]]):
        vs = tuple(vertices)
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertex labels")
        vset = set(vs)
        es = []
        for e in edges:
            e = tuple(e)
            if len(e) != 2:
                raise GraphError(f"edge {e} does not have two endpoints")
            a, b = e
            if a == b:
                raise GraphError(f"loop at vertex {a!r}")
            if a not in vset or b not in vset:
                raise GraphError(f"edge {e} uses an unknown vertex")
            es.append(frozenset(e))
        if len(set(es)) != len(es):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))
        adj: dict = {v: [] for v in vs}
        order = {v: i for i, v in enumerate(vs)}
        for e in es:
            a, b = tuple(e)
            adj[a].append(b)
            adj[b].append(a)
        for v in vs:
            adj[v].sort(key=order.__getitem__)
        object.__setattr__(self, "_adj", adj)
        object.__setattr__(self, "_order", order)

    def neighbors(self, v) -> list:
        return self._adj[v]

    def index(self, v) -> int:
        return self._order[v]

    def has_edge(self, a, b) -> bool:
        return frozenset((a, b)) in self.edges

    def sorted_edges(self) -> list[tuple]:
        return sorted((tuple(sorted(e, key=self.index)) for e in self.edges),
                      key=lambda e: (self.index(e[0]), self.index(e[1])))

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.spanning_tree(self.vertices[0])) == len(self.vertices)

    def spanning_tree(self, root) -> dict:
        """Breadth-first parent map; the root maps to None."""
        parent = {root: None}
        q = deque([root])
        while q:
            v = q.popleft()
            for w in self._adj[v]:
                if w not in parent:
                    parent[w] = v
                    q.append(w)
        return parent


def cycle_graph(n: int, offset: int = 0) -> Graph:
    return Graph(list(range(offset, offset + n)), [(offset + i, offset + (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(list(range(n)), [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph(list(range(leaves + 1)), [(0, i) for i in range(1, leaves + 1)])


# ---------------------------------------------------------------------------
# path words

@dataclass(frozen=True)
class PathWord:
    """Vertices in traversal order; reduced (no backtracking v, w, v)."""
    vertices: tuple

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices) - 1

    def then(self, other: "PathWord") -> "PathWord":
        """This path followed by other."""
        if self.end != other.start:
            raise GraphError("paths are not composable")
        return PathWord(_reduce(self.vertices + other.vertices[1:]))

    def inverse(self) -> "PathWord":
        return PathWord(tuple(reversed(self.vertices)))


def _reduce(seq: Sequence) -> tuple:
    out: list = []
    for v in seq:
        if len(out) >= 2 and out[-2] == v:
            out.pop()
        else:
            out.append(v)
    return tuple(out)


def reduce_path(p: Sequence, graph: Graph | None = None) -> PathWord:
    p = tuple(p)
    if not p:
        raise GraphError("empty path")
    if graph is not None:
        for a, b in zip(p, p[1:]):
            if not graph.has_edge(a, b):
                raise GraphError(f"step {a!r} -> {b!r} is not an edge")
    return PathWord(_reduce(p))


def tree_path(parent: dict, v) -> tuple:
    """Root -> v along the tree."""
    out = [v]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return tuple(reversed(out))


def pi1_generators(G: Graph, v0, tree: dict | None = None) -> list[PathWord]:
    """One reduced cycle at v0 per non-tree edge."""
    if not G.is_connected():
        raise GraphError("graph is not connected")
    parent = tree if tree is not None else G.spanning_tree(v0)
    tree_edges = {frozenset((v, p)) for v, p in parent.items() if p is not None}
    gens = []
    for a, b in G.sorted_edges():
        if frozenset((a, b)) in tree_edges:
            continue
        cyc = tree_path(parent, a) + tuple(reversed(tree_path(parent, b)))
        gens.append(reduce_path(cyc, G))
    return gens


# ---------------------------------------------------------------------------
# coverings

@dataclass
class Covering:
    total: Graph
    base: Graph
    vertex_map: dict
    sigma: dict = field(default_factory=dict)  # (a, b) -> {x in fibre(a): y in fibre(b)}

    def fibre(self, v) -> list:
        return [x for x in self.total.vertices if self.vertex_map.get(x) == v]

    @classmethod
    def from_vertex_map(cls, total: Graph, base: Graph, vertex_map: dict) -> "Covering":
        """Derive the transports: x over a goes to its unique neighbour over b."""
        sig = {}
        for a, b in base.sorted_edges():
            for s, t in ((a, b), (b, a)):
                m = {}
                for x in total.vertices:
                    if vertex_map.get(x) != s:
                        continue
                    ys = [y for y in total.neighbors(x) if vertex_map.get(y) == t]
                    if len(ys) == 1:
                        m[x] = ys[0]
                sig[s, t] = m
        return cls(total, base, dict(vertex_map), sig)

    def transport(self, path: Sequence, x):
        for a, b in zip(path, path[1:]):
            x = self.sigma[a, b][x]
        return x


@dataclass
class CoveringReport:
    valid: bool
    violations: list
    fold: int | None

    def __bool__(self):
        return self.valid


def is_unramified_covering(c: Covering) -> CoveringReport:
    bad = []
    G, H, f = c.total, c.base, c.vertex_map
    for x in G.vertices:
        if x not in f:
            bad.append(f"vertex {x!r} of the total graph is not mapped")
        elif f[x] not in H.vertices:
            bad.append(f"vertex {x!r} maps outside the base")
    if bad:
        return CoveringReport(False, bad, None)
    image = set(f.values())
    for v in H.vertices:
        if v not in image:
            bad.append(f"base vertex {v!r} is not covered")
    for e in G.sorted_edges():
        a, b = e
        if not H.has_edge(f[a], f[b]):
            bad.append(f"edge {e} does not map to an edge")
    for a, b in H.sorted_edges():
        for s, t in ((a, b), (b, a)):
            m = c.sigma.get((s, t))
            fs, ft = c.fibre(s), c.fibre(t)
            if m is None:
                bad.append(f"no transport for base edge ({s!r},{t!r})")
                continue
            if sorted(m, key=G.index) != sorted(fs, key=G.index):
                bad.append(f"transport ({s!r},{t!r}) is not defined on the whole fibre")
                continue
            if len(set(m.values())) != len(m) or set(m.values()) != set(ft):
                bad.append(f"transport ({s!r},{t!r}) is not a bijection of fibres")
                continue
            for x, y in m.items():
                if not G.has_edge(x, y):
                    bad.append(f"transport ({s!r},{t!r}) sends {x!r} to non-neighbour {y!r}")
            back = c.sigma.get((t, s))
            if back is not None and any(back.get(y) != x for x, y in m.items()):
                bad.append(f"transports along ({s!r},{t!r}) are not mutually inverse")
    sizes = {len(c.fibre(v)) for v in H.vertices}
    fold = sizes.pop() if len(sizes) == 1 else None
    return CoveringReport(not bad, bad, fold)


def identity_covering(G: Graph) -> Covering:
    return Covering.from_vertex_map(G, G, {v: v for v in G.vertices})


def cycle_cover(k: int, n: int) -> Covering:
    """The connected k-fold cover C_{kn} -> C_n, i -> i mod n."""
    if n < 3:
        raise GraphError("cycle graphs need at least 3 vertices")
    if k < 1:
        raise GraphError("fold must be positive")
    total = cycle_graph(k * n)
    base = cycle_graph(n)
    return Covering.from_vertex_map(total, base, {i: i % n for i in range(k * n)})


# ---------------------------------------------------------------------------
# monodromy

@dataclass
class MonodromyData:
    base_vertex: Hashable
    fiber: list
    generators: list            # permutations of range(len(fiber))
    group: FiniteGroup
    elements: list              # permutation tuples; index 0 is the identity
    stabilizer: list            # per element: acts trivially on the fibre
    tree: dict

    @property
    def order(self) -> int:
        return self.group.order


def monodromy(c: Covering, v0, tree: dict | None = None) -> MonodromyData:
    rep = is_unramified_covering(c)
    if not rep.valid:
        raise GraphError("not an unramified covering: " + "; ".join(rep.violations))
    if not c.base.is_connected() or not c.total.is_connected():
        raise GraphError("monodromy needs connected graphs")
    parent = tree if tree is not None else c.base.spanning_tree(v0)
    fiber = sorted(c.fibre(v0), key=c.total.index)
    pos = {x: i for i, x in enumerate(fiber)}
    gens = []
    for w in pi1_generators(c.base, v0, parent):
        gens.append(tuple(pos[c.transport(w.vertices, x)] for x in fiber))
    group, elems = permutation_group(gens, len(fiber))
    ident = tuple(range(len(fiber)))
    return MonodromyData(v0, fiber, gens, group, elems, [p == ident for p in elems], parent)


# ---------------------------------------------------------------------------
# groupoid algebras

def canonical_groupoid_algebra(G: Graph) -> Algebra:
    """Basis p[w,v] (one arrow v -> w for every pair), p[w,u] p[u,v] = p[w,v]."""
    if not G.is_connected():
        raise GraphError("graph is not connected")
    m = len(G.vertices)
    vs = G.vertices
    labels = [f"p[{vs[w]},{vs[v]}]" for w in range(m) for v in range(m)]
    prods = {(w * m + u, u * m + v): {w * m + v: 1} for w in range(m) for u in range(m) for v in range(m)}
    return Algebra(labels, prods, {v * m + v: 1 for v in range(m)})


@dataclass
class GroupoidExtension:
    A: Algebra
    B: Algebra
    iota: AlgebraMap
    monodromy: MonodromyData

    def index(self, w: int, v: int, g: int) -> int:
        m, k = len(self.monodromy_vertices), self.monodromy.order
        return (w * m + v) * k + g

    @property
    def monodromy_vertices(self):
        return self._vertices

    def degree(self, i: int) -> int:
        """Monodromy component of basis vector i."""
        return i % self.monodromy.order


def monodromy_groupoid_algebra(c: Covering, v0=None, tree: dict | None = None) -> GroupoidExtension:
    """Basis (w, v, g): arrows v -> w decorated by a monodromy element g, transported to v0
    along the spanning tree; (w,u,g)(u,v,h) = (w,v,gh)."""
    base = c.base
    if v0 is None:
        v0 = base.vertices[0]
    mono = monodromy(c, v0, tree)
    A = canonical_groupoid_algebra(base)
    m = len(base.vertices)
    G = mono.group
    k = G.order
    vs = base.vertices
    labels = [f"({vs[w]},{vs[v]},{G.labels[g]})" for w in range(m) for v in range(m) for g in range(k)]
    prods = {}
    for w in range(m):
        for u in range(m):
            for v in range(m):
                for g in range(k):
                    for h in range(k):
                        prods[(w * m + u) * k + g, (u * m + v) * k + h] = {(w * m + v) * k + G.mul(g, h): 1}
    unit = {(v * m + v) * k + G.identity: 1 for v in range(m)}
    B = Algebra(labels, prods, unit)
    imgs = [{(w * m + v) * k + G.identity: ONE} for w in range(m) for v in range(m)]
    iota = AlgebraMap.from_images(A, B, imgs)
    ext = GroupoidExtension(A, B, iota, mono)
    ext._vertices = vs
    return ext


# ---------------------------------------------------------------------------
# graph fibrations

def build_graph_fibration(c: Covering, v0=None, tree: dict | None = None):
    """Galois fibration of the monodromy groupoid algebra over the canonical groupoid algebra.

    The fibre is the algebra of functions on the monodromy group, with law
    delta_g (x) b -> b (x) delta_{deg(b)^-1 g} and can(b (x) b') = b (1 (x) delta_e) b'.
    """
    from .algebra import diagonal_algebra
    from .fibration import (DistributiveLaw, Fibration, Grading, _bc, canonical_map_from_element,
                            twisted_product)
    from .bimodule import ExtensionTensor

    rep = is_unramified_covering(c)
    if not rep.valid:
        raise GraphError(f"not an unramified covering: {rep.violations[0]}")
    if not c.base.is_connected() or not c.total.is_connected():
        raise GraphError("graph fibrations need connected base and total graphs")
    ext = monodromy_groupoid_algebra(c, v0, tree)
    G = ext.monodromy.group
    k = G.order
    C = diagonal_algebra(k)
    C = Algebra([f"d[{G.labels[g]}]" for g in range(k)], dict(C.products()), C.unit, validate=False)
    B = ext.B

    def law_of(g, b):
        return {b * k + G.mul(G.inverse(ext.degree(b)), g): ONE}

    law = DistributiveLaw.from_function(B, C, law_of)
    T = twisted_product(law)
    sq = ExtensionTensor(ext.iota)
    eps = _bc(k, B.unit, {G.identity: ONE})
    can = canonical_map_from_element(sq, T, k, C.unit, eps)
    grading = Grading(G, [({i: ONE}, ext.degree(i)) for i in range(B.dim)])
    f = Fibration(ext.iota, C, law, can, grading=grading, name="graph")
    f.groupoid = ext
    return f


@dataclass
class LocalCoefficientsReport:
    passed: bool
    first_failure: str | None
    monodromy_order: int
    reduced_flat: bool
    hh_relative: tuple
    hh_group_algebra: tuple
    hc_total: tuple
    hc_group_algebra: tuple
    hc_claimed: tuple
    hc_matches_claim: bool
    hc_matches_group_algebra: bool

    def as_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def verify_local_coefficients(c: Covering, N: int = 4, budget: int | None = 20000) -> LocalCoefficientsReport:
    """Reduced flatness and HH_n(B|A,B) = HH_n(kM) for 1 <= n < N are asserted; HC_n(B) is
    computed and compared with the constant claim and with HC of the monodromy group algebra,
    without asserting either comparison."""
    from .algebra import group_algebra
    from .bimodule import is_projective_bimodule, mho
    from .cyclic import hc
    from .homology import hh, relative_hh

    ext = monodromy_groupoid_algebra(c)
    kM = group_algebra(ext.monodromy.group)
    flat = is_projective_bimodule(mho(ext.iota))
    rel = relative_hh(ext.iota, None, N, budget)
    hg = hh(kM, None, N, budget)
    failure = None
    if not flat:
        failure = "LocalCoefficients: extension is not reduced flat"
    else:
        for n in range(1, N):
            if rel[n] != hg[n]:
                failure = f"LocalCoefficients dimension mismatch at degree {n}: {rel[n]} != {hg[n]}"
                break
    # the canonical groupoid algebra is separable, so it serves as the chain base
    hcb = hc(ext.B, N, base_vectors=ext.iota.images(), budget=budget)
    hcg = hc(kM, N, budget=budget)
    claimed = tuple(1 for _ in hcb.dims)
    return LocalCoefficientsReport(failure is None, failure, ext.monodromy.order, flat, tuple(rel.dims),
                                   tuple(hg.dims), tuple(hcb.dims), tuple(hcg.dims), claimed,
                                   tuple(hcb.dims) == claimed, hcb.dims == hcg.dims)


def forest_groupoid_algebra(G: Graph) -> Algebra:
    """One arrow between any two vertices of the same component: the free groupoid of a forest."""
    comp: dict = {}
    for v in G.vertices:
        if v in comp:
            continue
        comp[v] = v
        todo = deque([v])
        while todo:
            x = todo.popleft()
            for y in G.neighbors(x):
                if y not in comp:
                    comp[y] = v
                    todo.append(y)
    vs = G.vertices
    idx = {(w, v): i for i, (w, v) in enumerate((w, v) for w in vs for v in vs if comp[w] == comp[v])}
    prods = {}
    for (w, u), i in idx.items():
        for (u2, v), j in idx.items():
            if u == u2:
                prods[i, j] = {idx[w, v]: 1}
    labels = [f"p[{w},{v}]" for (w, v) in idx]
    return Algebra(labels, prods, {idx[v, v]: 1 for v in vs})


@dataclass
class TreeCheckReport:
    passed: bool
    first_failure: str | None
    hh_base: tuple
    hh_total: tuple
    hc_base: tuple
    hc_total: tuple

    def as_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def is_tree(G: Graph) -> bool:
    return G.is_connected() and len(G.edges) == len(G.vertices) - 1


def tree_unramified_check(c: Covering, N: int = 4, budget: int | None = 20000) -> TreeCheckReport:
    """On a tree base the groupoid algebras are finite-dimensional: HH vanishes in degrees >= 2
    on both sides and HC agrees in the reliable range."""
    from .cyclic import hc
    from .homology import hh

    if not is_tree(c.base):
        raise GraphError("only tree bases are supported; cyclic bases give infinite-dimensional algebras")
    rep = is_unramified_covering(c)
    if not rep.valid:
        raise GraphError(f"not an unramified covering: {rep.violations[0]}")
    Ab = forest_groupoid_algebra(c.base)
    At = forest_groupoid_algebra(c.total)
    hb, ht = hh(Ab, None, N, budget), hh(At, None, N, budget)
    cb, ct = hc(Ab, N, budget=budget), hc(At, N, budget=budget)
    failure = None
    for name, t in (("base", hb), ("total", ht)):
        for n in range(2, N):
            if t[n] != 0 and failure is None:
                failure = f"UnramifiedCovering: HH_{n} of the {name} groupoid algebra is {t[n]}, expected 0"
    for n in range(len(cb.dims)):
        if cb[n] != ct[n] and failure is None:
            failure = f"UnramifiedCovering HC mismatch at degree {n}: {cb[n]} != {ct[n]}"
    return TreeCheckReport(failure is None, failure, tuple(hb.dims), tuple(ht.dims), tuple(cb.dims),
                           tuple(ct.dims))
