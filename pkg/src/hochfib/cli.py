"""Command-line front end.

Exit codes: 0 every verdict passed, 1 a verifier failed, 2 invalid input, 3 size budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any

from . import __version__
from .algebra import (Algebra, AlgebraError, AlgebraMap, FiniteGroup, GroupError, check_map,
                      from_structure_constants)
from .bimodule import Bimodule, ModuleError, flat_relative_agreement
from .cyclic import cyclic_jz_verify, hc, mixed_of_algebra, periodicity_check, relative_hc, sbi_check
from .exactla import Matrix
from .fibration import (DistributiveLaw, Fibration, FibrationError, Grading, classify, extension_flags,
                        verify_main_cjz, verify_main_hjz)
from .graphcov import (Covering, Graph, GraphError, build_graph_fibration, is_unramified_covering,
                       monodromy, verify_local_coefficients)
from .homology import (DEFAULT_BUDGET, DEFAULT_DEGREE, ComplexError, HomologyTable, amitsur, hh,
                       hochschild_cohomology, jz_verify, relative_hh)
from .tensor_strings import BudgetExceeded

TASKS = ("homology", "analyze-extension", "fibration-verify", "graph-cover", "cyclic", "jz-verify")
EXIT_PASS, EXIT_FAIL, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class InputError(ValueError):
    """Schema violation; path locates the offending entry."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# ---------------------------------------------------------------------------
# rationals

def parse_rational(x: Any, path: str) -> Fraction:
    if isinstance(x, bool):
        raise InputError(path, "booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(path, f"not a rational: {x!r}") from None
    raise InputError(path, f"rationals must be integers or 'p/q' strings, got {type(x).__name__}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _list(x, path):
    if not isinstance(x, list):
        raise InputError(path, "expected a list")
    return x


def _obj(x, path):
    if not isinstance(x, dict):
        raise InputError(path, "expected an object")
    return x


def _req(doc: dict, key: str, path: str):
    if key not in doc:
        raise InputError(path, f"missing key {key!r}")
    return doc[key]


def parse_vector(x, n: int, path: str) -> dict:
    vals = _list(x, path)
    if len(vals) != n:
        raise InputError(path, f"expected {n} entries, got {len(vals)}")
    return {i: q for i, v in enumerate(vals) if (q := parse_rational(v, f"{path}[{i}]"))}


def parse_matrix(x, rows: int, cols: int, path: str) -> Matrix:
    rs = _list(x, path)
    if len(rs) != rows:
        raise InputError(path, f"expected {rows} rows, got {len(rs)}")
    out = []
    for i, r in enumerate(rs):
        r = _list(r, f"{path}[{i}]")
        if len(r) != cols:
            raise InputError(f"{path}[{i}]", f"expected {cols} columns, got {len(r)}")
        out.append([parse_rational(v, f"{path}[{i}][{j}]") for j, v in enumerate(r)])
    return Matrix.from_rows(out, cols)


def vector_doc(v: dict, n: int) -> list:
    return [format_rational(v.get(i, 0)) for i in range(n)]


def matrix_doc(m: Matrix) -> list:
    return [[format_rational(x) for x in m.row(i)] for i in range(m.rows)]


# ---------------------------------------------------------------------------
# objects

def parse_algebra(doc, path: str = "algebra") -> Algebra:
    doc = _obj(doc, path)
    n = _req(doc, "dim", path)
    if not isinstance(n, int) or n < 1:
        raise InputError(f"{path}.dim", "dimension must be a positive integer")
    labels = doc.get("labels") or [f"e{i}" for i in range(n)]
    if len(labels) != n:
        raise InputError(f"{path}.labels", f"expected {n} labels")
    st = _list(_req(doc, "structure", path), f"{path}.structure")
    if len(st) != n:
        raise InputError(f"{path}.structure", f"expected {n} rows")
    table = []
    for i, row in enumerate(st):
        row = _list(row, f"{path}.structure[{i}]")
        if len(row) != n:
            raise InputError(f"{path}.structure[{i}]", f"expected {n} entries")
        table.append([[parse_rational(x, f"{path}.structure[{i}][{j}][{k}]")
                       for k, x in enumerate(_list(v, f"{path}.structure[{i}][{j}]"))]
                      for j, v in enumerate(row)])
        for j, v in enumerate(table[-1]):
            if len(v) != n:
                raise InputError(f"{path}.structure[{i}][{j}]", f"expected {n} coordinates")
    unit = parse_vector(_req(doc, "unit", path), n, f"{path}.unit")
    try:
        return from_structure_constants(labels, table, [unit.get(i, 0) for i in range(n)])
    except AlgebraError as e:
        raise InputError(path, str(e)) from None


def algebra_doc(A: Algebra) -> dict:
    n = A.dim
    st = A.structure
    return {"dim": n, "labels": list(A.labels),
            "structure": [[[format_rational(x) for x in st[i][j]] for j in range(n)] for i in range(n)],
            "unit": vector_doc(A.unit, n)}


def parse_map(doc, path: str = "extension") -> AlgebraMap:
    doc = _obj(doc, path)
    A = parse_algebra(_req(doc, "source", path), f"{path}.source")
    B = parse_algebra(_req(doc, "target", path), f"{path}.target")
    m = parse_matrix(_req(doc, "matrix", path), B.dim, A.dim, f"{path}.matrix")
    phi = AlgebraMap(A, B, m)
    bad = check_map(phi)
    if bad:
        raise InputError(path, bad[0])
    return phi


def map_doc(phi: AlgebraMap) -> dict:
    return {"source": algebra_doc(phi.source), "target": algebra_doc(phi.target),
            "matrix": matrix_doc(phi.matrix)}


def parse_bimodule(doc, path: str = "bimodule", over: Algebra | None = None) -> Bimodule:
    doc = _obj(doc, path)
    A = parse_algebra(_req(doc, "over", path), f"{path}.over")
    if over is not None and A != over:
        raise InputError(f"{path}.over", "coefficient bimodule is over a different algebra")
    n = _req(doc, "dim", path)
    if not isinstance(n, int) or n < 0:
        raise InputError(f"{path}.dim", "dimension must be a non-negative integer")
    left = _list(_req(doc, "left", path), f"{path}.left")
    right = _list(_req(doc, "right", path), f"{path}.right")
    if len(left) != A.dim or len(right) != A.dim:
        raise InputError(path, "need one left and one right matrix per basis element")
    lm = [parse_matrix(m, n, n, f"{path}.left[{k}]") for k, m in enumerate(left)]
    rm = [parse_matrix(m, n, n, f"{path}.right[{k}]") for k, m in enumerate(right)]
    try:
        return Bimodule(over if over is not None else A, n, lm, rm)
    except ModuleError as e:
        raise InputError(path, str(e)) from None


def bimodule_doc(X: Bimodule) -> dict:
    return {"over": algebra_doc(X.over), "dim": X.dim,
            "left": [matrix_doc(m) for m in X.left_action], "right": [matrix_doc(m) for m in X.right_action]}


def parse_graph(doc, path: str = "graph") -> Graph:
    doc = _obj(doc, path)
    vs = _list(_req(doc, "vertices", path), f"{path}.vertices")
    es = _list(_req(doc, "edges", path), f"{path}.edges")
    for i, e in enumerate(es):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"{path}.edges[{i}]", "edges are pairs of vertices")
    try:
        return Graph(vs, [tuple(e) for e in es])
    except GraphError as e:
        raise InputError(path, str(e)) from None


def graph_doc(G: Graph) -> dict:
    return {"vertices": list(G.vertices), "edges": [list(e) for e in G.sorted_edges()]}


def _resolver(G: Graph, path: str):
    table = {str(v): v for v in G.vertices}

    def find(key):
        if key in G.vertices:
            return key
        if str(key) in table:
            return table[str(key)]
        raise InputError(path, f"unknown vertex {key!r}")
    return find


def parse_covering(doc, path: str = "covering") -> Covering:
    doc = _obj(doc, path)
    total = parse_graph(_req(doc, "total", path), f"{path}.total")
    base = parse_graph(_req(doc, "base", path), f"{path}.base")
    ft, fb = _resolver(total, f"{path}.vertex_map"), _resolver(base, f"{path}.vertex_map")
    vm = {ft(k): fb(v) for k, v in _obj(_req(doc, "vertex_map", path), f"{path}.vertex_map").items()}
    if "sigma" not in doc:
        return Covering.from_vertex_map(total, base, vm)
    sig = {}
    for key, m in _obj(doc["sigma"], f"{path}.sigma").items():
        p = f"{path}.sigma[{key!r}]"
        if "->" not in key:
            raise InputError(p, "transport keys have the form 'a->b'")
        a, b = key.split("->", 1)
        fbase = _resolver(base, p)
        ftot = _resolver(total, p)
        sig[fbase(a), fbase(b)] = {ftot(x): ftot(y) for x, y in _obj(m, p).items()}
    return Covering(total, base, vm, sig)


def covering_doc(c: Covering) -> dict:
    sig = {f"{a}->{b}": {str(x): y for x, y in sorted(m.items(), key=lambda t: c.total.index(t[0]))}
           for (a, b), m in sorted(c.sigma.items(), key=lambda t: (c.base.index(t[0][0]), c.base.index(t[0][1])))}
    return {"total": graph_doc(c.total), "base": graph_doc(c.base),
            "vertex_map": {str(x): c.vertex_map[x] for x in c.total.vertices}, "sigma": sig}


def parse_group(doc, path: str) -> FiniteGroup:
    doc = _obj(doc, path)
    table = _list(_req(doc, "table", path), f"{path}.table")
    try:
        return FiniteGroup(tuple(tuple(r) for r in table), doc.get("identity", 0), tuple(doc.get("labels", ())))
    except (GroupError, TypeError, ValueError) as e:
        raise InputError(path, str(e)) from None


def group_doc(G: FiniteGroup) -> dict:
    return {"table": [list(r) for r in G.table], "identity": G.identity, "labels": list(G.labels)}


def parse_fibration(doc, path: str = "fibration") -> Fibration:
    doc = _obj(doc, path)
    iota = parse_map(_req(doc, "extension", path), f"{path}.extension")
    C = parse_algebra(_req(doc, "fibre", path), f"{path}.fibre")
    B = iota.target
    n = B.dim * C.dim
    law = DistributiveLaw(B, C, parse_matrix(_req(doc, "law_matrix", path), n, n, f"{path}.law_matrix"))
    can_rows = _list(_req(doc, "can_matrix", path), f"{path}.can_matrix")
    cols = len(can_rows[0]) if can_rows and isinstance(can_rows[0], list) else 0
    can = parse_matrix(can_rows, n, cols, f"{path}.can_matrix")
    gens = [parse_vector(v, iota.source.dim, f"{path}.invariance_generators[{i}]")
            for i, v in enumerate(_list(doc.get("invariance_generators", []), f"{path}.invariance_generators"))]
    grading = None
    if "grading" in doc:
        g = _obj(doc["grading"], f"{path}.grading")
        G = parse_group(_req(g, "group", f"{path}.grading"), f"{path}.grading.group")
        hom = []
        for i, item in enumerate(_list(_req(g, "homogeneous", f"{path}.grading"), f"{path}.grading.homogeneous")):
            p = f"{path}.grading.homogeneous[{i}]"
            if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], int):
                raise InputError(p, "entries are [vector, degree]")
            hom.append((parse_vector(item[0], B.dim, p), item[1]))
        grading = Grading(G, hom)
    try:
        return Fibration(iota, C, law, can, gens or None, grading, doc.get("name", ""))
    except (FibrationError, ModuleError) as e:
        raise InputError(path, str(e)) from None


def fibration_doc(f: Fibration) -> dict:
    out = {"extension": map_doc(f.extension), "fibre": algebra_doc(f.fibre),
           "law_matrix": matrix_doc(f.law.matrix), "can_matrix": matrix_doc(f.can.matrix),
           "invariance_generators": [vector_doc(v, f.A.dim) for v in f.invariance_generators],
           "name": f.name}
    if f.grading is not None:
        out["grading"] = {"group": group_doc(f.grading.group),
                          "homogeneous": [[vector_doc(v, f.B.dim), d] for v, d in f.grading.homogeneous]}
    return out


# ---------------------------------------------------------------------------
# jobs and reports

@dataclass
class JobSpec:
    task: str
    document: dict
    max_degree: int = DEFAULT_DEGREE
    fmt: str = "json"
    size_budget: int = DEFAULT_BUDGET
    coefficients: str | None = None
    source: str = "-"

    def __post_init__(self):
        if self.task not in TASKS:
            raise InputError("task", f"unknown task {self.task!r}")
        if self.max_degree < 2:
            raise InputError("max_degree", "must be at least 2")
        if self.size_budget <= 0:
            raise InputError("size_budget", "must be positive")
        if self.fmt not in ("json", "markdown"):
            raise InputError("format", "json or markdown")


@dataclass
class Report:
    job: dict
    tables: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timing: dict | None = None

    def table(self, t: HomologyTable, name: str | None = None):
        self.tables.append({"name": name or t.name, "dims": list(t.dims), "reliable_range": list(t.reliable)})

    def verdict(self, name: str, passed: bool, first_failure: str | None = None, details: dict | None = None):
        self.verdicts.append({"name": name, "passed": bool(passed), "first_failure": first_failure,
                              "details": details or {}})

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def as_dict(self) -> dict:
        out = {"job": self.job, "tables": self.tables, "flags": self.flags, "verdicts": self.verdicts,
               "data": self.data, "passed": self.passed}
        if self.timing is not None:
            out["timing"] = self.timing
        return out


def _coefficients(job: JobSpec, B: Algebra) -> Bimodule | None:
    if job.coefficients is None:
        return None
    ref = job.coefficients
    bims = job.document.get("bimodules", {})
    if isinstance(bims, dict) and ref in bims:
        return parse_bimodule(bims[ref], f"bimodules.{ref}", over=B)
    try:
        with open(ref) as fh:
            doc = json.load(fh)
    except OSError:
        raise InputError("coefficients", f"no bimodule named {ref!r} in the document and no such file") from None
    except json.JSONDecodeError as e:
        raise InputError("coefficients", f"invalid JSON: {e}") from None
    return parse_bimodule(doc.get("bimodule", doc), "coefficients", over=B)


def _job_homology(job: JobSpec, rep: Report):
    B = parse_algebra(_req(job.document, "algebra", "document"))
    X = _coefficients(job, B)
    N, bud = job.max_degree, job.size_budget
    rep.table(hh(B, X, N, bud), "HH")
    rep.table(hochschild_cohomology(B, None, X, N), "HH^")
    if X is None:
        t = hc(B, N + 1, budget=bud)
        rep.table(t, "HC")
        s = sbi_check(mixed_of_algebra(B, N, budget=bud))
        rep.verdict("SBI exactness", s.passed, s.first_failure)
    rep.data["algebra_dim"] = B.dim


def _job_extension(job: JobSpec, rep: Report):
    iota = parse_map(_req(job.document, "extension", "document"))
    N, bud = job.max_degree, job.size_budget
    flags = extension_flags(iota)
    rep.flags.update(flags)
    rep.table(relative_hh(iota, None, N, bud), "HH(B|A,B)")
    rep.table(relative_hc(iota, N + 1, bud), "HC(B|A)")
    am = amitsur(iota, N, bud)
    rep.data["amitsur"] = {"dims": am.dims, "cohomology": am.cohomology, "exact_through": am.exact_through}
    rep.data["amitsur_exact"] = am.exact
    agree, lhs, rhs = flat_relative_agreement(iota)
    rep.verdict("FlatRelative consistency", agree or not flags["ext_faithfully_flat"],
                None if agree or not flags["ext_faithfully_flat"]
                else f"FlatRelative: Res Sigma projective = {lhs} but B/A projective = {rhs}",
                {"sigma_projective_over_Ae": lhs, "quotient_projective_over_Ae": rhs})
    if flags["ext_faithfully_flat"] and flags["ext_smooth"]:
        rep.verdict("AlmostSmoothBegetsReducedFlat", flags["ext_reduced_flat"],
                    None if flags["ext_reduced_flat"] else "faithfully flat smooth extension is not reduced flat")


def _job_fibration(job: JobSpec, rep: Report):
    f = parse_fibration(_req(job.document, "fibration", "document"))
    N, bud = job.max_degree, job.size_budget
    flags = classify(f)
    rep.flags.update(flags)
    if flags["galois"]:
        r = verify_main_hjz(f, None, N, bud)
        rep.verdict(r.name, r.passed, r.first_failure, r.details)
        if flags["ext_reduced_flat"]:
            r = verify_main_cjz(f, N, bud)
            rep.verdict(r.name, r.passed, r.first_failure, r.details)
    else:
        rep.data["note"] = "not Galois: theorem verifiers skipped"


def _job_graph(job: JobSpec, rep: Report):
    c = parse_covering(_req(job.document, "covering", "document"))
    N, bud = job.max_degree, job.size_budget
    cr = is_unramified_covering(c)
    rep.verdict("covering", cr.valid, cr.violations[0] if cr.violations else None, {"fold": cr.fold})
    if not cr.valid:
        return
    mono = monodromy(c, c.base.vertices[0])
    rep.data["monodromy_order"] = mono.order
    rep.data["base_vertex"] = mono.base_vertex
    rep.data["spanning_tree"] = {str(k): v for k, v in sorted(mono.tree.items(), key=lambda t: str(t[0]))}
    f = build_graph_fibration(c)
    rep.data["dim_A"], rep.data["dim_B"] = f.A.dim, f.B.dim
    flags = classify(f)
    rep.flags.update(flags)
    rep.verdict("GraphMainResult Galois", flags["galois"] and flags["smooth_fibration"])
    lc = verify_local_coefficients(c, N, bud)
    rep.table(HomologyTable(lc.hh_relative, "HH(B|A,B)", (0, N - 1)))
    rep.table(HomologyTable(lc.hc_total, "HC(B)", (0, N - 2)))
    rep.table(HomologyTable(lc.hc_group_algebra, "HC(kM)", (0, N - 2)))
    rep.data["local_coefficients"] = lc.as_dict()
    rep.verdict("LocalCoefficients", lc.passed, lc.first_failure)
    r = verify_main_hjz(f, None, N, bud)
    rep.verdict(r.name, r.passed, r.first_failure, r.details)


def _job_cyclic(job: JobSpec, rep: Report):
    N, bud = job.max_degree, job.size_budget
    doc = job.document
    if "extension" in doc:
        iota = parse_map(doc["extension"])
        t = relative_hc(iota, N + 1, bud)
        rep.table(t, "HC(B|A)")
        p = periodicity_check(iota, N + 1, bud, table=t)
        rep.verdict("HC periodicity", p.passed, p.first_failure, {"checked": p.checked})
        j = cyclic_jz_verify(iota, N + 1, bud)
        rep.verdict("cyclic Jacobi-Zariski", j.passed, j.first_failure, j.as_dict())
    else:
        B = parse_algebra(_req(doc, "algebra", "document"))
        rep.table(hc(B, N + 1, budget=bud), "HC")
        s = sbi_check(mixed_of_algebra(B, N, budget=bud))
        rep.verdict("SBI exactness", s.passed, s.first_failure)


def _job_jz(job: JobSpec, rep: Report):
    iota = parse_map(_req(job.document, "extension", "document"))
    X = _coefficients(job, iota.target)
    N, bud = job.max_degree, job.size_budget
    r = jz_verify(iota, X, N, bud)
    rep.verdict("Jacobi-Zariski", r.passed, r.first_failure, r.as_dict())
    if X is None:
        c = cyclic_jz_verify(iota, N + 1, bud)
        rep.verdict("cyclic Jacobi-Zariski", c.passed, c.first_failure, c.as_dict())


_RUNNERS = {"homology": _job_homology, "analyze-extension": _job_extension, "fibration-verify": _job_fibration,
            "graph-cover": _job_graph, "cyclic": _job_cyclic, "jz-verify": _job_jz}


def run(job: JobSpec, timing: bool = False) -> Report:
    echo = {"task": job.task, "max_degree": job.max_degree, "size_budget": job.size_budget,
            "coefficients": job.coefficients, "source": job.source}
    rep = Report(echo)
    t0 = time.perf_counter()
    _RUNNERS[job.task](job, rep)
    if timing:
        rep.timing = {"seconds": round(time.perf_counter() - t0, 3)}
    return rep


def _jsonable(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def emit(report: Report | dict, fmt: str = "json") -> str:
    d = report.as_dict() if isinstance(report, Report) else report
    d = _jsonable(d)
    if fmt == "json":
        return json.dumps(d, sort_keys=True, indent=2) + "\n"
    lines = []
    job = d.get("job", {})
    if job:
        lines.append(f"# {job.get('task', 'report')}")
        lines.append("")
    for t in d.get("tables", []):
        dims = t["dims"]
        lo, hi = t["reliable_range"]
        lines.append(f"## {t['name']} (reliable degrees {lo}..{hi})")
        lines.append("")
        lines.append("| n | " + " | ".join(str(i) for i in range(len(dims))) + " |")
        lines.append("|---|" + "---|" * len(dims))
        lines.append("| dim | " + " | ".join(str(x) for x in dims) + " |")
        lines.append("")
    if d.get("flags"):
        lines.append("## flags")
        lines.append("")
        for k in sorted(d["flags"]):
            lines.append(f"- {k}: {str(d['flags'][k]).lower()}")
        lines.append("")
    if d.get("verdicts"):
        lines.append("## verdicts")
        lines.append("")
        for v in d["verdicts"]:
            mark = "PASS" if v["passed"] else "FAIL"
            extra = f" ({v['first_failure']})" if v.get("first_failure") else ""
            lines.append(f"- {mark} {v['name']}{extra}")
        lines.append("")
    return "\n".join(lines) + ("\n" if lines else "")


def load_document(ref: str) -> dict:
    if ref.startswith("fixture:"):
        name = ref.split(":", 1)[1]
        try:
            text = resources.files("hochfib").joinpath("fixtures", f"{name}.json").read_text()
        except (FileNotFoundError, OSError):
            raise InputError("input", f"no bundled fixture {name!r}") from None
    elif ref == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(ref) as fh:
                text = fh.read()
        except OSError as e:
            raise InputError("input", str(e)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError("input", f"invalid JSON: {e}") from None
    return _obj(doc, "document")


def parse_input(doc: dict) -> dict:
    """Every recognised object in the document, validated."""
    out = {}
    parsers = {"algebra": parse_algebra, "extension": parse_map, "covering": parse_covering,
               "fibration": parse_fibration, "graph": parse_graph}
    for key, p in parsers.items():
        if key in doc:
            out[key] = p(doc[key], key)
    if "bimodule" in doc:
        out["bimodule"] = parse_bimodule(doc["bimodule"], "bimodule")
    for name, b in _obj(doc.get("bimodules", {}), "bimodules").items():
        out[f"bimodules.{name}"] = parse_bimodule(b, f"bimodules.{name}")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hochfib", description="Hochschild and cyclic homology of algebra extensions")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="task", required=True)
    for t in TASKS:
        s = sub.add_parser(t)
        s.add_argument("input", nargs="?", default="-", help="JSON document, '-' for stdin, or fixture:NAME")
        s.add_argument("--max-degree", type=int, default=DEFAULT_DEGREE)
        s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        s.add_argument("--format", choices=("json", "markdown"), default="json")
        s.add_argument("--coefficients", default=None, help="name in the document's bimodules, or a file")
        s.add_argument("--output", default=None)
        s.add_argument("--timing", action="store_true", help="add wall-clock timing (breaks byte identity)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = load_document(args.input)
        job = JobSpec(args.task, doc, args.max_degree, args.format, args.budget, args.coefficients, args.input)
        report = run(job, timing=args.timing)
    except BudgetExceeded as e:
        print(f"size budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, AlgebraError, ModuleError, GraphError, FibrationError, GroupError, ComplexError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID
    text = emit(report, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
