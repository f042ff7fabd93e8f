"""One test per acceptance criterion; each records a PASS/FAIL line for the terminal summary.

Every check is exact. A failing sub-check fails its criterion and is listed with the observed value.
"""

import time

import corpus
import oracles
from hochfib import cli
from hochfib.algebra import is_semisimple
from hochfib.bimodule import (LeftModule, commutator_quotient, flat_relative_agreement, induce, is_projective,
                              regular_bimodule, restrict)
from hochfib.cyclic import cyclic_jz_verify, mixed_of_algebra, periodicity_check
from hochfib.exactla import Matrix
from hochfib.fibration import classify, extension_flags, verify_main_hjz
from hochfib.graphcov import cycle_cover, monodromy, verify_local_coefficients
from hochfib.homology import amitsur, hh, hochschild_chain, jz_verify, relative_bar, tor_env

SPLIT_TEST_LIMIT = 16
GALOIS_FLAGS = ("galois", "unramified", "smooth_fibration", "ext_faithfully_flat", "ext_reduced_flat")


def check(name, observed, expected):
    return (name, observed == expected, observed)


def finish(acceptance, number, title, checks):
    ok = acceptance(number, title, checks)
    assert ok, [c for c in checks if not c[1]]


def test_criterion_1_c6_pipeline(acceptance):
    t0 = time.perf_counter()
    cover = cycle_cover(2, 3)
    f = corpus.c6()
    flags = classify(f)
    coinv = commutator_quotient(restrict(regular_bimodule(f.B), f.extension)).dim
    elapsed = time.perf_counter() - t0
    checks = [
        check("monodromy order", monodromy(cover, 0).order, 2),
        check("dim A", f.A.dim, 9),
        check("dim B", f.B.dim, 18),
        # B is Morita equivalent to kM with |M| = 2, so this is 2; kept at the claimed value on purpose
        check("dim B/[B,A]", coinv, 1),
        *[check(name, flags[name], True) for name in GALOIS_FLAGS],
        ("runtime < 60 s", elapsed < 60, round(elapsed, 2)),
    ]
    finish(acceptance, 1, "C6 -> C3 pipeline", checks)


def test_criterion_2_main_hjz(acceptance):
    t0 = time.perf_counter()
    checks = []
    for name, f in (("C6/C3", corpus.c6()), ("smash Z2", corpus.smash_z2())):
        rep = verify_main_hjz(f, regular_bimodule(f.B), 4)
        d = rep.details
        checks.append((f"{name} verifier", rep.passed, rep.first_failure))
        checks.append(check(f"{name} HH(B|A,X) = HH(C, X/[X,A])", d["HH_rel"][:4], d["HH_fibre"][:4]))
        expected = [d["coinvariants_dim"] * d["fibre_dim"] ** n for n in range(4)]
        checks.append(check(f"{name} relative chain dims", d["chain_dims"][:4], expected))
    elapsed = time.perf_counter() - t0
    checks.append(("runtime < 120 s", elapsed < 120, round(elapsed, 2)))
    finish(acceptance, 2, "MainHJZ on C6/C3 and the Z2 swap smash product", checks)


def test_criterion_3_jacobi_zariski(acceptance):
    checks = []
    for name, f in (("C6/C3", corpus.c6()), ("smash Z2", corpus.smash_z2())):
        for kind, rep in (("HH", jz_verify(f.extension, None, 4)), ("HC", cyclic_jz_verify(f.extension, 5))):
            checks.append((f"{name} {kind} verifier", rep.passed, rep.first_failure))
            for n in (2, 3):
                checks.append(check(f"{name} {kind} im = ker at {n}", rep.exact_at_b[n], True))
                lhs, rhs = rep.bookkeeping[n]
                checks.append(check(f"{name} {kind} bookkeeping at {n}", lhs, rhs))
    finish(acceptance, 3, "Jacobi-Zariski exactness in HH and HC", checks)


def test_criterion_4_local_coefficients(acceptance, capsys):
    checks = []
    for k, name in ((2, "C6/C3"), (3, "C9/C3")):
        rep = verify_local_coefficients(cycle_cover(k, 3), 4)
        checks.append(check(f"{name} HH_n(B|A,B) for n=1..3", list(rep.hh_relative[1:4]), [0, 0, 0]))
        checks.append((f"{name} verifier", rep.passed, rep.first_failure))
        # part (iii) is reported only
        with capsys.disabled():
            print(f"\n  {name}: HC(B) = {list(rep.hc_total)}, claimed {list(rep.hc_claimed)}, "
                  f"HC(kM) = {list(rep.hc_group_algebra)}, matches claim: {rep.hc_matches_claim}")
    finish(acceptance, 4, "local coefficients: relative HH vanishes on C6/C3 and C9/C3", checks)


def test_criterion_5_almost_smooth(acceptance):
    checks = []
    for name, iota in (("k<M2", corpus.k_in_m2()), ("smash Z2", corpus.smash_z2().extension)):
        flags = extension_flags(iota)
        if flags["ext_faithfully_flat"] and flags["ext_smooth"]:
            checks.append(check(f"{name} reduced flat", flags["ext_reduced_flat"], True))
        else:
            checks.append((f"{name} premise holds", False, flags))
        ha, hb = hh(iota.source, None, 4), hh(iota.target, None, 4)
        checks.append(check(f"{name} HH_n(A) = HH_n(B) for n=2,3", ha.dims[2:4], hb.dims[2:4]))
        per = periodicity_check(iota, 6)
        checks.append((f"{name} HC periodicity at n=1", per.passed and 1 in per.checked, per.first_failure))
    finish(acceptance, 5, "smooth faithfully flat extensions are reduced flat", checks)


def test_criterion_6_flat_relative(acceptance):
    checks = []
    candidates = dict(corpus.EXTENSIONS)
    candidates["C9/C3"] = lambda: corpus.c9().extension
    for name, make in candidates.items():
        iota = make()
        if not extension_flags(iota)["ext_faithfully_flat"]:
            continue
        # the split test over A^e = M3 (x) M3^op does not fit in memory; semisimple A^e decides it exactly
        force = iota.source.dim ** 2 <= SPLIT_TEST_LIMIT
        agree, lhs, rhs = flat_relative_agreement(iota, force_split=force)
        route = "split test" if force else "semisimple base"
        checks.append((f"{name} ({route}): Res Sigma projective {lhs}, B/A projective {rhs}", agree, (lhs, rhs)))
    checks.append(("corpus has faithfully flat extensions", len(checks) >= 5, len(checks)))
    finish(acceptance, 6, "flat relative consistency on faithfully flat extensions", checks)


def test_criterion_7_amitsur(acceptance):
    checks = []
    for name, iota in (("k<M2", corpus.k_in_m2()), ("C6/C3", corpus.c6().extension),
                       ("C9/C3", corpus.c9().extension)):
        rep = amitsur(iota, 4)
        checks.append(check(f"{name} exact through 3", rep.exact and rep.exact_through >= 3, True))
    bad = cli.parse_input(cli.load_document("fixture:t2_in_m2"))["extension"]
    checks.append(check("bundled T2<M2 fixture inexact", amitsur(bad, 4).exact, False))
    finish(acceptance, 7, "Amitsur complex exactness", checks)


def test_criterion_8_oracle_suites(acceptance):
    checks = []
    algebras = {"k[x]/x^2": corpus.KX, "M2": corpus.M2, "T2": corpus.T2, "kZ2": corpus.KZ2}
    for name, A in algebras.items():
        checks.append(check(f"{name} Hochschild d.d", hochschild_chain(A, None, None, 4).square_zero_failures(), []))
        checks.append(check(f"{name} mixed identities", mixed_of_algebra(A, 4).identity_failures(), []))
    for name, make in corpus.EXTENSIONS.items():
        iota = make()
        checks.append(check(f"{name} relative bar d.d",
                            relative_bar(iota.target, iota, 3).square_zero_failures(), []))
    checks.append(check("HH(k[x]/x^2) vs bar oracle", list(hh(corpus.KX, None, 4).dims),
                        oracles.hochschild_dims(corpus.KX.structure, 4)))
    checks.append(check("HH(k[x]/x^2)", hh(corpus.KX, None, 4).dims, (2, 1, 1, 1)))

    for name, (R, mats, top, _) in corpus.MODULE_CORPUS.items():
        M = LeftModule(R, len(mats[0]), [Matrix.from_rows(m) for m in mats])
        tor1 = oracles.tor_dims(R.structure, top, mats, len(top[0]), M.dim, 2)[1]
        checks.append(check(f"is_projective({name}) vs Tor_1", is_projective(M, force_split=True), tor1 == 0))
    checks.append(check("module corpus size", len(corpus.MODULE_CORPUS), 10))

    for name, make in corpus.EXTENSIONS.items():
        iota = make()
        X = regular_bimodule(iota.source)
        lhs = tor_env(restrict(regular_bimodule(iota.target), iota), X, 4)
        base = iota.images() if is_semisimple(iota.source) else corpus.separable_part(iota)
        rhs = tor_env(regular_bimodule(iota.target), induce(X, iota), 4, base_vectors=base)
        checks.append(check(f"Tor restriction = Tor induction, {name}", lhs.dims, rhs.dims))
    finish(acceptance, 8, "oracle suites", checks)
