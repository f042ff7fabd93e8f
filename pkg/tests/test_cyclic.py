import pytest

import corpus
import oracles
from hochfib.algebra import (AlgebraMap, commutator_subspace, cyclic_group, diagonal_algebra, ground_field,
                             group_algebra, matrix_algebra, truncated_polynomial, upper_triangular)
from hochfib.cyclic import (cyclic_jz_verify, hc, mixed_of_algebra, periodicity_check, relative_hc,
                            sbi_check)
from hochfib.homology import ComplexError

KX = truncated_polynomial(2)
M2 = matrix_algebra(2)
KZ2 = group_algebra(cyclic_group(2))

ALGEBRAS = {"k": ground_field(), "k[x]/x^2": KX, "k[x]/x^3": truncated_polynomial(3), "M2": M2,
            "T2": upper_triangular(2), "kZ2": KZ2}
ORACLE_DEGREE = {"M2": 3}


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_hc_against_connes_quotient_oracle(name):
    A = ALGEBRAS[name]
    n = ORACLE_DEGREE.get(name, 4)
    # hc(A, N) reports degrees 0..N-2
    assert list(hc(A, n + 1).dims) == oracles.cyclic_dims(A.structure, n)


def test_hc_of_ground_field():
    assert hc(ground_field(), 6).dims == (1, 0, 1, 0, 1)
    assert mixed_of_algebra(ground_field(), 3).dims == [1, 0, 0, 0]


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_hc0_is_commutator_quotient(name):
    A = ALGEBRAS[name]
    assert hc(A, 3)[0] == A.dim - commutator_subspace(A).dim


def test_morita_invariance():
    assert hc(M2, 5).dims == hc(ground_field(), 5).dims


def test_additivity_over_products():
    k = hc(ground_field(), 6).dims
    assert hc(diagonal_algebra(2), 6).dims == tuple(2 * x for x in k)


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_mixed_identities(name):
    mc = mixed_of_algebra(ALGEBRAS[name], 4)
    assert mc.identity_failures() == []


def test_commutative_degree_one_boundary_vanishes():
    mc = mixed_of_algebra(KZ2, 3)
    assert mc.b[1].is_zero()


def test_broken_mixed_complex_rejected():
    from hochfib.cyclic import MixedComplex
    from hochfib.exactla import SparseMatrix
    one = SparseMatrix(1, 1, [{0: 1}])
    zero = SparseMatrix.zeros(1, 1)
    # B o B = 1 on C_0
    with pytest.raises(ComplexError, match="B\\^2"):
        MixedComplex([1, 1, 1], {1: zero, 2: zero}, {0: one, 1: one})
    assert MixedComplex([1, 1, 1], {1: zero, 2: zero}, {0: one, 1: zero}).identity_failures() == []


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_sbi_exact(name):
    rep = sbi_check(mixed_of_algebra(ALGEBRAS[name], 5))
    assert rep.passed, rep.first_failure


def test_relative_hc_examples():
    assert all(h == 0 for h in relative_hc(AlgebraMap.identity(KX), 5))
    assert relative_hc(AlgebraMap.unit_map(KZ2), 5)[0] == 1
    assert all(h == 0 for h in relative_hc(corpus.k_in_m2(), 5))


def test_periodicity_examples():
    same = periodicity_check(AlgebraMap.identity(KX), 6)
    assert same.passed
    assert periodicity_check(corpus.k_in_m2(), 6).passed


def test_periodicity_detects_violation():
    from hochfib.homology import HomologyTable
    rep = periodicity_check(None, 6, table=HomologyTable((1, 1, 2, 0, 1, 0)))
    assert not rep.passed and rep.checked == [1, 2]


def test_cyclic_jz_examples():
    rep = cyclic_jz_verify(AlgebraMap.unit_map(KZ2), 5)
    assert rep.passed, rep.first_failure
    # over k the maps from HC(B) to HC(B|A) are onto in positive degrees
    assert rep.exact_at_b[0]
    rep = cyclic_jz_verify(corpus.smash_z2().extension, 5)
    assert rep.passed, rep.first_failure
