"""Tests for exact rank computations."""

import numpy as np
import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from zk_betti.domain import (
    FieldError,
    FieldKind,
    FieldSpec,
    IntegerMatrix,
    boundary_matrix,
    rank,
    rank_mod_p,
    rank_rational,
)

PRIMES = [2, 3, 5, 7, 11]


def random_sign_matrices(count: int = 40, seed: int = 3):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        rows, cols = (int(x) for x in rng.integers(1, 13, size=2))
        yield IntegerMatrix.from_rows(rng.integers(-1, 2, size=(rows, cols)).tolist())


def smith_diagonal(M: IntegerMatrix):
    snf = smith_normal_form(Matrix(M.to_rows()), domain=ZZ)
    return [int(snf[k, k]) for k in range(min(M.rows, M.cols))]


class TestFieldSpec:
    """Coefficient field parsing and validation."""

    def test_parse_rationals(self):
        assert FieldSpec.parse("q").kind == FieldKind.RATIONALS
        assert FieldSpec.parse("Q").name == "q"

    def test_parse_prime(self):
        field = FieldSpec.parse("f3")
        assert field.kind == FieldKind.PRIME_FIELD
        assert field.p == 3
        assert str(field) == "f3"

    def test_large_prime(self):
        assert FieldSpec.prime(2147483647).p == 2147483647

    def test_composite_rejected(self):
        with pytest.raises(FieldError):
            FieldSpec.parse("f4")

    def test_unknown_name(self):
        with pytest.raises(FieldError):
            FieldSpec.parse("reals")

    def test_rationals_take_no_modulus(self):
        with pytest.raises(FieldError):
            FieldSpec(FieldKind.RATIONALS, 5)


class TestRank:
    """Rank over F_p and Q."""

    def test_identity_mod_5(self):
        assert rank_mod_p(IntegerMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), 5) == 3

    def test_two_vanishes_mod_2(self):
        assert rank_mod_p(IntegerMatrix.from_rows([[2]]), 2) == 0

    def test_proportional_rows(self):
        assert rank_rational(IntegerMatrix.from_rows([[1, 2], [2, 4]])) == 1

    def test_empty_matrix(self):
        assert rank_rational(IntegerMatrix.zeros(0, 5)) == 0
        assert rank_mod_p(IntegerMatrix.zeros(5, 0), 3) == 0

    def test_non_prime_modulus(self):
        with pytest.raises(FieldError):
            rank_mod_p(IntegerMatrix.from_rows([[1]]), 4)

    def test_large_entries_stay_exact(self):
        big = 10 ** 30
        M = IntegerMatrix.from_rows([[big, big + 1], [big + 1, big + 2]])
        assert rank_rational(M) == 2

    def test_projective_plane_boundary(self, rp2):
        d2 = boundary_matrix(rp2, 2)
        assert (d2.rows, d2.cols) == (15, 10)
        assert rank_mod_p(d2, 2) == 9
        assert rank_rational(d2) == 10

    def test_dispatch(self, rp2, f2, qq):
        d2 = boundary_matrix(rp2, 2)
        assert rank(d2, f2) == 9
        assert rank(d2, qq) == 10

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            IntegerMatrix(2, 2, np.zeros((2, 3), dtype=object))

    # ========================================================================
    # Smith normal form oracle
    # ========================================================================

    def test_projective_plane_against_smith_form(self, rp2):
        d2 = boundary_matrix(rp2, 2)
        diagonal = smith_diagonal(d2)
        assert sum(1 for x in diagonal if x != 0) == rank_rational(d2)
        assert sum(1 for x in diagonal if x % 2) == rank_mod_p(d2, 2)

    def test_random_against_smith_form(self):
        for M in random_sign_matrices(15, seed=8):
            diagonal = smith_diagonal(M)
            assert sum(1 for x in diagonal if x != 0) == rank_rational(M)
            for p in (2, 3):
                assert sum(1 for x in diagonal if x % p) == rank_mod_p(M, p)

    # ========================================================================
    # Properties
    # ========================================================================

    def test_mod_p_never_exceeds_rational(self):
        for M in random_sign_matrices():
            r = rank_rational(M)
            for p in PRIMES:
                assert rank_mod_p(M, p) <= r

    def test_transpose_invariance(self):
        for M in random_sign_matrices():
            assert rank_rational(M.transpose()) == rank_rational(M)
            assert rank_mod_p(M.transpose(), 3) == rank_mod_p(M, 3)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(9)
        for M in random_sign_matrices(20):
            perm = rng.permutation(M.cols).tolist()
            shuffled = M.take_columns(perm)
            rows = rng.permutation(M.rows)
            shuffled = IntegerMatrix(M.rows, M.cols, shuffled.entries[rows, :])
            assert rank_rational(shuffled) == rank_rational(M)
            assert rank_mod_p(shuffled, 2) == rank_mod_p(M, 2)

    def test_some_small_prime_sees_full_rank(self):
        for M in random_sign_matrices(20, seed=4):
            r = rank_rational(M)
            assert any(rank_mod_p(M, p) == r for p in PRIMES)
