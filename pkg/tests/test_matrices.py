from itertools import combinations

import numpy as np
import pytest

from tepir.field import PrimeField
from tepir.matrices import (DuplicatePoint, FieldTooSmall, MatrixError, SingularMatrix,
                            ZeroPoint, invert, lemma1_harness, master_matrix,
                            mds_generator, rank, sample_invertible, solve, split_rows,
                            vandermonde)

F11 = PrimeField(11)


def test_vandermonde_direct_evaluation():
    m = vandermonde(F11, [1, 2, 3], 3)
    assert m.tolist() == [[1, 1, 1], [1, 2, 3], [1, 4, 9]]


def test_vandermonde_two_points_invertible():
    m = vandermonde(PrimeField(5), [1, 2], 2)
    assert rank(PrimeField(5), m) == 2


def test_vandermonde_rejects_bad_points():
    with pytest.raises(DuplicatePoint):
        vandermonde(F11, [1, 1, 2], 3)
    with pytest.raises(ZeroPoint):
        vandermonde(F11, [0, 1], 2)


def test_master_matrix_full_rank():
    m = master_matrix(F11, 9)
    assert m.shape == (9, 9)
    assert rank(F11, m) == 9


def test_master_matrix_tiny():
    assert master_matrix(PrimeField(5), 2).tolist() == [[1, 1], [1, 2]]


def test_master_matrix_field_too_small():
    with pytest.raises(FieldTooSmall):
        master_matrix(PrimeField(7), 9)


def test_split_rows():
    m = master_matrix(F11, 9)
    top, bottom = split_rows(m, 7)
    assert top.shape == (7, 9) and bottom.shape == (2, 9)
    assert np.array_equal(np.vstack([top, bottom]), m)
    top, bottom = split_rows(m, 9)
    assert bottom.shape == (0, 9)
    top, bottom = split_rows(m, 0)
    assert top.shape == (0, 9)
    with pytest.raises(MatrixError):
        split_rows(m, 10)


def test_mds_generator_every_column_subset_invertible():
    gen = mds_generator(6, 9, F11)
    for cols in combinations(range(9), 6):
        assert rank(F11, gen[:, cols]) == 6


def test_mds_generator_square_and_errors():
    sq = mds_generator(2, 2, PrimeField(5))
    assert rank(PrimeField(5), sq) == 2
    with pytest.raises(MatrixError):
        mds_generator(4, 3, F11)
    with pytest.raises(FieldTooSmall):
        mds_generator(3, 11, F11)


def test_rank_examples():
    assert rank(F11, mds_generator(6, 9, F11)) == 6
    assert rank(F11, np.zeros((4, 5), dtype=np.int64)) == 0
    assert rank(F11, np.eye(5, dtype=np.int64)) == 5


def test_invert_identity_and_roundtrip():
    ident = np.eye(6, dtype=np.int64)
    assert np.array_equal(invert(F11, ident), ident)
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = sample_invertible(5, F11, rng)
        mi = invert(F11, m)
        assert np.array_equal(F11.matmul(m, mi), ident[:5, :5])


def test_invert_singular_raises():
    m = np.ones((3, 3), dtype=np.int64)
    with pytest.raises(SingularMatrix):
        invert(F11, m)


def test_solve():
    rng = np.random.default_rng(4)
    m = sample_invertible(6, F11, rng)
    x = F11.random_array(rng, (6, 2))
    rhs = F11.matmul(m, x)
    assert np.array_equal(solve(F11, m, rhs), x)
    vec = F11.random_array(rng, 6)
    rhs1 = F11.matmul(m, vec[:, None])[:, 0]
    assert np.array_equal(solve(F11, m, rhs1), vec)


def test_sample_invertible_dim1_gf2():
    f2 = PrimeField(2)
    rng = np.random.default_rng(5)
    for _ in range(20):
        assert sample_invertible(1, f2, rng).tolist() == [[1]]


def test_sample_invertible_uniform_over_gl_2_2():
    # Enumerate GL(2, 2) by brute force and check frequencies within 3 sigma.
    f = PrimeField(2)
    gl = []
    for flat in np.ndindex(2, 2, 2, 2):
        m = np.array(flat, dtype=np.int64).reshape(2, 2)
        if rank(f, m) == 2:
            gl.append(tuple(flat))
    assert len(gl) == 6
    rng = np.random.default_rng(6)
    draws = 6000
    counts = {g: 0 for g in gl}
    for _ in range(draws):
        counts[tuple(sample_invertible(2, f, rng).reshape(-1).tolist())] += 1
    expect = draws / len(gl)
    sigma = (draws * (1 / len(gl)) * (1 - 1 / len(gl))) ** 0.5
    for g, c in counts.items():
        assert abs(c - expect) <= 3 * sigma, (g, c)


def test_sample_invertible_large():
    rng = np.random.default_rng(7)
    m = sample_invertible(9, F11, rng)
    assert rank(F11, m) == 9


def test_lemma1_identity_selection_exact_zero():
    f = PrimeField(3)
    rng = np.random.default_rng(8)
    report = lemma1_harness(3, 3, f, trials=500, rng=rng,
                            index_set=range(3), mixer=np.eye(3, dtype=np.int64))
    assert report.tv_exact == 0.0
    assert report.passed


def test_lemma1_gf2_estimate():
    f = PrimeField(2)
    rng = np.random.default_rng(11)
    report = lemma1_harness(2, 1, f, trials=10_000, rng=rng)
    assert report.tv_exact == 0.0
    assert report.tv_estimate < 0.02


def test_lemma1_small_exact_and_estimate():
    f = PrimeField(3)
    rng = np.random.default_rng(9)
    report = lemma1_harness(3, 2, f, trials=4000, rng=rng)
    assert report.tv_exact == 0.0
    assert report.tv_estimate <= 3 * report.noise_bound


def test_lemma1_sampled_bucketed():
    f = PrimeField(5)
    rng = np.random.default_rng(10)
    report = lemma1_harness(4, 2, f, trials=4000, rng=rng)
    assert report.tv_exact is None
    assert report.tv_estimate <= 3 * report.noise_bound
