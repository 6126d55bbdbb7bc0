"""Dense matrices over GF(q): Vandermonde builders, MDS generators, exact
Gaussian elimination, uniform invertible sampling, and the statistical
harness for the invariance of uniform full-rank matrices under column
selection and invertible mixing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .field import DivisionByZero, FieldError, PrimeField


class MatrixError(FieldError):
    pass


class DuplicatePoint(MatrixError):
    pass


class ZeroPoint(MatrixError):
    pass


class FieldTooSmall(MatrixError):
    pass


class SingularMatrix(MatrixError):
    pass


def vandermonde(field: PrimeField, points: Sequence[int], num_rows: int) -> np.ndarray:
    """Matrix with entry (i, j) = points[j]**i, for distinct nonzero points.

    Any ``num_rows`` columns of the result are linearly independent, which is
    what makes the row-sliced pieces usable as MDS generators.
    """
    pts = field.array(points)
    if pts.ndim != 1:
        raise MatrixError("points must be one-dimensional")
    if np.any(pts == 0):
        raise ZeroPoint("evaluation points must be nonzero")
    if len(set(pts.tolist())) != pts.shape[0]:
        raise DuplicatePoint("evaluation points must be distinct")
    if num_rows > field.q - 1:
        raise FieldTooSmall(f"cannot take {num_rows} rows over GF({field.q})")
    rows = [np.ones_like(pts)]
    for _ in range(1, num_rows):
        rows.append(rows[-1] * pts % field.q)
    return np.stack(rows) if rows else field.zeros((0, pts.shape[0]))


def mds_generator(dim: int, length: int, field: PrimeField) -> np.ndarray:
    """dim x length generator whose every dim-column submatrix is invertible.

    Vandermonde on the canonical points 1..length; needs length <= q - 1.
    """
    if dim > length:
        raise MatrixError(f"dimension {dim} exceeds code length {length}")
    if length > field.q - 1:
        raise FieldTooSmall(
            f"({length},{dim}) code needs {length} distinct nonzero points, GF({field.q}) has {field.q - 1}")
    return vandermonde(field, range(1, length + 1), dim)


def split_rows(m: np.ndarray, top_count: int) -> tuple[np.ndarray, np.ndarray]:
    """Split into (first top_count rows, remaining rows)."""
    if not 0 <= top_count <= m.shape[0]:
        raise MatrixError(f"top_count {top_count} out of range for {m.shape[0]} rows")
    return m[:top_count], m[top_count:]


def _eliminate_small(q: int, a: np.ndarray, rhs: Optional[np.ndarray]):
    """Plain-int Gauss-Jordan for small matrices, where numpy call overhead
    dominates the arithmetic."""
    rows, cols = a.shape
    aa = [[int(v) for v in row] for row in a]
    bb = None if rhs is None else [[int(v) for v in row] for row in rhs]
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivot = -1
        for i in range(rank, rows):
            if aa[i][col]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != rank:
            aa[rank], aa[pivot] = aa[pivot], aa[rank]
            if bb is not None:
                bb[rank], bb[pivot] = bb[pivot], bb[rank]
        scale = pow(aa[rank][col], q - 2, q)
        if scale != 1:
            aa[rank] = [v * scale % q for v in aa[rank]]
            if bb is not None:
                bb[rank] = [v * scale % q for v in bb[rank]]
        ar = aa[rank]
        for i in range(rows):
            if i == rank:
                continue
            f = aa[i][col]
            if f:
                ai = aa[i]
                aa[i] = [(ai[j] - f * ar[j]) % q for j in range(cols)]
                if bb is not None:
                    br, bi = bb[rank], bb[i]
                    bb[i] = [(bi[j] - f * br[j]) % q for j in range(len(bi))]
        rank += 1
    out_a = np.array(aa, dtype=np.int64)
    out_b = None if bb is None else np.array(bb, dtype=np.int64)
    return rank, out_a, out_b


_SMALL_ELIM_CELLS = 200


def _eliminate(field: PrimeField, a: np.ndarray, rhs: Optional[np.ndarray] = None):
    """Gauss-Jordan elimination mod q. Returns (rank, reduced a, reduced rhs)."""
    q = field.q
    a = a % q
    if rhs is not None:
        rhs = rhs % q
    rows, cols = a.shape
    if rows * cols <= _SMALL_ELIM_CELLS:
        return _eliminate_small(q, a, rhs)
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(a[rank:, col])[0]
        if pivots.size == 0:
            continue
        p = rank + pivots[0]
        if p != rank:
            a[[rank, p]] = a[[p, rank]]
            if rhs is not None:
                rhs[[rank, p]] = rhs[[p, rank]]
        scale = field.inv(int(a[rank, col]))
        a[rank] = a[rank] * scale % q
        if rhs is not None:
            rhs[rank] = rhs[rank] * scale % q
        factors = a[:, col].copy()
        factors[rank] = 0
        mask = factors != 0
        if np.any(mask):
            a[mask] = (a[mask] - np.outer(factors[mask], a[rank])) % q
            if rhs is not None:
                rhs[mask] = (rhs[mask] - np.outer(factors[mask], rhs[rank])) % q
        rank += 1
    return rank, a, rhs


def rank(field: PrimeField, m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    r, _, _ = _eliminate(field, m.copy())
    return r


def invert(field: PrimeField, m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise MatrixError("only square matrices can be inverted")
    ident = np.eye(n, dtype=np.int64)
    r, _, inv = _eliminate(field, m.copy(), ident)
    if r != n:
        raise SingularMatrix(f"matrix of rank {r} < {n}")
    return inv


def solve(field: PrimeField, m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve m @ x = rhs for square full-rank m."""
    n = m.shape[0]
    if m.shape != (n, n):
        raise MatrixError("solve requires a square system")
    b = rhs.reshape(n, -1).copy()
    r, _, x = _eliminate(field, m.copy(), b)
    if r != n:
        raise SingularMatrix(f"matrix of rank {r} < {n}")
    return x.reshape(rhs.shape)


def is_invertible(field: PrimeField, m: np.ndarray) -> bool:
    n = m.shape[0]
    return m.shape == (n, n) and rank(field, m) == n


def sample_invertible(dim: int, field: PrimeField, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random invertible dim x dim matrix by rejection sampling.

    Acceptance probability is prod_{i>=1} (1 - q**-i) > 0.288 for every q,
    so the expected number of draws is below 3.5.
    """
    if dim < 1:
        raise MatrixError("dimension must be >= 1")
    while True:
        cand = field.random_array(rng, (dim, dim))
        if rank(field, cand) == dim:
            return cand


def master_matrix(field: PrimeField, size: int) -> np.ndarray:
    """size x size Vandermonde on the canonical points 1..size; invertible."""
    if size > field.q - 1:
        raise FieldTooSmall(f"need {size} nonzero points, GF({field.q}) has {field.q - 1}")
    return vandermonde(field, range(1, size + 1), size)


# -- distribution harness -----------------------------------------------------

_BUCKET_SEED = 0x7E91B
_MAX_EXACT_STATES = 200_000
_MAX_DIRECT_STATES = 4096
_NUM_BUCKETS = 1024


def _enumerate_invertible(field: PrimeField, dim: int):
    """All invertible dim x dim matrices over GF(q); feasible only for tiny q, dim."""
    q = field.q
    out = []
    for flat in product(range(q), repeat=dim * dim):
        m = np.array(flat, dtype=np.int64).reshape(dim, dim)
        if rank(field, m) == dim:
            out.append(m)
    return out


def _pack(field: PrimeField, m: np.ndarray) -> int:
    key = 0
    for v in m.reshape(-1):
        key = key * field.q + int(v)
    return key


def _tv(counts_a: dict, counts_b: dict, n_a: int, n_b: int) -> float:
    keys = set(counts_a) | set(counts_b)
    return 0.5 * sum(abs(counts_a.get(k, 0) / n_a - counts_b.get(k, 0) / n_b) for k in keys)


@dataclass
class Lemma1Report:
    """Outcome of one distribution-invariance experiment."""

    alpha: int
    beta: int
    q: int
    trials: int
    tv_estimate: float
    tv_exact: Optional[float]
    noise_bound: float
    num_states: int

    @property
    def passed(self) -> bool:
        if self.tv_exact is not None:
            return self.tv_exact == 0.0
        return self.tv_estimate <= 3.0 * self.noise_bound


def lemma1_harness(alpha: int, beta: int, field: PrimeField, trials: int,
                   rng: np.random.Generator,
                   index_set: Optional[Sequence[int]] = None,
                   mixer: Optional[np.ndarray] = None) -> Lemma1Report:
    """Compare S[:, I] @ G' against S[:, :beta] for uniform invertible S.

    I is a fixed beta-subset of columns and G' a fixed invertible beta x beta
    mixer (random unless supplied); S is resampled per trial.  The two views
    should be identically distributed.  When the full matrix space is small
    enough the exact distributions are enumerated as well, in which case the
    exact total variation distance is reported alongside the sampled one.
    """
    if beta > alpha:
        raise MatrixError("beta must not exceed alpha")
    q = field.q
    if index_set is None:
        index_set = np.sort(rng.choice(alpha, size=beta, replace=False))
    else:
        index_set = np.asarray(index_set, dtype=np.int64)
    if mixer is None:
        mixer = sample_invertible(beta, field, rng) if beta else field.zeros((0, 0))

    view_states = q ** (alpha * beta)
    bucketed = view_states > _MAX_DIRECT_STATES
    if bucketed:
        wrng = np.random.Generator(np.random.PCG64(_BUCKET_SEED))
        weights = wrng.integers(0, 1 << 30, size=alpha * beta)

        def key_of(m):
            return int(np.dot(weights, m.reshape(-1)) % _NUM_BUCKETS)
    else:
        def key_of(m):
            return _pack(field, m)

    counts_lhs: dict = {}
    counts_rhs: dict = {}
    for _ in range(trials):
        s = sample_invertible(alpha, field, rng)
        lhs = field.matmul(s[:, index_set], mixer)
        counts_lhs[key_of(lhs)] = counts_lhs.get(key_of(lhs), 0) + 1
        s2 = sample_invertible(alpha, field, rng)
        rhs = s2[:, :beta]
        counts_rhs[key_of(rhs)] = counts_rhs.get(key_of(rhs), 0) + 1
    tv_estimate = _tv(counts_lhs, counts_rhs, trials, trials)

    tv_exact = None
    if q ** (alpha * alpha) <= _MAX_EXACT_STATES:
        exact_lhs: dict = {}
        exact_rhs: dict = {}
        for s in _enumerate_invertible(field, alpha):
            lhs = field.matmul(s[:, index_set], mixer)
            exact_lhs[_pack(field, lhs)] = exact_lhs.get(_pack(field, lhs), 0) + 1
            rhs = s[:, :beta]
            exact_rhs[_pack(field, rhs)] = exact_rhs.get(_pack(field, rhs), 0) + 1
        total = sum(exact_lhs.values())
        tv_exact = _tv(exact_lhs, exact_rhs, total, total)

    support = len(set(counts_lhs) | set(counts_rhs))
    noise_bound = float(np.sqrt(max(support, 1) / trials))
    return Lemma1Report(alpha=alpha, beta=beta, q=q, trials=trials,
                        tv_estimate=tv_estimate, tv_exact=tv_exact,
                        noise_bound=noise_bound, num_states=support)
