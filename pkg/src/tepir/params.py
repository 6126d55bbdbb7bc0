"""Derived integer parameters for the retrieval scheme.

From (N, K, T, E) this module computes everything the engine needs: the
per-file-per-database column budget J, the file length L, the split of the
symbol index ranges into K slots, the per-subset block lengths, and the
field modulus.  All quantities are exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .field import is_prime, next_prime


class InvalidParameters(ValueError):
    pass


def column_budget(n: int, k: int, t: int) -> int:
    """J = sum_{i=0}^{K-1} N^(K-1-i) T^i, equal to (N^K - T^K)/(N - T) for T < N."""
    return sum(n ** (k - 1 - i) * t ** i for i in range(k))


def canonical_subsets(k: int) -> list[tuple[int, ...]]:
    """All nonempty subsets of {0..k-1}, ordered by size then lexicographically."""
    out: list[tuple[int, ...]] = []
    for size in range(1, k + 1):
        out.extend(combinations(range(k), size))
    return out


def block_length(n: int, k: int, t: int, subset_size: int) -> int:
    """Row budget of the query block for a subset of the given size."""
    return n * (n - t) ** (subset_size - 1) * t ** (k - subset_size)


@dataclass(frozen=True)
class SchemeParams:
    """All derived integers for one (N, K, T, E, q) configuration.

    ``msg_partition`` and ``rand_partition`` are K half-open index ranges
    covering [0, L) and [0, E*J) respectively; slot i pairs the i-th message
    range with the i-th randomness range, and their sizes sum to N**K.
    """

    n: int
    k: int
    t: int
    e: int
    q: int
    j: int
    file_len: int
    round_download: int
    msg_partition: tuple[tuple[int, int], ...]
    rand_partition: tuple[tuple[int, int], ...]

    @property
    def nk(self) -> int:
        return self.n ** self.k

    @property
    def rand_per_round(self) -> int:
        return self.e * self.j

    @property
    def rate(self) -> Fraction:
        return Fraction(self.file_len, self.k * self.n * self.j)

    @property
    def secrecy_used(self) -> Fraction:
        return Fraction(self.k * self.e * self.j, self.file_len)

    def msg_slot(self, i: int) -> tuple[int, int]:
        return self.msg_partition[i]

    def rand_slot(self, i: int) -> tuple[int, int]:
        return self.rand_partition[i]

    def slot_for(self, k: int, r: int) -> int:
        """Rotation: the partition slot used by file k in round r (all 0-based)."""
        return (k + r) % self.k

    def as_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "t": self.t, "e": self.e, "q": self.q}


def derive(n: int, k: int, t: int, e: int, q_hint: Optional[int] = None) -> SchemeParams:
    """Populate SchemeParams for (N, K, T, E), choosing the field if not given.

    The field is the smallest prime with at least N**K + 1 elements unless a
    prime q_hint of at least that size is supplied.
    """
    if k < 1:
        raise InvalidParameters(f"need at least one file, got K={k}")
    if n < 1:
        raise InvalidParameters(f"need at least one database, got N={n}")
    if not 1 <= e <= t <= n:
        raise InvalidParameters(f"need 1 <= E <= T <= N, got N={n} T={t} E={e}")
    if t == n and e >= n:
        raise InvalidParameters("with T = N an eavesdropper of size E >= N sees everything")

    nk = n ** k
    if q_hint is not None:
        if not is_prime(q_hint):
            raise InvalidParameters(f"q_hint {q_hint} is not prime")
        if q_hint < nk + 1:
            raise InvalidParameters(f"q_hint {q_hint} is below {nk + 1}")
        q = q_hint
    else:
        q = next_prime(nk + 1)

    j = column_budget(n, k, t)
    rand_sizes = [e * t ** i * n ** (k - 1 - i) for i in range(k)]
    msg_sizes = [nk - s for s in rand_sizes]
    file_len = k * nk - e * j
    assert sum(rand_sizes) == e * j
    assert sum(msg_sizes) == file_len

    def ranges(sizes):
        out = []
        pos = 0
        for s in sizes:
            out.append((pos, pos + s))
            pos += s
        return tuple(out)

    return SchemeParams(n=n, k=k, t=t, e=e, q=q, j=j, file_len=file_len,
                        round_download=n * j,
                        msg_partition=ranges(msg_sizes),
                        rand_partition=ranges(rand_sizes))


@dataclass(frozen=True)
class SubsetPlan:
    """Block layout for one desired index: how each file's encoded vector is
    carved into subset-labeled blocks, and where each block lands.

    desired_blocks: (subset, offset, length) carving the desired file's
        length-N**K encoding in canonical subset order.
    undesired: for each other file, (subset, alpha, col_start, col_stop,
        codeword_len) where the columns select from the first T*N**(K-1)
        columns of that file's mixing matrix and the MDS expansion stretches
        alpha inputs to codeword_len symbols.
    """

    desired_index: int
    desired_blocks: tuple[tuple[tuple[int, ...], int, int], ...]
    undesired: dict[int, tuple[tuple[tuple[int, ...], int, int, int, int], ...]]

    def desired_offset(self, subset: tuple[int, ...]) -> tuple[int, int]:
        for sub, off, length in self.desired_blocks:
            if sub == subset:
                return off, length
        raise KeyError(subset)


def subset_plan(params: SchemeParams, desired: int) -> SubsetPlan:
    """Enumerate block families for a 0-based desired file index."""
    n, k, t = params.n, params.k, params.t
    if not 0 <= desired < k:
        raise InvalidParameters(f"desired index {desired} out of range for K={k}")
    if t == n:
        raise InvalidParameters("the general block layout requires T < N")

    desired_blocks = []
    pos = 0
    for sub in canonical_subsets(k):
        if desired in sub:
            length = block_length(n, k, t, len(sub))
            desired_blocks.append((sub, pos, length))
            pos += length
    assert pos == params.nk

    undesired: dict = {}
    for other in range(k):
        if other == desired:
            continue
        blocks = []
        col = 0
        for sub in canonical_subsets(k):
            if other in sub and desired not in sub:
                alpha = block_length(n, k, t, len(sub))
                codeword = n * alpha // t
                blocks.append((sub, alpha, col, col + alpha, codeword))
                col += alpha
        assert col == t * n ** (k - 1)
        undesired[other] = tuple(blocks)

    return SubsetPlan(desired_index=desired,
                      desired_blocks=tuple(desired_blocks),
                      undesired=undesired)


def check_divisibilities(params: SchemeParams) -> dict:
    """Confirm each subset block splits evenly over the N databases and that
    J satisfies its geometric-sum identity."""
    n, k, t = params.n, params.k, params.t
    blocks = {sub: block_length(n, k, t, len(sub)) for sub in canonical_subsets(k)}
    divisible = {sub: length % n == 0 for sub, length in blocks.items()}
    j_identity = params.j * (n - t) == n ** k - t ** k
    return {
        "blocks": blocks,
        "all_divisible": all(divisible.values()),
        "divisible": divisible,
        "j_identity": j_identity,
        "ok": all(divisible.values()) and j_identity,
    }
