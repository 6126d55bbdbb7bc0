from fractions import Fraction

import pytest

from tepir.params import (InvalidParameters, block_length, canonical_subsets,
                          check_divisibilities, column_budget, derive, subset_plan)


def test_derive_example_3221():
    p = derive(3, 2, 2, 1)
    assert (p.j, p.file_len, p.round_download, p.q) == (5, 13, 15, 11)
    assert [hi - lo for lo, hi in p.rand_partition] == [3, 2]
    assert [hi - lo for lo, hi in p.msg_partition] == [6, 7]


def test_derive_example_3321():
    p = derive(3, 3, 2, 1)
    assert (p.j, p.file_len, p.round_download) == (19, 62, 57)
    assert [hi - lo for lo, hi in p.rand_partition] == [9, 6, 4]
    assert [hi - lo for lo, hi in p.msg_partition] == [18, 21, 23]


def test_derive_example_4232():
    p = derive(4, 2, 3, 2)
    assert (p.j, p.file_len, p.round_download) == (7, 18, 28)


def test_derive_field_choice():
    assert derive(4, 2, 2, 1).q == 17
    assert derive(3, 2, 2, 1, q_hint=101).q == 101


def test_derive_rejects_bad_parameters():
    with pytest.raises(InvalidParameters):
        derive(3, 2, 2, 3)   # E > T
    with pytest.raises(InvalidParameters):
        derive(3, 2, 4, 1)   # T > N
    with pytest.raises(InvalidParameters):
        derive(3, 0, 2, 1)   # K < 1
    with pytest.raises(InvalidParameters):
        derive(3, 2, 2, 0)   # E < 1
    with pytest.raises(InvalidParameters):
        derive(3, 2, 3, 3)   # T = N needs E < N
    with pytest.raises(InvalidParameters):
        derive(3, 2, 2, 1, q_hint=12)
    with pytest.raises(InvalidParameters):
        derive(3, 2, 2, 1, q_hint=7)


def test_partition_covers_and_pairs():
    for n, k, t, e in [(3, 2, 2, 1), (4, 3, 2, 2), (5, 4, 3, 1)]:
        p = derive(n, k, t, e)
        for i in range(k):
            wlo, whi = p.msg_slot(i)
            slo, shi = p.rand_slot(i)
            assert (whi - wlo) + (shi - slo) == p.nk
        assert p.msg_partition[-1][1] == p.file_len
        assert p.rand_partition[-1][1] == p.e * p.j


def test_slot_rotation_is_bijective():
    p = derive(3, 3, 2, 1)
    for r in range(3):
        assert sorted(p.slot_for(k, r) for k in range(3)) == [0, 1, 2]
    for k in range(3):
        assert sorted(p.slot_for(k, r) for r in range(3)) == [0, 1, 2]


def test_subset_plan_k2():
    p = derive(3, 2, 2, 1)
    plan = subset_plan(p, 0)
    assert plan.desired_blocks == (((0,), 0, 6), ((0, 1), 6, 3))
    assert plan.undesired == {1: (((1,), 6, 0, 6, 9),)}


def test_subset_plan_k3():
    p = derive(3, 3, 2, 1)
    plan = subset_plan(p, 0)
    lengths = [ln for _, _, ln in plan.desired_blocks]
    assert lengths == [12, 6, 6, 3]
    assert sum(lengths) == 27
    blocks = plan.undesired[1]
    assert [(b[0], b[1], b[4]) for b in blocks] == [((1,), 12, 18), ((1, 2), 6, 9)]
    # column ranges tile the first T*N^(K-1) = 18 columns
    assert [(b[2], b[3]) for b in blocks] == [(0, 12), (12, 18)]


def test_subset_plan_k1():
    p = derive(4, 1, 2, 1)
    plan = subset_plan(p, 0)
    assert plan.desired_blocks == (((0,), 0, 4),)
    assert plan.undesired == {}


def test_check_divisibilities_examples():
    rep = check_divisibilities(derive(3, 2, 2, 1))
    assert sorted(rep["blocks"].values()) == [3, 6, 6]
    assert rep["ok"]
    rep = check_divisibilities(derive(4, 2, 3, 1))
    assert sorted(rep["blocks"].values()) == [4, 12, 12]
    assert rep["ok"]
    rep = check_divisibilities(derive(10, 10, 7, 3))
    assert len(rep["blocks"]) == 2 ** 10 - 1
    assert rep["ok"]


def test_integer_identities_grid():
    for n in range(1, 7):
        for t in range(1, n + 1):
            for e in range(1, t + 1):
                if t == n and e >= n:
                    continue
                for k in range(1, 5):
                    p = derive(n, k, t, e)
                    assert p.file_len == k * n ** k - e * p.j
                    assert p.j * (n - t) == n ** k - t ** k
                    assert sum(hi - lo for lo, hi in p.msg_partition) == p.file_len
                    assert sum(hi - lo for lo, hi in p.rand_partition) == e * p.j


def test_binomial_block_identities():
    for n in range(2, 7):
        for t in range(1, n):
            for k in range(1, 5):
                desired_total = sum(block_length(n, k, t, len(sub))
                                    for sub in canonical_subsets(k) if 0 in sub)
                assert desired_total == n ** k
                if k >= 2:
                    alpha_total = sum(block_length(n, k, t, len(sub))
                                      for sub in canonical_subsets(k)
                                      if 1 in sub and 0 not in sub)
                    assert alpha_total == t * n ** (k - 1)


def test_rate_matches_closed_form():
    for n in range(2, 7):
        for t in range(1, n):
            for e in range(1, t + 1):
                for k in range(1, 5):
                    p = derive(n, k, t, e)
                    x = Fraction(t, n)
                    expect = (1 - x) / (1 - x ** k) - Fraction(e, k * n)
                    assert p.rate == expect


def test_column_budget_geometric_sum():
    assert column_budget(3, 2, 2) == 5
    assert column_budget(3, 3, 2) == 19
    assert column_budget(4, 2, 3) == 7
    assert column_budget(3, 2, 3) == 2 * 3  # T = N stays finite
