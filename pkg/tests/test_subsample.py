"""Recursive subset construction: split rule, counts, sizes, overlap laws."""

import numpy as np
import pytest

from w2s.errors import InputError
from w2s.subsample import plan_for, split_quarters, sub_sample


def _as_tuples(sets):
    return [tuple(int(i) for i in s) for s in sets]


def _check_branch_containment(a, b):
    """Walk the recursion; at each split the part dropped from one branch
    must appear whole in every set the other two branches produce."""
    if len(a) <= 3:
        return
    q = len(a) // 4
    cut = len(a) - 3 * q
    head = a[:cut]
    quarters = [a[cut + i * q:cut + (i + 1) * q] for i in range(3)]
    branches = [sub_sample(head, quarters[1] + quarters[2] + b),
                sub_sample(head, quarters[0] + quarters[2] + b),
                sub_sample(head, quarters[0] + quarters[1] + b)]
    for i in range(3):
        dropped = set(quarters[i])
        for j in range(3):
            if j == i:
                continue
            for s in branches[j]:
                assert dropped <= set(s.tolist())
    # the top-level call is exactly the concatenation of its branches
    whole = _as_tuples(sub_sample(a, b))
    assert whole == _as_tuples(branches[0] + branches[1] + branches[2])
    _check_branch_containment(head, quarters[1] + quarters[2] + b)
    _check_branch_containment(head, quarters[0] + quarters[2] + b)
    _check_branch_containment(head, quarters[0] + quarters[1] + b)


def test_base_case_returns_single_sorted_set():
    assert _as_tuples(sub_sample([3, 1, 2], [7])) == [(1, 2, 3, 7)]
    assert _as_tuples(sub_sample([5], [])) == [(5,)]


def test_four_element_unroll():
    assert _as_tuples(sub_sample([1, 2, 3, 4], [])) == [(1, 3, 4), (1, 2, 4),
                                                        (1, 2, 3)]


def test_head_keeps_the_remainder():
    # |A| = 6: head is the first 3 elements, quarters one element each
    head, q1, q2, q3 = split_quarters(list(range(6)))
    assert head.tolist() == [0, 1, 2]
    assert (q1.tolist(), q2.tolist(), q3.tolist()) == ([3], [4], [5])
    head, q1, q2, q3 = split_quarters(list(range(8)))
    assert head.tolist() == [0, 1]
    assert (q1.tolist(), q2.tolist(), q3.tolist()) == ([2, 3], [4, 5], [6, 7])


def test_overlap_rejected():
    with pytest.raises(InputError):
        sub_sample([1, 2, 3, 4], [4, 9])
    with pytest.raises(InputError):
        sub_sample([1, 1, 2, 3], [])
    with pytest.raises(InputError):
        sub_sample([], [1])


def test_count_and_size_laws():
    for n in range(6):  # m' = 1 .. 1024
        m = 4 ** n
        plan = plan_for(m)
        assert plan.k == 3 ** n
        want = 1 + 2 * (m - 1) // 3
        assert all(len(s) == want for s in plan.index_sets)
        assert plan.set_size == want


def test_sixteen_element_oracle():
    sets = sub_sample(list(range(16)), [])
    assert len(sets) == 9
    assert all(len(s) == 11 for s in sets)
    assert len(set(_as_tuples(sets))) == 9  # no duplicate subsets at this size


def test_indices_are_distinct_within_sets():
    for s in plan_for(64).index_sets:
        assert len(set(s.tolist())) == len(s)


def test_branch_containment_law():
    for m in (4, 16, 64, 256):
        _check_branch_containment(list(range(m)), [])


def test_plan_rounds_down_to_power_of_four():
    p100 = plan_for(100)
    p64 = plan_for(64)
    assert p100.m == 100
    assert p100.m_used == 64
    assert _as_tuples(p100.index_sets) == _as_tuples(p64.index_sets)
    assert max(max(s) for s in p100.index_sets) < 64


def test_plan_rejects_zero():
    with pytest.raises(InputError):
        plan_for(0)


def test_plan_json_shape():
    d = plan_for(16).to_json()
    assert d["k"] == 9
    assert d["set_size"] == 11
    assert len(d["index_sets"]) == 9


def test_index_sets_read_only():
    with pytest.raises(ValueError):
        plan_for(16).index_sets[0][0] = 99
