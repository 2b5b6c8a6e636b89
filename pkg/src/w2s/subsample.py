"""Recursive sub-sample construction.

sub_sample(A, B) splits A into a head block and three quarters, then recurses
three ways, keeping the head and two of the quarters in scope each time. For
|A| = 4^j the recursion yields 3^j index sets of size 1 + 2(|A| - 1)/3, and
every element of A is left out of at least one set.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError


def split_quarters(a):
    """Split into (head, q1, q2, q3) with |qi| = floor(|a|/4)."""
    a = np.asarray(a)
    q = len(a) // 4
    head = len(a) - 3 * q
    return a[:head], a[head:head + q], a[head + q:head + 2 * q], a[head + 2 * q:]


def _recurse(a, b):
    if len(a) <= 3:
        return [np.sort(np.concatenate((a, b)))]
    a0, a1, a2, a3 = split_quarters(a)
    out = _recurse(a0, np.concatenate((a2, a3, b)))
    out += _recurse(a0, np.concatenate((a1, a3, b)))
    out += _recurse(a0, np.concatenate((a1, a2, b)))
    return out


def sub_sample(a, b):
    """All recursive sub-samples of disjoint index sequences a and b.

    Returns a list of sorted int64 arrays, in recursion order.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if len(a) == 0:
        raise InputError("a must be nonempty")
    merged = np.concatenate((a, b))
    if len(np.unique(merged)) != len(merged):
        raise InputError("a and b must be disjoint and duplicate-free")
    return _recurse(a, b)


def _largest_power_of_four(m):
    p = 1
    while p * 4 <= m:
        p *= 4
    return p


@dataclass(frozen=True)
class SubsamplePlan:
    """Index sets for training one voter per sub-sample of range(m_used)."""

    m: int
    m_used: int
    index_sets: tuple

    @property
    def k(self):
        return len(self.index_sets)

    @property
    def set_size(self):
        return len(self.index_sets[0])

    def to_json(self):
        return {"m": self.m, "m_used": self.m_used, "k": self.k,
                "set_size": self.set_size,
                "index_sets": [s.tolist() for s in self.index_sets]}


def plan_for(m):
    """Plan for a sample of size m: round down to a power of 4, drop the rest."""
    if m < 1:
        raise InputError("m must be positive")
    m_used = _largest_power_of_four(m)
    sets = sub_sample(np.arange(m_used, dtype=np.int64), np.empty(0, dtype=np.int64))
    for s in sets:
        s.setflags(write=False)
    return SubsamplePlan(m=int(m), m_used=m_used, index_sets=tuple(sets))
