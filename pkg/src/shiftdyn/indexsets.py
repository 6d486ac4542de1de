"""Finite-window detection of syndetic, thick and piecewise syndetic sets.

A finite window can never decide an asymptotic combinatorial property, so
every answer carries its window and edge flags; callers compare results
across growing windows, and certification happens only upstream where a
closed-form generator or structural hint is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .weights import WeightFamily


@dataclass(frozen=True)
class IndexWindowSet:
    """A set of indices observed on a window, with an optional generator."""

    lo: int
    hi: int
    members: np.ndarray
    generator: Optional[Callable[[int], bool]] = None

    def __post_init__(self) -> None:
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError(f"bad window [{self.lo}, {self.hi}]")
        m = np.asarray(self.members, dtype=np.int64)
        if m.size and (m[0] < self.lo or m[-1] > self.hi or np.any(np.diff(m) <= 0)):
            raise ValueError("members must be sorted, distinct and inside the window")
        object.__setattr__(self, "members", m)

    @staticmethod
    def from_predicate(pred: Callable[[int], bool], lo: int, hi: int) -> "IndexWindowSet":
        members = np.array([j for j in range(lo, hi + 1) if pred(j)], dtype=np.int64)
        return IndexWindowSet(lo, hi, members, generator=pred)

    def restrict(self, lo: int, hi: int) -> "IndexWindowSet":
        m = self.members
        m = m[(m >= lo) & (m <= hi)]
        return IndexWindowSet(lo, hi, m, generator=self.generator)

    def __len__(self) -> int:
        return int(self.members.size)

    def check_generator(self) -> bool:
        if self.generator is None:
            return True
        expected = {j for j in range(self.lo, self.hi + 1) if self.generator(j)}
        return expected == set(self.members.tolist())


@dataclass(frozen=True)
class SyndeticScan:
    bound: Optional[int]  # least stable m on the window, None if empty/unstable
    window_bound: Optional[int]  # bound ignoring stability, None if empty
    tail_gap: int  # distance from the last member to the window edge
    tail_inconclusive: bool
    window: tuple[int, int]


def syndetic_bound(A: IndexWindowSet) -> SyndeticScan:
    """Least m such that every window index j has a member in [j, j+m].

    Indices within the trailing gap are treated conservatively (a member just
    beyond the window could cover them); the scan is marked unstable - and
    ``bound`` is None - when the bound keeps growing from the half window to
    the full window, which is the finite-window signature of unbounded gaps.
    """
    m = A.members
    if m.size == 0:
        return SyndeticScan(None, None, A.hi - A.lo + 1, True, (A.lo, A.hi))

    def core(members: np.ndarray, lo: int) -> int:
        first = int(members[0]) - lo
        return max(first, _kernels.max_gap(members) - 1)

    full = core(m, A.lo)
    half_hi = A.lo + (A.hi - A.lo) // 2
    half_members = m[m <= half_hi]
    stable = True
    if half_members.size:
        stable = core(half_members, A.lo) >= full
    tail_gap = A.hi - int(m[-1])
    return SyndeticScan(
        bound=full if stable else None,
        window_bound=full,
        tail_gap=tail_gap,
        tail_inconclusive=tail_gap > full,
        window=(A.lo, A.hi),
    )


def longest_run(A: IndexWindowSet) -> tuple[int, Optional[int]]:
    """Length and start of the longest block of consecutive members."""
    n, start = _kernels.longest_run(A.members)
    return (n, start if n else None)


def piecewise_syndetic_profile(A: IndexWindowSet, m: int) -> int:
    """Largest n such that some length-n subinterval J of the window has
    A cap J meeting every length-(m+1) subinterval of J."""
    if m < 0:
        raise ValueError("gap bound must be >= 0")
    if A.members.size == 0:
        return 0
    extent, start = _kernels.chain_profile(A.members, m + 1)
    end = start + extent - 1
    left = min(m, start - A.lo)
    right = min(m, A.hi - end)
    return extent + left + right


def sublevel_set(
    family: WeightFamily,
    m: int,
    k: int,
    eps: float,
    window: tuple[int, int],
    generator: Optional[Callable[[int], bool]] = None,
) -> IndexWindowSet:
    """{j in window : v^(m,k)_j < eps}."""
    if eps <= 0:
        raise ValueError("threshold must be positive")
    lo, hi = window
    js = np.arange(lo, hi + 1, dtype=np.int64)
    logs = family.log_weights(m, k, js)
    members = js[logs < math.log(eps)]
    return IndexWindowSet(lo, hi, members, generator=generator)


def log_sublevel_members(logs: np.ndarray, lo: int, log_eps: float) -> IndexWindowSet:
    """Sublevel set straight from an array of log weights starting at index lo."""
    js = np.arange(lo, lo + logs.size, dtype=np.int64)
    return IndexWindowSet(lo, lo + logs.size - 1, js[logs < log_eps])
