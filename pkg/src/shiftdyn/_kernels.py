"""Hot scan kernels over sorted index arrays.

Each kernel has a numba ``@njit`` implementation and a pure-numpy fallback.
Set ``SHIFTDYN_DISABLE_NUMBA=1`` to force the numpy path (the benchmark in
``benchmarks/bench_kernels.py`` compares the two).  Numba is also skipped
automatically when it is not installed.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("SHIFTDYN_DISABLE_NUMBA", "") not in ("", "0")

if not _DISABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover
        _DISABLED = True

USING_NUMBA = not _DISABLED


# -- pure numpy implementations ---------------------------------------------


def _longest_run_np(members: np.ndarray) -> tuple[int, int]:
    """(length, start) of the longest block of consecutive members."""
    n = members.size
    if n == 0:
        return 0, 0
    breaks = np.where(np.diff(members) != 1)[0]
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [n - 1]))
    lengths = ends - starts + 1
    i = int(np.argmax(lengths))
    return int(lengths[i]), int(members[starts[i]])


def _max_gap_np(members: np.ndarray) -> int:
    """Largest difference between consecutive members (0 for < 2 members)."""
    if members.size < 2:
        return 0
    return int(np.max(np.diff(members)))


def _chain_profile_np(members: np.ndarray, max_gap: int) -> tuple[int, int]:
    """(extent, start) of the longest stretch with consecutive gaps <= max_gap.

    The extent is last - first + 1 over the stretch.
    """
    n = members.size
    if n == 0:
        return 0, 0
    breaks = np.where(np.diff(members) > max_gap)[0]
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [n - 1]))
    extents = members[ends] - members[starts] + 1
    i = int(np.argmax(extents))
    return int(extents[i]), int(members[starts[i]])


# -- numba implementations ---------------------------------------------------

if USING_NUMBA:

    @numba.njit(cache=True)
    def _longest_run_nb(members):  # pragma: no cover - exercised via dispatch
        n = members.size
        if n == 0:
            return 0, 0
        best_len = 1
        best_start = members[0]
        cur_len = 1
        cur_start = members[0]
        for i in range(1, n):
            if members[i] == members[i - 1] + 1:
                cur_len += 1
            else:
                cur_len = 1
                cur_start = members[i]
            if cur_len > best_len:
                best_len = cur_len
                best_start = cur_start
        return int(best_len), int(best_start)

    @numba.njit(cache=True)
    def _max_gap_nb(members):  # pragma: no cover
        if members.size < 2:
            return 0
        g = 0
        for i in range(1, members.size):
            d = members[i] - members[i - 1]
            if d > g:
                g = d
        return int(g)

    @numba.njit(cache=True)
    def _chain_profile_nb(members, max_gap):  # pragma: no cover
        n = members.size
        if n == 0:
            return 0, 0
        best_ext = 1
        best_start = members[0]
        cur_start = members[0]
        for i in range(1, n):
            if members[i] - members[i - 1] > max_gap:
                cur_start = members[i]
            ext = members[i] - cur_start + 1
            if ext > best_ext:
                best_ext = ext
                best_start = cur_start
        return int(best_ext), int(best_start)


def longest_run(members: np.ndarray) -> tuple[int, int]:
    m = np.ascontiguousarray(members, dtype=np.int64)
    if USING_NUMBA:
        return _longest_run_nb(m)
    return _longest_run_np(m)


def max_gap(members: np.ndarray) -> int:
    m = np.ascontiguousarray(members, dtype=np.int64)
    if USING_NUMBA:
        return _max_gap_nb(m)
    return _max_gap_np(m)


def chain_profile(members: np.ndarray, gap: int) -> tuple[int, int]:
    m = np.ascontiguousarray(members, dtype=np.int64)
    if USING_NUMBA:
        return _chain_profile_nb(m, gap)
    return _chain_profile_np(m, gap)
