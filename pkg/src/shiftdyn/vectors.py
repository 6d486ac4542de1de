"""Finitely supported coefficient vectors.

Entries may be exact (int/Fraction) or floating point; mixed vectors are
allowed but the exact-arithmetic tests only use Fraction entries.  Zero
entries are never stored, so equality of vectors is equality of supports and
coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Tuple, Union

Scalar = Union[int, Fraction, float, complex]

Index = Union[int, Tuple[int, int]]


class TruncatedVector:
    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[Index, Scalar] | Iterable[tuple[Index, Scalar]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        data = {}
        for j, c in items:
            _check_index(j)
            if c != 0:
                data[j] = data.get(j, 0) + c
                if data[j] == 0:
                    del data[j]
        self._entries = data

    @staticmethod
    def basis(j: Index, coeff: Scalar = 1) -> "TruncatedVector":
        return TruncatedVector({j: coeff})

    @staticmethod
    def zero() -> "TruncatedVector":
        return TruncatedVector()

    @property
    def support(self) -> frozenset:
        return frozenset(self._entries)

    def __getitem__(self, j: Index) -> Scalar:
        return self._entries.get(j, 0)

    def __iter__(self) -> Iterator[tuple[Index, Scalar]]:
        return iter(sorted(self._entries.items()))

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __add__(self, other: "TruncatedVector") -> "TruncatedVector":
        merged = dict(self._entries)
        for j, c in other._entries.items():
            merged[j] = merged.get(j, 0) + c
        return TruncatedVector(merged)

    def __sub__(self, other: "TruncatedVector") -> "TruncatedVector":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "TruncatedVector":
        if c == 0:
            return TruncatedVector()
        return TruncatedVector({j: c * v for j, v in self._entries.items()})

    def map_indices(self, f) -> "TruncatedVector":
        return TruncatedVector({f(j): v for j, v in self._entries.items()})

    def max_linear_index(self) -> int:
        """Largest index for linear-indexed vectors (0 for the zero vector)."""
        return max(self._entries, default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedVector):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        terms = ", ".join(f"{j}: {c}" for j, c in self)
        return f"TruncatedVector({{{terms}}})"


def _check_index(j: Index) -> None:
    if isinstance(j, tuple):
        if len(j) != 2 or j[0] < 1 or j[1] < 1:
            raise ValueError(f"planar index must be a pair of positive integers, got {j}")
    elif j < 1:
        raise ValueError(f"index must be >= 1, got {j}")
