"""Symbols: bijections of the index set onto index-set-minus-root whose root
orbit enumerates every index.

The root orbit chi(1) = root, chi(j+1) = psi(chi(j)) is the coordinate system
every dynamical condition is evaluated in.  Planar indices (the snake shift)
are pairs (i, j); for bookkeeping they flatten to N along anti-diagonals.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from .vectors import Index
from .verdicts import Verdict, certified_fails, empirical


class SymbolInvalidError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def pair_index(idx: tuple[int, int]) -> int:
    """Anti-diagonal pairing (1,1)->1, (2,1)->2, (1,2)->3, (3,1)->4, ..."""
    i, j = idx
    d = i + j
    return (d - 2) * (d - 1) // 2 + i


def unpair_index(n: int) -> tuple[int, int]:
    d = (1 + math.isqrt(8 * n + 1)) // 2
    while (d - 1) * d // 2 < n:
        d += 1
    while (d - 2) * (d - 1) // 2 >= n:
        d -= 1
    i = n - (d - 2) * (d - 1) // 2
    return (i, d - i)


class Symbol:
    def __init__(
        self,
        name: str,
        forward: Callable[[Index], Index],
        inverse: Optional[Callable[[Index], Index]] = None,
        *,
        index_kind: str = "linear",
        note: str = "",
    ):
        self.name = name
        self.forward = forward
        self.inverse = inverse
        self.index_kind = index_kind
        self.note = note  # correctness note for gallery symbols (coverage is not finitely certifiable)
        self.root: Index = 1 if index_kind == "linear" else (1, 1)
        self._orbit: list[Index] = [self.root]
        self._orbit_seen = {self.root}
        self._lock = threading.Lock()

    def __call__(self, j: Index) -> Index:
        return self.forward(j)

    def flatten(self, j: Index) -> int:
        return pair_index(j) if self.index_kind == "planar" else j

    def orbit(self, n: int) -> list[Index]:
        """chi(1..n): the root followed by its first n-1 images; memoized."""
        if n < 1:
            raise ValueError("prefix length must be >= 1")
        with self._lock:
            while len(self._orbit) < n:
                nxt = self.forward(self._orbit[-1])
                if nxt == self.root:
                    raise SymbolInvalidError("symbol maps onto the root", witness=self._orbit[-1])
                if nxt in self._orbit_seen:
                    raise SymbolInvalidError(
                        f"orbit collision at value {nxt}", witness=(self._orbit[-1], nxt)
                    )
                self._orbit.append(nxt)
                self._orbit_seen.add(nxt)
            return self._orbit[:n]

    def orbit_position(self, idx: Index, search_bound: int) -> Optional[int]:
        """1-based position of idx in the root orbit, searched up to the bound."""
        orbit = self.orbit(search_bound)
        try:
            return orbit.index(idx) + 1
        except ValueError:
            return None

    def preimage(self, idx: Index, search_bound: int = 1 << 16) -> Index:
        if idx == self.root:
            raise SymbolInvalidError("the root has no preimage")
        if self.inverse is not None:
            return self.inverse(idx)
        pos = self.orbit_position(idx, search_bound)
        if pos is None or pos < 2:
            raise SymbolInvalidError(f"preimage of {idx} not found within bound {search_bound}")
        return self._orbit[pos - 2]

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"


def orbit_enumeration(psi: Symbol, n: int) -> list[Index]:
    """chi(1..n); raises SymbolInvalidError on a collision."""
    return psi.orbit(n)


def verify_symbol(psi: Symbol, n: int) -> Verdict:
    """Finite-prefix verification of the symbol axioms.

    Checks, on the first n domain indices: images never hit the root,
    injectivity, surjectivity evidence (every small non-root index has a
    preimage), and root-orbit coverage of an initial segment.  Success is
    only ever EMPIRICAL - coverage is a statement about all of N.
    """
    if n < 1:
        raise ValueError("prefix length must be >= 1")
    if psi.index_kind == "linear":
        domain = list(range(1, n + 1))
    else:
        domain = [unpair_index(t) for t in range(1, n + 1)]

    images = {}
    for j in domain:
        img = psi.forward(j)
        if img == psi.root:
            return certified_fails(reason="image hits the root", witness={"j": str(j)})
        if img in images:
            return certified_fails(
                reason="duplicate image", witness={"j": str(j), "collides_with": str(images[img]), "value": str(img)}
            )
        images[img] = j

    # surjectivity evidence: non-root indices below a reported bound all have
    # preimages among the scanned domain
    flat_images = sorted(psi.flatten(i) for i in images)
    coverage = 0
    expect = 2  # flattened root is 1
    for f in flat_images:
        if f == expect:
            expect += 1
        elif f > expect:
            break
    preimage_bound = expect - 1
    if preimage_bound < 2 and n >= 2:
        missing = unpair_index(2) if psi.index_kind == "planar" else 2
        return certified_fails(
            reason="index has no preimage in scanned prefix",
            witness={"index": str(missing), "searched": n},
        )

    try:
        orbit = psi.orbit(n)
    except SymbolInvalidError as e:
        return certified_fails(reason=str(e), witness={"at": str(e.witness)})
    flat_orbit = sorted(psi.flatten(i) for i in orbit)
    expect = 1
    for f in flat_orbit:
        if f == expect:
            expect += 1
        elif f > expect:
            break
    orbit_cover = expect - 1
    if orbit_cover < 1:
        return certified_fails(
            reason="root orbit misses an initial segment", witness={"covered": orbit_cover}
        )
    return empirical(
        prefix=n,
        preimage_bound=preimage_bound,
        orbit_coverage_bound=orbit_cover,
        coverage_ratio=orbit_cover / n,
    )


# ---------------------------------------------------------------------------
# Built-in symbols
# ---------------------------------------------------------------------------


def successor_symbol() -> Symbol:
    return Symbol(
        "successor",
        lambda j: j + 1,
        lambda j: j - 1 if j > 1 else _root_error(),
        note="orbit of 1 is 1, 2, 3, ...",
    )


def _root_error():
    raise SymbolInvalidError("the root has no preimage")


def default_snake_growth(k: int) -> int:
    return k * k


class SnakeGrowthError(ValueError):
    pass


def snake_symbol(n: Callable[[int], int] = default_snake_growth, check_prefix: int = 64) -> Symbol:
    """The planar snake symbol driven by a growth sequence n(k).

    n must be strictly increasing with n(k) <= 3k^2 and nondecreasing,
    unbounded differences (validated on a prefix).  The six defining cases:

      (1) (1, j)      -> (1, j+1)    for n(k) < j < n(k+1)
      (2) (2, 2k-1)   -> (1, n(k)+1)
      (3) (1, n(k+1)) -> (2, 2k)
      (4) (2k-1, 1)   -> (2k, 1)
      (5) (i, j)      -> (i+1, j-1)  if i+j even, i, j > 1
      (6) (i, j)      -> (i-1, j+1)  if i+j odd, i > 2
    """
    vals = [n(k) for k in range(1, check_prefix + 2)]
    diffs = [b - a for a, b in zip(vals, vals[1:])]
    if any(b <= a for a, b in zip(vals, vals[1:])):
        raise SnakeGrowthError("growth sequence must be strictly increasing")
    if any(v > 3 * k * k for k, v in enumerate(vals, start=1)):
        raise SnakeGrowthError("growth sequence must satisfy n(k) <= 3k^2")
    if any(d2 < d1 for d1, d2 in zip(diffs, diffs[1:])):
        raise SnakeGrowthError("growth differences must be nondecreasing")
    if diffs[-1] <= diffs[0]:
        raise SnakeGrowthError("growth differences must be unbounded (prefix check)")

    def k_of_run(j: int) -> tuple[int, bool]:
        """For a column j >= 2 of row 1: the k with n(k) < j <= n(k+1), and
        whether j == n(k+1)."""
        k = 1
        while n(k + 1) < j:
            k += 1
        return k, n(k + 1) == j

    def forward(idx: tuple[int, int]) -> tuple[int, int]:
        i, j = idx
        if i == 1:
            if j == 1:
                return (2, 1)  # case (4), k = 1
            k, at_end = k_of_run(j)
            if at_end:
                return (2, 2 * k)  # case (3)
            return (1, j + 1)  # case (1)
        if i == 2 and j % 2 == 1:
            return (1, n((j + 1) // 2) + 1)  # case (2)
        if i % 2 == 1 and j == 1:
            return (i + 1, 1)  # case (4)
        if (i + j) % 2 == 0 and i > 1 and j > 1:
            return (i + 1, j - 1)  # case (5)
        if (i + j) % 2 == 1 and i > 2:
            return (i - 1, j + 1)  # case (6)
        raise SymbolInvalidError(f"snake cases do not cover {idx}")

    def inverse(idx: tuple[int, int]) -> tuple[int, int]:
        i, j = idx
        if idx == (1, 1):
            _root_error()
        if i == 1:
            # j >= 2; came from case (2) when j-1 is some n(k), else case (1)
            k = 1
            while n(k) < j - 1:
                k += 1
            if n(k) == j - 1:
                return (2, 2 * k - 1)
            return (1, j - 1)
        if i == 2:
            if j == 1:
                return (1, 1)
            if j % 2 == 0:
                return (1, n(j // 2 + 1))  # case (3)
            return (3, j - 1)  # case (6)
        if j == 1:
            if i % 2 == 0:
                return (i - 1, 1)  # case (4)
            return (i - 1, 2)  # case (5)
        if (i + j) % 2 == 0:
            return (i - 1, j + 1)  # case (5)
        return (i + 1, j - 1)  # case (6)

    return Symbol(
        "snake",
        forward,
        inverse,
        index_kind="planar",
        note="six-case snake over NxN; orbit sweeps row-1 runs between n(k) markers",
    )


BUILTIN_SYMBOLS = {
    "successor": successor_symbol,
    "snake": snake_symbol,
}
