"""Weight families, seminorms and exponents.

All weight arithmetic runs in log-space: a weight ``v`` is represented by
``log v``, with ``+inf`` marking a forbidden coordinate (the planar direct-sum
gradings use ``v = inf`` to pin coordinates to zero).  Weights are strictly
positive, so ``-inf`` never occurs.  Families with rational weights may expose
an exact evaluator used by the exact-arithmetic tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .vectors import Index, TruncatedVector
from .verdicts import Verdict, certified_fails, empirical

INF = math.inf


@dataclass(frozen=True, order=True)
class LogWeight:
    """Log of a strictly positive extended weight; +inf means forbidden."""

    value: float

    def __post_init__(self) -> None:
        if self.value == -INF or math.isnan(self.value):
            raise ValueError("weights are strictly positive: log weight cannot be -inf/nan")

    def __add__(self, other: "LogWeight") -> "LogWeight":
        # sum of logs models product of weights; +inf absorbs
        return LogWeight(self.value + other.value)

    @property
    def forbidden(self) -> bool:
        return self.value == INF

    def weight(self) -> float:
        return math.exp(self.value) if self.value != INF else INF


@dataclass(frozen=True)
class Exponent:
    """Summation exponent: 0 encodes the sup-norm case, otherwise p >= 1."""

    value: Fraction

    def __init__(self, value) -> None:
        v = Fraction(value)
        if v != 0 and v < 1:
            raise ValueError("exponent must be 0 (sup case) or >= 1")
        object.__setattr__(self, "value", v)

    @property
    def is_sup(self) -> bool:
        return self.value == 0

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:
        return f"Exponent({self.value})"


# ---------------------------------------------------------------------------
# Structural hints
# ---------------------------------------------------------------------------
# Hints are declared by family constructors and spot-verified by sampling.
# A certificate consuming a hint records it; "certified" always means
# "certified relative to the declared hints".


@dataclass(frozen=True)
class DecreasingInLevel:
    kind: str = "decreasing-in-level"


@dataclass(frozen=True)
class IncreasingInGrade:
    kind: str = "increasing-in-grade"


@dataclass(frozen=True)
class TailMonotone:
    start: int
    level: int
    grade: int = 1
    direction: str = "decreasing"  # of the weight values along j
    kind: str = "tail-monotone"


@dataclass(frozen=True)
class LimitZero:
    level: int
    grade: int = 1
    kind: str = "limit-zero"


@dataclass(frozen=True)
class SummableTailBound:
    """Closed-form bound on log of sum_{j>N} v_j^p at the given level/grade."""

    level: int
    grade: int
    p: float
    log_tail_bound: Callable[[int], float]
    note: str = ""
    kind: str = "summable-tail-bound"


Hint = object


class WeightFamily:
    """Evaluator for v^(m,k)_j in log-space over levels m, grades k, indices j.

    ``log_eval(m, k, j)`` is total on m, k, j >= 1 and returns +inf exactly on
    forbidden coordinates.  ``log_eval_array`` is an optional vectorized fast
    path over a numpy array of indices; the default falls back to a loop.
    Planar families take indices through a fixed anti-diagonal pairing and
    additionally accept pair tuples.
    """

    def __init__(
        self,
        name: str,
        log_eval: Callable[[int, int, int], float],
        *,
        index_kind: str = "linear",
        levels_hint: int = 8,
        hints: Sequence[Hint] = (),
        exact_eval: Optional[Callable[[int, int, int], Fraction]] = None,
        log_eval_array: Optional[Callable[[int, int, np.ndarray], np.ndarray]] = None,
        grade_constant: bool = True,
    ):
        if index_kind not in ("linear", "planar"):
            raise ValueError(f"unknown index kind {index_kind!r}")
        self.name = name
        self._log_eval = log_eval
        self.index_kind = index_kind
        self.levels_hint = levels_hint
        self.hints = tuple(hints)
        self.exact_eval = exact_eval
        self._log_eval_array = log_eval_array
        self.grade_constant = grade_constant

    def log_weight(self, m: int, k: int, j) -> float:
        if m < 1 or k < 1:
            raise ValueError(f"level and grade must be >= 1, got m={m}, k={k}")
        if isinstance(j, tuple):
            if j[0] < 1 or j[1] < 1:
                raise ValueError(f"invalid planar index {j}")
        elif j < 1:
            raise ValueError(f"invalid index j={j}")
        return self._log_eval(m, k, j)

    def log_weights(self, m: int, k: int, js: np.ndarray) -> np.ndarray:
        """Vectorized log weights over an int array of (flattened) indices."""
        if self._log_eval_array is not None:
            return np.asarray(self._log_eval_array(m, k, js), dtype=float)
        return np.array([self._log_eval(m, k, int(j)) for j in js], dtype=float)

    def has_hint(self, kind: type, level: int | None = None, grade: int | None = None):
        for h in self.hints:
            if isinstance(h, kind):
                if level is not None and getattr(h, "level", level) != level:
                    continue
                if grade is not None and getattr(h, "grade", grade) != grade:
                    continue
                return h
        return None

    def with_hints(self, *extra: Hint) -> "WeightFamily":
        clone = WeightFamily(
            self.name,
            self._log_eval,
            index_kind=self.index_kind,
            levels_hint=self.levels_hint,
            hints=self.hints + tuple(extra),
            exact_eval=self.exact_eval,
            log_eval_array=self._log_eval_array,
            grade_constant=self.grade_constant,
        )
        return clone

    def __repr__(self) -> str:
        return f"WeightFamily({self.name!r})"


def weight_at(family: WeightFamily, m: int, k: int, j) -> LogWeight:
    """log v^(m,k)_j as a LogWeight."""
    return LogWeight(family.log_weight(m, k, j))


# ---------------------------------------------------------------------------
# Seminorms
# ---------------------------------------------------------------------------


def log_seminorm(x: TruncatedVector, family: WeightFamily, m: int, k: int, p: Exponent) -> float:
    """log of the weighted p-norm of a finitely supported vector.

    Returns -inf for the zero vector and +inf when the support touches a
    forbidden coordinate.
    """
    if not x:
        return -INF
    terms = []
    for j, c in x:
        lv = family.log_weight(m, k, j)
        if lv == INF:
            return INF
        terms.append(math.log(abs(c)) + lv)
    if p.is_sup:
        return max(terms)
    pf = float(p)
    # logsumexp of p * terms, then divide by p
    hi = max(terms)
    s = sum(math.exp(pf * (t - hi)) for t in terms)
    return hi + math.log(s) / pf


def seminorm(x: TruncatedVector, family: WeightFamily, m: int, k: int, p: Exponent) -> float:
    """Weighted p-norm in plain-value space (+inf on forbidden support)."""
    ls = log_seminorm(x, family, m, k, p)
    if ls == -INF:
        return 0.0
    return math.exp(ls) if ls != INF else INF


def seminorm_pth_power_exact(
    x: TruncatedVector, family: WeightFamily, m: int, k: int, p: Exponent
) -> Fraction:
    """Exact sum_j |x_j v_j|^p for integer p >= 1, or the exact sup for p=0.

    Requires the family to expose an exact evaluator and the vector to have
    rational entries.
    """
    if family.exact_eval is None:
        raise ValueError(f"family {family.name} has no exact evaluator")
    if not p.is_sup and p.value.denominator != 1:
        raise ValueError("exact mode needs an integer exponent")
    terms = []
    for j, c in x:
        v = family.exact_eval(m, k, j)
        terms.append(abs(Fraction(c)) * v)
    if not terms:
        return Fraction(0)
    if p.is_sup:
        return max(terms)
    e = int(p.value)
    return sum(t**e for t in terms)


# ---------------------------------------------------------------------------
# Shape verification
# ---------------------------------------------------------------------------


def verify_family_shape(family: WeightFamily, window: tuple[int, int, int]) -> Verdict:
    """Scan positivity, decreasing-in-level and increasing-in-grade on a window.

    A finite scan cannot certify the infinitely many remaining indices, so a
    clean scan yields ``EMPIRICAL``; any violation is a certified failure with
    a concrete witness triple.
    """
    M, K, N = window
    if min(M, K, N) < 1:
        raise ValueError("window bounds must be >= 1")
    js = np.arange(1, N + 1, dtype=np.int64)
    rows = {}
    for m in range(1, M + 1):
        for k in range(1, K + 1):
            rows[m, k] = family.log_weights(m, k, js)
    for (m, k), row in rows.items():
        if np.any(np.isnan(row)) or np.any(row == -INF):
            j = int(js[np.where(~(row > -INF))[0][0]])
            return certified_fails(reason="non-positive weight", witness={"m": m, "k": k, "j": j})
    check_levels = family.has_hint(DecreasingInLevel) is not None or family.index_kind == "linear"
    if check_levels:
        for m in range(1, M):
            for k in range(1, K + 1):
                bad = np.where(rows[m + 1, k] > rows[m, k])[0]
                if bad.size:
                    j = int(js[bad[0]])
                    return certified_fails(
                        reason="not decreasing in level", witness={"m": m, "k": k, "j": j}
                    )
    if not family.grade_constant:
        for m in range(1, M + 1):
            for k in range(1, K):
                bad = np.where(rows[m, k] > rows[m, k + 1])[0]
                if bad.size:
                    j = int(js[bad[0]])
                    return certified_fails(
                        reason="not increasing in grade", witness={"m": m, "k": k, "j": j}
                    )
    return empirical(window={"levels": M, "grades": K, "indices": N})


def spot_check_hints(family: WeightFamily, probes: int = 10_000, seed: int = 0) -> None:
    """Sample-verify declared hints; raises HintRejected at the first bad probe."""
    rng = np.random.default_rng(seed)
    js = np.unique(
        np.concatenate(
            [
                np.arange(1, 1025, dtype=np.int64),
                rng.integers(1, 1 << 16, size=max(probes - 1024, 0)).astype(np.int64),
            ]
        )
    )
    for h in family.hints:
        if isinstance(h, DecreasingInLevel):
            for m in range(1, family.levels_hint):
                a = family.log_weights(m, 1, js)
                b = family.log_weights(m + 1, 1, js)
                bad = np.where(b > a)[0]
                if bad.size:
                    raise HintRejected(h, {"m": m, "k": 1, "j": int(js[bad[0]])})
        elif isinstance(h, IncreasingInGrade):
            for k in range(1, family.levels_hint):
                a = family.log_weights(1, k, js)
                b = family.log_weights(1, k + 1, js)
                bad = np.where(b < a)[0]
                if bad.size:
                    raise HintRejected(h, {"m": 1, "k": k, "j": int(js[bad[0]])})
        elif isinstance(h, TailMonotone):
            tail = js[js >= h.start]
            vals = family.log_weights(h.level, h.grade, np.sort(tail))
            diffs = np.diff(vals)
            bad = np.where(diffs > 0 if h.direction == "decreasing" else diffs < 0)[0]
            if bad.size:
                raise HintRejected(h, {"j": int(np.sort(tail)[bad[0]])})
        elif isinstance(h, LimitZero):
            # necessary condition only: weights shrink along the dyadic probe tail
            ts = np.array([1 << t for t in range(6, 17)], dtype=np.int64)
            vals = family.log_weights(h.level, h.grade, ts)
            if not vals[-1] < vals[0]:
                raise HintRejected(h, {"probe": "dyadic tail not shrinking"})
        elif isinstance(h, SummableTailBound):
            # the closed-form tail bound must dominate the first omitted term
            for N in (64, 256, 1024):
                term = family.log_weights(h.level, h.grade, np.array([N + 1]))[0] * h.p
                if h.log_tail_bound(N) < term - 1e-9:
                    raise HintRejected(h, {"N": N})


class HintRejected(ValueError):
    def __init__(self, hint: Hint, probe: dict):
        self.hint = hint
        self.probe = probe
        super().__init__(f"hint {hint} contradicted at probe {probe}")
