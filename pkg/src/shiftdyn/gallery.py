"""Built-in example spaces, named by the dynamical behaviour they exhibit.

Each builder returns a fully structured :class:`SpaceSpec`: the weight family,
the operator data, and the declared structural facts that let the classifier
certify the intended verdicts.  Bounds can be overridden per call.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .classifier import (
    PROPERTIES as PROPERTY_NAMES,
    ColumnDichotomy,
    DivergenceCertificate,
    MixingRefutation,
    RunBoundCertificate,
    ScanBounds,
    SpaceSpec,
    Structure,
    SublevelCertificate,
    classify,
)
from .conjugacy import WeightSequence, sqrt_index_weights, unit_weights
from .symbols import snake_symbol, successor_symbol
from .weights import DecreasingInLevel, Exponent, LimitZero, TailMonotone, WeightFamily

LOG2 = math.log(2.0)


# ---------------------------------------------------------------------------
# shared vector helpers
# ---------------------------------------------------------------------------


def _nu2_array(js: np.ndarray) -> np.ndarray:
    """2-adic valuation, vectorized."""
    j = np.asarray(js, dtype=np.int64).copy()
    out = np.zeros(j.shape, dtype=np.int64)
    mask = (j & 1) == 0
    while mask.any():
        out[mask] += 1
        j[mask] >>= 1
        mask = (j & 1) == 0
    return out


def _ceillog2_array(js: np.ndarray) -> np.ndarray:
    v = np.asarray(js, dtype=np.int64) - 1
    out = np.zeros(v.shape, dtype=np.int64)
    mask = v > 0
    while mask.any():
        out[mask] += 1
        v = v >> 1
        mask = v > 0
    return out


def _nu2_int(j: int) -> int:
    return (j & -j).bit_length() - 1


# ---------------------------------------------------------------------------
# power-series-type duals: v^(m)_j = exp(-m * alpha_j)
# ---------------------------------------------------------------------------


def _power_dual_family(name: str, alpha: Callable[[np.ndarray], np.ndarray]) -> WeightFamily:
    def log_eval(m, k, j):
        return -m * float(alpha(np.array([j], dtype=np.int64))[0])

    def log_eval_array(m, k, js):
        return -m * alpha(np.asarray(js, dtype=np.int64))

    return WeightFamily(
        name,
        log_eval,
        log_eval_array=log_eval_array,
        hints=(DecreasingInLevel(), LimitZero(None, None), TailMonotone(1, None, None, "down")),
        grade_constant=True,
    )


def _vanishing_structure(**extra) -> Structure:
    return Structure(
        limit_zero=lambda m, k: True,
        tail_monotone_start=lambda m, k: 1,
        **extra,
    )


def power_dual_linear(p=2, **over) -> SpaceSpec:
    """alpha_j = j: every level's weights are geometric, hence p-summable."""
    fam = _power_dual_family("power-dual-linear", lambda js: js.astype(float))

    def summable_tail(m, k, pf):
        if pf <= 0:
            return None
        rate = pf * m

        def bound(N: int) -> float:
            return -rate * (N + 1) - math.log1p(-math.exp(-rate))

        return bound

    st = _vanishing_structure(
        summable_tail=summable_tail,
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        level_exhaustive=True,
        notes="geometric decay at every level; level m+1 dominates level m shifted by one",
    )
    return SpaceSpec(
        name="power-dual-linear",
        family=fam,
        p=Exponent(p),
        structure=st,
        expectations=dict.fromkeys(PROPERTY_NAMES, True),
        **over,
    )


def power_dual_loglog(p=2, **over) -> SpaceSpec:
    """alpha_j = log log(j+2): weights vanish but are never p-summable."""
    fam = _power_dual_family(
        "power-dual-loglog", lambda js: np.log(np.log(js.astype(float) + 2.0))
    )

    def divergence(m, pf):
        def lb(j: float) -> float:
            return -pf * m * math.log(math.log(j + 2.0))

        return DivergenceCertificate(
            log_term_lb=lb,
            note="terms decay slower than any power of j",
        )

    st = _vanishing_structure(
        divergence=divergence,
        level_exhaustive=True,
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        notes="iterated-logarithm decay: vanishing but never summable",
    )
    expectations = dict.fromkeys(PROPERTY_NAMES, True)
    expectations["chaotic"] = False
    return SpaceSpec(
        name="power-dual-loglog",
        family=fam,
        p=Exponent(p),
        structure=st,
        expectations=expectations,
        **over,
    )


# ---------------------------------------------------------------------------
# s-prime: v^(m)_j = j^-m
# ---------------------------------------------------------------------------


def _s_prime_family() -> WeightFamily:
    return WeightFamily(
        "s-prime",
        lambda m, k, j: -m * math.log(j),
        log_eval_array=lambda m, k, js: -m * np.log(np.asarray(js, dtype=float)),
        exact_eval=lambda m, k, j: Fraction(1, j**m),
        hints=(DecreasingInLevel(), LimitZero(None, None), TailMonotone(1, None, None, "down")),
        grade_constant=True,
    )


def _integral_tail(m: int, pf: float) -> Optional[Callable[[int], float]]:
    """log of integral tail bound for sum_{j>N} j^(-pf*m)."""
    rate = pf * m
    if rate <= 1:
        return None

    def bound(N: int) -> float:
        return (1 - rate) * math.log(N) - math.log(rate - 1)

    return bound


def s_prime(p=2, **over) -> SpaceSpec:
    st = _vanishing_structure(
        summable_tail=lambda m, k, pf: _integral_tail(m, pf),
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        level_exhaustive=True,
        notes="polynomial decay j^-m at level m",
    )
    return SpaceSpec(
        name="s-prime",
        family=_s_prime_family(),
        p=Exponent(p),
        structure=st,
        expectations=dict.fromkeys(PROPERTY_NAMES, True),
        **over,
    )


def sqrt_weighted_s_prime(p=2, **over) -> SpaceSpec:
    """Weights w_j = sqrt(j) on the s-prime ladder: the transported weights
    j^-m / sqrt(j!) decay super-geometrically, so all six properties certify."""

    def summable_tail(m, k, pf):
        if pf <= 0:
            return None

        def bound(N: int) -> float:
            head = pf * (-m * math.log(N + 1) - 0.5 * math.lgamma(N + 2))
            ratio = (N + 2.0) ** (-pf / 2.0)
            return head - math.log1p(-ratio)

        return bound

    st = _vanishing_structure(
        summable_tail=summable_tail,
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        level_exhaustive=True,
        notes="factorial damping from the cumulated sqrt weights",
    )
    return SpaceSpec(
        name="sqrt-weighted-s-prime",
        family=_s_prime_family(),
        p=Exponent(p),
        w=sqrt_index_weights(),
        structure=st,
        expectations={
            "continuity": True,
            "transitive": True,
            "hypercyclic": True,
            "mixing": True,
            "chaotic": True,
            "ergodic_sufficient": True,
        },
        **over,
    )


# ---------------------------------------------------------------------------
# ergodic-not-hypercyclic: dyadic-valuation ladder
# v^(m)_j = 2^-(max_{0<=t<m} nu2(j+t) + 1)
# ---------------------------------------------------------------------------


def _valuation_family() -> WeightFamily:
    def rolling_max(m: int, js: np.ndarray) -> np.ndarray:
        js = np.asarray(js, dtype=np.int64)
        best = _nu2_array(js)
        for t in range(1, m):
            best = np.maximum(best, _nu2_array(js + t))
        return best

    def log_eval_array(m, k, js):
        return -(rolling_max(m, js) + 1) * LOG2

    def exact_eval(m, k, j):
        mx = max(_nu2_int(j + t) for t in range(m))
        return Fraction(1, 2 ** (mx + 1))

    return WeightFamily(
        "dyadic-valuation",
        lambda m, k, j: -(max(_nu2_int(j + t) for t in range(m)) + 1) * LOG2,
        log_eval_array=log_eval_array,
        exact_eval=exact_eval,
        hints=(DecreasingInLevel(),),
        grade_constant=True,
    )


def ergodic_not_hypercyclic(p=2, **over) -> SpaceSpec:
    """Syndetic vanishing without thick vanishing: sublevel sets are the
    multiples of 2^t (gap 2^t), but every small-weight run has length < 2m."""

    def sublevel(m, k, log_eps):
        if m != 1:
            return None
        t = max(1, math.ceil(-log_eps / LOG2 - 1e-9))
        step = 1 << t
        return SublevelCertificate(
            gap=step,
            member=lambda j, step=step: j % step == 0,
            note=f"level-1 sublevel below 2^-{t} = multiples of 2^{t}",
        )

    def run_bound(m):
        # weights dip below 2^-(m+2) only when the window [j, j+m-1] meets a
        # multiple of 2^(m+2); those windows form runs of exactly m indices
        return RunBoundCertificate(log_eps=-(m + 2) * LOG2, bound=2 * m)

    def _after_power_of_two(j: int) -> bool:
        # j = 2^t + 1: the window [j, j+m-1] dodges every deep dyadic, so
        # v^(m)_j >= 1/(4m) uniformly along this infinite set
        return j >= 2 and (j - 1) & (j - 2) == 0

    st = Structure(
        vanishing_subsequence=lambda m: (lambda t: 1 << t),
        sublevel=sublevel,
        run_bound=run_bound,
        mixing_refutation=MixingRefutation(
            member=_after_power_of_two,
            log_eps=lambda m: -math.log(4 * m),
            note="weights stay above 1/(4m) just after each power of two",
        ),
        level_exhaustive=True,
        # indices j = 1 mod 2^s with 2^s > m: the whole window [j, j+m-1]
        # sits strictly inside a 2^s block, so valuations stay below s
        divergence=lambda m, pf: DivergenceCertificate(
            log_term_lb=lambda j, m=m, pf=pf: -pf * math.log(4 * m),
            member=lambda j, s=m.bit_length(): j % (1 << s) == 1,
            member_count=lambda N, s=m.bit_length(): N >> s,
            note="positive-density set of windows avoiding deep dyadics",
        ),
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        notes="rolling max of 2-adic valuations: syndetic but never thick dips",
    )
    return SpaceSpec(
        name="ergodic-not-hypercyclic",
        family=_valuation_family(),
        p=Exponent(p),
        structure=st,
        expectations={
            "continuity": True,
            "transitive": True,
            "hypercyclic": False,
            "mixing": False,
            "chaotic": False,
            "ergodic_sufficient": True,
        },
        **over,
    )


# ---------------------------------------------------------------------------
# transitive-not-hypercyclic: dyadic-ramp ladder
# j = 2^n - r, 0 <= r < 2^(n-1); v^(m)_j = 2^-n j^-2m if r < m else 2^j j^-2m
# ---------------------------------------------------------------------------


def _ramp_decompose(j: int) -> tuple[int, int]:
    if j == 1:  # index 1 carries the same weight as index 2
        j = 2
    n = (j - 1).bit_length()
    return n, (1 << n) - j


def _ramp_family() -> WeightFamily:
    def log_eval(m, k, j):
        n, r = _ramp_decompose(j)
        j = max(j, 2)
        base = -2 * m * math.log(j)
        return base - n * LOG2 if r < m else base + j * LOG2

    def log_eval_array(m, k, js):
        js = np.maximum(np.asarray(js, dtype=np.int64), 2)
        n = _ceillog2_array(js)
        r = (np.int64(1) << n) - js
        base = -2 * m * np.log(js.astype(float))
        return np.where(r < m, base - n * LOG2, base + js * LOG2)

    def exact_eval(m, k, j):
        n, r = _ramp_decompose(j)
        j = max(j, 2)
        if r < m:
            return Fraction(1, (1 << n) * j ** (2 * m))
        return Fraction(1 << j, j ** (2 * m))

    return WeightFamily(
        "dyadic-ramp",
        log_eval,
        log_eval_array=log_eval_array,
        exact_eval=exact_eval,
        hints=(DecreasingInLevel(),),
        grade_constant=True,
    )


def transitive_not_hypercyclic(p=2, **over) -> SpaceSpec:
    """Weights vanish along powers of two but blow up like 2^j between them,
    so dips never thicken.  The ladder is nuclear-type: level ratios are
    dominated by 1/j^2."""

    def run_bound(m):
        # beyond max(16, 4m^2) the ramp branch 2^j j^-2m exceeds 1, so only
        # the m indices before each power of two can dip below the threshold
        return RunBoundCertificate(
            log_eps=-4 * LOG2, bound=2 * m, start=max(16, 4 * m * m)
        )

    st = Structure(
        vanishing_subsequence=lambda m: (lambda t: 1 << t),
        run_bound=run_bound,
        level_exhaustive=True,
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        notes="dips only at dyadic tails of length m; elsewhere exponential growth",
    )
    return SpaceSpec(
        name="transitive-not-hypercyclic",
        family=_ramp_family(),
        p=Exponent(p),
        structure=st,
        expectations={
            "continuity": True,
            "transitive": True,
            "hypercyclic": False,
            "mixing": False,
            "chaotic": False,
        },
        **over,
    )


def shift_invariance_defect(spec: SpaceSpec, m: int, j: int) -> Fraction:
    """Exact ratio v^(m)_j / v^(m)_{j+1}: unbounded ratios witness that the
    level-m step is not invariant under the backward shift."""
    fam = spec.family
    if fam.exact_eval is None:
        raise ValueError("exact evaluation required")
    return Fraction(fam.exact_eval(m, 1, j)) / fam.exact_eval(m, 1, j + 1)


def nuclearity_ratio_test(spec: SpaceSpec, m: int, N: int) -> dict:
    """Partial sums of v^(m+1)_j / v^(m)_j vs the comparison sum of 1/j^2.

    Exact when the family provides exact evaluation.
    """
    fam = spec.family
    if fam.exact_eval is not None:
        ratio_sum = sum(
            Fraction(fam.exact_eval(m + 1, 1, j)) / fam.exact_eval(m, 1, j)
            for j in range(1, N + 1)
        )
        compare = sum(Fraction(1, j * j) for j in range(1, N + 1))
        return {
            "m": m,
            "N": N,
            "ratio_sum": ratio_sum,
            "comparison_sum": compare,
            "bounded": ratio_sum <= compare + 1,
            "exact": True,
        }
    js = np.arange(1, N + 1, dtype=np.int64)
    ratios = np.exp(fam.log_weights(m + 1, 1, js) - fam.log_weights(m, 1, js))
    ratio_sum = float(np.sum(ratios))
    compare = float(np.sum(1.0 / js.astype(float) ** 2))
    return {
        "m": m,
        "N": N,
        "ratio_sum": ratio_sum,
        "comparison_sum": compare,
        "bounded": ratio_sum <= compare + 1,
        "exact": False,
    }


# ---------------------------------------------------------------------------
# mixing-without-syndeticity: block-scheduled column ladder
# ---------------------------------------------------------------------------


class BlockSchedule:
    """Round t allocates, for each column k = 1..t, a run of t consecutive
    indices to column k.  phi(l, k) is the l-th index of column k."""

    def __init__(self):
        self._starts = [0, 1]  # R[t] = start of round t; R[1] = 1

    def _ensure(self, j: int) -> None:
        while self._starts[-1] <= j:
            t = len(self._starts) - 1
            self._starts.append(self._starts[-1] + t * t)

    def round_start(self, t: int) -> int:
        self._ensure(0)
        while len(self._starts) <= t:
            u = len(self._starts) - 1
            self._starts.append(self._starts[-1] + u * u)
        return self._starts[t]

    def locate(self, j: int) -> tuple[int, int, int]:
        """(round t, column k, offset within the block) for index j."""
        self._ensure(j)
        starts = self._starts
        t = 1
        lo, hi = 1, len(starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if starts[mid] <= j:
                lo = mid
            else:
                hi = mid - 1
        t = lo
        rel = j - starts[t]
        return t, rel // t + 1, rel % t

    def column_of(self, j: int) -> int:
        return self.locate(j)[1]

    def level_index(self, j: int) -> int:
        """l such that j = phi(l, column_of(j))."""
        t, k, off = self.locate(j)
        before = (t - 1) * t // 2 - (k - 1) * k // 2  # sum_{u=k}^{t-1} u
        return before + off + 1

    def phi(self, l: int, k: int) -> int:
        t = k
        while (t * (t + 1) // 2 - (k - 1) * k // 2) < l:
            t += 1
        before = (t - 1) * t // 2 - (k - 1) * k // 2
        return self.round_start(t) + (k - 1) * t + (l - before - 1)

    def column_blocks(self, k: int, hi: int) -> list[tuple[int, int]]:
        """All complete blocks of column k within [1, hi]."""
        out = []
        t = k
        while True:
            lo = self.round_start(t) + (k - 1) * t
            end = lo + t - 1
            if end > hi:
                return out
            out.append((lo, end))
            t += 1

    def locate_array(self, js: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        js = np.asarray(js, dtype=np.int64)
        self._ensure(int(js.max(initial=1)))
        starts = np.array(self._starts[1:], dtype=np.int64)
        t = np.searchsorted(starts, js, side="right")  # round number
        rel = js - starts[t - 1]
        return t, rel // t + 1, rel % t


def _column_family(sched: BlockSchedule) -> WeightFamily:
    """v^(m) = min over q <= m, 0 <= t <= m-q of the seed ladder
    vhat^(q)_{j+t}, where vhat^(q) is (q l)^-q on columns below q and q^-k on
    column k >= q (vhat^(1) = 1)."""

    def seed_log(q: int, js: np.ndarray) -> np.ndarray:
        if q == 1:
            return np.zeros(len(js), dtype=float)
        t, k, off = sched.locate_array(js)
        l = t * (t - 1) // 2 - (k - 1) * k // 2 + off + 1
        low = -q * np.log(q * l.astype(float))
        high = -k.astype(float) * math.log(q)
        return np.where(k < q, low, high)

    def log_eval_array(m, k, js):
        js = np.asarray(js, dtype=np.int64)
        best = None
        for q in range(1, m + 1):
            for t in range(0, m - q + 1):
                cur = seed_log(q, js + t)
                best = cur if best is None else np.minimum(best, cur)
        return best

    def seed_exact(q: int, j: int) -> Fraction:
        if q == 1:
            return Fraction(1)
        _, k, _ = sched.locate(j)
        if k < q:
            return Fraction(1, (q * sched.level_index(j)) ** q)
        return Fraction(1, q**k)

    def exact_eval(m, k, j):
        return min(
            seed_exact(q, j + t) for q in range(1, m + 1) for t in range(0, m - q + 1)
        )

    return WeightFamily(
        "scheduled-columns",
        lambda m, k, j: float(log_eval_array(m, k, np.array([j], dtype=np.int64))[0]),
        log_eval_array=log_eval_array,
        exact_eval=exact_eval,
        hints=(DecreasingInLevel(),),
        grade_constant=True,
    )


def mixing_without_syndeticity(p=2, **over) -> SpaceSpec:
    """Every infinite index set sees vanishing weights at some level, but
    each level carries arbitrarily long high-weight blocks, so the syndetic
    sufficient condition for ergodicity fails."""
    sched = BlockSchedule()
    fam = _column_family(sched)

    def high_weight_intervals(m, log_eps, hi):
        if m == 1:
            return [(1, hi)]
        out = []
        for lo, end in sched.column_blocks(m, hi):
            if end - m >= lo:
                out.append((lo, end - m))
        return out

    def divergence(m, pf):
        if m == 1:
            return DivergenceCertificate(log_term_lb=lambda j: 0.0, note="level 1 is flat")
        lb_val = -pf * m * math.log(m)

        def member(j: int, m=m) -> bool:
            t, k, off = sched.locate(j)
            return k == m and off < t - m  # interior of a column-m block

        def member_count(N: int, m=m) -> int:
            # closed form over complete rounds: round t starts at
            # 1 + (t-1)t(2t-1)/6 and contributes a block interior of t - m
            T = int(round((3 * max(N, 1)) ** (1 / 3))) + 2
            while T > 1 and 1 + (T + 1) * T * (2 * T + 1) // 6 - 1 > N:
                T -= 1
            if T <= m:
                return 0
            return (T - m) * (T - m + 1) // 2

        return DivergenceCertificate(
            log_term_lb=lambda j, lb_val=lb_val: lb_val,
            member=member,
            member_count=member_count,
            note="constant weight m^-m on interiors of column-m blocks",
        )

    st = Structure(
        mixing_dichotomy=ColumnDichotomy(
            column_of=sched.column_of,
            level_for_column=lambda c: c + 1,
            cross_level=2,
            cross_log_bound=lambda j: -max(sched.column_of(j), 2) * LOG2,
            note="bounded columns vanish at their own level; unbounded columns "
            "vanish at level 2",
        ),
        high_weight_intervals=high_weight_intervals,
        divergence=divergence,
        level_exhaustive=True,
        continuity_selection=lambda m, k: (m + 1, k),
        continuity_certified=True,
        notes="column scheduling: per-column vanishing vs flat blocks per level",
    )
    return SpaceSpec(
        name="mixing-without-syndeticity",
        family=fam,
        p=Exponent(p),
        structure=st,
        expectations={
            "continuity": True,
            "transitive": True,
            "hypercyclic": True,
            "mixing": True,
            "chaotic": False,
            "ergodic_sufficient": False,
        },
        **over,
    )


# ---------------------------------------------------------------------------
# snake shifts on planar direct sums
# ---------------------------------------------------------------------------


def _unpair_rows_cols(js: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = np.asarray(js, dtype=np.int64)
    d = (1 + np.sqrt(8.0 * n + 1.0).astype(np.int64)) // 2
    d = np.where((d - 1) * d // 2 < n, d + 1, d)
    d = np.where((d - 2) * (d - 1) // 2 >= n, d - 1, d)
    i = n - (d - 2) * (d - 1) // 2
    return i, d - i


def _row_band_family() -> WeightFamily:
    """Direct sum of l_p rows: coordinate (i, j) lives at level i."""
    from .symbols import unpair_index

    def log_eval(m, k, j):
        i, _ = j if isinstance(j, tuple) else unpair_index(j)
        return 0.0 if i <= m else math.inf

    def log_eval_array(m, k, js):
        rows, _ = _unpair_rows_cols(js)
        return np.where(rows <= m, 0.0, np.inf)

    return WeightFamily(
        "row-band",
        log_eval,
        index_kind="planar",
        log_eval_array=log_eval_array,
        grade_constant=True,
    )


def _row_band_power_family() -> WeightFamily:
    """Direct sum of rapidly-decreasing rows: (i, j) weighs j^k at level i."""
    from .symbols import unpair_index

    def log_eval(m, k, j):
        i, col = j if isinstance(j, tuple) else unpair_index(j)
        return k * math.log(col) if i <= m else math.inf

    def log_eval_array(m, k, js):
        rows, cols = _unpair_rows_cols(js)
        return np.where(rows <= m, k * np.log(cols.astype(float)), np.inf)

    return WeightFamily(
        "row-band-power",
        log_eval,
        index_kind="planar",
        log_eval_array=log_eval_array,
        grade_constant=False,
    )


@lru_cache(maxsize=8)
def _snake_row1_runs(window: int) -> tuple[tuple[int, int], ...]:
    """Maximal runs of row-1 orbit positions of the snake symbol, in order."""
    psi = snake_symbol()
    orbit = psi.orbit(window)
    runs = []
    start = None
    for pos, idx in enumerate(orbit, start=1):
        if idx[0] == 1:
            if start is None:
                start = pos
        else:
            if start is not None:
                runs.append((start, pos - start))
                start = None
    if start is not None:
        runs.append((start, window - start + 1))
    return tuple(runs)


def _snake_structure(window: int, grades: bool) -> Structure:
    def thick_runs(m):
        runs = _snake_row1_runs(window + 1)

        def run(q: int) -> tuple[int, int]:
            if q <= len(runs):
                return runs[q - 1]
            return (window + 2, 1)  # out of window: verifier stops here

        return run

    if grades:
        selection = lambda m, k: (m + 1, max(3, k**3))
    else:
        selection = lambda m, k: (m + 1, k)
    return Structure(
        thick_runs=thick_runs,
        continuity_selection=selection,
        continuity_certified=True,
        notes="row-1 visits form thick runs; rows move by at most one per step",
    )


def snake_lp(p=2, lam=2, **over) -> SpaceSpec:
    bounds = over.pop("bounds", ScanBounds())
    return SpaceSpec(
        name="snake-lp",
        family=_row_band_family(),
        p=Exponent(p),
        psi=snake_symbol(),
        lam=lam,
        bounds=bounds,
        structure=_snake_structure(bounds.window, grades=False),
        expectations={"continuity": True, "transitive": True, "hypercyclic": True},
        **over,
    )


def snake_s(lam=2, **over) -> SpaceSpec:
    bounds = over.pop("bounds", ScanBounds())
    return SpaceSpec(
        name="snake-s",
        family=_row_band_power_family(),
        p=Exponent(0),
        psi=snake_symbol(),
        lam=lam,
        bounds=bounds,
        structure=_snake_structure(bounds.window, grades=True),
        expectations={"continuity": True, "transitive": True, "hypercyclic": True},
        **over,
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


GALLERY: dict[str, Callable[..., SpaceSpec]] = {
    "power-dual-linear": power_dual_linear,
    "power-dual-loglog": power_dual_loglog,
    "s-prime": s_prime,
    "sqrt-weighted-s-prime": sqrt_weighted_s_prime,
    "ergodic-not-hypercyclic": ergodic_not_hypercyclic,
    "transitive-not-hypercyclic": transitive_not_hypercyclic,
    "mixing-without-syndeticity": mixing_without_syndeticity,
    "snake-lp": snake_lp,
    "snake-s": snake_s,
}


# compatibility labels accepted wherever a gallery name is expected
ALIASES = {
    "annihilation": "sqrt-weighted-s-prime",
    "prop4-1": "ergodic-not-hypercyclic",
    "prop4-2": "transitive-not-hypercyclic",
    "prop4-3": "mixing-without-syndeticity",
}


_BOUNDS_KEYS = ("window", "levels", "grades", "eps_ts", "truncation", "orbit_bound")


def build(name: str, **over) -> SpaceSpec:
    name = ALIASES.get(name, name)
    try:
        builder = GALLERY[name]
    except KeyError:
        raise KeyError(
            f"unknown gallery entry {name!r}; available: {sorted(GALLERY)}"
        ) from None
    bounds_kw = {k: over.pop(k) for k in _BOUNDS_KEYS if k in over}
    if bounds_kw:
        import dataclasses

        base = over.get("bounds", ScanBounds())
        over["bounds"] = dataclasses.replace(base, **bounds_kw)
    return builder(**over)


def run_expectations(names=None, **over):
    """Classify gallery entries and return their reports, keyed by name."""
    out = {}
    for name in names or sorted(GALLERY):
        spec = build(name, **over)
        out[name] = classify(spec)
    return out
