"""Weight-level classification of shift dynamics, with certificates.

Every check first transports the space to the plain backward shift via the
conjugacy, so a single code path covers weighted generalized shifts, scalar
multiples, and the planar direct-sum gradings.  Along the root orbit the
transported log weights are

    log u^(m,k)_j = log v^(m,k)_{chi(j)} - sum_{l<=j} log |lam * w_{chi(l)}|.

Scans are finite; certification happens only when a declared structural fact
(a :class:`Structure` provider, spot-verified on the window) extends the scan
to the tail.  "Certified" therefore always means "certified relative to the
declared structure".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .conjugacy import WeightSequence, conjugate_family, scaled, unit_weights
from .indexsets import IndexWindowSet, log_sublevel_members, syndetic_bound
from .symbols import Symbol, successor_symbol
from .verdicts import (
    Status,
    Verdict,
    certified_fails,
    certified_holds,
    empirical,
    undecided,
)
from .weights import Exponent, WeightFamily

LOG2 = math.log(2.0)
INF = math.inf

PROPERTIES = (
    "continuity",
    "transitive",
    "hypercyclic",
    "mixing",
    "chaotic",
    "ergodic_sufficient",
)

# implications among certified verdicts (antecedent holds => consequent holds)
IMPLICATIONS = (
    ("chaotic", "mixing"),
    ("mixing", "hypercyclic"),
    ("hypercyclic", "transitive"),
    ("ergodic_sufficient", "transitive"),
)


class InternalInconsistencyError(RuntimeError):
    """Certified verdicts violating the implication lattice."""


# ---------------------------------------------------------------------------
# Structure: declared facts about the transported weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SublevelCertificate:
    """Generator description of {j : u^(m,k)_j < eps} with a gap bound."""

    gap: int
    member: Callable[[int], bool]
    start: int = 1
    note: str = ""


@dataclass(frozen=True)
class RunBoundCertificate:
    """All sublevel runs below exp(log_eps) have length <= bound beyond start."""

    log_eps: float
    bound: int
    start: int = 1
    note: str = ""


@dataclass(frozen=True)
class MixingRefutation:
    """An infinite generator set on which u^(m) >= eps_m for every level."""

    member: Callable[[int], bool]
    log_eps: Callable[[int], float]
    note: str = ""


@dataclass(frozen=True)
class ColumnDichotomy:
    """Mixing witness shaped like the block-scheduled separating example:
    every infinite set either stays in finitely many columns (per-column
    levels vanish) or meets infinitely many (cross-column bound vanishes)."""

    column_of: Callable[[int], int]
    level_for_column: Callable[[int], int]
    cross_level: int
    cross_log_bound: Callable[[int], float]
    note: str = ""


@dataclass(frozen=True)
class DivergenceCertificate:
    """Lower bound forcing sum_j u_j^p (or a c0 violation for p=0) to diverge."""

    log_term_lb: Callable[[float], float]  # decreasing log lower bound on u^p terms
    member: Optional[Callable[[int], bool]] = None  # None = all indices
    member_count: Optional[Callable[[int], int]] = None  # |member cap [start, N]|
    start: int = 1
    note: str = ""


@dataclass(frozen=True)
class Structure:
    """Declared structural facts about transported weights u^(m,k)_j.

    Every provider may return None when it has nothing to say for the given
    arguments.  ``level_exhaustive`` asserts that per-level negative facts
    follow the same pattern for every level beyond the scan bound.
    """

    limit_zero: Optional[Callable[[int, int], bool]] = None
    tail_monotone_start: Optional[Callable[[int, int], Optional[int]]] = None
    level_lower_log_bound: Optional[Callable[[int], Optional[float]]] = None
    level_exhaustive: bool = False
    vanishing_subsequence: Optional[Callable[[int], Optional[Callable[[int], int]]]] = None
    sublevel: Optional[Callable[[int, int, float], Optional[SublevelCertificate]]] = None
    high_weight_intervals: Optional[
        Callable[[int, float, int], Optional[list[tuple[int, int]]]]
    ] = None
    run_bound: Optional[Callable[[int], Optional[RunBoundCertificate]]] = None
    thick_runs: Optional[Callable[[int], Optional[Callable[[int], tuple[int, int]]]]] = None
    mixing_refutation: Optional[MixingRefutation] = None
    mixing_dichotomy: Optional[ColumnDichotomy] = None
    summable_tail: Optional[Callable[[int, int, float], Optional[Callable[[int], float]]]] = None
    divergence: Optional[Callable[[int, float], Optional[DivergenceCertificate]]] = None
    continuity_selection: Optional[Callable[[int, int], Optional[tuple[int, int]]]] = None
    continuity_certified: bool = False
    notes: str = ""


@dataclass(frozen=True)
class ScanBounds:
    window: int = 1 << 16
    levels: int = 8
    grades: int = 8
    eps_ts: tuple[int, ...] = tuple(range(1, 41))  # thresholds 2^-t
    truncation: int = 4096
    orbit_bound: int = 1 << 20

    def __post_init__(self) -> None:
        if min(self.window, self.levels, self.grades, self.truncation) < 1:
            raise ValueError("bounds must be positive")


@dataclass
class SpaceSpec:
    """A coechelon-type space together with the operator acting on it."""

    name: str
    family: WeightFamily
    p: Exponent
    w: WeightSequence = field(default_factory=unit_weights)
    psi: Symbol = field(default_factory=successor_symbol)
    lam: complex | float | int = 1
    bounds: ScanBounds = field(default_factory=ScanBounds)
    structure: Structure = field(default_factory=Structure)
    expectations: Optional[dict[str, bool]] = None

    def __post_init__(self) -> None:
        if self.lam == 0:
            raise ValueError("scalar multiplier must be nonzero")

    @property
    def effective_weights(self) -> WeightSequence:
        return scaled(self.w, self.lam)

    def is_trivial_transport(self) -> bool:
        return (
            self.w.name == "unit"
            and self.lam == 1
            and self.psi.name == "successor"
            and self.family.index_kind == "linear"
        )

    def transported(self) -> WeightFamily:
        if self.is_trivial_transport():
            return self.family
        return conjugate_family(
            self.family, self.effective_weights, self.psi, max_enum=self.bounds.orbit_bound
        )

    def with_bounds(self, **kw) -> "SpaceSpec":
        return replace(self, bounds=replace(self.bounds, **kw))


class _Scan:
    """Cached transported log-weight arrays over the scan window."""

    def __init__(self, spec: SpaceSpec):
        self.spec = spec
        self.family = spec.transported()
        self.N = spec.bounds.window
        self.M = spec.bounds.levels
        self.K = 1 if spec.family.grade_constant else spec.bounds.grades
        self._rows: dict[tuple[int, int], np.ndarray] = {}
        self._js = np.arange(1, self.N + 2, dtype=np.int64)  # +1 pad for the shift

    def row(self, m: int, k: int = 1) -> np.ndarray:
        """log u^(m,k)_j for j = 1..N+1."""
        key = (m, k)
        if key not in self._rows:
            self._rows[key] = self.family.log_weights(m, k, self._js)
        return self._rows[key]

    def grade_max(self, m: int) -> np.ndarray:
        """max over scanned grades (the graded conditions quantify over all k)."""
        return np.max([self.row(m, k) for k in range(1, self.K + 1)], axis=0)


def _stable(full: float, half: float, tol: float = 1e-9) -> bool:
    return full <= half + tol


def _dip_floor(spec: SpaceSpec, scan: _Scan) -> float:
    """Log threshold a finite window can reasonably be asked to dip under.

    Slowly vanishing families cannot reach the full epsilon grid inside the
    window, so the requirement scales with the window size (capped by the
    configured grid).
    """
    t = min(spec.bounds.eps_ts[-1], max(8, (3 * int(math.log2(scan.N))) // 4))
    return -t * LOG2


def _finite_max(values: np.ndarray) -> float:
    """Max of a difference array where -inf entries are vacuous.

    +inf entries are genuine violations and propagate.
    """
    vals = values[values > -INF]
    if vals.size == 0:
        return -INF
    return float(np.max(vals))


# ---------------------------------------------------------------------------
# Continuity
# ---------------------------------------------------------------------------


def check_continuity(spec: SpaceSpec, scan: Optional[_Scan] = None) -> Verdict:
    """For every level m find n and C with u^(n,k)_j <= C u^(m,l)_{j+1}.

    This is the plain-shift continuity condition on the transported family,
    equivalent to the weighted-generalized condition on the original data.
    The verdict does not depend on the exponent p.
    """
    scan = scan or _Scan(spec)
    M, K, N = scan.M, scan.K, scan.N
    st = spec.structure
    half = N // 2
    selections = []
    # searching n <= M leaves the top level without headroom; the verdict is
    # drawn from m <= M-1 and the boundary level is reported, not judged
    top = max(M - 1, 1)
    for m in range(1, top + 1):
        for k in range(1, K + 1):
            chosen = None
            candidates: list[tuple[int, int]] = []
            if st.continuity_selection is not None:
                sel = st.continuity_selection(m, k)
                if sel is not None:
                    candidates.append(sel)
            candidates += [(n, l) for n in range(m, M + 1) for l in range(k, K + 1)]
            if K > 1:
                candidates.append((min(m + 1, M), max(3, k**3)))
            for n, l in candidates:
                if n > M:
                    continue
                with np.errstate(invalid="ignore"):
                    diff = scan.row(n, k)[:N] - scan.row(m, l)[1 : N + 1]
                # forbidden target coordinates make the inequality vacuous
                diff = np.where(np.isinf(scan.row(m, l)[1 : N + 1]), -INF, diff)
                d_full = _finite_max(diff)
                if d_full == INF:
                    continue
                d_half = _finite_max(diff[:half])
                if _stable(d_full, d_half):
                    chosen = (n, l, max(d_full, 0.0))
                    break
            if chosen is None:
                return undecided(
                    reason="no stable (n, l, C) found on the window",
                    level=m,
                    grade=k,
                    window=N,
                )
            selections.append({"m": m, "k": k, "n": chosen[0], "l": chosen[1], "log_C": chosen[2]})
    cert = {"selections": selections, "window": N, "top_level_scanned": top}
    if st.continuity_certified and st.continuity_selection is not None:
        cert["hint"] = "declared continuity selection, verified on window"
        return certified_holds(**cert)
    return empirical(**cert)


# ---------------------------------------------------------------------------
# Transitivity
# ---------------------------------------------------------------------------


def check_transitive(spec: SpaceSpec, scan: Optional[_Scan] = None) -> Verdict:
    """Some level's transported weights have liminf 0 along the orbit."""
    scan = scan or _Scan(spec)
    st = spec.structure
    floor = _dip_floor(spec, scan)
    best = None
    for m in range(1, scan.M + 1):
        vals = scan.grade_max(m)[: scan.N]
        finite = vals[np.isfinite(vals)]
        if finite.size == 0:
            continue
        mn = float(np.min(finite))
        if best is None or mn < best[1]:
            j_min = int(np.argmin(np.where(np.isfinite(vals), vals, INF))) + 1
            best = (m, mn, j_min)
    if best is not None and best[1] < floor:
        m, mn, j_min = best
        cert = {"level": m, "min_log_weight": mn, "witness_index": j_min, "window": scan.N}
        if st.limit_zero is not None and all(
            st.limit_zero(m, k) for k in range(1, scan.K + 1)
        ):
            cert["hint"] = "limit-zero"
            return certified_holds(**cert)
        if st.vanishing_subsequence is not None:
            sub = st.vanishing_subsequence(m)
            if sub is not None and _verify_vanishing(scan, m, sub, floor):
                cert["hint"] = "vanishing-subsequence"
                cert["subsequence_head"] = [sub(t) for t in range(1, 9)]
                return certified_holds(**cert)
        return empirical(**cert)
    if (
        st.level_lower_log_bound is not None
        and st.level_exhaustive
        and all(st.level_lower_log_bound(m) is not None for m in range(1, scan.M + 1))
    ):
        bounds = {}
        for m in range(1, scan.M + 1):
            lb = st.level_lower_log_bound(m)
            vals = scan.grade_max(m)[: scan.N]
            finite = vals[np.isfinite(vals)]
            if finite.size and float(np.min(finite)) < lb - 1e-9:
                return undecided(reason="declared level lower bound contradicted on window", level=m)
            bounds[m] = lb
        return certified_fails(
            reason="transported weights bounded below on every level",
            log_lower_bounds=bounds,
            hint="level-lower-bound + level-exhaustive",
        )
    return undecided(reason="no dip below the threshold grid", window=scan.N, best=best)


def _verify_vanishing(scan: _Scan, m: int, sub: Callable[[int], int], floor: float) -> bool:
    js = []
    t = 1
    while True:
        j = sub(t)
        if j > scan.N:
            break
        js.append(j)
        t += 1
    if len(js) < 4:
        return False
    vals = scan.grade_max(m)[np.array(js, dtype=np.int64) - 1]
    # nonincreasing along the declared subsequence, with a clear overall drop
    return bool(np.all(np.diff(vals) <= 1e-9) and vals[-1] <= vals[0] - 5 * LOG2)


# ---------------------------------------------------------------------------
# Hypercyclicity
# ---------------------------------------------------------------------------


def check_hypercyclic(spec: SpaceSpec, scan: Optional[_Scan] = None) -> Verdict:
    """Some level admits a thick set along which transported weights vanish
    (simultaneously for every grade, in graded mode)."""
    scan = scan or _Scan(spec)
    st = spec.structure
    floor = -spec.bounds.eps_ts[-1] * LOG2

    # certified positive: whole-sequence limit zero (I = N is thick)
    if st.limit_zero is not None:
        for m in range(1, scan.M + 1):
            if all(st.limit_zero(m, k) for k in range(1, scan.K + 1)):
                return certified_holds(
                    level=m, thick_set="all indices", hint="limit-zero", window=scan.N
                )

    # certified positive: declared thick runs with vanishing sups
    if st.thick_runs is not None:
        for m in range(1, scan.M + 1):
            runs = st.thick_runs(m)
            if runs is None:
                continue
            ok, payload = _verify_thick_runs(scan, m, runs)
            if ok:
                return certified_holds(level=m, hint="thick-runs", **payload)

    # certified negative: per-level run bounds
    if st.run_bound is not None and st.level_exhaustive:
        certs = []
        for m in range(1, scan.M + 1):
            rb = st.run_bound(m)
            if rb is None:
                certs = []
                break
            vals = scan.grade_max(m)[: scan.N]
            members = log_sublevel_members(vals[rb.start - 1 :], rb.start, rb.log_eps)
            run, start = _kernels.longest_run(members.members), None
            if run[0] > rb.bound:
                return undecided(
                    reason="declared run bound contradicted on window",
                    level=m,
                    run=run[0],
                    at=run[1],
                )
            certs.append(
                {"m": m, "log_eps": rb.log_eps, "bound": rb.bound, "observed_run": run[0]}
            )
        if certs:
            return certified_fails(
                reason="sublevel runs bounded on every level",
                per_level=certs,
                hint="run-bound + level-exhaustive",
                window=scan.N,
            )

    # empirical: run growth of sublevel sets across nested windows
    for m in range(1, scan.M + 1):
        vals = scan.grade_max(m)[: scan.N]
        finite = vals[np.isfinite(vals)]
        if finite.size == 0:
            continue
        t_max = min(int(-np.min(finite) / LOG2), spec.bounds.eps_ts[-1])
        if t_max < 2:
            continue
        growing = True
        profile = []
        for t in (max(1, t_max // 2), t_max - 1):
            runs = []
            for frac in (4, 2, 1):
                n = scan.N // frac
                members = log_sublevel_members(vals[:n], 1, -t * LOG2)
                runs.append(_kernels.longest_run(members.members)[0])
            profile.append({"t": t, "runs": runs})
            if not (runs[0] < runs[2] and runs[1] <= runs[2]):
                growing = False
                break
        if growing and profile:
            return empirical(level=m, run_profile=profile, window=scan.N)
    return undecided(reason="no growing sublevel runs found", window=scan.N)


def _verify_thick_runs(scan: _Scan, m: int, runs: Callable[[int], tuple[int, int]]):
    lengths = []
    sups = {k: [] for k in range(1, scan.K + 1)}
    q = 1
    head = []
    while True:
        start, length = runs(q)
        if start + length - 1 > scan.N:
            break
        if q <= 8:
            head.append({"q": q, "start": start, "length": length})
        lengths.append(length)
        for k in range(1, scan.K + 1):
            seg = scan.row(m, k)[start - 1 : start + length - 1]
            sups[k].append(float(np.max(seg)))
        q += 1
    if len(lengths) < 4 or not all(b > a for a, b in zip(lengths, lengths[1:])):
        return False, {}
    for k, s in sups.items():
        # sups along successive runs must vanish: strictly dropping tail
        tail = s[len(s) // 2 :]
        if not all(b < a + 1e-9 for a, b in zip(tail, tail[1:])) or tail[-1] > -2 * LOG2:
            return False, {}
    return True, {
        "runs_head": head,
        "runs_verified": len(lengths),
        "final_run_sup": {k: s[-1] for k, s in sups.items()},
        "window": scan.N,
    }


# ---------------------------------------------------------------------------
# Mixing
# ---------------------------------------------------------------------------


def check_mixing(spec: SpaceSpec, scan: Optional[_Scan] = None) -> Verdict:
    """Every infinite index set must see liminf 0 at some level."""
    scan = scan or _Scan(spec)
    st = spec.structure
    floor = _dip_floor(spec, scan)

    if st.limit_zero is not None:
        for m in range(1, scan.M + 1):
            if all(st.limit_zero(m, k) for k in range(1, scan.K + 1)):
                return certified_holds(
                    level=m,
                    hint="limit-zero",
                    note="a single vanishing level dominates every infinite subset",
                )

    if st.mixing_dichotomy is not None:
        ok, payload = _verify_dichotomy(scan, st.mixing_dichotomy)
        if ok:
            return certified_holds(hint="column-dichotomy", **payload)

    if st.mixing_refutation is not None:
        ref = st.mixing_refutation
        js = np.arange(1, scan.N + 1, dtype=np.int64)
        members = np.array([j for j in js if ref.member(int(j))], dtype=np.int64)
        if members.size:
            eps = {}
            for m in range(1, scan.M + 1):
                lb = ref.log_eps(m)
                vals = scan.grade_max(m)[members - 1]
                if float(np.min(vals)) < lb - 1e-9:
                    return undecided(
                        reason="mixing refutation contradicted on window", level=m
                    )
                eps[m] = lb
            if st.level_exhaustive:
                return certified_fails(
                    reason="weights bounded below along a declared infinite set",
                    members_head=[int(x) for x in members[:8]],
                    log_eps_by_level=eps,
                    hint="refutation-set + level-exhaustive",
                    note=ref.note,
                )

    # probe library: evidence only
    probes = {
        "dyadic": [1 << t for t in range(1, 17)],
        "odds": list(range(1, scan.N, 2))[:4096],
        "squares": [t * t for t in range(1, 257)],
        "ap-3": list(range(3, scan.N, 3))[:4096],
    }
    # indices forbidden at every scanned level form their own probe: along
    # them no scanned level can vanish, which is decisive evidence against
    all_forbidden = np.ones(scan.N, dtype=bool)
    for m in range(1, scan.M + 1):
        all_forbidden &= ~np.isfinite(scan.grade_max(m)[: scan.N])
    forbidden_idx = np.where(all_forbidden)[0] + 1
    if forbidden_idx.size >= 16:
        probes["scanned-forbidden"] = [int(j) for j in forbidden_idx]
    results = {}
    for name, idxs in probes.items():
        idxs = [j for j in idxs if j <= scan.N]
        arr = np.array(idxs, dtype=np.int64) - 1
        best = INF
        for m in range(1, scan.M + 1):
            vals = scan.grade_max(m)[arr]
            finite = vals[np.isfinite(vals)]
            if finite.size:
                best = min(best, float(np.min(finite)))
        results[name] = best
        if best > floor / 2:
            return undecided(
                reason="probe subsequence stays bounded below on all scanned levels",
                probe=name,
                min_log_weight=best,
            )
    return empirical(probes=results, window=scan.N)


def _verify_dichotomy(scan: _Scan, d: ColumnDichotomy):
    js = np.arange(1, scan.N + 1, dtype=np.int64)
    cols = np.array([d.column_of(int(j)) for j in js], dtype=np.int64)
    cross = np.array([d.cross_log_bound(int(j)) for j in js])
    vals = scan.grade_max(d.cross_level)[: scan.N]
    if np.any(vals > cross + 1e-9):
        return False, {}
    per_col = []
    for c in range(1, 5):
        m = d.level_for_column(c)
        if m > scan.M:
            continue
        members = js[cols == c]
        if members.size < 4:
            continue
        seq = scan.grade_max(m)[members - 1]
        # the column tail must vanish at its declared level
        half = seq[seq.size // 2 :]
        if float(np.min(half)) > float(np.min(seq[: seq.size // 2])) - LOG2:
            return False, {}
        per_col.append({"column": c, "level": m, "tail_min": float(np.min(half))})
    if not per_col:
        return False, {}
    return True, {
        "cross_level": d.cross_level,
        "columns_checked": per_col,
        "note": d.note,
        "window": scan.N,
    }


# ---------------------------------------------------------------------------
# Chaos
# ---------------------------------------------------------------------------


def check_chaotic(spec: SpaceSpec, scan: Optional[_Scan] = None) -> Verdict:
    """Some level's transported weights lie in l_p (c_0 for the sup case)."""
    scan = scan or _Scan(spec)
    st = spec.structure
    p = spec.p
    floor = -spec.bounds.eps_ts[-1] * LOG2

    if p.is_sup:
        if st.limit_zero is not None:
            for m in range(1, scan.M + 1):
                if all(st.limit_zero(m, k) for k in range(1, scan.K + 1)):
                    return certified_holds(level=m, hint="limit-zero", case="c0")
        verdict = _chaos_divergence(spec, scan)
        if verdict is not None:
            return verdict
        return undecided(reason="c0 membership not settled", window=scan.N)

    pf = float(p)
    diagnostics = []
    for m in range(1, scan.M + 1):
        vals = scan.grade_max(m)[: scan.N]
        if np.any(np.isinf(vals)):
            continue
        log_terms = pf * vals
        hi = float(np.max(log_terms))
        log_partial = hi + math.log(float(np.sum(np.exp(log_terms - hi))))
        diagnostics.append({"m": m, "log_partial_sum": log_partial})
        if st.summable_tail is not None:
            bound = st.summable_tail(m, 1, pf)
            if bound is not None:
                tail = bound(scan.N)
                first_omitted = pf * float(scan.row(m, 1)[scan.N])
                if tail < first_omitted - 1e-9:
                    return undecided(
                        reason="declared tail bound below the first omitted term", level=m
                    )
                checkpoints = [scan.N // 4, scan.N // 2, scan.N]
                if not all(
                    bound(a) >= bound(b) - 1e-9 for a, b in zip(checkpoints, checkpoints[1:])
                ):
                    return undecided(reason="declared tail bound not decreasing", level=m)
                return certified_holds(
                    level=m,
                    p=pf,
                    log_partial_sum=log_partial,
                    log_tail_bound=tail,
                    partial_sum_table=_partial_sum_table(spec, scan, pf),
                    hint="summable-tail-bound",
                    window=scan.N,
                )
    verdict = _chaos_divergence(spec, scan)
    if verdict is not None:
        return verdict
    return undecided(partial_sums=diagnostics, window=scan.N)


def _partial_sum_table(spec: SpaceSpec, scan: _Scan, pf: float, levels: int = 4) -> list[dict]:
    """Per-level partial sums (with tail bounds where declared) at nested
    checkpoints; the checkpoints let a reader confirm monotone growth."""
    st = spec.structure
    table = []
    for m in range(1, min(levels, scan.M) + 1):
        vals = scan.row(m, 1)[: scan.N]
        if np.any(np.isinf(vals)):
            continue
        log_terms = pf * vals
        hi = float(np.max(log_terms))
        entry = {"m": m}
        partials = []
        for n in (scan.N // 4, scan.N // 2, scan.N):
            partials.append(hi + math.log(float(np.sum(np.exp(log_terms[:n] - hi)))))
        entry["log_partial_sums"] = partials
        if st.summable_tail is not None:
            bound = st.summable_tail(m, 1, pf)
            if bound is not None:
                entry["log_tail_bound"] = bound(scan.N)
        table.append(entry)
    return table


def _chaos_divergence(spec: SpaceSpec, scan: _Scan) -> Optional[Verdict]:
    st = spec.structure
    if st.divergence is None or not st.level_exhaustive:
        return None
    pf = float(spec.p)
    per_level = []
    for m in range(1, scan.M + 1):
        cert = st.divergence(m, pf)
        if cert is None:
            return None
        # spot-verify the lower bound against actual terms on the window
        js = np.arange(cert.start, scan.N + 1, dtype=np.int64)
        if cert.member is not None:
            js = np.array([j for j in js if cert.member(int(j))], dtype=np.int64)
        if js.size == 0:
            return None
        sample = js[:: max(1, js.size // 512)]
        actual = pf * scan.grade_max(m)[sample - 1] if pf else scan.grade_max(m)[sample - 1]
        lbs = np.array([cert.log_term_lb(float(j)) for j in sample])
        if np.any(actual < lbs - 1e-9):
            return None
        if spec.p.is_sup:
            # c0 refutation: terms bounded below along the member set
            if lbs[-1] == -INF:
                return None
            per_level.append({"m": m, "log_lb_tail": float(lbs[-1]), "note": cert.note})
        else:
            # the partial sum over members up to N is at least
            # count(N) * exp(lb(N)); certify when that floor strictly grows
            # along doubling checkpoints (with lb decreasing, growth persists)
            count = cert.member_count or (lambda N: N - cert.start + 1)
            # checkpoints grow by squaring: log-count gains dominate any
            # slowly-decreasing term bound there, so the floor must rise
            checkpoints = [scan.N, scan.N**2, scan.N**4, scan.N**8]
            floors = []
            for n in checkpoints:
                c = count(n)
                if c < 1:
                    return None
                floors.append(math.log(c) + cert.log_term_lb(float(n)))
            if not all(b > a for a, b in zip(floors, floors[1:])):
                return None
            # window N*(B) past which the partial-sum floor exceeds B
            crossings = {}
            for B in (10.0, 100.0, 1000.0):
                n = scan.N
                log_B = math.log(B)
                while n < 10**290:
                    c = count(n)
                    if c >= 1 and math.log(c) + cert.log_term_lb(float(n)) >= log_B:
                        break
                    n *= 2
                else:
                    return None
                crossings[f"B={int(B)}"] = n
            per_level.append(
                {
                    "m": m,
                    "log_partial_sum_floors": dict(zip(checkpoints, floors)),
                    "crossing_windows": crossings,
                    "note": cert.note,
                }
            )
    reason = (
        "weights stay bounded below along a declared set (not c0)"
        if spec.p.is_sup
        else "partial sums exceed every bound by the declared comparison"
    )
    return certified_fails(
        reason=reason,
        per_level=per_level,
        hint="divergence-bound + level-exhaustive",
        window=scan.N,
    )


# ---------------------------------------------------------------------------
# Topological ergodicity (sufficient condition)
# ---------------------------------------------------------------------------


def check_ergodic_sufficient(spec: SpaceSpec, scan: Optional[_Scan] = None) -> Verdict:
    """Some level's sublevel sets are syndetic for every threshold.

    This is a sufficient condition for topological ergodicity; its failure
    refutes only the condition, never ergodicity itself, and the verdict says
    so.
    """
    scan = scan or _Scan(spec)
    st = spec.structure

    for m in range(1, scan.M + 1):
        # cofinite route: monotone vanishing tail makes every sublevel cofinite
        if (
            st.limit_zero is not None
            and st.tail_monotone_start is not None
            and all(st.limit_zero(m, k) for k in range(1, scan.K + 1))
        ):
            starts = [st.tail_monotone_start(m, k) for k in range(1, scan.K + 1)]
            if all(s is not None for s in starts):
                gaps = _cofinite_gap_table(spec, scan, m)
                if gaps is not None:
                    return certified_holds(
                        level=m,
                        gap_by_threshold=gaps,
                        hint="limit-zero + tail-monotone (cofinite sublevels)",
                        window=scan.N,
                    )
        # generator route: verify every threshold whose gap fits the window,
        # record the declared gap for the rest
        if st.sublevel is not None:
            table = {}
            ok = True
            verified = 0
            for t in spec.bounds.eps_ts:
                cert = st.sublevel(m, 1, -t * LOG2)
                if cert is None:
                    ok = False
                    break
                if 2 * cert.gap <= scan.N:
                    if not _verify_sublevel_cert(scan, m, -t * LOG2, cert):
                        ok = False
                        break
                    verified += 1
                    table[f"2^-{t}"] = cert.gap
                else:
                    table[f"2^-{t}"] = f"{cert.gap} (declared, beyond window)"
            if ok and verified >= 4:
                return certified_holds(
                    level=m,
                    gap_by_threshold=table,
                    thresholds_verified=verified,
                    hint="sublevel-generator",
                    window=scan.N,
                )

    if st.high_weight_intervals is not None and st.level_exhaustive:
        per_level = []
        for m in range(1, scan.M + 1):
            log_eps = _high_weight_threshold(st, m)
            intervals = st.high_weight_intervals(m, log_eps, scan.N)
            if not intervals:
                per_level = []
                break
            vals = scan.grade_max(m)[: scan.N]
            for lo, hi in intervals:
                seg = vals[lo - 1 : hi]
                if float(np.min(seg)) <= log_eps + 1e-12:
                    return undecided(
                        reason="declared high-weight interval contradicted",
                        level=m,
                        interval=[lo, hi],
                    )
            lengths = [hi - lo + 1 for lo, hi in intervals]
            half_lengths = [hi - lo + 1 for lo, hi in intervals if hi <= scan.N // 2]
            if half_lengths and max(lengths) <= max(half_lengths):
                return undecided(reason="interval lengths not growing with window", level=m)
            per_level.append({"m": m, "log_eps": log_eps, "max_length": max(lengths)})
        if per_level:
            return certified_fails(
                reason="arbitrarily long high-weight intervals on every level",
                per_level=per_level,
                hint="high-weight-intervals + level-exhaustive",
                scope="sufficient-condition only",
                window=scan.N,
            )

    # empirical: stable syndetic bounds across growing windows
    for m in range(1, scan.M + 1):
        vals = scan.grade_max(m)[: scan.N]
        finite = vals[np.isfinite(vals)]
        if finite.size == 0:
            continue
        t_max = min(int(-np.min(finite) / LOG2) - 1, spec.bounds.eps_ts[-1])
        if t_max < 2:
            continue
        table = {}
        stable_all = True
        for t in range(1, t_max + 1):
            members_full = log_sublevel_members(vals, 1, -t * LOG2)
            res_full = syndetic_bound(members_full)
            res_half = syndetic_bound(members_full.restrict(1, scan.N // 2))
            if res_full.bound is None or res_half.bound is None:
                stable_all = False
                break
            if res_full.bound > res_half.bound:
                stable_all = False
                break
            table[t] = res_full.bound
        if stable_all and table:
            return empirical(
                level=m,
                gap_by_threshold={f"2^-{t}": g for t, g in table.items()},
                window=scan.N,
                note="stable syndetic bounds on nested windows",
            )
    return undecided(reason="no level with stable syndetic sublevels", window=scan.N)


def _high_weight_threshold(st: Structure, m: int) -> float:
    # threshold strictly inside the declared high-weight regime
    return -m * math.log(max(m, 2)) - 1.0


def _cofinite_gap_table(spec: SpaceSpec, scan: _Scan, m: int) -> Optional[dict]:
    vals = scan.grade_max(m)[: scan.N]
    gaps = {}
    for t in spec.bounds.eps_ts:
        idx = np.where(vals < -t * LOG2)[0]
        if idx.size == 0:
            gaps[f"2^-{t}"] = "beyond-window (exists by limit-zero hint)"
            continue
        j0 = int(idx[0]) + 1
        if np.any(vals[idx[0] :] >= -t * LOG2):
            return None  # tail not actually below the threshold: not cofinite here
        gaps[f"2^-{t}"] = j0
    return gaps


def _verify_sublevel_cert(scan: _Scan, m: int, log_eps: float, cert: SublevelCertificate) -> bool:
    vals = scan.grade_max(m)[: scan.N]
    js = np.arange(cert.start, scan.N + 1, dtype=np.int64)
    claimed = np.array([cert.member(int(j)) for j in js])
    actual = vals[js - 1] < log_eps
    if not np.array_equal(claimed, actual):
        return False
    members = js[claimed]
    if members.size == 0:
        return False
    res = syndetic_bound(IndexWindowSet(cert.start, scan.N, members))
    return res.window_bound is not None and res.window_bound <= cert.gap


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------


CHECKS = {
    "continuity": check_continuity,
    "transitive": check_transitive,
    "hypercyclic": check_hypercyclic,
    "mixing": check_mixing,
    "chaotic": check_chaotic,
    "ergodic_sufficient": check_ergodic_sufficient,
}


@dataclass
class Report:
    name: str
    verdicts: dict[str, Verdict]
    consistent: bool
    expectation_diff: Optional[dict[str, dict]] = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "name": self.name,
            "properties": {k: v.to_json() for k, v in self.verdicts.items()},
            "consistent": self.consistent,
            "provenance": self.provenance,
        }
        if self.expectation_diff is not None:
            out["expectations_matched"] = not self.expectation_diff
            out["expectation_diff"] = self.expectation_diff
        return out

    def to_markdown(self) -> str:
        lines = [f"# {self.name}", "", "| property | status |", "| --- | --- |"]
        for k, v in self.verdicts.items():
            lines.append(f"| {k} | {v.status.value} |")
        lines.append("")
        lines.append(f"Implication lattice consistent: {self.consistent}.")
        if self.expectation_diff is not None:
            if self.expectation_diff:
                lines.append(f"Expectation mismatches: {sorted(self.expectation_diff)}.")
            else:
                lines.append("All recorded expectations matched.")
        return "\n".join(lines)

    @property
    def has_undecided(self) -> bool:
        return any(v.status is Status.UNDECIDED for v in self.verdicts.values())


def lattice_violations(verdicts: dict[str, Verdict]) -> list[tuple[str, str]]:
    bad = []
    for a, b in IMPLICATIONS:
        va, vb = verdicts.get(a), verdicts.get(b)
        if va is None or vb is None:
            continue
        if va.status is Status.CERTIFIED_HOLDS and vb.status is Status.CERTIFIED_FAILS:
            bad.append((a, b))
    return bad


def propagate(verdicts: dict[str, Verdict]) -> dict[str, Verdict]:
    """Close certified verdicts under the implication lattice.

    A certified antecedent forces its consequent; a certified-failed
    consequent refutes its antecedent.  Conflicting direct certificates are
    left in place for :func:`lattice_violations` to flag.
    """
    out = dict(verdicts)
    changed = True
    while changed:
        changed = False
        for a, b in IMPLICATIONS:
            va, vb = out[a], out[b]
            if va.status is Status.CERTIFIED_HOLDS and not vb.status.certified:
                out[b] = certified_holds(
                    implied_by=a, implication=f"{a} => {b}", direct=vb.to_json()
                )
                changed = True
            elif vb.status is Status.CERTIFIED_FAILS and not va.status.certified:
                out[a] = certified_fails(
                    implied_by=b, implication=f"{a} => {b}", direct=va.to_json()
                )
                changed = True
    return out


def classify(spec: SpaceSpec) -> Report:
    """Run all checks, assert lattice consistency, diff against expectations."""
    scan = _Scan(spec)
    verdicts = {name: check(spec, scan) for name, check in CHECKS.items()}
    violations = lattice_violations(verdicts)
    if not violations:
        verdicts = propagate(verdicts)
        violations = lattice_violations(verdicts)
    if violations:
        raise InternalInconsistencyError(
            f"certified verdicts violate implications {violations} for {spec.name}"
        )
    diff = None
    if spec.expectations is not None:
        diff = {}
        for prop, expected in spec.expectations.items():
            v = verdicts[prop]
            if v.positive != expected or v.status is Status.UNDECIDED:
                diff[prop] = {
                    "expected_positive": expected,
                    "status": v.status.value,
                }
    return Report(
        name=spec.name,
        verdicts=verdicts,
        consistent=not violations,
        expectation_diff=diff,
        provenance={
            "window": spec.bounds.window,
            "levels": spec.bounds.levels,
            "grades": scan.K,
            "symbol": spec.psi.name,
            "weights": spec.w.name,
            "lambda": repr(spec.lam),
            "structure_notes": spec.structure.notes,
        },
    )
