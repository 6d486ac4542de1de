"""Explicit dynamical witnesses and their replay.

Every constructor returns a :class:`WitnessRecord` carrying both the witness
vector and enough data to re-verify the claimed inequality from scratch.
Constructions run in the transported picture (plain backward shift) and are
mapped back through the conjugacy, so a single construction serves weighted
generalized shifts and scalar multiples alike.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .classifier import _Scan, SpaceSpec
from .conjugacy import Conjugation, apply_generalized_shift, plain_backward_shift
from .indexsets import log_sublevel_members, syndetic_bound
from .vectors import TruncatedVector
from .verdicts import _jsonable
from .weights import WeightFamily

LOG2 = math.log(2.0)


class WitnessError(ValueError):
    """No witness of the requested quality exists within the scan bounds."""


@dataclass
class WitnessRecord:
    kind: str
    spec_name: str
    level: int
    data: dict = field(default_factory=dict)
    vector: Optional[TruncatedVector] = None

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "spec": self.spec_name,
            "level": self.level,
            "data": _jsonable(self.data),
        }
        if self.vector is not None:
            out["vector"] = [
                [list(i) if isinstance(i, tuple) else i, _scalar_json(c)]
                for i, c in self.vector
            ]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _scalar_json(c):
    if isinstance(c, Fraction):
        return {"num": c.numerator, "den": c.denominator}
    if isinstance(c, complex):
        return {"re": c.real, "im": c.imag}
    return c


def _scalar_from_json(c):
    if isinstance(c, dict) and "num" in c:
        return Fraction(c["num"], c["den"])
    if isinstance(c, dict) and "re" in c:
        return complex(c["re"], c["im"])
    return c


def vector_from_json(items) -> TruncatedVector:
    return TruncatedVector(
        {(tuple(i) if isinstance(i, list) else i): _scalar_from_json(c) for i, c in items}
    )


def _conj(spec: SpaceSpec) -> Optional[Conjugation]:
    if spec.is_trivial_transport():
        return None
    return Conjugation(spec.effective_weights, spec.psi, max_enum=spec.bounds.orbit_bound)


def _to_transported(spec: SpaceSpec, x: TruncatedVector, conj) -> TruncatedVector:
    return x if conj is None else conj.forward(x)

def _from_transported(spec: SpaceSpec, X: TruncatedVector, conj) -> TruncatedVector:
    return X if conj is None else conj.inverse(X)


def _block_log_norm(scan: _Scan, m: int, k: int, start: int, coeffs: dict[int, complex], p) -> float:
    """log seminorm of sum_l c_l e_{start+l} in the transported family."""
    terms = []
    for off, c in coeffs.items():
        if c == 0:
            continue
        j = start + off
        lw = float(scan.row(m, k)[j - 1]) if j <= scan.N else float(
            scan.family.log_weights(m, k, np.array([j], dtype=np.int64))[0]
        )
        terms.append(lw + math.log(abs(c)))
    if not terms:
        return -math.inf
    if p.is_sup:
        return max(terms)
    pf = float(p)
    hi = max(terms)
    if hi == math.inf:
        return math.inf
    return hi + math.log(sum(math.exp(pf * (t - hi)) for t in terms)) / pf


# ---------------------------------------------------------------------------
# Transitivity
# ---------------------------------------------------------------------------


def transitivity_witness(
    spec: SpaceSpec,
    x: TruncatedVector,
    y: TruncatedVector,
    level: int = 1,
    log_eps: float = -20 * LOG2,
) -> WitnessRecord:
    """A vector z near x (at the given seminorm level) with B^n z = y exactly.

    In the transported picture z = X + W where W copies Y to a deep block at
    a position where the level-``level`` weights have dipped below eps.
    """
    scan = _Scan(spec)
    conj = _conj(spec)
    X = _to_transported(spec, x, conj)
    Y = _to_transported(spec, y, conj)
    y_coeffs = {int(i) - 1: c for i, c in Y}
    span = (max(y_coeffs) + 1) if y_coeffs else 1
    lo = max((int(i) for i in X.support), default=0) + 1

    best = None
    for j in range(lo, scan.N - span):
        norm = max(
            _block_log_norm(scan, level, k, j + 1, y_coeffs, spec.p)
            for k in range(1, scan.K + 1)
        )
        if norm < log_eps:
            best = (j, norm)
            break
    if best is None:
        raise WitnessError(
            f"no block position below exp({log_eps:.3f}) at level {level} within the window"
        )
    n, norm = best
    W = TruncatedVector({off + n + 1: c for off, c in y_coeffs.items()})
    Z = X + W
    z = _from_transported(spec, Z, conj)
    return WitnessRecord(
        kind="transitivity",
        spec_name=spec.name,
        level=level,
        vector=z,
        data={
            "power": n,
            "log_correction_norm": norm,
            "log_eps": log_eps,
            "x": [[list(i) if isinstance(i, tuple) else i, _scalar_json(c)] for i, c in x],
            "y": [[list(i) if isinstance(i, tuple) else i, _scalar_json(c)] for i, c in y],
        },
    )


def replay_transitivity(spec: SpaceSpec, rec: WitnessRecord, tol: float = 1e-9) -> bool:
    """Re-verify B^n z = y exactly and the correction-norm bound."""
    z = rec.vector
    n = rec.data["power"]
    y = vector_from_json(rec.data["y"])
    x = vector_from_json(rec.data["x"])
    cur = z
    for _ in range(n):
        cur = apply_generalized_shift(spec.effective_weights, spec.psi, cur)
    if not _vectors_close(cur, y, tol):
        return False
    # the correction z - x must still have the recorded small norm
    scan = _Scan(spec)
    conj = _conj(spec)
    D = _to_transported(spec, z - x, conj)
    coeffs = {int(i) - 1: c for i, c in D}
    if coeffs:
        base = min(coeffs)
        coeffs = {o - base: c for o, c in coeffs.items()}
        norm = max(
            _block_log_norm(scan, rec.level, k, base + 1, coeffs, spec.p)
            for k in range(1, scan.K + 1)
        )
        if norm > rec.data["log_eps"] + tol:
            return False
    return True


def _vectors_close(a: TruncatedVector, b: TruncatedVector, tol: float) -> bool:
    for i in a.support | b.support:
        if abs(complex(a[i]) - complex(b[i])) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# Periodic approximants (chaos)
# ---------------------------------------------------------------------------


def periodic_approximant(
    spec: SpaceSpec,
    x: TruncatedVector,
    level: int = 1,
    log_eps: float = -20 * LOG2,
) -> WitnessRecord:
    """A periodic point of B within eps of x at the given level.

    Transported picture: repeat the block of X with period i, choosing i so
    the p-th power tail of the repeated copies is below eps^p.  Requires the
    chaos regime (summable transported weights); raises otherwise.
    """
    if spec.p.is_sup:
        pf = None
    else:
        pf = float(spec.p)
    scan = _Scan(spec)
    conj = _conj(spec)
    X = _to_transported(spec, x, conj)
    coeffs = {int(i) - 1: c for i, c in X}
    span = (max(coeffs) + 1) if coeffs else 1
    trunc = spec.bounds.truncation

    period = None
    for i in range(span, scan.N // 4):
        tail = -math.inf
        for r in range(1, trunc // i + 1):
            blk = max(
                _block_log_norm(scan, level, k, r * i + 1, coeffs, spec.p)
                for k in range(1, scan.K + 1)
            )
            tail = _log_p_add(tail, blk, pf)
        if tail < log_eps:
            period = (i, tail)
            break
    if period is None:
        raise WitnessError("no period with small repeated-copy tail within the window")
    i, tail = period
    copies = trunc // i
    Z = TruncatedVector(
        {off + r * i + 1: c for r in range(copies + 1) for off, c in coeffs.items()}
    )
    z = _from_transported(spec, Z, conj)
    return WitnessRecord(
        kind="periodic-approximant",
        spec_name=spec.name,
        level=level,
        vector=z,
        data={
            "period": i,
            "copies": copies,
            "truncation": trunc,
            "log_tail": tail,
            "log_eps": log_eps,
            "x": [[list(ix) if isinstance(ix, tuple) else ix, _scalar_json(c)] for ix, c in x],
        },
    )


def _log_p_add(a: float, b: float, pf: Optional[float]) -> float:
    if pf is None:
        return max(a, b)
    if b == -math.inf:
        return a
    if a == -math.inf:
        return b
    hi = max(a, b)
    return hi + math.log(math.exp(pf * (a - hi)) + math.exp(pf * (b - hi))) / pf


def replay_periodic(spec: SpaceSpec, rec: WitnessRecord, tol: float = 1e-9) -> bool:
    """B^i z agrees with z on the truncation-safe region, and z is eps-close
    to x on the shared block."""
    z = rec.vector
    i = rec.data["period"]
    cur = z
    for _ in range(i):
        cur = apply_generalized_shift(spec.effective_weights, spec.psi, cur)
    conj = _conj(spec)
    Z = _to_transported(spec, z, conj)
    C = _to_transported(spec, cur, conj)
    safe = rec.data["copies"] * i  # beyond this the truncation bites
    for idx in Z.support | C.support:
        if int(idx) > safe:
            continue
        if abs(complex(Z[idx]) - complex(C[idx])) > tol:
            return False
    x = vector_from_json(rec.data["x"])
    X = _to_transported(spec, x, conj)
    D = Z - X
    return all(int(ix) > i for ix in D.support)


# ---------------------------------------------------------------------------
# Hypercyclic candidates
# ---------------------------------------------------------------------------


def hypercyclic_candidate(
    spec: SpaceSpec,
    targets: list[TruncatedVector],
    level: int = 1,
    log_eps: float = -6 * LOG2,
) -> WitnessRecord:
    """A single vector whose orbit visits every target within eps.

    Transported targets are stacked at positions chosen greedily deep enough
    that each residual block (the later targets seen from an earlier power)
    has small seminorm — the finite prefix of the recursive block schedule
    used to build hypercyclic vectors from a thick vanishing set.
    """
    scan = _Scan(spec)
    conj = _conj(spec)
    T = [_to_transported(spec, y, conj) for y in targets]
    blocks = [{int(i) - 1: c for i, c in Y} for Y in T]
    spans = [(max(b) + 1) if b else 1 for b in blocks]

    positions: list[int] = []
    cursor = 0
    for idx, b in enumerate(blocks):
        placed = None
        j = cursor
        while j < scan.N - spans[idx]:
            # residual: this block, and bound later placement to keep norms small
            norm = max(
                _block_log_norm(scan, level, k, j + 1, b, spec.p)
                for k in range(1, scan.K + 1)
            )
            if idx == 0 or norm < log_eps - LOG2:
                placed = j
                break
            j += 1
        if placed is None:
            raise WitnessError(f"no placement for target {idx} within the window")
        positions.append(placed)
        cursor = placed + spans[idx]

    Z = TruncatedVector(
        {
            off + pos + 1: c
            for pos, b in zip(positions, blocks)
            for off, c in b.items()
        }
    )
    # verify each visit: B^{pos_k} Z equals target_k plus a small residual
    visits = []
    for idx, pos in enumerate(positions):
        shifted = plain_backward_shift(Z, pos)
        resid = shifted - T[idx]
        coeffs = {int(i) - 1: c for i, c in resid}
        if coeffs:
            base = min(coeffs)
            norm = max(
                _block_log_norm(
                    scan, level, k, base + 1, {o - base: c for o, c in coeffs.items()}, spec.p
                )
                for k in range(1, scan.K + 1)
            )
        else:
            norm = -math.inf
        if norm > log_eps:
            raise WitnessError(
                f"residual at visit {idx} has log norm {norm:.3f} > {log_eps:.3f}"
            )
        visits.append({"target": idx, "power": pos, "log_residual": norm})
    z = _from_transported(spec, Z, conj)
    return WitnessRecord(
        kind="hypercyclic-candidate",
        spec_name=spec.name,
        level=level,
        vector=z,
        data={
            "visits": visits,
            "log_eps": log_eps,
            "targets": [
                [[list(ix) if isinstance(ix, tuple) else ix, _scalar_json(c)] for ix, c in y]
                for y in targets
            ],
        },
    )


def replay_hypercyclic(spec: SpaceSpec, rec: WitnessRecord, tol: float = 1e-9) -> bool:
    scan = _Scan(spec)
    conj = _conj(spec)
    z = rec.vector
    targets = [vector_from_json(t) for t in rec.data["targets"]]
    for visit, y in zip(rec.data["visits"], targets):
        cur = z
        for _ in range(visit["power"]):
            cur = apply_generalized_shift(spec.effective_weights, spec.psi, cur)
        R = _to_transported(spec, cur - y, conj)
        coeffs = {int(i) - 1: c for i, c in R}
        if coeffs:
            base = min(coeffs)
            norm = max(
                _block_log_norm(
                    scan, rec.level, k, base + 1, {o - base: c for o, c in coeffs.items()}, spec.p
                )
                for k in range(1, scan.K + 1)
            )
            if norm > rec.data["log_eps"] + tol:
                return False
    return True


# ---------------------------------------------------------------------------
# Return sets (topological ergodicity)
# ---------------------------------------------------------------------------


def return_set(
    spec: SpaceSpec,
    level: int = 1,
    log_eps: float = -10 * LOG2,
) -> WitnessRecord:
    """Return times of the basis neighbourhood: powers n with u^(level)_n < eps.

    In the transported picture these are exactly the powers for which B^n
    carries a unit-mass deep block back into the eps-ball, so a syndetic
    bound on this set witnesses the ergodicity return-time condition.
    """
    scan = _Scan(spec)
    vals = scan.grade_max(level)[: scan.N]
    members = log_sublevel_members(vals, 1, log_eps)
    if members.members.size == 0:
        raise WitnessError("empty return set at this threshold within the window")
    res = syndetic_bound(members)
    return WitnessRecord(
        kind="return-set",
        spec_name=spec.name,
        level=level,
        data={
            "log_eps": log_eps,
            "head": [int(t) for t in members.members[:16]],
            "count": int(members.members.size),
            "syndetic_bound": res.bound,
            "window_bound": res.window_bound,
            "window": scan.N,
        },
    )


def replay_return_set(spec: SpaceSpec, rec: WitnessRecord, tol: float = 1e-9) -> bool:
    scan = _Scan(spec)
    vals = scan.grade_max(rec.level)[: scan.N]
    members = log_sublevel_members(vals, 1, rec.data["log_eps"])
    if [int(t) for t in members.members[:16]] != rec.data["head"]:
        return False
    if int(members.members.size) != rec.data["count"]:
        return False
    res = syndetic_bound(members)
    return res.bound == rec.data["syndetic_bound"]


REPLAYERS = {
    "transitivity": replay_transitivity,
    "periodic-approximant": replay_periodic,
    "hypercyclic-candidate": replay_hypercyclic,
    "return-set": replay_return_set,
}


def replay(spec: SpaceSpec, rec: WitnessRecord, tol: float = 1e-9) -> bool:
    try:
        fn = REPLAYERS[rec.kind]
    except KeyError:
        raise WitnessError(f"unknown witness kind {rec.kind!r}") from None
    return fn(spec, rec, tol)


def record_from_json(payload: dict) -> WitnessRecord:
    rec = WitnessRecord(
        kind=payload["kind"],
        spec_name=payload["spec"],
        level=payload["level"],
        data=payload["data"],
    )
    if "vector" in payload:
        rec.vector = vector_from_json(payload["vector"])
    return rec
