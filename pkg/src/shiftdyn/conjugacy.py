"""The weighted generalized backward shift and its conjugacy to the plain shift.

B_{w,psi} x = (w_{psi(j)} x_{psi(j)})_j.  The coordinate isomorphism
T x = ((prod_{l<=j} w_{chi(l)}) x_{chi(j)})_j satisfies T^{-1} B T = B_{w,psi},
which reduces every dynamical question about B_{w,psi} to the plain backward
shift with transported weights v_{chi(j)} / prod_{l<=j} |w_{chi(l)}|.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .symbols import Symbol, pair_index
from .vectors import Index, Scalar, TruncatedVector
from .weights import DecreasingInLevel, IncreasingInGrade, WeightFamily


class EnumerationExhausted(RuntimeError):
    """A support index was not reached by the orbit enumeration bound."""


class WeightSequence:
    """Nonzero scalar sequence; dynamics only ever read the modulus."""

    def __init__(
        self,
        name: str,
        value: Callable[[Index], Scalar],
        log_modulus: Optional[Callable[[Index], float]] = None,
        *,
        exact: bool = False,
    ):
        self.name = name
        self.value = value
        self.log_modulus = log_modulus or (lambda j: math.log(abs(value(j))))
        self.exact = exact  # value(j) returns Fraction (or int)

    def __repr__(self) -> str:
        return f"WeightSequence({self.name!r})"


def unit_weights() -> WeightSequence:
    return WeightSequence("unit", lambda j: 1, lambda j: 0.0, exact=True)


def constant_weights(c: Scalar) -> WeightSequence:
    lm = math.log(abs(c))
    exact = isinstance(c, (int, Fraction))
    return WeightSequence(f"constant({c})", lambda j: c, lambda j: lm, exact=exact)


def sqrt_index_weights() -> WeightSequence:
    """w_j = sqrt(j), the annihilation-operator weight."""
    return WeightSequence("sqrt-index", lambda j: math.sqrt(j), lambda j: 0.5 * math.log(j))


def scaled(w: WeightSequence, lam: Scalar) -> WeightSequence:
    """Fold a scalar multiplier into the weight sequence."""
    if lam == 1:
        return w
    log_lam = math.log(abs(lam))
    return WeightSequence(
        f"{w.name}*{lam}",
        lambda j: lam * w.value(j),
        lambda j: w.log_modulus(j) + log_lam,
        exact=w.exact and isinstance(lam, (int, Fraction)),
    )


# ---------------------------------------------------------------------------
# Operators on truncated vectors
# ---------------------------------------------------------------------------


def apply_generalized_shift(w: WeightSequence, psi: Symbol, x: TruncatedVector) -> TruncatedVector:
    """(B_{w,psi} x)_j = w_{psi(j)} x_{psi(j)} on finitely supported x."""
    out: dict[Index, Scalar] = {}
    for t, c in x:
        if t == psi.root:
            continue  # the root coordinate is annihilated
        j = psi.preimage(t)
        out[j] = out.get(j, 0) + w.value(t) * c
    return TruncatedVector(out)


def iterate_generalized_shift(
    w: WeightSequence, psi: Symbol, x: TruncatedVector, n: int
) -> TruncatedVector:
    for _ in range(n):
        x = apply_generalized_shift(w, psi, x)
    return x


def plain_backward_shift(x: TruncatedVector, n: int = 1) -> TruncatedVector:
    """B^n on linear indices: e_1..e_n die, e_j -> e_{j-n}."""
    return TruncatedVector({j - n: c for j, c in x if j > n})


def plain_forward_shift(x: TruncatedVector, n: int = 1) -> TruncatedVector:
    """S^n, the right inverse of B^n: e_j -> e_{j+n}."""
    return TruncatedVector({j + n: c for j, c in x})


class Conjugation:
    """T_{w,psi} together with the orbit bookkeeping it needs."""

    def __init__(self, w: WeightSequence, psi: Symbol, max_enum: int = 1 << 20):
        self.w = w
        self.psi = psi
        self.max_enum = max_enum
        self._prefix_products: list[Scalar] = [1]  # prod_{l<=j} w_{chi(l)}, position 0 = empty

    def _orbit_for_support(self, support) -> list[Index]:
        need = set(support)
        n = 256
        while True:
            orbit = self.psi.orbit(min(n, self.max_enum))
            if need.issubset(orbit):
                return orbit
            if n >= self.max_enum:
                missing = sorted(need.difference(orbit), key=self.psi.flatten)
                raise EnumerationExhausted(
                    f"support indices {missing} not reached within {self.max_enum} orbit steps"
                )
            n *= 2

    def prefix_product(self, j: int) -> Scalar:
        """prod_{l=1}^{j} w_{chi(l)} (exact when the weight sequence is exact)."""
        orbit = self.psi.orbit(max(j, 1))
        prods = self._prefix_products
        while len(prods) <= j:
            prods.append(prods[-1] * self.w.value(orbit[len(prods) - 1]))
        return prods[j]

    def forward(self, x: TruncatedVector) -> TruncatedVector:
        """T x: coefficient at linear position j is prod_{l<=j} w_{chi(l)} x_{chi(j)}."""
        orbit = self._orbit_for_support(x.support)
        pos = {idx: i + 1 for i, idx in enumerate(orbit)}
        return TruncatedVector({pos[t]: self.prefix_product(pos[t]) * c for t, c in x})

    def inverse(self, y: TruncatedVector) -> TruncatedVector:
        """T^{-1} y, defined on linear positions; exact division in exact mode."""
        if not y:
            return TruncatedVector()
        top = y.max_linear_index()
        orbit = self.psi.orbit(top)
        out = {}
        for j, c in y:
            prod = self.prefix_product(j)
            if isinstance(c, (int, Fraction)) and isinstance(prod, (int, Fraction)):
                out[orbit[j - 1]] = Fraction(c) / Fraction(prod)
            else:
                out[orbit[j - 1]] = c / prod
        return TruncatedVector(out)


def transform(
    w: WeightSequence,
    psi: Symbol,
    x: TruncatedVector,
    direction: str = "forward",
    max_enum: int = 1 << 20,
) -> TruncatedVector:
    conj = Conjugation(w, psi, max_enum=max_enum)
    if direction == "forward":
        return conj.forward(x)
    if direction == "inverse":
        return conj.inverse(x)
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# Weight-family transport
# ---------------------------------------------------------------------------


class _OrbitLogCache:
    """Flattened orbit indices and cumulative log moduli, grown on demand."""

    def __init__(self, w: WeightSequence, psi: Symbol):
        self.w = w
        self.psi = psi
        self.flat = np.zeros(0, dtype=np.int64)
        self.cum = np.zeros(0, dtype=float)

    def ensure(self, n: int) -> None:
        if self.flat.size >= n:
            return
        orbit = self.psi.orbit(n)
        old = self.flat.size
        flat = np.array([self.psi.flatten(i) for i in orbit[old:]], dtype=np.int64)
        logs = np.array([self.w.log_modulus(i) for i in orbit[old:]], dtype=float)
        base = self.cum[-1] if old else 0.0
        self.flat = np.concatenate([self.flat, flat])
        self.cum = np.concatenate([self.cum, base + np.cumsum(logs)])


def conjugate_family(
    family: WeightFamily, w: WeightSequence, psi: Symbol, max_enum: int = 1 << 20
) -> WeightFamily:
    """Transported weights u^(m,k)_j = v^(m,k)_{chi(j)} / prod_{l<=j} |w_{chi(l)}|.

    The result is always linear-indexed (positions along the root orbit).
    Pointwise-in-j hints transport; tail/limit hints are dropped and must be
    re-declared by the caller if still valid.
    """
    cache = _OrbitLogCache(w, psi)

    def log_eval(m: int, k: int, j: int) -> float:
        if j > max_enum:
            raise EnumerationExhausted(f"orbit position {j} beyond bound {max_enum}")
        cache.ensure(j)
        orbit_idx = psi.orbit(j)[j - 1]
        return family.log_weight(m, k, orbit_idx) - cache.cum[j - 1]

    def log_eval_array(m: int, k: int, js: np.ndarray) -> np.ndarray:
        top = int(np.max(js))
        if top > max_enum:
            raise EnumerationExhausted(f"orbit position {top} beyond bound {max_enum}")
        cache.ensure(top)
        idx = np.asarray(js, dtype=np.int64) - 1
        return family.log_weights(m, k, cache.flat[idx]) - cache.cum[idx]

    exact_eval = None
    if family.exact_eval is not None and w.exact:
        conj = Conjugation(w, psi, max_enum=max_enum)

        def exact_eval(m: int, k: int, j: int) -> Fraction:
            orbit_idx = psi.orbit(j)[j - 1]
            return family.exact_eval(m, k, orbit_idx) / abs(Fraction(conj.prefix_product(j)))

    kept = tuple(h for h in family.hints if isinstance(h, (DecreasingInLevel, IncreasingInGrade)))
    return WeightFamily(
        f"{family.name}|{w.name},{psi.name}",
        log_eval,
        index_kind="linear",
        levels_hint=family.levels_hint,
        hints=kept,
        exact_eval=exact_eval,
        log_eval_array=log_eval_array,
        grade_constant=family.grade_constant,
    )
