"""Four-valued verdicts with replayable certificates.

A verdict is the outcome of a finite computation about an infinite object.
``CERTIFIED_*`` verdicts carry a certificate: finite data plus references to
the structural facts (hints) that were trusted, sufficient for an independent
checker to re-run the verification.  ``EMPIRICAL`` means a clean finite scan
that cannot settle the asymptotic statement; ``UNDECIDED`` means the scan was
inconclusive either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping


class Status(str, Enum):
    CERTIFIED_HOLDS = "certified-holds"
    CERTIFIED_FAILS = "certified-fails"
    EMPIRICAL = "empirically-supported"
    UNDECIDED = "undecided"

    @property
    def certified(self) -> bool:
        return self in (Status.CERTIFIED_HOLDS, Status.CERTIFIED_FAILS)

    @property
    def positive(self) -> bool:
        """Whether the verdict leans towards the property holding."""
        return self in (Status.CERTIFIED_HOLDS, Status.EMPIRICAL)


@dataclass(frozen=True)
class Verdict:
    status: Status
    certificate: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status.certified and not self.certificate:
            raise ValueError(f"{self.status.value} verdict requires a certificate")

    @property
    def certified(self) -> bool:
        return self.status.certified

    @property
    def positive(self) -> bool:
        return self.status.positive

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "certificate": _jsonable(self.certificate),
        }


def certified_holds(**certificate: Any) -> Verdict:
    return Verdict(Status.CERTIFIED_HOLDS, certificate)


def certified_fails(**certificate: Any) -> Verdict:
    return Verdict(Status.CERTIFIED_FAILS, certificate)


def empirical(**certificate: Any) -> Verdict:
    return Verdict(Status.EMPIRICAL, certificate)


def undecided(**certificate: Any) -> Verdict:
    return Verdict(Status.UNDECIDED, certificate)


def _jsonable(obj: Any) -> Any:
    """Reduce certificate payloads to JSON-serializable data, dropping callables."""
    import numbers

    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items() if not callable(v)}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        return float(obj)
    if isinstance(obj, (str, bool)) or obj is None:
        return obj
    return repr(obj)
