"""Converse inequalities for the (2,2) problem and reference quantities of
the general (N, K) problem."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pirtradeoff.core.inner_bound import RatePoint
from pirtradeoff.settings import TOLERANCES


@dataclass(frozen=True)
class BoundEntry:
    """One inequality lhs >= bound evaluated at a point."""

    name: str
    lhs: float
    bound: float

    @property
    def slack(self) -> float:
        return self.lhs - self.bound

    @property
    def passed(self) -> bool:
        return self.slack >= -TOLERANCES.comparison

    def to_json(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "bound": self.bound,
            "slack": self.slack,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class BoundReport:
    entries: List[BoundEntry] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(entry.passed for entry in self.entries)

    def entry(self, name: str) -> BoundEntry:
        return next(entry for entry in self.entries if entry.name == name)

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "entries": [entry.to_json() for entry in self.entries],
        }


def check_outer(point: RatePoint) -> BoundReport:
    """Evaluates beta >= 0.75, alpha + beta >= 2 and 3 alpha + 8 beta >= 10."""
    alpha, beta = float(point.alpha_bar), float(point.beta_bar)
    return BoundReport(
        [
            BoundEntry("beta", beta, 0.75),
            BoundEntry("alpha_plus_beta", alpha + beta, 2.0),
            BoundEntry("three_alpha_plus_eight_beta", 3 * alpha + 8 * beta, 10.0),
        ]
    )


def check_linear(point: RatePoint) -> BoundEntry:
    """alpha + 6 beta >= 6, which every zero-error linear code satisfies.

    A negative slack certifies that no linear code reaches the point.
    """
    alpha, beta = float(point.alpha_bar), float(point.beta_bar)
    return BoundEntry("linear", alpha + 6 * beta, 6.0)


def outer_alpha_floor(beta_bar: float) -> float:
    """Smallest storage rate the outer bounds allow at a retrieval rate."""
    if beta_bar < 0.75 - TOLERANCES.comparison:
        return float("inf")
    return max(2 - beta_bar, (10 - 8 * beta_bar) / 3, 0.0)


def _check_nk(num_databases: int, num_messages: int) -> None:
    if num_databases < 2:
        raise ValueError(f"N must be at least 2, got {num_databases}")
    if num_messages < 1:
        raise ValueError(f"K must be at least 1, got {num_messages}")


def capacity(num_databases: int, num_messages: int) -> Fraction:
    """PIR capacity (1 - 1/N) / (1 - 1/N^K), exactly."""
    _check_nk(num_databases, num_messages)
    n = Fraction(num_databases)
    return (1 - 1 / n) / (1 - 1 / n**num_messages)


@dataclass(frozen=True)
class ReferencePoint:
    """A point of the storage-retrieval tradeoff of MDS-coded storage.

    The storage coordinate is the raw parameter t; its normalization against
    per-message-bit storage is ambiguous, hence the interpretation flag.
    """

    t: int
    beta_bar: Fraction
    limit: bool = False
    storage: Optional[int] = None
    storage_interpretation: str = "raw parameter t, not normalized per message bit"

    def to_json(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "beta_bar": float(self.beta_bar),
            "limit": self.limit,
            "storage": self.storage,
            "storage_interpretation": self.storage_interpretation,
        }


def mds_reference_points(
    num_databases: int, num_messages: int
) -> List[ReferencePoint]:
    """Retrieval rates (1 - (t/N)^K) / (N - t) for t = 1..N.

    At t = N the expression is 0/0 and its limit K/N is returned, flagged.
    """
    _check_nk(num_databases, num_messages)
    n = Fraction(num_databases)
    points = []
    for t in range(1, num_databases):
        beta_bar = (1 - (Fraction(t) / n) ** num_messages) / (n - t)
        points.append(ReferencePoint(t, beta_bar, storage=t))
    points.append(
        ReferencePoint(
            num_databases,
            Fraction(num_messages) / n,
            limit=True,
            storage=num_databases,
        )
    )
    return points


def linear_reference_point(num_databases: int, num_messages: int) -> RatePoint:
    """Full replication: store all K messages, download (1 - 1/N^K)/(N - 1)."""
    _check_nk(num_databases, num_messages)
    n = Fraction(num_databases)
    beta_bar = (1 - 1 / n**num_messages) / (n - 1)
    return RatePoint(alpha_bar=float(num_messages), beta_bar=float(beta_bar))
