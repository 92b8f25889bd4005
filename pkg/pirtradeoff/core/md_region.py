"""Multiple description rate region and its binned refinement.

Membership is a finite conjunction of explicit constraints, one per subset of
descriptions (MD) or per (reconstruction set, nonempty subset) pair (MD*).
Descriptions are identified by variable name.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pirtradeoff.core.probability import JointPmf, conditional_entropy, entropy
from pirtradeoff.settings import TOLERANCES
from pirtradeoff.types import Rates, VarSet

MAX_DESCRIPTIONS = 12

CODEBOOK_OUTSIDE_MD = "codebook_rates_outside_md"
BINNING_VIOLATION = "binning_constraint_violated"
MD_VIOLATION = "md_constraint_violated"


@dataclass(frozen=True)
class RateVector:
    """Per-description rates in bits per symbol, keyed by description name."""

    rates: Rates

    def __post_init__(self) -> None:
        for name, rate in self.rates.items():
            if rate < 0:
                raise ValueError(f"Rate of {name} is negative: {rate}")

    def __getitem__(self, name: str) -> float:
        return self.rates[name]

    def total(self, names: Sequence[str]) -> float:
        return sum(self.rates[name] for name in names)


@dataclass(frozen=True)
class BinnedRateVector:
    """Bin rates R and codebook rates R' of binned descriptions.

    Args:
        bin_rates: R, the rates of the bin indices.
        codebook_rates: R', the rates of the codebooks being binned.
    """

    bin_rates: Rates
    codebook_rates: Rates

    def __post_init__(self) -> None:
        if set(self.bin_rates) != set(self.codebook_rates):
            raise ValueError(
                f"Bin rates {sorted(self.bin_rates)} and codebook rates "
                f"{sorted(self.codebook_rates)} name different descriptions"
            )
        for name, rate in self.bin_rates.items():
            if rate < 0:
                raise ValueError(f"Bin rate of {name} is negative: {rate}")
            if rate > self.codebook_rates[name] + TOLERANCES.internal:
                raise ValueError(
                    f"Bin rate of {name} ({rate}) exceeds its codebook rate "
                    f"({self.codebook_rates[name]})"
                )

    @property
    def codebook(self) -> RateVector:
        return RateVector(dict(self.codebook_rates))

    def surplus(self, names: Sequence[str]) -> float:
        """sum over names of R'_j - R_j."""
        return sum(self.codebook_rates[n] - self.bin_rates[n] for n in names)

    def to_json(self) -> Dict[str, Any]:
        return {"R": dict(self.bin_rates), "Rp": dict(self.codebook_rates)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "BinnedRateVector":
        try:
            bin_rates = {str(k): float(v) for k, v in data["R"].items()}
            codebook_rates = {str(k): float(v) for k, v in data["Rp"].items()}
        except (KeyError, AttributeError, TypeError, ValueError) as error:
            raise ValueError(f"Malformed rates JSON: {error!r}") from error
        return cls(bin_rates, codebook_rates)


def load_rates(path: str) -> BinnedRateVector:
    with open(path, "r") as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as error:
            raise ValueError(f"Malformed rates JSON in {path}: {error}") from error
    return BinnedRateVector.from_json(data)


@dataclass(frozen=True)
class RateConstraint:
    """A linear constraint on a sum of rates over a subset of descriptions.

    Lower constraints read sum R_i >= bound (MD), upper constraints read
    sum (R'_j - R_j) <= bound (MD*).
    """

    reconstruction: Tuple[str, ...]
    subset: Tuple[str, ...]
    bound: float
    lower: bool = True


@dataclass(frozen=True)
class Violation:
    """A constraint evaluated at some rates. Slack is signed, negative when
    the constraint does not hold."""

    reconstruction: Tuple[str, ...]
    subset: Tuple[str, ...]
    bound: float
    value: float
    slack: float

    def to_json(self) -> Dict[str, Any]:
        return {
            "set": list(self.reconstruction),
            "subset": list(self.subset),
            "bound": self.bound,
            "value": self.value,
            "slack": self.slack,
        }


@dataclass(frozen=True)
class MembershipReport:
    verdict: bool
    violations: List[Violation] = field(default_factory=list)
    failure_class: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "failure_class": self.failure_class,
            "violations": [violation.to_json() for violation in self.violations],
        }


def _nonempty_subsets(names: Sequence[str]) -> List[Tuple[str, ...]]:
    return [
        subset
        for size in range(1, len(names) + 1)
        for subset in itertools.combinations(names, size)
    ]


def _check_descriptions(
    joint: JointPmf, descriptions: VarSet, source: Optional[VarSet]
) -> List[str]:
    if len(descriptions) == 0:
        raise ValueError("At least one description is needed")
    if len(descriptions) > MAX_DESCRIPTIONS:
        raise ValueError(
            f"{len(descriptions)} descriptions, at most {MAX_DESCRIPTIONS} supported"
        )
    joint.index(descriptions)
    if source is None:
        source = [name for name in joint.names if name not in descriptions]
    else:
        joint.index(source)
        overlap = set(source).intersection(descriptions)
        if overlap:
            raise ValueError(f"Descriptions overlap the source on {sorted(overlap)}")
    if len(source) == 0:
        raise ValueError("The joint has no source variable besides the descriptions")
    return list(source)


def md_constraints(
    joint: JointPmf, descriptions: VarSet, source: Optional[VarSet] = None
) -> List[RateConstraint]:
    """Lower bounds on sums of description rates.

    For every nonempty subset A of the descriptions,
    sum_{i in A} R_i >= sum_{i in A} H(U_i) - H(U_A | S).

    Args:
        joint: joint pmf of the source and the descriptions.
        descriptions: the description variables U_1..U_M.
        source: the source variables, by default every other variable.

    Returns:
        The 2^M - 1 constraints.
    """
    source = _check_descriptions(joint, descriptions, source)
    singles = {name: entropy(joint, [name]) for name in descriptions}
    constraints = []
    for subset in _nonempty_subsets(descriptions):
        bound = sum(singles[name] for name in subset) - conditional_entropy(
            joint, list(subset), source
        )
        constraints.append(RateConstraint(tuple(descriptions), subset, bound))
    return constraints


def _evaluate(constraint: RateConstraint, value: float) -> Violation:
    if constraint.lower:
        slack = value - constraint.bound
    else:
        slack = constraint.bound - value
    return Violation(
        constraint.reconstruction, constraint.subset, constraint.bound, value, slack
    )


def md_membership(
    joint: JointPmf,
    descriptions: VarSet,
    rates: RateVector,
    source: Optional[VarSet] = None,
) -> MembershipReport:
    """Whether the rates lie in the MD region of the joint.

    Returns:
        The verdict and every violated constraint with its signed slack.
    """
    if set(rates.rates) != set(descriptions):
        raise ValueError(
            f"Rates name {sorted(rates.rates)}, descriptions are "
            f"{sorted(descriptions)}"
        )
    violations = []
    for constraint in md_constraints(joint, descriptions, source):
        evaluated = _evaluate(constraint, rates.total(constraint.subset))
        if evaluated.slack < -TOLERANCES.comparison:
            violations.append(evaluated)
    if violations:
        return MembershipReport(False, violations, MD_VIOLATION)
    return MembershipReport(True)


def mdstar_constraints(
    joint: JointPmf, descriptions: VarSet, recon: Sequence[VarSet]
) -> List[RateConstraint]:
    """Upper bounds on the binning surplus of each reconstruction set.

    For every reconstruction set A and nonempty J within A,
    sum_{j in J} (R'_j - R_j) <= sum_{j in J} H(U_j) - H(U_J | U_{A minus J}).

    Returns:
        sum over sets of 2^|A| - 1 constraints.
    """
    if len(recon) == 0:
        raise ValueError("At least one reconstruction set is needed")
    joint.index(descriptions)
    singles = {name: entropy(joint, [name]) for name in descriptions}
    constraints = []
    for reconstruction in recon:
        reconstruction = tuple(reconstruction)
        if len(reconstruction) == 0:
            raise ValueError("Reconstruction sets must be nonempty")
        if len(reconstruction) > MAX_DESCRIPTIONS:
            raise ValueError(
                f"Reconstruction set {reconstruction} is larger than "
                f"{MAX_DESCRIPTIONS}"
            )
        unknown = [name for name in reconstruction if name not in descriptions]
        if unknown:
            raise ValueError(f"Reconstruction set names unknown descriptions {unknown}")
        for subset in _nonempty_subsets(reconstruction):
            rest = [name for name in reconstruction if name not in subset]
            bound = sum(singles[name] for name in subset) - conditional_entropy(
                joint, list(subset), rest
            )
            constraints.append(
                RateConstraint(reconstruction, subset, bound, lower=False)
            )
    return constraints


def mdstar_membership(
    joint: JointPmf,
    descriptions: VarSet,
    recon: Sequence[VarSet],
    rates: BinnedRateVector,
    source: Optional[VarSet] = None,
) -> MembershipReport:
    """Whether (R, R') lies in the binned MD region.

    The codebook rates R' are checked against the MD region first; a failure
    there is reported with its own failure class.
    """
    codebook = md_membership(joint, descriptions, rates.codebook, source)
    if not codebook.verdict:
        return MembershipReport(False, codebook.violations, CODEBOOK_OUTSIDE_MD)

    violations = []
    for constraint in mdstar_constraints(joint, descriptions, recon):
        evaluated = _evaluate(constraint, rates.surplus(constraint.subset))
        if evaluated.slack < -TOLERANCES.comparison:
            violations.append(evaluated)
    if violations:
        return MembershipReport(False, violations, BINNING_VIOLATION)
    return MembershipReport(True)
