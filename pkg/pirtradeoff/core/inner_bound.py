"""Achievable storage-retrieval points of the (2,2) PIR problem.

The scheme stores the common description X0 and the descriptions X1, X2 at
database 1 and the descriptions Y1, Y2 at database 2. A user retrieves one
X-description, one Y-description and the bin index of X0; each of the four
reconstruction sets below recovers one message.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import flax
import jax.numpy as jnp
import numpy as np
from flax.struct import PyTreeNode
from scipy.optimize import brentq, linprog, minimize_scalar
from scipy.stats import entropy as scipy_entropy

from pirtradeoff.core.md_region import (
    BinnedRateVector,
    MembershipReport,
    mdstar_constraints,
    mdstar_membership,
)
from pirtradeoff.core.probability import (
    Conditional,
    JointPmf,
    Variable,
    entropy,
    is_deterministic_function,
    marginal,
    mutual_information,
    product_from_factorization,
    uniform_bits,
)
from pirtradeoff.settings import TOLERANCES
from pirtradeoff.types import Probability, Table
from pirtradeoff.utils.pareto_front import (
    chord_alpha,
    compute_lower_convex_envelope,
    compute_pareto_front,
)

logger = logging.getLogger(__name__)

MESSAGES = ("V1", "V2")
X_DESCRIPTIONS = ("X0", "X1", "X2")
Y_DESCRIPTIONS = ("Y1", "Y2")
DESCRIPTIONS = X_DESCRIPTIONS + Y_DESCRIPTIONS

# message recovered by each reconstruction set
RECONSTRUCTION_SETS: Tuple[Tuple[str, Tuple[str, ...]], ...] = (
    ("V1", ("X0", "X1", "Y1")),
    ("V1", ("X0", "X2", "Y2")),
    ("V2", ("X0", "X1", "Y2")),
    ("V2", ("X0", "X2", "Y1")),
)

# X0 alphabet, in this order: (00), (01), (10), (11)
X0_SIZE = 4


class RatePoint(PyTreeNode):
    """Normalized storage-retrieval pair, in bits per message bit.

    Args:
        alpha_bar: average storage per database.
        beta_bar: average download per database.
    """

    alpha_bar: float
    beta_bar: float

    def to_json(self) -> Dict[str, float]:
        return {"alpha_bar": float(self.alpha_bar), "beta_bar": float(self.beta_bar)}


@dataclass(frozen=True)
class StorageBranch:
    """Outcome of a recompression test for the descriptions of one database."""

    database: int
    surplus: float
    threshold: float
    recompressed: bool
    note: str = ""


class DescriptionRates(PyTreeNode):
    """Codebook rates gamma, retrieval bin rates beta and storage bin rates
    alpha of the five descriptions, keyed by description name."""

    gamma: Dict[str, float]
    beta: Dict[str, float]
    alpha: Dict[str, float]
    t: int = flax.struct.field(pytree_node=False, default=1)
    storage_branches: Tuple[StorageBranch, ...] = flax.struct.field(
        pytree_node=False, default=()
    )

    def check_ordering(self, tolerance: float = TOLERANCES.internal) -> List[str]:
        """Names of the descriptions breaking 0 <= alpha <= beta <= gamma."""
        broken = []
        for name in DESCRIPTIONS:
            alpha, beta, gamma = self.alpha[name], self.beta[name], self.gamma[name]
            if alpha < -tolerance or alpha > beta + tolerance or beta > gamma + tolerance:
                broken.append(name)
        return broken

    def binned(self, names: Sequence[str] = DESCRIPTIONS) -> BinnedRateVector:
        """Retrieval bins against codebooks, as (R, R') = (beta, gamma)."""
        return BinnedRateVector(
            {name: self.beta[name] for name in names},
            {name: self.gamma[name] for name in names},
        )

    def to_json(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "gamma": {k: float(v) for k, v in self.gamma.items()},
            "beta": {k: float(v) for k, v in self.beta.items()},
            "alpha": {k: float(v) for k, v in self.alpha.items()},
            "storage_branches": [
                {
                    "database": branch.database,
                    "surplus": branch.surplus,
                    "threshold": branch.threshold,
                    "recompressed": branch.recompressed,
                    "note": branch.note,
                }
                for branch in self.storage_branches
            ],
        }


@dataclass(frozen=True)
class DecodabilityCheck:
    target: str
    given: Tuple[str, ...]
    holds: bool
    table: Optional[Table]


@dataclass(frozen=True)
class AuxScheme:
    """Auxiliary descriptions drawn independently given the messages.

    Args:
        conditionals: for each of X0, X1, X2, Y1, Y2 its variable and its
            conditional pmf given (V1, V2).
        t: block parameter, number of message symbols per description symbol.
        messages: pmf of (V1, V2), uniform bits by default.
    """

    conditionals: Mapping[str, Tuple[Variable, Conditional]]
    t: int = 1
    messages: Optional[JointPmf] = None

    def __post_init__(self) -> None:
        if self.t < 1:
            raise ValueError(f"Block parameter t must be positive, got {self.t}")
        if sorted(self.conditionals) != sorted(DESCRIPTIONS):
            raise ValueError(
                f"Conditionals must describe {DESCRIPTIONS}, got "
                f"{sorted(self.conditionals)}"
            )
        for name, (variable, _) in self.conditionals.items():
            if variable.name != name:
                raise ValueError(f"Conditional {name} carries variable {variable.name}")

    def joint(self) -> JointPmf:
        """Joint of (V1, V2, X0, X1, X2, Y1, Y2)."""
        messages = self.messages if self.messages is not None else uniform_bits(MESSAGES)
        return product_from_factorization(
            messages, [self.conditionals[name] for name in DESCRIPTIONS]
        )

    def decodability(self, joint: Optional[JointPmf] = None) -> List[DecodabilityCheck]:
        """Whether each reconstruction set determines its message."""
        joint = joint if joint is not None else self.joint()
        checks = []
        for target, given in RECONSTRUCTION_SETS:
            holds, table = is_deterministic_function(joint, [target], list(given))
            checks.append(DecodabilityCheck(target, given, holds, table))
        return checks


def _deterministic(size: int, function: Callable[[int, int], int]) -> Conditional:
    rows = {}
    for v1, v2 in itertools.product(range(2), repeat=2):
        row = [Fraction(0)] * size
        row[function(v1, v2)] = Fraction(1)
        rows[(v1, v2)] = row
    return rows


CANONICAL_MAPS: Dict[str, Callable[[int, int], int]] = {
    "X1": lambda v1, v2: v1 & v2,
    "X2": lambda v1, v2: (1 - v1) & (1 - v2),
    "Y1": lambda v1, v2: v1 & (1 - v2),
    "Y2": lambda v1, v2: (1 - v1) & v2,
}


def canonical_conditionals() -> Dict[str, Tuple[Variable, Conditional]]:
    """The four deterministic bit maps of the message pair."""
    return {
        name: (Variable(name, 2), _deterministic(2, function))
        for name, function in CANONICAL_MAPS.items()
    }


def canonical_message_joint() -> JointPmf:
    """Joint of (V1, V2, X1, X2, Y1, Y2) with the deterministic maps only."""
    conditionals = canonical_conditionals()
    return product_from_factorization(
        uniform_bits(MESSAGES), [conditionals[name] for name in ("X1", "X2", "Y1", "Y2")]
    )


def _as_probability(p: Any) -> Probability:
    if isinstance(p, (Fraction, int)):
        p = Fraction(p)
    elif isinstance(p, str):
        p = Fraction(p)
    else:
        p = float(p)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


def common_description_conditional(p: Probability) -> Conditional:
    """Conditional of X0 given (V1, V2); columns (00), (01), (10), (11)."""
    half = Fraction(1, 2)
    edge = (1 - p) / 2
    zero = Fraction(0)
    return {
        (0, 0): [half, zero, zero, half],
        (1, 0): [edge, p, zero, edge],
        (0, 1): [edge, zero, p, edge],
        (1, 1): [half, zero, zero, half],
    }


def build_canonical_aux(p: Any) -> AuxScheme:
    """The canonical one-parameter scheme.

    Args:
        p: weight moved off the two constant X0 symbols when exactly one
            message bit is set. Rational values give an exact joint.

    Returns:
        The scheme with t = 1.
    """
    p = _as_probability(p)
    conditionals = canonical_conditionals()
    conditionals["X0"] = (Variable("X0", X0_SIZE), common_description_conditional(p))
    return AuxScheme(conditionals=conditionals, t=1)


def _storage_lp(
    joint: JointPmf,
    sides: Tuple[str, ...],
    free: Tuple[str, ...],
    gamma: Mapping[str, float],
    beta: Mapping[str, float],
) -> Optional[Dict[str, float]]:
    """Smallest total storage of the free descriptions with alpha <= beta and
    (alpha, gamma) inside the binned MD region of the database's descriptions.

    Descriptions of `sides` outside `free` are stored at their codebook rate.
    """
    constraints = mdstar_constraints(joint, sides, [sides])
    a_ub, b_ub = [], []
    for constraint in constraints:
        # sum_J (gamma_j - alpha_j) <= bound
        row = [-1.0 if name in constraint.subset else 0.0 for name in free]
        fixed = sum(gamma[name] for name in constraint.subset if name in free)
        a_ub.append(row)
        b_ub.append(constraint.bound - fixed + TOLERANCES.linprog)
    result = linprog(
        c=np.ones(len(free)),
        A_ub=np.asarray(a_ub),
        b_ub=np.asarray(b_ub),
        bounds=[(0.0, beta[name]) for name in free],
        method="highs",
    )
    if result.status != 0:
        logger.debug(f"Storage LP failed: {result.message}")
        return None
    return {
        name: float(np.clip(value, 0.0, beta[name]))
        for name, value in zip(free, result.x)
    }


def canonical_rates(scheme: AuxScheme) -> DescriptionRates:
    """Rate assignment of the scheme.

    Codebook rates are gamma = I(V1,V2; U). Retrieval bins drop what X0
    already tells the user, so beta_X0 = gamma_X0, beta_Xi = I(V1,V2; Xi | X0)
    and beta_Yj is the larger of I(V1,V2; Yj | X0, X1) and
    I(V1,V2; Yj | X0, X2). Storage bins follow the recompression tests of
    each database.

    Raises:
        ValueError: if a reconstruction set does not determine its message.
    """
    joint = scheme.joint()
    failed = [check for check in scheme.decodability(joint) if not check.holds]
    if failed:
        raise ValueError(
            "Scheme is not decodable: "
            + ", ".join(f"{c.target} from {list(c.given)}" for c in failed)
        )

    source = list(MESSAGES)
    gamma = {name: mutual_information(joint, source, [name]) for name in DESCRIPTIONS}
    beta = {"X0": gamma["X0"]}
    for name in ("X1", "X2"):
        beta[name] = mutual_information(joint, source, [name], ["X0"])
    for name in Y_DESCRIPTIONS:
        beta[name] = max(
            mutual_information(joint, source, [name], ["X0", "X1"]),
            mutual_information(joint, source, [name], ["X0", "X2"]),
        )

    alpha: Dict[str, float] = {"X0": gamma["X0"]}
    branches = []

    # database 1: recompress when the retrieval bins leave X0, X1, X2 jointly
    # decodable from fewer bits
    x_surplus = sum(gamma[name] - beta[name] for name in X_DESCRIPTIONS)
    x_threshold = sum(entropy(joint, [name]) for name in X_DESCRIPTIONS) - entropy(
        joint, list(X_DESCRIPTIONS)
    )
    recompressed = x_surplus < x_threshold
    note = "threshold reads H(X0)+H(X1)+H(X2)-H(X0,X1,X2)"
    stored = None
    if recompressed:
        stored = _storage_lp(
            marginal(joint, source + list(X_DESCRIPTIONS)),
            X_DESCRIPTIONS,
            ("X1", "X2"),
            gamma,
            beta,
        )
        if stored is None:
            recompressed = False
            note += "; storage program infeasible, kept retrieval bins"
    if stored is None:
        stored = {name: beta[name] for name in ("X1", "X2")}
    alpha.update(stored)
    branches.append(StorageBranch(1, x_surplus, x_threshold, recompressed, note))

    # database 2
    y_surplus = sum(gamma[name] - beta[name] for name in Y_DESCRIPTIONS)
    y_threshold = mutual_information(joint, ["Y1"], ["Y2"])
    y_stored = None
    if y_surplus < y_threshold:
        y_stored = _storage_lp(
            marginal(joint, source + list(Y_DESCRIPTIONS)),
            Y_DESCRIPTIONS,
            Y_DESCRIPTIONS,
            gamma,
            beta,
        )
    if y_stored is not None:
        alpha.update(y_stored)
        branches.append(StorageBranch(2, y_surplus, y_threshold, True))
    else:
        alpha.update({name: beta[name] for name in Y_DESCRIPTIONS})
        branches.append(
            StorageBranch(
                2, y_surplus, y_threshold, False, "otherwise branch keeps beta_2"
            )
        )

    return DescriptionRates(
        gamma=gamma,
        beta=beta,
        alpha=alpha,
        t=scheme.t,
        storage_branches=tuple(branches),
    )


def scheme_point(scheme: AuxScheme, rates: DescriptionRates) -> RatePoint:
    """Normalized rates of an assignment, evaluated at equality.

    alpha_bar = sum of the five storage rates / (2t) and
    beta_bar = (2 beta_X0 + beta_X1 + beta_X2 + beta_Y1 + beta_Y2) / (4t).
    """
    t = scheme.t
    alpha_bar = sum(rates.alpha[name] for name in DESCRIPTIONS) / (2 * t)
    beta_bar = (
        2 * rates.beta["X0"] + sum(rates.beta[name] for name in DESCRIPTIONS[1:])
    ) / (4 * t)
    return RatePoint(alpha_bar=float(alpha_bar), beta_bar=float(beta_bar))


def _h(*masses: float) -> float:
    return float(scipy_entropy(np.asarray(masses, dtype=np.float64), base=2))


def closed_form_point(p: Any) -> RatePoint:
    """Closed form of the canonical scheme's point.

    Args:
        p: parameter in [0, 1].

    Returns:
        The point, from (1, 1) at p = 1 to the minimum retrieval point at p = 0.
    """
    p = float(_as_probability(p))
    shared = _h((2 - p) / 4, (2 - p) / 4, p / 2)
    alpha_bar = (
        9 / 4
        - _h(1 / 4, 3 / 4)
        + _h((1 - p) / 2, (1 - p) / 2, p / 2, p / 2) / 4
        + shared / 2
        - 3 * _h((3 - 2 * p) / 6, (3 - 2 * p) / 6, p / 3, p / 3) / 4
    )
    beta_bar = 5 / 8 + shared / 4 - _h((1 - p) / 2, (1 - p) / 2, p) / 8
    return RatePoint(alpha_bar=alpha_bar, beta_bar=beta_bar)


@dataclass(frozen=True)
class MinimumRetrievalPoint:
    """The lossless-storage point together with its per-database parts."""

    point: RatePoint
    alpha_db1: float
    alpha_db2: float
    beta_db1: float
    beta_db2: float

    def to_json(self) -> Dict[str, Any]:
        return {
            **self.point.to_json(),
            "alpha_db1": self.alpha_db1,
            "alpha_db2": self.alpha_db2,
            "beta_db1": self.beta_db1,
            "beta_db2": self.beta_db2,
        }


def minimum_retrieval_point() -> MinimumRetrievalPoint:
    """Point of the scheme storing (X1, X2) losslessly at database 1 and
    Slepian-Wolf bins of Y1 and Y2 at database 2.

    Storage H(X1, X2) + 2 H(Y1 | X1) and retrieval H(X1) + H(Y1 | X1) per
    database, both halved to normalize by the two message bits.
    """
    joint = canonical_message_joint()
    alpha_db1 = entropy(joint, ["X1", "X2"])
    y_given_x = entropy(joint, ["X1", "Y1"]) - entropy(joint, ["X1"])
    alpha_db2 = 2 * y_given_x
    beta_db1 = entropy(joint, ["X1"])
    beta_db2 = y_given_x
    point = RatePoint(
        alpha_bar=0.5 * (alpha_db1 + alpha_db2), beta_bar=0.5 * (beta_db1 + beta_db2)
    )
    return MinimumRetrievalPoint(point, alpha_db1, alpha_db2, beta_db1, beta_db2)


def space_sharing_point(a: RatePoint, b: RatePoint, weight: float) -> RatePoint:
    """Splitting the messages between two codes with weight on the first."""
    if not 0.0 <= weight <= 1.0:
        raise ValueError(f"weight must lie in [0, 1], got {weight}")
    return RatePoint(
        alpha_bar=weight * a.alpha_bar + (1 - weight) * b.alpha_bar,
        beta_bar=weight * a.beta_bar + (1 - weight) * b.beta_bar,
    )


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    details: Dict[str, Any]


@dataclass(frozen=True)
class VerificationReport:
    verdict: bool
    conditions: List[ConditionCheck]

    def condition(self, name: str) -> ConditionCheck:
        return next(check for check in self.conditions if check.name == name)

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "conditions": {
                check.name: {"passed": check.passed, **check.details}
                for check in self.conditions
            },
        }


def _membership_details(report: MembershipReport) -> Dict[str, Any]:
    return {
        "failure_class": report.failure_class,
        "violations": [v.to_json() for v in report.violations],
    }


def verify_scheme(
    scheme: AuxScheme, rates: DescriptionRates
) -> VerificationReport:
    """Checks a rate assignment against the conditions of the general inner
    bound: decodability of every reconstruction set, the binned MD region of
    (beta, gamma), and the storage rules of both databases.

    Failures are verdicts, never exceptions.
    """
    joint = scheme.joint()
    source = list(MESSAGES)
    conditions = []

    decoding = scheme.decodability(joint)
    conditions.append(
        ConditionCheck(
            "decodability",
            all(check.holds for check in decoding),
            {
                "sets": [
                    {"target": c.target, "given": list(c.given), "holds": c.holds}
                    for c in decoding
                ]
            },
        )
    )

    binned = mdstar_membership(
        joint,
        list(DESCRIPTIONS),
        [list(given) for _, given in RECONSTRUCTION_SETS],
        rates.binned(),
        source=source,
    )
    conditions.append(
        ConditionCheck("retrieval_binning", binned.verdict, _membership_details(binned))
    )

    broken = rates.check_ordering(TOLERANCES.comparison)
    storage_details: Dict[str, Any] = {"ordering_violations": broken}
    storage_ok = not broken and abs(rates.alpha["X0"] - rates.gamma["X0"]) <= (
        TOLERANCES.comparison
    )
    for sides, database in ((X_DESCRIPTIONS, 1), (Y_DESCRIPTIONS, 2)):
        surplus = sum(rates.gamma[name] - rates.beta[name] for name in sides)
        if database == 1:
            threshold = sum(entropy(joint, [name]) for name in sides) - entropy(
                joint, list(sides)
            )
        else:
            threshold = mutual_information(joint, ["Y1"], ["Y2"])
        key = f"database_{database}"
        if surplus < threshold:
            stored = BinnedRateVector(
                {name: rates.alpha[name] for name in sides},
                {name: rates.gamma[name] for name in sides},
            )
            report = mdstar_membership(
                marginal(joint, source + list(sides)),
                list(sides),
                [list(sides)],
                stored,
                source=source,
            )
            storage_ok = storage_ok and report.verdict
            storage_details[key] = {
                "surplus": surplus,
                "threshold": threshold,
                "recompressed": True,
                **_membership_details(report),
            }
        else:
            kept = all(
                abs(rates.alpha[name] - rates.beta[name]) <= TOLERANCES.comparison
                for name in sides
            )
            storage_ok = storage_ok and kept
            storage_details[key] = {
                "surplus": surplus,
                "threshold": threshold,
                "recompressed": False,
                "alpha_equals_beta": kept,
            }
    storage_details["interpretation"] = (
        "database 1 threshold uses H(X0)+H(X1)+H(X2); database 2 otherwise "
        "branch keeps its own beta rates"
    )
    conditions.append(ConditionCheck("storage", storage_ok, storage_details))

    return VerificationReport(all(c.passed for c in conditions), conditions)


@dataclass(frozen=True)
class CurvePoint:
    p: float
    point: RatePoint
    chord_alpha: float
    below_spaceshare: bool
    on_envelope: bool
    pareto: bool

    @property
    def gap(self) -> float:
        return self.chord_alpha - self.point.alpha_bar


@dataclass(frozen=True)
class CurveResult:
    points: List[CurvePoint]
    beta_monotone: bool
    best_gap: Optional[Tuple[float, float]] = None


def _chord(start: RatePoint, end: RatePoint, beta_bar: float) -> float:
    return float(
        chord_alpha(
            jnp.asarray([start.alpha_bar, start.beta_bar]),
            jnp.asarray([end.alpha_bar, end.beta_bar]),
            beta_bar,
        )
    )


def _chord_gap(p: float, start: RatePoint, end: RatePoint) -> float:
    point = closed_form_point(float(np.clip(p, 0.0, 1.0)))
    return _chord(start, end, point.beta_bar) - point.alpha_bar


def _refine_gap(
    grid: Sequence[float], gaps: Sequence[float], start: RatePoint, end: RatePoint
) -> Tuple[float, float]:
    best = int(np.argmax(gaps))
    lower = grid[max(best - 1, 0)]
    upper = grid[min(best + 1, len(grid) - 1)]
    if lower == upper:
        return float(grid[best]), float(gaps[best])

    def objective(p: float) -> float:
        return -_chord_gap(p, start, end)

    if 0 < best < len(grid) - 1 and gaps[best] > max(gaps[best - 1], gaps[best + 1]):
        bracket: Tuple[float, ...] = (lower, grid[best], upper)
    else:
        bracket = (lower, upper)
    result = minimize_scalar(objective, bracket=bracket, method="golden")
    p_star = float(np.clip(result.x, 0.0, 1.0))
    gap = _chord_gap(p_star, start, end)
    if gap < gaps[best]:
        return float(grid[best]), float(gaps[best])
    return p_star, gap


def trace_curve(grid: Sequence[float], refine: bool = False) -> CurveResult:
    """Evaluates the canonical family on a grid of p.

    Each point is compared to the chord joining the p = 0 and p = 1 points at
    the same retrieval rate; points strictly under the chord beat splitting
    the messages between the two extreme codes.

    Args:
        grid: sorted values of p in [0, 1].
        refine: search the largest gap to the chord by golden section around
            the best grid value.

    Returns:
        The annotated points, a monotonicity flag for beta_bar and the best gap.
    """
    if len(grid) == 0:
        raise ValueError("Curve grid is empty")
    grid = [float(p) for p in grid]
    if any(not 0.0 <= p <= 1.0 for p in grid):
        raise ValueError("Curve grid values must lie in [0, 1]")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("Curve grid must be sorted")

    start, end = closed_form_point(0.0), closed_form_point(1.0)
    points = [closed_form_point(p) for p in grid]
    coordinates = jnp.asarray([[pt.alpha_bar, pt.beta_bar] for pt in points])
    envelope = compute_lower_convex_envelope(coordinates)
    front = compute_pareto_front(coordinates)

    curve = []
    for i, (p, point) in enumerate(zip(grid, points)):
        chord = _chord(start, end, point.beta_bar)
        curve.append(
            CurvePoint(
                p=p,
                point=point,
                chord_alpha=chord,
                below_spaceshare=point.alpha_bar < chord - TOLERANCES.comparison,
                on_envelope=bool(envelope[i]),
                pareto=bool(front[i]),
            )
        )

    betas = [point.beta_bar for point in points]
    beta_monotone = all(b >= a - TOLERANCES.comparison for a, b in zip(betas, betas[1:]))
    if not beta_monotone:
        logger.warning("--- beta_bar is not monotone along the traced grid ---")

    best_gap = None
    if refine:
        best_gap = _refine_gap(grid, [c.gap for c in curve], start, end)
        logger.debug(f"Largest gap to the chord {best_gap[1]:.6f} at p={best_gap[0]:.6f}")
    return CurveResult(curve, beta_monotone, best_gap)


def linear_crossing(
    slack: Callable[[RatePoint], float], lower: float = 0.0, upper: float = 1.0
) -> Optional[float]:
    """Value of p where slack(closed_form_point(p)) changes sign, if it does."""

    def along_curve(p: float) -> float:
        return slack(closed_form_point(p))

    left, right = along_curve(lower), along_curve(upper)
    if left == 0:
        return lower
    if np.sign(left) == np.sign(right):
        return None
    return float(brentq(along_curve, lower, upper, xtol=TOLERANCES.internal))
