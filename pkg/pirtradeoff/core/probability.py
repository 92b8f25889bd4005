"""Exact finite-alphabet joint distributions and the information measures
computed on them.

Masses are kept exactly as given: `fractions.Fraction` inputs stay rational
through marginalisation and conditioning, so support and equality checks are
exact. Entropies are the only real-valued quantities.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from pirtradeoff.settings import TOLERANCES
from pirtradeoff.types import Outcome, Probability, Table, VarSet

MAX_PRODUCT_ALPHABET = 2**24

# one row of probabilities over the new variable per outcome of the base
Conditional = Mapping[Outcome, Sequence[Probability]]


@dataclass(frozen=True)
class Variable:
    """A named random variable taking values 0..size-1."""

    name: str
    size: int


@dataclass(frozen=True)
class JointPmf:
    """Joint probability mass function over an ordered list of variables.

    Only outcomes of positive mass are stored. Composite symbols are encoded
    as integers, e.g. a pair of bits (b1 b2) is stored as 2 * b1 + b2.

    Args:
        variables: the ordered variables of the joint.
        mass: map from value tuples (one entry per variable) to probability.
    """

    variables: Tuple[Variable, ...]
    mass: Dict[Outcome, Probability] = field(hash=False)

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)

        names = [variable.name for variable in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate variable name in {names}")
        for variable in variables:
            if variable.size < 1:
                raise ValueError(
                    f"Variable {variable.name} must have a positive alphabet size"
                )
        if math.prod(variable.size for variable in variables) > MAX_PRODUCT_ALPHABET:
            raise ValueError(
                f"Product alphabet of {names} exceeds {MAX_PRODUCT_ALPHABET} tuples"
            )

        positive: Dict[Outcome, Probability] = {}
        for outcome, probability in self.mass.items():
            outcome = tuple(int(value) for value in outcome)
            if len(outcome) != len(variables):
                raise ValueError(
                    f"Outcome {outcome} has {len(outcome)} entries, "
                    f"expected {len(variables)}"
                )
            for value, variable in zip(outcome, variables):
                if not 0 <= value < variable.size:
                    raise ValueError(
                        f"Value {value} out of range for {variable.name} "
                        f"of size {variable.size}"
                    )
            if probability < 0:
                raise ValueError(f"Negative mass {probability} on {outcome}")
            if probability > 0:
                positive[outcome] = positive.get(outcome, 0) + probability

        total = sum(positive.values())
        if self.is_exact_mass(positive):
            if total != 1:
                raise ValueError(f"Masses sum to {total}, expected exactly 1")
        elif abs(float(total) - 1.0) > TOLERANCES.internal:
            raise ValueError(f"Masses sum to {float(total)!r}, expected 1")

        object.__setattr__(self, "mass", positive)

    @staticmethod
    def is_exact_mass(mass: Mapping[Outcome, Probability]) -> bool:
        return all(isinstance(p, (Fraction, int)) for p in mass.values())

    @property
    def is_exact(self) -> bool:
        """Whether every mass is rational."""
        return self.is_exact_mass(self.mass)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(variable.name for variable in self.variables)

    def variable(self, name: str) -> Variable:
        return self.variables[self.index([name])[0]]

    def index(self, names: VarSet) -> Tuple[int, ...]:
        """Positions of the given variable names.

        Raises:
            ValueError: if a name is unknown or repeated.
        """
        positions = {name: i for i, name in enumerate(self.names)}
        unknown = [name for name in names if name not in positions]
        if unknown:
            raise ValueError(f"Unknown variable(s) {unknown}, have {self.names}")
        if len(set(names)) != len(names):
            raise ValueError(f"Repeated variable in {list(names)}")
        return tuple(positions[name] for name in names)

    def probability(self, outcome: Outcome) -> Probability:
        return self.mass.get(tuple(outcome), Fraction(0))


def marginal(pmf: JointPmf, names: VarSet) -> JointPmf:
    """Marginal of the joint on the given variables, in the given order.

    Args:
        pmf: a joint pmf.
        names: nonempty list of variable names.

    Returns:
        The marginal pmf. Rational inputs give rational masses.
    """
    if len(names) == 0:
        raise ValueError("Marginal needs at least one variable")
    positions = pmf.index(names)
    mass: Dict[Outcome, Probability] = defaultdict(int)
    for outcome, probability in pmf.mass.items():
        mass[tuple(outcome[i] for i in positions)] += probability
    return JointPmf(tuple(pmf.variables[i] for i in positions), dict(mass))


def to_array(pmf: JointPmf, names: Optional[VarSet] = None) -> np.ndarray:
    """Dense float64 array of the (marginal) masses, one axis per variable."""
    if names is not None:
        pmf = marginal(pmf, names)
    array = np.zeros([variable.size for variable in pmf.variables], dtype=np.float64)
    for outcome, probability in pmf.mass.items():
        array[outcome] = float(probability)
    return array


def _entropy_of_masses(masses: Sequence[Probability]) -> float:
    # 0 log 0 = 0 through the masked log
    probs = np.asarray([float(p) for p in masses], dtype=np.float64)
    return float(-np.sum(probs * np.ma.log2(probs).filled(0)))


def _disjoint(*groups: VarSet) -> None:
    seen: set = set()
    for group in groups:
        overlap = seen.intersection(group)
        if overlap:
            raise ValueError(f"Variable sets overlap on {sorted(overlap)}")
        seen.update(group)


def _grouped(
    pmf: JointPmf, target: VarSet, given: VarSet
) -> Dict[Outcome, Dict[Outcome, Probability]]:
    """Joint masses of (target, given) grouped by the given outcome."""
    target_positions = pmf.index(target)
    given_positions = pmf.index(given)
    groups: Dict[Outcome, Dict[Outcome, Probability]] = defaultdict(
        lambda: defaultdict(int)
    )
    for outcome, probability in pmf.mass.items():
        g = tuple(outcome[i] for i in given_positions)
        t = tuple(outcome[i] for i in target_positions)
        groups[g][t] += probability
    return groups


def entropy(pmf: JointPmf, names: VarSet) -> float:
    """Joint entropy in bits of the given variables.

    Args:
        pmf: a joint pmf.
        names: nonempty list of variable names.

    Returns:
        -sum p log2 p over the marginal.
    """
    return _entropy_of_masses(list(marginal(pmf, names).mass.values()))


def conditional_entropy(pmf: JointPmf, target: VarSet, given: VarSet) -> float:
    """H(target | given) in bits.

    Evaluated as the average over given-outcomes of the entropy of the
    conditional law, so a target that is a function of the conditioning
    gives exactly zero.
    """
    if len(target) == 0:
        raise ValueError("Conditional entropy needs a nonempty target")
    _disjoint(target, given)
    result = 0.0
    for rows in _grouped(pmf, target, given).values():
        weight = sum(rows.values())
        result += float(weight) * _entropy_of_masses(
            [p / weight for p in rows.values()]
        )
    return result


def mutual_information(
    pmf: JointPmf, a: VarSet, b: VarSet, given: Optional[VarSet] = None
) -> float:
    """I(a; b | given) = H(a | given) - H(a | b, given) in bits."""
    given = list(given or [])
    _disjoint(a, b, given)
    if len(b) == 0:
        raise ValueError("Mutual information needs two nonempty sets")
    return conditional_entropy(pmf, a, given) - conditional_entropy(
        pmf, a, list(b) + given
    )


def conditional(
    pmf: JointPmf, target: VarSet, given: VarSet
) -> Dict[Outcome, Dict[Outcome, Probability]]:
    """Conditional law P(target | given) for every given-outcome of positive mass."""
    _disjoint(target, given)
    law = {}
    for g, rows in _grouped(pmf, target, given).items():
        weight = sum(rows.values())
        law[g] = {t: p / weight for t, p in rows.items()}
    return law


def is_deterministic_function(
    pmf: JointPmf, target: VarSet, given: VarSet
) -> Tuple[bool, Optional[Table]]:
    """Checks whether target is a deterministic function of given.

    Args:
        pmf: a joint pmf.
        target: the variables to recover.
        given: the variables available.

    Returns:
        A boolean and, when it holds, the lookup table from given-outcomes of
        positive mass to the unique target-outcome.
    """
    _disjoint(target, given)
    table: Table = {}
    for g, rows in _grouped(pmf, target, given).items():
        if len(rows) != 1:
            return False, None
        table[g] = next(iter(rows))
    return True, table


def _check_row(name: str, base_outcome: Outcome, row: Sequence[Probability]) -> None:
    if any(p < 0 for p in row):
        raise ValueError(f"Negative conditional mass for {name} given {base_outcome}")
    total = sum(row)
    if JointPmf.is_exact_mass(dict(enumerate(row))):
        if total != 1:
            raise ValueError(
                f"Row of {name} given {base_outcome} sums to {total}, expected 1"
            )
    elif abs(float(total) - 1.0) > TOLERANCES.internal:
        raise ValueError(
            f"Row of {name} given {base_outcome} sums to {float(total)!r}, expected 1"
        )


def product_from_factorization(
    base: JointPmf, conditionals: Sequence[Tuple[Variable, Conditional]]
) -> JointPmf:
    """Extends a base pmf with variables drawn independently given the base.

    The result is P(base) * prod_i P(U_i | base), so the new variables are
    conditionally independent given the base variables.

    Args:
        base: the pmf of the conditioning variables.
        conditionals: pairs (new variable, conditional) where the conditional
            maps every base outcome of positive mass to a row of
            probabilities over the new variable's alphabet.

    Returns:
        The joint pmf over the base variables followed by the new ones.
    """
    names = list(base.names)
    for variable, rows in conditionals:
        if variable.name in names:
            raise ValueError(f"Duplicate variable name {variable.name}")
        names.append(variable.name)
        for base_outcome in base.mass:
            if base_outcome not in rows:
                raise ValueError(
                    f"No row of {variable.name} for base outcome {base_outcome}"
                )
            row = rows[base_outcome]
            if len(row) != variable.size:
                raise ValueError(
                    f"Row of {variable.name} has {len(row)} entries, "
                    f"expected {variable.size}"
                )
            _check_row(variable.name, base_outcome, row)

    mass: Dict[Outcome, Probability] = {}
    for base_outcome, base_probability in base.mass.items():
        partial: List[Tuple[Outcome, Probability]] = [((), base_probability)]
        for variable, rows in conditionals:
            row = rows[base_outcome]
            partial = [
                (values + (value,), probability * row[value])
                for values, probability in partial
                for value in range(variable.size)
                if row[value] > 0
            ]
        for values, probability in partial:
            mass[base_outcome + values] = probability

    variables = base.variables + tuple(variable for variable, _ in conditionals)
    return JointPmf(variables, mass)


def uniform_bits(names: VarSet) -> JointPmf:
    """Independent uniform bits, exactly."""
    count = len(names)
    mass = {
        tuple((index >> (count - 1 - i)) & 1 for i in range(count)): Fraction(
            1, 2**count
        )
        for index in range(2**count)
    }
    return JointPmf(tuple(Variable(name, 2) for name in names), mass)


def _parse_probability(value: Any) -> Probability:
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise ValueError(f"Cannot read probability {value!r}")


def _format_probability(value: Probability) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return repr(float(value))


def pmf_from_json(data: Mapping[str, Any]) -> JointPmf:
    """Reads a pmf from its JSON form.

    The JSON form is {"variables": [{"name": "X1", "size": 2}, ...],
    "mass": [{"value": [0, 1, ...], "p": "1/4"}, ...]} with probabilities
    as decimal or "num/den" strings (exact) or plain numbers.
    """
    try:
        variables = tuple(
            Variable(str(entry["name"]), int(entry["size"]))
            for entry in data["variables"]
        )
        mass: Dict[Outcome, Probability] = defaultdict(int)
        for entry in data["mass"]:
            mass[tuple(int(v) for v in entry["value"])] += _parse_probability(
                entry["p"]
            )
    except (KeyError, TypeError, ZeroDivisionError) as error:
        raise ValueError(f"Malformed pmf JSON: {error!r}") from error
    return JointPmf(variables, dict(mass))


def pmf_to_json(pmf: JointPmf) -> Dict[str, Any]:
    return {
        "variables": [{"name": v.name, "size": v.size} for v in pmf.variables],
        "mass": [
            {"value": list(outcome), "p": _format_probability(probability)}
            for outcome, probability in sorted(pmf.mass.items())
        ],
    }


def load_pmf(path: str) -> JointPmf:
    with open(path, "r") as file:
        try:
            data = json.load(file)
        except json.JSONDecodeError as error:
            raise ValueError(f"Malformed pmf JSON in {path}: {error}") from error
    return pmf_from_json(data)


def save_pmf(pmf: JointPmf, path: str) -> None:
    with open(path, "w") as file:
        json.dump(pmf_to_json(pmf), file, sort_keys=True, indent=2)
