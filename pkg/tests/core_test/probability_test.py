"""Tests of the exact joint pmf and the information measures."""

import json
import math
from fractions import Fraction

import pytest

from pirtradeoff.core.inner_bound import canonical_message_joint
from pirtradeoff.core.probability import (
    JointPmf,
    Variable,
    conditional,
    conditional_entropy,
    entropy,
    is_deterministic_function,
    load_pmf,
    marginal,
    mutual_information,
    pmf_from_json,
    pmf_to_json,
    product_from_factorization,
    save_pmf,
    to_array,
    uniform_bits,
)


def _h(*masses: float) -> float:
    return -sum(p * math.log2(p) for p in masses if p > 0)


def test_uniform_bits() -> None:
    pmf = uniform_bits(["V1", "V2"])

    pytest.assume(pmf.is_exact)
    pytest.assume(pmf.names == ("V1", "V2"))
    pytest.assume(pmf.probability((1, 0)) == Fraction(1, 4))
    pytest.assume(entropy(pmf, ["V1", "V2"]) == pytest.approx(2.0, abs=1e-12))
    pytest.assume(mutual_information(pmf, ["V1"], ["V2"]) == pytest.approx(0.0, abs=1e-12))


def test_canonical_joint_entropies() -> None:
    joint = canonical_message_joint()

    pytest.assume(joint.is_exact)
    pytest.assume(entropy(joint, ["X1"]) == pytest.approx(_h(0.25, 0.75), abs=1e-12))
    pytest.assume(entropy(joint, ["X1", "X2"]) == pytest.approx(1.5, abs=1e-12))
    pytest.assume(
        conditional_entropy(joint, ["Y1"], ["X1"])
        == pytest.approx(0.75 * _h(1 / 3, 2 / 3), abs=1e-12)
    )
    pytest.assume(
        mutual_information(joint, ["X1"], ["X2"])
        == pytest.approx(2 * _h(0.25, 0.75) - 1.5, abs=1e-12)
    )


def test_marginal_stays_exact() -> None:
    joint = canonical_message_joint()
    pair = marginal(joint, ["X2", "X1"])

    pytest.assume(pair.names == ("X2", "X1"))
    pytest.assume(pair.mass == {(0, 0): Fraction(1, 2), (0, 1): Fraction(1, 4), (1, 0): Fraction(1, 4)})
    pytest.assume(to_array(joint, ["X1"]).tolist() == [0.75, 0.25])


def test_conditional_law() -> None:
    joint = canonical_message_joint()
    law = conditional(joint, ["Y1"], ["X1"])

    pytest.assume(law[(1,)] == {(0,): Fraction(1)})
    pytest.assume(law[(0,)] == {(0,): Fraction(2, 3), (1,): Fraction(1, 3)})


def test_deterministic_functions() -> None:
    joint = canonical_message_joint()

    holds, table = is_deterministic_function(joint, ["V1"], ["X1", "Y1"])
    pytest.assume(holds)
    pytest.assume(table is not None and table[(0, 1)] == (1,))
    pytest.assume(table is not None and table[(1, 0)] == (1,))
    pytest.assume(table is not None and table[(0, 0)] == (0,))

    holds, table = is_deterministic_function(joint, ["V1"], ["X1"])
    pytest.assume(not holds)
    pytest.assume(table is None)

    # a function of the conditioning has exactly zero conditional entropy
    pytest.assume(conditional_entropy(joint, ["V2"], ["X2", "Y1"]) == 0.0)


def test_product_from_factorization() -> None:
    base = uniform_bits(["S"])
    copy = (Variable("U", 2), {(0,): [1, 0], (1,): [0, 1]})
    noisy = (Variable("W", 2), {(0,): [Fraction(3, 4), Fraction(1, 4)], (1,): [Fraction(1, 4), Fraction(3, 4)]})
    joint = product_from_factorization(base, [copy, noisy])

    pytest.assume(joint.names == ("S", "U", "W"))
    pytest.assume(joint.probability((1, 1, 0)) == Fraction(1, 8))
    pytest.assume(mutual_information(joint, ["U"], ["W"], ["S"]) == pytest.approx(0.0, abs=1e-12))
    pytest.assume(
        mutual_information(joint, ["S"], ["W"]) == pytest.approx(1 - _h(0.25, 0.75), abs=1e-12)
    )

    with pytest.raises(ValueError):
        product_from_factorization(base, [(Variable("U", 2), {(0,): [1, 0]})])
    with pytest.raises(ValueError):
        product_from_factorization(base, [(Variable("U", 2), {(0,): [1, 1], (1,): [0, 1]})])


@pytest.mark.parametrize(
    "variables, mass",
    [
        ((Variable("A", 2),), {(0,): Fraction(1, 2), (1,): Fraction(1, 4)}),
        ((Variable("A", 2),), {(0,): Fraction(3, 2), (1,): Fraction(-1, 2)}),
        ((Variable("A", 2), Variable("A", 2)), {(0, 0): Fraction(1)}),
        ((Variable("A", 2),), {(2,): Fraction(1)}),
        ((Variable("A", 2),), {(0, 1): Fraction(1)}),
        ((Variable("A", 0),), {}),
    ],
)
def test_invalid_pmf(variables: tuple, mass: dict) -> None:
    with pytest.raises(ValueError):
        JointPmf(variables, mass)


def test_float_masses_within_tolerance() -> None:
    pmf = JointPmf((Variable("A", 2),), {(0,): 0.1 + 0.2, (1,): 0.7})

    pytest.assume(not pmf.is_exact)
    pytest.assume(entropy(pmf, ["A"]) == pytest.approx(_h(0.3, 0.7), abs=1e-12))


def test_unknown_or_overlapping_variables() -> None:
    joint = canonical_message_joint()

    with pytest.raises(ValueError):
        entropy(joint, ["Z"])
    with pytest.raises(ValueError):
        mutual_information(joint, ["X1"], ["X1"])
    with pytest.raises(ValueError):
        conditional_entropy(joint, ["X1"], ["X1", "X2"])


def test_json_form(tmp_path) -> None:
    joint = canonical_message_joint()
    path = str(tmp_path / "joint.json")
    save_pmf(joint, path)

    loaded = load_pmf(path)
    pytest.assume(loaded.mass == joint.mass)
    pytest.assume(loaded.is_exact)

    data = pmf_to_json(marginal(joint, ["X1"]))
    pytest.assume(data["mass"][0] == {"value": [0], "p": "3/4"})

    with pytest.raises(ValueError):
        pmf_from_json({"variables": [{"name": "A"}], "mass": []})

    malformed = tmp_path / "bad.json"
    malformed.write_text("{not json")
    with pytest.raises(ValueError):
        load_pmf(str(malformed))

    pytest.assume(json.loads(open(path).read())["variables"][0]["name"] == "V1")
