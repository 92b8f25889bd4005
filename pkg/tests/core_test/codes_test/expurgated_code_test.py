"""Tests of zero-error subcodes."""

from fractions import Fraction

import numpy as np
import pytest

from pirtradeoff.core.codes.errors import ExpurgationError
from pirtradeoff.core.codes.expurgated_code import (
    ExpurgatedPirCode,
    expurgate,
    peel_product_subset,
)
from pirtradeoff.core.codes.sw_code import build_sw_code
from pirtradeoff.core.simulation import ErrorMap, compute_error_map, retrieve, verify_privacy


def test_peeling() -> None:
    bad = np.zeros((4, 4), dtype=bool)
    bad[0, 0] = bad[0, 1] = bad[1, 0] = True

    rows, cols = peel_product_subset(bad, 2)

    pytest.assume(rows.tolist() == [2, 3])
    pytest.assume(cols.tolist() == [0, 1])
    pytest.assume(not bad[np.ix_(rows, cols)].any())


def test_peeling_failure() -> None:
    with pytest.raises(ExpurgationError) as error:
        peel_product_subset(np.eye(2, dtype=bool), 2)
    pytest.assume(error.value.bad_count == 2)
    pytest.assume(error.value.needed == 4)


def test_expurgating_an_error_free_code() -> None:
    base = build_sw_code(6, 0.2)
    code, certificate = expurgate(base)

    pytest.assume(code.message_length == 5)
    pytest.assume(code.kept == (tuple(range(32)), tuple(range(32))))
    pytest.assume(code.storage_bits() == base.storage_bits())
    pytest.assume(certificate.zero_error_verified)
    pytest.assume(certificate.bound == 1 << 11)
    pytest.assume(certificate.bound_applies and certificate.bound_holds)
    pytest.assume(certificate.to_json()["epsilon"] == "0")
    pytest.assume(retrieve(code, 2, (17, 30), query_seed=1).decoded == 30)


def test_expurgating_a_code_with_errors() -> None:
    # X indices lack only the all-ones sequence and Y bins are singletons,
    # so exactly the pairs with equal all-zero or all-one messages fail
    base = build_sw_code(8, 0.188)
    error_map = compute_error_map(base)

    pytest.assume(base.x_index(1).size == 255)
    pytest.assume(base.y_bits(1) == base.y_bits(2) == 8)
    pytest.assume(error_map.bad_count == 2)
    pytest.assume(error_map.bad[0, 0] and error_map.bad[255, 255])
    pytest.assume(error_map.epsilon == Fraction(1, 1 << 16))

    code, certificate = expurgate(base, error_map)
    pytest.assume(code.kept == (tuple(range(1, 129)), tuple(range(128))))
    pytest.assume(certificate.bad_count == 2)
    pytest.assume(certificate.bound == 1 << 15)
    pytest.assume(certificate.bound_applies and certificate.bound_holds)
    pytest.assume(certificate.zero_error_verified)
    pytest.assume(compute_error_map(code).bad_count == 0)
    kept = np.ix_(np.asarray(code.kept[0]), np.asarray(code.kept[1]))
    pytest.assume(not error_map.bad[kept].any())

    report = verify_privacy(code)
    pytest.assume(report.verdict)
    pytest.assume(report.method == "exhaustive")
    pytest.assume(report.mismatches == {1: 0, 2: 0})


def test_too_few_good_pairs() -> None:
    base = build_sw_code(6, 0.2)
    error_map = ErrorMap(6, np.ones((64, 64), dtype=bool), Fraction(1), {})

    with pytest.raises(ExpurgationError) as error:
        expurgate(base, error_map)
    pytest.assume(error.value.good_count == 0)
    pytest.assume(error.value.needed == 32 * 32)


def test_kept_sets_must_match_the_message_length() -> None:
    with pytest.raises(ValueError):
        ExpurgatedPirCode(build_sw_code(6, 0.2), range(31), range(32))
