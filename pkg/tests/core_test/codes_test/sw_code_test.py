"""Tests of the lossless-plus-binning code."""

import gc
import weakref
from typing import Any, Tuple

import pytest

from pirtradeoff.core.codes.pir_code import ATYPICAL, FAILURE_MODES
from pirtradeoff.core.codes.sw_code import (
    SwPirCode,
    SwSeeds,
    apply_table,
    bits_to_mask,
    build_sw_code,
    mask_to_bits,
    sw_decode,
)
from pirtradeoff.core.simulation import (
    compute_error_map,
    retrieve,
    run_retrieval,
    verify_privacy,
)


class SwappedAnswerCode(SwPirCode):
    """Database 1 answers with the other X description when message 2 is
    wanted, so its view depends on the desired message."""

    def respond(self, k: int, queries: Tuple[Any, Any], stored: Tuple[Any, Any]) -> Tuple[Any, Any]:
        first = 3 - queries[0] if k == 2 else queries[0]
        return self.answer(1, first, stored[0]), self.answer(2, queries[1], stored[1])


def test_sizes() -> None:
    code = build_sw_code(16, 0.1)

    pytest.assume(code.y_bits(1) == 13)
    pytest.assume(code.y_bits(2) == 13)
    pytest.assume(code.pair_index.bits == 26)
    pytest.assume(code.x_index(1).bits == 15)
    pytest.assume(code.storage_bits() == (26, 26))
    pytest.assume(code.answer_bits(1, 2) == 15)
    pytest.assume(code.answer_bits(2, 1) == 13)


@pytest.mark.parametrize("length, delta", [(3, 0.1), (8, 0.0), (8, 0.6)])
def test_invalid_parameters(length: int, delta: float) -> None:
    with pytest.raises(ValueError):
        build_sw_code(length, delta)


def test_bit_masks() -> None:
    pytest.assume(mask_to_bits(0b1101, 5) == (1, 0, 1, 1, 0))
    pytest.assume(bits_to_mask((1, 0, 1, 1, 0)) == 0b1101)
    # and of the first and the negation of the second
    table = {(0, 0): (0,), (0, 1): (0,), (1, 0): (1,), (1, 1): (0,)}
    pytest.assume(apply_table(table, 0b1100, 0b1010, 4) == 0b0100)


def test_descriptions_follow_the_bit_maps() -> None:
    code = build_sw_code(8, 0.2)
    w1, w2 = 0b11001010, 0b10100110
    masks = code.descriptions(w1, w2)

    pytest.assume(masks["X1"] == w1 & w2)
    pytest.assume(masks["X2"] == ~w1 & ~w2 & 0xFF)
    pytest.assume(masks["Y1"] == w1 & ~w2 & 0xFF)
    pytest.assume(masks["Y2"] == ~w1 & w2 & 0xFF)


@pytest.mark.parametrize("length", [6, 8])
def test_full_width_bins_decode_without_error(length: int) -> None:
    code = build_sw_code(length, 0.2)

    for k in (1, 2):
        for seed in range(4):
            transcript = retrieve(code, k, (0b101101 + seed, 0b011010 ^ seed), seed)
            pytest.assume(transcript.success)
            pytest.assume(transcript.failure is None)

    if length == 6:
        error_map = compute_error_map(code)
        pytest.assume(error_map.bad_count == 0)
        pytest.assume(error_map.epsilon == 0)


def test_degenerate_bins_wider_than_messages() -> None:
    code = build_sw_code(4, 0.5)

    pytest.assume(code.y_bits(1) == 5)
    pytest.assume(compute_error_map(code).epsilon == 0)


def test_atypical_messages() -> None:
    code = build_sw_code(16, 0.1)
    stored = code.store(0, 0)

    # X2 is all ones, far outside the indexed X sequences
    transcript = run_retrieval(code, 1, (0, 0), (2, 2))
    pytest.assume(not transcript.success)
    pytest.assume(transcript.failure == ATYPICAL)
    pytest.assume(code.answer(1, 2, stored[0]) == code.x_index(2).escape)


def test_short_bins_have_errors() -> None:
    code = build_sw_code(6, 0.1)
    error_map = compute_error_map(code)

    pytest.assume(code.x_index(1).bits == 6)
    pytest.assume(error_map.bad[63, 63])
    pytest.assume(0 < error_map.epsilon < 1)
    pytest.assume(set(k for k, _ in error_map.errors_by_query) <= {1, 2})


def test_bin_decoder_lists_survivors() -> None:
    code = build_sw_code(16, 0.1)
    w1, w2 = 0b1010011001011100, 0b0110010110100011
    masks = code.descriptions(w1, w2)
    bin_index = code.y_hash(1).digest(masks["Y1"], code.y_bits(1))

    result = sw_decode(code, bin_index, masks["X1"], which=1, side=1)
    pytest.assume(result.candidates >= 1)
    pytest.assume(result.failure is None or result.failure in FAILURE_MODES)
    # a wrong survivor needs the true sequence to be consistent as well
    pytest.assume(result.sequence == masks["Y1"] or result.candidates > 1)


def test_seeds_change_the_bins() -> None:
    first = build_sw_code(10, 0.1, SwSeeds(y1=0, y2=1))
    second = build_sw_code(10, 0.1, SwSeeds(y1=5, y2=6))

    pytest.assume(first.y_hash(1) != second.y_hash(1))
    pytest.assume(first.to_json()["seeds"] == {"y1": 0, "y2": 1})
    pytest.assume(second.to_json() == {"kind": "sw", "L": 10, "delta": 0.1, "seeds": {"y1": 5, "y2": 6}})


def test_privacy_audit() -> None:
    honest = build_sw_code(4, 0.2)
    report = verify_privacy(honest)

    pytest.assume(report.verdict)
    pytest.assume(report.method == "exhaustive")
    pytest.assume(report.mismatches == {1: 0, 2: 0})

    swapped = verify_privacy(SwappedAnswerCode(4, 0.2))
    pytest.assume(not swapped.verdict)
    pytest.assume(not swapped.databases[1])
    pytest.assume(swapped.databases[2])
    pytest.assume(swapped.mismatches[1] > 0)

    with pytest.raises(ValueError):
        verify_privacy(build_sw_code(6, 0.2), max_message_length=4)


def test_caches_belong_to_each_code() -> None:
    code = build_sw_code(8, 0.2)
    other = build_sw_code(8, 0.2)
    stored = code.store(3, 5)
    code.answer(1, 1, stored[0])

    pytest.assume(code.descriptions.cache_info().currsize == 1)
    pytest.assume(other.descriptions.cache_info().currsize == 0)
    pytest.assume(other.pair_index.rank.cache_info().currsize == 0)

    references = [weakref.ref(code), weakref.ref(code.pair_index)]
    del code
    gc.collect()
    pytest.assume(all(reference() is None for reference in references))


def test_all_ones_side_information_forces_zeros() -> None:
    code = build_sw_code(16, 0.1)
    full = (1 << 16) - 1
    # both messages all ones: X1 is all ones and Y1 all zeros
    masks = code.descriptions(full, full)
    bin_index = code.y_hash(1).digest(0, code.y_bits(1))

    result = sw_decode(code, bin_index, full, which=1, side=1)
    pytest.assume(masks["X1"] == full and masks["Y1"] == 0)
    pytest.assume(result.sequence == 0)
    pytest.assume(result.failure is None)
    pytest.assume(result.candidates == 1)


def test_corrupted_bin_index() -> None:
    code = build_sw_code(16, 0.1)
    w1, w2 = 0b1010011001011100, 0b0110010110100011
    masks = code.descriptions(w1, w2)
    bits = code.y_bits(1)
    corrupted = code.y_hash(1).digest(masks["Y1"], bits) ^ 1

    result = sw_decode(code, corrupted, masks["X1"], which=1, side=1)
    pytest.assume(result.sequence != masks["Y1"])
    pytest.assume(
        result.failure is not None
        or code.y_hash(1).digest(result.sequence, bits) == corrupted
    )
