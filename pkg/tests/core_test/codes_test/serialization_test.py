"""Tests of code descriptions."""

import pytest

from pirtradeoff.core.codes.expurgated_code import ExpurgatedPirCode, expurgate
from pirtradeoff.core.codes.serialization import code_from_json, load_code, save_code
from pirtradeoff.core.codes.sw_code import SwSeeds, build_sw_code
from pirtradeoff.core.codes.symmetrized_code import symmetrize


def test_codes_are_rebuilt_from_their_description(tmp_path) -> None:
    code = symmetrize(build_sw_code(10, 0.15, SwSeeds(y1=3, y2=4)))
    path = str(tmp_path / "code.json")
    save_code(code, path)

    loaded = load_code(path)
    pytest.assume(loaded.to_json() == code.to_json())
    pytest.assume(loaded.store(1000, 77) == code.store(1000, 77))


def test_expurgated_codes_keep_their_pairs() -> None:
    code, _ = expurgate(build_sw_code(6, 0.2))
    rebuilt = code_from_json(code.to_json())

    pytest.assume(isinstance(rebuilt, ExpurgatedPirCode))
    pytest.assume(rebuilt.kept == code.kept)


@pytest.mark.parametrize(
    "data",
    [{"kind": "sw"}, {"kind": "mystery"}, {"L": 8}, {"kind": "symmetrized"}],
)
def test_malformed_descriptions(data: dict) -> None:
    with pytest.raises(ValueError):
        code_from_json(data)


def test_malformed_file(tmp_path) -> None:
    path = tmp_path / "code.json"
    path.write_text("{not json")

    with pytest.raises(ValueError):
        load_code(str(path))
