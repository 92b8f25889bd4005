"""JSON descriptions of codes: parameters and seeds only, since every code
is rebuilt deterministically from them."""

import json
from typing import Any, Dict, Mapping

from pirtradeoff.core.codes.expurgated_code import expurgate
from pirtradeoff.core.codes.pir_code import PirCode
from pirtradeoff.core.codes.sw_code import SwSeeds, build_sw_code
from pirtradeoff.core.codes.symmetrized_code import symmetrize


def code_to_json(code: PirCode) -> Dict[str, Any]:
    return code.to_json()


def code_from_json(data: Mapping[str, Any]) -> PirCode:
    """Rebuilds a code from its description.

    Expurgated codes are rebuilt by recomputing the base code's error map.

    Raises:
        ValueError: if the description is malformed.
    """
    try:
        kind = data["kind"]
        if kind == "sw":
            seeds = data.get("seeds", {})
            return build_sw_code(
                int(data["L"]),
                float(data["delta"]),
                SwSeeds(y1=int(seeds.get("y1", 0)), y2=int(seeds.get("y2", 1))),
            )
        if kind == "symmetrized":
            return symmetrize(code_from_json(data["component"]))
        if kind == "expurgated":
            code, _ = expurgate(code_from_json(data["base"]))
            return code
    except (KeyError, TypeError, AttributeError) as error:
        raise ValueError(f"Malformed code description: {error}") from error
    raise ValueError(f"Unknown code kind {kind!r}")


def save_code(code: PirCode, path: str) -> None:
    with open(path, "w") as file:
        json.dump(code_to_json(code), file, sort_keys=True, indent=2)


def load_code(path: str) -> PirCode:
    with open(path) as file:
        return code_from_json(json.load(file))
