import csv
import json
import os

import pytest

from pirtradeoff.core.inner_bound import trace_curve
from pirtradeoff.utils.metrics import (
    CURVE_HEADER,
    CSVLogger,
    curve_metrics,
    format_number,
    write_json,
)


def test_csv_logger(tmp_path) -> None:
    file_location = str(tmp_path / "curve.csv")
    csv_logger = CSVLogger(file_location, CURVE_HEADER)
    for curve_point in trace_curve([0.0, 0.5, 1.0]).points:
        csv_logger.log(curve_metrics(curve_point))

    metrics = {"bad_name": 0.0, "alpha_bar": 0.0, "beta_bar": 0.0}
    with pytest.raises(Exception):
        csv_logger.log(metrics)

    pytest.assume(os.path.exists(file_location))
    with open(file_location, newline="") as file:
        rows = list(csv.DictReader(file))

    pytest.assume(len(rows) == 3)
    pytest.assume(list(rows[0]) == CURVE_HEADER)
    pytest.assume(rows[0]["beta_bar"] == "0.75")
    pytest.assume(rows[1]["below_spaceshare"] == "1")
    pytest.assume(float(rows[2]["slack_alpha_plus_beta"]) == pytest.approx(0.0, abs=1e-9))


def test_format_number() -> None:
    pytest.assume(format_number(1 / 3) == "0.333333333")
    pytest.assume(format_number(1) == 1)
    pytest.assume(format_number("x") == "x")


def test_write_json_is_deterministic(tmp_path) -> None:
    first, second = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    write_json(first, {"b": 1, "a": [1.5, True]})
    write_json(second, {"a": [1.5, True], "b": 1})

    with open(first) as file:
        content = file.read()
    with open(second) as file:
        pytest.assume(file.read() == content)
    pytest.assume(content.endswith("\n"))
    pytest.assume(json.loads(content) == {"a": [1.5, True], "b": 1})
