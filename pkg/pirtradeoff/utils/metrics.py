"""Defines functions to write curve data and reports to files."""

from __future__ import annotations

import csv
import json
from typing import Any, Dict, List, Mapping

from pirtradeoff.core.inner_bound import CurvePoint
from pirtradeoff.core.outer_bound import check_linear, check_outer

CURVE_HEADER = [
    "p",
    "alpha_bar",
    "beta_bar",
    "chord_alpha",
    "below_spaceshare",
    "on_envelope",
    "pareto",
    "slack_beta",
    "slack_alpha_plus_beta",
    "slack_three_alpha_plus_eight_beta",
    "slack_linear",
]


def format_number(value: Any) -> Any:
    """Floats at 9 significant digits, everything else unchanged."""
    if isinstance(value, float):
        return f"{value:.9g}"
    return value


class CSVLogger:
    """Logger to save rows of an experiment in a csv file."""

    def __init__(self, filename: str, header: List) -> None:
        """Create the csv logger, create a file and write the
        header.

        Args:
            filename: path to which the file will be saved.
            header: header of the csv file.
        """
        self._filename = filename
        self._header = header
        with open(self._filename, "w", newline="") as file:
            writer = csv.DictWriter(file, fieldnames=self._header)
            # write the header
            writer.writeheader()

    def log(self, metrics: Mapping[str, Any]) -> None:
        """Log a new row to the csv file.

        Args:
            metrics: A dictionary containing the values that
                need to be saved, keyed by column.
        """
        with open(self._filename, "a", newline="") as file:
            writer = csv.DictWriter(file, fieldnames=self._header)
            writer.writerow({key: format_number(value) for key, value in metrics.items()})


def curve_metrics(curve_point: CurvePoint) -> Dict[str, Any]:
    """Row of the curve file: the point, its chord and its bound slacks."""
    point = curve_point.point
    outer = check_outer(point)
    return {
        "p": float(curve_point.p),
        "alpha_bar": float(point.alpha_bar),
        "beta_bar": float(point.beta_bar),
        "chord_alpha": float(curve_point.chord_alpha),
        "below_spaceshare": int(curve_point.below_spaceshare),
        "on_envelope": int(curve_point.on_envelope),
        "pareto": int(curve_point.pareto),
        "slack_beta": float(outer.entry("beta").slack),
        "slack_alpha_plus_beta": float(outer.entry("alpha_plus_beta").slack),
        "slack_three_alpha_plus_eight_beta": float(
            outer.entry("three_alpha_plus_eight_beta").slack
        ),
        "slack_linear": float(check_linear(point).slack),
    }


def write_json(filename: str, data: Mapping[str, Any]) -> None:
    """Writes a report with sorted keys so identical inputs give identical bytes."""
    with open(filename, "w") as file:
        json.dump(data, file, sort_keys=True, indent=2)
        file.write("\n")
