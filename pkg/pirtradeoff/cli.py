"""Commands of the workbench.

Each command takes its typed config, validates it, runs, writes its output
and returns the process exit code: 0 when the command completed, 1 when a
strict run found a failed verdict, 2 on invalid arguments or malformed input
and 3 when the output cannot be written. The hydra entry scripts at the
repository root only build the config and call these functions.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, TypeVar

import numpy as np
from hydra.core.config_store import ConfigStore
from hydra.utils import to_absolute_path
from omegaconf import DictConfig, OmegaConf

from pirtradeoff.core.codes.errors import ExpurgationError, InfeasibleCodeError
from pirtradeoff.core.codes.expurgated_code import expurgate
from pirtradeoff.core.codes.pir_code import PirCode
from pirtradeoff.core.codes.serialization import code_to_json, load_code
from pirtradeoff.core.codes.sw_code import MAX_DELTA, MIN_LENGTH, SwSeeds, build_sw_code
from pirtradeoff.core.codes.symmetrized_code import symmetrize
from pirtradeoff.core.inner_bound import RatePoint, trace_curve
from pirtradeoff.core.md_region import load_rates, mdstar_membership
from pirtradeoff.core.outer_bound import check_linear, check_outer, outer_alpha_floor
from pirtradeoff.core.probability import load_pmf
from pirtradeoff.core.simulation import (
    DEFAULT_AUDIT_CAP,
    compute_error_map,
    estimate_error,
    verify_privacy,
)
from pirtradeoff.settings import TOLERANCES
from pirtradeoff.utils.metrics import CURVE_HEADER, CSVLogger, curve_metrics, write_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_INVALID = 2
EXIT_UNWRITABLE = 3


class OutputError(Exception):
    """An output file could not be written."""


@dataclass
class CurveConfig:
    """Trace the canonical curve on an even grid of p."""

    p_min: float = 0.0
    p_max: float = 1.0
    steps: int = 101
    refine: bool = False
    out: str = "curve.csv"
    strict: bool = False

    def validate(self) -> None:
        if not 0.0 <= self.p_min <= self.p_max <= 1.0:
            raise ValueError(
                f"Need 0 <= p_min <= p_max <= 1, got p_min={self.p_min}, p_max={self.p_max}"
            )
        if self.steps < 2:
            raise ValueError(f"steps must be at least 2, got {self.steps}")
        if self.p_min == self.p_max:
            raise ValueError(f"Degenerate range p_min = p_max = {self.p_min}")


@dataclass
class BoundsConfig:
    """Evaluate the outer and linear bounds at one point."""

    alpha: float = 1.5
    beta: float = 0.75
    out: str = ""
    strict: bool = False

    def validate(self) -> None:
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ValueError(f"Rates must be finite, got ({self.alpha}, {self.beta})")


@dataclass
class MdCheckConfig:
    """Binned multiple-description membership of a rate file.

    `recon` lists the reconstruction sets as comma-separated names, e.g.
    "X0,X1,Y1". `descriptions` defaults to the keys of the rate file.
    """

    dist: str = "dist.json"
    rates: str = "rates.json"
    recon: List[str] = field(default_factory=list)
    descriptions: Optional[List[str]] = None
    source: Optional[List[str]] = None
    out: str = ""
    strict: bool = False

    def validate(self) -> None:
        if not self.dist or not self.rates:
            raise ValueError("Both dist and rates files are required")
        if not self.recon:
            raise ValueError("At least one reconstruction set is required")
        for recon in self.recon:
            if not [name for name in recon.split(",") if name.strip()]:
                raise ValueError(f"Empty reconstruction set {recon!r}")

    def reconstruction_sets(self) -> List[List[str]]:
        return [[name.strip() for name in recon.split(",") if name.strip()] for recon in self.recon]


def _validate_code(length: int, delta: float) -> None:
    if length < MIN_LENGTH:
        raise ValueError(f"L must be at least {MIN_LENGTH}, got {length}")
    if not 0 < delta <= MAX_DELTA:
        raise ValueError(f"delta must lie in (0, {MAX_DELTA}], got {delta}")


@dataclass
class SimulateConfig:
    """Monte Carlo run of the binning code.

    The bin hashes use seeds `seed` and `seed + 1`, the trials use `seed`.
    """

    L: int = 16
    delta: float = 0.1
    trials: int = 1000
    seed: int = 7
    symmetrized: bool = False
    out: str = "report.json"

    def validate(self) -> None:
        _validate_code(self.L, self.delta)
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")


@dataclass
class PrivacyAuditConfig:
    """Exact privacy audit of the binning code, or of a code file."""

    L: int = 8
    delta: float = 0.2
    seed: int = 7
    symmetrized: bool = False
    code: str = ""
    max_message_length: int = DEFAULT_AUDIT_CAP
    out: str = ""
    strict: bool = False

    def validate(self) -> None:
        if not self.code:
            _validate_code(self.L, self.delta)
        if self.max_message_length < 1:
            raise ValueError(
                f"max_message_length must be positive, got {self.max_message_length}"
            )


@dataclass
class ExpurgateConfig:
    """Zero-error subcode of the binning code and its certificate."""

    L: int = 8
    delta: float = 0.2
    seed: int = 7
    out: str = "code.json"
    certificate_out: str = "certificate.json"
    strict: bool = False

    def validate(self) -> None:
        _validate_code(self.L, self.delta)
        if self.L > DEFAULT_AUDIT_CAP:
            raise ValueError(
                f"L={self.L} is too large for exhaustive evaluation "
                f"(at most {DEFAULT_AUDIT_CAP})"
            )


CONFIGS: Dict[str, type] = {
    "curve": CurveConfig,
    "bounds": BoundsConfig,
    "md_check": MdCheckConfig,
    "simulate": SimulateConfig,
    "privacy_audit": PrivacyAuditConfig,
    "expurgate": ExpurgateConfig,
}

ConfigT = TypeVar("ConfigT")


def register_configs() -> None:
    """Stores the command schemas so the YAML files can extend them."""
    cs = ConfigStore.instance()
    for name, node in CONFIGS.items():
        cs.store(name=f"{name}_schema", node=node)


def to_config(config_class: Callable[..., ConfigT], config: Any) -> ConfigT:
    """Typed config from a hydra config, a mapping or an instance."""
    if isinstance(config, config_class):  # type: ignore
        return config
    if isinstance(config, DictConfig):
        config = OmegaConf.to_container(config, resolve=True)
    names = config_class.__dataclass_fields__  # type: ignore
    return config_class(**{key: value for key, value in config.items() if key in names})


def _resolve(path: str) -> str:
    return to_absolute_path(path)


def _write(path: str, writer: Callable[[str], None]) -> None:
    try:
        writer(_resolve(path))
    except OSError as error:
        raise OutputError(f"Cannot write {path}: {error}") from error


def _emit(path: str, report: Mapping[str, Any]) -> None:
    """Writes a JSON report to `path`, or prints it when no path is given."""
    if path:
        _write(path, lambda resolved: write_json(resolved, report))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))


def _run(command: Callable[[Any], int], config: Any) -> int:
    try:
        config.validate()
        return command(config)
    except OutputError as error:
        logger.error(str(error))
        return EXIT_UNWRITABLE
    except (ValueError, NotImplementedError, OSError) as error:
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_INVALID


def _sw_seeds(seed: int) -> SwSeeds:
    return SwSeeds(y1=seed, y2=seed + 1)


def _curve(config: CurveConfig) -> int:
    grid = np.linspace(config.p_min, config.p_max, config.steps).tolist()
    logger.warning(f"--- Tracing {config.steps} points on [{config.p_min}, {config.p_max}] ---")
    curve = trace_curve(grid, refine=config.refine)
    rows = [curve_metrics(point) for point in curve.points]

    def write(resolved: str) -> None:
        csv_logger = CSVLogger(resolved, CURVE_HEADER)
        for row in rows:
            csv_logger.log(row)

    _write(config.out, write)
    if curve.best_gap is not None:
        logger.warning(
            f"--- Largest gap to space-sharing {curve.best_gap[1]:.6f} at p={curve.best_gap[0]:.6f} ---"
        )
    violated = [
        row["p"]
        for row in rows
        if min(
            row["slack_beta"],
            row["slack_alpha_plus_beta"],
            row["slack_three_alpha_plus_eight_beta"],
        )
        < -TOLERANCES.comparison
    ]
    if violated:
        logger.warning(f"--- Outer bounds violated at p in {violated} ---")
        if config.strict:
            return EXIT_VERDICT
    return EXIT_OK


def cmd_curve(config: Any) -> int:
    """Writes the curve CSV with chord and bound-slack columns."""
    return _run(_curve, to_config(CurveConfig, config))


def _bounds(config: BoundsConfig) -> int:
    point = RatePoint(alpha_bar=float(config.alpha), beta_bar=float(config.beta))
    outer = check_outer(point)
    linear = check_linear(point)
    report = {
        "point": point.to_json(),
        "outer": outer.to_json(),
        "linear": linear.to_json(),
        "outer_alpha_floor": outer_alpha_floor(config.beta),
    }
    if not np.isfinite(report["outer_alpha_floor"]):
        report["outer_alpha_floor"] = None
    _emit(config.out, report)
    if config.strict and not outer.verdict:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_bounds(config: Any) -> int:
    """Reports the outer-bound and linear-bound slacks of a point."""
    return _run(_bounds, to_config(BoundsConfig, config))


def _md_check(config: MdCheckConfig) -> int:
    joint = load_pmf(_resolve(config.dist))
    rates = load_rates(_resolve(config.rates))
    descriptions = list(config.descriptions or rates.bin_rates.keys())
    report = mdstar_membership(
        joint,
        descriptions,
        config.reconstruction_sets(),
        rates,
        source=list(config.source) if config.source else None,
    )
    _emit(config.out, report.to_json())
    if not report.verdict:
        logger.warning(f"--- Rates rejected: {report.failure_class} ---")
        if config.strict:
            return EXIT_VERDICT
    return EXIT_OK


def cmd_md_check(config: Any) -> int:
    """Checks a rate file against the binned MD region of a distribution."""
    return _run(_md_check, to_config(MdCheckConfig, config))


def _sw_code(length: int, delta: float, seed: int, symmetrized: bool) -> PirCode:
    code: PirCode = build_sw_code(length, delta, _sw_seeds(seed))
    return symmetrize(code) if symmetrized else code


def _simulate(config: SimulateConfig) -> int:
    try:
        code = _sw_code(config.L, config.delta, config.seed, config.symmetrized)
    except InfeasibleCodeError as error:
        logger.error(f"{error} (minimal delta {error.min_delta})")
        return EXIT_INVALID
    report = estimate_error(
        code, config.trials, config.seed, seeds={"code": code_to_json(code)}
    )
    _emit(config.out, report.to_json())
    return EXIT_OK


def cmd_simulate(config: Any) -> int:
    """Monte Carlo error and rate estimates of the binning code."""
    return _run(_simulate, to_config(SimulateConfig, config))


def _privacy_audit(config: PrivacyAuditConfig) -> int:
    if config.code:
        code = load_code(_resolve(config.code))
    else:
        code = _sw_code(config.L, config.delta, config.seed, config.symmetrized)
    report = verify_privacy(code, config.max_message_length)
    _emit(config.out, {"code": code_to_json(code), "privacy": report.to_json()})
    if not report.verdict:
        logger.warning("--- Privacy audit failed ---")
        if config.strict:
            return EXIT_VERDICT
    return EXIT_OK


def cmd_privacy_audit(config: Any) -> int:
    """Exact comparison of each database's view under both desired messages."""
    return _run(_privacy_audit, to_config(PrivacyAuditConfig, config))


def _expurgate(config: ExpurgateConfig) -> int:
    code = build_sw_code(config.L, config.delta, _sw_seeds(config.seed))
    error_map = compute_error_map(code)
    try:
        expurgated, certificate = expurgate(code, error_map)
    except ExpurgationError as error:
        logger.warning(f"--- Expurgation failed: {error} ---")
        _emit(
            config.certificate_out,
            {
                "expurgated": False,
                "reason": str(error),
                "bad_count": error.bad_count,
                "good_count": error.good_count,
                "needed": error.needed,
                "epsilon": float(error_map.epsilon),
            },
        )
        return EXIT_VERDICT if config.strict else EXIT_OK

    _emit(config.out, code_to_json(expurgated))
    _emit(config.certificate_out, {"expurgated": True, **certificate.to_json()})
    if config.strict and not (certificate.zero_error_verified and certificate.bound_holds):
        return EXIT_VERDICT
    return EXIT_OK


def cmd_expurgate(config: Any) -> int:
    """Zero-error (L-1)-bit code from the exhaustive error map of the binning code."""
    return _run(_expurgate, to_config(ExpurgateConfig, config))


COMMANDS: Dict[str, Callable[[Any], int]] = {
    "curve": cmd_curve,
    "bounds": cmd_bounds,
    "md_check": cmd_md_check,
    "simulate": cmd_simulate,
    "privacy_audit": cmd_privacy_audit,
    "expurgate": cmd_expurgate,
}


def run_command(name: str, config: Any) -> int:
    if name not in COMMANDS:
        logger.error(f"Unknown command {name!r}, expected one of {sorted(COMMANDS)}")
        return EXIT_INVALID
    return COMMANDS[name](config)
