"""Tests of the workbench commands and their exit codes."""

import csv
import json
from fractions import Fraction

import pytest
from hydra.core.config_store import ConfigStore
from omegaconf import OmegaConf

from pirtradeoff.cli import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_UNWRITABLE,
    EXIT_VERDICT,
    BoundsConfig,
    CurveConfig,
    ExpurgateConfig,
    MdCheckConfig,
    PrivacyAuditConfig,
    SimulateConfig,
    cmd_bounds,
    cmd_curve,
    cmd_expurgate,
    cmd_md_check,
    cmd_privacy_audit,
    cmd_simulate,
    register_configs,
    run_command,
    to_config,
)
from pirtradeoff.core.codes.serialization import load_code, save_code
from pirtradeoff.core.codes.sw_code import build_sw_code
from pirtradeoff.core.codes.symmetrized_code import symmetrize
from pirtradeoff.core.inner_bound import build_canonical_aux, canonical_rates
from pirtradeoff.core.probability import save_pmf

RECON = ["X0,X1,Y1", "X0,X2,Y2", "X0,X1,Y2", "X0,X2,Y1"]


def _read_json(path) -> dict:
    with open(path) as file:
        return json.load(file)


def test_bounds_to_stdout(capsys) -> None:
    code = cmd_bounds(BoundsConfig(alpha=1.5, beta=0.75))
    report = json.loads(capsys.readouterr().out)

    pytest.assume(code == EXIT_OK)
    pytest.assume(report["linear"]["slack"] == pytest.approx(0.0, abs=1e-9))
    pytest.assume(report["outer"]["verdict"])
    pytest.assume(report["outer_alpha_floor"] == pytest.approx(4 / 3))


def test_bounds_verdicts(tmp_path) -> None:
    out = str(tmp_path / "bounds.json")

    pytest.assume(cmd_bounds(BoundsConfig(alpha=0.0, beta=0.5, out=out)) == EXIT_OK)
    pytest.assume(_read_json(out)["outer_alpha_floor"] is None)
    pytest.assume(not _read_json(out)["outer"]["verdict"])
    pytest.assume(cmd_bounds(BoundsConfig(alpha=0.0, beta=0.5, out=out, strict=True)) == EXIT_VERDICT)
    # the linear bound never turns a strict run into a failure
    pytest.assume(cmd_bounds(BoundsConfig(alpha=1.44, beta=0.75, out=out, strict=True)) == EXIT_OK)
    pytest.assume(cmd_bounds(BoundsConfig(alpha=float("nan"), beta=1.0)) == EXIT_INVALID)


def test_curve(tmp_path) -> None:
    out = tmp_path / "curve.csv"

    pytest.assume(cmd_curve(CurveConfig(steps=2, out=str(out))) == EXIT_OK)
    with open(out, newline="") as file:
        rows = list(csv.DictReader(file))
    pytest.assume(len(rows) == 2)
    pytest.assume([float(row["p"]) for row in rows] == [0.0, 1.0])

    pytest.assume(cmd_curve(CurveConfig(p_min=0.5, p_max=0.5, out=str(out))) == EXIT_INVALID)
    pytest.assume(cmd_curve(CurveConfig(steps=1, out=str(out))) == EXIT_INVALID)
    unwritable = str(tmp_path / "missing" / "curve.csv")
    pytest.assume(cmd_curve(CurveConfig(steps=3, out=unwritable)) == EXIT_UNWRITABLE)


def test_md_check(tmp_path) -> None:
    scheme = build_canonical_aux(Fraction(1, 2))
    rates = canonical_rates(scheme)
    dist, good, low = tmp_path / "dist.json", tmp_path / "rates.json", tmp_path / "low.json"
    save_pmf(scheme.joint(), str(dist))
    good.write_text(json.dumps(rates.binned().to_json()))
    lowered = rates.binned().to_json()
    lowered["R"]["Y1"] -= 0.05
    low.write_text(json.dumps(lowered))
    out = tmp_path / "report.json"

    def config(rates_path, strict: bool = False) -> MdCheckConfig:
        return MdCheckConfig(
            dist=str(dist),
            rates=str(rates_path),
            recon=RECON,
            source=["V1", "V2"],
            out=str(out),
            strict=strict,
        )

    pytest.assume(cmd_md_check(config(good)) == EXIT_OK)
    pytest.assume(_read_json(out)["verdict"])
    pytest.assume(cmd_md_check(config(low)) == EXIT_OK)
    pytest.assume(_read_json(out)["failure_class"] is not None)
    pytest.assume(cmd_md_check(config(low, strict=True)) == EXIT_VERDICT)

    malformed = tmp_path / "malformed.json"
    malformed.write_text('{"R": [1, 2]')
    pytest.assume(cmd_md_check(config(malformed)) == EXIT_INVALID)
    pytest.assume(cmd_md_check(config(tmp_path / "absent.json")) == EXIT_INVALID)
    pytest.assume(
        cmd_md_check(MdCheckConfig(dist=str(dist), rates=str(good), recon=[" , "])) == EXIT_INVALID
    )


def test_simulate(tmp_path) -> None:
    out = tmp_path / "report.json"

    pytest.assume(cmd_simulate(SimulateConfig(L=8, delta=0.2, trials=20, out=str(out))) == EXIT_OK)
    report = _read_json(out)
    pytest.assume(report["pe"] == 0.0)
    pytest.assume(report["trials"] == 20)
    pytest.assume(report["seeds"]["root"] == 7)
    pytest.assume(report["seeds"]["code"]["seeds"] == {"y1": 7, "y2": 8})

    config = SimulateConfig(L=4, delta=0.2, trials=5, symmetrized=True, out=str(out))
    pytest.assume(cmd_simulate(config) == EXIT_OK)
    report = _read_json(out)
    pytest.assume(report["seeds"]["code"]["kind"] == "symmetrized")
    pytest.assume(report["storage_bits"][0] == report["storage_bits"][1])

    pytest.assume(cmd_simulate(SimulateConfig(L=3, out=str(out))) == EXIT_INVALID)
    pytest.assume(cmd_simulate(SimulateConfig(delta=0.7, out=str(out))) == EXIT_INVALID)


def test_privacy_audit(tmp_path) -> None:
    out = tmp_path / "privacy.json"

    pytest.assume(cmd_privacy_audit(PrivacyAuditConfig(L=4, out=str(out))) == EXIT_OK)
    pytest.assume(_read_json(out)["privacy"]["verdict"])

    code_path = tmp_path / "code.json"
    save_code(symmetrize(build_sw_code(4, 0.2)), str(code_path))
    config = PrivacyAuditConfig(code=str(code_path), max_message_length=4, out=str(out))
    pytest.assume(cmd_privacy_audit(config) == EXIT_OK)
    pytest.assume(_read_json(out)["privacy"]["method"] == "components")

    too_long = PrivacyAuditConfig(L=12, max_message_length=10, out=str(out))
    pytest.assume(cmd_privacy_audit(too_long) == EXIT_INVALID)


def test_malformed_code_file_and_internal_errors(tmp_path, monkeypatch) -> None:
    code_path = tmp_path / "code.json"
    code_path.write_text(json.dumps({"kind": "sw", "L": 4, "delta": 0.2, "seeds": [1, 2]}))
    config = PrivacyAuditConfig(code=str(code_path))
    pytest.assume(cmd_privacy_audit(config) == EXIT_INVALID)

    # only input errors map to an exit code
    def broken(point: object) -> None:
        raise KeyError("alpha_plus_beta")

    monkeypatch.setattr("pirtradeoff.cli.check_outer", broken)
    with pytest.raises(KeyError):
        cmd_bounds(BoundsConfig(alpha=1.5, beta=0.75))


def test_expurgate(tmp_path) -> None:
    out, certificate = tmp_path / "code.json", tmp_path / "certificate.json"
    config = ExpurgateConfig(L=6, delta=0.2, out=str(out), certificate_out=str(certificate))

    pytest.assume(cmd_expurgate(config) == EXIT_OK)
    pytest.assume(_read_json(certificate)["expurgated"])
    pytest.assume(_read_json(certificate)["zero_error_verified"])
    pytest.assume(load_code(str(out)).message_length == 5)

    pytest.assume(cmd_expurgate(ExpurgateConfig(L=11)) == EXIT_INVALID)


def test_configs() -> None:
    register_configs()
    names = ConfigStore.instance().list("/")
    pytest.assume("bounds_schema.yaml" in names)
    pytest.assume("expurgate_schema.yaml" in names)

    config = to_config(BoundsConfig, OmegaConf.create({"alpha": 1.0, "beta": 1.0, "hydra": {}}))
    pytest.assume(config == BoundsConfig(alpha=1.0, beta=1.0))
    pytest.assume(to_config(BoundsConfig, config) is config)
    pytest.assume(run_command("unknown", config) == EXIT_INVALID)
    pytest.assume(run_command("bounds", {"alpha": 1.0, "beta": 1.0}) == EXIT_OK)
