"""Exact privacy audit of a finite-length PIR code."""

import sys

import hydra

from pirtradeoff.cli import PrivacyAuditConfig, cmd_privacy_audit, register_configs

register_configs()


@hydra.main(config_path="configs/workbench/", config_name="privacy_audit")
def main(config: PrivacyAuditConfig) -> None:
    sys.exit(cmd_privacy_audit(config))


if __name__ == "__main__":
    main()
