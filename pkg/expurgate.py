"""Extracts a zero-error code from the binning PIR code."""

import sys

import hydra

from pirtradeoff.cli import ExpurgateConfig, cmd_expurgate, register_configs

register_configs()


@hydra.main(config_path="configs/workbench/", config_name="expurgate")
def main(config: ExpurgateConfig) -> None:
    sys.exit(cmd_expurgate(config))


if __name__ == "__main__":
    main()
