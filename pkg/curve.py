"""Traces the canonical storage-retrieval curve and writes it as CSV."""

import sys

import hydra

from pirtradeoff.cli import CurveConfig, cmd_curve, register_configs

register_configs()


@hydra.main(config_path="configs/workbench/", config_name="curve")
def main(config: CurveConfig) -> None:
    sys.exit(cmd_curve(config))


if __name__ == "__main__":
    main()
