"""Evaluates the outer bounds and the linear-code bound at one point."""

import sys

import hydra

from pirtradeoff.cli import BoundsConfig, cmd_bounds, register_configs

register_configs()


@hydra.main(config_path="configs/workbench/", config_name="bounds")
def main(config: BoundsConfig) -> None:
    sys.exit(cmd_bounds(config))


if __name__ == "__main__":
    main()
