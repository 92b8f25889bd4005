"""Monte Carlo error estimate of the binning PIR code."""

import sys

import hydra

from pirtradeoff.cli import SimulateConfig, cmd_simulate, register_configs

register_configs()


@hydra.main(config_path="configs/workbench/", config_name="simulate")
def main(config: SimulateConfig) -> None:
    sys.exit(cmd_simulate(config))


if __name__ == "__main__":
    main()
