"""Checks description rates against the binned multiple-description region."""

import sys

import hydra

from pirtradeoff.cli import MdCheckConfig, cmd_md_check, register_configs

register_configs()


@hydra.main(config_path="configs/workbench/", config_name="md_check")
def main(config: MdCheckConfig) -> None:
    sys.exit(cmd_md_check(config))


if __name__ == "__main__":
    main()
