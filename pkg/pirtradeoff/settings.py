"""Numerical tolerances shared by every comparison of the workbench."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Tolerances for real-valued comparisons.

    Args:
        comparison: slack allowed on user facing inequality checks.
        internal: slack allowed on internally generated quantities (pmf sums,
            chain rule, nonnegativity of entropies).
        linprog: feasibility slack handed to the storage-rate linear program.
    """

    comparison: float = 1e-9
    internal: float = 1e-12
    linprog: float = 1e-10


TOLERANCES = Tolerances()
