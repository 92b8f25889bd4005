"""Defines some types used in pirtradeoff"""

from fractions import Fraction
from typing import Dict, Sequence, Tuple, Union

import jax
from typing_extensions import TypeAlias

# Probability types
Probability: TypeAlias = Union[Fraction, float]
Outcome: TypeAlias = Tuple[int, ...]
VarSet: TypeAlias = Sequence[str]
Table: TypeAlias = Dict[Outcome, Outcome]

# Rate types
Rates: TypeAlias = Dict[str, float]

# Coding types
Message: TypeAlias = int
MessagePair: TypeAlias = Tuple[int, int]

# Others
RNGKey: TypeAlias = jax.Array
