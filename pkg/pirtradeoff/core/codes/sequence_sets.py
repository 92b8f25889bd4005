"""Fixed-length indexing of the most probable sequences of a memoryless source.

Sequences are grouped by type class (their symbol counts). Type classes are
admitted whole, most probable sequences first, until the next class no longer
fits in the 2^bits - 1 indices; the last index is an escape for sequences
left out. The admitted set holds every sequence at least as probable as any
sequence it leaves out.

Inside a class, a sequence is ranked in the combinatorial number system: for
each symbol, from the last to the first, the positions it occupies among the
positions still unassigned form a subset ranked in colex order, and the
subset ranks are combined in mixed radix.
"""

import bisect
import functools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from pirtradeoff.core.codes.errors import InfeasibleCodeError
from pirtradeoff.settings import TOLERANCES

logger = logging.getLogger(__name__)

Composition = Tuple[int, ...]

CACHE_SIZE = 1 << 16


def rate_bits(length: int, rate: float) -> int:
    """ceil(length * rate), insensitive to float noise on exact products."""
    return max(int(math.ceil(length * rate - TOLERANCES.comparison)), 0)


def _compositions(length: int, parts: int) -> List[Composition]:
    if parts == 1:
        return [(length,)]
    result = []
    for first in range(length + 1):
        for rest in _compositions(length - first, parts - 1):
            result.append((first,) + rest)
    return result


def rank_subset(positions: Sequence[int]) -> int:
    """Colex rank of a sorted subset of {0, 1, ...}."""
    return sum(math.comb(position, i + 1) for i, position in enumerate(positions))


def unrank_subset(rank: int, size: int) -> List[int]:
    """Inverse of rank_subset for subsets of the given size."""
    positions = []
    for i in range(size, 0, -1):
        position = i - 1
        while math.comb(position + 1, i) <= rank:
            position += 1
        rank -= math.comb(position, i)
        positions.append(position)
    return positions[::-1]


class TypeClassIndex:
    """Indexes the most probable sequences of length `length` over symbols
    0..m-1 with the given probabilities, in `bits` bits.

    Args:
        length: sequence length.
        symbol_probs: probability of each symbol.
        bits: size of the index in bits.

    Raises:
        InfeasibleCodeError: if the most likely type class does not fit.
    """

    def __init__(self, length: int, symbol_probs: Sequence[float], bits: int) -> None:
        if length < 1:
            raise ValueError(f"Sequence length must be positive, got {length}")
        probs = np.asarray([float(p) for p in symbol_probs], dtype=np.float64)
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > TOLERANCES.comparison:
            raise ValueError(f"Symbol probabilities {probs} are not a pmf")

        self._length = length
        self._probs = probs
        self.rank = functools.lru_cache(maxsize=CACHE_SIZE)(self._rank)
        self.unrank = functools.lru_cache(maxsize=CACHE_SIZE)(self._unrank)
        self._bits = bits
        self._escape = (1 << bits) - 1

        support = probs > 0
        log_probs = np.where(support, np.log2(np.where(support, probs, 1.0)), -np.inf)
        classes = [
            c
            for c in _compositions(length, len(probs))
            if all(count == 0 or support[s] for s, count in enumerate(c))
        ]

        def sequence_log_prob(composition: Composition) -> float:
            return float(
                sum(count * log_probs[s] for s, count in enumerate(composition) if count)
            )

        # most probable sequences first, ties in a fixed order
        classes.sort(key=lambda c: (-round(sequence_log_prob(c), 9), c))

        self._classes: List[Composition] = []
        self._offsets: List[int] = []
        admitted = 0
        for composition in classes:
            size = self.class_size(composition)
            if admitted + size > self._escape:
                break
            self._classes.append(composition)
            self._offsets.append(admitted)
            admitted += size
        self._size = admitted
        self._positions: Dict[Composition, int] = {
            c: i for i, c in enumerate(self._classes)
        }

        mode = max(classes, key=lambda c: (self.class_log_mass(c), c))
        if mode not in self._positions:
            needed = 0
            for composition in classes:
                needed += self.class_size(composition)
                if composition == mode:
                    break
            min_bits = math.ceil(math.log2(needed + 1))
            entropy = float(-np.sum(probs[support] * np.log2(probs[support])))
            min_delta = max(min_bits / length - entropy, 0.0)
            raise InfeasibleCodeError(
                f"{bits} bits cannot index the likely sequences of length {length}; "
                f"needs {min_bits} bits, delta >= {min_delta:.4f}",
                min_delta=min_delta,
            )

        logger.debug(
            f"Indexed {admitted} sequences of length {length} "
            f"in {len(self._classes)} type classes with {bits} bits"
        )

    @property
    def bits(self) -> int:
        return self._bits

    @property
    def escape(self) -> int:
        return self._escape

    @property
    def size(self) -> int:
        """Number of admitted sequences."""
        return self._size

    def class_size(self, composition: Composition) -> int:
        size = math.factorial(self._length)
        for count in composition:
            size //= math.factorial(count)
        return size

    def class_log_mass(self, composition: Composition) -> float:
        """log2 of the total probability of a type class."""
        if any(count and self._probs[s] == 0 for s, count in enumerate(composition)):
            return -math.inf
        return math.log2(self.class_size(composition)) + sum(
            count * math.log2(self._probs[s])
            for s, count in enumerate(composition)
            if count
        )

    def admitted_mass(self) -> float:
        """Probability that a random sequence is admitted."""
        return float(sum(2 ** self.class_log_mass(c) for c in self._classes))

    def contains(self, sequence: Sequence[int]) -> bool:
        return self._composition(sequence) in self._positions

    def _composition(self, sequence: Sequence[int]) -> Composition:
        counts = [0] * len(self._probs)
        for symbol in sequence:
            counts[symbol] += 1
        return tuple(counts)

    def _rank(self, sequence: Tuple[int, ...]) -> int:
        """Index of a sequence, the escape index when it is not admitted."""
        if len(sequence) != self._length:
            raise ValueError(f"Sequence of length {len(sequence)}, expected {self._length}")
        composition = self._composition(sequence)
        position = self._positions.get(composition)
        if position is None:
            return self._escape

        free = list(range(self._length))
        rank = 0
        for symbol in range(len(composition) - 1, 0, -1):
            count = composition[symbol]
            chosen = [i for i, p in enumerate(free) if sequence[p] == symbol]
            rank = rank * math.comb(len(free), count) + rank_subset(chosen)
            chosen_set = set(chosen)
            free = [p for i, p in enumerate(free) if i not in chosen_set]
        return self._offsets[position] + rank

    def _unrank(self, index: int) -> Optional[Tuple[int, ...]]:
        """Sequence of an index, None for the escape or an unused index."""
        if not 0 <= index < self._size:
            return None
        position = bisect.bisect_right(self._offsets, index) - 1
        composition = self._classes[position]
        rank = index - self._offsets[position]

        # radices in the order symbols were chained by rank()
        radices = []
        free_count = self._length
        for symbol in range(len(composition) - 1, 0, -1):
            radices.append(math.comb(free_count, composition[symbol]))
            free_count -= composition[symbol]
        digits = []
        for radix in reversed(radices):
            digits.append(rank % radix)
            rank //= radix
        digits.reverse()

        sequence = [0] * self._length
        free = list(range(self._length))
        for digit, symbol in zip(digits, range(len(composition) - 1, 0, -1)):
            chosen = unrank_subset(digit, composition[symbol])
            chosen_set = set(chosen)
            for i in chosen:
                sequence[free[i]] = symbol
            free = [p for i, p in enumerate(free) if i not in chosen_set]
        return tuple(sequence)
