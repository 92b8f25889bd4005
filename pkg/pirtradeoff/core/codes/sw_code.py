"""Finite-length PIR code with lossless storage at database 1 and
Slepian-Wolf bins at database 2.

Messages are L-bit integers, bit i being the i-th symbol. Each symbol pair of
the two messages is mapped to the bits of X1, X2, Y1, Y2; database 1 stores
the index of (X1^L, X2^L) among its most probable sequences and database 2
stores the bin indices of Y1^L and Y2^L. Query q makes database 1 send the
index of X_q^L alone and database 2 send the bin of Y_q^L.
"""

import functools
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jax

from pirtradeoff.core.codes.binning import MultiplyShiftHash
from pirtradeoff.core.codes.errors import InfeasibleCodeError
from pirtradeoff.core.codes.pir_code import (
    AMBIGUITY,
    ATYPICAL,
    COLLISION,
    QUERY_SUPPORT,
    Decoding,
    PirCode,
)
from pirtradeoff.core.codes.sequence_sets import TypeClassIndex, rate_bits
from pirtradeoff.core.inner_bound import canonical_message_joint
from pirtradeoff.core.probability import (
    JointPmf,
    conditional,
    conditional_entropy,
    entropy,
    is_deterministic_function,
    marginal,
)
from pirtradeoff.settings import TOLERANCES
from pirtradeoff.types import Message, Table

logger = logging.getLogger(__name__)

MIN_LENGTH = 4
MAX_DELTA = 0.5
CACHE_SIZE = 1 << 16


@dataclass(frozen=True)
class SwSeeds:
    """Seeds of the two bin hashes of database 2."""

    y1: int = 0
    y2: int = 1


@dataclass(frozen=True)
class SwDecodeResult:
    sequence: Optional[int]
    failure: Optional[str] = None
    candidates: int = 0


def popcount(value: int) -> int:
    return bin(value).count("1")


def mask_to_bits(mask: int, length: int) -> Tuple[int, ...]:
    return tuple((mask >> i) & 1 for i in range(length))


def bits_to_mask(bits: Sequence[int]) -> int:
    return sum(bit << i for i, bit in enumerate(bits))


def apply_table(table: Table, first: int, second: int, length: int) -> int:
    """Applies a binary function of two bit-sequences position by position."""
    full = (1 << length) - 1
    result = 0
    for (a, b), (value,) in table.items():
        if value:
            result |= (first if a else ~first & full) & (second if b else ~second & full)
    return result


class SwPirCode(PirCode):
    """Lossless-plus-binning PIR code at block length L.

    Args:
        length: message length L.
        delta: rate margin in bits per symbol above the entropies.
        seeds: seeds of the database-2 bin hashes.
    """

    def __init__(self, length: int, delta: float, seeds: SwSeeds = SwSeeds()) -> None:
        if length < MIN_LENGTH:
            raise ValueError(f"L must be at least {MIN_LENGTH}, got {length}")
        if not 0 < delta <= MAX_DELTA:
            raise ValueError(f"delta must lie in (0, {MAX_DELTA}], got {delta}")
        self._length = length
        self._delta = delta
        self._seeds = seeds
        self._joint = joint = canonical_message_joint()
        self.descriptions = functools.lru_cache(maxsize=CACHE_SIZE)(self._descriptions)
        self._x_mask_from_storage = functools.lru_cache(maxsize=CACHE_SIZE)(
            self._x_mask_from_index
        )

        # symbol maps of the message pair and reconstruction tables
        self._maps: Dict[str, Table] = {}
        for name in ("X1", "X2", "Y1", "Y2"):
            holds, table = is_deterministic_function(joint, [name], ["V1", "V2"])
            assert holds and table is not None
            self._maps[name] = table
        self._reconstruct: Dict[Tuple[int, int, int], Table] = {}
        for k, supported in QUERY_SUPPORT.items():
            for q1, q2 in supported:
                holds, table = is_deterministic_function(
                    joint, [f"V{k}"], [f"X{q1}", f"Y{q2}"]
                )
                if not holds or table is None:
                    raise ValueError(f"V{k} is not determined by X{q1}, Y{q2}")
                self._reconstruct[(k, q1, q2)] = table

        # database 1: (X1, X2) pairs as symbols of a ternary source
        pair = marginal(joint, ["X1", "X2"])
        self._pair_symbols = sorted(pair.mass)
        self._pair_ids = {outcome: i for i, outcome in enumerate(self._pair_symbols)}
        self._pair_entropy = entropy(joint, ["X1", "X2"])
        self._x_entropy = {q: entropy(joint, [f"X{q}"]) for q in (1, 2)}

        try:
            self._pair_index = TypeClassIndex(
                length,
                [pair.mass[outcome] for outcome in self._pair_symbols],
                rate_bits(length, self._pair_entropy + delta),
            )
            self._x_index = {
                q: TypeClassIndex(
                    length,
                    [
                        marginal(joint, [f"X{q}"]).probability((value,))
                        for value in range(2)
                    ],
                    rate_bits(length, self._x_entropy[q] + delta),
                )
                for q in (1, 2)
            }
        except InfeasibleCodeError as error:
            raise InfeasibleCodeError(
                f"No code at L={length}, delta={delta}: {error}", error.min_delta
            ) from error

        # database 2: bins of Y_j with side information X_q
        self._y_given_x = {
            (j, q): conditional_entropy(joint, [f"Y{j}"], [f"X{q}"])
            for j in (1, 2)
            for q in (1, 2)
        }
        self._y_law = {
            (j, q): conditional(joint, [f"Y{j}"], [f"X{q}"]) for j in (1, 2) for q in (1, 2)
        }
        self._y_bits = {
            j: rate_bits(length, max(self._y_given_x[(j, q)] for q in (1, 2)) + delta)
            for j in (1, 2)
        }
        self._y_hash = {
            j: MultiplyShiftHash.from_key(jax.random.PRNGKey(seed), length)
            for j, seed in ((1, seeds.y1), (2, seeds.y2))
        }
        logger.debug(
            f"SW code L={length} delta={delta}: storage {self.storage_bits()} bits, "
            f"answers X {self._x_index[1].bits} / Y {self._y_bits[1]} bits"
        )

    @property
    def message_length(self) -> int:
        return self._length

    @property
    def delta(self) -> float:
        return self._delta

    @property
    def seeds(self) -> SwSeeds:
        return self._seeds

    @property
    def joint(self) -> JointPmf:
        return self._joint

    @property
    def pair_index(self) -> TypeClassIndex:
        return self._pair_index

    def x_index(self, q: int) -> TypeClassIndex:
        return self._x_index[q]

    def y_hash(self, j: int) -> MultiplyShiftHash:
        return self._y_hash[j]

    def y_bits(self, j: int) -> int:
        return self._y_bits[j]

    def conditional_entropy(self, which: int, side: int) -> float:
        """H(Y_which | X_side)."""
        return self._y_given_x[(which, side)]

    def y_law(self, which: int, side: int) -> Dict[Tuple[int, ...], Dict[Tuple[int, ...], Any]]:
        """P(Y_which | X_side) as rows keyed by the side symbol."""
        return self._y_law[(which, side)]

    def storage_bits(self) -> Tuple[int, int]:
        return self._pair_index.bits, self._y_bits[1] + self._y_bits[2]

    def answer_bits(self, database: int, query: Any) -> int:
        if database == 1:
            return self._x_index[query].bits
        return self._y_bits[query]

    def _descriptions(self, w1: Message, w2: Message) -> Dict[str, int]:
        """Bit masks of X1, X2, Y1, Y2 for a message pair."""
        return {
            name: apply_table(table, w1, w2, self._length)
            for name, table in self._maps.items()
        }

    def _pair_sequence(self, x1: int, x2: int) -> Tuple[int, ...]:
        return tuple(
            self._pair_ids[((x1 >> i) & 1, (x2 >> i) & 1)] for i in range(self._length)
        )

    def store(self, w1: Message, w2: Message) -> Tuple[Tuple[int], Tuple[int, int]]:
        masks = self.descriptions(w1, w2)
        index = self._pair_index.rank(self._pair_sequence(masks["X1"], masks["X2"]))
        bins = tuple(
            self._y_hash[j].digest(masks[f"Y{j}"], self._y_bits[j]) for j in (1, 2)
        )
        return (index,), bins  # type: ignore

    def _x_mask_from_index(self, index: int, q: int) -> Optional[int]:
        sequence = self._pair_index.unrank(index)
        if sequence is None:
            return None
        return bits_to_mask(
            [self._pair_symbols[symbol][q - 1] for symbol in sequence]
        )

    def answer(self, database: int, query: Any, stored: Any) -> int:
        if database == 1:
            x_mask = self._x_mask_from_storage(stored[0], query)
            if x_mask is None:
                return self._x_index[query].escape
            return self._x_index[query].rank(mask_to_bits(x_mask, self._length))
        return stored[query - 1]

    def decode(
        self, k: int, queries: Tuple[Any, Any], answers: Tuple[Any, Any]
    ) -> Decoding:
        q1, q2 = queries
        x_sequence = self._x_index[q1].unrank(answers[0])
        if x_sequence is None:
            return Decoding(None, ATYPICAL)
        x_mask = bits_to_mask(x_sequence)
        result = sw_decode(self, answers[1], x_mask, which=q2, side=q1)
        if result.sequence is None:
            return Decoding(None, result.failure)
        table = self._reconstruct[(k, q1, q2)]
        return Decoding(apply_table(table, x_mask, result.sequence, self._length))

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": "sw",
            "L": self._length,
            "delta": self._delta,
            "seeds": {"y1": self._seeds.y1, "y2": self._seeds.y2},
        }


def build_sw_code(length: int, delta: float, seeds: SwSeeds = SwSeeds()) -> SwPirCode:
    """Builds the lossless-plus-binning code.

    Args:
        length: message length L >= 4.
        delta: rate margin in (0, 0.5].
        seeds: seeds of the bin hashes.

    Returns:
        The code, with ceil(L (H(X1,X2) + delta)) bits at database 1 and two
        bins of ceil(L (H(Y1|X1) + delta)) bits at database 2.
    """
    return SwPirCode(length, delta, seeds)


def _sequence_cost(
    code: SwPirCode, candidate: int, side_info: int, which: int, side: int
) -> float:
    """-log2 P(y | x) of a candidate, inf when a forced position is violated."""
    length = code.message_length
    full = (1 << length) - 1
    law = code.y_law(which, side)
    cost = 0.0
    for x in (0, 1):
        x_positions = side_info if x else ~side_info & full
        row = law.get((x,), {})
        for y in (0, 1):
            count = popcount(x_positions & (candidate if y else ~candidate & full))
            if not count:
                continue
            probability = row.get((y,), 0)
            if probability == 0:
                return math.inf
            cost -= count * math.log2(float(probability))
    return cost


def sw_decode(
    code: SwPirCode,
    bin_index: int,
    side_info: int,
    which: int,
    side: int,
    delta: Optional[float] = None,
) -> SwDecodeResult:
    """Recovers Y_which^L from its bin index and X_side^L.

    The bin's members are listed by inverting the hash. Members violating a
    position forced by the side information are discarded; those left whose
    conditional self-information is at most L (H(Y|X) + delta) form the
    typical list. A single typical member is returned. With no typical member,
    a single member consistent with the side information is returned.

    Args:
        code: the code whose bins are decoded.
        bin_index: bin of Y_which^L.
        side_info: X_side^L as a bit mask.
        which: 1 or 2, the Y description.
        side: 1 or 2, the X description known to the decoder.
        delta: typicality margin, the code's by default.

    Returns:
        The decoded sequence, or the failure mode: ambiguity when several
        members survive, collision when none does.
    """
    delta = code.delta if delta is None else delta
    threshold = code.message_length * (code.conditional_entropy(which, side) + delta)
    members = code.y_hash(which).members(bin_index, code.y_bits(which))

    consistent: List[int] = []
    typical: List[int] = []
    for member in members:
        cost = _sequence_cost(code, member, side_info, which, side)
        if math.isinf(cost):
            continue
        consistent.append(member)
        if cost <= threshold + TOLERANCES.comparison:
            typical.append(member)

    survivors = typical if typical else consistent
    if len(survivors) == 1:
        return SwDecodeResult(survivors[0], candidates=len(consistent))
    if len(survivors) > 1:
        return SwDecodeResult(None, AMBIGUITY, len(consistent))
    return SwDecodeResult(None, COLLISION, 0)
