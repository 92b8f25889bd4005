"""Zero-error subcodes obtained by discarding the message pairs on which an
epsilon-error code fails.

The user recovers only the wanted message, so the kept message pairs must form
a product A1 x A2: the (L-1)-bit message u1 is sent as the u1-th element of
A1, and likewise for u2.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from pirtradeoff.core.codes.errors import ExpurgationError
from pirtradeoff.core.codes.pir_code import COLLISION, Decoding, PirCode, Query
from pirtradeoff.core.simulation import ErrorMap, compute_error_map
from pirtradeoff.types import Message

logger = logging.getLogger(__name__)

EPSILON_LIMIT = Fraction(1, 8)


class ExpurgatedPirCode(PirCode):
    """Restriction of `base` to the message pairs rows x cols.

    Args:
        base: the epsilon-error code.
        rows: kept values of w1, 2^(L-1) of them.
        cols: kept values of w2, 2^(L-1) of them.
    """

    def __init__(self, base: PirCode, rows: Sequence[int], cols: Sequence[int]) -> None:
        size = 1 << (base.message_length - 1)
        if len(rows) != size or len(cols) != size:
            raise ValueError(
                f"Expected {size} kept values per message, got {len(rows)} and {len(cols)}"
            )
        self._base = base
        self._kept = (tuple(int(r) for r in rows), tuple(int(c) for c in cols))
        self._positions = tuple({w: u for u, w in enumerate(kept)} for kept in self._kept)

    @property
    def base(self) -> PirCode:
        return self._base

    @property
    def kept(self) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        return self._kept

    @property
    def message_length(self) -> int:
        return self._base.message_length - 1

    def storage_bits(self) -> Tuple[int, int]:
        return self._base.storage_bits()

    def query_distribution(self, k: int) -> List[Tuple[Tuple[Query, Query], Any]]:
        return self._base.query_distribution(k)

    def store(self, w1: Message, w2: Message) -> Tuple[Any, Any]:
        return self._base.store(self._kept[0][w1], self._kept[1][w2])

    def answer(self, database: int, query: Query, stored: Any) -> Any:
        return self._base.answer(database, query, stored)

    def answer_bits(self, database: int, query: Query) -> int:
        return self._base.answer_bits(database, query)

    def respond(
        self, k: int, queries: Tuple[Query, Query], stored: Tuple[Any, Any]
    ) -> Tuple[Any, Any]:
        return self._base.respond(k, queries, stored)

    def decode(
        self, k: int, queries: Tuple[Query, Query], answers: Tuple[Any, Any]
    ) -> Decoding:
        decoding = self._base.decode(k, queries, answers)
        if decoding.failure is not None:
            return decoding
        message = self._positions[k - 1].get(decoding.message)
        if message is None:
            return Decoding(None, COLLISION)
        return Decoding(message)

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "expurgated", "base": self._base.to_json()}


@dataclass(frozen=True)
class ExpurgationCertificate:
    """Counts behind an expurgation and its exhaustive zero-error check.

    Args:
        bad_count: message pairs of the base code on which some supported
            query pair fails.
        bound: 2^(2L-1), the number of bad pairs an epsilon <= 1/8 code
            can have at most.
        bound_applies: whether epsilon <= 1/8.
        zero_error_verified: every kept pair decodes under every supported
            query pair.
    """

    message_length: int
    bad_count: int
    good_count: int
    epsilon: Fraction
    bound: int
    bound_applies: bool
    bound_holds: bool
    zero_error_verified: bool

    def to_json(self) -> Dict[str, Any]:
        return {
            "L": self.message_length,
            "bad_count": self.bad_count,
            "good_count": self.good_count,
            "epsilon": str(self.epsilon),
            "epsilon_float": float(self.epsilon),
            "bound": self.bound,
            "bound_applies": self.bound_applies,
            "bound_holds": self.bound_holds,
            "zero_error_verified": self.zero_error_verified,
        }


def peel_product_subset(bad: np.ndarray, needed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Rows and columns of a bad-free product subset, `needed` of each.

    Repeatedly drops the row or column holding the most bad entries (rows
    first on ties, lowest index first) until none is left, then keeps the
    first `needed` survivors of each side.

    Raises:
        ExpurgationError: if a side falls below `needed`.
    """
    rows = np.arange(bad.shape[0])
    cols = np.arange(bad.shape[1])
    while True:
        block = bad[np.ix_(rows, cols)]
        if not block.any():
            break
        row_counts = block.sum(axis=1)
        col_counts = block.sum(axis=0)
        if row_counts.max() >= col_counts.max():
            rows = np.delete(rows, int(np.argmax(row_counts)))
        else:
            cols = np.delete(cols, int(np.argmax(col_counts)))
        if len(rows) < needed or len(cols) < needed:
            raise ExpurgationError(
                f"No bad-free product of {needed} x {needed} message pairs found",
                bad_count=int(bad.sum()),
                good_count=int(bad.size - bad.sum()),
                needed=needed * needed,
            )
    return rows[:needed], cols[:needed]


def expurgate(
    code: PirCode, error_map: Optional[ErrorMap] = None
) -> Tuple[ExpurgatedPirCode, ExpurgationCertificate]:
    """Turns an epsilon-error code over L-bit messages into a zero-error code
    over (L-1)-bit messages.

    Args:
        code: the code to expurgate, small enough for exhaustive evaluation.
        error_map: its error map, computed when not given.

    Returns:
        The zero-error code and its certificate.

    Raises:
        ExpurgationError: if fewer than 2^(2L-2) pairs are good or no product
            subset of that size avoids every bad pair.
    """
    if code.message_length < 2:
        raise ValueError(f"Cannot expurgate messages of {code.message_length} bit")
    if error_map is None:
        error_map = compute_error_map(code)
    length = code.message_length
    needed = 1 << (length - 1)
    logger.warning(
        f"--- Expurgating L={length}: {error_map.bad_count} bad message pairs ---"
    )

    if error_map.good_count < needed * needed:
        raise ExpurgationError(
            f"Only {error_map.good_count} good message pairs, {needed * needed} needed",
            bad_count=error_map.bad_count,
            good_count=error_map.good_count,
            needed=needed * needed,
        )
    rows, cols = peel_product_subset(error_map.bad, needed)
    expurgated = ExpurgatedPirCode(code, rows.tolist(), cols.tolist())

    check = compute_error_map(expurgated)
    bound = 1 << (2 * length - 1)
    certificate = ExpurgationCertificate(
        message_length=length,
        bad_count=error_map.bad_count,
        good_count=error_map.good_count,
        epsilon=error_map.epsilon,
        bound=bound,
        bound_applies=error_map.epsilon <= EPSILON_LIMIT,
        bound_holds=error_map.bad_count <= bound,
        zero_error_verified=check.bad_count == 0,
    )
    logger.warning(
        f"--- Kept {needed} x {needed} message pairs, "
        f"zero error: {certificate.zero_error_verified} ---"
    )
    return expurgated, certificate
