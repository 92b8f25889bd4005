"""Symmetrized code: two copies of a component code with the database roles
swapped, so that both databases store and send the same amount.

Each message of 2L bits is split into a low half served by copy A and a high
half served by copy B. Database 1 holds copy A's database 1 content and copy
B's database 2 content; database 2 holds the other two.
"""

from typing import Any, Dict, List, Sequence, Tuple

from pirtradeoff.core.codes.pir_code import Decoding, PirCode, Query
from pirtradeoff.types import Message


class SymmetrizedPirCode(PirCode):
    def __init__(self, component: PirCode) -> None:
        self._component = component
        self._half = component.message_length
        self._mask = (1 << self._half) - 1

    @property
    def component(self) -> PirCode:
        return self._component

    @property
    def message_length(self) -> int:
        return 2 * self._half

    def storage_bits(self) -> Tuple[int, int]:
        first, second = self._component.storage_bits()
        return first + second, second + first

    def query_distribution(self, k: int) -> List[Tuple[Tuple[Query, Query], Any]]:
        distribution = self._component.query_distribution(k)
        return [
            (((qa[0], qb[1]), (qa[1], qb[0])), pa * pb)
            for qa, pa in distribution
            for qb, pb in distribution
        ]

    def _split(self, w: Message) -> Tuple[Message, Message]:
        return w & self._mask, w >> self._half

    def store(self, w1: Message, w2: Message) -> Tuple[Any, Any]:
        (a1, b1), (a2, b2) = self._split(w1), self._split(w2)
        copy_a = self._component.store(a1, a2)
        copy_b = self._component.store(b1, b2)
        return (copy_a[0], copy_b[1]), (copy_a[1], copy_b[0])

    def answer(self, database: int, query: Query, stored: Any) -> Tuple[Any, Any]:
        # database 1 plays copy A's database 1 and copy B's database 2
        other = 3 - database
        return (
            self._component.answer(database, query[0], stored[0]),
            self._component.answer(other, query[1], stored[1]),
        )

    def answer_bits(self, database: int, query: Query) -> int:
        other = 3 - database
        return self._component.answer_bits(database, query[0]) + self._component.answer_bits(
            other, query[1]
        )

    def decode(
        self, k: int, queries: Tuple[Query, Query], answers: Tuple[Any, Any]
    ) -> Decoding:
        first, second = queries
        low = self._component.decode(
            k, (first[0], second[0]), (answers[0][0], answers[1][0])
        )
        if low.failure is not None:
            return low
        high = self._component.decode(
            k, (second[1], first[1]), (answers[1][1], answers[0][1])
        )
        if high.failure is not None:
            return high
        return Decoding(low.message | (high.message << self._half))

    def privacy_components(self) -> Sequence[PirCode]:
        return [self._component]

    def to_json(self) -> Dict[str, Any]:
        return {"kind": "symmetrized", "component": self._component.to_json()}


def symmetrize(code: PirCode) -> SymmetrizedPirCode:
    """Two role-swapped copies of `code` serving messages of twice its length."""
    return SymmetrizedPirCode(code)
