"""Interface shared by every finite-length PIR code of the workbench.

A code serves two messages w1, w2 of `message_length` bits from two
databases. The user wanting message k draws a pair of queries (one per
database) from the code's query distribution, each database answers from its
stored content only, and the user decodes from the two answers.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from pirtradeoff.types import Message

ATYPICAL = "atypical"
COLLISION = "collision"
AMBIGUITY = "ambiguity"
OUTAGE = "outage"
FAILURE_MODES = (ATYPICAL, COLLISION, AMBIGUITY, OUTAGE)

# supported query pairs (database 1, database 2) for each desired message
QUERY_SUPPORT: Dict[int, Tuple[Tuple[int, int], ...]] = {
    1: ((1, 1), (2, 2)),
    2: ((1, 2), (2, 1)),
}

Query = Hashable
Answer = Hashable
Content = Hashable


@dataclass(frozen=True)
class Decoding:
    """Output of the user's decoder: a message, or the failure mode."""

    message: Optional[Message]
    failure: Optional[str] = None


class PirCode(ABC):
    @property
    @abstractmethod
    def message_length(self) -> int:
        """Number of bits of each message."""

    @abstractmethod
    def storage_bits(self) -> Tuple[int, int]:
        """Bits stored at database 1 and database 2."""

    def query_distribution(self, k: int) -> List[Tuple[Tuple[Query, Query], Fraction]]:
        """Query pairs and their probabilities when message k is wanted.

        Each database sees query 1 or 2 with probability 1/2 whatever k is.
        """
        if k not in QUERY_SUPPORT:
            raise ValueError(f"Desired message must be 1 or 2, got {k}")
        return [(queries, Fraction(1, 2)) for queries in QUERY_SUPPORT[k]]

    @abstractmethod
    def store(self, w1: Message, w2: Message) -> Tuple[Content, Content]:
        """Contents of database 1 and database 2."""

    @abstractmethod
    def answer(self, database: int, query: Query, stored: Content) -> Answer:
        """Answer of a database, a function of its query and content only."""

    @abstractmethod
    def answer_bits(self, database: int, query: Query) -> int:
        """Length in bits of the answer of a database to a query."""

    @abstractmethod
    def decode(
        self, k: int, queries: Tuple[Query, Query], answers: Tuple[Answer, Answer]
    ) -> Decoding:
        """Recovers message k from the two answers."""

    def respond(
        self, k: int, queries: Tuple[Query, Query], stored: Tuple[Content, Content]
    ) -> Tuple[Answer, Answer]:
        """Answers actually sent by the two databases."""
        return (
            self.answer(1, queries[0], stored[0]),
            self.answer(2, queries[1], stored[1]),
        )

    def privacy_components(self) -> Optional[Sequence["PirCode"]]:
        """Codes whose privacy implies the privacy of this one, if any."""
        return None

    def to_json(self) -> Dict[str, Any]:
        raise NotImplementedError
