"""Finite-length code built from the five multiple-description codebooks of an
auxiliary scheme, at smoke-test block lengths.

Each description X0, X1, X2, Y1, Y2 has a codebook of i.i.d. sequences drawn
from its marginal. A message pair is encoded greedily: X0 is the first
codeword jointly typical with the message block, then each of X1, X2, Y1, Y2
is the first codeword jointly typical with the block and the chosen X0.
Database 1 stores storage bins of the X codewords and database 2 those of the
Y codewords; both send finer retrieval bins of the same hash. The user
searches the bins of one reconstruction set for a jointly typical triple and
reads the wanted message off it.
"""

import functools
import itertools
import logging
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import jax
import jax.numpy as jnp
import numpy as np

from pirtradeoff.core.codes.binning import MultiplyShiftHash
from pirtradeoff.core.codes.pir_code import (
    AMBIGUITY,
    COLLISION,
    OUTAGE,
    Decoding,
    PirCode,
)
from pirtradeoff.core.codes.sequence_sets import rate_bits
from pirtradeoff.core.inner_bound import (
    DESCRIPTIONS,
    MESSAGES,
    RECONSTRUCTION_SETS,
    X_DESCRIPTIONS,
    Y_DESCRIPTIONS,
    AuxScheme,
    DescriptionRates,
)
from pirtradeoff.core.probability import (
    JointPmf,
    entropy,
    is_deterministic_function,
    to_array,
)
from pirtradeoff.settings import TOLERANCES
from pirtradeoff.types import Message, Table

logger = logging.getLogger(__name__)

MAX_BLOCK_LENGTH = 12
MAX_CODEBOOK_BITS = 16
MAX_CANDIDATES = 1 << 16
CHUNK_SIZE = 4096
OUTAGE_MARKER = -1
CACHE_SIZE = 1 << 12

DATABASE_DESCRIPTIONS = {1: X_DESCRIPTIONS, 2: Y_DESCRIPTIONS}


def jointly_typical(
    columns: Sequence[jnp.ndarray],
    sizes: Sequence[int],
    law: jnp.ndarray,
    slack: float,
) -> jnp.ndarray:
    """Strong typicality of candidate tuples of sequences.

    Args:
        columns: one integer array per variable, shaped (n,) for fixed
            sequences or (C, n) for C candidates.
        sizes: alphabet size of each variable.
        law: flattened joint pmf of the variables, in row-major order.
        slack: allowed deviation of each empirical symbol frequency.

    Returns:
        A boolean array of shape (C,): every frequency within `slack` of the
        law and no symbol outside its support.
    """
    index = 0
    for column, size in zip(columns, sizes):
        index = index * size + jnp.asarray(column)
    index = jnp.atleast_2d(index)
    counts = jax.nn.one_hot(index, law.shape[0]).sum(axis=-2)
    frequencies = counts / index.shape[-1]
    close = jnp.all(
        jnp.abs(frequencies - law) <= slack + TOLERANCES.comparison, axis=-1
    )
    supported = jnp.all((law > 0) | (counts == 0), axis=-1)
    return close & supported


class MdPirCode(PirCode):
    """Code over n-bit messages driven by an auxiliary scheme with t = 1.

    Args:
        scheme: the auxiliary scheme.
        n: block length, the number of bits of each message.
        rates: codebook, retrieval and storage rates of the descriptions.
        seed: seed of the codebooks and hashes.
        margin: rate margin added to every description rate.
        typicality_slack: allowed deviation of empirical frequencies.
    """

    def __init__(
        self,
        scheme: AuxScheme,
        n: int,
        rates: DescriptionRates,
        seed: int,
        margin: float = 0.0,
        typicality_slack: float = 0.25,
    ) -> None:
        if scheme.t != 1:
            raise NotImplementedError("Only schemes with t = 1 can be simulated")
        if not 1 <= n <= MAX_BLOCK_LENGTH:
            raise ValueError(f"Block length must lie in [1, {MAX_BLOCK_LENGTH}], got {n}")
        if margin < 0:
            raise ValueError(f"margin must be nonnegative, got {margin}")
        if typicality_slack <= 0:
            raise ValueError(f"typicality_slack must be positive, got {typicality_slack}")

        self._n = n
        self._seed = seed
        self.encode = functools.lru_cache(maxsize=CACHE_SIZE)(self._encode)
        self._server_indices = functools.lru_cache(maxsize=CACHE_SIZE)(
            self._recover_indices
        )
        self._margin = margin
        self._slack = typicality_slack
        self._joint: JointPmf = scheme.joint()
        self._sizes = {name: self._joint.variable(name).size for name in self._joint.names}

        root = jax.random.PRNGKey(seed)
        self._codebook_bits: Dict[str, int] = {}
        self._storage_bits: Dict[str, int] = {}
        self._retrieval_bits: Dict[str, int] = {}
        self._codebooks: Dict[str, np.ndarray] = {}
        self._hashes: Dict[str, MultiplyShiftHash] = {}
        for i, name in enumerate(DESCRIPTIONS):
            law = to_array(self._joint, [name])
            if entropy(self._joint, [name]) <= TOLERANCES.internal:
                codebook_bits = 0
            else:
                codebook_bits = rate_bits(n, rates.gamma[name] + margin)
            if codebook_bits > MAX_CODEBOOK_BITS:
                logger.debug(f"Codebook of {name} capped at {MAX_CODEBOOK_BITS} bits")
                codebook_bits = MAX_CODEBOOK_BITS
            self._codebook_bits[name] = codebook_bits
            self._storage_bits[name] = min(rate_bits(n, rates.alpha[name] + margin), codebook_bits)
            self._retrieval_bits[name] = min(rate_bits(n, rates.beta[name] + margin), codebook_bits)

            key_codebook, key_hash = jax.random.split(jax.random.fold_in(root, i))
            self._codebooks[name] = np.asarray(
                jax.random.choice(
                    key_codebook,
                    law.shape[0],
                    shape=(1 << codebook_bits, n),
                    p=jnp.asarray(law),
                )
            )
            self._hashes[name] = MultiplyShiftHash.from_key(key_hash, codebook_bits)

        self._laws: Dict[Tuple[str, ...], jnp.ndarray] = {}
        self._tables: Dict[Tuple[str, Tuple[str, ...]], Table] = {}
        for target, given in RECONSTRUCTION_SETS:
            holds, table = is_deterministic_function(self._joint, [target], list(given))
            if not holds:
                raise ValueError(f"{target} is not a function of {list(given)}")
            self._tables[(target, given)] = table  # type: ignore
        self._check_search_sizes()

        logger.warning(
            f"--- Built MD code n={n}, codebook bits {self._codebook_bits} ---"
        )

    def _check_search_sizes(self) -> None:
        searches: List[Tuple[str, int]] = []
        for database, names in DATABASE_DESCRIPTIONS.items():
            if any(self._storage_bits[name] < self._retrieval_bits[name] for name in names):
                searches.append(
                    (
                        f"database {database}",
                        sum(self._codebook_bits[name] - self._storage_bits[name] for name in names),
                    )
                )
        for target, given in RECONSTRUCTION_SETS:
            searches.append(
                (
                    f"{target} from {list(given)}",
                    sum(self._codebook_bits[name] - self._retrieval_bits[name] for name in given),
                )
            )
        for label, bits in searches:
            if 1 << bits > MAX_CANDIDATES:
                raise ValueError(
                    f"Decoding {label} would search 2^{bits} candidates, "
                    f"at most {MAX_CANDIDATES} allowed; lower the margin"
                )

    def _law(self, names: Tuple[str, ...]) -> jnp.ndarray:
        if names not in self._laws:
            self._laws[names] = jnp.asarray(to_array(self._joint, list(names)).reshape(-1))
        return self._laws[names]

    @property
    def message_length(self) -> int:
        return self._n

    @property
    def seed(self) -> int:
        return self._seed

    def codebook_size(self, name: str) -> int:
        return self._codebooks[name].shape[0]

    def codeword(self, name: str, index: int) -> np.ndarray:
        return self._codebooks[name][index]

    def description_bits(self, name: str) -> Dict[str, int]:
        """Codebook, storage and retrieval bits of a description."""
        return {
            "codebook": self._codebook_bits[name],
            "storage": self._storage_bits[name],
            "retrieval": self._retrieval_bits[name],
        }

    def storage_bits(self) -> Tuple[int, int]:
        return tuple(  # type: ignore
            sum(self._storage_bits[name] for name in names)
            for names in DATABASE_DESCRIPTIONS.values()
        )

    def answer_bits(self, database: int, query: Any) -> int:
        return sum(self._retrieval_bits[name] for name in self._answered(database, query))

    @staticmethod
    def _answered(database: int, query: int) -> Tuple[str, ...]:
        if database == 1:
            return ("X0", f"X{query}")
        return (f"Y{query}",)

    def _source(self, w1: Message, w2: Message) -> List[jnp.ndarray]:
        return [
            jnp.asarray([(w >> i) & 1 for i in range(self._n)], dtype=jnp.int32)
            for w in (w1, w2)
        ]

    def _first_typical(self, name: str, fixed: Sequence[str], columns: List[jnp.ndarray]) -> Optional[int]:
        names = tuple(fixed) + (name,)
        sizes = [self._sizes[other] for other in names]
        law = self._law(names)
        codebook = self._codebooks[name]
        for start in range(0, codebook.shape[0], CHUNK_SIZE):
            chunk = jnp.asarray(codebook[start : start + CHUNK_SIZE])
            typical = np.asarray(jointly_typical(columns + [chunk], sizes, law, self._slack))
            hits = np.flatnonzero(typical)
            if hits.size:
                return start + int(hits[0])
        return None

    def _encode(self, w1: Message, w2: Message) -> Optional[Dict[str, int]]:
        """Codeword indices of the five descriptions, None on an outage."""
        source = self._source(w1, w2)
        indices: Dict[str, int] = {}
        x0 = self._first_typical("X0", MESSAGES, source)
        if x0 is None:
            return None
        indices["X0"] = x0
        columns = source + [jnp.asarray(self._codebooks["X0"][x0])]
        for name in DESCRIPTIONS[1:]:
            index = self._first_typical(name, MESSAGES + ("X0",), columns)
            if index is None:
                return None
            indices[name] = index
        return indices

    def store(self, w1: Message, w2: Message) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        indices = self.encode(w1, w2)
        if indices is None:
            return tuple(  # type: ignore
                (OUTAGE_MARKER,) * len(names) for names in DATABASE_DESCRIPTIONS.values()
            )
        return tuple(  # type: ignore
            tuple(
                self._hashes[name].digest(indices[name], self._storage_bits[name])
                for name in names
            )
            for names in DATABASE_DESCRIPTIONS.values()
        )

    def _search(
        self, names: Tuple[str, ...], bins: Sequence[int], bits: Sequence[int]
    ) -> List[Tuple[Tuple[int, ...], bool]]:
        """Candidate index tuples consistent with the bins, each with its
        typicality flag."""
        members = [
            self._hashes[name].members(index, b) for name, index, b in zip(names, bins, bits)
        ]
        candidates = list(itertools.product(*members))
        if not candidates:
            return []
        columns = [
            jnp.asarray(self._codebooks[name][[c[i] for c in candidates]])
            for i, name in enumerate(names)
        ]
        typical = np.asarray(
            jointly_typical(columns, [self._sizes[n] for n in names], self._law(names), self._slack)
        )
        return list(zip(candidates, typical.tolist()))

    def _recover_indices(self, database: int, stored: Tuple[int, ...]) -> Tuple[int, ...]:
        """Codeword indices a database recovers from its storage bins."""
        names = DATABASE_DESCRIPTIONS[database]
        results = self._search(names, stored, [self._storage_bits[n] for n in names])
        typical = [candidate for candidate, flag in results if flag]
        if typical:
            return typical[0]
        return results[0][0]

    def answer(self, database: int, query: Any, stored: Any) -> Tuple[int, ...]:
        names = DATABASE_DESCRIPTIONS[database]
        answered = self._answered(database, query)
        if stored[0] == OUTAGE_MARKER:
            return (OUTAGE_MARKER,) * len(answered)
        nested = all(self._storage_bits[n] >= self._retrieval_bits[n] for n in answered)
        indices = None if nested else self._server_indices(database, tuple(stored))
        bins = []
        for name in answered:
            position = names.index(name)
            if nested:
                shift = self._storage_bits[name] - self._retrieval_bits[name]
                bins.append(stored[position] >> shift)
            else:
                bins.append(
                    self._hashes[name].digest(indices[position], self._retrieval_bits[name])  # type: ignore
                )
        return tuple(bins)

    def reconstruct(
        self, k: int, given: Tuple[str, ...], codewords: Sequence[np.ndarray]
    ) -> Optional[Message]:
        """Message k read off the codewords of a reconstruction set, None when
        some position has no entry in the decoding table."""
        table = self._tables[(MESSAGES[k - 1], given)]
        message = 0
        for i in range(self._n):
            value = table.get(tuple(int(c[i]) for c in codewords))
            if value is None:
                return None
            message |= value[0] << i
        return message

    def decode(
        self, k: int, queries: Tuple[Any, Any], answers: Tuple[Any, Any]
    ) -> Decoding:
        if OUTAGE_MARKER in answers[0] or OUTAGE_MARKER in answers[1]:
            return Decoding(None, OUTAGE)
        q1, q2 = queries
        given = ("X0", f"X{q1}", f"Y{q2}")
        bins = list(answers[0]) + list(answers[1])
        results = self._search(given, bins, [self._retrieval_bits[n] for n in given])

        decoded: Dict[bool, Set[int]] = {True: set(), False: set()}
        for candidate, flag in results:
            codewords = [self._codebooks[n][i] for n, i in zip(given, candidate)]
            message = self.reconstruct(k, given, codewords)
            if message is not None:
                decoded[flag].add(message)
        messages = decoded[True] or decoded[False]
        if len(messages) == 1:
            return Decoding(next(iter(messages)))
        if messages:
            return Decoding(None, AMBIGUITY)
        return Decoding(None, COLLISION)


def build_md_pir_code(
    scheme: AuxScheme,
    n: int,
    rates: DescriptionRates,
    seed: int,
    margin: float = 0.0,
    typicality_slack: float = 0.25,
) -> MdPirCode:
    """Builds the multiple-description code of a scheme at block length n.

    Raises:
        NotImplementedError: if the scheme's block parameter is not 1.
        ValueError: if n is outside [1, 12] or a decoder would search more
            than 2^16 candidates.
    """
    return MdPirCode(scheme, n, rates, seed, margin, typicality_slack)
