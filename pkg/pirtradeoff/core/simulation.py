"""Running finite-length PIR codes: single retrievals, Monte Carlo error
estimates, exhaustive error maps and the exact privacy audit.

Trial i of a run with root seed s uses the key fold_in(PRNGKey(s), i), so
results do not depend on how trials are scheduled.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import flax
import jax
import jax.numpy as jnp
import numpy as np
from flax.struct import PyTreeNode

from pirtradeoff.core.codes.pir_code import (
    COLLISION,
    FAILURE_MODES,
    Answer,
    PirCode,
    Query,
)
from pirtradeoff.types import MessagePair, RNGKey

logger = logging.getLogger(__name__)

DEFAULT_AUDIT_CAP = 10
CHUNK_BITS = 16


class Transcript(PyTreeNode):
    """One retrieval: desired message, queries, answers and the outcome."""

    k: int = flax.struct.field(pytree_node=False)
    queries: Tuple[Query, Query] = flax.struct.field(pytree_node=False)
    answers: Tuple[Answer, Answer] = flax.struct.field(pytree_node=False)
    decoded: Optional[int] = flax.struct.field(pytree_node=False)
    success: bool = flax.struct.field(pytree_node=False)
    failure: Optional[str] = flax.struct.field(pytree_node=False, default=None)


class SimReport(PyTreeNode):
    """Monte Carlo estimate of the error probability and of the rates."""

    trials: int
    pe: float
    alpha_hat: float
    beta_hat: float
    failures: Dict[str, int] = flax.struct.field(pytree_node=False)
    storage_bits: Tuple[int, int] = flax.struct.field(pytree_node=False)
    seeds: Dict[str, Any] = flax.struct.field(pytree_node=False)

    def to_json(self) -> Dict[str, Any]:
        return {
            "trials": int(self.trials),
            "pe": float(self.pe),
            "failures": dict(self.failures),
            "alpha_hat": float(self.alpha_hat),
            "beta_hat": float(self.beta_hat),
            "storage_bits": list(self.storage_bits),
            "seeds": dict(self.seeds),
        }


def pick_query(code: PirCode, k: int, uniform: float) -> Tuple[Query, Query]:
    distribution = code.query_distribution(k)
    cumulative = 0.0
    for queries, probability in distribution:
        cumulative += float(probability)
        if uniform < cumulative:
            return queries
    return distribution[-1][0]


def run_retrieval(
    code: PirCode, k: int, messages: MessagePair, queries: Tuple[Query, Query]
) -> Transcript:
    """Stores the messages, answers the given queries and decodes message k."""
    stored = code.store(*messages)
    answers = code.respond(k, queries, stored)
    decoding = code.decode(k, queries, answers)
    success = decoding.failure is None and decoding.message == messages[k - 1]
    failure = decoding.failure
    if not success and failure is None:
        # a wrong unique candidate
        failure = COLLISION
    return Transcript(
        k=k,
        queries=queries,
        answers=answers,
        decoded=decoding.message,
        success=success,
        failure=failure,
    )


def retrieve(code: PirCode, k: int, messages: MessagePair, query_seed: int) -> Transcript:
    """One private retrieval of message k with queries drawn from the seed.

    Args:
        code: the code.
        k: desired message, 1 or 2.
        messages: the pair (w1, w2).
        query_seed: seed of the user's query randomness.

    Returns:
        The transcript of the retrieval.
    """
    if k not in (1, 2):
        raise ValueError(f"Desired message must be 1 or 2, got {k}")
    uniform = float(jax.random.uniform(jax.random.PRNGKey(query_seed)))
    return run_retrieval(code, k, messages, pick_query(code, k, uniform))


def _draw(random_key: RNGKey, message_length: int) -> Tuple[jnp.ndarray, ...]:
    key_messages, key_k, key_query = jax.random.split(random_key, 3)
    chunks = math.ceil(message_length / CHUNK_BITS)
    words = jax.random.randint(key_messages, (2, chunks), 0, 1 << CHUNK_BITS)
    k = 1 + jax.random.bernoulli(key_k).astype(jnp.int32)
    uniform = jax.random.uniform(key_query)
    return words, k, uniform


def draw_trials(
    seed: int, trials: int, message_length: int
) -> Tuple[List[MessagePair], np.ndarray, np.ndarray]:
    """Uniform message pairs, desired messages and query draws of each trial."""
    root = jax.random.PRNGKey(seed)
    keys = jax.vmap(lambda i: jax.random.fold_in(root, i))(jnp.arange(trials))
    words, ks, uniforms = jax.vmap(lambda key: _draw(key, message_length))(keys)
    words = np.asarray(words)
    mask = (1 << message_length) - 1
    messages = []
    for trial in range(trials):
        pair = []
        for w in range(2):
            value = 0
            for chunk in reversed(words[trial, w].tolist()):
                value = (value << CHUNK_BITS) | int(chunk)
            pair.append(value & mask)
        messages.append((pair[0], pair[1]))
    return messages, np.asarray(ks), np.asarray(uniforms)


def estimate_error(
    code: PirCode, trials: int, seed: int, seeds: Optional[Dict[str, Any]] = None
) -> SimReport:
    """Monte Carlo estimate of the retrieval error probability.

    Messages are uniform, the desired message is uniform on {1, 2} and the
    queries follow the code's distribution.

    Args:
        code: the code to run.
        trials: number of independent retrievals.
        seed: root seed of the trials.
        seeds: code seeds to record in the report.

    Returns:
        The report with Pe, the failure histogram and the normalized storage
        (s1 + s2) / 2L and average download per database / L.
    """
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    length = code.message_length
    logger.warning(f"--- Running {trials} retrievals at L={length} ---")

    messages, ks, uniforms = draw_trials(seed, trials, length)
    failures: Counter = Counter({mode: 0 for mode in FAILURE_MODES})
    downloaded = 0
    for trial in range(trials):
        k = int(ks[trial])
        queries = pick_query(code, k, float(uniforms[trial]))
        transcript = run_retrieval(code, k, messages[trial], queries)
        downloaded += code.answer_bits(1, queries[0]) + code.answer_bits(2, queries[1])
        if not transcript.success:
            failures[transcript.failure] += 1

    errors = sum(failures.values())
    storage = code.storage_bits()
    report = SimReport(
        trials=trials,
        pe=errors / trials,
        alpha_hat=sum(storage) / (2 * length),
        beta_hat=downloaded / trials / (2 * length),
        failures=dict(failures),
        storage_bits=storage,
        seeds={"root": seed, **(seeds or {})},
    )
    logger.warning(f"--- Pe={report.pe:.4f} over {trials} retrievals ---")
    return report


def normalized_rates(code: PirCode) -> Tuple[Fraction, Fraction]:
    """Exact (s1 + s2) / 2L and expected total download / 2L, k uniform."""
    length = code.message_length
    alpha = Fraction(sum(code.storage_bits()), 2 * length)
    download = Fraction(0)
    for k in (1, 2):
        for queries, probability in code.query_distribution(k):
            bits = code.answer_bits(1, queries[0]) + code.answer_bits(2, queries[1])
            download += Fraction(1, 2) * Fraction(probability) * bits
    return alpha, download / (2 * length)


@dataclass(frozen=True)
class ErrorMap:
    """Outcome of every (message pair, desired message, query pair).

    Args:
        bad: boolean matrix indexed by (w1, w2), true when some supported
            query pair of some desired message fails.
        epsilon: exact error probability under uniform messages.
        errors_by_query: failing message pairs per (k, query pair).
    """

    message_length: int
    bad: np.ndarray = field(compare=False)
    epsilon: Fraction
    errors_by_query: Dict[Tuple[int, Any], int]

    @property
    def bad_count(self) -> int:
        return int(self.bad.sum())

    @property
    def good_count(self) -> int:
        return int(self.bad.size - self.bad.sum())


def _check_exhaustive(code: PirCode, max_message_length: int) -> int:
    length = code.message_length
    if length > max_message_length:
        raise ValueError(
            f"L={length} is too large for exhaustive enumeration "
            f"(at most {max_message_length})"
        )
    return length


def compute_error_map(
    code: PirCode, max_message_length: int = DEFAULT_AUDIT_CAP
) -> ErrorMap:
    """Runs every message pair through every supported query pair."""
    length = _check_exhaustive(code, max_message_length)
    size = 1 << length
    logger.warning(f"--- Computing the error map over {size * size} message pairs ---")

    distributions = {k: code.query_distribution(k) for k in (1, 2)}
    bad = np.zeros((size, size), dtype=bool)
    errors: Counter = Counter()
    for w1 in range(size):
        for w2 in range(size):
            stored = code.store(w1, w2)
            for k, distribution in distributions.items():
                for queries, _ in distribution:
                    answers = code.respond(k, queries, stored)
                    decoding = code.decode(k, queries, answers)
                    if decoding.failure is not None or decoding.message != (w1, w2)[k - 1]:
                        bad[w1, w2] = True
                        errors[(k, queries)] += 1

    epsilon = Fraction(0)
    for k, distribution in distributions.items():
        for queries, probability in distribution:
            epsilon += Fraction(1, 2) * probability * errors[(k, queries)]
    epsilon /= size * size
    error_map = ErrorMap(length, bad, epsilon, dict(errors))
    logger.warning(
        f"--- {error_map.bad_count} bad message pairs, epsilon={float(epsilon):.6f} ---"
    )
    return error_map


@dataclass(frozen=True)
class PrivacyReport:
    """Exact comparison of what each database sees under k = 1 and k = 2.

    Args:
        verdict: whether both databases see identical distributions.
        databases: verdict per database.
        mismatches: per database, number of (query, answer, content) values
            whose probabilities differ.
        method: "exhaustive" or "components".
    """

    verdict: bool
    databases: Dict[int, bool]
    mismatches: Dict[int, int]
    method: str
    components: List["PrivacyReport"] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "databases": {str(n): ok for n, ok in self.databases.items()},
            "mismatches": {str(n): count for n, count in self.mismatches.items()},
            "method": self.method,
            "components": [component.to_json() for component in self.components],
        }


def verify_privacy(
    code: PirCode, max_message_length: int = DEFAULT_AUDIT_CAP
) -> PrivacyReport:
    """Checks exactly that each database's view (Q_n, A_n, S_n) has the same
    distribution whichever message is wanted.

    Message pairs are enumerated exhaustively. A code too long for that is
    audited through its components when its privacy reduces to theirs.

    Raises:
        ValueError: if the code is too long and has no components.
    """
    if code.message_length > max_message_length:
        components = code.privacy_components()
        if not components:
            raise ValueError(
                f"L={code.message_length} is too large for an exhaustive audit "
                f"(at most {max_message_length})"
            )
        reports = [verify_privacy(component, max_message_length) for component in components]
        return PrivacyReport(
            verdict=all(report.verdict for report in reports),
            databases={
                n: all(report.databases[n] for report in reports) for n in (1, 2)
            },
            mismatches={
                n: sum(report.mismatches[n] for report in reports) for n in (1, 2)
            },
            method="components",
            components=reports,
        )

    size = 1 << code.message_length
    distributions = {k: code.query_distribution(k) for k in (1, 2)}
    # integer weights: probabilities scaled by a common denominator
    scale = int(
        np.lcm.reduce(
            [probability.denominator for d in distributions.values() for _, probability in d]
        )
    )
    views: Dict[int, Dict[int, Counter]] = {n: {1: Counter(), 2: Counter()} for n in (1, 2)}
    logger.warning(f"--- Auditing privacy over {size * size} message pairs ---")
    for w1 in range(size):
        for w2 in range(size):
            stored = code.store(w1, w2)
            for k, distribution in distributions.items():
                for queries, probability in distribution:
                    answers = code.respond(k, queries, stored)
                    weight = int(probability * scale)
                    for n in (1, 2):
                        views[n][k][(queries[n - 1], answers[n - 1], stored[n - 1])] += weight

    databases, mismatches = {}, {}
    for n in (1, 2):
        first, second = views[n][1], views[n][2]
        differing = [key for key in set(first) | set(second) if first[key] != second[key]]
        databases[n] = not differing
        mismatches[n] = len(differing)
        if differing:
            logger.warning(f"--- Database {n} distinguishes the desired message ---")
    return PrivacyReport(
        verdict=all(databases.values()),
        databases=databases,
        mismatches=mismatches,
        method="exhaustive",
    )
