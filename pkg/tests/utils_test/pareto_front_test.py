"""Tests of the front, chord and envelope helpers."""

import jax.numpy as jnp
import pytest

from pirtradeoff.utils.pareto_front import (
    chord_alpha,
    compute_lower_convex_envelope,
    compute_pareto_dominance,
    compute_pareto_front,
)


def test_pareto_front() -> None:
    points = jnp.array([[1.0, 1.0], [1.5, 0.75], [1.6, 0.9], [2.0, 0.75]])

    front = compute_pareto_front(points)

    pytest.assume(front.tolist() == [True, True, False, False])
    pytest.assume(bool(compute_pareto_dominance(jnp.array([2.0, 2.0]), points)))
    pytest.assume(not bool(compute_pareto_dominance(jnp.array([0.5, 0.5]), points)))


def test_chord_alpha() -> None:
    start = jnp.array([1.5, 0.75])
    end = jnp.array([1.0, 1.0])

    pytest.assume(float(chord_alpha(start, end, 0.75)) == pytest.approx(1.5))
    pytest.assume(float(chord_alpha(start, end, 0.875)) == pytest.approx(1.25))
    pytest.assume(float(chord_alpha(start, end, 1.0)) == pytest.approx(1.0))


def test_lower_convex_envelope() -> None:
    # (alpha_bar, beta_bar); the fifth point lies below the outer chord and
    # hides the third and fourth
    points = jnp.array(
        [[2.0, 0.75], [1.0, 1.0], [1.8, 0.875], [1.25, 0.9375], [1.4, 0.85]]
    )

    envelope = compute_lower_convex_envelope(points)

    pytest.assume(envelope.tolist() == [True, True, False, False, True])


def test_envelope_rejects_wrong_shape() -> None:
    with pytest.raises(AssertionError):
        compute_lower_convex_envelope(jnp.ones((3, 3)))
