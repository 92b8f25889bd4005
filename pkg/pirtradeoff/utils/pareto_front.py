"""Utils to handle fronts of (storage, retrieval) rate points.

Points are rows (alpha_bar, beta_bar) and both coordinates are minimized.
"""

import chex
import jax
import jax.numpy as jnp


def compute_pareto_dominance(
    criteria_point: jnp.ndarray, batch_of_criteria: jnp.ndarray
) -> jnp.ndarray:
    """Returns if a point is pareto dominated given a set of points or not.
    We use minimization convention here.

    criteria_point has shape (num_criteria,)
    batch_of_criteria has shape (num_points, num_criteria)

    Args:
        criteria_point: a vector of values.
        batch_of_criteria: a batch of vector of values.

    Returns:
        Return booleans when the vector is dominated by the batch.
    """
    diff = jnp.subtract(criteria_point, batch_of_criteria)
    return jnp.any(jnp.all(diff >= 0, axis=-1) & jnp.any(diff > 0, axis=-1))


def compute_pareto_front(batch_of_criteria: jnp.ndarray) -> jnp.ndarray:
    """Returns an array of boolean that states for each element if it is
    in the pareto front or not.

    Args:
        batch_of_criteria: a batch of points of shape (num_points, num_criteria)

    Returns:
        An array of boolean with the boolean stating if each point is on the
        front or not.
    """
    func = jax.vmap(lambda x: ~compute_pareto_dominance(x, batch_of_criteria))
    return func(batch_of_criteria)


def chord_alpha(
    start: jnp.ndarray, end: jnp.ndarray, beta_bar: jnp.ndarray
) -> jnp.ndarray:
    """Storage rate of the segment joining two (alpha_bar, beta_bar) points,
    read at the given retrieval rate."""
    weight = (beta_bar - start[1]) / (end[1] - start[1])
    return start[0] + weight * (end[0] - start[0])


def compute_lower_convex_envelope(batch_of_points: jnp.ndarray) -> jnp.ndarray:
    """Marks the points lying on the lower convex envelope of a set of
    (alpha_bar, beta_bar) points, alpha_bar seen as a function of beta_bar.

    Args:
        batch_of_points: points of shape (num_points, 2)

    Returns:
        A boolean array of shape (num_points,).
    """
    chex.assert_axis_dimension(
        tensor=batch_of_points,
        axis=1,
        expected=2,
        custom_message="Envelopes are computed for two rates only.",
    )

    # monotone chain on points ordered by retrieval then storage
    order = jnp.lexsort((batch_of_points[:, 0], batch_of_points[:, 1]))
    sorted_points = batch_of_points[order]

    hull = []
    for index in range(sorted_points.shape[0]):
        beta, alpha = sorted_points[index, 1], sorted_points[index, 0]
        while len(hull) >= 2:
            (b1, a1), (b2, a2) = (
                sorted_points[hull[-2], 1],
                sorted_points[hull[-2], 0],
            ), (sorted_points[hull[-1], 1], sorted_points[hull[-1], 0])
            cross = (b2 - b1) * (alpha - a1) - (a2 - a1) * (beta - b1)
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(index)

    on_hull = jnp.zeros(batch_of_points.shape[0], dtype=bool)
    on_hull = on_hull.at[order[jnp.asarray(hull)]].set(True)

    # collinear points between hull vertices lie on the envelope as well
    vertices = sorted_points[jnp.asarray(hull)]
    envelope_alpha = jnp.interp(
        batch_of_points[:, 1], vertices[:, 1], vertices[:, 0]
    )
    return on_hull | (batch_of_points[:, 0] <= envelope_alpha + 1e-12)
