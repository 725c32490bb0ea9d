import math

import numpy as np
import pytest

from bell_aspect.errors import InvalidInputError
from bell_aspect.lhv_models import (
    correlation_by_quadrature,
    distribution_from_counts,
    estimate_distribution,
)
from bell_aspect.random_streams import CHUNK_SIZE


def bell_sign_correlation(delta: float) -> float:
    """Closed form of the sign model's correlation for ``0 ≤ |Δ| ≤ π/2``."""
    return -(1 - 4 * abs(delta) / math.pi)


def test_estimate_rejects_zero_draws(bell_sign):
    with pytest.raises(InvalidInputError):
        estimate_distribution(bell_sign, 0.0, 0.0, 0, 1)


def test_estimate_is_normalized_and_counts_draws(noisy_bell_sign):
    dist = estimate_distribution(noisy_bell_sign, 0.1, 0.5, 12_345, 3)

    assert dist.n_samples == 12_345
    assert dist.total == pytest.approx(1, abs=1e-12)
    assert dist.se_pp == pytest.approx(math.sqrt(dist.p_pp * (1 - dist.p_pp) / 12_345))


def test_estimate_is_independent_of_worker_count(noisy_bell_sign):
    n_draws = 2 * CHUNK_SIZE + 17

    inline = estimate_distribution(noisy_bell_sign, 0.2, -0.4, n_draws, 9)
    threaded = estimate_distribution(noisy_bell_sign, 0.2, -0.4, n_draws, 9, workers=3)

    assert inline == threaded


def test_local_right_marginal_is_identical_across_left_angles(noisy_bell_sign):
    marginals = {
        estimate_distribution(noisy_bell_sign, theta_l, 0.3, 20_000, 4).right_plus
        for theta_l in (0.0, math.pi / 8, math.pi / 4)
    }

    assert len(marginals) == 1


def test_distribution_from_counts():
    dist = distribution_from_counts(np.array([1, 3, 3, 1]))

    assert (dist.p_pp, dist.p_pm, dist.p_mp, dist.p_mm) == (0.125, 0.375, 0.375, 0.125)
    assert dist.n_samples == 8

    with pytest.raises(InvalidInputError):
        distribution_from_counts(np.zeros(4, dtype=int))


@pytest.mark.parametrize("delta", np.linspace(0, 1.5, 16).tolist())
def test_quadrature_matches_closed_form(bell_sign, delta):
    assert correlation_by_quadrature(bell_sign, delta, 0.0) == pytest.approx(
        bell_sign_correlation(delta), abs=1e-9
    )


def test_monte_carlo_matches_quadrature(bell_sign):
    generator = np.random.default_rng(21)

    for theta_l, theta_r in generator.uniform(-math.pi, math.pi, (20, 2)):
        dist = estimate_distribution(bell_sign, theta_l, theta_r, 50_000, 13)
        estimate = dist.p_pp + dist.p_mm - dist.p_pm - dist.p_mp
        standard_error = math.sqrt((1 - estimate**2) / 50_000)
        oracle = correlation_by_quadrature(bell_sign, theta_l, theta_r)
        assert abs(estimate - oracle) <= 3 * max(standard_error, 1e-12)


@pytest.mark.parametrize("fixture_name", ["noisy_bell_sign", "qm_mimic"])
def test_quadrature_rejects_unsupported_models(request, fixture_name):
    with pytest.raises(InvalidInputError):
        correlation_by_quadrature(request.getfixturevalue(fixture_name), 0.0, 0.0)
