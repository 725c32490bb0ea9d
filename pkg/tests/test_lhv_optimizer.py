import pydantic
import pytest

from bell_aspect.domain import Outcome, SettingPair
from bell_aspect.errors import InvalidInputError, UnknownNameError
from bell_aspect.lhv_models import correlation_by_quadrature, parametric_family
from bell_aspect.lhv_optimizer import (
    DeterministicStrategy,
    OptimizationMethod,
    all_strategies,
    enumerate_deterministic,
    estimate_chsh,
    grid_candidates,
    max_mixture_chsh,
    mixture_chsh,
    optimize_parametric,
    strategy_chsh,
)

PLUS, MINUS = Outcome.PLUS, Outcome.MINUS


def strategy(*readings: Outcome) -> DeterministicStrategy:
    a, a_prime, b, b_prime = readings

    return DeterministicStrategy(
        a_at_theta_a=a, a_at_theta_a_prime=a_prime, b_at_theta_b=b, b_at_theta_b_prime=b_prime
    )


@pytest.mark.parametrize(
    ("readings", "expected"), [((PLUS, PLUS, PLUS, PLUS), 2.0), ((PLUS, PLUS, PLUS, MINUS), 2.0)]
)
def test_strategy_chsh_examples(readings, expected):
    assert strategy_chsh(strategy(*readings)) == expected


def test_all_strategies_are_distinct():
    strategies = all_strategies()

    assert len(strategies) == 16
    assert len({tuple(item.model_dump().values()) for item in strategies}) == 16


def test_enumeration_values_are_plus_or_minus_two(pi8_settings, equal_settings):
    for settings in (pi8_settings, equal_settings):
        reports = enumerate_deterministic(settings)
        assert len(reports) == 16
        assert {report.s_value for report in reports} == {-2.0, 2.0}
        assert max(abs(report.s_value) for report in reports) == 2.0


def test_mixture_of_uniform_weights_is_zero():
    assert mixture_chsh([1 / 16] * 16) == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("vertex", [0, 5, 15])
def test_mixture_point_mass_is_a_vertex(vertex):
    weights = [0.0] * 16
    weights[vertex] = 1.0

    assert abs(mixture_chsh(weights)) == 2.0


@pytest.mark.parametrize("weights", [[1 / 15] * 15, [0.1] * 16])
def test_mixture_rejects_invalid_weights(weights):
    with pytest.raises(InvalidInputError):
        mixture_chsh(weights)


def test_mixture_rejects_negative_weight():
    with pytest.raises(pydantic.ValidationError):
        mixture_chsh([-0.5, 1.5] + [0.0] * 14)


def test_random_mixtures_respect_local_bound(pi8_settings):
    result = max_mixture_chsh(pi8_settings, 10_000, 0)

    assert result.max_abs_s <= 2 + 1e-12
    assert result.enumeration_max_abs_s == 2.0
    assert result.n_mixtures == 10_000
    assert result.bound_respected


def test_random_mixtures_are_reproducible(pi8_settings):
    assert max_mixture_chsh(pi8_settings, 100, 8) == max_mixture_chsh(pi8_settings, 100, 8)


def test_random_mixtures_need_one_draw(pi8_settings):
    with pytest.raises(InvalidInputError):
        max_mixture_chsh(pi8_settings, 0, 0)


@pytest.mark.parametrize(("iterations", "expected"), [(1, 1), (4, 4), (9, 9), (10, 9), (16, 16)])
def test_grid_candidates_size(iterations, expected):
    assert len(grid_candidates(parametric_family("threshold"), iterations)) == expected


def test_grid_candidates_single_point_uses_defaults():
    family = parametric_family("bell_sign_offset")

    assert grid_candidates(family, 3) == [family.defaults]


def test_grid_search_respects_local_bound(pi8_settings):
    result = optimize_parametric("bell_sign_offset", pi8_settings, 9, 5_000, 0)

    assert result.method == OptimizationMethod.GRID
    assert result.n_evaluations == 9
    assert result.standard_error > 0
    assert result.best_abs_s <= 2 + 5 * result.standard_error
    assert result.bound_respected
    assert set(result.best_parameters) == {"offset_left", "offset_right"}


def quadrature_chsh(model, settings) -> float:
    e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime = (
        correlation_by_quadrature(model, *settings.angles(pair)) for pair in SettingPair
    )

    return e_ab - e_ab_prime + e_a_prime_b + e_a_prime_b_prime


def test_best_offsets_reach_the_local_bound(pi8_settings):
    result = optimize_parametric("bell_sign_offset", pi8_settings, 25, 20_000, 0)
    best = parametric_family("bell_sign_offset").create(result.best_parameters)

    assert abs(quadrature_chsh(best, pi8_settings)) == pytest.approx(2, abs=1e-6)
    assert result.best_abs_s >= 2 - 3 * result.standard_error
    assert result.bound_respected

    fresh = estimate_chsh(best, pi8_settings, 20_000, 99)
    assert abs(abs(fresh.s_value) - 2) <= 3 * fresh.standard_error


def test_hill_climb_respects_local_bound(pi8_settings):
    result = optimize_parametric(
        "threshold", pi8_settings, 12, 5_000, 1, method=OptimizationMethod.HILL_CLIMB
    )

    assert result.method == OptimizationMethod.HILL_CLIMB
    assert result.n_evaluations >= 1
    assert result.bound_respected


def test_optimizer_is_reproducible(pi8_settings):
    first = optimize_parametric("threshold", pi8_settings, 4, 2_000, 6)

    assert first == optimize_parametric("threshold", pi8_settings, 4, 2_000, 6)


@pytest.mark.parametrize(("iterations", "samples"), [(0, 100), (4, 0)])
def test_optimizer_rejects_empty_budgets(pi8_settings, iterations, samples):
    with pytest.raises(InvalidInputError):
        optimize_parametric("threshold", pi8_settings, iterations, samples, 0)


def test_optimizer_rejects_unknown_family(pi8_settings):
    with pytest.raises(UnknownNameError):
        optimize_parametric("bohm", pi8_settings, 4, 100, 0)

