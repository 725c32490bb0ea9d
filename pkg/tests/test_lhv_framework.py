import functools
import math

import numpy as np
import pytest

from bell_aspect.domain import Outcome
from bell_aspect.errors import InvalidInputError
from bell_aspect.lhv_models import (
    LambdaBatch,
    LambdaSample,
    LhvModel,
    LocalityTag,
    respond,
    respond_batch,
    sample_lambda,
)
from bell_aspect.lhv_models.builtins import sign_response
from bell_aspect.lhv_models.framework import polarization_sign


@pytest.mark.parametrize(
    ("phi", "theta_l", "theta_r", "expected"),
    [
        (0.0, 0.0, 0.0, (Outcome.PLUS, Outcome.MINUS)),
        (math.pi / 2, 0.0, 0.0, (Outcome.MINUS, Outcome.PLUS)),
        (0.0, 0.0, math.pi / 2, (Outcome.PLUS, Outcome.PLUS)),
    ],
)
def test_bell_sign_single_responses(bell_sign, phi, theta_l, theta_r, expected):
    assert respond(bell_sign, LambdaSample(photon_vars=(phi,)), theta_l, theta_r) == expected


def test_respond_rejects_wrong_dimension(bell_sign):
    with pytest.raises(InvalidInputError, match="photon_vars"):
        respond(bell_sign, LambdaSample(photon_vars=(0.0, 1.0)), 0.0, 0.0)


def test_polarization_sign_sends_zero_to_plus():
    np.testing.assert_array_equal(
        polarization_sign(np.array([-0.5, 0.0, 2.0])), np.array([-1, 1, 1], dtype=np.int8)
    )


def test_responses_must_be_plus_or_minus_one():
    broken = LhvModel(
        name="broken",
        photon_dim=1,
        respond_left=lambda photon, detector, theta: np.zeros(photon.shape[0]),
        respond_right=functools.partial(sign_response, polarity=-1),
    )

    with pytest.raises(InvalidInputError, match="other than"):
        respond(broken, LambdaSample(photon_vars=(0.1,)), 0.0, 0.0)


@pytest.mark.parametrize("reading", [1.7, -1.2, 0.5, 2])
def test_non_integer_responses_are_not_truncated(reading):
    broken = LhvModel(
        name="broken",
        photon_dim=1,
        respond_left=lambda photon, detector, theta: np.full(photon.shape[0], reading),
        respond_right=functools.partial(sign_response, polarity=-1),
    )

    with pytest.raises(InvalidInputError, match="respond_left"):
        respond(broken, LambdaSample(photon_vars=(0.1,)), 0.0, 0.0)


def test_float_responses_of_plus_or_minus_one_are_accepted():
    flipped = LhvModel(
        name="flipped",
        photon_dim=1,
        respond_left=lambda photon, detector, theta: np.full(photon.shape[0], -1.0),
        respond_right=functools.partial(sign_response, polarity=-1),
    )

    left, _ = respond(flipped, LambdaSample(photon_vars=(0.1,)), 0.0, 0.0)

    assert left == Outcome.MINUS


def test_sample_lambda_shapes_and_determinism(noisy_bell_sign):
    first = sample_lambda(noisy_bell_sign, 100, 5, 0, 0.0, 0.3)
    second = sample_lambda(noisy_bell_sign, 100, 5, 0, 0.0, 0.3)

    assert len(first) == 100
    assert first.photon_vars.shape == (100, 1)
    assert first.detector_l_vars.shape == (100, 0)
    assert first.detector_r_vars.shape == (100, 1)
    np.testing.assert_array_equal(first.photon_vars, second.photon_vars)
    assert np.all((first.photon_vars >= 0) & (first.photon_vars < 2 * math.pi))


def test_right_detector_stream_ignores_left_angle(noisy_bell_sign):
    first = sample_lambda(noisy_bell_sign, 50, 8, 2, 0.0, 0.3)
    second = sample_lambda(noisy_bell_sign, 50, 8, 2, 1.1, 0.3)

    np.testing.assert_array_equal(first.detector_r_vars, second.detector_r_vars)
    np.testing.assert_array_equal(first.photon_vars, second.photon_vars)


def test_local_right_response_ignores_left_angle(bell_sign):
    batch = sample_lambda(bell_sign, 1_000, 3, 0, 0.0, 0.2)
    _, right_first = respond_batch(bell_sign, batch, 0.0, 0.2)
    _, right_second = respond_batch(bell_sign, batch, 1.3, 0.2)

    np.testing.assert_array_equal(right_first, right_second)


def test_nonlocal_right_response_sees_left_angle(qm_mimic):
    batch = sample_lambda(qm_mimic, 1_000, 3, 0, 0.0, 0.2)
    _, right_first = respond_batch(qm_mimic, batch, 0.0, 0.2)
    _, right_second = respond_batch(qm_mimic, batch, 1.3, 0.2)

    assert qm_mimic.locality_tag == LocalityTag.NONLOCAL
    assert not np.array_equal(right_first, right_second)


def test_batch_select_and_from_sample():
    batch = LambdaBatch(
        photon_vars=np.arange(6, dtype=float).reshape(3, 2),
        detector_l_vars=np.empty((3, 0)),
        detector_r_vars=np.ones((3, 1)),
    )
    selected = batch.select(np.array([True, False, True]))
    single = LambdaBatch.from_sample(LambdaSample(photon_vars=(1.0, 2.0), detector_r_vars=(0.5,)))

    assert len(selected) == 2
    np.testing.assert_array_equal(selected.photon_vars, [[0, 1], [4, 5]])
    assert single.photon_vars.shape == (1, 2)
    assert single.detector_l_vars.shape == (1, 0)
