import logging
import math

import pytest

from bell_aspect.domain import ChshSettings
from bell_aspect.lhv_models import (
    LhvModel,
    bell_sign_detector_noise_model,
    bell_sign_model,
    qm_mimic_nonlocal_model,
)


@pytest.fixture
def pi8_settings() -> ChshSettings:
    """Angles spaced by π/8, where the quantum CHSH value is largest."""
    return ChshSettings(
        theta_a=math.pi / 4, theta_a_prime=0.0, theta_b=math.pi / 8, theta_b_prime=-math.pi / 8
    )


@pytest.fixture
def equal_settings() -> ChshSettings:
    return ChshSettings(theta_a=0.3, theta_a_prime=0.3, theta_b=0.3, theta_b_prime=0.3)


@pytest.fixture
def bell_sign() -> LhvModel:
    return bell_sign_model()


@pytest.fixture
def noisy_bell_sign() -> LhvModel:
    return bell_sign_detector_noise_model(0.1)


@pytest.fixture
def qm_mimic() -> LhvModel:
    return qm_mimic_nonlocal_model()


@pytest.fixture
def restore_logging():
    """Undo handlers and levels installed by logging bootstrap."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level

    yield

    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)
    logging.captureWarnings(False)
