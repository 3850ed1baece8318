import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "dqchaos", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("dqchaos")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_state(rng, n_basis, width=None):
    """Random normalized amplitudes, optionally confined to |n| < width."""
    c = rng.normal(size=n_basis) + 1j * rng.normal(size=n_basis)
    if width is not None:
        n = np.arange(-(n_basis // 2), n_basis // 2)
        c[np.abs(n) >= width] = 0.0
    return c / np.linalg.norm(c)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
