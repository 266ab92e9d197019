import math

import numpy as np
import pytest

from cventropy.circuits import CircuitParams

# Reference values from 50-digit mpmath: series sums of -p ln p over the
# geometric spectrum (1 - l) l^n, l = tanh(r)^2.
TMSV_ENTROPY = {
    0.25: 0.24140753076275856286,
    0.5: 0.65945295916803670172,
    1.0: 1.61982209289770226436,
    1.5: 2.61453209455794070063,
}
TANH2_1 = 0.58002565838597393061
COTH2_1 = 1.72406166096631046641
A_TMSV_1 = 0.55144112954356641552
TANH_1 = 0.76159415595576488812


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_params(rng, n, max_zeta=1.5):
    out = []
    for _ in range(n):
        theta, phi, m1, m2, a1, a2 = rng.uniform(size=6) * [2 * math.pi, 2 * math.pi, max_zeta, max_zeta, 2 * math.pi, 2 * math.pi]
        out.append(CircuitParams(theta, phi, m1 * np.exp(1j * a1), m2 * np.exp(1j * a2)))
    return out


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Print a criterion verdict now and again in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def report(number: int, title: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}  ({detail})"
        lines.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
