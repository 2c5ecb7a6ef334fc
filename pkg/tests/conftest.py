import numpy as np
import pytest
from hypothesis import strategies as st

from osscodes.spec import CodeSpec, LayerSpec


@pytest.fixture
def example48():
    """N=48 two-layer code with A1={-1,1}, A2={-2,2}, K=2 per layer."""
    return CodeSpec(48, (LayerSpec(2, (-1.0, 1.0)), LayerSpec(2, (-2.0, 2.0))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def code_specs(draw, max_layers=3, max_n=256, max_alpha=4):
    """Random valid specs with disjoint integer alphabets and identity dictionary."""
    layers_n = draw(st.integers(1, max_layers))
    n = draw(st.integers(layers_n * 2, max_n))
    pool = list(range(1, 9)) + list(range(-8, 0))
    amps = draw(st.permutations(pool))
    layers = []
    used = 0
    pos = 0
    for i in range(layers_n):
        free = n - used
        k = draw(st.integers(1, max(1, min(4, free - (layers_n - i - 1)))))
        size = draw(st.sampled_from([s for s in (1, 2, 4) if s <= max_alpha]))
        alpha = tuple(float(a) for a in amps[pos:pos + size])
        pos += size
        layers.append(LayerSpec(k, alpha))
        used += k
    return CodeSpec(n, tuple(layers))


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
