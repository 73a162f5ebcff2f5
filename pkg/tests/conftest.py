import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ybco.ring import QQ, Ring
from ybco.tensor import TensorOperator

settings.register_profile(
    "ybco", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ybco")

ACCEPTANCE_LINES: list = []

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def elements(ring: Ring, max_terms: int = 4, low: int = 0, high: int = 2):
    """Strategy for elements of ``ring`` with small exponents in [low, high]."""
    kinds = [v.kind for v in ring.variables]

    def exps():
        parts = []
        for k in kinds:
            lo = low if k == "laurent" else 0
            parts.append(st.integers(lo, high))
        return st.tuples(*parts)

    return st.dictionaries(exps(), small_fractions, max_size=max_terms).map(ring.from_terms)


def random_fraction(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def random_operator(rng: random.Random, d: int, m: int, ring: Ring = QQ, density: float = 0.5,
                    m_in: int | None = None) -> TensorOperator:
    m_in = m if m_in is None else m_in
    cols: dict = {}
    for j in range(d ** m_in):
        for i in range(d ** m):
            if rng.random() < density:
                c = random_fraction(rng)
                if c:
                    cols.setdefault(j, {})[i] = ring.const(c)
    return TensorOperator(d, m, m_in, ring, cols)


@st.composite
def operators(draw, d: int = 2, m: int = 1, ring: Ring = QQ):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return random_operator(random.Random(seed), d, m, ring)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(20240611)
