from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from hopfmono.symalg import Sampler, SymFunc

quarter = st.integers(-8, 8).map(lambda n: Fraction(n, 4))
small_int = st.integers(-2, 3).map(Fraction)
coeffs = st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False, allow_infinity=False)


@st.composite
def symfuncs(draw, max_terms=3, exps=small_int):
    n = draw(st.integers(1, max_terms))
    terms = {}
    for _ in range(n):
        key = (draw(st.integers(-2, 2).map(Fraction)),) + tuple(draw(exps) for _ in range(4))
        terms[key] = draw(coeffs)
    return SymFunc(terms)


@pytest.fixture
def sampler():
    return Sampler(n=48, seed=1234)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
