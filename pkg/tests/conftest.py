import random
from fractions import Fraction

import pytest

from torsionpoints import LaurentPolynomial


@pytest.fixture
def XY():
    return LaurentPolynomial.gens(2)


def random_sparse(rng: random.Random, nvars: int, max_terms: int = 4, max_exp: int = 2):
    """Random Laurent polynomial with small integer-or-half coefficients."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        v = tuple(rng.randint(-max_exp, max_exp) for _ in range(nvars))
        terms[v] = Fraction(rng.choice([-2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
    return LaurentPolynomial(nvars, terms)


ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)
