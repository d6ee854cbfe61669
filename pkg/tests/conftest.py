import random
from fractions import Fraction

import pytest

from eqlines import _pycore
from eqlines.codes import Code
from eqlines.exactmat import SymMatrix

try:
    from eqlines import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = [_pycore] + ([_core] if _core is not None else [])

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(params=BACKENDS, ids=lambda m: m.BACKEND)
def backend(request):
    return request.param


def rational_unit_vector(rng: random.Random, dim: int, scale: int = 6) -> list[Fraction]:
    """Inverse stereographic image of a random rational point: an exact unit vector."""
    x = [Fraction(rng.randint(-scale, scale), rng.randint(1, scale)) for _ in range(dim - 1)]
    s = sum(v * v for v in x)
    return [2 * v / (s + 1) for v in x] + [(s - 1) / (s + 1)]


def random_rational_code(rng: random.Random, order: int, dim: int) -> Code:
    vecs = [rational_unit_vector(rng, dim) for _ in range(order)]
    gram = [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in vecs] for u in vecs]
    return Code(gram=SymMatrix(gram), label="random")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
