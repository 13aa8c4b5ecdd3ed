import random
from fractions import Fraction

import pytest

from wavemat.field import C64, QI
from wavemat.parametrize import ParamPoint


def rand_rational(rng, max_den=1000, complex_=False):
    def part():
        q = rng.randint(1, max_den)
        return Fraction(rng.randint(-2 * q, 2 * q), q)

    if complex_:
        return f"{part()}+{part()}*i".replace("+-", "-")
    return part()


def rand_params(rng, m, N, field, complex_=True, max_den=1000):
    if field.exact:
        gamma = [[rand_rational(rng, max_den, complex_) for _ in range(N)] for _ in range(m - 1)]
    else:
        gamma = [
            [complex(rng.gauss(0, 1), rng.gauss(0, 1) if complex_ else 0.0) for _ in range(N)]
            for _ in range(m - 1)
        ]
    return ParamPoint(m, N, tuple(map(tuple, gamma)), field)


def rand_direction(rng, m, field, max_den=20):
    while True:
        if field.exact:
            v = [Fraction(rng.randint(-max_den, max_den), rng.randint(1, max_den)) for _ in range(m)]
        else:
            v = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in range(m)]
        if any(v):
            return v


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(params=[QI, C64], ids=["qi", "c64"])
def field(request):
    return request.param


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
