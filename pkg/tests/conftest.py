import random

import pytest

from congruence_lab.matgen import Matrix
from congruence_lab.modnum import ModCtx


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


def make_matrix(n, rng, *, ctx=None, lo=-9, hi=9, provenance="test"):
    """Random dense matrix; entries canonical mod ctx.modulus when ctx is given."""
    if ctx is None:
        rows = tuple(tuple(rng.randint(lo, hi) for _ in range(n)) for _ in range(n))
    else:
        rows = tuple(tuple(rng.randrange(ctx.modulus) for _ in range(n)) for _ in range(n))
    return Matrix(n, rows, ctx, provenance)


def lift(matrix):
    """The same entries viewed as plain integers (exact mode)."""
    return Matrix(matrix.n, matrix.entries, None, matrix.provenance + "-lift")


SMALL_PRIMES = (3, 5, 7, 11, 13)


@pytest.fixture(params=SMALL_PRIMES)
def small_prime_ctx(request):
    return ModCtx.prime(request.param)


#: one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
