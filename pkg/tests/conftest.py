import random
from fractions import Fraction

import pytest

from redpair.catalog import cp2, cp2_square, sphere, sphere_power
from redpair.pairing import regularity_check


def regular_points(space, count, seed=0, span=None, den=7, xi=None):
    """Deterministic pseudo-random regular values, skipping anything on a wall."""
    rng = random.Random(seed)
    if span is None:
        lo = [min(p.moment[i] for p in space.points) for i in range(space.rank)]
        hi = [max(p.moment[i] for p in space.points) for i in range(space.rank)]
        if space.kind == "linear":  # unbounded image: sample a box in front of the apex
            lo = [x - 1 for x in lo]
            hi = [x + 5 for x in hi]
    else:
        lo, hi = span
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        assert tries < 100 * count, "could not find enough regular points"
        t = tuple(Fraction(rng.randint(int(a * den) - 2, int(b * den) + 2), den)
                  for a, b in zip(lo, hi))
        if t in out:
            continue
        if regularity_check(space, t, xi).regular:
            out.append(t)
    return out


@pytest.fixture(scope="session")
def s2():
    return sphere()


@pytest.fixture(scope="session")
def s2cube():
    return sphere_power(3)


@pytest.fixture(scope="session")
def cp2_model():
    return cp2()


@pytest.fixture(scope="session")
def cp2sq():
    return cp2_square()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
