import random
from fractions import Fraction

import pytest

from gjfacets.gallery import build_pi_prime_psi, load_data_file, load_paper_function
from gjfacets.pwl import PwlFunction, from_breakpoints_and_values


@pytest.fixture(scope="session")
def psi():
    return load_paper_function("psi")


@pytest.fixture(scope="session")
def kzh():
    return load_paper_function("kzh")


@pytest.fixture(scope="session")
def kzh_raw():
    return load_data_file("kzh")


@pytest.fixture(scope="session")
def pi_prime(psi):
    return build_pi_prime_psi(psi)


@pytest.fixture(scope="session")
def pi_avg(psi, pi_prime):
    return (pi_prime + psi) * Fraction(1, 2)


@pytest.fixture(scope="session")
def pi_bar(psi, pi_prime):
    return (pi_prime - psi) * Fraction(1, 2)


def gmic(f):
    f = Fraction(f)
    return from_breakpoints_and_values([0, f, 1], [0, 1, 0], f)


def symmetric_candidate(rng: random.Random):
    """Continuous candidate with free breakpoints a, f-a in (0, f); symmetric by construction."""
    while True:
        f = Fraction(rng.randrange(3, 18), 20)
        a = Fraction(rng.randrange(1, 100), 100) * f / 2
        if a < f - a:
            break
    alpha = Fraction(rng.randrange(1, 100), 100)
    m = (1 + f) / 2
    return from_breakpoints_and_values([0, a, f - a, f, m, 1], [0, alpha, 1 - alpha, 1, Fraction(1, 2), 0], f)


def random_small_function(rng: random.Random, max_bkpts: int = 4, continuous: bool | None = None):
    """Random periodic function with at most ``max_bkpts`` rational breakpoints (not necessarily minimal)."""
    n = rng.randrange(1, max_bkpts + 1)
    den = rng.choice([4, 5, 6, 8, 10])
    xs = sorted({Fraction(0)} | {Fraction(rng.randrange(1, den), den) for _ in range(n - 1)})
    f = Fraction(rng.randrange(1, den), den)
    if continuous is None:
        continuous = rng.random() < 0.5
    vals = [Fraction(rng.randrange(0, 5), 4) for _ in xs]
    vals[0] = Fraction(0)
    if continuous:
        return PwlFunction(xs, vals, vals, vals, f)
    left = [Fraction(rng.randrange(0, 5), 4) for _ in xs]
    right = [Fraction(rng.randrange(0, 5), 4) for _ in xs]
    return PwlFunction(xs, left, vals, right, f)


class OracleFunction:
    """Independent evaluator on plain Fractions (rational data only)."""

    def __init__(self, pi: PwlFunction):
        self.xs = [x.rat for x in pi.breakpoints] + [Fraction(1)]
        self.left = [v.rat for v in pi.left]
        self.value = [v.rat for v in pi.value]
        self.right = [v.rat for v in pi.right]
        self.n = len(pi)
        self.f = pi.f.rat

    def __call__(self, x: Fraction) -> Fraction:
        x = x - (x.numerator // x.denominator)
        for i in range(self.n):
            if x == self.xs[i]:
                return self.value[i]
            if self.xs[i] < x < self.xs[i + 1]:
                a, b = self.xs[i], self.xs[i + 1]
                lo, hi = self.right[i], self.left[(i + 1) % self.n]
                return lo + (hi - lo) * (x - a) / (b - a)
        raise AssertionError("unreachable")

    def delta(self, x: Fraction, y: Fraction) -> Fraction:
        return self(x) + self(y) - self(x + y)


ACCEPTANCE_RESULTS: dict[int, tuple[str, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        status, title = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
