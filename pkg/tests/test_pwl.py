import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gjfacets.exactnum import QNum, qnum
from gjfacets.pwl import (
    BreakpointComplex,
    FiniteSupportVector,
    FunctionFileError,
    PwlFunction,
    common_refinement,
    dumps_function,
    lipschitz_piece_bound,
    loads_function,
    sup_abs_bound,
    zero_function,
)

from conftest import OracleFunction, random_small_function


def test_psi_values_and_limits(psi):
    h = Fraction(1, 2)
    assert psi(h) == 1
    assert psi.limit(h, "minus") == 1
    assert psi.limit(h, "plus") == h
    assert psi(0) == 0 and psi.limit(0, "minus") == h
    # periodicity
    assert psi(Fraction(3, 2)) == psi(h) and psi(-h) == psi(h)


def test_slopes_are_left_minus_right(psi):
    xs = list(psi.breakpoints) + [qnum(1)]
    for i, s in enumerate(psi.slopes):
        j = (i + 1) % len(psi)
        assert s == (psi.left[j] - psi.right[i]) / (xs[i + 1] - xs[i])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.fractions(0, 1, max_denominator=50), max_size=20))
def test_eval_matches_oracle(seed, pts):
    pi = random_small_function(random.Random(seed), max_bkpts=5)
    oracle = OracleFunction(pi)
    for x in pts + [Fraction(0), pi.f.rat]:
        assert pi(x) == oracle(x)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.fractions(0, 1, max_denominator=30), max_size=5))
def test_refinement_preserves_function(seed, extra):
    pi = random_small_function(random.Random(seed))
    cx = common_refinement(pi.complex, BreakpointComplex(tuple(sorted({Fraction(0)} | {e for e in extra if e < 1}))))
    r = pi.refine(cx)
    assert r.same_as(pi)
    for x in cx:
        for side in ("minus", "exact", "plus"):
            assert r.limit(x, side) == pi.limit(x, side)


def test_linear_combination(psi, pi_prime):
    avg = (psi + pi_prime) * Fraction(1, 2)
    for k in range(0, 80):
        x = Fraction(k, 80)
        assert avg(x) == (psi(x) + pi_prime(x)) / 2
    assert (psi - psi).is_zero()


def test_file_round_trip(kzh):
    text = dumps_function(kzh, comment="round trip")
    assert loads_function(text) == kzh


def test_irrational_round_trip():
    x = QNum(Fraction(1, 4), Fraction(1, 10))
    pi = PwlFunction([0, x], [0, 1, ], [0, 1], [0, 1], Fraction(1, 2))
    assert loads_function(dumps_function(pi)) == pi


@pytest.mark.parametrize(
    "text",
    [
        "0 0 0 0\n",  # missing f
        "f 1/2\n",  # no breakpoints
        "f 1/2\n0 0 0\n",  # short row
        "f 1/2\n1/2 0 0 0\n",  # 0 not a breakpoint
        "f 1/2\n0 0 0 0\n1/2 0 0 0\n1/4 0 0 0\n",  # not increasing
        "f 1/2\n0 0 0 zz\n",  # bad number
        "f 3/2\n0 0 0 0\n",  # f outside (0, 1)
    ],
)
def test_malformed_files(text):
    with pytest.raises(FunctionFileError):
        loads_function(text)


def test_bounds(psi):
    assert sup_abs_bound(psi) == 1
    # steepest piece: 0 -> 3/4 over [0, 1/8]
    assert lipschitz_piece_bound(psi) == 6
    assert lipschitz_piece_bound(psi, strict=True) == 7
    assert zero_function(Fraction(1, 3)).is_zero()


def test_finite_support_vector():
    y = FiniteSupportVector({Fraction(5, 4): 1, Fraction(1, 4): 2})
    assert dict(y) == {qnum(Fraction(1, 4)): 3}
    assert y.total() == Fraction(3, 4)
    with pytest.raises(ValueError):
        FiniteSupportVector({Fraction(1, 4): -1})
