import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gjfacets.analysis import minimality_check, perturbation_membership, verify_effective
from gjfacets.exactnum import ZERO, QNum, qnum
from gjfacets.linalg import RowEchelon, nullspace
from gjfacets.perturb import (
    Move,
    NotMinimalError,
    covered_components,
    extremality_verdict,
    pwl_perturbation_space,
)
from gjfacets.pwl import BreakpointComplex, PwlFunction, common_refinement, zero_function

from conftest import gmic, symmetric_candidate


def fraction_rank(rows, ncols):
    """Plain Gaussian elimination on Fractions."""
    m = [[Fraction(r.get(c, 0)) for c in range(ncols)] for r in rows]
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                k = m[i][c] / m[rank][c]
                m[i] = [a - k * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


sparse_rows = st.lists(
    st.dictionaries(st.integers(0, 7), st.fractions(-5, 5, max_denominator=7), max_size=4), max_size=9
)


@settings(max_examples=100, deadline=None)
@given(sparse_rows)
def test_nullspace_against_fraction_oracle(rows):
    ncols = 8
    qrows = [{c: qnum(v) for c, v in r.items()} for r in rows]
    basis = nullspace(qrows, ncols)
    assert len(basis) == ncols - fraction_rank(rows, ncols)
    for v in basis:
        for r in qrows:
            assert sum((c * v[k] for k, c in r.items()), ZERO) == 0


def test_nullspace_over_sqrt2():
    s2 = QNum(0, 1)
    ech = RowEchelon(3)
    ech.add({0: qnum(1), 1: s2})
    ech.add({1: qnum(1), 2: -s2})
    (v,) = ech.nullspace()
    assert v[0] + s2 * v[1] == 0 and v[1] - s2 * v[2] == 0
    assert not ech.add({0: qnum(1), 2: qnum(2)})  # dependent: row1 + sqrt2*row2


def test_psi_space_trivial(psi):
    assert pwl_perturbation_space(psi).dimension == 0


def test_average_space_contains_difference(pi_avg, pi_bar):
    sp = pwl_perturbation_space(pi_avg)
    assert sp.dimension >= 1
    for b in sp.basis:
        assert perturbation_membership(b, pi_avg, "E_bullet")
    (b,) = sp.basis
    cx = common_refinement(b.complex, pi_bar.complex)
    bb, pb = b.refine(cx), pi_bar.refine(cx)
    # pi_bar is a multiple of the basis vector
    i = next(i for i, v in enumerate(bb.right) if v)
    c = pb.right[i] / bb.right[i]
    assert (b * c).same_as(pi_bar)


def test_kzh_space_trivial(kzh):
    assert pwl_perturbation_space(kzh).is_trivial()


def test_nonminimal_rejected():
    with pytest.raises(NotMinimalError):
        pwl_perturbation_space(zero_function(Fraction(1, 2)))
    with pytest.raises(NotMinimalError):
        extremality_verdict(zero_function(Fraction(1, 2)))


def test_moves():
    t = Move("translation", (qnum(0), qnum(Fraction(1, 4))), (qnum(Fraction(1, 2)), qnum(Fraction(3, 4))))
    assert t.apply((qnum(Fraction(1, 8)), qnum(Fraction(1, 4)))) == (Fraction(5, 8), Fraction(3, 4))
    r = Move("reflection", (qnum(0), qnum(Fraction(1, 4))), (qnum(Fraction(1, 2)), qnum(Fraction(3, 4))))
    assert r.apply((qnum(0), qnum(Fraction(1, 8)))) == (Fraction(5, 8), Fraction(3, 4))
    assert r.inverse().inverse() == r


def test_covered_components(psi, kzh):
    _, unc = covered_components(psi)
    assert unc == []
    _, unc = covered_components(gmic(Fraction(2, 5)))
    assert unc == []
    _, unc = covered_components(kzh)
    assert unc == [
        (Fraction(219, 800), Fraction(269, 800)),
        (Fraction(371, 800), Fraction(421, 800)),
    ]


def test_verdicts(psi, pi_avg, kzh):
    assert extremality_verdict(psi).verdict == "extreme"
    v = extremality_verdict(pi_avg)
    assert v.verdict == "not_extreme"
    assert not v.witness.is_zero()
    assert verify_effective(pi_avg, v.witness, v.eps)
    k = extremality_verdict(kzh)
    assert k.verdict == "inconclusive" and len(k.uncovered) == 2
    assert k.to_dict()["uncovered"] == [["219/800", "269/800"], ["371/800", "421/800"]]


def _spurious(pi, rng, k=3):
    extra = {Fraction(rng.randrange(1, 97), 97) for _ in range(k)}
    cx = BreakpointComplex(tuple(sorted(set(pi.breakpoints) | {qnum(e) for e in extra})))
    return pi.refine(cx)


def test_verdict_invariant_under_refinement(psi, pi_avg):
    rng = random.Random(5)
    assert extremality_verdict(_spurious(psi, rng)).verdict == "extreme"
    assert extremality_verdict(_spurious(pi_avg, rng)).verdict == "not_extreme"


def test_extreme_soundness_random_candidates(psi):
    rng = random.Random(11)
    for _ in range(200):
        r = _spurious(psi, rng, k=rng.randrange(0, 3))
        n = len(r)
        vals = [[Fraction(rng.randrange(-3, 4), 8) for _ in range(n)] for _ in range(3)]
        for v in vals:
            v[0] = Fraction(0)
        cand = PwlFunction(r.complex, vals[0], vals[1], vals[2], psi.f)
        assert cand.is_zero() or not perturbation_membership(cand, psi, "E_bullet")


def test_symmetric_family_not_extreme():
    rng = random.Random(2)
    found = 0
    while found < 5:
        pi = symmetric_candidate(rng)
        if not minimality_check(pi).minimal:
            continue
        found += 1
        v = extremality_verdict(pi)
        assert v.verdict == "not_extreme"
        assert verify_effective(pi, v.witness, v.eps)
