from fractions import Fraction

import pytest

from gjfacets.analysis import (
    Inclusion,
    compare_additivity,
    epsilon_lipschitz,
    epsilon_vertex,
    min_positive_slack,
    minimality_check,
    p_membership,
    perturbation_membership,
    verify_effective,
)
from gjfacets.exactnum import qnum
from gjfacets.pwl import FiniteSupportVector, PwlFunction, zero_function

from conftest import gmic

H = Fraction(1, 2)


def test_bundled_functions_minimal(psi, pi_prime, kzh):
    for pi in (psi, pi_prime, kzh):
        assert minimality_check(pi).minimal


@pytest.mark.parametrize(
    "pi,failure",
    [
        (PwlFunction([0], [0], [1], [0], H), "pi(0)=0"),
        (PwlFunction([0, H], [0, 1], [0, 1], [-1, 1], H), "nonnegativity"),
        (zero_function(H), "pi(f)=1"),
        (PwlFunction([0, Fraction(1, 4), H], [0, 1, 1], [0, 1, 1], [0, 1, 1], H), "symmetry"),
    ],
)
def test_failure_kinds(pi, failure):
    rep = minimality_check(pi)
    assert not rep.minimal and rep.failure == failure
    assert rep.to_dict()["verdict"] == "not_minimal"


def test_subadditivity_failure_reports_negative_vertex():
    # symmetric, but pi(1/8) + pi(1/8) = 1/5 < pi(1/4) = 1/2
    f = Fraction(1, 2)
    xs = [0, Fraction(1, 8), Fraction(3, 8), f, Fraction(3, 4)]
    vals = [0, Fraction(1, 10), Fraction(9, 10), 1, Fraction(1, 2)]
    pi = PwlFunction(xs, vals, vals, vals, f)
    rep = minimality_check(pi)
    assert rep.failure == "subadditivity"
    assert qnum(rep.witness["slack"]) < 0


def test_gmic_minimal():
    for f in (Fraction(1, 5), Fraction(1, 2), Fraction(4, 5)):
        assert minimality_check(gmic(f)).minimal


def test_additivity_inclusions(psi, pi_prime):
    assert compare_additivity(psi, pi_prime, "sans_limits") is Inclusion.STRICT_SUBSET
    assert compare_additivity(pi_prime, psi, "sans_limits") is Inclusion.STRICT_SUPERSET
    assert compare_additivity(psi, psi, "sans_limits") is Inclusion.EQUAL
    assert compare_additivity(psi, psi, "with_limits") is Inclusion.EQUAL
    with pytest.raises(ValueError):
        compare_additivity(psi, psi, "sideways")


def test_kzh_min_positive_slack(kzh):
    assert min_positive_slack(kzh) == Fraction(19, 23998)


def test_epsilons_on_average(pi_avg, pi_bar):
    ev = epsilon_vertex(pi_avg, pi_bar)
    assert ev == 1
    assert verify_effective(pi_avg, pi_bar, ev)
    lip = epsilon_lipschitz(pi_avg, pi_bar)
    assert lip.eps == Fraction(1, 96) and lip.m == Fraction(1, 4) and lip.M == H and lip.C == 3
    assert verify_effective(pi_avg, pi_bar, lip.eps)
    # too large a step breaks minimality
    assert not verify_effective(pi_avg, pi_bar, 3)


def test_epsilon_vertex_rejects_bad_perturbation(psi, pi_bar):
    with pytest.raises(ValueError):
        epsilon_vertex(psi, pi_bar)


def test_membership_modes(psi, pi_prime, pi_avg, pi_bar):
    diff = pi_prime - psi
    assert perturbation_membership(diff, psi, "E")
    assert not perturbation_membership(diff, psi, "E_bullet")
    assert perturbation_membership(pi_bar, pi_avg, "E_bullet")


def test_p_membership(psi):
    # y = e_f is always tight
    assert p_membership(psi, FiniteSupportVector({psi.f: 1}))
    # 1/8 + 3/8 = 1/2 with psi(1/8) + psi(3/8) = 1
    assert p_membership(psi, FiniteSupportVector({Fraction(1, 8): 1, Fraction(3, 8): 1}))
    assert p_membership(psi, FiniteSupportVector({Fraction(1, 4): 2}))  # psi(1/4) = 1/2
    assert not p_membership(psi, FiniteSupportVector({Fraction(1, 16): 8}))
    assert not p_membership(psi, FiniteSupportVector({Fraction(1, 8): 1}))
