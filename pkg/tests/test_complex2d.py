import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gjfacets.complex2d import (
    Affine2,
    AffineBoundError,
    ZeroSet,
    build_delta_complex,
    check_affine_min_bound,
    delta_pi_limit,
    face_slacks,
    n_f,
    sans_limits_part,
    squared_distance_to_set,
    zero_set_of_values,
)
from gjfacets.exactnum import qnum

from conftest import OracleFunction, random_small_function


def _centroid(F):
    n = len(F.vertices)
    return (sum(v[0] for v in F.vertices) / n, sum(v[1] for v in F.vertices) / n)


def test_faces_partition_the_square(psi):
    dc = build_delta_complex(psi)
    grid = [Fraction(k, 48) for k in range(48)]
    for x in grid:
        for y in grid:
            pt = (qnum(x), qnum(y))
            hits = [F for F in dc if F.contains_relint(pt)]
            assert len(hits) == 1
            assert dc.face_containing(pt) is hits[0]


def test_face_dimensions(psi):
    dc = build_delta_complex(psi)
    for F in dc:
        if F.dim == 0:
            assert len(F.vertices) == 1
        elif F.dim == 1:
            assert len(F.vertices) == 2
        else:
            assert len(F.vertices) >= 3
        assert F.contains_relint(_centroid(F)) if F.dim else F.contains_relint(F.vertices[0])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_vertex_slacks_match_extrapolated_oracle(seed):
    pi = random_small_function(random.Random(seed))
    oracle = OracleFunction(pi)
    for F in build_delta_complex(pi):
        vals = face_slacks(pi, F)
        if F.dim == 0:
            (x, y), = F.vertices
            assert vals[0] == oracle.delta(x.rat, y.rat)
            continue
        cx, cy = _centroid(F)
        dc = oracle.delta(cx.rat, cy.rat)
        for (vx, vy), val in zip(F.vertices, vals):
            mx, my = (vx + cx) / 2, (vy + cy) / 2
            # Delta is affine on the face: value at v = 2*Delta(m) - Delta(c)
            assert val == 2 * oracle.delta(mx.rat, my.rat) - dc


def test_delta_limit_outside_closure_raises(psi):
    F = next(F for F in build_delta_complex(psi) if F.dim == 2)
    with pytest.raises(ValueError):
        delta_pi_limit(psi, F, (qnum(2), qnum(2)))


def test_n_f_counts_projections(kzh):
    special = [(qnum(Fraction(219, 800)), qnum(Fraction(269, 800))), (qnum(Fraction(371, 800)), qnum(Fraction(421, 800)))]
    counts = {n_f(F, special) for F in build_delta_complex(kzh)}
    assert counts == {0, 1, 2}


def test_zero_set_kinds():
    a, b, c = (qnum(0), qnum(0)), (qnum(1), qnum(0)), (qnum(0), qnum(1))
    z = qnum(0)
    assert zero_set_of_values([a, b, c], [z, z, z]).kind == "all"
    assert zero_set_of_values([a, b, c], [z, z, qnum(1)]).kind == "segment"
    assert zero_set_of_values([a, b, c], [z, qnum(1), qnum(1)]).kind == "point"
    assert not zero_set_of_values([a, b, c], [qnum(1)] * 3)


def test_sans_limits_drops_boundary_pieces(psi):
    for F in build_delta_complex(psi):
        if F.dim != 2:
            continue
        zs = zero_set_of_values(F.vertices, face_slacks(psi, F))
        part = sans_limits_part(F, zs)
        if zs.kind == "point":
            assert not part  # a vertex is never in the relative interior
        if zs.kind == "all":
            assert part.kind == "all"


# affine lower bound ----------------------------------------------------------


def _instance(rng, F):
    """Affine g >= 0 on the face with minimum 0, m = smallest positive vertex value."""
    a, b = Fraction(rng.randrange(-9, 10), 7), Fraction(rng.randrange(-9, 10), 7)
    g0 = Affine2(qnum(a), qnum(b), qnum(0))
    c = -min(g0(v) for v in F.vertices)
    g = Affine2(qnum(a), qnum(b), c)
    pos = [g(v) for v in F.vertices if g(v) > 0]
    m = min(pos) if pos else qnum(1)
    return g, m


def test_affine_bound_on_faces(psi):
    rng = random.Random(3)
    faces = [F for F in build_delta_complex(psi) if F.dim == 2]
    for F in faces:
        g, m = _instance(rng, F)
        samples = []
        for _ in range(10):
            w = [Fraction(rng.randrange(0, 20)) for _ in F.vertices]
            tot = sum(w) or Fraction(1)
            samples.append((sum(wi * v[0] for wi, v in zip(w, F.vertices)) / tot, sum(wi * v[1] for wi, v in zip(w, F.vertices)) / tot))
        assert check_affine_min_bound(F.vertices, g, m, samples)


def test_affine_bound_can_fail_for_large_polygons():
    poly = [(qnum(0), qnum(0)), (qnum(10), qnum(0)), (qnum(0), qnum(1))]
    g = Affine2(qnum(1), qnum(0), qnum(0))  # zero on the edge x = 0
    assert not check_affine_min_bound(poly, g, 10, [(qnum(10), qnum(0))])


@pytest.mark.parametrize(
    "g,m,reason",
    [
        (Affine2(qnum(-1), qnum(0), qnum(0)), 1, "negative_vertex"),
        (Affine2(qnum(1), qnum(0), qnum(0)), 2, "vertex_value_below_m"),
        (Affine2(qnum(1), qnum(0), qnum(1)), 1, "empty_zero_set"),
        (Affine2(qnum(1), qnum(0), qnum(0)), 0, "m_nonpositive"),
    ],
)
def test_affine_bound_hypothesis_errors(g, m, reason):
    poly = [(qnum(0), qnum(0)), (qnum(1), qnum(0)), (qnum(0), qnum(1))]
    with pytest.raises(AffineBoundError) as exc:
        check_affine_min_bound(poly, g, m, [])
    assert exc.value.reason == reason


def test_squared_distance():
    zs = ZeroSet("segment", ((qnum(0), qnum(0)), (qnum(1), qnum(0))))
    assert squared_distance_to_set((qnum(Fraction(1, 2)), qnum(3)), zs) == 9
    assert squared_distance_to_set((qnum(2), qnum(1)), zs) == 2
