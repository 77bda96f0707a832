"""Minimality, additivity domains and effective-perturbation bounds.

Everything here is decided on the vertices of Delta P: on each face the
limit slack ``Delta pi_F`` is affine, so sign and zero questions over a
face reduce to its vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

from .complex2d import (
    Face,
    ZeroSet,
    build_delta_complex,
    face_slacks,
    point_in_segment,
    sans_limits_part,
    zero_set_of_values,
)
from .exactnum import ONE, ZERO, QNum, frac, qnum
from .pwl import FiniteSupportVector, PwlFunction, common_refinement, lipschitz_piece_bound

__all__ = [
    "AdditivitySlice",
    "MinimalityReport",
    "Inclusion",
    "EpsilonBounds",
    "minimality_check",
    "additivity_domain",
    "compare_additivity",
    "p_membership",
    "min_positive_slack",
    "epsilon_vertex",
    "epsilon_lipschitz",
    "verify_effective",
    "perturbation_membership",
    "membership_violation",
    "refine_pair",
]


def refine_pair(a: PwlFunction, b: PwlFunction) -> tuple[PwlFunction, PwlFunction]:
    cx = common_refinement(a.complex, b.complex)
    return a.refine(cx), b.refine(cx)


# minimality -----------------------------------------------------------------


@dataclass
class MinimalityReport:
    """Outcome of :func:`minimality_check`.

    ``failure`` is ``None`` for minimal functions, otherwise one of
    ``'pi(0)=0'``, ``'nonnegativity'``, ``'pi(f)=1'``, ``'symmetry'``,
    ``'subadditivity'``; ``witness`` holds the data needed to re-check it.
    """

    minimal: bool
    failure: str | None = None
    witness: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "minimal" if self.minimal else "not_minimal"

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "certificate": "ok" if self.minimal else self.failure,
            "witness": {k: _jsonable(v) for k, v in self.witness.items()},
        }


def _jsonable(v):
    if isinstance(v, QNum):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _symmetry_points(pi: PwlFunction) -> list[QNum]:
    pts = set(pi.breakpoints)
    pts |= {frac(pi.f - x) for x in pi.breakpoints}
    return sorted(pts)


def minimality_check(pi: PwlFunction) -> MinimalityReport:
    """Decide minimality: ``pi(0)=0``, ``pi >= 0``, ``pi(f)=1``, symmetry, subadditivity."""
    if pi(ZERO) != 0:
        return MinimalityReport(False, "pi(0)=0", {"x": ZERO, "value": pi(ZERO)})
    for i, x in enumerate(pi.breakpoints):
        for side, v in (("minus", pi.left[i]), ("exact", pi.value[i]), ("plus", pi.right[i])):
            if v < 0:
                return MinimalityReport(False, "nonnegativity", {"x": x, "side": side, "value": v})
    if pi(pi.f) != 1:
        return MinimalityReport(False, "pi(f)=1", {"x": pi.f, "value": pi(pi.f)})
    for x in _symmetry_points(pi):
        y = frac(pi.f - x)
        for sx, sy in (("exact", "exact"), ("minus", "plus"), ("plus", "minus")):
            total = pi.limit(x, sx) + pi.limit(y, sy)
            if total != 1:
                return MinimalityReport(
                    False, "symmetry", {"x": x, "side": sx, "mirror": y, "sum": total}
                )
    for F in build_delta_complex(pi):
        for v, d in zip(F.vertices, face_slacks(pi, F)):
            if d < 0:
                return MinimalityReport(
                    False,
                    "subadditivity",
                    {"face": repr(F), "vertex": list(v), "slack": d},
                )
    return MinimalityReport(True)


# additivity -----------------------------------------------------------------


@dataclass(frozen=True)
class AdditivitySlice:
    """Additive points of one face: without limits (inside ``relint F``) and with limits (in ``cl F``)."""

    face: Face
    sans_limits: ZeroSet
    with_limits: ZeroSet


def additivity_domain(pi: PwlFunction, complex=None) -> list[AdditivitySlice]:
    """Per-face additivity slices over Delta P (or over a given refinement)."""
    if complex is not None and complex != pi.complex:
        pi = pi.refine(complex)
    out = []
    for F in build_delta_complex(pi):
        zs = zero_set_of_values(F.vertices, face_slacks(pi, F))
        out.append(AdditivitySlice(F, sans_limits_part(F, zs), zs))
    return out


class Inclusion(str, enum.Enum):
    EQUAL = "equal"
    STRICT_SUBSET = "strict_subset"
    STRICT_SUPERSET = "strict_superset"
    INCOMPARABLE = "incomparable"

    def __str__(self) -> str:
        return self.value


def _piece_subset(A: ZeroSet, B: ZeroSet, open_pieces: bool) -> bool:
    if A.kind == "empty":
        return True
    if B.kind == "empty":
        return False
    if B.kind == "all":
        return True
    if A.kind == "all":
        return False
    if B.kind == "point":
        return A.kind == "point" and A.vertices[0] == B.vertices[0]
    c, d = B.vertices
    if A.kind == "point":
        return point_in_segment(A.vertices[0], c, d, open_=open_pieces)
    return all(point_in_segment(p, c, d) for p in A.vertices)


def compare_additivity(pi1, pi2, mode: str = "sans_limits") -> Inclusion:
    """Compare ``E(pi1)`` with ``E(pi2)`` (``mode='sans_limits'``) or the families ``E_F`` (``'with_limits'``)."""
    if mode not in ("sans_limits", "with_limits"):
        raise ValueError(f"unknown mode {mode!r}")
    if not isinstance(pi1, PwlFunction) or not isinstance(pi2, PwlFunction):
        from .gallery import compare_additivity_lifted

        return compare_additivity_lifted(pi1, pi2, mode)
    cx = common_refinement(pi1.complex, pi2.complex)
    s1 = additivity_domain(pi1, cx)
    s2 = additivity_domain(pi2, cx)
    sub, sup = True, True
    open_pieces = mode == "sans_limits"
    for a, b in zip(s1, s2):
        A = a.sans_limits if open_pieces else a.with_limits
        B = b.sans_limits if open_pieces else b.with_limits
        if sub and not _piece_subset(A, B, open_pieces):
            sub = False
        if sup and not _piece_subset(B, A, open_pieces):
            sup = False
        if not sub and not sup:
            break
    if sub and sup:
        return Inclusion.EQUAL
    if sub:
        return Inclusion.STRICT_SUBSET
    if sup:
        return Inclusion.STRICT_SUPERSET
    return Inclusion.INCOMPARABLE


def p_membership(pi: PwlFunction, y: FiniteSupportVector) -> bool:
    """Is ``y`` in ``P(pi)``: ``sum r y(r) in f + Z`` and ``sum pi(r) y(r) = 1``."""
    if frac(y.total() - pi.f) != 0:
        return False
    s = ZERO
    for r, k in y:
        s = s + pi(r) * k
    return s == 1


# epsilon constructions ------------------------------------------------------


def min_positive_slack(pi: PwlFunction) -> QNum:
    """Smallest nonzero limit slack ``Delta pi_F(v)`` over faces and vertices."""
    best = None
    for F in build_delta_complex(pi):
        for d in face_slacks(pi, F):
            if d and (best is None or d < best):
                best = d
    if best is None:
        raise ValueError("Delta pi is identically zero at the vertices")
    return best


def _paired_slacks(pi: PwlFunction, bar: PwlFunction):
    pi, bar = refine_pair(pi, bar)
    for F in build_delta_complex(pi):
        yield F, face_slacks(pi, F), face_slacks(bar, F)


def epsilon_vertex(pi: PwlFunction, bar: PwlFunction, one_sided: bool = False) -> QNum:
    """Largest ``eps`` allowed by the vertex ratios ``Delta pi / |Delta bar|``.

    With ``one_sided=True`` only vertices where ``Delta bar > 0`` are used,
    which bounds ``pi - eps*bar`` alone.  The default uses every vertex with
    ``Delta bar != 0`` so that both ``pi + eps*bar`` and ``pi - eps*bar``
    stay subadditive.
    """
    best = None
    for F, dp, db in _paired_slacks(pi, bar):
        for p, b in zip(dp, db):
            if one_sided:
                if not b > 0:
                    continue
                r = p / b
            else:
                if not b:
                    continue
                r = p / abs(b)
            if best is None or r < best:
                best = r
    if best is None:
        raise ValueError("no vertex with nonzero Delta bar" if not one_sided else "no vertex with Delta bar > 0")
    if not best > 0:
        raise ValueError("Delta bar is nonzero at an additive vertex of pi; E(pi) is not contained in E(bar)")
    return best


@dataclass(frozen=True)
class EpsilonBounds:
    """``eps = min(m/M, m/(8C))``; ``eps is None`` marks the zero perturbation (``M == 0``)."""

    eps: QNum | None
    m: QNum
    M: QNum
    C: QNum

    @property
    def is_zero_perturbation(self) -> bool:
        return self.eps is None


def epsilon_lipschitz(pi: PwlFunction, bar: PwlFunction) -> EpsilonBounds:
    problem = membership_violation(bar, pi, "E_bullet")
    if problem is not None:
        raise ValueError(f"perturbation is not limit-additive where pi is: {problem}")
    pi_r, bar_r = refine_pair(pi, bar)
    m = min_positive_slack(pi_r)
    C = lipschitz_piece_bound(bar_r, strict=True)
    M = ZERO
    for F in build_delta_complex(pi_r):
        for d in face_slacks(bar_r, F):
            if abs(d) > M:
                M = abs(d)
    if not M:
        return EpsilonBounds(None, m, M, C)
    eps = min(m / M, m / (8 * C))
    return EpsilonBounds(eps, m, M, C)


def verify_effective(pi: PwlFunction, bar: PwlFunction, eps) -> bool:
    """Are both ``pi + eps*bar`` and ``pi - eps*bar`` minimal valid?"""
    eps = qnum(eps)
    if not eps > 0:
        raise ValueError("eps must be positive")
    plus = pi + bar * eps
    minus = pi - bar * eps
    return minimality_check(plus).minimal and minimality_check(minus).minimal


def membership_violation(bar: PwlFunction, pi: PwlFunction, mode: str = "E_bullet") -> str | None:
    """Describe why ``bar`` is not in the perturbation space of ``pi``; ``None`` if it is."""
    if mode not in ("E", "E_bullet"):
        raise ValueError(f"unknown mode {mode!r}")
    if bar(ZERO) != 0:
        return "bar(0) != 0"
    if bar(pi.f) != 0:
        return "bar(f) != 0"
    pi_r, bar_r = refine_pair(pi, bar)
    for F in build_delta_complex(pi_r):
        zs = zero_set_of_values(F.vertices, face_slacks(pi_r, F))
        if mode == "E":
            zs = sans_limits_part(F, zs)
        if not zs:
            continue
        pts = F.vertices if zs.kind == "all" else zs.vertices
        bvals = face_slacks(bar_r, F) if zs.kind == "all" else None
        if bvals is None:
            from .complex2d import delta_pi_limit

            bvals = [delta_pi_limit(bar_r, F, p) for p in pts]
        for p, d in zip(pts, bvals):
            if d:
                return f"{F!r} at {tuple(str(c) for c in p)}: Delta bar = {d}"
    return None


def perturbation_membership(bar: PwlFunction, pi: PwlFunction, mode: str = "E_bullet") -> bool:
    """Is ``bar`` in the space of perturbations with the additivities (``'E'``) or limit-additivities (``'E_bullet'``) of ``pi``?"""
    return membership_violation(bar, pi, mode) is None
