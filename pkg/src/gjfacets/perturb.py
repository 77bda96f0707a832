"""Piecewise linear perturbations, covered intervals and extremality verdicts."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .analysis import (
    epsilon_lipschitz,
    epsilon_vertex,
    minimality_check,
    verify_effective,
)
from .complex2d import Cell, Face, build_delta_complex, face_slacks, zero_set_of_values
from .exactnum import ONE, ZERO, QNum
from .linalg import RowEchelon
from .pwl import PwlFunction

__all__ = [
    "PerturbationSpace",
    "ExtremalityVerdict",
    "Move",
    "pwl_perturbation_space",
    "additive_moves",
    "covered_components",
    "extremality_verdict",
    "NotMinimalError",
]

log = logging.getLogger(__name__)

Interval = tuple[QNum, QNum]


class NotMinimalError(ValueError):
    """The input function is not minimal valid."""


# perturbation space ---------------------------------------------------------
#
# Unknowns per breakpoint x_i: value v_i (3i), right limit r_i (3i+1) and
# slope s_i (3i+2) on (x_i, x_{i+1}).  Left limits are derived:
# l_i = r_{i-1} + s_{i-1} (x_i - x_{i-1}).


def _v(i: int) -> int:
    return 3 * i


def _r(i: int) -> int:
    return 3 * i + 1


def _s(i: int) -> int:
    return 3 * i + 2


def _cell_form(cell: Cell, x: QNum, xs: Sequence[QNum], sign: int, acc: dict[int, QNum]) -> None:
    if cell.is_point:
        key = _v(cell.index)
        acc[key] = acc.get(key, ZERO) + sign
        return
    t = x - cell.shift - xs[cell.index]
    for key, c in ((_r(cell.index), ONE), (_s(cell.index), t)):
        acc[key] = acc.get(key, ZERO) + c * sign


def _eval_form(pi: PwlFunction, x: QNum) -> dict[int, QNum]:
    i, on = pi.complex.locate(x)
    if on:
        return {_v(i): ONE}
    return {_r(i): ONE, _s(i): x - pi.breakpoints[i]}


def _vector_to_function(pi: PwlFunction, vec: Sequence[QNum]) -> PwlFunction:
    n = len(pi)
    ends = pi.complex.ends
    value = [vec[_v(i)] for i in range(n)]
    right = [vec[_r(i)] for i in range(n)]
    left = []
    for i in range(n):
        j = (i - 1) % n
        width = ends[j + 1] - ends[j]
        left.append(vec[_r(j)] + vec[_s(j)] * width)
    return PwlFunction(pi.complex, left, value, right, pi.f)


@dataclass
class PerturbationSpace:
    """Piecewise linear perturbations over ``pi``'s complex with its limit-additivities."""

    pi: PwlFunction
    basis: list[PwlFunction]
    n_unknowns: int
    n_equations: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def is_trivial(self) -> bool:
        return not self.basis


def _equations(pi: PwlFunction) -> Iterable[dict[int, QNum]]:
    xs = pi.breakpoints
    yield {_v(0): ONE}
    yield _eval_form(pi, pi.f)
    for F in build_delta_complex(pi):
        zs = zero_set_of_values(F.vertices, face_slacks(pi, F))
        if not zs:
            continue
        pts = F.vertices if zs.kind == "all" else zs.vertices
        for x, y in pts:
            acc: dict[int, QNum] = {}
            _cell_form(F.I, x, xs, 1, acc)
            _cell_form(F.J, y, xs, 1, acc)
            _cell_form(F.K, x + y, xs, -1, acc)
            row = {k: v for k, v in acc.items() if v}
            if row:
                yield row


def _normalized(row: dict[int, QNum]) -> tuple:
    piv = min(row)
    inv = ONE / row[piv]
    return tuple(sorted((k, v * inv) for k, v in row.items()))


def pwl_perturbation_space(pi: PwlFunction, check_minimal: bool = True) -> PerturbationSpace:
    """Solve the homogeneous system for perturbations that keep every (limit-)additivity of ``pi``."""
    if check_minimal and not minimality_check(pi).minimal:
        raise NotMinimalError("perturbation space is only defined for minimal functions")
    ncols = 3 * len(pi)
    ech = RowEchelon(ncols)
    seen = set()
    count = 0
    for row in _equations(pi):
        key = _normalized(row)
        if key in seen:
            continue
        seen.add(key)
        count += 1
        ech.add(row)
        if ech.is_full():
            break
    basis = [_vector_to_function(pi, v) for v in ech.nullspace()]
    return PerturbationSpace(pi, basis, ncols, count)


# covered intervals ----------------------------------------------------------


def _normalize(ints: Iterable[Interval]) -> list[Interval]:
    ints = sorted((a, b) for a, b in ints if a < b)
    out: list[Interval] = []
    for a, b in ints:
        if out and a <= out[-1][1]:
            if b > out[-1][1]:
                out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def _intersect(A: Sequence[Interval], B: Sequence[Interval]) -> list[Interval]:
    out = []
    for a, b in A:
        for c, d in B:
            lo, hi = max(a, c), min(b, d)
            if lo < hi:
                out.append((lo, hi))
    return _normalize(out)


def _subtract(A: Sequence[Interval], B: Sequence[Interval]) -> list[Interval]:
    out = []
    for a, b in A:
        pieces = [(a, b)]
        for c, d in B:
            nxt = []
            for x, y in pieces:
                if d <= x or y <= c:
                    nxt.append((x, y))
                    continue
                if x < c:
                    nxt.append((x, c))
                if d < y:
                    nxt.append((d, y))
            pieces = nxt
        out.extend(pieces)
    return _normalize(out)


@dataclass(frozen=True)
class Move:
    """A translation or reflection relating ``domain`` to ``image`` (open intervals mod 1)."""

    kind: str
    domain: Interval
    image: Interval

    def apply(self, piece: Interval) -> Interval:
        c, d = piece
        if self.kind == "translation":
            delta = self.image[0] - self.domain[0]
            return (c + delta, d + delta)
        total = self.domain[0] + self.image[1]
        return (total - d, total - c)

    def inverse(self) -> Move:
        return Move(self.kind, self.image, self.domain)


def additive_moves(pi: PwlFunction) -> tuple[list[Face], list[Move]]:
    """Two-dimensional additive faces and the moves induced by additive edges (limits included)."""
    faces2d: list[Face] = []
    moves: set[Move] = set()
    for F in build_delta_complex(pi):
        zs = zero_set_of_values(F.vertices, face_slacks(pi, F))
        if zs.kind == "all" and F.dim == 2:
            faces2d.append(F)
            continue
        if zs.kind == "all" and F.dim == 1:
            a, b = F.vertices
        elif zs.kind == "segment":
            a, b = zs.vertices
        else:
            continue
        k = F.K.shift
        xr = (min(a[0], b[0]), max(a[0], b[0]))
        yr = (min(a[1], b[1]), max(a[1], b[1]))
        sr = (min(a[0] + a[1], b[0] + b[1]) - k, max(a[0] + a[1], b[0] + b[1]) - k)
        if a[1] == b[1]:
            moves.add(Move("translation", xr, sr))
        elif a[0] == b[0]:
            moves.add(Move("translation", yr, sr))
        elif a[0] + a[1] == b[0] + b[1]:
            moves.add(Move("reflection", xr, yr))
    ordered = sorted(moves, key=lambda m: (m.kind, m.domain, m.image))
    return faces2d, ordered


def _merge_into(components: list[list[Interval]], new: list[Interval]) -> tuple[list[list[Interval]], bool]:
    """Merge ``new`` with every component it overlaps; report whether anything changed."""
    overlapping = [c for c in components if _intersect(c, new)]
    rest = [c for c in components if not _intersect(c, new)]
    merged = _normalize([iv for c in overlapping for iv in c] + list(new))
    changed = len(overlapping) != 1 or merged != overlapping[0]
    return rest + [merged], changed


def covered_components(pi: PwlFunction, max_rounds: int = 10000) -> tuple[list[list[Interval]], list[Interval]]:
    """Covered components (lists of open intervals) and the uncovered intervals of ``[0, 1]``."""
    faces2d, moves = additive_moves(pi)
    all_moves = []
    for m in moves:
        all_moves.append(m)
        all_moves.append(m.inverse())
    components: list[list[Interval]] = []
    for F in faces2d:
        proj = _normalize(F.projections())
        components, _ = _merge_into(components, proj)
    rounds = 0
    changed = True
    while changed:
        rounds += 1
        if rounds > max_rounds:
            raise RuntimeError("covering did not stabilize")
        changed = False
        for mv in all_moves:
            for comp in list(components):
                if comp not in components:
                    continue
                pieces = _intersect(comp, [mv.domain])
                if not pieces:
                    continue
                images = _normalize(mv.apply(p) for p in pieces)
                fresh = _subtract(images, comp)
                if not fresh:
                    continue
                components, did = _merge_into(components, _normalize(comp + images))
                changed = changed or did
    covered = _normalize(iv for c in components for iv in c)
    uncovered = _subtract([(ZERO, ONE)], covered)
    components = sorted(components)
    return components, uncovered


# verdict ----------------------------------------------------------------------


@dataclass
class ExtremalityVerdict:
    verdict: str
    witness: PwlFunction | None = None
    eps: QNum | None = None
    uncovered: list[Interval] = field(default_factory=list)
    dimension: int = 0

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "perturbation_space_dimension": self.dimension,
            "uncovered": [[str(a), str(b)] for a, b in self.uncovered],
        }
        if self.witness is not None:
            out["eps"] = str(self.eps)
            out["witness"] = [[str(x), str(l), str(v), str(r)] for x, l, v, r in self.witness.triples()]
        return out


def extremality_verdict(pi: PwlFunction, max_halvings: int = 64) -> ExtremalityVerdict:
    """Extreme, not extreme (with a verified witness) or inconclusive."""
    if not minimality_check(pi).minimal:
        raise NotMinimalError("extremality is only decided for minimal functions")
    space = pwl_perturbation_space(pi, check_minimal=False)
    if not space.is_trivial():
        bar = space.basis[0]
        eps = epsilon_vertex(pi, bar)
        lip = epsilon_lipschitz(pi, bar)
        if lip.eps is not None and lip.eps < eps:
            eps = lip.eps
        for _ in range(max_halvings):
            if verify_effective(pi, bar, eps):
                return ExtremalityVerdict("not_extreme", bar, eps, dimension=space.dimension)
            log.warning("eps=%s failed verification; halving", eps)
            eps = eps / 2
        raise RuntimeError("could not verify an effective perturbation")
    _, uncovered = covered_components(pi)
    if uncovered:
        return ExtremalityVerdict("inconclusive", uncovered=uncovered)
    return ExtremalityVerdict("extreme")
