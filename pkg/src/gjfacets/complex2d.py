"""The two-dimensional polyhedral complex Delta P.

Faces are ``F(I, J, K) = {(x, y): x in I, y in J, x + y in K}`` for cells
``I, J`` of the periodic complex meeting ``[0, 1)`` and cells ``K`` meeting
``[0, 2)``.  Each face keeps its defining cells and the exact vertex list
of its closure, in cyclic order.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .exactnum import ONE, ZERO, QNum, qnum
from .pwl import BreakpointComplex, PwlFunction

__all__ = [
    "Cell",
    "Face",
    "DeltaComplex",
    "ZeroSet",
    "Affine2",
    "AffineBoundError",
    "build_delta_complex",
    "delta_pi",
    "delta_pi_limit",
    "face_affine",
    "face_slacks",
    "n_f",
    "zero_slice",
    "sans_limits_part",
    "check_affine_min_bound",
    "point_in_segment",
    "squared_distance_to_set",
]

Point = tuple[QNum, QNum]


@dataclass(frozen=True)
class Cell:
    """A 0-cell ``{x_i + shift}`` or an open interval ``(x_i, x_{i+1}) + shift``."""

    index: int
    shift: int
    is_point: bool
    lo: QNum
    hi: QNum

    def contains(self, x: QNum) -> bool:
        if self.is_point:
            return x == self.lo
        return self.lo < x < self.hi

    def mod1(self) -> tuple[QNum, QNum]:
        return self.lo - self.shift, self.hi - self.shift

    def __str__(self) -> str:
        if self.is_point:
            return f"{{{self.lo}}}"
        return f"({self.lo}, {self.hi})"


def _cells(p: BreakpointComplex, shifts: Iterable[int]) -> list[Cell]:
    ends = p.ends
    out = []
    for k in shifts:
        for i, x in enumerate(p.breakpoints):
            out.append(Cell(i, k, True, x + k, x + k))
            out.append(Cell(i, k, False, x + k, ends[i + 1] + k))
    return out


@dataclass(eq=False)
class Face:
    """A face of Delta P with its closure's vertices in cyclic order."""

    I: Cell
    J: Cell
    K: Cell
    vertices: tuple[Point, ...]
    dim: int
    _proj: tuple | None = field(default=None, repr=False)

    @property
    def cells(self) -> tuple[Cell, Cell, Cell]:
        return self.I, self.J, self.K

    def key(self) -> tuple:
        return tuple((c.index, c.shift, c.is_point) for c in self.cells)

    def projections(self) -> tuple[tuple[QNum, QNum], ...]:
        """Closed hulls ``(lo, hi)`` of ``p1, p2, p3(F)``, the third reduced mod 1.

        ``lo == hi`` means the projection of the relative interior is a
        point; otherwise it is the open interval ``(lo, hi)``.
        """
        if self._proj is None:
            xs = [v[0] for v in self.vertices]
            ys = [v[1] for v in self.vertices]
            ss = [v[0] + v[1] for v in self.vertices]
            k = self.K.shift
            self._proj = ((min(xs), max(xs)), (min(ys), max(ys)), (min(ss) - k, max(ss) - k))
        return self._proj

    def contains_relint(self, pt: Point) -> bool:
        x, y = pt
        return self.I.contains(x) and self.J.contains(y) and self.K.contains(x + y)

    def contains_closure(self, pt: Point) -> bool:
        x, y = pt
        s = x + y
        return (
            self.I.lo <= x <= self.I.hi and self.J.lo <= y <= self.J.hi and self.K.lo <= s <= self.K.hi
        )

    def __repr__(self) -> str:
        return f"<Face {self.I} x {self.J} x {self.K}, dim {self.dim}>"


def _clip(poly: list[Point], lo: QNum | None, hi: QNum | None) -> list[Point]:
    """Clip a convex polygon by ``lo <= x + y <= hi``."""
    for bound, sense in ((lo, 1), (hi, -1)):
        if bound is None or not poly:
            continue
        vals = [sense * (p[0] + p[1] - bound) for p in poly]
        signs = [v.sign() for v in vals]
        if all(s >= 0 for s in signs):
            continue
        out: list[Point] = []
        n = len(poly)
        for i in range(n):
            p, q = poly[i], poly[(i + 1) % n]
            sp, sq = signs[i], signs[(i + 1) % n]
            if sp >= 0:
                out.append(p)
            if sp * sq < 0:
                t = vals[i] / (vals[i] - vals[(i + 1) % n])
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
        poly = out
    uniq: list[Point] = []
    for p in poly:
        if p not in uniq:
            uniq.append(p)
    return uniq


def _polygon(I: Cell, J: Cell, K: Cell) -> list[Point]:
    a1, b1, a2, b2 = I.lo, I.hi, J.lo, J.hi
    rect = [(a1, a2), (b1, a2), (b1, b2), (a1, b2)]
    uniq: list[Point] = []
    for p in rect:
        if p not in uniq:
            uniq.append(p)
    return _clip(uniq, K.lo, K.hi)


@dataclass
class DeltaComplex:
    """Faces of Delta P covering the fundamental domain ``[0, 1)^2``."""

    complex: BreakpointComplex
    faces: list[Face]

    def __post_init__(self) -> None:
        self._by_key = {F.key(): F for F in self.faces}

    def __len__(self) -> int:
        return len(self.faces)

    def __iter__(self):
        return iter(self.faces)

    def vertices(self) -> set[Point]:
        return {F.vertices[0] for F in self.faces if F.dim == 0}

    def face_containing(self, pt: Point) -> Face:
        """The unique face whose relative interior contains ``pt`` in ``[0,1)^2``."""
        x, y = (qnum(c) for c in pt)
        p = self.complex
        ix, on_x = p.locate(x)
        iy, on_y = p.locate(y)
        s = x + y
        k = 1 if s >= 1 else 0
        iz, on_z = p.locate(s - k)
        key = ((ix, 0, on_x), (iy, 0, on_y), (iz, k, on_z))
        return self._by_key[key]

    def faces_by_dim(self, dim: int) -> list[Face]:
        return [F for F in self.faces if F.dim == dim]


def build_delta_complex(p: BreakpointComplex | PwlFunction) -> DeltaComplex:
    """Enumerate all nonempty faces ``F(I, J, K)`` of Delta P.

    Results are cached per breakpoint complex; the returned object must
    be treated as read-only.
    """
    if isinstance(p, PwlFunction):
        p = p.complex
    return _build_cached(p)


@lru_cache(maxsize=32)
def _build_cached(p: BreakpointComplex) -> DeltaComplex:
    base = _cells(p, (0,))
    kcells = _cells(p, (0, 1))
    k_lo = [c.lo for c in kcells]
    k_hi = [c.hi for c in kcells]
    faces: list[Face] = []
    for I in base:
        for J in base:
            smin, smax = I.lo + J.lo, I.hi + J.hi
            start = bisect_left(k_hi, smin)
            stop = bisect_right(k_lo, smax)
            for K in kcells[start:stop]:
                npts = int(I.is_point) + int(J.is_point) + int(K.is_point)
                if npts >= 2:
                    # the point is determined; test it directly
                    if I.is_point and J.is_point:
                        pt = (I.lo, J.lo)
                    elif I.is_point:
                        pt = (I.lo, K.lo - I.lo)
                    else:
                        pt = (K.lo - J.lo, J.lo)
                    if I.contains(pt[0]) and J.contains(pt[1]) and K.contains(pt[0] + pt[1]):
                        faces.append(Face(I, J, K, (pt,), 0))
                    continue
                poly = _polygon(I, J, K)
                if not poly:
                    continue
                n = len(poly)
                cx = sum((q[0] for q in poly), ZERO) / n
                cy = sum((q[1] for q in poly), ZERO) / n
                if not (I.contains(cx) and J.contains(cy) and K.contains(cx + cy)):
                    continue
                faces.append(Face(I, J, K, tuple(poly), 2 - npts))
    return DeltaComplex(p, faces)


# slacks ---------------------------------------------------------------------


def _cell_piece(pi: PwlFunction, cell: Cell):
    """Return a callable evaluating ``pi`` restricted to ``cell`` (affinely extended)."""
    if cell.is_point:
        val = pi.limit(cell.lo - cell.shift, 0)
        return lambda x: val
    lo, hi = cell.mod1()
    mid = (lo + hi) / 2
    j, on = pi.complex.locate(mid)
    if on:
        raise ValueError("cell is not contained in an interval of the function's complex")
    shift = cell.shift
    return lambda x: pi.interval_affine(j, x - shift)


@dataclass(frozen=True)
class Affine2:
    """``g(x, y) = a*x + b*y + c``."""

    a: QNum
    b: QNum
    c: QNum

    def __call__(self, pt: Point) -> QNum:
        return self.a * pt[0] + self.b * pt[1] + self.c

    def is_zero(self) -> bool:
        return not self.a and not self.b and not self.c


def face_affine(pi: PwlFunction, F: Face) -> Affine2:
    """The affine function on ``aff(F)`` whose restriction to ``cl(F)`` is ``Delta pi_F``."""
    pI, pJ, pK = (_cell_piece(pi, c) for c in F.cells)

    def slope(piece, cell):
        if cell.is_point:
            return ZERO
        return piece(cell.lo + 1) - piece(cell.lo)

    sI, sJ, sK = slope(pI, F.I), slope(pJ, F.J), slope(pK, F.K)
    c = pI(ZERO) + pJ(ZERO) - pK(ZERO)
    return Affine2(sI - sK, sJ - sK, c)


def delta_pi(pi: PwlFunction, x, y) -> QNum:
    """Pointwise subadditivity slack ``pi(x) + pi(y) - pi(x + y)``."""
    x, y = qnum(x), qnum(y)
    return pi(x) + pi(y) - pi(x + y)


def delta_pi_limit(pi: PwlFunction, F: Face, pt: Point) -> QNum:
    """Limit of ``Delta pi`` at ``pt`` from within ``relint(F)``."""
    pt = (qnum(pt[0]), qnum(pt[1]))
    if not F.contains_closure(pt):
        raise ValueError(f"{pt} is not in the closure of {F}")
    pI, pJ, pK = (_cell_piece(pi, c) for c in F.cells)
    return pI(pt[0]) + pJ(pt[1]) - pK(pt[0] + pt[1])


def face_slacks(pi: PwlFunction, F: Face) -> tuple[QNum, ...]:
    """``Delta pi_F`` at each vertex of ``F``."""
    pI, pJ, pK = (_cell_piece(pi, c) for c in F.cells)
    return tuple(pI(x) + pJ(y) - pK(x + y) for x, y in F.vertices)


# n_F ------------------------------------------------------------------------


def _meets(lo: QNum, hi: QNum, a: QNum, b: QNum) -> bool:
    if lo == hi:
        return a < lo < b
    return max(lo, a) < min(hi, b)


def n_f(F: Face, special: Sequence[tuple[QNum, QNum]]) -> int:
    """Number of projections ``p_i(relint F)`` meeting the union of the open ``special`` intervals."""
    count = 0
    for lo, hi in F.projections():
        if any(_meets(lo, hi, a, b) for a, b in special):
            count += 1
    return count


# zero sets ------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroSet:
    """A convex piece of a face.

    ``kind`` is ``'empty'``, ``'all'``, ``'segment'`` or ``'point'``;
    ``vertices`` lists the closure's vertices.  Whether the piece is open
    or closed depends on the context it is returned in (see
    :func:`zero_slice` and :func:`sans_limits_part`).
    """

    kind: str
    vertices: tuple[Point, ...] = ()

    def __bool__(self) -> bool:
        return self.kind != "empty"


EMPTY = ZeroSet("empty")


def _cross(o: Point, a: Point, b: Point) -> QNum:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def point_in_segment(p: Point, a: Point, b: Point, open_: bool = False) -> bool:
    """Is ``p`` on the closed (or open) segment ``[a, b]``?"""
    if a == b:
        return not open_ and p == a
    if _cross(a, b, p):
        return False
    d = (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])
    L = (b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1])
    if open_:
        return ZERO < d < L
    return ZERO <= d <= L


def _zero_points(vertices: Sequence[Point], vals: Sequence[QNum]) -> list[Point]:
    n = len(vertices)
    pts: list[Point] = []
    signs = [v.sign() for v in vals]
    for i in range(n):
        if signs[i] == 0 and vertices[i] not in pts:
            pts.append(vertices[i])
        if n > 1:
            j = (i + 1) % n
            if n == 2 and j == 0:
                break
            if signs[i] * signs[j] < 0:
                t = vals[i] / (vals[i] - vals[j])
                p, q = vertices[i], vertices[j]
                c = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
                if c not in pts:
                    pts.append(c)
    if len(pts) > 2:
        pts.sort()
        pts = [pts[0], pts[-1]]
    return pts


def zero_set_of_values(vertices: Sequence[Point], vals: Sequence[QNum]) -> ZeroSet:
    """Zero set, within the convex hull of ``vertices``, of the affine function with these vertex values."""
    if all(not v for v in vals):
        return ZeroSet("all", tuple(vertices))
    pts = _zero_points(vertices, vals)
    if not pts:
        return EMPTY
    if len(pts) == 1:
        return ZeroSet("point", (pts[0],))
    return ZeroSet("segment", tuple(pts))


def zero_slice(pi: PwlFunction, F: Face) -> ZeroSet:
    """``E_F(pi)``: the closed set of points of ``cl(F)`` where ``Delta pi_F`` vanishes."""
    return zero_set_of_values(F.vertices, face_slacks(pi, F))


def _on_boundary_edge(F: Face, a: Point, b: Point) -> bool:
    vs = F.vertices
    n = len(vs)
    for i in range(n):
        p, q = vs[i], vs[(i + 1) % n]
        if not _cross(p, q, a) and not _cross(p, q, b):
            return True
    return False


def sans_limits_part(F: Face, zs: ZeroSet) -> ZeroSet:
    """Intersect a with-limits zero set with ``relint(F)``.

    The result's closure vertices are returned; ``'all'`` stands for
    ``relint(F)``, ``'segment'`` for an open segment and ``'point'`` for a
    single point of the relative interior.
    """
    if zs.kind in ("empty", "all"):
        return zs
    if F.dim == 0:
        return zs
    if zs.kind == "point":
        p = zs.vertices[0]
        return zs if F.contains_relint(p) else EMPTY
    # segment; only possible for dim 2
    a, b = zs.vertices
    if F.dim == 1 or _on_boundary_edge(F, a, b):
        return EMPTY if F.dim == 2 else zs
    return zs


# geometric lower bound on an affine face -------------------------------------


class AffineBoundError(ValueError):
    """Hypothesis of :func:`check_affine_min_bound` violated."""

    def __init__(self, reason: str, message: str) -> None:
        super().__init__(message)
        self.reason = reason


def _sqdist_point_segment(p: Point, a: Point, b: Point) -> QNum:
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = dx * dx + dy * dy
    px, py = p[0] - a[0], p[1] - a[1]
    if not L:
        return px * px + py * py
    t = (px * dx + py * dy) / L
    if t < 0:
        t = ZERO
    elif t > 1:
        t = ONE
    ex, ey = px - t * dx, py - t * dy
    return ex * ex + ey * ey


def squared_distance_to_set(p: Point, zs: ZeroSet, polygon: Sequence[Point] | None = None) -> QNum:
    """Exact squared Euclidean distance from ``p`` to a closed zero set."""
    if zs.kind == "empty":
        raise ValueError("distance to the empty set")
    if zs.kind == "point":
        q = zs.vertices[0]
        return _sqdist_point_segment(p, q, q)
    if zs.kind == "segment":
        return _sqdist_point_segment(p, *zs.vertices)
    # 'all': zero if p lies in the polygon; otherwise distance to its boundary
    vs = zs.vertices
    n = len(vs)
    if n == 1:
        return _sqdist_point_segment(p, vs[0], vs[0])
    if n == 2:
        return _sqdist_point_segment(p, vs[0], vs[1])
    orient = _cross(vs[0], vs[1], vs[2]).sign()
    if all(_cross(vs[i], vs[(i + 1) % n], p).sign() * orient >= 0 for i in range(n)):
        return ZERO
    return min(_sqdist_point_segment(p, vs[i], vs[(i + 1) % n]) for i in range(n))


def check_affine_min_bound(polygon: Sequence[Point], g: Affine2, m, samples: Iterable[Point]) -> bool:
    """Check ``g(x) >= m * d(x, S) / 2`` at each sample, ``S`` the zero set of ``g``.

    Hypothesis: ``g`` is affine, every vertex value of ``g`` on the polygon
    is either 0 or at least ``m > 0``, and ``S`` is nonempty.  The bound is
    compared in squared form ``4 g^2 >= m^2 d^2`` with ``g >= 0``.
    """
    m = qnum(m)
    if not m > 0:
        raise AffineBoundError("m_nonpositive", "m must be positive")
    polygon = [(qnum(x), qnum(y)) for x, y in polygon]
    vals = [g(v) for v in polygon]
    for v, gv in zip(polygon, vals):
        if gv < 0:
            raise AffineBoundError("negative_vertex", f"g is negative at vertex {v}")
        if ZERO < gv < m:
            raise AffineBoundError("vertex_value_below_m", f"vertex value {gv} lies in (0, m) at {v}")
    zs = zero_set_of_values(polygon, vals)
    if not zs:
        raise AffineBoundError("empty_zero_set", "zero set S is empty")
    for p in samples:
        p = (qnum(p[0]), qnum(p[1]))
        gv = g(p)
        if gv < 0:
            return False
        d2 = squared_distance_to_set(p, zs)
        if 4 * gv * gv < m * m * d2:
            return False
    return True
