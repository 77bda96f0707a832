"""Z-periodic, possibly discontinuous, piecewise linear functions.

A :class:`PwlFunction` stores, for every breakpoint ``x_i`` in ``[0, 1)``,
the triple ``(left limit, value, right limit)``.  On each open interval
between consecutive breakpoints the function is affine, with the two
endpoint limits given by the right limit at ``x_i`` and the left limit at
``x_{i+1}`` (``x_n`` is 1, identified with 0).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .exactnum import ONE, ZERO, QNum, QNumParseError, floor_frac, frac, parse, qnum

__all__ = [
    "BreakpointComplex",
    "PwlFunction",
    "FiniteSupportVector",
    "FunctionFileError",
    "common_refinement",
    "linear_combine",
    "sup_abs_bound",
    "lipschitz_piece_bound",
    "zero_function",
    "from_breakpoints_and_values",
    "read_function",
    "write_function",
    "loads_function",
    "dumps_function",
]

MINUS, EXACT, PLUS = -1, 0, 1
_SIDES = {"minus": MINUS, "exact": EXACT, "plus": PLUS, -1: MINUS, 0: EXACT, 1: PLUS}


class FunctionFileError(ValueError):
    """Malformed function file."""


@dataclass(frozen=True)
class BreakpointComplex:
    """Breakpoints of a one-dimensional periodic complex, as representatives in [0, 1)."""

    breakpoints: tuple[QNum, ...]

    def __post_init__(self) -> None:
        bps = tuple(qnum(x) for x in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps or bps[0] != 0:
            raise ValueError("0 must be a breakpoint")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError(f"breakpoints not strictly increasing at {a}, {b}")
        if not bps[-1] < 1:
            raise ValueError("breakpoints must lie in [0, 1)")

    def __len__(self) -> int:
        return len(self.breakpoints)

    def __iter__(self) -> Iterator[QNum]:
        return iter(self.breakpoints)

    @property
    def ends(self) -> tuple[QNum, ...]:
        """Breakpoints followed by 1."""
        return self.breakpoints + (ONE,)

    def locate(self, x: QNum) -> tuple[int, bool]:
        """Return ``(i, on_breakpoint)`` for ``x`` in [0, 1)."""
        i = bisect_right(self.breakpoints, x) - 1
        return i, self.breakpoints[i] == x

    def intervals(self) -> list[tuple[QNum, QNum]]:
        e = self.ends
        return [(e[i], e[i + 1]) for i in range(len(self.breakpoints))]


def common_refinement(p1: BreakpointComplex, p2: BreakpointComplex) -> BreakpointComplex:
    """Union of the breakpoint sets."""
    return BreakpointComplex(tuple(sorted(set(p1.breakpoints) | set(p2.breakpoints))))


class PwlFunction:
    """Periodic piecewise linear function with explicit one-sided limits.

    Parameters
    ----------
    breakpoints : sequence of QNum in [0, 1), starting at 0
    left, value, right : sequences of the same length
        left limit, value and right limit at each breakpoint
    f : the point where the function is normalized to 1 (0 < f < 1)
    """

    __slots__ = ("complex", "left", "value", "right", "f", "slopes", "_x")

    def __init__(self, breakpoints, left, value, right, f) -> None:
        self.complex = (
            breakpoints if isinstance(breakpoints, BreakpointComplex) else BreakpointComplex(tuple(breakpoints))
        )
        n = len(self.complex)
        self.left = tuple(qnum(v) for v in left)
        self.value = tuple(qnum(v) for v in value)
        self.right = tuple(qnum(v) for v in right)
        if not (len(self.left) == len(self.value) == len(self.right) == n):
            raise ValueError("need one (left, value, right) triple per breakpoint")
        self.f = qnum(f)
        if not (0 < self.f < 1):
            raise ValueError("f must lie in (0, 1)")
        ends = self.complex.ends
        self._x = ends
        self.slopes = tuple(
            (self.left[(i + 1) % n] - self.right[i]) / (ends[i + 1] - ends[i]) for i in range(n)
        )

    # basic access --------------------------------------------------------

    @property
    def breakpoints(self) -> tuple[QNum, ...]:
        return self.complex.breakpoints

    def __len__(self) -> int:
        return len(self.complex)

    def triples(self) -> list[tuple[QNum, QNum, QNum, QNum]]:
        return list(zip(self.breakpoints, self.left, self.value, self.right))

    def is_continuous(self) -> bool:
        return all(l == v == r for l, v, r in zip(self.left, self.value, self.right))

    def interval_affine(self, i: int, x: QNum) -> QNum:
        """Affine extension of the piece on ``(x_i, x_{i+1})`` evaluated at ``x``."""
        return self.right[i] + self.slopes[i] * (x - self._x[i])

    # evaluation ----------------------------------------------------------

    def __call__(self, x) -> QNum:
        return self.eval(x)

    def eval(self, x) -> QNum:
        r = frac(qnum(x))
        i, on_bkpt = self.complex.locate(r)
        if on_bkpt:
            return self.value[i]
        return self.interval_affine(i, r)

    def limit(self, x, side="exact") -> QNum:
        """One-sided limit; ``side`` is 'minus', 'exact' or 'plus' (or -1/0/1)."""
        side = _SIDES[side]
        r = frac(qnum(x))
        i, on_bkpt = self.complex.locate(r)
        if not on_bkpt:
            return self.interval_affine(i, r)
        if side == EXACT:
            return self.value[i]
        if side == PLUS:
            return self.right[i]
        return self.left[i]

    def refine(self, new_complex: BreakpointComplex) -> PwlFunction:
        """Same function expressed over a finer complex."""
        if not set(self.breakpoints) <= set(new_complex.breakpoints):
            raise ValueError("not a refinement")
        left, value, right = [], [], []
        for x in new_complex:
            left.append(self.limit(x, MINUS))
            value.append(self.limit(x, EXACT))
            right.append(self.limit(x, PLUS))
        return PwlFunction(new_complex, left, value, right, self.f)

    # comparison ----------------------------------------------------------

    def same_as(self, other: PwlFunction) -> bool:
        """Equality as functions (ignores spurious breakpoints)."""
        cx = common_refinement(self.complex, other.complex)
        a, b = self.refine(cx), other.refine(cx)
        return a.left == b.left and a.value == b.value and a.right == b.right

    def __eq__(self, other) -> bool:
        if not isinstance(other, PwlFunction):
            return NotImplemented
        return (
            self.f == other.f
            and self.breakpoints == other.breakpoints
            and self.left == other.left
            and self.value == other.value
            and self.right == other.right
        )

    def __hash__(self) -> int:
        return hash((self.f, self.breakpoints, self.left, self.value, self.right))

    def is_zero(self) -> bool:
        return not any(self.left) and not any(self.value) and not any(self.right)

    # arithmetic ----------------------------------------------------------

    def __add__(self, other: PwlFunction) -> PwlFunction:
        return linear_combine([(ONE, self), (ONE, other)], f=self.f)

    def __sub__(self, other: PwlFunction) -> PwlFunction:
        return linear_combine([(ONE, self), (-ONE, other)], f=self.f)

    def __mul__(self, c) -> PwlFunction:
        return linear_combine([(qnum(c), self)], f=self.f)

    __rmul__ = __mul__

    def __neg__(self) -> PwlFunction:
        return self * -1

    def __repr__(self) -> str:
        return f"<PwlFunction f={self.f} with {len(self)} breakpoints>"


def linear_combine(terms: Sequence[tuple[object, PwlFunction]], f=None) -> PwlFunction:
    """Pointwise linear combination ``sum c_k * pi_k`` over the common refinement."""
    if not terms:
        raise ValueError("empty combination")
    if f is None:
        fs = {pi.f for _, pi in terms}
        if len(fs) != 1:
            raise ValueError("terms have different f; pass f explicitly")
        f = fs.pop()
    cx = terms[0][1].complex
    for _, pi in terms[1:]:
        cx = common_refinement(cx, pi.complex)
    refined = [(qnum(c), pi.refine(cx)) for c, pi in terms]
    n = len(cx)

    def combo(attr: str) -> list[QNum]:
        out = []
        for i in range(n):
            acc = ZERO
            for c, pi in refined:
                acc = acc + c * getattr(pi, attr)[i]
            out.append(acc)
        return out

    return PwlFunction(cx, combo("left"), combo("value"), combo("right"), f)


def zero_function(f) -> PwlFunction:
    """The zero function over the trivial complex {0}."""
    return PwlFunction([ZERO], [ZERO], [ZERO], [ZERO], f)


def from_breakpoints_and_values(breakpoints, values, f) -> PwlFunction:
    """Continuous function interpolating ``values`` at ``breakpoints``.

    ``breakpoints`` must start at 0 and end at 1; the value at 1 must equal
    the value at 0.
    """
    bps = [qnum(x) for x in breakpoints]
    vals = [qnum(v) for v in values]
    if bps[-1] != 1 or vals[-1] != vals[0]:
        raise ValueError("expect breakpoints ending at 1 with periodic values")
    return PwlFunction(bps[:-1], vals[:-1], vals[:-1], vals[:-1], f)


def sup_abs_bound(pi: PwlFunction) -> QNum:
    """``sup |pi|``; attained among breakpoint values and one-sided limits."""
    return max(abs(v) for v in pi.left + pi.value + pi.right)


def lipschitz_piece_bound(pi: PwlFunction, strict: bool = False) -> QNum:
    """Max absolute slope over the open intervals.

    With ``strict=True`` return ``max|slope| + 1``, a constant strictly
    greater than the piecewise Lipschitz constant.
    """
    c = max(abs(s) for s in pi.slopes)
    return c + 1 if strict else c


class FiniteSupportVector:
    """Finitely supported ``y: R -> Z_+``, keyed by group element mod 1."""

    def __init__(self, entries: Mapping[object, int] | Iterable[tuple[object, int]] = ()) -> None:
        items = entries.items() if isinstance(entries, Mapping) else entries
        acc: dict[QNum, int] = {}
        for r, k in items:
            if int(k) != k or k < 0:
                raise ValueError("entries must be nonnegative integers")
            r = frac(qnum(r))
            acc[r] = acc.get(r, 0) + int(k)
        self.entries = {r: k for r, k in acc.items() if k}

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)

    def total(self) -> QNum:
        s = ZERO
        for r, k in self.entries.items():
            s = s + r * k
        return s

    def __repr__(self) -> str:
        body = ", ".join(f"{r}: {k}" for r, k in sorted(self.entries.items()))
        return f"FiniteSupportVector({{{body}}})"


# file format ---------------------------------------------------------------
#
#   # comment
#   f <number>
#   <x> <left> <value> <right>      one line per breakpoint, increasing x
#
# Numbers use the exactnum grammar and may not contain spaces.


def dumps_function(pi: PwlFunction, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"f {pi.f}")
    lines.append("# x left value right")
    for x, l, v, r in pi.triples():
        lines.append(f"{x} {l} {v} {r}")
    return "\n".join(lines) + "\n"


def loads_function(text: str, source: str = "<string>") -> PwlFunction:
    f = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "f":
                if len(fields) != 2 or f is not None:
                    raise FunctionFileError(f"{source}:{lineno}: bad f line")
                f = parse(fields[1])
                continue
            if len(fields) != 4:
                raise FunctionFileError(f"{source}:{lineno}: expected 'x left value right'")
            rows.append(tuple(parse(t) for t in fields))
        except QNumParseError as exc:
            raise FunctionFileError(f"{source}:{lineno}: {exc}") from exc
    if f is None:
        raise FunctionFileError(f"{source}: missing 'f' line")
    if not rows:
        raise FunctionFileError(f"{source}: no breakpoints")
    xs, ls, vs, rs = zip(*rows)
    try:
        return PwlFunction(xs, ls, vs, rs, f)
    except ValueError as exc:
        raise FunctionFileError(f"{source}: {exc}") from exc


def read_function(path) -> PwlFunction:
    path = Path(path)
    return loads_function(path.read_text(), source=str(path))


def write_function(pi: PwlFunction, path, comment: str | None = None) -> None:
    Path(path).write_text(dumps_function(pi, comment))
