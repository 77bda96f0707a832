"""SVG drawings of the two-dimensional complex and a JSON face dump.

Exact coordinates live in the JSON twin; floats appear only when SVG
coordinates are formatted (fixed six decimals, so output is byte-stable).
"""

from __future__ import annotations

import json
from typing import Sequence

from .complex2d import Face, build_delta_complex, face_slacks, n_f, zero_set_of_values
from .exactnum import QNum, parse
from .pwl import PwlFunction

__all__ = ["face_dump", "dumps_face_dump", "loads_face_dump", "render_svg", "STYLES"]

STYLES = ("additive_domain", "nf_colors")

NF_FILL = {0: "#ffffff", 1: "#ffff66", 2: "#ff4d4d", 3: "#800000"}
GREEN = "#33a02c"

_SIZE = 500
_MARGIN = 100


def _pt(p) -> list[str]:
    return [str(p[0]), str(p[1])]


def face_dump(pi: PwlFunction, special: Sequence[tuple[QNum, QNum]] = ()) -> dict:
    faces = []
    for F in build_delta_complex(pi):
        zs = zero_set_of_values(F.vertices, face_slacks(pi, F))
        faces.append(
            {
                "cells": [[c.index, c.shift, c.is_point] for c in F.cells],
                "dim": F.dim,
                "vertices": [_pt(v) for v in F.vertices],
                "zero_set": {"kind": zs.kind, "vertices": [_pt(v) for v in zs.vertices]},
                "n_F": n_f(F, special) if special else 0,
            }
        )
    return {
        "f": str(pi.f),
        "breakpoints": [str(x) for x in pi.breakpoints],
        "special": [[str(a), str(b)] for a, b in special],
        "faces": faces,
    }


def dumps_face_dump(dump: dict) -> str:
    return json.dumps(dump, indent=1, sort_keys=True) + "\n"


def loads_face_dump(text: str) -> dict:
    """Parse a face dump, turning every coordinate back into a :class:`QNum`."""
    raw = json.loads(text)

    def pts(vs):
        return [tuple(parse(c) for c in v) for v in vs]

    return {
        "f": parse(raw["f"]),
        "breakpoints": [parse(x) for x in raw["breakpoints"]],
        "special": [tuple(parse(c) for c in iv) for iv in raw["special"]],
        "faces": [
            {
                "cells": [tuple(c) for c in fc["cells"]],
                "dim": fc["dim"],
                "vertices": pts(fc["vertices"]),
                "zero_set": {"kind": fc["zero_set"]["kind"], "vertices": pts(fc["zero_set"]["vertices"])},
                "n_F": fc["n_F"],
            }
            for fc in raw["faces"]
        ],
    }


# rendering ----------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _sx(x) -> str:
    return _fmt(_MARGIN + _SIZE * float(x))


def _sy(y) -> str:
    return _fmt(_MARGIN + _SIZE * (1 - float(y)))


def _points_attr(vs) -> str:
    return " ".join(f"{_sx(x)},{_sy(y)}" for x, y in vs)


def _graph(pi: PwlFunction) -> list[str]:
    """The function along the top margin and, transposed, along the left margin."""
    out = []
    band = _MARGIN - 20
    ends = pi.complex.ends

    def top(x, v):
        return _sx(x), _fmt(_MARGIN - 10 - band * float(v))

    def left(y, v):
        return _fmt(_MARGIN - 10 - band * float(v)), _sy(y)

    for i, x in enumerate(pi.breakpoints):
        a, b = x, ends[i + 1]
        r, l = pi.right[i], pi.left[(i + 1) % len(pi)]
        for proj in (top, left):
            (x1, y1), (x2, y2) = proj(a, r), proj(b, l)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="black" stroke-width="1.5"/>')
            cx, cy = proj(x, pi.value[i])
            out.append(f'<circle cx="{cx}" cy="{cy}" r="2" fill="black"/>')
    return out


def _grid(pi: PwlFunction) -> list[str]:
    out = []
    lo, hi = _fmt(_MARGIN), _fmt(_MARGIN + _SIZE)
    for x in pi.breakpoints:
        out.append(f'<line x1="{_sx(x)}" y1="{lo}" x2="{_sx(x)}" y2="{hi}" stroke="#999999" stroke-width="0.4"/>')
        out.append(f'<line x1="{lo}" y1="{_sy(x)}" x2="{hi}" y2="{_sy(x)}" stroke="#999999" stroke-width="0.4"/>')
    for k in (0, 1):
        for x in pi.breakpoints:
            s = x + k
            if not 0 < s < 2:
                continue
            # segment of x + y = s inside the unit square
            x0, x1 = max(0, float(s) - 1), min(1, float(s))
            out.append(
                f'<line x1="{_sx(x0)}" y1="{_sy(float(s) - x0)}" x2="{_sx(x1)}" y2="{_sy(float(s) - x1)}" '
                'stroke="#999999" stroke-width="0.4"/>'
            )
    return out


def render_svg(dump: dict, pi: PwlFunction, style: str = "additive_domain") -> str:
    """Render a parsed face dump (see :func:`loads_face_dump`)."""
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}")
    body: list[str] = []
    total = _MARGIN + _SIZE + 20
    body.append(f'<rect x="{_fmt(_MARGIN)}" y="{_fmt(_MARGIN)}" width="{_SIZE}" height="{_SIZE}" fill="white" stroke="black"/>')
    faces = dump["faces"]
    if style == "nf_colors":
        for fc in faces:
            if fc["dim"] == 2:
                fill = NF_FILL[min(fc["n_F"], 3)]
                body.append(f'<polygon points="{_points_attr(fc["vertices"])}" fill="{fill}" stroke="none"/>')
    else:
        for fc in faces:
            zs = fc["zero_set"]
            if zs["kind"] == "all" and fc["dim"] == 2:
                body.append(f'<polygon points="{_points_attr(fc["vertices"])}" fill="{GREEN}" fill-opacity="0.6" stroke="none"/>')
    body.extend(_grid(pi))
    if style == "additive_domain":
        for fc in faces:
            zs = fc["zero_set"]
            kind = zs["kind"]
            if kind == "all" and fc["dim"] == 2:
                continue
            vs = fc["vertices"] if kind == "all" else zs["vertices"]
            if len(vs) == 2:
                (x1, y1), (x2, y2) = vs
                body.append(
                    f'<line x1="{_sx(x1)}" y1="{_sy(y1)}" x2="{_sx(x2)}" y2="{_sy(y2)}" stroke="{GREEN}" stroke-width="2"/>'
                )
            elif len(vs) == 1:
                (x, y), = vs
                body.append(f'<circle cx="{_sx(x)}" cy="{_sy(y)}" r="2.5" fill="{GREEN}"/>')
    body.extend(_graph(pi))
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total}" height="{total}" '
        f'viewBox="0 0 {total} {total}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"
