"""Exact sparse Gaussian elimination over Q(sqrt 2)."""

from __future__ import annotations

from typing import Iterable, Mapping

from .exactnum import ONE, QNum

Row = dict[int, QNum]


class RowEchelon:
    """Incrementally maintained reduced row echelon form.

    Rows are sparse ``{column: coefficient}`` maps; every stored row has
    leading coefficient 1 and no other stored row has a nonzero entry in
    its pivot column.
    """

    def __init__(self, ncols: int) -> None:
        self.ncols = ncols
        self.rows: dict[int, Row] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def is_full(self) -> bool:
        return self.rank == self.ncols

    def reduce(self, row: Mapping[int, QNum]) -> Row:
        r = {c: v for c, v in row.items() if v}
        for c in [c for c in r if c in self.rows]:
            coef = r.get(c)
            if not coef:
                continue
            for cc, vv in self.rows[c].items():
                nv = r.get(cc, 0) - coef * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        return r

    def add(self, row: Mapping[int, QNum]) -> bool:
        """Add a row; return True if the rank grew."""
        r = self.reduce(row)
        if not r:
            return False
        piv = min(r)
        inv = ONE / r[piv]
        r = {c: v * inv for c, v in r.items()}
        for other in self.rows.values():
            coef = other.get(piv)
            if coef:
                for cc, vv in r.items():
                    nv = other.get(cc, 0) - coef * vv
                    if nv:
                        other[cc] = nv
                    else:
                        other.pop(cc, None)
        self.rows[piv] = r
        return True

    def nullspace(self) -> list[list[QNum]]:
        """Basis of ``{x : row . x = 0 for every row}``, one vector per free column."""
        zero = QNum(0)
        basis = []
        for free in range(self.ncols):
            if free in self.rows:
                continue
            vec = [zero] * self.ncols
            vec[free] = ONE
            for piv, row in self.rows.items():
                coef = row.get(free)
                if coef:
                    vec[piv] = -coef
            basis.append(vec)
        return basis


def nullspace(rows: Iterable[Mapping[int, QNum]], ncols: int) -> list[list[QNum]]:
    ech = RowEchelon(ncols)
    for r in rows:
        ech.add(r)
        if ech.is_full():
            break
    return ech.nullspace()
