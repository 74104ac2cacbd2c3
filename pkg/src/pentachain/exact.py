"""Exact rational scalars and dense labeled matrices.

Every numeric quantity in the pipeline is an arbitrary-precision rational
(``fractions.Fraction``), so all downstream equalities are exact.  Matrices
carry opaque basis labels on both axes; minors are addressed by label so
torsion bookkeeping never depends on positional conventions.

Rank, determinant and pivot selection run fraction-free (Bareiss) over
integer-scaled rows: intermediate entries are minors of the scaled input,
which keeps their size polynomially bounded.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Sequence

Rational = Fraction
Label = Hashable


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational literal {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical text form: ``p`` for integers, ``p/q`` otherwise."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class RatMatrix:
    """Immutable dense matrix of rationals with labeled rows and columns."""

    __slots__ = ("entries", "row_labels", "col_labels", "_rindex", "_cindex")

    def __init__(self, entries, row_labels=None, col_labels=None):
        rows = tuple(tuple(Fraction(e) for e in row) for row in entries)
        if row_labels is None:
            row_labels = tuple(f"r{i}" for i in range(len(rows)))
        row_labels = tuple(row_labels)
        if len(row_labels) != len(rows):
            raise ValueError("row label count does not match row count")
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        else:
            width = 0 if col_labels is None else len(tuple(col_labels))
        if col_labels is None:
            col_labels = tuple(f"c{j}" for j in range(width))
        col_labels = tuple(col_labels)
        if rows and len(col_labels) != len(rows[0]):
            raise ValueError("column label count does not match column count")
        self.entries = rows
        self.row_labels = row_labels
        self.col_labels = col_labels
        self._rindex = {lab: i for i, lab in enumerate(row_labels)}
        self._cindex = {lab: j for j, lab in enumerate(col_labels)}
        if len(self._rindex) != len(row_labels) or len(self._cindex) != len(col_labels):
            raise ValueError("duplicate basis labels")

    @property
    def nrows(self) -> int:
        return len(self.row_labels)

    @property
    def ncols(self) -> int:
        return len(self.col_labels)

    def entry(self, row_label: Label, col_label: Label) -> Fraction:
        return self.entries[self._rindex[row_label]][self._cindex[col_label]]

    def row_position(self, label: Label) -> int:
        return self._rindex[label]

    def col_position(self, label: Label) -> int:
        return self._cindex[label]

    def submatrix(self, row_labels: Sequence[Label], col_labels: Sequence[Label]) -> "RatMatrix":
        """Submatrix with rows/columns in the order given."""
        ri = [self._rindex[r] for r in row_labels]
        ci = [self._cindex[c] for c in col_labels]
        ents = [[self.entries[i][j] for j in ci] for i in ri]
        return RatMatrix(ents, tuple(row_labels), tuple(col_labels))

    def __eq__(self, other):
        return (
            isinstance(other, RatMatrix)
            and self.entries == other.entries
            and self.row_labels == other.row_labels
            and self.col_labels == other.col_labels
        )

    def __repr__(self):
        return f"RatMatrix({self.nrows}x{self.ncols})"


def _int_rows(entries: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], Fraction]:
    """Scale each row to integers; return rows and the product of multipliers."""
    out = []
    scale = 1
    for row in entries:
        mult = lcm(*(e.denominator for e in row)) if row else 1
        scale *= mult
        out.append([int(e * mult) for e in row])
    return out, Fraction(scale)


def _echelon(rows: list[list[int]], ncols: int) -> tuple[list[int], list[int], int, int]:
    """Fraction-free row echelon, destructive on ``rows``.

    Pivot rule: scan columns left to right, within a column take the first
    remaining row with a nonzero entry.  Returns original positions of pivot
    rows, pivot column positions, the row-swap sign and the last pivot
    (which for a full elimination of a square matrix equals its determinant
    up to the swap sign).
    """
    m = len(rows)
    where = list(range(m))
    piv_rows: list[int] = []
    piv_cols: list[int] = []
    sign = 1
    prev = 1
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, m) if rows[i][c]), None)
        if pr is None:
            continue
        if pr != r:
            rows[r], rows[pr] = rows[pr], rows[r]
            where[r], where[pr] = where[pr], where[r]
            sign = -sign
        piv = rows[r][c]
        for i in range(r + 1, m):
            row_i = rows[i]
            ric = row_i[c]
            if ric:
                row_r = rows[r]
                for j in range(c + 1, ncols):
                    row_i[j] = (piv * row_i[j] - ric * row_r[j]) // prev
                row_i[c] = 0
            elif prev != piv:
                # Bareiss update applies to every remaining row, not only
                # those with a nonzero entry in the pivot column.
                row_r = rows[r]
                for j in range(c + 1, ncols):
                    row_i[j] = (piv * row_i[j]) // prev
        piv_rows.append(where[r])
        piv_cols.append(c)
        prev = piv
        r += 1
        if r == m:
            break
    return piv_rows, piv_cols, sign, prev


def rank(m: RatMatrix) -> int:
    rows, _ = _int_rows(m.entries)
    piv_rows, _, _, _ = _echelon(rows, m.ncols)
    return len(piv_rows)


def row_reduce(m: RatMatrix) -> tuple[int, frozenset, frozenset]:
    """Exact rank plus one valid pivot row/column label set.

    Deterministic for a given matrix: pivots are found scanning columns in
    order and rows top to bottom within each column.
    """
    rows, _ = _int_rows(m.entries)
    piv_rows, piv_cols, _, _ = _echelon(rows, m.ncols)
    return (
        len(piv_rows),
        frozenset(m.row_labels[i] for i in piv_rows),
        frozenset(m.col_labels[j] for j in piv_cols),
    )


def det(m: RatMatrix) -> Fraction:
    """Exact determinant; the empty matrix has determinant 1."""
    if m.nrows != m.ncols:
        raise ValueError(f"determinant of non-square {m.nrows}x{m.ncols} matrix")
    if m.nrows == 0:
        return Fraction(1)
    rows, scale = _int_rows(m.entries)
    piv_rows, _, sign, last = _echelon(rows, m.ncols)
    if len(piv_rows) < m.nrows:
        return Fraction(0)
    return Fraction(sign * last) / scale


def minor(m: RatMatrix, row_labels: Iterable[Label], col_labels: Iterable[Label]) -> Fraction:
    """Determinant of the square submatrix selected by label sets.

    Selections are normalized to the matrix's own label order, so the result
    is well defined for unordered label sets; an empty selection yields 1.
    """
    rset = set(row_labels)
    cset = set(col_labels)
    for lab in rset:
        if lab not in m._rindex:
            raise KeyError(f"unknown row label {lab!r}")
    for lab in cset:
        if lab not in m._cindex:
            raise KeyError(f"unknown column label {lab!r}")
    if len(rset) != len(cset):
        raise ValueError(f"minor needs equal selection sizes, got {len(rset)} rows, {len(cset)} cols")
    rows = [lab for lab in m.row_labels if lab in rset]
    cols = [lab for lab in m.col_labels if lab in cset]
    return det(m.submatrix(rows, cols))


def independent_rows(m: RatMatrix, row_order: Sequence[Label] | None = None) -> list[Label]:
    """Greedy maximal independent set of rows, scanned in the given order.

    The selected rows form a full-rank submatrix on the pivot columns; when
    ``len(result) == m.ncols`` they form an invertible square block.
    """
    order = list(row_order) if row_order is not None else list(m.row_labels)
    positions = [m._rindex[lab] for lab in order]
    rows, _ = _int_rows([m.entries[i] for i in positions])
    piv_rows, _, _, _ = _echelon(rows, m.ncols)
    return [order[i] for i in piv_rows]
