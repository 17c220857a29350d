"""Exact dense linear algebra over exact coefficient domains.

Matrices are plain lists of row lists.  Entries may be ``fractions.Fraction``,
sympy fraction-field elements, or sympy polynomial-ring elements; the only
requirements are exact ``+ - * /`` (or exact ``quo`` for ring elements) and
that zero entries are falsy.  Everything here is deterministic: pivots are
always the first nonzero candidate in row-major order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list]
Vector = list


def _exact_div(a, b):
    """Exact quotient a/b, dispatching on the element type.

    Ring elements expose ``quo`` (exact by construction inside Bareiss),
    ints use floor division (also exact there), fields divide directly.
    """
    if hasattr(a, "quo"):
        return a.quo(b)
    if isinstance(a, int) and isinstance(b, int):
        return a // b
    return a / b


def mat_copy(mat: Matrix) -> Matrix:
    return [list(row) for row in mat]


def row_reduce(mat: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form with unit pivots.

    Returns (rref, pivot_columns); zero rows are dropped.
    """
    rows = [list(r) for r in mat if any(r)]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(mat: Matrix) -> int:
    return len(row_reduce(mat)[0])


def nullspace(mat: Matrix, ncols: int, one) -> list[Vector]:
    """Basis of {x : mat @ x = 0} for an exact field.

    ``one`` is the field's multiplicative unit (used to seed free variables);
    zero is derived as ``one - one``.
    """
    zero = one - one
    rref, pivots = row_reduce(mat)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, p in enumerate(pivots):
            vec[p] = -rref[r][f]
        basis.append(vec)
    return basis


def reduce_vector(rref: Matrix, pivots: list[int], vec: Vector) -> Vector:
    """Remainder of vec after elimination against an rref basis."""
    out = list(vec)
    for r, p in enumerate(pivots):
        if out[p]:
            f = out[p]
            out = [a - f * b for a, b in zip(out, rref[r])]
    return out


class SpanBuilder:
    """Incrementally maintained rref basis of a growing row span."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: Matrix = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def residual(self, vec: Vector) -> Vector:
        return reduce_vector(self.rows, self.pivots, vec)

    def contains(self, vec: Vector) -> bool:
        return not any(self.residual(vec))

    def add(self, vec: Vector) -> bool:
        """Add vec to the span; returns True if the dimension grew."""
        res = self.residual(vec)
        piv = next((c for c in range(self.ncols) if res[c]), None)
        if piv is None:
            return False
        inv = res[piv]
        res = [x / inv for x in res]
        for r in range(len(self.rows)):
            if self.rows[r][piv]:
                f = self.rows[r][piv]
                self.rows[r] = [a - f * b for a, b in zip(self.rows[r], res)]
        at = next((i for i, p in enumerate(self.pivots) if p > piv), len(self.pivots))
        self.rows.insert(at, res)
        self.pivots.insert(at, piv)
        return True

    def extend(self, vectors: Sequence[Vector]) -> None:
        for v in vectors:
            self.add(v)


def span_dim(vectors: Sequence[Vector], ncols: int) -> int:
    sb = SpanBuilder(ncols)
    sb.extend(vectors)
    return sb.dim


def in_span(vectors: Sequence[Vector], target: Vector, ncols: int) -> bool:
    sb = SpanBuilder(ncols)
    sb.extend(vectors)
    return sb.contains(target)


def intersection_basis(
    u_rows: Sequence[Vector], v_rows: Sequence[Vector], ncols: int, one
) -> list[Vector]:
    """Basis of rowspan(U) ∩ rowspan(V).

    Solves a·U = b·V via the nullspace of the stacked coefficient matrix
    in the unknowns (a, b).
    """
    if not u_rows or not v_rows:
        return []
    ku, kv = len(u_rows), len(v_rows)
    zero = one - one
    system = [
        [u_rows[j][i] for j in range(ku)] + [-v_rows[j][i] for j in range(kv)]
        for i in range(ncols)
    ]
    sols = nullspace(system, ku + kv, one)
    out = SpanBuilder(ncols)
    for sol in sols:
        vec = [zero] * ncols
        for j in range(ku):
            if sol[j]:
                vec = [x + sol[j] * u for x, u in zip(vec, u_rows[j])]
        out.add(vec)
    return out.rows


def bareiss_rank(mat: Matrix, div=None) -> int:
    """Rank by fraction-free Bareiss elimination.

    Works over any integral domain with exact division of the Sylvester
    minors by the previous pivot; no fractions are formed for ring inputs.
    """
    if div is None:
        div = _exact_div
    m = mat_copy(mat)
    if not m or not m[0]:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = None
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pivot = m[r][c]
        for i in range(r + 1, nrows):
            row_i = m[i]
            row_r = m[r]
            lead = row_i[c]
            for j in range(c + 1, ncols):
                num = pivot * row_i[j] - lead * row_r[j]
                row_i[j] = num if prev is None else div(num, prev)
            row_i[c] = pivot - pivot
        prev = pivot
        r += 1
    return r


def solve(mat: Matrix, rhs: Vector, ncols: int, one) -> Vector | None:
    """One exact solution x of mat @ x = rhs, or None if inconsistent."""
    zero = one - one
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    rref, pivots = row_reduce(aug)
    sol = [zero] * ncols
    for r, p in enumerate(pivots):
        if p == ncols:
            return None
        sol[p] = rref[r][ncols]
    return sol


def fraction_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]
