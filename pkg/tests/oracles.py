"""Independent oracles the test suite checks production code against.

Everything here is deliberately implemented by a route different from the
package: integer Smith normal form for homology ranks, direct partition sums
for line integrals, conserved-energy shooting for homoclinic loops.  Keep
these free of relcat internals beyond plain data access.
"""

from __future__ import annotations

from fractions import Fraction


def smith_normal_form_diagonal(mat: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form of an integer matrix."""
    m = [list(map(int, row)) for row in mat]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    diag = []
    s = 0
    while s < min(rows, cols):
        piv = None
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < best):
                    best = abs(m[i][j])
                    piv = (i, j)
        if piv is None:
            break
        i0, j0 = piv
        m[s], m[i0] = m[i0], m[s]
        for row in m:
            row[s], row[j0] = row[j0], row[s]
        dirty = True
        while dirty:
            dirty = False
            for i in range(s + 1, rows):
                if m[i][s]:
                    q = m[i][s] // m[s][s]
                    m[i] = [a - q * b for a, b in zip(m[i], m[s])]
                    if m[i][s]:
                        m[s], m[i] = m[i], m[s]
                        dirty = True
            for j in range(s + 1, cols):
                if m[s][j]:
                    q = m[s][j] // m[s][s]
                    for row in m:
                        row[j] -= q * row[s]
                    if m[s][j]:
                        for row in m:
                            row[s], row[j] = row[j], row[s]
                        dirty = True
        diag.append(abs(m[s][s]))
        s += 1
    return diag


def snf_rank(mat: list[list[int]]) -> int:
    return sum(1 for x in smith_normal_form_diagonal(mat) if x != 0)


def integer_boundary(pair, degree: int, relative: bool = False) -> list[list[int]]:
    """Boundary matrix with integer entries, rebuilt without package code."""
    rows = pair.simplices(degree - 1, relative)
    cols = pair.simplices(degree, relative)
    row_index = {s: i for i, s in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, s in enumerate(cols):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            r = row_index.get(face)
            if r is not None:
                mat[r][j] = (-1) ** i
    return mat


def snf_betti(pair, degree: int, relative: bool = False) -> int:
    """Homology rank by Smith normal form over the integers."""
    n = len(pair.simplices(degree, relative))
    if n == 0:
        return 0
    r_in = snf_rank(integer_boundary(pair, degree, relative)) if degree > 0 else 0
    r_out = snf_rank(integer_boundary(pair, degree + 1, relative))
    return n - r_in - r_out


def partition_sum_integral(form, vertices) -> Fraction:
    """Line integral as the telescoping partition sum of potential steps."""
    total = Fraction(0)
    for u, v in zip(vertices, vertices[1:]):
        if u == v:
            continue
        if u < v:
            total += form.values[(u, v)]
        else:
            total -= form.values[(v, u)]
    return total


def loop_label_sum(labeling, vertices):
    total = [0] * labeling.rank
    for u, v in zip(vertices, vertices[1:]):
        lab = labeling.label(u, v)
        total = [a + b for a, b in zip(total, lab)]
    return tuple(total)
