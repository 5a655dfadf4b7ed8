"""Exact subspace arithmetic over flattened matrices.

Internal helpers: spans, membership, coordinates, intersections.  All
functions here work on the exact-rational track; float rank decisions live
next to their callers.
"""

from __future__ import annotations

from fractions import Fraction

from .matrix_core import Matrix, exact_nullspace, exact_solve, rref


def mat_vecs(mats: list[Matrix]) -> list[list[Fraction]]:
    return [list(m.vec()) for m in mats]


def vec_basis(vecs: list[list[Fraction]]) -> list[list[Fraction]]:
    """Reduced (rref) basis of the span; deterministic and duplicate-free."""
    if not vecs:
        return []
    red, pivots = rref(vecs)
    return [red[i] for i in range(len(pivots))]

def vec_rank(vecs: list[list[Fraction]]) -> int:
    if not vecs:
        return 0
    return len(rref(vecs)[1])


def vec_coords(v: list[Fraction], vecs: list[list[Fraction]]) -> list[Fraction] | None:
    """Coordinates of v in the given spanning list, or None if outside the span."""
    if not vecs:
        return None if any(x != 0 for x in v) else []
    cols = [[vecs[j][i] for j in range(len(vecs))] for i in range(len(v))]
    return exact_solve(cols, list(v))


def vec_in_span(v, vecs) -> bool:
    return vec_coords(list(v), vecs) is not None


def vec_intersection(a: list[list[Fraction]], b: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of span(a) ∩ span(b)."""
    if not a or not b:
        return []
    dim = len(a[0])
    cols = [[(a[j][i] if j < len(a) else -b[j - len(a)][i]) for j in range(len(a) + len(b))]
            for i in range(dim)]
    out = []
    for k in exact_nullspace(cols):
        v = [sum(k[j] * a[j][i] for j in range(len(a))) for i in range(dim)]
        if any(x != 0 for x in v):
            out.append(v)
    return vec_basis(out)


def vec_to_matrix(v, n: int) -> Matrix:
    rows = [[v[i * n + j] for j in range(n)] for i in range(n)]
    return Matrix.exact(rows)


def span_basis(mats: list[Matrix]) -> list[Matrix]:
    """Reduced basis (as matrices) of the span of the given matrices."""
    if not mats:
        return []
    n = mats[0].n
    return [vec_to_matrix(v, n) for v in vec_basis(mat_vecs(mats))]


def independent_subset(mats: list[Matrix]) -> list[Matrix]:
    """Maximal linearly independent sublist, keeping the original elements."""
    picked: list[Matrix] = []
    rows: list[list[Fraction]] = []
    for m in mats:
        cand = rows + [list(m.vec())]
        if vec_rank(cand) > len(rows):
            picked.append(m)
            rows = vec_basis(cand)
    return picked


def coords_in_span(m: Matrix, basis: list[Matrix]) -> list[Fraction] | None:
    return vec_coords(list(m.vec()), mat_vecs(basis))


def in_span(m: Matrix, basis: list[Matrix]) -> bool:
    return coords_in_span(m, basis) is not None


def intersect(a: list[Matrix], b: list[Matrix]) -> list[Matrix]:
    if not a and not b:
        return []
    n = (a or b)[0].n
    return [vec_to_matrix(v, n) for v in vec_intersection(mat_vecs(a), mat_vecs(b))]


def span_dim(mats: list[Matrix]) -> int:
    return vec_rank(mat_vecs(mats))


def spans_equal(a: list[Matrix], b: list[Matrix]) -> bool:
    da, db = span_dim(a), span_dim(b)
    return da == db and span_dim(a + b) == da


def bracket(a: Matrix, b: Matrix) -> Matrix:
    return a @ b - b @ a
