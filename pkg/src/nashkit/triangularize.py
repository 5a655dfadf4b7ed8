"""Constructive flag theorems for nilpotent and split solvable actions.

A family of nilpotent operators kills a complete flag (built from iterated
joint kernels); a solvable algebra whose elements all have real spectrum is
conjugated into upper-triangular form by iterated common-eigenvector
extraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._span import vec_basis, vec_coords, vec_rank
from .errors import (
    NotNilpotentAlgebra,
    NotSolvable,
    NotSplit,
    PostconditionFailed,
)
from .liealg import DERIVED, LieAlgebraData, series
from .matrix_core import (
    APPROX,
    EXACT,
    Matrix,
    char_poly,
    exact_nullspace,
    irreducible_factors,
    spectrum,
)


@dataclass(frozen=True)
class Flag:
    """Nested subspaces V_1 c ... c V_n, each stage a tuple of spanning vectors."""

    stages: tuple[tuple[tuple, ...], ...]
    complete: bool


class _Irrational(Exception):
    """Internal: exact eigenvector step hit a real but irrational eigenvalue."""


def _flag_from_columns(cols: list[list]) -> Flag:
    stages = tuple(tuple(tuple(c) for c in cols[:i + 1]) for i in range(len(cols)))
    return Flag(stages, complete=True)


def _complete_columns(cols: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Extend the given independent columns with coordinate vectors."""
    out = [list(c) for c in cols]
    for j in range(n):
        unit = [Fraction(int(i == j)) for i in range(n)]
        if vec_rank(out + [unit]) > len(out):
            out.append(unit)
        if len(out) == n:
            break
    return out


def _basis_matrix(cols: list[list[Fraction]]) -> Matrix:
    n = len(cols[0])
    return Matrix.exact([[cols[j][i] for j in range(n)] for i in range(n)])


def engel_flag(g: LieAlgebraData) -> Flag:
    """Complete flag with b.V_i inside V_{i-1} for every basis element.

    Built by repeatedly extracting the joint kernel of the induced action on
    the quotient by the flag so far; the kernel is nonzero as long as the
    action is genuinely nilpotent.
    """
    n = g.ambient
    for b in g.basis:
        if not _nilpotent_matrix(b):
            raise NotNilpotentAlgebra("a basis element is not nilpotent")
    if not g.is_exact:
        return _engel_flag_float(g)
    cols: list[list[Fraction]] = []
    while len(cols) < n:
        k = len(cols)
        full = _complete_columns(cols, n)
        bmat = _basis_matrix(full)
        binv = bmat.inv()
        stacked: list[list[Fraction]] = []
        for b in g.basis:
            m = (binv @ b @ bmat).rows()
            for i in range(k, n):
                if any(m[i][j] != 0 for j in range(k)):
                    raise PostconditionFailed("flag stages are not invariant")
            stacked.extend([row[k:] for row in m[k:]])
        if stacked:
            kernel = exact_nullspace(stacked)
        else:
            kernel = [[Fraction(int(i == j)) for i in range(n - k)] for j in range(n - k)]
        if not kernel:
            raise NotNilpotentAlgebra("joint kernel vanished before the flag completed")
        w = kernel[0]  # lexicographically smallest free column
        lift = [Fraction(0)] * k + list(w)
        v = [sum(full[j][i] * lift[j] for j in range(n)) for i in range(n)]
        cols.append(v)
    return _flag_from_columns(cols)


def _nilpotent_matrix(b: Matrix) -> bool:
    p = b ** b.n
    if b.mode == EXACT:
        return p.is_zero()
    return p.norm() <= b.tol * (1.0 + b.norm()) ** b.n


def _engel_flag_float(g: LieAlgebraData) -> Flag:
    n = g.ambient
    tol = max(b.abs_tol() for b in g.basis) if g.basis else 1e-12
    cols: list[np.ndarray] = []
    while len(cols) < n:
        k = len(cols)
        q = _orthocomplement(cols, n)
        stacked = np.vstack([q.T @ b.float_array() @ q for b in g.basis]) if g.basis \
            else np.zeros((0, n - k))
        kernel = _float_kernel(stacked, tol, n - k)
        if kernel.shape[0] == 0:
            raise NotNilpotentAlgebra("joint kernel vanished before the flag completed")
        cols.append(q @ kernel[0])
    return _flag_from_columns([list(map(float, c)) for c in cols])


def _orthocomplement(cols: list[np.ndarray], n: int) -> np.ndarray:
    if not cols:
        return np.eye(n)
    a = np.array(cols).T
    qfull, _ = np.linalg.qr(a, mode="complete")
    return qfull[:, len(cols):]


def _float_kernel(a: np.ndarray, tol: float, width: int) -> np.ndarray:
    if a.shape[0] == 0:
        return np.eye(width)
    _, s, vt = np.linalg.svd(a)
    rank = int(np.sum(s > tol))
    return vt[rank:]


# -- common eigenvectors (Lie's theorem, split case) ----------------------------


def common_eigenvector(g: LieAlgebraData) -> tuple[list, list]:
    """A joint eigenvector v and its character (one eigenvalue per basis element)."""
    if g.is_exact:
        try:
            w = _joint_eigenspace_exact([list(b.vec()) for b in g.basis], g.ambient)
            v = w[0]
            return list(v), _character_exact(g, v)
        except _Irrational:
            pass
    return _common_eigenvector_float(g)


def _character_exact(g: LieAlgebraData, v: list[Fraction]) -> list[Fraction]:
    n = g.ambient
    pivot = next(i for i, x in enumerate(v) if x != 0)
    chars = []
    for b in g.basis:
        image = [sum(b.entry(i, j) * v[j] for j in range(n)) for i in range(n)]
        lam = image[pivot] / v[pivot]
        if any(image[i] != lam * v[i] for i in range(n)):
            raise PostconditionFailed("common eigenvector candidate is not joint")
        chars.append(lam)
    return chars


def _joint_eigenspace_exact(flat_ops: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Basis of a nonzero subspace on which every operator acts as a scalar.

    Classic induction: shrink to a codimension-one ideal containing the
    derived span, recurse, then split one remaining operator over the
    recursive eigenspace by a rational eigenvalue.
    """
    ops = vec_basis([v for v in flat_ops if any(x != 0 for x in v)])
    if not ops:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]

    def to_mat(v):
        return Matrix.exact([[v[i * n + j] for j in range(n)] for i in range(n)])

    mats = [to_mat(v) for v in ops]
    derived = vec_basis([list((a @ b - b @ a).vec()) for a in mats for b in mats])
    if len(derived) >= len(ops):
        raise NotSolvable("derived span did not shrink")
    # any codimension-one subspace containing the derived span is an ideal
    ideal_rows = list(derived)
    z = None
    for v in ops:
        if vec_rank(ideal_rows + [v]) > len(ideal_rows):
            if len(ideal_rows) < len(ops) - 1:
                ideal_rows = vec_basis(ideal_rows + [v])
            else:
                z = v
                break
    zmat = to_mat(z)
    w = _joint_eigenspace_exact(ideal_rows, n)
    # restrict z to the recursive eigenspace (invariant in characteristic zero)
    r = _restriction_exact(zmat, w)
    lam = _rational_eigenvalue(r)
    kernel = exact_nullspace([[r.entry(i, j) - (lam if i == j else 0)
                               for j in range(r.n)] for i in range(r.n)])
    if not kernel:
        raise PostconditionFailed("restricted operator lost its eigenvalue")
    out = []
    for kv in kernel:
        out.append([sum(kv[a] * w[a][i] for a in range(len(w))) for i in range(n)])
    return vec_basis(out)


def _restriction_exact(z: Matrix, w: list[list[Fraction]]) -> Matrix:
    n = z.n
    cols = []
    for v in w:
        image = [sum(z.entry(i, j) * v[j] for j in range(n)) for i in range(n)]
        coords = vec_coords(image, w)
        if coords is None:
            raise PostconditionFailed("eigenspace is not stable under the action")
        cols.append(coords)
    d = len(w)
    return Matrix.exact([[cols[j][i] for j in range(d)] for i in range(d)])


def _rational_eigenvalue(r: Matrix) -> Fraction:
    """Smallest rational eigenvalue; NotSplit if none is real, promote if irrational."""
    factors = irreducible_factors(char_poly(r))
    linear = sorted(-q.coeffs[0] for q, _ in factors if q.degree == 1)
    if linear:
        return linear[0]
    from .matrix_core import count_real_roots

    if any(count_real_roots(q) > 0 for q, _ in factors):
        raise _Irrational
    raise NotSplit("the action has no real eigenvalue at this step")


def _common_eigenvector_float(g: LieAlgebraData):
    n = g.ambient
    tol = max(b.abs_tol() for b in g.basis) if g.basis else 1e-12
    w = _joint_eigenspace_float([b.float_array() for b in g.basis], n, tol)
    v = w[0]
    chars = []
    for b in g.basis:
        image = b.float_array() @ v
        pivot = int(np.argmax(np.abs(v)))
        lam = image[pivot] / v[pivot]
        if np.linalg.norm(image - lam * v) > 10 * tol * (1 + abs(lam)):
            raise PostconditionFailed("common eigenvector candidate is not joint")
        chars.append(float(lam))
    return [float(x) for x in v], chars


def _joint_eigenspace_float(ops: list[np.ndarray], n: int, tol: float) -> list[np.ndarray]:
    rows = np.array([o.ravel() for o in ops]) if ops else np.zeros((0, n * n))
    if rows.size == 0:
        return [np.eye(n)[i] for i in range(n)]
    _, s, vt = np.linalg.svd(rows)
    rank = int(np.sum(s > tol))
    if rank == 0:
        return [np.eye(n)[i] for i in range(n)]
    basis = [vt[i].reshape(n, n) for i in range(rank)]
    derived = [a @ b - b @ a for a in basis for b in basis]
    drows = np.array([d.ravel() for d in derived])
    dsv = np.linalg.svd(drows, compute_uv=False)
    drank = int(np.sum(dsv > tol))
    if drank >= rank:
        raise NotSolvable("derived span did not shrink")
    # ideal = derived span extended to codimension one; z = the last direction
    _, _, dvt = np.linalg.svd(drows)
    ideal = [dvt[i].reshape(n, n) for i in range(drank)]
    z = None
    for b in basis:
        cand = np.array([m.ravel() for m in ideal] + [b.ravel()])
        r = int(np.sum(np.linalg.svd(cand, compute_uv=False) > tol))
        if r > len(ideal):
            if len(ideal) < rank - 1:
                ideal.append(b)
            else:
                z = b
                break
    w = _joint_eigenspace_float(ideal, n, tol)
    q, _ = np.linalg.qr(np.array(w).T)  # orthonormalize the eigenspace
    r = q.T @ z @ q
    vals = np.linalg.eigvals(r)
    real = sorted((v for v in vals if abs(v.imag) <= tol * (1 + abs(v))),
                  key=lambda v: v.real)
    if not real:
        raise NotSplit("the action has no real eigenvalue at this step")
    lam = real[0].real
    shifted = r - lam * np.eye(r.shape[0])
    kern = _float_kernel(shifted, max(tol, 1e-12 * (1.0 + np.linalg.norm(r))), r.shape[0])
    if kern.shape[0] == 0:
        raise PostconditionFailed("restricted operator lost its eigenvalue")
    return [q @ kv for kv in kern]


# -- triangularization ---------------------------------------------------------------


def split_triangularize(g: LieAlgebraData) -> tuple[Matrix, Flag]:
    """Invertible P with every P^-1 b P upper-triangular; solvable split input.

    The columns of P are pulled back from common eigenvectors of the induced
    quotient actions, so the first flag stage is a fixed line of the whole
    algebra.
    """
    if not _is_solvable_data(g):
        raise NotSolvable("algebra is not solvable")
    for b in g.basis:
        _check_real_spectrum(b)
    n = g.ambient
    if g.is_exact:
        try:
            return _split_triangularize_exact(g)
        except _Irrational:
            approx = algebra_from_float(g)
            return _split_triangularize_float(approx)
    return _split_triangularize_float(g)


def algebra_from_float(g: LieAlgebraData) -> LieAlgebraData:
    from .liealg import algebra_from_basis

    return algebra_from_basis([b.to_approx() for b in g.basis], g.ambient)


def _is_solvable_data(g: LieAlgebraData) -> bool:
    return not series(g, DERIVED)[-1]


def _check_real_spectrum(b: Matrix):
    if b.mode == EXACT:
        from .matrix_core import count_real_roots

        for q, _ in irreducible_factors(char_poly(b)):
            if count_real_roots(q) != q.degree:
                raise NotSplit("a basis element has non-real eigenvalues")
    else:
        spec = spectrum(b)
        if any(abs(v.imag) > b.abs_tol() for v in spec.values()):
            raise NotSplit("a basis element has non-real eigenvalues at tolerance")


def _split_triangularize_exact(g: LieAlgebraData) -> tuple[Matrix, Flag]:
    n = g.ambient
    cols: list[list[Fraction]] = []
    while len(cols) < n:
        k = len(cols)
        full = _complete_columns(cols, n)
        bmat = _basis_matrix(full)
        binv = bmat.inv()
        quo_ops = []
        for b in g.basis:
            m = (binv @ b @ bmat).rows()
            for i in range(k, n):
                if any(m[i][j] != 0 for j in range(k)):
                    raise PostconditionFailed("flag stages are not invariant")
            quo_ops.append([m[i][j] for i in range(k, n) for j in range(k, n)])
        w = _joint_eigenspace_exact(quo_ops, n - k)[0]
        lift = [Fraction(0)] * k + list(w)
        v = [sum(full[j][i] * lift[j] for j in range(n)) for i in range(n)]
        cols.append(v)
    p = _basis_matrix(cols)
    pinv = p.inv()
    for b in g.basis:
        m = (pinv @ b @ p).rows()
        if any(m[i][j] != 0 for i in range(n) for j in range(i)):
            raise PostconditionFailed("conjugated basis element is not upper-triangular")
    return p, _flag_from_columns(cols)


def _split_triangularize_float(g: LieAlgebraData) -> tuple[Matrix, Flag]:
    n = g.ambient
    tol = max(b.abs_tol() for b in g.basis) if g.basis else 1e-12
    cols: list[np.ndarray] = []
    while len(cols) < n:
        k = len(cols)
        q = _orthocomplement(cols, n)
        quo = [q.T @ b.float_array() @ q for b in g.basis]
        w = _joint_eigenspace_float(quo, n - k, tol)[0]
        v = q @ w
        cols.append(v / np.linalg.norm(v))
    p = Matrix(np.array(cols).T, APPROX, max(b.tol for b in g.basis))
    pinv = p.inv()
    for b in g.basis:
        m = (pinv @ b @ p).data
        if np.max(np.abs(np.tril(m, -1))) > 50 * tol:
            raise PostconditionFailed("conjugated basis element is not upper-triangular")
    return p, _flag_from_columns([list(map(float, c)) for c in cols])
