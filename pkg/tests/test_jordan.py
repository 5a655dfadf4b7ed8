from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from nashkit.errors import NotAbelian, NotInvertible
from nashkit.explog import matrix_exp
from nashkit.jordan import (
    ALGEBRA,
    GROUP,
    abelian_ehu_split,
    additive_jordan,
    classify,
    multiplicative_jordan,
    sn_split,
)
from nashkit.matrix_core import Matrix, char_poly, squarefree_part


def test_sn_split_examples():
    s, n = sn_split(Matrix.exact([[0, 1], [0, 0]]))
    assert s.is_zero() and n == Matrix.exact([[0, 1], [0, 0]])
    s, n = sn_split(Matrix.exact([[2, 1], [0, 2]]))
    assert s == Matrix.diagonal([2, 2]) and n == Matrix.exact([[0, 1], [0, 0]])
    s, n = sn_split(Matrix.exact([[0, 1], [1, 0]]))
    assert n.is_zero() and s == Matrix.exact([[0, 1], [1, 0]])


def test_sn_split_properties():
    rng = np.random.default_rng(7)
    for _ in range(25):
        t = np.triu(rng.integers(-3, 4, size=(4, 4)))
        p = np.eye(4, dtype=int)
        p[0, 1] = 1
        p[2, 3] = -2
        x = Matrix.exact(p.tolist()) @ Matrix.exact(t.tolist()) @ Matrix.exact(p.tolist()).inv()
        s, n = sn_split(x)
        assert s + n == x
        assert (n ** 4).is_zero()
        assert (s @ n - n @ s).is_zero()
        f = squarefree_part(char_poly(x))
        assert f.eval_matrix(s).is_zero()


def test_additive_jordan_examples():
    t = additive_jordan(Matrix.zero(3))
    assert t.e.is_zero() and t.h.is_zero() and t.u.is_zero()
    t = additive_jordan(Matrix.exact([[2, 1], [0, 2]]))
    assert t.e.is_zero() and t.h == Matrix.diagonal([2, 2])
    assert t.u == Matrix.exact([[0, 1], [0, 0]])
    t = additive_jordan(Matrix.exact([[1, -2], [2, 1]]))
    assert t.e == Matrix.exact([[0, -2], [2, 0]])
    assert t.h == Matrix.diagonal([1, 1]) and t.u.is_zero()


def test_multiplicative_jordan_examples():
    t = multiplicative_jordan(Matrix.identity(2))
    assert t.e == t.h == t.u == Matrix.identity(2)
    t = multiplicative_jordan(Matrix.exact([[2, 1], [0, 2]]))
    assert t.e == Matrix.identity(2)
    assert t.h == Matrix.diagonal([2, 2])
    assert t.u == Matrix.exact([[1, Fraction(1, 2)], [0, 1]])
    t = multiplicative_jordan(Matrix.exact([[0, -2], [2, 0]]))
    assert t.e == Matrix.exact([[0, -1], [1, 0]])
    assert t.h == Matrix.diagonal([2, 2]) and t.u == Matrix.identity(2)


def test_multiplicative_requires_invertible():
    with pytest.raises(NotInvertible):
        multiplicative_jordan(Matrix.exact([[1, 1], [1, 1]]))


def test_negative_eigenvalue_split_exact():
    x = Matrix.diagonal([-3, 2])
    t = multiplicative_jordan(x)
    assert t.e == Matrix.diagonal([-1, 1])
    assert t.h == Matrix.diagonal([3, 2])
    assert t.e @ t.h @ t.u == x


def test_reconstruction_and_commutation_float():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = rng.normal(size=(4, 4))
        if abs(np.linalg.det(a)) < 1e-2:
            continue
        x = Matrix.approx(a)
        t = multiplicative_jordan(x)
        scale = 1e-9 * (1 + x.norm())
        assert (t.e @ t.h @ t.u - x).norm() <= scale
        assert (t.e @ t.h - t.h @ t.e).norm() <= scale
        assert (t.e @ t.u - t.u @ t.e).norm() <= scale
        assert (t.h @ t.u - t.u @ t.h).norm() <= scale


def test_uniqueness_brute_force_2x2():
    # commutant of a non-scalar 2x2 is spanned by {I, x}; search all triples
    # with h = aI + bx over a small rational grid for valid factorizations
    grid = sorted({Fraction(n, d) for n in range(-12, 13) for d in (1, 2, 5)})
    ident = Matrix.identity(2)
    for x in (Matrix.exact([[0, -2], [2, 0]]),
              Matrix.exact([[2, 1], [0, 2]]),
              Matrix.diagonal([-3, 2])):
        t = multiplicative_jordan(x)
        found = []
        for a, b in product(grid, grid):
            h = ident.scale(a) + x.scale(b)
            if not h.is_invertible() or not classify(h, GROUP).hyperbolic:
                continue
            rest = x @ h.inv()  # e * u, still a polynomial in x
            tr = multiplicative_jordan(rest)
            if not (tr.h == ident):
                continue
            e, u = tr.e, tr.u
            if e @ h @ u == x and classify(e, GROUP).elliptic \
                    and classify(u, GROUP).unipotent:
                found.append((e, h, u))
        assert any(e == t.e and h == t.h and u == t.u for e, h, u in found)
        hs = {tuple(tuple(r) for r in h.rows()) for _, h, _ in found}
        assert len(hs) == 1  # the hyperbolic part is unique on the grid


def test_classify_examples():
    c = classify(Matrix.identity(2), GROUP)
    assert (c.elliptic, c.hyperbolic, c.unipotent, c.semisimple, c.exponential) == (
        True, True, True, True, True)
    c = classify(Matrix.exact([[0, -1], [1, 0]]), GROUP)
    assert c.elliptic and c.semisimple
    assert not (c.hyperbolic or c.unipotent or c.exponential)
    c = classify(Matrix.diagonal([2, Fraction(1, 2)]), GROUP)
    assert c.hyperbolic and c.semisimple and c.exponential
    assert not (c.elliptic or c.unipotent)


def test_classify_algebra_setting():
    c = classify(Matrix.zero(2), ALGEBRA)
    assert c.elliptic and c.hyperbolic and c.unipotent and c.semisimple and c.exponential
    c = classify(Matrix.exact([[0, 1], [0, 0]]), ALGEBRA)
    assert c.unipotent and c.exponential and not c.semisimple
    c = classify(Matrix.exact([[0, -1], [1, 0]]), ALGEBRA)
    assert c.elliptic and c.semisimple and not c.exponential


def test_classify_parts_of_decomposition():
    rng = np.random.default_rng(23)
    for _ in range(10):
        m = Matrix.exact(rng.integers(-3, 4, size=(3, 3)).tolist())
        if not m.is_invertible():
            continue
        t = multiplicative_jordan(m)
        assert classify(t.e, GROUP).elliptic
        assert classify(t.h, GROUP).hyperbolic
        assert classify(t.u, GROUP).unipotent


def test_functoriality_conjugation_exact():
    x = Matrix.exact([[2, 1], [0, 3]])
    g = Matrix.exact([[1, 1], [1, 2]])
    tx = multiplicative_jordan(x)
    ty = multiplicative_jordan(g @ x @ g.inv())
    assert ty.e == g @ tx.e @ g.inv()
    assert ty.h == g @ tx.h @ g.inv()
    assert ty.u == g @ tx.u @ g.inv()


def test_functoriality_block_doubling():
    x = Matrix.exact([[0, -2], [2, 0]])
    tx = multiplicative_jordan(x)
    rows = [[0] * 4 for _ in range(4)]
    for i in range(2):
        for j in range(2):
            rows[i][j] = x.entry(i, j)
            rows[i + 2][j + 2] = x.entry(i, j)
    doubled = Matrix.exact(rows)
    td = multiplicative_jordan(doubled)
    for part, dpart in zip(tx.parts(), td.parts()):
        for i in range(2):
            for j in range(2):
                assert dpart.entry(i, j) == part.entry(i, j)
                assert dpart.entry(i + 2, j + 2) == part.entry(i, j)
                assert dpart.entry(i, j + 2) == 0


def test_exp_of_parts_lands_in_group_class():
    x = Matrix.exact([[1, -2], [2, 1]])
    t = additive_jordan(x)
    assert classify(matrix_exp(t.e), GROUP).elliptic
    assert classify(matrix_exp(t.h), GROUP).hyperbolic
    assert classify(matrix_exp(t.u), GROUP).unipotent


def test_abelian_ehu_split_examples():
    rot = Matrix.exact([[0, -1], [1, 0]])
    two_i = Matrix.diagonal([2, 2])
    e_b, h_b, u_b = abelian_ehu_split([rot, two_i])
    assert len(e_b) == 1 and len(h_b) == 1 and not u_b
    e_b, h_b, u_b = abelian_ehu_split([Matrix.exact([[0, 1], [0, 0]])])
    assert not e_b and not h_b and len(u_b) == 1
    assert abelian_ehu_split([]) == ([], [], [])


def test_abelian_split_rejects_noncommuting():
    with pytest.raises(NotAbelian):
        abelian_ehu_split([Matrix.exact([[0, 1], [0, 0]]),
                           Matrix.exact([[0, 0], [1, 0]])])


def test_silent_promotion_on_irrational_modulus():
    # eigenvalues 1 +/- sqrt(2): positive/negative pair forces the float track
    x = Matrix.exact([[1, 1], [2, 1]])
    t = multiplicative_jordan(x)
    assert t.h.mode == "approx"
    assert (t.e @ t.h @ t.u - x.to_approx()).norm() <= 1e-9 * (1 + x.norm())
