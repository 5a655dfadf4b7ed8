from fractions import Fraction

import numpy as np
import pytest

from nashkit._span import bracket, in_span, span_dim
from nashkit.errors import ExactModeRequired, NotInAlgebra
from nashkit.liealg import (
    ADJOINT,
    DERIVED,
    LOWER_CENTRAL,
    NATURAL,
    algebra_from_basis,
    is_nilpotent,
    is_reductive,
    is_semisimple_element,
    is_solvable,
    levi_complement,
    lie_closure,
    radical,
    series,
    trace_form,
    unipotent_radical,
)
from nashkit.matrix_core import Matrix
from nashkit.selftest import REDUCTIVE_MEMBERS, battery, reductive_corpus


def unit(i, j, n=2):
    rows = [[0] * n for _ in range(n)]
    rows[i][j] = 1
    return Matrix.exact(rows)


@pytest.fixture(scope="module")
def bat():
    return battery()


def test_lie_closure_generates_sl2():
    g = lie_closure([unit(0, 1), unit(1, 0)])
    assert g.dim == 3
    assert in_span(Matrix.diagonal([1, -1]), list(g.basis))


def test_lie_closure_trivial_cases():
    assert lie_closure([], ambient=2).dim == 0
    g = lie_closure([Matrix.identity(3)])
    assert g.dim == 1


def test_structure_constants_match_brackets():
    g = lie_closure([unit(0, 1), unit(1, 0)])
    for i in range(g.dim):
        for j in range(g.dim):
            lhs = bracket(g.basis[i], g.basis[j])
            rhs = Matrix.zero(g.ambient)
            for k in range(g.dim):
                rhs = rhs + g.basis[k].scale(g.structure_constants[i, j, k])
            assert lhs == rhs


def test_series_examples(bat):
    assert not is_solvable(bat["sl2"])
    chain = series(bat["heis3"], LOWER_CENTRAL)
    assert [len(c) for c in chain] == [3, 1, 0]
    assert is_nilpotent(bat["heis3"])
    assert is_solvable(bat["zero"])
    assert is_solvable(bat["ut3"]) and not is_nilpotent(bat["ut3"])
    # derived series of sl2 is constant
    assert [len(c) for c in series(bat["sl2"], DERIVED)] == [3]


def test_radical_examples(bat):
    assert radical(bat["sl2"]) == []
    assert len(radical(bat["ut2"])) == 3
    rad = radical(bat["gl2"])
    assert len(rad) == 1 and in_span(Matrix.identity(2), rad)


def test_trace_form_sl2():
    h, e, f = Matrix.diagonal([1, -1]), unit(0, 1), unit(1, 0)
    g = algebra_from_basis([h, e, f])
    tf = trace_form(g, NATURAL)
    assert tf.gram == Matrix.exact([[2, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert tf.gram.det() == -2
    killing = trace_form(g, ADJOINT).gram
    # Killing form of sl2 is 4x the natural trace form
    assert killing == Matrix.exact([[8, 0, 0], [0, 0, 4], [0, 4, 0]])


def test_trace_form_edge_cases(bat):
    assert trace_form(bat["zero"], NATURAL).gram.n == 0
    nil = algebra_from_basis([unit(0, 1)])
    assert trace_form(nil, NATURAL).gram == Matrix.exact([[0]])


def test_trace_form_congruent_under_rebasing():
    h, e, f = Matrix.diagonal([1, -1]), unit(0, 1), unit(1, 0)
    g = algebra_from_basis([h, e, f])
    s = Matrix.exact([[1, 1, 0], [0, 1, 2], [1, 0, 1]])  # change of basis coords
    new_basis = []
    for j in range(3):
        acc = Matrix.zero(2)
        for i, b in enumerate(g.basis):
            acc = acc + b.scale(s.entry(i, j))
        new_basis.append(acc)
    g2 = algebra_from_basis(new_basis)
    assert trace_form(g2, NATURAL).gram == s.T @ trace_form(g, NATURAL).gram @ s


def test_trace_form_invariant_under_conjugation():
    h, e, f = Matrix.diagonal([1, -1]), unit(0, 1), unit(1, 0)
    g = algebra_from_basis([h, e, f])
    c = Matrix.exact([[2, 1], [1, 1]])
    conj = algebra_from_basis([c @ b @ c.inv() for b in g.basis])
    assert trace_form(conj, NATURAL).gram == trace_form(g, NATURAL).gram


def test_is_reductive_examples(bat):
    assert is_reductive(bat["sl2"])
    assert not is_reductive(bat["ut2"])
    assert is_reductive(bat["zero"])
    assert is_reductive(bat["gl2"]) and is_reductive(bat["so3"])
    assert not is_reductive(bat["heis3"]) and not is_reductive(bat["gl2_semi"])


def test_unipotent_radical_examples(bat):
    ur = unipotent_radical(bat["ut2"])
    assert len(ur) == 1 and in_span(unit(0, 1), ur)
    assert unipotent_radical(bat["sl2"]) == []
    assert len(unipotent_radical(bat["heis3"])) == 3
    assert len(unipotent_radical(bat["gl2_semi"])) == 2


def test_reductivity_cross_oracle(bat):
    for name, g in bat.items():
        assert is_reductive(g) == (unipotent_radical(g) == []), name


def test_radical_contains_unipotent_radical(bat):
    for name, g in bat.items():
        rad = radical(g)
        for u in unipotent_radical(g):
            assert in_span(u, rad), name


def test_levi_examples(bat):
    d = levi_complement(bat["ut2"])
    assert len(d.levi_basis) == 2 and len(d.unip_basis) == 1
    assert all(in_span(b, [unit(0, 0), unit(1, 1)]) for b in d.levi_basis)
    d2 = levi_complement(bat["gl2_semi"])
    assert len(d2.levi_basis) == 4 and len(d2.unip_basis) == 2
    d3 = levi_complement(bat["sl2"])
    assert len(d3.levi_basis) == 3 and not d3.unip_basis


def test_levi_postconditions(bat):
    for name, g in bat.items():
        d = levi_complement(g)
        levi, unip = list(d.levi_basis), list(d.unip_basis)
        assert span_dim(levi + unip) == g.dim, name
        for a in levi:
            for b in levi:
                assert in_span(bracket(a, b), levi), name
            for u in unip:
                assert in_span(bracket(a, u), unip), name
        if levi:
            assert is_reductive(algebra_from_basis(levi)), name


def test_levi_needs_actual_correction():
    # complement seeded from this basis is not a subalgebra: the lift must fix it
    a = Matrix.exact([[1, 0, 0], [0, 0, 0], [0, 0, 0]]) + Matrix.exact(
        [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    b = Matrix.exact([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    c = Matrix.exact([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    d = Matrix.exact([[0, 0, 0], [0, 1, 0], [0, 0, 0]])
    e13 = Matrix.exact([[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    e23 = Matrix.exact([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    g = algebra_from_basis([a, b, c, d, e13, e23])
    decomp = levi_complement(g)
    assert len(decomp.levi_basis) == 4 and len(decomp.unip_basis) == 2


def test_is_semisimple_element_examples():
    h, e, f = Matrix.diagonal([1, -1]), unit(0, 1), unit(1, 0)
    sl2 = algebra_from_basis([h, e, f])
    assert is_semisimple_element(h, sl2)
    assert not is_semisimple_element(e, sl2)
    gl2 = algebra_from_basis([unit(0, 0), unit(0, 1), unit(1, 0), unit(1, 1)])
    assert is_semisimple_element(Matrix.exact([[1, 1], [0, 2]]), gl2)
    with pytest.raises(NotInAlgebra):
        is_semisimple_element(Matrix.identity(2), sl2)


def test_exact_only_operations_reject_floats():
    g = algebra_from_basis([Matrix.approx([[1.0, 0.0], [0.0, -1.0]])])
    with pytest.raises(ExactModeRequired):
        radical(g)
    with pytest.raises(ExactModeRequired):
        unipotent_radical(g)
    with pytest.raises(ExactModeRequired):
        levi_complement(g)


def test_float_track_closure_and_reductivity():
    e = Matrix.approx([[0.0, 1.0], [0.0, 0.0]])
    f = Matrix.approx([[0.0, 0.0], [1.0, 0.0]])
    g = lie_closure([e, f])
    assert g.dim == 3
    assert is_reductive(g)
    assert not is_reductive(lie_closure([e]))


def test_semisimple_density_on_reductive_corpus():
    rng = np.random.default_rng(17)
    for g, x in reductive_corpus(0):
        if is_semisimple_element(x, g):
            continue
        found = False
        for _ in range(100):
            coeffs = [Fraction(int(rng.integers(-999, 1000)), 4_000_000)
                      for _ in range(g.dim)]
            y = x + g.element(coeffs)
            if (y - x).norm() <= 1e-3 and is_semisimple_element(y, g):
                found = True
                break
        assert found


def test_battery_membership(bat):
    assert set(bat) == {"zero", "diag2", "sl2", "so3", "gl2", "ut2", "ut3",
                        "heis3", "gl2_semi"}
    assert all(bat[name].dim > 0 for name in REDUCTIVE_MEMBERS if name != "zero")
