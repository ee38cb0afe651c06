from pathlib import Path

import numpy as np
import pytest
from gmpy2 import mpq

from folichar.gca import AlgebraError, AlgebraHom, GradedElement, derive, hom_apply
from folichar.weil import (MatrixForm, ParseError, TruncationPolicy, c_gen, chern_c, curv_gen,
                           derive_matrix, h_gen, is_basic, lie_LX, make_gl, omega_gen,
                           parse_wo_word, sym_antisym_split, transgression_h, truncate,
                           weil_context, wo_d, wo_element, wo_to_weil)

GOLDEN = Path(__file__).parent / "golden"
CTX = {q: weil_context(make_gl(q)) for q in (1, 2, 3)}


def test_make_gl_rejects_zero():
    with pytest.raises(ValueError):
        make_gl(0)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_structure_constants_match_commutators(q):
    L = make_gl(q)
    n = len(L.basis)
    for i in range(n):
        for j in range(n):
            A, B = np.array(L.matrix(i)), np.array(L.matrix(j))
            rebuilt = sum(float(L.f(k, i, j)) * np.array(L.matrix(k)) for k in range(n))
            assert np.array_equal(A @ B - B @ A, rebuilt)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_d_squared_zero_on_generators(q):
    c = CTX[q]
    for g in c.generators():
        assert derive(c.d, derive(c.d, GradedElement.gen(g))).is_zero()


@pytest.mark.parametrize("q", [1, 2, 3])
def test_matrix_structure_equations(q):
    c = CTX[q]
    assert (derive_matrix(c.d, c.omega) - (c.Omega - c.omega @ c.omega)).is_zero()
    assert (derive_matrix(c.d, c.Omega) - (c.Omega @ c.omega - c.omega @ c.Omega)).is_zero()


def test_d_omega_q1_by_hand():
    c = CTX[1]
    assert derive(c.d, GradedElement.gen(omega_gen(1, 1))) == GradedElement.gen(curv_gen(1, 1))
    assert derive(c.d, GradedElement.gen(curv_gen(1, 1))).is_zero()


@pytest.mark.parametrize("q,i", [(q, i) for q in (1, 2, 3) for i in range(1, q + 1)])
def test_chern_numeric_substitution(q, i):
    """Substituting an integer matrix for the curvature must give Tr(M^i)."""
    c = CTX[q]
    rng = np.random.default_rng(q * 10 + i)
    M = rng.integers(-3, 4, (q, q))
    imgs = {curv_gen(a, b): GradedElement.scalar(int(M[a - 1, b - 1]))
            for a in range(1, q + 1) for b in range(1, q + 1)}
    imgs.update({omega_gen(a, b): GradedElement.zero() for a in range(1, q + 1) for b in range(1, q + 1)})
    val = hom_apply(AlgebraHom(imgs, check=False), chern_c(c, i)).scalar_value()
    assert val == int(np.trace(np.linalg.matrix_power(M, i)))


@pytest.mark.parametrize("q", [1, 2, 3])
def test_dh1_equals_c1(q):
    c = CTX[q]
    assert derive(c.d, transgression_h(c, 1)) == chern_c(c, 1)


def test_dh3_equals_c3():
    c = CTX[3]
    assert derive(c.d, transgression_h(c, 3)) == chern_c(c, 3)


def test_h1_is_trace_of_symmetric_part():
    for q, c in CTX.items():
        expect = sum((GradedElement.gen(omega_gen(a, a)) for a in range(1, q + 1)), GradedElement.zero())
        assert transgression_h(c, 1) == expect


def test_transgression_degrees():
    c = CTX[3]
    assert transgression_h(c, 1).degree() == 1
    assert transgression_h(c, 3).degree() == 5
    assert chern_c(c, 3).degree() == 6


@pytest.mark.parametrize("q", [1, 2, 3])
def test_chern_classes_gl_basic(q):
    c = CTX[q]
    for i in range(1, q + 1):
        assert is_basic(chern_c(c, i), c, c.lie.gl_basis)


@pytest.mark.parametrize("q", [1, 2, 3])
def test_odd_transgressions_so_basic(q):
    c = CTX[q]
    so = c.lie.so_basis
    for i in range(1, q + 1, 2):
        assert is_basic(transgression_h(c, i), c, so, so)


def test_h1_gl_basic_but_h3_not_gl_invariant():
    c = CTX[3]
    assert is_basic(transgression_h(c, 1), c, c.lie.so_basis)
    # h3 is only SO(3)-basic: some gl(3) Lie derivative moves it
    assert not is_basic(transgression_h(c, 3), c, c.lie.so_basis)


def test_cartan_formula_on_generators():
    c = CTX[2]
    for X in range(len(c.lie.basis)):
        LX, iX = lie_LX(c, X), c.iX(X)
        for g in c.generators():
            e = GradedElement.gen(g)
            assert derive(LX, e) == derive(iX, derive(c.d, e)) + derive(c.d, derive(iX, e))


def test_contraction_of_omega_by_basis_element():
    c = CTX[2]
    L = c.lie
    for i, (a, b) in enumerate(L.basis):
        img = derive(c.iX(i), GradedElement.gen(omega_gen(a, b)))
        assert img == GradedElement.one()
        for g in c.generators():
            if g.family == curv_gen(1, 1).family:
                assert derive(c.iX(i), GradedElement.gen(g)).is_zero()


def test_sym_antisym_split_reassembles():
    c = CTX[3]
    o, s = sym_antisym_split(c.omega)
    assert (o + s - c.omega).is_zero()
    assert (o.transpose() + o).is_zero()
    assert (s.transpose() - s).is_zero()


def test_chern_and_transgression_reject_bad_index():
    c = CTX[2]
    with pytest.raises(ValueError):
        chern_c(c, 3)
    with pytest.raises(ValueError):
        transgression_h(c, 2)


@pytest.mark.parametrize("name", sorted(p.name for p in GOLDEN.glob("[ch]_q*_i*.txt")))
def test_golden_dumps(name):
    kind, q, i = name[0], int(name.split("_q")[1][0]), int(name.split("_i")[1][0])
    c = CTX[q]
    el = chern_c(c, i) if kind == "c" else transgression_h(c, i)
    assert el.dump() == (GOLDEN / name).read_text()


# ---------------------------------------------------------------- WO alphabet

def test_parse_wo_word():
    assert parse_wo_word("h1*c1^2") == [("h", 1), ("c", 1), ("c", 1)]
    assert parse_wo_word(" c1 * c2 ", 2) == [("c", 1), ("c", 2)]


@pytest.mark.parametrize("bad,q", [("h2", 3), ("c2", 1), ("h1^2", 1), ("x1", 1), ("c0", 1), ("", 1)])
def test_parse_wo_word_rejects(bad, q):
    with pytest.raises(ParseError):
        parse_wo_word(bad, q)


def test_wo_d_and_truncation():
    d = wo_d(1)
    h1c1 = wo_element([("h", 1), ("c", 1)])
    assert derive(d, h1c1) == wo_element([("c", 1), ("c", 1)])
    assert truncate(derive(d, h1c1), TruncationPolicy(1)).is_zero()
    assert derive(d, derive(d, wo_element([("h", 1)]))).is_zero()


def test_truncate_rejects_foreign_alphabet():
    with pytest.raises(AlgebraError):
        truncate(GradedElement.gen(omega_gen(1, 1)), TruncationPolicy(1))


def test_wo_to_weil_is_chain_map():
    for q in (1, 2):
        c = CTX[q]
        H = wo_to_weil(c)
        for g in [h_gen(i) for i in range(1, q + 1, 2)] + [c_gen(i) for i in range(1, q + 1)]:
            e = GradedElement.gen(g)
            assert hom_apply(H, derive(wo_d(q), e)) == derive(c.d, hom_apply(H, e))


def test_matrix_form_trace_and_power():
    M = MatrixForm.constant([[1, 2], [3, 4]])
    assert M.power(2).trace().scalar_value() == mpq(1 + 6 + 6 + 16)
