import random
from math import factorial
from pathlib import Path

import numpy as np
import pytest
from gmpy2 import mpq

from folichar import simplicial as sx
from folichar.gca import GradedElement, wedge
from folichar.suites import random_pullback
from folichar.weil import wo_element

GOLDEN = Path(__file__).parent / "golden"
HC = wo_element([("h", 1), ("c", 1)])


def A(k, i, a=1, b=1):
    return GradedElement.gen(sx.alpha_gen(k, i, a, b))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_face_table_skips_vertex_i(k):
    for i, tab in enumerate(sx.face_table(k)):
        assert sorted(tab) == list(range(k))
        assert sorted(tab.values()) == [j for j in range(k + 1) if j != i]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_cosimplicial_identities(k):
    """delta_j delta_i = delta_i delta_{j-1} for i < j, composing vertex maps."""
    big, small = sx.face_table(k), sx.face_table(k - 1)
    for j in range(k + 1):
        for i in range(j):
            for x in range(k - 1):
                assert big[j][small[i][x]] == big[i][small[j - 1][x]]


def test_face_table_rejects_level_zero():
    with pytest.raises(ValueError):
        sx.face_table(0)


@pytest.mark.parametrize("m", [0, 1])
def test_coboundary_squared_zero(m):
    rng = random.Random(m)
    for _ in range(10):
        c = sx.Cochain(m, random_pullback(m, rng))
        assert sx.coboundary(sx.coboundary(c)).is_zero()


@pytest.mark.parametrize("m", [0, 1, 2])
def test_d_commutes_with_coboundary(m):
    rng = random.Random(10 + m)
    for _ in range(10):
        e = random_pullback(m, rng)
        lhs = sx.coboundary(sx.Cochain(m, sx.formal_d(m, e, 2))).element
        rhs = sx.formal_d(m + 1, sx.coboundary(sx.Cochain(m, e)).element, 2)
        assert lhs == rhs


def test_coboundary_of_level0_alpha():
    c = sx.coboundary(sx.Cochain(0, A(0, 0)))
    assert c.element == A(1, 1) - A(1, 0)


def test_cup_associative():
    rng = random.Random(5)
    for _ in range(10):
        a, b, c = (sx.Cochain(m, random_pullback(m, rng, terms=1)) for m in (0, 1, 0))
        if a.is_zero() or b.is_zero():
            continue
        assert sx.cup(sx.cup(a, b), c).element == sx.cup(a, sx.cup(b, c)).element


def test_cup_leibniz_total_degree_sign():
    rng = random.Random(3)
    n_checked = 0
    for _ in range(40):
        m, n = rng.randint(0, 1), rng.randint(0, 1)
        a = random_pullback(m, rng, terms=1)
        if a.is_zero():
            continue
        a, b = sx.Cochain(m, a), sx.Cochain(n, random_pullback(n, rng, terms=2))
        sign = (-1) ** (m + a.degree)
        lhs = sx.coboundary(sx.cup(a, b)).element
        rhs = sx.cup(sx.coboundary(a), b).element + sx.cup(a, sx.coboundary(b)).element * sign
        assert lhs == rhs
        n_checked += 1
    assert n_checked > 20


def test_cup_sign_example():
    a = sx.Cochain(0, A(0, 0))
    b = sx.Cochain(1, A(1, 1))
    # degree 1 on the left, level 1 on the right: one sign flip
    assert sx.cup(a, b).element == -wedge(A(1, 0), A(1, 1))


def test_reindex_rejects_foreign_symbols():
    with pytest.raises(sx.AlphabetError):
        sx.coboundary(sx.Cochain(1, A(0, 0)))
    with pytest.raises(sx.AlphabetError):
        sx.coboundary(sx.Cochain(1, GradedElement.gen(sx.dt_gen(1))))


@pytest.mark.parametrize("k,exps", [(1, (0,)), (1, (3,)), (2, (1, 0)), (2, (1, 2)), (3, (1, 1, 0))])
def test_simplex_monomial_integral_numeric(k, exps):
    n = 400 if k < 3 else 80
    g = (np.arange(n) + 0.5) / n
    mesh = np.meshgrid(*([g] * k), indexing="ij")
    inside = sum(mesh) <= 1
    f = np.prod([m ** e for m, e in zip(mesh, exps)], axis=0)
    approx = float(np.sum(f * inside)) / n ** k
    exact = float(sx.simplex_monomial_integral(k, exps))
    assert abs(approx - exact) < 0.05 * exact + 1e-3
    assert sx.simplex_monomial_integral(k, exps) == mpq(int(np.prod([factorial(e) for e in exps])),
                                                        factorial(k + sum(exps)))


def test_integrate_simplex_orientation_convention():
    lc = sx.LevelContext(1)
    beta = A(1, 0)
    # dt_0 carries the positive orientation
    assert sx.integrate_simplex(wedge(lc.dt(0), beta), 1).element == beta
    assert sx.integrate_simplex(wedge(lc.dt(1), beta), 1).element == -beta
    half = sx.integrate_simplex(wedge(lc.t(1) * lc.dt(0), beta), 1).element
    assert half == beta * mpq(1, 2)


def test_integrate_drops_wrong_dt_degree():
    assert sx.integrate_simplex(A(2, 0), 2).is_zero()


def test_gv_level0_and_level1():
    cs = sx.char_cochain(HC, 3, 1)
    a0, a1 = A(1, 0), A(1, 1)
    assert cs[0].element == GradedElement.monomial(1, gens=[sx.alpha_gen(0, 0), sx.dalpha_gen(0, 0)])
    assert cs[1].element == wedge(a0 + a1, a0 - a1) * mpq(-1, 2)
    assert cs[1].element == wedge(a0, a1)
    assert cs[2].is_zero() and cs[3].is_zero()


def test_gv_level1_local_golden():
    loc = sx.char_cochain(HC, 1, 1, "local")[1]
    assert loc.dump() == (GOLDEN / "gv_level1_local.txt").read_text()


def test_gv_closed_in_bott_model_and_witness():
    r = sx.verify_gv_closed(1)
    assert r.boundary_local.is_zero()
    assert not r.boundary_formal.is_zero()
    assert r.unit_value.is_zero()
    assert (r.r_minus_s + r.d_alpha).is_zero()
    assert r.passed
    w = r.boundary_formal.element
    expect = wedge(A(2, 0), A(2, 1)) - wedge(A(2, 0), A(2, 2)) + wedge(A(2, 1), A(2, 2))
    assert w == expect


def test_verify_gv_closed_only_codim_one():
    with pytest.raises(ValueError):
        sx.verify_gv_closed(2)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_bott_vanishing_q1(k):
    rep = sx.verify_bott(1, k, (1, 1))
    assert rep.vanishes and rep.dz_bound_ok and rep.min_dz_degree == 2


@pytest.mark.parametrize("k", [0, 1, 2])
def test_bott_vanishing_q2(k):
    rep = sx.verify_bott(2, k, (1, 2))
    assert rep.vanishes and rep.min_dz_degree >= 3


def test_bott_below_threshold_need_not_vanish():
    # deg P = q: the class survives at level 0
    rep = sx.verify_bott(1, 0, (1,))
    assert not rep.vanishes and rep.passed


def test_bott_rejects_bad_index():
    with pytest.raises(ValueError):
        sx.verify_bott(1, 0, (2,))
