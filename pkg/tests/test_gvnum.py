import numpy as np
import pytest

from folichar import gvnum
from folichar.folmodel import CircleDiffeo, Germ, SuspensionModel, simpson_weights

MODEL = SuspensionModel(CircleDiffeo({1: 0.3}))
ROT = SuspensionModel(CircleDiffeo({}, {0: 0.5}))
WIDE = gvnum.BumpKernel(windings=((-1, 1.0), (0, 0.7), (1, 0.5)), xt=(0.5, 0.48), xs=(0.5, 0.48),
                        tau=(0.0, 0.8), z_mod=(0.4, 1.0))
K1 = gvnum.BumpKernel(windings=((-1, 0.9), (1, 1.1)), xt=(0.48, 0.3), xs=(0.52, 0.33), tau=(0.05, 0.6),
                      z_mod=(0.5, 0.3))
K2 = gvnum.BumpKernel(windings=((0, 0.8), (1, -0.7)), xt=(0.5, 0.32), xs=(0.47, 0.3), tau=(-0.05, 0.6),
                      z_mod=(0.3, 2.0))
K3 = gvnum.BumpKernel(windings=((-1, 0.6), (0, 1.0)), xt=(0.53, 0.3), xs=(0.5, 0.34), tau=(0.0, 0.6),
                      z_mod=(0.6, 4.0))


def test_grid_halving():
    g = gvnum.GridSpec(64, 64, 32, 2.0)
    h = g.halved()
    assert (h.nx, h.nz, h.nt, h.tau_max) == (32, 32, 16, 2.0)
    assert g.h_tau == pytest.approx(0.125)


def test_bump_profile():
    assert gvnum.bump(0.5, 0.5, 0.2) == pytest.approx(1.0)
    assert gvnum.bump(np.array([0.3, 0.71]), 0.5, 0.2).tolist() == [0.0, 0.0]
    assert gvnum.periodic_bump(2 * np.pi + 0.1, 0.1, 0.5) == pytest.approx(1.0)


def test_support_overflow_at_tau_boundary():
    g = gvnum.GridSpec(8, 8, 8, 1.0)
    with pytest.raises(gvnum.SupportOverflowError):
        gvnum.BumpKernel(tau=(0.8, 0.6)).sample(g)
    with pytest.raises(gvnum.SupportOverflowError):
        gvnum.BumpKernel(windings=((2, 1.0),), tau=(0.0, 0.5)).sample(g, window=(-1, 0, 1))


def test_grid_mismatch():
    a = K1.sample(gvnum.GridSpec(8, 8, 8, 2.0))
    b = K2.sample(gvnum.GridSpec(16, 8, 8, 2.0))
    with pytest.raises(gvnum.GridMismatchError):
        gvnum.convolve(a, b, MODEL)


def test_trig_interpolation_exact_on_low_modes():
    nz = 16
    nodes = np.arange(nz) * 2 * np.pi / nz
    targets = np.linspace(0, 7, 23)
    f = lambda z: 1 + np.cos(3 * z) - 0.5 * np.sin(5 * z)
    assert np.allclose(gvnum.trig_interp_matrix(nz, targets) @ f(nodes), f(targets))


def test_lagrange_exact_on_cubics_and_zero_outside():
    nodes = np.linspace(-1, 1, 17)
    t = np.linspace(-0.97, 0.97, 31)
    p = lambda s: 2 - s + 3 * s ** 2 - s ** 3
    assert np.allclose(gvnum.lagrange_matrix(nodes, t) @ p(nodes), p(t))
    assert not np.any(gvnum.lagrange_matrix(nodes, [1.5, -1.2]))


def test_winding_bookkeeping():
    g = gvnum.GridSpec(8, 8, 8, 2.0)
    a = gvnum.BumpKernel(windings=((1, 1.0),), tau=(0.0, 0.6)).sample(g)
    b = gvnum.BumpKernel(windings=((-1, 1.0), (2, 1.0)), tau=(0.0, 0.6)).sample(g)
    p = gvnum.convolve(a, b, MODEL)
    assert p.windings == frozenset({0, 3})
    assert gvnum.convolve(a, b, MODEL, windings={0}).windings == frozenset({0})
    with pytest.raises(gvnum.SupportOverflowError):
        gvnum.convolve(a, b, MODEL, window=(-1, 0, 1, 2))
    assert gvnum.needed_windings(a, b) == {1, -2}


def test_unit_approximation_mass():
    g = gvnum.GridSpec(32, 4, 16, 2.0)
    u = gvnum.unit_approximation(g, 3 / 32)[0][0, 8]
    w = simpson_weights(32)
    assert np.allclose(u @ w, 1.0, atol=1e-12)
    assert np.allclose(w @ u, 1.0, atol=1e-12)


def test_unit_approximation_second_order():
    """eps = 3h: error of a*u and u*a against a decays like eps^2 across three refinements."""
    errs = []
    for nx in (64, 128, 256):
        g = gvnum.GridSpec(nx, 4, 16, 2.0)
        eps = 3 / nx
        u = gvnum.unit_approximation(g, eps)
        a = WIDE.sample(g)
        right = gvnum.convolve(a, u, MODEL)
        left = gvnum.convolve(u, a, MODEL)
        e = max(max(np.max(np.abs(right[n] - a[n])), np.max(np.abs(left[n] - a[n]))) for n in a.windings)
        errs.append((e, eps))
    scaled = [e / eps ** 2 for e, eps in errs]
    assert max(scaled) / min(scaled) < 1.5
    assert np.log2(errs[1][0] / errs[2][0]) > 1.7


def triple_oracle(a, b, c, model, n, xt, xs, z, tau, nx=400):
    """Closed-form kernels contracted by fine Simpson quadrature in both middle variables."""
    x = np.linspace(0, 1, nx + 1)
    w = simpson_weights(nx)
    total = 0.0
    for n1, _ in a.windings:
        for n2, _ in b.windings:
            n3 = n - n1 - n2
            if n3 not in dict(c.windings):
                continue
            z3, d3 = model.holonomy(Germ(n3, z))
            z23, d23 = model.holonomy(Germ(n2 + n3, z))
            A = a(n1, xt, x, z23, tau + np.log(d23))                          # over x1
            B = b(n2, x[:, None], x[None, :], z3, tau + np.log(d3))           # x1, x2
            C = c(n3, x, xs, z, tau)                                          # over x2
            total += float((A * w) @ B @ (w * C))
    return total


def _both_products(n_):
    g = gvnum.GridSpec(n_, n_, n_, 2.0)
    A, B, C = (k.sample(g) for k in (K1, K2, K3))
    rs = gvnum.Resampler(MODEL, g)
    left = gvnum.convolve(gvnum.convolve(A, B, MODEL, resampler=rs), C, MODEL, resampler=rs)
    right = gvnum.convolve(A, gvnum.convolve(B, C, MODEL, resampler=rs), MODEL, resampler=rs)
    return g, left, right


def test_associativity_against_triple_sum():
    gaps = []
    for n_ in (16, 32):
        g, left, right = _both_products(n_)
        assert left.windings == right.windings
        gaps.append(max(np.max(np.abs(left[n] - right[n])) for n in left.windings))
    # the association defect is a discretization error and must shrink under refinement
    assert gaps[0] / gaps[1] > 3.0
    scale = left.max_abs()
    rng = np.random.default_rng(1)
    for _ in range(6):
        n = int(rng.choice(sorted(left.windings)))
        i, j = rng.integers(10, 23, 2)
        k, l = int(rng.integers(0, g.nz)), int(rng.integers(12, 21))
        ref = triple_oracle(K1, K2, K3, MODEL, n, g.x[i], g.x[j], g.z[k], g.tau[l])
        assert abs(left[n][k, l, i, j] - ref) <= 1e-2 * scale
        assert abs(right[n][k, l, i, j] - ref) <= 1e-2 * scale


def test_formula_equivalence():
    g = gvnum.GridSpec(16, 16, 16, 2.0)
    a, b = K1.sample(g), K2.sample(g)
    assert abs(gvnum.phi_gv(a, b, MODEL).value - gvnum.phi_gv_logDelta(a, b, MODEL).value) <= 1e-10


def test_winding_zero_pairing_vanishes():
    g = gvnum.GridSpec(16, 16, 16, 2.0)
    a = gvnum.BumpKernel(windings=((0, 1.0),), z_mod=(0.5, 0.0)).sample(g)
    assert gvnum.phi_gv(a, a, MODEL).value == 0.0


def test_flat_model_pairing_vanishes():
    g = gvnum.GridSpec(16, 16, 16, 2.0)
    a, b, c = K1.sample(g), K2.sample(g), K3.sample(g)
    assert gvnum.phi_gv(a, b, ROT).value == 0.0
    assert gvnum.hochschild_b(a, b, c, ROT).value == 0.0


def test_tau_shift_invariance():
    g = gvnum.GridSpec(16, 16, 16, 2.0)
    shift = 2 * g.h_tau
    v0 = gvnum.phi_gv(K1.sample(g), K2.sample(g), MODEL).value
    v1 = gvnum.phi_gv(K1.shifted(shift).sample(g), K2.shifted(shift).sample(g), MODEL).value
    assert v0 != 0.0
    assert abs(v1 - v0) <= 1e-12 * max(1.0, abs(v0))


def test_antisymmetry_and_hochschild_small_at_moderate_grid():
    g = gvnum.GridSpec(32, 32, 32, 2.0)
    a, b, c = K1.sample(g), K2.sample(g), K3.sample(g)
    r = gvnum.antisymmetry(a, b, MODEL)
    assert abs(r.value) <= 1e-3 * max(abs(r.details["phi_ab"]), 1e-12) + 1e-6
    assert abs(gvnum.hochschild_b(a, b, c, MODEL).value) <= 1e-4


def test_refinement_study_orders():
    vals, orders = gvnum.refinement_study(lambda g: 1.0 / g.nx ** 2, [gvnum.GridSpec(n, 4, 4) for n in (8, 16, 32)])
    assert orders == pytest.approx([2.0, 2.0])
