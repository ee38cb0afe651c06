"""Discretized convolution algebra on the suspension frame groupoid and the
Godbillon-Vey pairing.

An arrow is ``u = (n, x_t, x_s, z, tau)``: winding n, target and source leaf
coordinates, source transverse coordinate z and source frame tau = log t.  Its
target frame is ``(f^n z, tau + log Delta_n(z))`` and the leafwise density dx
trivializes half-densities, so kernels are plain functions.

Samples are stored per winding as arrays indexed ``[z, tau, x_t, x_s]`` so that
transverse resampling and the leafwise contraction are batched matrix products.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .folmodel import Germ, SuspensionModel, TWO_PI, simpson_weights


class SupportOverflowError(ValueError):
    pass


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    nx: int = 64      # Simpson intervals in each leaf coordinate
    nz: int = 64      # periodic nodes on the circle
    nt: int = 32      # Simpson intervals in tau
    tau_max: float = 3.0

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.nx + 1)

    @property
    def z(self) -> np.ndarray:
        return np.arange(self.nz) * (TWO_PI / self.nz)

    @property
    def tau(self) -> np.ndarray:
        return np.linspace(-self.tau_max, self.tau_max, self.nt + 1)

    @property
    def h_tau(self) -> float:
        return 2 * self.tau_max / self.nt

    def halved(self, factor: int = 2) -> "GridSpec":
        return replace(self, nx=self.nx // factor, nz=self.nz // factor, nt=self.nt // factor)


def bump(x, center: float, width: float):
    """exp(1 - 1/(1 - s^2)) for |s| < 1, s = (x - center)/width; zero outside, 1 at the center."""
    s = (np.asarray(x, dtype=float) - center) / width
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def periodic_bump(z, center: float, width: float):
    d = np.angle(np.exp(1j * (np.asarray(z, dtype=float) - center)))
    return bump(d, 0.0, width)


@dataclass(frozen=True)
class BumpKernel:
    """Closed-form kernel amp_n * B(x_t) B(x_s) Z(z) B(tau).

    ``z`` is a (center, width) bump or None for a z-independent profile; in both
    cases ``z_mod = (m, phase)`` multiplies by 1 + m cos(z - phase).  ``tau_shift``
    moves the tau-window by a per-winding offset ``tau_shift * n``.
    """

    windings: tuple = ((0, 1.0),)
    xt: tuple = (0.5, 0.3)
    xs: tuple = (0.5, 0.3)
    z: tuple | None = None
    tau: tuple = (0.0, 1.2)
    z_mod: tuple = (0.0, 0.0)
    tau_shift: float = 0.0

    @property
    def support(self) -> frozenset:
        return frozenset(n for n, amp in self.windings if amp)

    def __call__(self, n: int, xt, xs, z, tau):
        amp = dict(self.windings).get(n, 0.0)
        if not amp:
            return np.zeros(np.broadcast(xt, xs, z, tau).shape)
        zpart = 1.0 if self.z is None else periodic_bump(z, *self.z)
        m, ph = self.z_mod
        zpart = zpart * (1.0 + m * np.cos(np.asarray(z) - ph))
        tc, tw = self.tau
        return amp * bump(xt, *self.xt) * bump(xs, *self.xs) * zpart * bump(tau, tc + self.tau_shift * n, tw)

    def sample(self, grid: GridSpec, window=None) -> "KernelGrid":
        Z, T, XT, XS = np.meshgrid(grid.z, grid.tau, grid.x, grid.x, indexing="ij", sparse=True)
        samples = {n: np.ascontiguousarray(self(n, XT, XS, Z, T)) for n in sorted(self.support)}
        return KernelGrid(grid, samples, window=frozenset(window) if window is not None else None, source=self)

    def shifted(self, dtau: float) -> "BumpKernel":
        return replace(self, tau=(self.tau[0] + dtau, self.tau[1]))


@dataclass
class KernelGrid:
    grid: GridSpec
    samples: dict
    window: frozenset | None = None
    source: object = None

    def __post_init__(self):
        self.check_support()

    @property
    def windings(self) -> frozenset:
        return frozenset(self.samples)

    def check_support(self) -> None:
        if self.window is not None and not self.windings <= self.window:
            raise SupportOverflowError(f"windings {sorted(self.windings - self.window)} outside window")
        for n, arr in self.samples.items():
            if arr.shape != (self.grid.nz, self.grid.nt + 1, self.grid.nx + 1, self.grid.nx + 1):
                raise GridMismatchError("sample array does not match grid")
            if np.any(arr[:, 0]) or np.any(arr[:, -1]):
                raise SupportOverflowError(f"winding {n}: support reaches the tau boundary")

    def __getitem__(self, n: int) -> np.ndarray:
        return self.samples[n]

    def max_abs(self) -> float:
        return max((float(np.max(np.abs(a))) for a in self.samples.values()), default=0.0)


def unit_approximation(grid: GridSpec, eps: float, plateau: tuple = (-1.2, 1.2, 0.4)) -> KernelGrid:
    """Winding-0 kernel eta_eps(x_t - x_s) * P(tau), P a smooth plateau equal to 1 on [lo, hi].

    eta is rescaled symmetrically (``D eta D``) until every row and column has unit
    mass under the leafwise Simpson weights, so both one-sided products reproduce
    constants exactly.
    """
    lo, hi, ramp = plateau
    x = grid.x
    eta = bump(x[:, None] - x[None, :], 0.0, eps)
    eta = _balance(eta, simpson_weights(grid.nx))
    P = _plateau(grid.tau, lo, hi, ramp)
    arr = np.broadcast_to(P[None, :, None, None] * eta[None, None], (grid.nz, grid.nt + 1, grid.nx + 1, grid.nx + 1))
    return KernelGrid(grid, {0: np.ascontiguousarray(arr)})


def _balance(K: np.ndarray, w: np.ndarray, tol: float = 1e-14, iters: int = 500) -> np.ndarray:
    """Symmetric Sinkhorn scaling: D K D with (D K D) w = 1."""
    d = 1.0 / np.sqrt(K @ w)
    for _ in range(iters):
        d_new = np.sqrt(d / ((K * w[None, :]) @ d))
        if np.max(np.abs(d_new - d) / d) < tol:
            d = d_new
            break
        d = d_new
    return d[:, None] * K * d[None, :]


def _plateau(tau, lo, hi, ramp):
    def step(s):  # smooth 0 -> 1 on [0, 1]
        s = np.clip(s, 0.0, 1.0)
        a = np.where(s > 0, np.exp(-1.0 / np.maximum(s, 1e-300)), 0.0)
        b = np.where(s < 1, np.exp(-1.0 / np.maximum(1 - s, 1e-300)), 0.0)
        return a / (a + b)
    return step((tau - (lo - ramp)) / ramp) * step(((hi + ramp) - tau) / ramp)


# ---------------------------------------------------------------- transverse resampling

def trig_interp_matrix(nz: int, targets) -> np.ndarray:
    """Periodic trigonometric interpolation from nz equispaced nodes to ``targets``."""
    if nz % 2:
        raise ValueError("nz must be even")
    nodes = np.arange(nz) * (TWO_PI / nz)
    D = np.asarray(targets, dtype=float)[:, None] - nodes[None, :]
    M = np.ones_like(D)
    for k in range(1, nz // 2):
        M += 2.0 * np.cos(k * D)
    M += np.cos((nz // 2) * D)
    return M / nz


def lagrange_matrix(nodes: np.ndarray, targets, points: int = 4) -> np.ndarray:
    """Local Lagrange interpolation (``points`` nodes) on a uniform grid; zero outside the grid."""
    h = nodes[1] - nodes[0]
    n = len(nodes)
    targets = np.asarray(targets, dtype=float)
    M = np.zeros((len(targets), n))
    pos = (targets - nodes[0]) / h
    for r, p in enumerate(pos):
        if p < -1e-12 or p > n - 1 + 1e-12:
            continue
        j0 = int(np.clip(np.floor(p) - (points // 2 - 1), 0, n - points))
        idx = np.arange(j0, j0 + points)
        for a in range(points):
            w = 1.0
            for b in range(points):
                if a != b:
                    w *= (p - idx[b]) / (idx[a] - idx[b])
            M[r, idx[a]] = w
    return M


class Resampler:
    """Evaluates a sampled winding slice at the target of the arrows (n, ., ., z, tau)."""

    def __init__(self, model: SuspensionModel, grid: GridSpec, points: int = 4):
        self.model = model
        self.grid = grid
        self.points = points
        self._cache: dict = {}

    def operators(self, n: int):
        ops = self._cache.get(n)
        if ops is None:
            g = self.grid
            zt, der = self.model.holonomy(Germ(n, g.z))
            Tz = trig_interp_matrix(g.nz, zt)
            logd = np.log(der)
            Tt = np.stack([lagrange_matrix(g.tau, g.tau + s, self.points) for s in logd])
            ops = (Tz, Tt)
            self._cache[n] = ops
        return ops

    def __call__(self, arr: np.ndarray, n: int) -> np.ndarray:
        """out[i, j] = arr evaluated at (f^n z_i, tau_j + log Delta_n(z_i))."""
        if n == 0:
            return arr
        Tz, Tt = self.operators(n)
        nz, ntau = arr.shape[:2]
        tmp = (Tz @ arr.reshape(nz, -1)).reshape(nz, ntau, -1)
        return np.matmul(Tt, tmp).reshape(arr.shape)


def _check_compatible(*ks: KernelGrid):
    g = ks[0].grid
    if any(k.grid != g for k in ks):
        raise GridMismatchError("kernels live on different grids")
    return g


def convolve(a: KernelGrid, b: KernelGrid, model: SuspensionModel, windings=None, window=None,
             resampler: Resampler | None = None) -> KernelGrid:
    """(a*b)(n, x_t, x_s, z, tau) = sum_{n1+n2=n} int dx_m a(n1, x_t, x_m, f^{n2} z, tau + log Delta_{n2}(z))
    b(n2, x_m, x_s, z, tau).

    ``windings`` restricts which output windings are computed; ``window`` is the
    allowed support (overflow raises).
    """
    g = _check_compatible(a, b)
    rs = resampler or Resampler(model, g)
    wx = simpson_weights(g.nx)
    out: dict = {}
    resampled: dict = {}
    for n2 in sorted(b.windings):
        for n1 in sorted(a.windings):
            n = n1 + n2
            if windings is not None and n not in windings:
                continue
            if window is not None and n not in window:
                raise SupportOverflowError(f"product winding {n} outside window {sorted(window)}")
            key = (n1, n2)
            if key not in resampled:
                resampled[key] = rs(a[n1], n2) * wx[None, None, None, :]
            prod = np.matmul(resampled.pop(key), b[n2])
            if n in out:
                out[n] += prod
            else:
                out[n] = prod
    return KernelGrid(g, out, window=frozenset(window) if window is not None else None)


# ---------------------------------------------------------------- GV pairing

@dataclass
class PairingReport:
    value: float
    grid: GridSpec
    order: float | None = None
    tolerance: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self):
        if self.tolerance is None:
            return None
        return abs(self.value) <= self.tolerance


def _weights(g: GridSpec):
    wz = TWO_PI / g.nz
    wt = simpson_weights(g.nt, 2 * g.tau_max)
    wx = simpson_weights(g.nx)
    return wz, wt, wx


def _pair(a0: KernelGrid, a1: KernelGrid, model: SuspensionModel, delta_fn, resampler=None) -> float:
    """-sum_n int a0(u^{-1}) a1(u) w(u) dx_t dx_s dz dtau with u = (n, x_t, x_s, z, tau)."""
    g = _check_compatible(a0, a1)
    rs = resampler or Resampler(model, g)
    wz, wt, wx = _weights(g)
    W = wz * wt[:, None, None] * wx[None, :, None] * wx[None, None, :]
    total = 0.0
    for n in sorted(a1.windings):
        if -n not in a0.windings:
            continue
        dlt = np.asarray(delta_fn(Germ(n, g.z)), dtype=float)
        if not np.any(dlt):
            continue
        inv = rs(a0[-n], n).swapaxes(2, 3)  # a0(-n, x_s, x_t, f^n z, tau + log Delta)
        per_z = np.einsum("ztab,ztab,tab->z", inv, a1[n], W, optimize=True)
        total += float(np.dot(per_z, dlt))
    return -total


def phi_gv(a0: KernelGrid, a1: KernelGrid, model: SuspensionModel, resampler=None) -> PairingReport:
    return PairingReport(_pair(a0, a1, model, model.delta_analytic, resampler), a0.grid)


def phi_gv_logDelta(a0: KernelGrid, a1: KernelGrid, model: SuspensionModel, resampler=None) -> PairingReport:
    """Same pairing with delta replaced by d/dz log Delta, differentiated from ``modular``."""
    return PairingReport(_pair(a0, a1, model, model.delta_complex_step, resampler), a0.grid)


def needed_windings(left: KernelGrid, right: KernelGrid) -> set:
    """Windings of a product that can meet ``right`` in the pairing phi(product, right)."""
    return {-n for n in right.windings}


def hochschild_b(a0: KernelGrid, a1: KernelGrid, a2: KernelGrid, model: SuspensionModel) -> PairingReport:
    """phi(a0*a1, a2) - phi(a0, a1*a2) + phi(a2*a0, a1)."""
    g = _check_compatible(a0, a1, a2)
    rs = Resampler(model, g)
    p01 = convolve(a0, a1, model, windings={-n for n in a2.windings}, resampler=rs)
    t1 = _pair(p01, a2, model, model.delta_analytic, rs)
    del p01
    p12 = convolve(a1, a2, model, windings={n for n in a0.windings} | {-n for n in a0.windings}, resampler=rs)
    t2 = _pair(a0, p12, model, model.delta_analytic, rs)
    del p12
    p20 = convolve(a2, a0, model, windings={-n for n in a1.windings}, resampler=rs)
    t3 = _pair(p20, a1, model, model.delta_analytic, rs)
    del p20
    return PairingReport(t1 - t2 + t3, g, details={"terms": (t1, t2, t3)})


def antisymmetry(a: KernelGrid, b: KernelGrid, model: SuspensionModel) -> PairingReport:
    rs = Resampler(model, a.grid)
    x, y = _pair(a, b, model, model.delta_analytic, rs), _pair(b, a, model, model.delta_analytic, rs)
    return PairingReport(x + y, a.grid, details={"phi_ab": x, "phi_ba": y})


def refinement_study(fn, grids) -> tuple:
    """Evaluate ``fn(grid)`` on successively halved grids; returns (values, observed orders)."""
    vals = [fn(g) for g in grids]
    orders = []
    for e1, e2 in zip(vals, vals[1:]):
        e1, e2 = abs(e1), abs(e2)
        orders.append(float("inf") if e2 == 0 else float(np.log2(e1 / e2)) if e1 else float("nan"))
    return vals, orders
