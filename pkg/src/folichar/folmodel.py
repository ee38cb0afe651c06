"""Suspension of a circle diffeomorphism with an explicit Bott connection.

The mapping torus of f is glued along the seam (x=1, z) ~ (x=0, f(z)).  On the
positive frame bundle (coordinate t > 0 on the normal line) the connection is
``alpha = dt/t + A(x, z) dz`` with ``A = psi(x) (log f')'(z)``, so the curvature is
``psi'(x) (log f')'(z) dx ^ dz``.  All evaluators accept numpy arrays and complex
arguments (the latter for complex-step differentiation).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import NamedTuple

import numpy as np

TWO_PI = 2.0 * np.pi


class DiffeoError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class CircleDiffeo:
    """f(z) = z + sum_n (a_n sin nz + b_n cos nz); ``b[0]`` is a rigid rotation."""

    a: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)
    newton_tol: float = 1e-13
    check_points: int = 4096

    def __post_init__(self):
        zs = np.linspace(0.0, TWO_PI, self.check_points, endpoint=False)
        dev = np.max(np.abs(self.df(zs) - 1.0))
        if dev >= 1.0:
            raise DiffeoError(f"sup|f'-1| = {dev:.6g} >= 1: not an admissible diffeomorphism")
        if np.min(self.df(zs)) <= 0:
            raise DiffeoError("f' must be positive")

    def _series(self, z, order: int):
        z = np.asarray(z)
        out = np.zeros_like(z, dtype=np.result_type(z, float))
        # d^k/dz^k sin(nz) = n^k sin(nz + k pi/2), likewise for cos
        shift = order * np.pi / 2
        for n, c in self.a.items():
            if c and (n or order == 0):
                out = out + c * n ** order * np.sin(n * z + shift)
        for n, c in self.b.items():
            if c and (n or order == 0):
                out = out + c * n ** order * np.cos(n * z + shift)
        return out

    def f(self, z):
        return z + self._series(z, 0)

    def df(self, z):
        return 1.0 + self._series(z, 1)

    def d2f(self, z):
        return self._series(z, 2)

    def d3f(self, z):
        return self._series(z, 3)

    def dlog(self, z):
        """(log f')'(z)."""
        return self.d2f(z) / self.df(z)

    def inverse(self, w):
        """f^{-1}(w) by Newton iteration seeded with w."""
        w = np.asarray(w)
        y = w.astype(np.result_type(w, float), copy=True)
        for _ in range(100):
            step = (self.f(y) - w) / self.df(y)
            y = y - step
            if np.all(np.abs(step) < self.newton_tol):
                return y
        raise ConvergenceError("Newton solve for the inverse diffeomorphism did not converge")

    @property
    def is_rotation(self) -> bool:
        return not any(c for n, c in self.a.items() if n) and not any(c for n, c in self.b.items() if n)


def smoothstep(order: int):
    """Polynomial psi on [0,1] with psi(0)=0, psi(1)=1 and ``order`` vanishing derivatives at both ends."""
    if order < 1:
        raise ValueError("smoothstep order must be at least 1")
    p = order
    coeffs = np.zeros(2 * p + 2)
    for k in range(p + 1):
        coeffs[p + 1 + k] = comb(p + k, k) * comb(2 * p + 1, p - k) * (-1) ** k
    poly = np.polynomial.Polynomial(coeffs)
    return poly, poly.deriv()


class Germ(NamedTuple):
    n: int
    z: float

    def compose(self, other: "Germ", model: "SuspensionModel") -> "Germ":
        """self o other, defined when self starts where other ends."""
        return Germ(self.n + other.n, other.z)

    @staticmethod
    def pair(n1: int, n2: int, z, model: "SuspensionModel"):
        """Composable (g1, g2) with g2 = (n2, z) and g1 based at the endpoint of g2."""
        end, _ = model.holonomy(Germ(n2, z))
        return Germ(n1, end), Germ(n2, z)


def simpson_weights(n: int, length: float = 1.0) -> np.ndarray:
    """Composite Simpson weights for n (even) intervals, n+1 nodes."""
    if n < 2 or n % 2:
        raise ValueError("Simpson needs an even number (>= 2) of intervals")
    w = np.ones(n + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (length / n / 3.0)


@dataclass
class SuspensionModel:
    diffeo: CircleDiffeo
    profile_order: int = 2
    steps: int = 1000

    def __post_init__(self):
        self.psi, self.dpsi = smoothstep(self.profile_order)

    # connection and curvature
    def bott_field(self, x, z):
        return self.psi(x) * self.diffeo.dlog(z)

    def curvature_density(self, x, z):
        """Coefficient rho of R = rho dx ^ dz."""
        return self.dpsi(x) * self.diffeo.dlog(z)

    def connection(self, x, z, t, vec):
        """alpha(vec) at frame point (x, z, t); vec = (vx, vz, vt)."""
        vx, vz, vt = vec
        return vt / t + self.bott_field(x, z) * vz

    def curvature_form(self, x, z, U, V):
        return self.curvature_density(x, z) * (U[0] * V[1] - U[1] * V[0])

    # holonomy
    def holonomy(self, g: Germ):
        """(f^n(z), (f^n)'(z))."""
        f = self.diffeo
        z = np.asarray(g.z)
        y, der = z, np.ones_like(z, dtype=np.result_type(z, float))
        if g.n >= 0:
            for _ in range(g.n):
                der = der * f.df(y)
                y = f.f(y)
        else:
            for _ in range(-g.n):
                y = f.inverse(y)
                der = der / f.df(y)
        return y, der

    def modular(self, g: Germ):
        return self.holonomy(g)[1]

    def inverse(self, g: Germ) -> Germ:
        return Germ(-g.n, self.holonomy(g)[0])

    def delta_analytic(self, g: Germ):
        """d/dz log (f^n)'(z) as a chain-rule sum over the intermediate points."""
        f = self.diffeo
        z = np.asarray(g.z)
        acc = np.zeros_like(z, dtype=np.result_type(z, float))
        y, der = z, np.ones_like(acc)
        for _ in range(abs(g.n)):
            if g.n > 0:
                acc = acc + f.dlog(y) * der
                der = der * f.df(y)
                y = f.f(y)
            else:
                yn = f.inverse(y)
                fp = f.df(yn)
                acc = acc - f.d2f(yn) / fp ** 2 * der
                der = der / fp
                y = yn
        return acc

    def delta_complex_step(self, g: Germ, h: float = 1e-20):
        """d/dz log Delta by complex-step differentiation of ``modular``."""
        z = np.asarray(g.z, dtype=float)
        return np.imag(np.log(self.modular(Germ(g.n, z + 1j * h)))) / h

    # leafwise paths
    def lap_points(self, g: Germ):
        """Transverse chart coordinate and transported factor on each lap of the path."""
        f = self.diffeo
        z0 = float(g.z)
        laps = []
        y, der = z0, 1.0
        for _ in range(abs(g.n)):
            if g.n > 0:
                laps.append((y, der, 1.0))
                der = der * float(f.df(y))
                y = float(f.f(y))
            else:
                y = float(f.inverse(y))
                der = der / float(f.df(y))
                laps.append((y, der, -1.0))
        return laps

    def path_integral_curvature(self, g: Germ, v: float = 1.0, steps: int | None = None,
                                leafwise=None, vertical=None, min_steps: int = 2) -> float:
        """Quadrature of R(gamma', X) along the leafwise path representing g.

        X is the parallel transport of ``v d/dz``; it stays constant inside a chart
        and is multiplied by f' at each seam.  ``leafwise`` / ``vertical`` are optional
        callables ``(lap, x) -> component`` added to X in the x and frame directions.
        """
        steps = self.steps if steps is None else steps
        if steps < min_steps or steps % 2:
            raise ConvergenceError(f"step count {steps} too small or odd for Simpson quadrature")
        xs = np.linspace(0.0, 1.0, steps + 1)
        w = simpson_weights(steps)
        total = 0.0
        for j, (y, factor, direction) in enumerate(self.lap_points(g)):
            gamma = (direction * np.ones_like(xs), np.zeros_like(xs), np.zeros_like(xs))
            X = [np.zeros_like(xs), v * factor * np.ones_like(xs), np.zeros_like(xs)]
            if leafwise is not None:
                X[0] = X[0] + leafwise(j, xs)
            if vertical is not None:
                X[2] = X[2] + vertical(j, xs)
            # backward laps: gamma' = -d/dx, parametrised by s = 1 - x
            integrand = self.curvature_form(xs, np.full_like(xs, y), gamma, X)
            total += float(np.dot(w, integrand))
        return total

    def endpoint_curvature(self, g: Germ, v: float = 1.0, vertical: float = 0.0, t: float = 1.0,
                           h: float = 1e-20) -> float:
        """alpha(dr X) - alpha(ds X) with ds X = (0, v, vertical) at the source frame (0, z, t).

        dr X is obtained by complex-step differentiation of the frame action
        (z, t) -> (f^n z, t (f^n)'(z)).
        """
        z = float(g.z)
        eps = 1j * h
        zc, tc = z + eps * v, t + eps * vertical
        val, der = self.holonomy(Germ(g.n, zc))
        tz = tc * der
        d_z, d_t = np.imag(val) / h, np.imag(tz) / h
        x_end = 0.0
        end = float(np.real(val))
        t_end = float(np.real(tz))
        target = self.connection(x_end, end, t_end, (0.0, d_z, d_t))
        source = self.connection(0.0, z, t, (0.0, v, vertical))
        return float(target - source)

    def action_matrix(self, g: Germ, t: float = 1.0) -> np.ndarray:
        """Triangular frame action [[1, t R^G(d/dz)], [0, 1]] at frame scale t."""
        return np.array([[1.0, t * self.endpoint_curvature(g)], [0.0, 1.0]])


def richardson_order(values) -> float:
    """Observed order from three successive halvings; inf when already at round-off."""
    a, b, c = values
    e1, e2 = abs(a - b), abs(b - c)
    scale = max(abs(c), 1.0)
    if e2 <= 1e-14 * scale:
        return float("inf")
    return float(np.log2(e1 / e2))
