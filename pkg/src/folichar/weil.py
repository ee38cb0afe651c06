"""gl(q) structure, the Weil algebra W(gl(q)), Chern and transgression forms, WO_q."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from gmpy2 import mpq

from .gca import (AlgebraError, AlgebraHom, DerivationSpec, Family, Func, FuncKind, Gen,
                  GradedElement, capped_wedge, derive, lin_comb, make_derivation, wedge)

Z = GradedElement.zero


class MatrixForm:
    """Square matrix of GradedElements (entries share a degree or are zero)."""

    __slots__ = ("q", "rows")

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        self.q = len(self.rows)
        if any(len(r) != self.q for r in self.rows):
            raise ValueError("MatrixForm must be square")

    @classmethod
    def zeros(cls, q: int) -> "MatrixForm":
        return cls([[Z() for _ in range(q)] for _ in range(q)])

    @classmethod
    def from_function(cls, q: int, fn) -> "MatrixForm":
        """Entries ``fn(a, b)`` with 1-based indices."""
        return cls([[fn(a, b) for b in range(1, q + 1)] for a in range(1, q + 1)])

    @classmethod
    def constant(cls, M) -> "MatrixForm":
        return cls([[GradedElement.scalar(x) for x in r] for r in M])

    def __getitem__(self, ab):
        a, b = ab
        return self.rows[a - 1][b - 1]

    def map(self, fn) -> "MatrixForm":
        return MatrixForm([[fn(x) for x in r] for r in self.rows])

    def __add__(self, other: "MatrixForm"):
        return MatrixForm([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "MatrixForm"):
        return MatrixForm([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def scale(self, c) -> "MatrixForm":
        return self.map(lambda x: x * c)

    def matmul(self, other: "MatrixForm", caps=None) -> "MatrixForm":
        q = self.q
        mul = wedge if caps is None else (lambda x, y: capped_wedge(x, y, caps))
        rows = []
        for a in range(q):
            row = []
            for b in range(q):
                acc = Z()
                for c in range(q):
                    x, y = self.rows[a][c], other.rows[c][b]
                    if x and y:
                        acc = acc + mul(x, y)
                row.append(acc)
            rows.append(row)
        return MatrixForm(rows)

    def __matmul__(self, other):
        return self.matmul(other)

    def power(self, n: int, caps=None) -> "MatrixForm":
        if n < 0:
            raise ValueError("negative power")
        out = MatrixForm.constant([[int(a == b) for b in range(self.q)] for a in range(self.q)])
        for _ in range(n):
            out = out.matmul(self, caps)
        return out

    def transpose(self) -> "MatrixForm":
        return MatrixForm(list(zip(*self.rows)))

    def trace(self) -> GradedElement:
        acc = Z()
        for a in range(self.q):
            acc = acc + self.rows[a][a]
        return acc

    def entries(self):
        for r in self.rows:
            yield from r

    def is_zero(self) -> bool:
        return all(not x for x in self.entries())

    def __eq__(self, other):
        return isinstance(other, MatrixForm) and self.rows == other.rows

    def __repr__(self):
        return f"MatrixForm(q={self.q}, rows={self.rows!r})"


def sym_antisym_split(M: MatrixForm) -> tuple:
    """Return ``(M_o, M_s)``, antisymmetric and symmetric parts."""
    T = M.transpose()
    half = mpq(1, 2)
    return (M - T).scale(half), (M + T).scale(half)


def derive_matrix(D: DerivationSpec, M: MatrixForm) -> MatrixForm:
    return M.map(lambda x: derive(D, x))


# ---------------------------------------------------------------- gl(q)

@dataclass(frozen=True)
class LieBasis:
    q: int
    basis: tuple            # ((a, b), ...) 1-based, E_ab
    structure_constants: dict  # (k, i, j) -> f^k_ij, nonzero only

    @cached_property
    def index(self) -> dict:
        return {ab: i for i, ab in enumerate(self.basis)}

    def f(self, k: int, i: int, j: int):
        return self.structure_constants.get((k, i, j), mpq(0))

    def matrix(self, i: int) -> list:
        a, b = self.basis[i]
        return [[int((r, s) == (a, b)) for s in range(1, self.q + 1)] for r in range(1, self.q + 1)]

    @cached_property
    def so_basis(self) -> tuple:
        """Matrices E_ab - E_ba for a < b."""
        q = self.q
        out = []
        for a in range(1, q + 1):
            for b in range(a + 1, q + 1):
                M = [[0] * q for _ in range(q)]
                M[a - 1][b - 1] = 1
                M[b - 1][a - 1] = -1
                out.append(M)
        return tuple(out)

    @cached_property
    def gl_basis(self) -> tuple:
        return tuple(self.matrix(i) for i in range(len(self.basis)))


def _bracket_coords(q, ab, cd):
    (a, b), (c, d) = ab, cd
    out = {}
    if b == c:
        out[(a, d)] = out.get((a, d), 0) + 1
    if d == a:
        out[(c, b)] = out.get((c, b), 0) - 1
    return {k: v for k, v in out.items() if v}


def make_gl(q: int) -> LieBasis:
    if q < 1:
        raise ValueError("q must be positive")
    basis = tuple((a, b) for a in range(1, q + 1) for b in range(1, q + 1))
    idx = {ab: i for i, ab in enumerate(basis)}
    f = {}
    for i, j in product(range(len(basis)), repeat=2):
        for ab, v in _bracket_coords(q, basis[i], basis[j]).items():
            f[(idx[ab], i, j)] = mpq(v)
    L = LieBasis(q, basis, f)
    _check_lie(L)
    return L


def _check_lie(L: LieBasis) -> None:
    n = len(L.basis)
    for (k, i, j), v in L.structure_constants.items():
        if L.f(k, j, i) != -v:
            raise AlgebraError("structure constants are not antisymmetric")
    # Jacobi: sum_m f^m_ij f^l_mk + cyclic = 0
    br = {}
    for (k, i, j), v in L.structure_constants.items():
        br.setdefault((i, j), {})[k] = v
    for i, j, k in product(range(n), repeat=3):
        tot = {}
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            for m, v in br.get((x, y), {}).items():
                for l, w in br.get((m, z), {}).items():
                    tot[l] = tot.get(l, 0) + v * w
        if any(tot.values()):
            raise AlgebraError(f"Jacobi identity fails for {(i, j, k)}")


# ---------------------------------------------------------------- Weil algebra

def omega_gen(a: int, b: int) -> Gen:
    return Gen(Family.WEIL_OMEGA, "w", (a, b), 1)


def curv_gen(a: int, b: int) -> Gen:
    return Gen(Family.WEIL_CURV, "W", (a, b), 2)


@dataclass(frozen=True)
class WeilContext:
    lie: LieBasis
    omega: MatrixForm
    Omega: MatrixForm
    d: DerivationSpec

    @property
    def q(self) -> int:
        return self.lie.q

    def generators(self) -> list:
        return [omega_gen(a, b) for a, b in self.lie.basis] + [curv_gen(a, b) for a, b in self.lie.basis]

    def contraction(self, X) -> DerivationSpec:
        """i_X for a rational q x q matrix X: i_X(w_ab) = X_ab, i_X(W_ab) = 0."""
        imgs = {}
        for a, b in self.lie.basis:
            imgs[omega_gen(a, b)] = GradedElement.scalar(X[a - 1][b - 1])
            imgs[curv_gen(a, b)] = Z()
        return make_derivation(-1, imgs)

    def iX(self, i: int) -> DerivationSpec:
        return self.contraction(self.lie.matrix(i))


def weil_context(L: LieBasis) -> WeilContext:
    """Build W(gl(q)) with d from the structure constants and verify d^2 = 0."""
    half = mpq(1, 2)
    gens_w = [omega_gen(a, b) for a, b in L.basis]
    gens_W = [curv_gen(a, b) for a, b in L.basis]
    by_k: dict = {}
    for (k, i, j), v in L.structure_constants.items():
        by_k.setdefault(k, []).append((i, j, v))
    dimg = {}
    for k in range(len(L.basis)):
        terms = by_k.get(k, [])
        dimg[gens_w[k]] = GradedElement.gen(gens_W[k]) - lin_comb(
            (half * v, GradedElement.gen(gens_w[i]) * GradedElement.gen(gens_w[j])) for i, j, v in terms)
        dimg[gens_W[k]] = lin_comb(
            (v, GradedElement.gen(gens_W[i]) * GradedElement.gen(gens_w[j])) for i, j, v in terms)
    d = make_derivation(1, dimg)
    q = L.q
    ctx = WeilContext(L,
                      MatrixForm.from_function(q, lambda a, b: GradedElement.gen(omega_gen(a, b))),
                      MatrixForm.from_function(q, lambda a, b: GradedElement.gen(curv_gen(a, b))),
                      d)
    bad = [g for g in ctx.generators() if derive(d, derive(d, GradedElement.gen(g)))]
    if bad:
        raise AlgebraError(f"d^2 != 0 on {[g.label() for g in bad]}")
    return ctx


def lie_LX(ctx: WeilContext, X) -> DerivationSpec:
    """L_X = i_X d + d i_X; on generators i_X(g) is a constant, so L_X(g) = i_X(dg).

    ``X`` is either a basis index or a rational matrix.
    """
    iX = ctx.iX(X) if isinstance(X, int) else ctx.contraction(X)
    imgs = {}
    for g in ctx.generators():
        e = GradedElement.gen(g)
        imgs[g] = derive(iX, derive(ctx.d, e)) + derive(ctx.d, derive(iX, e))
    return make_derivation(0, imgs)


def chern_c(ctx: WeilContext, i: int) -> GradedElement:
    if not 1 <= i <= ctx.q:
        raise ValueError(f"c_{i} undefined for q={ctx.q}")
    return ctx.Omega.power(i).trace()


HOMOTOPY = Func(FuncKind.SIMPLEX_PARAM, "s")


def integrate_unit(a: GradedElement, f: Func = HOMOTOPY) -> GradedElement:
    """Integrate the polynomial dependence on ``f`` over [0, 1]."""
    out = {}
    for (funcs, word), c in a.terms.items():
        p = funcs.count(f)
        rest = tuple(x for x in funcs if x != f)
        key = (rest, word)
        v = out.get(key, 0) + c / (p + 1)
        out[key] = v
    return GradedElement({k: v for k, v in out.items() if v}, _trusted=True)


def transgression_h(ctx: WeilContext, i: int) -> GradedElement:
    """h_i = i * Tr int_0^1 w_s (t W_s + W_o + (t^2 - 1) w_s^2)^(i-1) dt."""
    if i % 2 == 0 or not 1 <= i <= ctx.q:
        raise ValueError(f"h_{i} needs odd 1 <= i <= q={ctx.q}")
    w_o, w_s = sym_antisym_split(ctx.omega)
    W_o, W_s = sym_antisym_split(ctx.Omega)
    t = GradedElement.func(HOMOTOPY)
    ws2 = w_s @ w_s
    M = W_s.map(lambda x: t * x) + W_o + ws2.map(lambda x: (t * t - 1) * x)
    integrand = (w_s @ M.power(i - 1)).trace()
    return integrate_unit(integrand) * i


def is_basic(a: GradedElement, ctx: WeilContext, contract, invariance=None) -> bool:
    """True iff i_X a = 0 for X in ``contract`` and L_X a = 0 for X in ``invariance``.

    ``invariance`` defaults to the full gl(q) basis.
    """
    if invariance is None:
        invariance = ctx.lie.gl_basis
    for X in contract:
        if derive(ctx.contraction(X), a):
            return False
    for X in invariance:
        if derive(lie_LX(ctx, X), a):
            return False
    return True


# ---------------------------------------------------------------- WO_q

def h_gen(i: int) -> Gen:
    return Gen(Family.WO_TRANSGRESSION, "h", (i,), 2 * i - 1)


def c_gen(i: int) -> Gen:
    return Gen(Family.WO_CHERN, "c", (i,), 2 * i)


WO_FAMILIES = frozenset({Family.WO_TRANSGRESSION, Family.WO_CHERN})


def wo_d(q: int) -> DerivationSpec:
    imgs = {}
    for i in range(1, q + 1):
        imgs[c_gen(i)] = Z()
        if i % 2:
            imgs[h_gen(i)] = GradedElement.gen(c_gen(i))
    return make_derivation(1, imgs)


@dataclass(frozen=True)
class TruncationPolicy:
    q: int

    def c_degree(self, word: tuple) -> int:
        return sum(g.degree for g in word if g.family == Family.WO_CHERN)


def truncate(a: GradedElement, p: TruncationPolicy) -> GradedElement:
    for g in a.generators():
        if g.family not in WO_FAMILIES:
            raise AlgebraError(f"{g.label()} is not in the h/c alphabet")
    return a.filter(lambda f, w: p.c_degree(w) <= 2 * p.q)


def wo_to_weil(ctx: WeilContext) -> AlgebraHom:
    """The inclusion of WO_q into W(gl(q)): h_i -> transgression, c_i -> Tr(W^i)."""
    imgs = {}
    for i in range(1, ctx.q + 1):
        imgs[c_gen(i)] = chern_c(ctx, i)
        if i % 2:
            imgs[h_gen(i)] = transgression_h(ctx, i)
    return AlgebraHom(imgs)


_FACTOR = re.compile(r"^([hc])(\d+)(?:\^(\d+))?$")


class ParseError(ValueError):
    pass


def parse_wo_word(expr: str, q: int | None = None) -> list:
    """Parse ``h1*c1^2`` into ``[('h', 1), ('c', 1), ('c', 1)]`` with range checks."""
    out = []
    for raw in expr.replace(" ", "").split("*"):
        m = _FACTOR.match(raw)
        if not m:
            raise ParseError(f"cannot parse factor {raw!r}")
        kind, i, e = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if i < 1 or e < 1:
            raise ParseError(f"bad index or exponent in {raw!r}")
        if q is not None and i > q:
            raise ParseError(f"{kind}{i} undefined for q={q}")
        if kind == "h" and i % 2 == 0:
            raise ParseError(f"h{i}: transgressions exist only for odd index")
        if kind == "h" and e > 1:
            raise ParseError(f"{raw}: odd generator squares to zero")
        out.extend([(kind, i)] * e)
    return out


def wo_element(factors) -> GradedElement:
    gens = [h_gen(i) if k == "h" else c_gen(i) for k, i in factors]
    return GradedElement.monomial(1, gens=gens)
