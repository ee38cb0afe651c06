"""Nerve-level cochains: face substitutions, simplicial connections, simplex integration,
coboundary and cup product, characteristic cochains and the local Bott model.

Level-indexed symbols carry ``index = (level, vertex, ...)``; the maps p^k_i and the
face maps act purely by rewriting those two slots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

from gmpy2 import mpq

from .gca import (AlgebraError, AlgebraHom, Family, Func, FuncKind, Gen, GradedElement,
                  derive, family_count, hom_apply, lin_comb, make_derivation, wedge)
from .weil import (MatrixForm, WeilContext, c_gen, derive_matrix, h_gen, make_gl,
                   weil_context, wo_to_weil)

Z = GradedElement.zero
LEVEL_INDEXED = frozenset({Family.PULLBACK_1FORM, Family.PULLBACK_2FORM, Family.LEAFWISE_1FORM})
LEVEL_FREE = frozenset({Family.COORD_DZ, Family.MAURER_CARTAN})


class AlphabetError(AlgebraError):
    pass


# ---------------------------------------------------------------- symbols

def t_param(i: int) -> Func:
    return Func(FuncKind.SIMPLEX_PARAM, "t", (i,))


def dt_gen(i: int) -> Gen:
    return Gen(Family.SIMPLEX_DT, "dt", (i,), 1)


def alpha_gen(k: int, i: int, a: int = 1, b: int = 1) -> Gen:
    return Gen(Family.PULLBACK_1FORM, "a", (k, i, a, b), 1)


def dalpha_gen(k: int, i: int, a: int = 1, b: int = 1) -> Gen:
    return Gen(Family.PULLBACK_2FORM, "da", (k, i, a, b), 2)


def dz_gen(j: int) -> Gen:
    return Gen(Family.COORD_DZ, "dz", (j,), 1)


def mc_gen(a: int, b: int) -> Gen:
    return Gen(Family.MAURER_CARTAN, "m", (a, b), 1)


def coeff_func(k, i, a, b, j) -> Func:
    return Func(FuncKind.OPAQUE, "A", (k, i, a, b, j))


def transverse_func(k, i, a, b, j, l) -> Func:
    return Func(FuncKind.OPAQUE, "T", (k, i, a, b, j, l))


def leaf_gen(k, i, a, b, j) -> Gen:
    return Gen(Family.LEAFWISE_1FORM, "L", (k, i, a, b, j), 1)


# ---------------------------------------------------------------- levels and pullback families

@dataclass(frozen=True)
class LevelContext:
    k: int

    @property
    def t_params(self) -> list:
        return [t_param(i) for i in range(1, self.k + 1)]

    @property
    def dt_gens(self) -> list:
        return [dt_gen(i) for i in range(1, self.k + 1)]

    def t(self, i: int) -> GradedElement:
        """t_i as an element; t_0 = 1 - sum of the others."""
        if i == 0:
            return GradedElement.one() - lin_comb((1, GradedElement.func(f)) for f in self.t_params)
        return GradedElement.func(t_param(i))

    def dt(self, i: int) -> GradedElement:
        if i == 0:
            return -lin_comb((1, GradedElement.gen(g)) for g in self.dt_gens)
        return GradedElement.gen(dt_gen(i))

    def d_images(self) -> tuple:
        gens = {g: Z() for g in self.dt_gens}
        funcs = {t_param(i): GradedElement.gen(dt_gen(i)) for i in range(1, self.k + 1)}
        return gens, funcs


@dataclass
class PullbackFamily:
    """Free pullback alphabet: alpha_i = (p^k_i)^* alpha, with d(alpha_i) a fresh 2-form."""

    k: int
    q: int
    model: str = "formal"

    def __post_init__(self):
        q, k = self.q, self.k
        self.alphas = [MatrixForm.from_function(q, lambda a, b, i=i: GradedElement.gen(alpha_gen(k, i, a, b)))
                       for i in range(k + 1)]
        self.dalphas = [MatrixForm.from_function(q, lambda a, b, i=i: GradedElement.gen(dalpha_gen(k, i, a, b)))
                        for i in range(k + 1)]

    def d(self):
        lc = LevelContext(self.k)
        gens, funcs = lc.d_images()
        for i in range(self.k + 1):
            for a in range(1, self.q + 1):
                for b in range(1, self.q + 1):
                    gens[alpha_gen(self.k, i, a, b)] = GradedElement.gen(dalpha_gen(self.k, i, a, b))
                    gens[dalpha_gen(self.k, i, a, b)] = Z()
        return make_derivation(1, gens, funcs, check=False)


@dataclass
class LocalModel:
    """Local coordinates on the k-th nerve space near a Bott-connected foliation.

    alpha_i = sum_j A_i[a,b,j] dz^j + m_ab with opaque A, shared Maurer-Cartan m,
    and dA = L + sum_l T_l dz^l (L leafwise).  ``n_dz`` may exceed q to inspect
    monomials before dz-nilpotency cuts them.
    """

    q: int
    k: int
    n_dz: int | None = None
    model: str = "local"

    def __post_init__(self):
        if self.n_dz is None:
            self.n_dz = self.q
        q, k, n = self.q, self.k, self.n_dz
        self.dz = [GradedElement.gen(dz_gen(j)) for j in range(1, n + 1)]
        self.mc = MatrixForm.from_function(q, lambda a, b: GradedElement.gen(mc_gen(a, b)))
        self.alphas = []
        for i in range(k + 1):
            self.alphas.append(MatrixForm.from_function(
                q, lambda a, b, i=i: lin_comb((1, GradedElement.func(coeff_func(k, i, a, b, j)) * self.dz[j - 1])
                                              for j in range(1, n + 1)) + self.mc[a, b]))

    def d(self):
        q, k, n = self.q, self.k, self.n_dz
        gens, funcs = LevelContext(k).d_images()
        for j in range(1, n + 1):
            gens[dz_gen(j)] = Z()
        mm = self.mc @ self.mc
        for a in range(1, q + 1):
            for b in range(1, q + 1):
                gens[mc_gen(a, b)] = -mm[a, b]
                for i in range(k + 1):
                    for j in range(1, n + 1):
                        funcs[coeff_func(k, i, a, b, j)] = GradedElement.gen(leaf_gen(k, i, a, b, j)) + lin_comb(
                            (1, GradedElement.func(transverse_func(k, i, a, b, j, l)) * self.dz[l - 1])
                            for l in range(1, n + 1))
        return make_derivation(1, gens, funcs, check=False)


def simplicial_connection(fam, lc: LevelContext | None = None) -> MatrixForm:
    """alpha^(k) = sum_i t_i alpha_i = alpha_0 + sum_{i>=1} t_i (alpha_i - alpha_0)."""
    lc = lc or LevelContext(fam.k)
    if lc.k != fam.k:
        raise ValueError("level mismatch")
    A = fam.alphas[0]
    for i in range(1, fam.k + 1):
        ti = lc.t(i)
        A = A + (fam.alphas[i] - fam.alphas[0]).map(lambda x: ti * x)
    return A


def curvature(A: MatrixForm, d, caps=None) -> MatrixForm:
    """dA + A A."""
    dA = derive_matrix(d, A)
    return dA + A.matmul(A, caps)


# ---------------------------------------------------------------- integration over the simplex

def simplex_monomial_integral(k: int, exps) -> mpq:
    """int over {t_i >= 0, sum t_i <= 1} of prod t_i^{a_i} = prod a_i! / (k + sum a_i)!."""
    num = 1
    for a in exps:
        num *= factorial(a)
    return mpq(num, factorial(k + sum(exps)))


@dataclass(frozen=True)
class Cochain:
    level: int
    element: GradedElement
    model: str = "formal"

    @property
    def degree(self):
        return self.element.degree()

    def is_zero(self) -> bool:
        return self.element.is_zero()

    def __add__(self, other):
        _same(self, other)
        return Cochain(self.level, self.element + other.element, self.model)

    def __sub__(self, other):
        _same(self, other)
        return Cochain(self.level, self.element - other.element, self.model)

    def __mul__(self, c):
        return Cochain(self.level, self.element * c, self.model)

    __rmul__ = __mul__

    def dump(self) -> str:
        return self.element.dump()


def _same(a: Cochain, b: Cochain):
    if a.level != b.level:
        raise ValueError("cochains live on different levels")


def integrate_simplex(c, k: int | None = None, model: str | None = None) -> Cochain:
    """Fibre integral over the k-simplex.

    The simplex carries the orientation dt_0 ^ dt_1 ^ ... ^ dt_{k-1}, which equals
    (-1)^k dt_1 ^ ... ^ dt_k once dt_0 = -sum dt_i is substituted.
    """
    elem = c.element if isinstance(c, Cochain) else c
    if k is None:
        k = c.level
    if model is None:
        model = c.model if isinstance(c, Cochain) else "formal"
    top = tuple(dt_gen(i) for i in range(1, k + 1))
    params = [t_param(i) for i in range(1, k + 1)]
    orient = -1 if k % 2 else 1
    out: dict = {}
    for (funcs, word), coeff in elem.terms.items():
        if word[:k] != top or (len(word) > k and word[k].family == Family.SIMPLEX_DT):
            continue
        exps = [funcs.count(p) for p in params]
        rest = tuple(f for f in funcs if f.kind != FuncKind.SIMPLEX_PARAM)
        if len(rest) + sum(exps) != len(funcs):
            raise AlphabetError("unexpected simplex parameter")
        key = (rest, word[k:])
        out[key] = out.get(key, 0) + coeff * orient * simplex_monomial_integral(k, exps)
    return Cochain(k, GradedElement({kk: v for kk, v in out.items() if v}, _trusted=True), model)


# ---------------------------------------------------------------- face maps, coboundary, cup

def face_table(k: int) -> list:
    """For each face i of level k, the vertex map j -> j' with p^{k-1}_j o eps^k_i = p^k_{j'}."""
    if k < 1:
        raise ValueError("face maps start at level 1")
    tables = []
    for i in range(k + 1):
        if i == 0:
            tables.append({j: j + 1 for j in range(k)})
        elif i == k:
            tables.append({j: j for j in range(k)})
        else:
            tables.append({j: (j if j < i else j + 1) for j in range(k)})
    return tables


def reindex(elem: GradedElement, level: int, new_level: int, vmap) -> GradedElement:
    """Rewrite level-indexed symbols (level, j, ...) -> (new_level, vmap[j], ...)."""
    gimg = {}
    for g in elem.generators():
        if g.family in LEVEL_INDEXED:
            if g.index[0] != level:
                raise AlphabetError(f"{g.label()} does not live on level {level}")
            gimg[g] = GradedElement.gen(g._replace(index=(new_level, vmap[g.index[1]]) + g.index[2:]))
        elif g.family not in LEVEL_FREE:
            raise AlphabetError(f"{g.label()} has no face image")
    fimg = {}
    for f in elem.functions():
        if f.kind != FuncKind.OPAQUE or len(f.index) < 2:
            raise AlphabetError(f"{f.label()} has no face image")
        if f.index[0] != level:
            raise AlphabetError(f"{f.label()} does not live on level {level}")
        fimg[f] = GradedElement.func(f._replace(index=(new_level, vmap[f.index[1]]) + f.index[2:]))
    return hom_apply(AlgebraHom(gimg, fimg, fixed_families=LEVEL_FREE, check=False), elem)


def face_pullback(c: Cochain, i: int) -> Cochain:
    m = c.level + 1
    return Cochain(m, reindex(c.element, c.level, m, face_table(m)[i]), c.model)


def coboundary(c: Cochain) -> Cochain:
    """sum_i (-1)^i (eps^{m+1}_i)^* c."""
    m = c.level + 1
    tabs = face_table(m)
    acc = lin_comb(((-1) ** i, reindex(c.element, c.level, m, tabs[i])) for i in range(m + 1))
    return Cochain(m, acc, c.model)


def unit_pullback(c: Cochain) -> Cochain:
    """Pull a level-1 cochain back along the unit inclusion (both vertices collapse)."""
    if c.level != 1:
        raise ValueError("unit pullback acts on level-1 cochains")
    return Cochain(0, reindex(c.element, 1, 0, {0: 0, 1: 0}), c.model)


def cup(c1: Cochain, c2: Cochain) -> Cochain:
    """(-1)^{k n} (p1^* c1) ^ (p2^* c2), with k = form degree of c1 and n = level of c2."""
    m, n = c1.level, c2.level
    k = c1.element.degree()
    if k is None and c1.element:
        raise ValueError("cup needs a homogeneous left factor")
    left = reindex(c1.element, m, m + n, {j: j for j in range(m + 1)})
    right = reindex(c2.element, n, m + n, {j: m + j for j in range(n + 1)})
    out = wedge(left, right)
    if (k or 0) * n % 2:
        out = -out
    model = c1.model if c1.model == c2.model else "mixed"
    return Cochain(m + n, out, model)


def formal_d(level: int, elem: GradedElement, q: int | None = None) -> GradedElement:
    """Exterior derivative in the free pullback alphabet of a given level."""
    if q is None:
        q = max([g.index[2] for g in elem.generators() if g.family in LEVEL_INDEXED] + [1])
    return derive(PullbackFamily(level, q).d(), elem)


# ---------------------------------------------------------------- characteristic cochains

def _family(model: str, q: int, k: int, n_dz: int | None = None):
    if model == "formal":
        return PullbackFamily(k, q)
    if model == "local":
        return LocalModel(q, k, n_dz)
    raise ValueError(f"unknown model {model!r}")


def char_cochain(word, K: int, q: int, model: str = "formal") -> list:
    """psi(word) at levels 0..K: evaluate on (alpha^(k), R^(k)) and integrate over the simplex.

    ``word`` is an element of the h/c alphabet.
    """
    ctx = weil_context(make_gl(q))
    image = hom_apply(wo_to_weil(ctx), word)
    out = []
    for k in range(K + 1):
        fam = _family(model, q, k)
        d = fam.d()
        A = simplicial_connection(fam)
        R = curvature(A, d)
        H = AlgebraHom({g: (A if g.family == Family.WEIL_OMEGA else R)[g.index] for g in ctx.generators()},
                       check=False)
        out.append(integrate_simplex(hom_apply(H, image), k, model))
    return out


def integrated_curvature(q: int = 1) -> Cochain:
    """R^G = r^* alpha - s^* alpha = alpha_0 - alpha_1 at level 1 (equals -d alpha under the alternating sign)."""
    return Cochain(1, GradedElement.gen(alpha_gen(1, 0)) - GradedElement.gen(alpha_gen(1, 1)))


# ---------------------------------------------------------------- Bott vanishing

@dataclass
class BottReport:
    q: int
    k: int
    poly: tuple
    deg: int
    result: GradedElement
    min_dz_degree: int | None
    surviving_terms: int
    runtime: float = 0.0

    @property
    def vanishes(self) -> bool:
        return self.result.is_zero()

    @property
    def dz_bound_ok(self) -> bool:
        return self.min_dz_degree is None or self.min_dz_degree >= self.deg

    @property
    def passed(self) -> bool:
        return self.dz_bound_ok and (self.vanishes or self.deg <= self.q)


def _poly_of_curvature(R: MatrixForm, poly, caps) -> GradedElement:
    from .gca import capped_wedge
    traces = {}
    out = GradedElement.one()
    for n, i in enumerate(poly):
        if i not in traces:
            traces[i] = R.power(i, caps).trace()
        out = capped_wedge(out, traces[i], caps, exact=(n == len(poly) - 1))
    return out


def bott_integral(q: int, k: int, poly, n_dz: int | None = None) -> GradedElement:
    """int_{simplex} P(R^(k)) in the local model, P a product of c_i (given as indices)."""
    fam = LocalModel(q, k, n_dz)
    caps = {Family.SIMPLEX_DT: k}
    A = simplicial_connection(fam)
    R = curvature(A, fam.d(), caps)
    R = R.map(lambda x: x.filter(lambda f, w: family_count(w, Family.SIMPLEX_DT) <= k))
    integrand = _poly_of_curvature(R, tuple(poly), caps)
    return integrate_simplex(integrand, k, "local").element


def verify_bott(q: int, k: int, poly) -> BottReport:
    """Expand P(R^(k)) in the local model and check the dz-degree bound and vanishing.

    The dz-degree bound is read off a copy of the model with deg(P) formal dz's,
    so that monomials are inspected before dz-nilpotency of the true model cuts them.
    """
    import time
    t0 = time.perf_counter()
    poly = tuple(sorted(poly))
    if any(i < 1 or i > q for i in poly):
        raise ValueError(f"c-indices must lie in 1..{q}")
    deg = sum(poly)
    wide = bott_integral(q, k, poly, n_dz=max(q, deg))
    dzs = [family_count(w, Family.COORD_DZ) for (_, w) in wide.terms]
    result = bott_integral(q, k, poly)
    return BottReport(q, k, poly, deg, result, min(dzs) if dzs else None, len(dzs),
                      time.perf_counter() - t0)


# ---------------------------------------------------------------- GV closure

@dataclass
class GVClosureReport:
    level1_local: Cochain
    boundary_local: Cochain
    level1_formal: Cochain
    boundary_formal: Cochain
    unit_value: Cochain
    r_minus_s: Cochain
    d_alpha: Cochain

    @property
    def passed(self) -> bool:
        return (self.boundary_local.is_zero() and not self.boundary_formal.is_zero()
                and self.unit_value.is_zero() and (self.r_minus_s + self.d_alpha).is_zero())


def verify_gv_closed(q: int = 1) -> GVClosureReport:
    if q != 1:
        raise ValueError("closure of the GV cochain is checked in codimension 1 only")
    hc = GradedElement.monomial(1, gens=[h_gen(1), c_gen(1)])
    loc = char_cochain(hc, 1, 1, "local")[1]
    frm = char_cochain(hc, 1, 1, "formal")[1]
    RG = integrated_curvature()
    dalpha = coboundary(Cochain(0, GradedElement.gen(alpha_gen(0, 0))))
    return GVClosureReport(loc, coboundary(loc), frm, coboundary(frm), unit_pullback(RG), RG, dalpha)
