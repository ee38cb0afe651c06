"""Verification suites: named checks producing report records."""
from __future__ import annotations

import math
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from gmpy2 import mpq

from . import gvnum, simplicial as sx
from .config import Config
from .folmodel import (CircleDiffeo, DiffeoError, Germ, SuspensionModel, richardson_order)
from .gca import (Family, GradedElement, derive, wedge)
from .weil import (TruncationPolicy, c_gen, chern_c, derive_matrix, h_gen, is_basic, lie_LX,
                   make_gl, transgression_h, truncate, weil_context, wo_d, wo_element)

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


class SkipCheck(Exception):
    pass


@dataclass
class Record:
    name: str
    params: dict
    status: str
    value: object
    runtime: float

    def line(self) -> str:
        p = " ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.status.upper():7s} {self.name:40s} {p:28s} {_short(self.value)}  ({self.runtime:.2f}s)"


def _short(v, width: int = 90) -> str:
    s = v if isinstance(v, str) else repr(v)
    s = s.replace("\n", "; ")
    return s if len(s) <= width else s[: width - 3] + "..."


@dataclass
class Check:
    name: str
    group: str
    fn: Callable
    params: dict = field(default_factory=dict)


def run_check(chk: Check, state: dict) -> Record:
    t0 = time.perf_counter()
    try:
        ok, value = chk.fn(state)
        status = PASS if ok else FAIL
    except SkipCheck as e:
        status, value = SKIPPED, str(e)
    except Exception as e:  # surfaced as a failed check, not a crash
        status, value = FAIL, f"{type(e).__name__}: {e}"
    return Record(chk.name, dict(chk.params), status, _jsonable(value), time.perf_counter() - t0)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def run_checks(checks: list, state: dict | None = None, serial: bool = True) -> list:
    """Run checks; records come back in declaration order either way."""
    state = {} if state is None else state
    if serial:
        return [run_check(c, state) for c in checks]
    with ThreadPoolExecutor() as ex:
        return list(ex.map(lambda c: run_check(c, state), checks))


# ---------------------------------------------------------------- weil

def _random_weil_element(ctx, rng: random.Random, deg: int, terms: int = 3) -> GradedElement:
    gens = ctx.generators()
    out = GradedElement.zero()
    for _ in range(terms):
        word, d = [], 0
        while d < deg:
            g = rng.choice([g for g in gens if g.degree <= deg - d])
            word.append(g)
            d += g.degree
        out = out + GradedElement.monomial(rng.randint(-3, 3), gens=word)
    return out


def weil_checks(q: int, seed: int = 0) -> list:
    cache: dict = {}

    def ctx():
        if "ctx" not in cache:
            cache["ctx"] = weil_context(make_gl(q))
        return cache["ctx"]

    def lie(_):
        L = make_gl(q)
        bad = 0
        for i, ab in enumerate(L.basis):
            for j, cd in enumerate(L.basis):
                A, B = np.array(L.matrix(i)), np.array(L.matrix(j))
                C = A @ B - B @ A
                rebuilt = sum(float(L.f(k, i, j)) * np.array(L.matrix(k)) for k in range(len(L.basis)))
                bad += int(not np.array_equal(C, rebuilt))
        return bad == 0, {"mismatched_brackets": bad}

    def d_squared(_):
        c = ctx()
        bad = [g.label() for g in c.generators() if derive(c.d, derive(c.d, GradedElement.gen(g)))]
        return not bad, {"generators": len(c.generators()), "failures": bad}

    def matrix_identities(_):
        c = ctx()
        om, Om = c.omega, c.Omega
        e1 = derive_matrix(c.d, om) - (Om - om @ om)
        e2 = derive_matrix(c.d, Om) - (Om @ om - om @ Om)
        return e1.is_zero() and e2.is_zero(), {"dw": e1.is_zero(), "dW": e2.is_zero()}

    def dh(_):
        c = ctx()
        res = {}
        for i in range(1, q + 1, 2):
            res[f"h{i}"] = derive(c.d, transgression_h(c, i)) == chern_c(c, i)
        return all(res.values()), res

    def c_basic(_):
        c = ctx()
        res = {f"c{i}": is_basic(chern_c(c, i), c, c.lie.gl_basis) for i in range(1, q + 1)}
        return all(res.values()), res

    def h_basic(_):
        c = ctx()
        so = c.lie.so_basis
        res = {f"h{i}": is_basic(transgression_h(c, i), c, so, so) for i in range(1, q + 1, 2)}
        return all(res.values()), res

    def cartan(_):
        c = ctx()
        rng = random.Random(seed)
        bad = 0
        for trial in range(6):
            X = rng.randrange(len(c.lie.basis))
            LX, iX = lie_LX(c, X), c.iX(X)
            a = _random_weil_element(c, rng, rng.randint(1, 3))
            b = _random_weil_element(c, rng, rng.randint(1, 3))
            lhs = derive(LX, wedge(a, b))
            rhs = wedge(derive(LX, a), b) + wedge(a, derive(LX, b))
            cart = derive(iX, derive(c.d, a)) + derive(c.d, derive(iX, a))
            bad += int(lhs != rhs) + int(cart != derive(LX, a))
        return bad == 0, {"trials": 6, "failures": bad}

    def anticommute(_):
        c = ctx()
        rng = random.Random(seed + 1)
        bad = 0
        for trial in range(6):
            X, Y = c.iX(rng.randrange(len(c.lie.basis))), c.iX(rng.randrange(len(c.lie.basis)))
            a = _random_weil_element(c, rng, rng.randint(2, 4))
            bad += int(bool(derive(X, derive(Y, a)) + derive(Y, derive(X, a))))
        return bad == 0, {"trials": 6, "failures": bad}

    def trunc(_):
        pol, d = TruncationPolicy(q), wo_d(q)
        rng = random.Random(seed + 2)
        alphabet = [h_gen(i) for i in range(1, q + 1, 2)] + [c_gen(i) for i in range(1, q + 1)]
        bad = 0
        for trial in range(20):
            a = GradedElement.zero()
            for _ in range(3):
                a = a + GradedElement.monomial(rng.randint(1, 4), gens=rng.sample(alphabet, min(len(alphabet), 1))
                                               + [rng.choice(alphabet) for _ in range(rng.randint(0, q + 1))])
            bad += int(truncate(derive(d, a), pol) != truncate(derive(d, truncate(a, pol)), pol))
        return bad == 0, {"trials": 20, "failures": bad}

    p = {"q": q}
    return [Check(f"weil.lie_structure.q{q}", "weil", lie, p),
            Check(f"weil.d_squared.q{q}", "weil", d_squared, p),
            Check(f"weil.matrix_identities.q{q}", "weil", matrix_identities, p),
            Check(f"weil.dh_equals_c.q{q}", "weil", dh, p),
            Check(f"weil.c_basic.q{q}", "weil", c_basic, p),
            Check(f"weil.h_so_basic.q{q}", "weil", h_basic, p),
            Check(f"weil.cartan_formula.q{q}", "weil", cartan, p),
            Check(f"weil.contractions_anticommute.q{q}", "weil", anticommute, p),
            Check(f"weil.truncation_ideal.q{q}", "weil", trunc, p)]


# ---------------------------------------------------------------- bott

DEFAULT_BOTT = ((1, (1, 1), range(0, 3)), (2, (1, 2), range(0, 4)))


def poly_label(poly) -> str:
    out = []
    for i in sorted(set(poly)):
        e = poly.count(i)
        out.append(f"c{i}" + (f"^{e}" if e > 1 else ""))
    return "*".join(out)


def bott_checks(cases=DEFAULT_BOTT) -> list:
    checks = []
    for q, poly, levels in cases:
        for k in levels:
            def fn(_, q=q, poly=poly, k=k):
                rep = sx.verify_bott(q, k, poly)
                return rep.passed, {"zero": rep.vanishes, "deg": rep.deg, "min_dz_degree": rep.min_dz_degree,
                                    "surviving_pre_nilpotency": rep.surviving_terms,
                                    "witness": "" if rep.vanishes else rep.result.dump()[:400]}
            checks.append(Check(f"bott.{poly_label(poly)}.q{q}.k{k}", "bott", fn,
                                {"q": q, "P": poly_label(poly), "k": k}))
    return checks


# ---------------------------------------------------------------- GV cochain

def random_pullback(level: int, rng: random.Random, q: int = 2, terms: int = 4) -> GradedElement:
    """Random sum of products of alpha/d alpha entries living on one nerve level."""
    gens = []
    for j in range(level + 1):
        for a in range(1, q + 1):
            for b in range(1, q + 1):
                gens += [sx.alpha_gen(level, j, a, b), sx.dalpha_gen(level, j, a, b)]
    out = GradedElement.zero()
    for _ in range(terms):
        out = out + GradedElement.monomial(rng.randint(-4, 4), gens=rng.sample(gens, rng.randint(1, 3)))
    return out


def nerve_checks(max_level: int = 3, trials: int = 8, seed: int = 0) -> list:
    def squared(_):
        rng = random.Random(seed)
        bad, n = 0, 0
        for m in range(0, max_level - 1):
            for _ in range(trials):
                c = sx.Cochain(m, random_pullback(m, rng))
                bad += int(not sx.coboundary(sx.coboundary(c)).is_zero())
                n += 1
        return bad == 0, {"cochains": n, "failures": bad}

    def commutes(_):
        rng = random.Random(seed + 1)
        bad, n = 0, 0
        for m in range(0, max_level):
            for _ in range(trials):
                e = random_pullback(m, rng)
                lhs = sx.coboundary(sx.Cochain(m, sx.formal_d(m, e, 2))).element
                rhs = sx.formal_d(m + 1, sx.coboundary(sx.Cochain(m, e)).element, 2)
                bad += int(lhs != rhs)
                n += 1
        return bad == 0, {"cochains": n, "failures": bad}

    p = {"max_level": max_level}
    return [Check("nerve.coboundary_squared", "gv", squared, p),
            Check("nerve.d_commutes_coboundary", "gv", commutes, p)]


def gv_checks(levels=range(0, 4)) -> list:
    cache: dict = {}
    hc = wo_element([("h", 1), ("c", 1)])
    K = max(levels)

    def cochains():
        if "c" not in cache:
            cache["c"] = sx.char_cochain(hc, K, 1)
        return cache["c"]

    def intcurvmot(_):
        c1 = cochains()[1]
        a0, a1 = GradedElement.gen(sx.alpha_gen(1, 0)), GradedElement.gen(sx.alpha_gen(1, 1))
        symmetric_form = wedge(a0 + a1, a0 - a1) * mpq(-1, 2)
        return c1.element == symmetric_form == wedge(a0, a1), {"level1": c1.dump().strip()}

    def level0(_):
        c0 = cochains()[0]
        a, da = sx.alpha_gen(0, 0), sx.dalpha_gen(0, 0)
        expect = GradedElement.monomial(1, gens=[a, da])
        return c0.element == expect, {"level0": c0.dump().strip()}

    def higher(_):
        cs = cochains()
        res = {f"level{k}": cs[k].is_zero() for k in levels if k >= 2}
        return all(res.values()), res

    def closure(_):
        if "closure" not in cache:
            cache["closure"] = sx.verify_gv_closed(1)
        return cache["closure"]

    def local_closed(s):
        r = closure(s)
        return r.boundary_local.is_zero(), {"boundary": r.boundary_local.dump().strip() or "0",
                                            "level1_local": r.level1_local.dump().strip()}

    def formal_witness(s):
        r = closure(s)
        return not r.boundary_formal.is_zero(), {"boundary": r.boundary_formal.dump().strip()}

    def unit(s):
        r = closure(s)
        return r.unit_value.is_zero(), {"unit_pullback": r.unit_value.dump().strip() or "0"}

    def sign(s):
        r = closure(s)
        return (r.r_minus_s + r.d_alpha).is_zero(), {"R_G": r.r_minus_s.dump().strip(),
                                                     "coboundary_alpha": r.d_alpha.dump().strip()}

    return [Check("gv.level0", "gv", level0, {"q": 1}),
            Check("gv.intcurvmot", "gv", intcurvmot, {"q": 1}),
            Check("gv.higher_levels_vanish", "gv", higher, {"levels": f"2..{K}"}),
            Check("gv.local_closed", "gv", local_closed, {"q": 1}),
            Check("gv.formal_witness", "gv", formal_witness, {"q": 1}),
            Check("gv.unit_vanishing", "gv", unit, {"q": 1}),
            Check("gv.sign_convention", "gv", sign, {"q": 1})]


# ---------------------------------------------------------------- suspension model

def rel_err(a, b, floor: float) -> np.ndarray:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)


def _model(state: dict, cfg: Config) -> SuspensionModel:
    if "model" not in state:
        try:
            state["model"] = SuspensionModel(CircleDiffeo(dict(cfg.model.a), dict(cfg.model.b)),
                                             cfg.model.profile_order, cfg.model.steps)
        except DiffeoError as e:
            state["model"] = e
    m = state["model"]
    if isinstance(m, Exception):
        raise SkipCheck(f"model construction failed: {m}")
    return m


def _germ_pairs(cfg: Config):
    mc = cfg.model
    rng = np.random.default_rng(mc.seed)
    n1 = rng.integers(-mc.max_winding, mc.max_winding + 1, mc.pairs)
    n2 = rng.integers(-mc.max_winding, mc.max_winding + 1, mc.pairs)
    z = rng.uniform(0.0, 2 * np.pi, mc.pairs)
    return n1, n2, z


def _grouped_pairs(cfg: Config):
    """Yield (n1, n2, z-array) so that evaluations vectorize over basepoints."""
    n1, n2, z = _germ_pairs(cfg)
    for a in np.unique(n1):
        for b in np.unique(n2):
            sel = (n1 == a) & (n2 == b)
            if sel.any():
                yield int(a), int(b), z[sel]


def model_checks(cfg: Config) -> list:
    mc = cfg.model

    def construction(state):
        try:
            m = _model(state, cfg)
        except SkipCheck as e:
            return False, str(e)
        zs = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
        return True, {"sup_abs_df_minus_1": float(np.max(np.abs(m.diffeo.df(zs) - 1))),
                      "rotation": m.diffeo.is_rotation}

    def functor(state):
        m = _model(state, cfg)
        worst = 0.0
        for a, b, z in _grouped_pairs(cfg):
            y2, d2 = m.holonomy(Germ(b, z))
            y1, d1 = m.holonomy(Germ(a, y2))
            y, d = m.holonomy(Germ(a + b, z))
            worst = max(worst, float(np.max(np.abs(y - y1))), float(np.max(np.abs(d - d1 * d2))))
        return worst <= mc.cocycle_tol, {"max_abs_err": worst}

    def modular(state):
        m = _model(state, cfg)
        worst, mn = 0.0, np.inf
        for a, b, z in _grouped_pairs(cfg):
            y2, d2 = m.holonomy(Germ(b, z))
            d1 = m.modular(Germ(a, y2))
            d = m.modular(Germ(a + b, z))
            worst = max(worst, float(np.max(np.abs(d - d1 * d2) / d)))
            mn = min(mn, float(np.min(d)))
        return worst <= mc.cocycle_tol and mn > 0, {"max_rel_err": worst, "min_Delta": mn}

    def cocycle(state):
        m = _model(state, cfg)
        worst = 0.0
        for a, b, z in _grouped_pairs(cfg):
            y2, d2 = m.holonomy(Germ(b, z))
            lhs = m.delta_analytic(Germ(a + b, z))
            rhs = m.delta_analytic(Germ(b, z)) + m.delta_analytic(Germ(a, y2)) * d2
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst <= mc.cocycle_tol, {"max_abs_err": worst, "pairs": mc.pairs}

    def basepoints():
        return np.linspace(0, 2 * np.pi, mc.basepoints, endpoint=False)

    def path(state):
        m = _model(state, cfg)
        worst = {"path_vs_delta": 0.0, "matrix_vs_delta": 0.0, "path_vs_matrix": 0.0}
        for n in range(-mc.max_winding, mc.max_winding + 1):
            for z in basepoints():
                g = Germ(n, float(z))
                d = float(m.delta_analytic(g))
                p = m.path_integral_curvature(g, steps=mc.steps)
                e = float(m.action_matrix(g)[0, 1])
                worst["path_vs_delta"] = max(worst["path_vs_delta"], float(rel_err(p, d, mc.rel_floor)))
                worst["matrix_vs_delta"] = max(worst["matrix_vs_delta"], float(rel_err(e, d, mc.rel_floor)))
                worst["path_vs_matrix"] = max(worst["path_vs_matrix"], float(rel_err(p, e, mc.rel_floor)))
        return max(worst.values()) <= mc.path_rel_tol, worst

    def order(state):
        m = _model(state, cfg)
        orders = []
        for n in (1, 2, 3, -1, -2, -3):
            for z in (0.4, 1.7, 2.9, 4.4):
                vals = [m.path_integral_curvature(Germ(n, z), steps=s) for s in mc.refinement_steps]
                orders.append(richardson_order(vals))
        finite = [o for o in orders if math.isfinite(o)]
        lo = min(finite) if finite else float("inf")
        return lo >= mc.order_min, {"min_order": lo, "median_order": float(np.median(finite)) if finite else "exact",
                                    "steps": list(mc.refinement_steps)}

    def profile(state):
        m = _model(state, cfg)
        alt = SuspensionModel(m.diffeo, mc.alt_profile_order, mc.steps)
        worst = 0.0
        for n in range(-mc.max_winding, mc.max_winding + 1):
            for z in basepoints()[::4]:
                g = Germ(n, float(z))
                worst = max(worst, float(rel_err(m.path_integral_curvature(g), alt.path_integral_curvature(g),
                                                 mc.rel_floor)))
        return worst <= mc.path_rel_tol, {"max_rel_diff": worst, "orders": [mc.profile_order, mc.alt_profile_order]}

    def perturb(state):
        m = _model(state, cfg)
        worst = {"leafwise": 0.0, "vertical": 0.0, "zero": 0.0, "endpoint_vertical": 0.0}
        for n in (1, 2, -1, 3):
            for z in basepoints()[::8]:
                g = Germ(n, float(z))
                base = m.path_integral_curvature(g)
                lw = m.path_integral_curvature(g, leafwise=lambda j, x: np.sin(5 * x + j) * 3.0)
                vt = m.path_integral_curvature(g, vertical=lambda j, x: 2.0 + x ** 2)
                zero = m.path_integral_curvature(g, leafwise=lambda j, x: 0 * x, vertical=lambda j, x: 0 * x)
                ev = m.endpoint_curvature(g, vertical=1.7, t=2.5) - m.endpoint_curvature(g)
                worst["leafwise"] = max(worst["leafwise"], float(rel_err(lw, base, mc.rel_floor)))
                worst["vertical"] = max(worst["vertical"], float(rel_err(vt, base, mc.rel_floor)))
                worst["zero"] = max(worst["zero"], abs(zero - base))
                worst["endpoint_vertical"] = max(worst["endpoint_vertical"], abs(ev))
        ok = (worst["leafwise"] <= mc.path_rel_tol and worst["vertical"] <= mc.path_rel_tol
              and worst["zero"] == 0.0 and worst["endpoint_vertical"] <= mc.cocycle_tol)
        return ok, worst

    def action(state):
        m = _model(state, cfg)
        unit = m.action_matrix(Germ(0, 1.0))
        worst = float(np.max(np.abs(unit - np.eye(2))))
        rng = np.random.default_rng(mc.seed + 5)
        for _ in range(50):
            a, b = (int(x) for x in rng.integers(-mc.max_winding, mc.max_winding + 1, 2))
            z, t = float(rng.uniform(0, 2 * np.pi)), float(rng.uniform(0.2, 3.0))
            g1, g2 = Germ.pair(a, b, z, m)
            g1 = Germ(g1.n, float(g1.z))
            lhs = m.action_matrix(g1, t * float(m.modular(g2))) @ m.action_matrix(g2, t)
            rhs = m.action_matrix(Germ(a + b, z), t)
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst <= mc.cocycle_tol, {"max_abs_err": worst}

    def flat(state):
        _model(state, cfg)
        rot = SuspensionModel(CircleDiffeo({}, {0: mc.flat_rotation}), mc.profile_order, mc.steps)
        z = basepoints()
        worst = 0.0
        for n in range(-mc.max_winding, mc.max_winding + 1):
            g = Germ(n, z)
            worst = max(worst, float(np.max(np.abs(rot.delta_analytic(g)))),
                        float(np.max(np.abs(rot.modular(g) - 1))))
            worst = max(worst, max(abs(rot.path_integral_curvature(Germ(n, float(x)))) for x in z[::4]))
        return worst <= 1e-14, {"max_abs": worst, "rotation": mc.flat_rotation}

    p = {"config": cfg.name}
    return [Check("model.construction", "model", construction, p),
            Check("model.holonomy_functor", "model", functor, p),
            Check("model.modular_homomorphism", "model", modular, p),
            Check("model.delta_cocycle", "model", cocycle, dict(p, pairs=mc.pairs, max_n=mc.max_winding)),
            Check("model.path_integral", "model", path, dict(p, steps=mc.steps, basepoints=mc.basepoints)),
            Check("model.convergence_order", "model", order, p),
            Check("model.profile_independence", "model", profile, p),
            Check("model.perturbation", "model", perturb, p),
            Check("model.action_matrix", "model", action, p),
            Check("model.flat_case", "model", flat, p)]


# ---------------------------------------------------------------- GV cocycle

def ensemble_order(coarse, fine) -> float:
    rc = float(np.sqrt(np.mean(np.square(coarse))))
    rf = float(np.sqrt(np.mean(np.square(fine))))
    if rf == 0.0:
        return float("inf")
    return float(np.log2(rc / rf)) if rc else float("nan")


def gv_ladder(grid: gvnum.GridSpec, halvings: int) -> list:
    return [grid.halved(2 ** j) for j in range(halvings, 0, -1)] + [grid]


def gvcocycle_checks(cfg: Config) -> list:
    gc = cfg.gv
    ks = gc.kernels

    def kernels(state):
        _model(state, cfg)
        if len(ks) < 3:
            raise SkipCheck("at least three kernels are needed")
        return ks

    def construction(state):
        kernels(state)
        ok = True
        for g in gv_ladder(gc.grid, gc.ladder):
            for k in ks:
                k.sample(g, window=gc.window)
        return ok, {"kernels": len(ks), "grid": [gc.grid.nx, gc.grid.nz, gc.grid.nt], "tau_max": gc.grid.tau_max}

    def formula(state):
        m = _model(state, cfg)
        kk = kernels(state)
        g = gc.grid.halved(2)
        worst = 0.0
        for a, b in zip(kk, kk[1:]):
            A, B = a.sample(g), b.sample(g)
            rs = gvnum.Resampler(m, g)
            v1 = gvnum.phi_gv(A, B, m, rs).value
            v2 = gvnum.phi_gv_logDelta(A, B, m, rs).value
            worst = max(worst, abs(v1 - v2))
        return worst <= gc.formula_tol, {"max_abs_diff": worst, "grid": [g.nx, g.nz, g.nt]}

    def antisym(state):
        m = _model(state, cfg)
        kk = kernels(state)
        pairs = list(zip(kk, kk[1:]))[:4]
        table = []
        for g in gv_ladder(gc.grid, gc.ladder):
            row = []
            for a, b in pairs:
                row.append(gvnum.antisymmetry(a.sample(g), b.sample(g), m).value)
            table.append(row)
        fine = table[-1]
        order = ensemble_order(table[-2], fine) if len(table) > 1 else float("nan")
        ok = max(abs(v) for v in fine) <= gc.antisym_tol and order >= gc.order_min
        return ok, {"max_abs_fine": max(abs(v) for v in fine), "ensemble_order": order,
                    "per_pair": table}

    def hochschild(state):
        m = _model(state, cfg)
        kk = kernels(state)
        triples = [tuple(kk[i:i + 3]) for i in range(len(kk) - 2)][:4]
        table = []
        for g in gv_ladder(gc.grid, gc.ladder):
            row = []
            for a, b, c in triples:
                row.append(gvnum.hochschild_b(a.sample(g), b.sample(g), c.sample(g), m).value)
            table.append(row)
        fine = table[-1]
        order = ensemble_order(table[-2], fine) if len(table) > 1 else float("nan")
        ok = max(abs(v) for v in fine) <= gc.hochschild_tol and order >= gc.order_min
        return ok, {"max_abs_fine": max(abs(v) for v in fine), "ensemble_order": order,
                    "per_triple": table}

    def tau_shift(state):
        m = _model(state, cfg)
        kk = kernels(state)
        g = gc.grid.halved(2)
        shift = 2 * g.h_tau * (1 if kk[0].tau[0] <= 0 else -1)
        a, b = kk[0], kk[1]
        v0 = gvnum.phi_gv(a.sample(g), b.sample(g), m).value
        v1 = gvnum.phi_gv(a.shifted(shift).sample(g), b.shifted(shift).sample(g), m).value
        diff = abs(v1 - v0)
        return diff <= gc.tau_shift_tol * max(1.0, abs(v0)), {"phi": v0, "shifted": v1, "shift": shift}

    def flat(state):
        kernels(state)
        rot = SuspensionModel(CircleDiffeo({}, {0: cfg.model.flat_rotation}), cfg.model.profile_order)
        g = gc.grid.halved(4)
        A, B, C = (k.sample(g) for k in ks[:3])
        z_indep = gvnum.BumpKernel(windings=((0, 1.0),), tau=(0.0, 1.0)).sample(g)
        vals = {"phi": gvnum.phi_gv(A, B, rot).value,
                "phi_logDelta": gvnum.phi_gv_logDelta(A, B, rot).value,
                "phi_winding0": gvnum.phi_gv(z_indep, z_indep, rot).value,
                "hochschild": gvnum.hochschild_b(A, B, C, rot).value}
        return max(abs(v) for v in vals.values()) <= gc.flat_tol, vals

    p = {"config": cfg.name}
    return [Check("gvcocycle.construction", "gvcocycle", construction, p),
            Check("gvcocycle.formula_equivalence", "gvcocycle", formula, p),
            Check("gvcocycle.antisymmetry", "gvcocycle", antisym, dict(p, grid=_grid_label(gc.grid))),
            Check("gvcocycle.hochschild", "gvcocycle", hochschild, dict(p, grid=_grid_label(gc.grid))),
            Check("gvcocycle.tau_shift_invariance", "gvcocycle", tau_shift, p),
            Check("gvcocycle.flat_vanishing", "gvcocycle", flat, p)]


def _grid_label(g) -> str:
    return f"{g.nx}x{g.nz}x{g.nt}"


def full_suite(cfg: Config) -> list:
    checks = []
    for q in (1, 2, 3):
        checks += weil_checks(q)
    checks += bott_checks()
    checks += nerve_checks()
    checks += gv_checks()
    checks += model_checks(cfg)
    checks += gvcocycle_checks(cfg)
    return checks


def summarize(records: list) -> dict:
    counts = {s: sum(r.status == s for r in records) for s in (PASS, FAIL, SKIPPED)}
    return {"summary": True, "checks": len(records), **counts,
            "ok": counts[FAIL] == 0, "runtime": sum(r.runtime for r in records)}


def record_dict(r: Record) -> dict:
    return asdict(r)
