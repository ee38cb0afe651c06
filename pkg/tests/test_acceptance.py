"""Acceptance criteria, driven through the same named checks as ``folichar verify``."""
import pytest

from conftest import ACCEPTANCE_LINES
from folichar import suites
from folichar.config import default_config

CFG = default_config()
STATE: dict = {}


def run(checks):
    return suites.run_checks(checks, STATE)


def pick(checks, *names):
    return [c for c in checks if any(c.name.startswith(n) for n in names)]


def report(num, title, records, budget=None):
    runtime = sum(r.runtime for r in records)
    ok = all(r.status == suites.PASS for r in records) and (budget is None or runtime < budget)
    limit = f" (budget {budget:g}s)" if budget else ""
    ACCEPTANCE_LINES[num] = f"{'PASS' if ok else 'FAIL'}  {num:2d}. {title}: {len(records)} checks, {runtime:.2f}s{limit}"
    print(ACCEPTANCE_LINES[num])
    for r in records:
        assert r.status == suites.PASS, r.line()
    if budget is not None:
        assert runtime < budget, f"runtime {runtime:.2f}s over budget {budget}s"


WEIL = [c for q in (1, 2, 3) for c in suites.weil_checks(q)]


def test_01_d_squared():
    report(1, "d^2 = 0 on W(gl(q)), q=1..3", run(pick(WEIL, "weil.d_squared", "weil.matrix_identities")), 1.0)


def test_02_transgression():
    recs = run(pick(WEIL, "weil.dh_equals_c"))
    report(2, "dh_i = c_i (h1 for q<=3, h3 for q=3)", recs, 30.0)


def test_03_basic():
    report(3, "c_i gl-basic, h_i SO-basic for odd i", run(pick(WEIL, "weil.c_basic", "weil.h_so_basic")))


def test_04_nerve():
    report(4, "coboundary^2 = 0 and d commutes with it, levels <= 3", run(suites.nerve_checks(3)))


GV = suites.gv_checks(range(0, 4))


def test_05_gv_normal_form():
    report(5, "level-1 GV cochain normal form, levels 2..3 vanish",
           run(pick(GV, "gv.level0", "gv.intcurvmot", "gv.higher_levels_vanish")), 1.0)


def test_06_bott():
    report(6, "Bott vanishing in the local model", run(suites.bott_checks()), 60.0)


def test_07_gv_closed():
    report(7, "GV cochain closed in the Bott model, witness in the free alphabet",
           run(pick(GV, "gv.local_closed", "gv.formal_witness", "gv.unit_vanishing", "gv.sign_convention")))


MODEL = suites.model_checks(CFG)


def test_08_delta_cocycle():
    report(8, "delta cocycle over 1000 random germ pairs",
           run(pick(MODEL, "model.construction", "model.delta_cocycle")), 5.0)


def test_09_path_integral():
    report(9, "path integral = delta = triangular entry, order >= 2",
           run(pick(MODEL, "model.path_integral", "model.convergence_order")), 30.0)


GVC = suites.gvcocycle_checks(CFG)


@pytest.mark.slow
def test_10_gv_cocycle():
    report(10, "phi_gv antisymmetry and Hochschild identity at 64x64x32",
           run(pick(GVC, "gvcocycle.antisymmetry", "gvcocycle.hochschild")), 300.0)


def test_11_formula_and_flat():
    report(11, "delta vs d log Delta pairing, rigid rotation gives 0",
           run(pick(GVC, "gvcocycle.formula_equivalence", "gvcocycle.flat_vanishing")
               + pick(MODEL, "model.flat_case")))
