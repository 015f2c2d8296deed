"""Acceptance criteria 1-8, each at its stated tolerance and runtime bound.

Every test prints one ``PASS`` or ``FAIL`` line (visible with ``pytest -s``
or ``-v``; lines are also collected in the terminal summary).
"""
from __future__ import annotations

import math
import time

import pytest

from treeharm.spectra import full_spectrum, nesting_report
from treeharm.spherical import lp_class, lp_partial_sum
from treeharm.tree import make_tree_params
from treeharm.verify import (
    VerifyConfig,
    negative_control,
    suite_boundary,
    suite_eigen,
    suite_lp,
    suite_oracle,
    suite_psd,
)

HOMOG3 = make_tree_params(3, 3, 1)
SEMI23 = make_tree_params(2, 3, 2)
SEMI45 = make_tree_params(4, 5, 2)
PRESETS = (HOMOG3, SEMI23, SEMI45)

RESULTS: list[str] = []


def report(request, number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
    RESULTS.append(line)
    capman = request.config.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print("\n" + line)
    assert ok, line


def failures(checks) -> list[str]:
    return [f"{c.preset} {c.check}: measured={c.measured} tol={c.tolerance}"
            for c in checks if not c.passed]


def test_criterion_1_spectrum_endpoints(request):
    t0 = time.perf_counter()
    a = full_spectrum(HOMOG3)
    b = full_spectrum(SEMI23)
    err = max(abs(a.lo + 1), abs(a.hi - 1), abs(b.lo + 0.5), abs(b.hi - 1))
    dt = time.perf_counter() - t0
    ok = err <= 1e-12 and dt < 1.0 and len(a) == 1 and len(b) == 1
    report(request, 1, "full spectrum endpoints", ok,
           f"(3,3,1) {a}, (2,3,2) {b}, max error {err:.3g}, {dt:.3f} s")


def test_criterion_2_strict_nesting(request):
    t0 = time.perf_counter()
    rep = nesting_report(HOMOG3, [2, 3, 4, 10, math.inf], tol=1e-9)
    increasing = all(s.inner.is_strict_subset(s.outer, 1e-9) for s in rep.steps)
    positive = all(s.margin_hi > 1e-9 for s in rep.steps)
    dt = time.perf_counter() - t0
    ok = rep.all_strict and increasing and positive and len(rep.steps) == 4 and dt < 5.0
    witnesses = ", ".join(f"p={s.p:g}: {s.witness_gamma:.12g} (margin {s.margin_hi:.6g})"
                          for s in rep.steps)
    report(request, 2, "strict inclusion of L^p spectra", ok, f"{witnesses}; {dt:.2f} s")


def test_criterion_3_oracle_equivalence(request):
    t0 = time.perf_counter()
    cfg = VerifyConfig()
    checks = [c for p in PRESETS for c in suite_oracle(p, cfg)]
    dt = time.perf_counter() - t0
    worst = max((c.measured for c in checks if c.measured is not None), default=math.inf)
    bad = failures(checks)
    ok = not bad and worst <= 1e-12 and dt < 60.0
    report(request, 3, "convolution vs brute force", ok,
           f"worst relative error {worst:.3g}, {dt:.1f} s" + (f"; {bad}" if bad else ""))


def test_criterion_4_eigenfunctions(request):
    cfg = VerifyConfig()
    checks = [c for p in PRESETS for c in suite_eigen(p, cfg, n=100, r_max=12)]
    worst = max(c.measured for c in checks)
    bad = failures(checks)
    report(request, 4, "eigen residuals", not bad and worst <= 1e-10,
           f"worst residual {worst:.3g} over 100 z per preset" + (f"; {bad}" if bad else ""))


def test_criterion_5_boundary_agreement(request):
    cfg = VerifyConfig()
    checks = [c for p in PRESETS for c in suite_boundary(p, cfg, n=50, r_max=8)]
    agree = [c for c in checks if c.check.startswith("boundary sum vs closed form")]
    exact = [c for c in checks if c.check.startswith("integral of P^z")]
    worst = max(c.measured for c in agree)
    bad = failures(agree + exact)
    ok = not bad and worst <= 1e-10 and len(agree) == 3 and len(exact) == 3
    report(request, 5, "boundary integral vs closed form", ok,
           f"worst |difference| {worst:.3g}; moments z in {{0,1}} exact" + (f"; {bad}" if bad else ""))


def test_criterion_6_lp_thresholds(request):
    cfg = VerifyConfig()
    checks = [c for p in PRESETS for c in suite_lp(p, cfg)]
    bad = failures(checks)
    integral = lp_class(HOMOG3, 0.6, 2).integral
    partial = lp_partial_sum(HOMOG3, 0.6, 2, 400)
    q = 2 ** -0.2
    by_hand = 1 + 1.5 * q / (1 - q)
    ok = not bad and abs(integral - partial) <= 1e-8 and abs(integral - by_hand) <= 1e-12
    report(request, 6, "L^p thresholds and integrals", ok,
           f"(3,3,1) z=0.6 p=2 integral {integral:.10g}, partial sum {partial:.10g}"
           + (f"; {bad}" if bad else ""))


def test_criterion_7_positive_definiteness(request):
    cfg = VerifyConfig()
    checks = [c for p in PRESETS for c in suite_psd(p, cfg, radius=5)
              if not c.check.startswith("off-P")]
    gram = [c for c in checks if c.check.startswith("Gram")]
    sign = [c for c in checks if c.check.startswith("sign character")]
    bad = failures(checks)
    worst = min(c.measured for c in gram)
    ok = not bad and len(gram) == 12 and len(sign) == 1 and worst >= -1e-10
    report(request, 7, "positive definiteness of h_z", ok,
           f"smallest Gram eigenvalue {worst:.3g}; sign character error {sign[0].measured:.3g}"
           + (f"; {bad}" if bad else ""))


def test_criterion_8_negative_control(request):
    cfg = VerifyConfig()
    checks = [negative_control(p, cfg, max_radius=12) for p in PRESETS]
    found = [c for c in checks if c.status == "pass"]
    inconclusive = [c.preset for c in checks if c.status == "inconclusive"]
    ok = all(c.passed for c in checks)
    detail = "; ".join(f"{c.preset} eigenvalue {c.measured:.3g} ({c.detail})" for c in found)
    if inconclusive:
        detail += f"; inconclusive for {inconclusive}"
    report(request, 8, "off-parameter-set negative control", ok, detail)


@pytest.fixture(scope="module", autouse=True)
def _summary(request):
    yield
    capman = request.config.pluginmanager.getplugin("capturemanager")
    with capman.global_and_fixture_disabled():
        print("\nacceptance summary:")
        for line in RESULTS:
            print("  " + line)
