"""Verification suites: each check compares a computed quantity with an
independent reference and records the measured error against a tolerance.

Suites are plain functions returning lists of :class:`Check`; the CLI and
the acceptance tests share them.
"""
from __future__ import annotations

import math
import time
from collections.abc import Callable, Iterable
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .boundary import index_strata, poisson_moment_exact, spherical_via_boundary, strata_from_enumeration
from .errors import BudgetExceededError, ClassificationUnavailableError, TreeHarmError
from .radial import convolve, convolve_oracle, max_relative_error, mu
from .spectra import (
    full_spectrum,
    full_spectrum_endpoints,
    lp_spectrum,
    nesting_report,
    preimage,
    sampled_image,
)
from .spherical import (
    ROUTE_TOL,
    c_coeff,
    eigen_residual,
    find_negative_witness,
    gamma,
    gamma_real,
    h_eval,
    lp_class,
    lp_partial_sum,
    param_set_P,
    pd_check,
    sign_character_parameter,
    singularity_gap,
    spherical_eval,
    top_height,
)
from .tree import TreeParams, enumerate_ball, make_tree_params

PRESETS: dict[str, TreeParams] = {
    "homogeneous3": make_tree_params(3, 3, 1),
    "semihomog23": make_tree_params(2, 3, 2),
    "semihomog45": make_tree_params(4, 5, 2),
}

SUITES = ("oracle", "eigen", "boundary", "lp", "psd", "spectrum")

DEFAULT_TOLERANCES: dict[str, float] = {
    "oracle": 1e-12,
    "eigen": 1e-10,
    "boundary": 1e-10,
    "lp_integral": 1e-8,
    "psd": 1e-10,
    "sign_character": 1e-12,
    "negative_eig": 1e-8,
    "endpoint": 1e-12,
    "nesting": 1e-9,
    "hausdorff": 1e-4,
    "preimage": 1e-9,
}

# float slack, in ulps of the spectrum's scale, when a distance sits exactly on its bound
HAUSDORFF_ULPS = 64

# off-parameter-set probes for the negative control, as fractions of the top height
OFF_P_PROBES = ((0.25, 0.25), (0.25, 0.5), (0.1, 0.3), (-0.25, 0.0))


@dataclass
class Check:
    """One verified quantity. ``status`` is ``pass``, ``fail`` or ``inconclusive``."""

    suite: str
    check: str
    preset: str
    measured: float | None
    tolerance: float | None
    passed: bool
    status: str
    detail: str = ""
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def preset_label(params: TreeParams) -> str:
    return f"({params.d0},{params.d1},{params.kappa})"


def _check(suite, name, params, measured, tol, ok, detail="", t0=None) -> Check:
    dt = time.perf_counter() - t0 if t0 is not None else 0.0
    return Check(suite, name, preset_label(params), measured, tol, bool(ok),
                 "pass" if ok else "fail", detail, dt)


@dataclass
class VerifyConfig:
    tits_independence: bool = True
    budget: int | None = None
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 20240917
    corrupt_kernel: bool = False

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, DEFAULT_TOLERANCES[key])


# -- oracle ------------------------------------------------------------------

def suite_oracle(params: TreeParams, cfg: VerifyConfig) -> list[Check]:
    """Polynomial convolution against brute force for all ``mu_m * mu_n``, ``m, n <= 6 kappa``."""
    t0 = time.perf_counter()
    k = params.kappa
    top = 6 * k
    tol = cfg.tol("oracle")
    try:
        ball = enumerate_ball(params, top, cfg.budget)
    except BudgetExceededError as exc:
        return [_check("oracle", "mu_m*mu_n vs brute force", params, None, tol, False, str(exc), t0)]
    worst, where = 0.0, ""
    for m in range(0, top + 1, k):
        for n in range(0, top + 1, k):
            err = max_relative_error(convolve(mu(params, m), mu(params, n)),
                                     convolve_oracle(ball, mu(params, m), mu(params, n)))
            if err >= worst:
                worst, where = err, f"m={m}, n={n}"
    return [_check("oracle", f"mu_m*mu_n vs brute force, m,n <= {top}", params, worst, tol,
                   worst <= tol, f"ball radius {top}, {len(ball)} vertices; worst at {where}", t0)]


# -- eigenfunctions ------------------------------------------------------------

def sample_strip(params: TreeParams, n: int, rng: np.random.Generator) -> list[complex]:
    """Random parameters with ``0 <= Re z <= 1`` and imaginary part within one period."""
    T = top_height(params)
    return [complex(x, y) for x, y in zip(rng.uniform(0, 1, n), rng.uniform(-2 * T, 2 * T, n))]


def suite_eigen(params: TreeParams, cfg: VerifyConfig, n: int = 100, r_max: int = 12) -> list[Check]:
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    zs = param_set_P(params).sample(n // 2) + sample_strip(params, n - n // 2, rng)
    res = [eigen_residual(params, z, r_max) for z in zs]
    i = int(np.argmax(res))
    tol = cfg.tol("eigen")
    return [_check("eigen", f"eigen residual, {len(zs)} z, r_max={r_max}", params, res[i], tol,
                   res[i] <= tol, f"worst z={zs[i]:.6g}", t0)]


# -- boundary ----------------------------------------------------------------

def _closed_form(params: TreeParams, z: complex, r: int) -> complex:
    if r == 0:
        return 1.0 + 0j
    c = c_coeff(params, z)
    return c * h_eval(params, z, r) + (1 - c) * h_eval(params, 1 - z, r)


def suite_boundary(params: TreeParams, cfg: VerifyConfig, n: int = 50, r_max: int = 8) -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    rng = np.random.default_rng(cfg.seed + 1)
    zs: list[complex] = []
    while len(zs) < n:
        z = sample_strip(params, 1, rng)[0]
        if singularity_gap(params, z) >= ROUTE_TOL:
            zs.append(z)
    k = params.kappa
    worst, wz = 0.0, 0j
    for z in zs:
        for r in range(0, r_max + 1, k):
            err = abs(spherical_via_boundary(params, z, r) - _closed_form(params, z, r))
            if err > worst:
                worst, wz = err, z
    tol = cfg.tol("boundary")
    checks.append(_check("boundary", f"boundary sum vs closed form, {n} z, r <= {r_max}", params,
                         worst, tol, worst <= tol, f"worst z={wz:.6g}", t0))

    t0 = time.perf_counter()
    bad = [(r, kz) for kz in (0, 1) for r in range(0, r_max + 1, k)
           if poisson_moment_exact(params, r, kz) != Fraction(1)]
    checks.append(_check("boundary", "integral of P^z is exactly 1 for z in {0,1}", params,
                         float(len(bad)), 0.0, not bad, f"failures {bad}" if bad else "exact rationals", t0))

    t0 = time.perf_counter()
    ball = enumerate_ball(params, min(4, r_max), cfg.budget)
    mism = []
    for r in range(1, ball.radius + 1):
        expected = dict(index_strata(params, r))
        size = len(ball.sphere(r))
        for i in sorted({0, size // 2, size - 1}):
            if strata_from_enumeration(ball, ball.address(ball.sphere(r)[i])) != expected:
                mism.append((r, i))
    checks.append(_check("boundary", "index strata independent of the vertex (enumerated)", params,
                         float(len(mism)), 0.0, not mism, f"radius {ball.radius}", t0))
    return checks


# -- L^p -----------------------------------------------------------------------

def suite_lp(params: TreeParams, cfg: VerifyConfig) -> list[Check]:
    checks = []
    t0 = time.perf_counter()
    flips = []
    for p in (1.0, 1.5, 2.0, 3.0, 4.0, 10.0):
        below = lp_class(params, complex(1 / p - 1e-6, 0.7), p)
        at = lp_class(params, complex(1 / p, 0.0), p)
        above = lp_class(params, complex(1 / p + 1e-6, -0.3), p)
        if below.member or at.member or not above.member:
            flips.append(p)
    checks.append(_check("lp", "h_z verdict flips at Re z = 1/p (+-1e-6)", params,
                         float(len(flips)), 0.0, not flips, f"wrong at p in {flips}" if flips else "", t0))

    tol = cfg.tol("lp_integral")
    for z, p in ((0.6, 2.0), (0.8, 1.5), (0.45, 3.0)):
        t0 = time.perf_counter()
        verdict = lp_class(params, z, p)
        partial = lp_partial_sum(params, z, p, 400)
        err = abs(verdict.integral - partial)
        checks.append(_check("lp", f"closed-form integral vs partial sum r<=400, z={z}, p={p}",
                             params, err, tol, err <= tol, f"integral={verdict.integral:.15g}", t0))
    return checks


# -- positive definiteness -------------------------------------------------

def _h_kernel(params: TreeParams, z: float, corrupt: bool) -> Callable[[int], complex]:
    def kernel(d: int) -> complex:
        v = h_eval(params, z, d)
        # test hook: flipping one off-diagonal distance breaks positivity
        return -v if corrupt and d == params.kappa else v
    return kernel


def suite_psd(params: TreeParams, cfg: VerifyConfig, radius: int = 5) -> list[Check]:
    checks = []
    tol = cfg.tol("psd")
    ball = enumerate_ball(params, radius, cfg.budget)
    for z in (0.0, 0.5, 1.0, 2.0):
        t0 = time.perf_counter()
        rep = pd_check(ball, _h_kernel(params, z, cfg.corrupt_kernel), radius)
        checks.append(_check("psd", f"Gram min eigenvalue of h_z, z={z}, radius {radius}", params,
                             rep.min_eigenvalue, -tol, rep.min_eigenvalue >= -tol,
                             f"dimension {rep.matrix_dim}", t0))
    if params.kappa == 1:
        t0 = time.perf_counter()
        z = sign_character_parameter(params)
        err = max(abs(spherical_eval(params, z, r) - (-1) ** r) for r in range(0, 13))
        stol = cfg.tol("sign_character")
        checks.append(_check("psd", "sign character (-1)^r reproduced, r <= 12", params, err, stol,
                             err <= stol, f"z={z:.15g}", t0))
    checks.append(negative_control(params, cfg))
    return checks


def negative_control(params: TreeParams, cfg: VerifyConfig, max_radius: int = 12) -> Check:
    """Search off-parameter-set spherical functions for a negative Gram eigenvalue.

    Reports ``inconclusive`` instead of failing when nothing is found, or when
    the classification flag is unset.
    """
    t0 = time.perf_counter()
    thr = -cfg.tol("negative_eig")
    name = f"off-P spherical function not positive definite, radius <= {max_radius}"
    if not cfg.tits_independence:
        return Check("psd", name, preset_label(params), None, thr, True, "inconclusive",
                     "classification flag unset", time.perf_counter() - t0)
    T = top_height(params)
    pset = param_set_P(params)
    tried = []
    for a, b in OFF_P_PROBES:
        z = complex(a, b * T)
        if pset.contains(z, 1e-9):
            continue
        tried.append(z)
        rep = find_negative_witness(params, z, max_radius, thr)
        if rep is not None:
            return _check("psd", name, params, rep.min_eigenvalue, thr, True,
                          f"z={z:.6g}, radius {rep.radius}, dimension {rep.matrix_dim}", t0)
    return Check("psd", name, preset_label(params), None, thr, True, "inconclusive",
                 f"no witness for {tried}", time.perf_counter() - t0)


# -- spectra ---------------------------------------------------------------

SPECTRUM_PS = (2.0, 2.5, 3.0, 4.0, 10.0, math.inf)


def suite_spectrum(params: TreeParams, cfg: VerifyConfig) -> list[Check]:
    """Closed-form spectra against arc sampling, strict nesting and realizability.

    Raises :class:`~treeharm.errors.ClassificationUnavailableError` when the
    classification flag is unset.
    """
    checks = []
    t0 = time.perf_counter()
    full = full_spectrum(params, cfg.tits_independence)
    lo, hi = full_spectrum_endpoints(params)
    err = max(abs(full.lo - lo), abs(full.hi - hi))
    etol = cfg.tol("endpoint")
    checks.append(_check("spectrum", "full spectrum endpoints", params, err, etol, err <= etol,
                         str(full), t0))

    t0 = time.perf_counter()
    err = max(abs(lp_spectrum(params, p).hi - gamma_real(params, 0.0 if math.isinf(p) else 1 / p))
              for p in SPECTRUM_PS)
    checks.append(_check("spectrum", "max of L^p spectrum equals gamma(1/p)", params, err, etol,
                         err <= etol, "", t0))

    t0 = time.perf_counter()
    ntol = cfg.tol("nesting")
    rep = nesting_report(params, (2.0, 3.0, 4.0, 10.0, math.inf), tol=ntol)
    margin = min(s.margin_hi for s in rep.steps)
    witnesses = ", ".join(f"{s.witness_gamma:.15g}" for s in rep.steps)
    checks.append(_check("spectrum", "strict nesting over p in {2,3,4,10,inf}", params, margin, ntol,
                         rep.all_strict and margin > ntol, f"witnesses {witnesses}", t0))

    t0 = time.perf_counter()
    htol = cfg.tol("hausdorff")
    worst, bound, scale = 0.0, 0.0, 1.0
    for p in (2.0, 3.0, math.inf):
        spec = lp_spectrum(params, p)
        worst = max(worst, spec.hausdorff_to_points(sampled_image(params, p, 10_000)))
        bound = max(bound, (spec.hi - spec.lo) / 2e4)
        scale = max(scale, abs(spec.lo), abs(spec.hi))
    # width 2 meets the bound with equality, so compare at float resolution
    ok = worst <= htol + HAUSDORFF_ULPS * np.finfo(float).eps * scale
    checks.append(_check("spectrum", "Hausdorff distance of 10^4-point sample", params, worst, htol,
                         ok, f"best possible for 10^4 points: {bound:.15g}", t0))

    t0 = time.perf_counter()
    ptol = cfg.tol("preimage")
    rng = np.random.default_rng(cfg.seed + 2)
    perr = 0.0
    for p in (2.0, 3.0, math.inf):
        spec = lp_spectrum(params, p)
        for v in rng.uniform(spec.lo, spec.hi, 20):
            if spec.contains(v):
                perr = max(perr, abs(gamma(params, preimage(params, v, p)) - v))
    checks.append(_check("spectrum", "spectrum values have preimages on the parameter set", params,
                         perr, ptol, perr <= ptol, "", t0))
    return checks


SUITE_FUNCS: dict[str, Callable[[TreeParams, VerifyConfig], list[Check]]] = {
    "oracle": suite_oracle,
    "eigen": suite_eigen,
    "boundary": suite_boundary,
    "lp": suite_lp,
    "psd": suite_psd,
    "spectrum": suite_spectrum,
}


def run_suites(names: Iterable[str], presets: Iterable[TreeParams], cfg: VerifyConfig) -> list[Check]:
    out: list[Check] = []
    for name in names:
        for params in presets:
            try:
                out.extend(SUITE_FUNCS[name](params, cfg))
            except ClassificationUnavailableError:
                raise
            except TreeHarmError as exc:
                out.append(Check(name, "suite raised", preset_label(params), None, None, False,
                                 "fail", f"{type(exc).__name__}: {exc}"))
    return out
