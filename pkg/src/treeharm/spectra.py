"""Spectra of ``mu_kappa`` in the radial parts of the L^{p+} group C*-algebras.

Under Tits' independence property the spectrum in the ``L^{p+}`` completion
is the image under ``gamma`` of the positive definite parameters with real
part in ``[1/p, 1/q]``. Each arc of that parameter set maps to a real curve,
so spectra are computed as unions of arc images; closed-form endpoints are
used as an independent check.
"""
from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import (
    ClassificationUnavailableError,
    ConsistencyError,
    InvalidParameterError,
    MonotonicityError,
)
from .intervals import IntervalUnion
from .spherical import gamma, gamma_real, top_height
from .tree import TreeParams

ARC_SAMPLES = 1000
ENDPOINT_TOL = 1e-9
IMAG_TOL = 1e-10


def _require_classification(tits_independence: bool) -> None:
    if not tits_independence:
        raise ClassificationUnavailableError(
            "spectrum formulas need Tits' independence property; only the critical-segment "
            "lower bound is available without it"
        )


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 2:
        raise InvalidParameterError(f"p must lie in [2, inf], got {p}")
    return p


def _inv(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


@dataclass(frozen=True)
class ArcImage:
    name: str
    lo: float
    hi: float
    monotone: bool


def restricted_arcs(params: TreeParams, p: float) -> list[tuple[str, Callable[[float], complex], float, float]]:
    """Arcs of the parameter set with real part in ``[1/p, 1/2]``, closures included.

    Each entry is ``(name, z(s), s_start, s_end)``.
    """
    T = top_height(params)
    s_lo = _inv(p)
    arcs = [("critical", lambda t: complex(0.5, t), 0.0, T)]
    if s_lo < 0.5:
        arcs.append(("real", lambda s: complex(s, 0.0), s_lo, 0.5))
        arcs.append(("top", lambda s: complex(s, T), s_lo, 0.5))
    return arcs


def _real_gamma(params: TreeParams, z: complex) -> float:
    g = gamma(params, z)
    if abs(g.imag) > IMAG_TOL * max(1.0, abs(g.real)):
        raise ConsistencyError(f"gamma({z}) = {g} is not real on the parameter set")
    return g.real


def arc_image(params: TreeParams, zfun: Callable[[float], complex], a: float, b: float,
              name: str = "", n: int = ARC_SAMPLES) -> ArcImage:
    """Image of ``gamma`` along one arc.

    Monotonicity is checked by the sign of sampled differences; interior
    extrema, if any, are refined by bounded scalar minimization.
    """
    s = np.linspace(a, b, n)
    vals = np.array([_real_gamma(params, zfun(x)) for x in s])
    diffs = np.diff(vals)
    scale = max(1.0, float(np.abs(vals).max()))
    signs = np.sign(np.where(np.abs(diffs) <= 1e-15 * scale, 0.0, diffs))
    nz = signs[signs != 0]
    monotone = bool(nz.size == 0 or np.all(nz == nz[0]))
    cands = [vals[0], vals[-1]]
    if not monotone:
        flips = np.nonzero(nz[1:] != nz[:-1])[0]
        idx = np.nonzero(signs != 0)[0]
        for f in flips:
            i = idx[f + 1]
            lo_s, hi_s = s[max(i - 1, 0)], s[min(i + 1, n - 1)]
            sign = 1.0 if nz[f] > 0 else -1.0  # rising then falling: a maximum
            res = minimize_scalar(lambda x: -sign * _real_gamma(params, zfun(x)),
                                  bounds=(lo_s, hi_s), method="bounded",
                                  options={"xatol": 1e-13})
            cands.append(_real_gamma(params, zfun(res.x)))
    return ArcImage(name, float(min(cands)), float(max(cands)), monotone)


def closed_form_endpoints(params: TreeParams, p: float) -> tuple[float, float]:
    """``(min, max)`` of the spectrum from the analytic endpoint formulas.

    The maximum is ``gamma(1/p)``. The minimum is ``-gamma(1/p)`` for
    ``kappa = 1`` and ``gamma(1/p + iT)`` on the top edge for ``kappa = 2``.
    """
    s = _inv(p)
    hi = gamma_real(params, s)
    if params.kappa == 1:
        return -hi, hi
    d0, d1, dl = params.d0, params.d1, params.delta
    lo = (-(dl**s) - dl ** (1 - s) + (d1 - 2)) / (d0 * (d1 - 1))
    return lo, hi


def full_spectrum_endpoints(params: TreeParams) -> tuple[float, float]:
    """Full spectrum endpoints in the closed form for the two orbit cases."""
    if params.kappa == 1:
        return -1.0, 1.0
    d0, d1 = params.d0, params.d1
    return -(2 + (d0 - 2) * (d1 - 1)) / (d0 * (d1 - 1)), 1.0


def _spectrum_from_arcs(params: TreeParams, p: float) -> tuple[IntervalUnion, list[ArcImage]]:
    images = [arc_image(params, f, a, b, name) for name, f, a, b in restricted_arcs(params, p)]
    union = IntervalUnion.from_intervals(((im.lo, im.hi) for im in images), merge_tol=1e-12)
    return union, images


def _snap_hull(union: IntervalUnion, lo: float, hi: float, tol: float) -> IntervalUnion:
    if abs(union.lo - lo) > tol or abs(union.hi - hi) > tol:
        raise ConsistencyError(
            f"arc images give [{union.lo!r}, {union.hi!r}], closed form [{lo!r}, {hi!r}]"
        )
    pieces = [list(iv) for iv in union.intervals]
    pieces[0][0] = lo
    pieces[-1][1] = hi
    return IntervalUnion.from_intervals(pieces)


def lp_spectrum(params: TreeParams, p: float, tits_independence: bool = True) -> IntervalUnion:
    """Spectrum of ``mu_kappa`` in the radial ``L^{p+}`` completion, ``p`` in ``[2, inf]``."""
    _require_classification(tits_independence)
    p = _check_p(p)
    union, _ = _spectrum_from_arcs(params, p)
    lo, hi = closed_form_endpoints(params, p)
    return _snap_hull(union, lo, hi, ENDPOINT_TOL)


def full_spectrum(params: TreeParams, tits_independence: bool = True) -> IntervalUnion:
    """Spectrum of ``mu_kappa`` in the full radial C*-algebra."""
    _require_classification(tits_independence)
    union, _ = _spectrum_from_arcs(params, math.inf)
    lo, hi = full_spectrum_endpoints(params)
    return _snap_hull(union, lo, hi, ENDPOINT_TOL)


def critical_lower_bound(params: TreeParams) -> IntervalUnion:
    """Image of the critical segment; a subset of every spectrum with or without the
    independence property, since those spherical functions are positive definite
    by the Poisson construction."""
    union, _ = _spectrum_from_arcs(params, 2.0)
    lo, hi = closed_form_endpoints(params, 2.0)
    return _snap_hull(union, lo, hi, ENDPOINT_TOL)


def sampled_image(params: TreeParams, p: float, n: int = 10_000) -> np.ndarray:
    """``gamma`` at ``n`` points of the restricted arcs.

    Target values sit at the centres of ``n`` equal cells covering the
    image, and each is pulled back to a parameter on an arc by root finding.
    The Hausdorff distance to the image is then ``width / (2 n)``, the best
    any ``n`` points can do.
    """
    if n < 1:
        raise InvalidParameterError(f"n must be >= 1, got {n}")
    arcs = []
    for _, f, a, b in restricted_arcs(params, _check_p(p)):
        s = np.linspace(a, b, ARC_SAMPLES)
        g = np.array([_real_gamma(params, f(x)) for x in s])
        arcs.append((f, s, g))
    union = IntervalUnion.from_intervals(((g.min(), g.max()) for _, _, g in arcs), merge_tol=1e-12)
    lengths = np.array([hi - lo for lo, hi in union])
    total = float(lengths.sum())
    if total == 0.0:
        return np.full(n, union.lo)
    # walk the pieces in order; cumulative length maps to a value in the union
    u = (np.arange(n) + 0.5) / n * total
    starts = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
    piece = np.searchsorted(starts, u, side="right") - 1
    targets = np.array([union.intervals[k][0] for k in piece]) + (u - starts[piece])
    out = np.empty(n)
    for i, t in enumerate(targets):
        out[i] = _pull_back(params, arcs, float(t))
    return out


def _pull_back(params: TreeParams, arcs, value: float) -> float:
    """``gamma`` at the root of ``gamma - value`` on the first arc that brackets it."""
    for f, s, g in arcs:
        d = g - value
        exact = np.nonzero(d == 0.0)[0]
        if exact.size:
            return float(g[exact[0]])
        cross = np.nonzero(d[:-1] * d[1:] < 0)[0]
        if cross.size:
            i = int(cross[0])
            root = brentq(lambda x: _real_gamma(params, f(x)) - value, s[i], s[i + 1], xtol=1e-15)
            return _real_gamma(params, f(root))
    raise ConsistencyError(f"no arc reaches gamma = {value!r}")


def preimage(params: TreeParams, value: float, p: float, tol: float = 1e-9) -> complex:
    """A parameter on the restricted arcs whose ``gamma`` equals ``value``."""
    p = _check_p(p)
    for name, f, a, b in restricted_arcs(params, p):
        s = np.linspace(a, b, ARC_SAMPLES)
        g = np.array([_real_gamma(params, f(x)) - value for x in s])
        hit = np.nonzero(np.abs(g) <= tol)[0]
        if hit.size:
            return f(float(s[hit[0]]))
        cross = np.nonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[0]
        if cross.size:
            i = int(cross[0])
            root = brentq(lambda x: _real_gamma(params, f(x)) - value, s[i], s[i + 1], xtol=1e-15)
            return f(root)
    raise InvalidParameterError(f"{value} is not in the L^{p}+ spectrum")


@dataclass(frozen=True)
class NestingStep:
    q: float
    p: float
    inner: IntervalUnion
    outer: IntervalUnion
    strict: bool
    witness_z: complex
    witness_gamma: float
    margin_hi: float
    margin_lo: float


@dataclass(frozen=True)
class NestingReport:
    params: TreeParams
    ps: tuple[float, ...]
    steps: tuple[NestingStep, ...] = field(default_factory=tuple)

    @property
    def all_strict(self) -> bool:
        return all(s.strict for s in self.steps)


def nesting_report(params: TreeParams, ps: Sequence[float], tits_independence: bool = True,
                   tol: float = ENDPOINT_TOL) -> NestingReport:
    """Compare spectra for consecutive exponents ``q < p`` of an ascending grid.

    Each step records the witness ``gamma(1/p)``, which lies in the larger
    spectrum but outside the smaller one, and the gaps at both ends.
    """
    _require_classification(tits_independence)
    ps = tuple(_check_p(p) for p in ps)
    if any(b <= a for a, b in zip(ps, ps[1:])):
        raise InvalidParameterError(f"exponents must be strictly ascending, got {ps}")
    spectra = [lp_spectrum(params, p) for p in ps]
    steps = []
    for (q, inner), (p, outer) in zip(zip(ps, spectra), zip(ps[1:], spectra[1:])):
        if not inner.issubset(outer, tol):
            raise MonotonicityError(f"spectrum at p={q} is not inside spectrum at p={p}")
        wz = complex(_inv(p), 0.0)
        wg = gamma_real(params, _inv(p))
        margin_hi = wg - gamma_real(params, _inv(q))
        margin_lo = inner.lo - outer.lo
        strict = margin_hi > tol and not inner.contains(wg, tol) and outer.contains(wg, tol)
        steps.append(NestingStep(q, p, inner, outer, strict, wz, wg, margin_hi, margin_lo))
    return NestingReport(params, ps, tuple(steps))
