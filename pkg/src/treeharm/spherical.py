"""Spherical functions of the Gelfand pair and their classification data.

Parameterization: for complex ``z`` the length exponential
``h_z(r) = delta^(-z r / 2)`` is an eigenfunction of ``mu_kappa`` away from
the identity with eigenvalue ``gamma(z)``, and the spherical function with
that eigenvalue is ``c(z) h_z + c(1 - z) h_{1-z}`` except where the two
exponentials coincide; there it is evaluated as a boundary integral.
"""
from __future__ import annotations

import cmath
import math
from collections.abc import Callable
from dataclasses import asdict, dataclass

import numpy as np

from .boundary import spherical_via_boundary
from .errors import (
    BudgetExceededError,
    InvalidParameterError,
    KernelUndefinedError,
    SingularParameterError,
)
from .kernels import pairwise_prefix
from .radial import apply_generator
from .tree import BallEnumeration, TreeParams, check_radius, sphere_size

SINGULAR_TOL = 1e-9
# Below this gap the two-term formula loses more than ~1e-12 to cancellation.
ROUTE_TOL = 1e-4
PD_MAX_DIM = 6000


def _log_delta(params: TreeParams) -> float:
    return math.log(params.delta)


def h_eval(params: TreeParams, z: complex, r: int) -> complex:
    """Length exponential ``delta^(-z r / 2)``."""
    r = check_radius(params, r)
    return cmath.exp(-(z * r / 2) * _log_delta(params))


def gamma(params: TreeParams, z: complex) -> complex:
    """Eigenvalue of ``mu_kappa`` on the spherical function with parameter ``z``."""
    d0, d1 = params.d0, params.d1
    if params.kappa == 1:
        a = math.log(d0 - 1)
        return (cmath.exp(z * a) + cmath.exp((1 - z) * a)) / d0
    ld = _log_delta(params)
    return (cmath.exp(z * ld) + cmath.exp((1 - z) * ld) + (d1 - 2)) / (d0 * (d1 - 1))


def gamma_real(params: TreeParams, s: float) -> float:
    """``gamma`` on the real axis, in real arithmetic."""
    d0, d1 = params.d0, params.d1
    if params.kappa == 1:
        a = d0 - 1
        return (a**s + a ** (1 - s)) / d0
    dl = params.delta
    return (dl**s + dl ** (1 - s) + (d1 - 2)) / (d0 * (d1 - 1))


def _system_entries(params: TreeParams, z: complex) -> tuple[complex, complex]:
    k, ld = params.kappa, _log_delta(params)
    return cmath.exp(-k * z / 2 * ld), cmath.exp(-k * (1 - z) / 2 * ld)


def singularity_gap(params: TreeParams, z: complex) -> float:
    """``|delta^(-kappa z/2) - delta^(-kappa (1-z)/2)|``; zero exactly at singular z."""
    a, b = _system_entries(params, z)
    return abs(a - b)


def c_coeff(params: TreeParams, z: complex, tol: float = SINGULAR_TOL) -> complex:
    """Coefficient of ``h_z`` in the spherical function.

    Solves ``x + y = 1`` and ``a x + b y = gamma(z)`` with
    ``a = delta^(-kappa z / 2)``, ``b = delta^(-kappa (1 - z) / 2)``; the
    matching ``y`` equals ``c(1 - z)``.
    """
    a, b = _system_entries(params, z)
    if abs(a - b) < tol:
        raise SingularParameterError(
            f"z = {z} is singular (|a - b| = {abs(a - b):.3g} < {tol}); use the boundary evaluator"
        )
    return (gamma(params, z) - b) / (a - b)


def spherical_eval(params: TreeParams, z: complex, r: int) -> complex:
    """Value of the spherical function with eigenvalue ``gamma(z)`` at radius ``r``."""
    r = check_radius(params, r)
    if r == 0:
        return 1.0 + 0j
    if singularity_gap(params, z) < ROUTE_TOL:
        return spherical_via_boundary(params, z, r)
    cz = c_coeff(params, z)
    return cz * h_eval(params, z, r) + (1 - cz) * h_eval(params, 1 - z, r)


def spherical_profile(params: TreeParams, z: complex, r_max: int) -> tuple[np.ndarray, str]:
    """Values at radii ``0, kappa, ..., r_max`` and the evaluator used.

    The evaluator is ``"closed-form"`` or ``"boundary"``.
    """
    k = params.kappa
    radii = range(0, r_max + 1, k)
    if singularity_gap(params, z) < ROUTE_TOL:
        return np.array([spherical_via_boundary(params, z, r) for r in radii]), "boundary"
    cz = c_coeff(params, z)
    r = np.arange(0, r_max + 1, k)
    ld = _log_delta(params)
    vals = cz * np.exp(-(z * r / 2) * ld) + (1 - cz) * np.exp(-((1 - z) * r / 2) * ld)
    vals[0] = 1.0
    return vals, "closed-form"


def h_profile(params: TreeParams, z: complex, r_max: int) -> np.ndarray:
    r = np.arange(0, r_max + 1, params.kappa)
    return np.exp(-(z * r / 2) * _log_delta(params))


def eigen_residual(params: TreeParams, z: complex, r_max: int) -> float:
    """Largest eigen-equation defect of ``h_z`` and the spherical function.

    ``h_z`` is checked for ``kappa <= r <= r_max`` and the spherical function
    for ``0 <= r <= r_max``, with ``mu_kappa`` acting on profiles by the
    three-term rule.
    """
    k = params.kappa
    if r_max < k:
        raise InvalidParameterError(f"r_max must be >= kappa={k}")
    r_max -= r_max % k
    g = gamma(params, z)
    h = h_profile(params, z, r_max + k)
    phi, _ = spherical_profile(params, z, r_max + k)
    res_h = np.abs(apply_generator(params, h) - g * h[:-1])[1:]
    res_phi = np.abs(apply_generator(params, phi) - g * phi[:-1])
    return float(max(res_h.max(), res_phi.max()))


# -- L^p classification ------------------------------------------------------

@dataclass(frozen=True)
class LpVerdict:
    p: float
    member: bool
    threshold_re: float
    mode: str
    upper_threshold_re: float | None = None
    integral: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


MODES = ("h-function", "spherical-function")


def lp_class(params: TreeParams, z: complex, p: float, mode: str = "h-function") -> LpVerdict:
    """Decide whether ``h_z`` (or the spherical function) lies in ``L^p(G)``.

    ``h_z`` is in ``L^p`` exactly when ``Re z > 1/p``; the spherical function
    exactly when ``1/p < Re z < 1 - 1/p``. In ``h-function`` mode the verdict
    carries the value of ``int |h_z|^p``, a geometric series.
    """
    if mode not in MODES:
        raise InvalidParameterError(f"mode must be one of {MODES}, got {mode!r}")
    p = float(p)
    if math.isnan(p) or p < 1:
        raise InvalidParameterError(f"p must be in [1, inf], got {p}")
    x = complex(z).real
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    if mode == "h-function":
        if math.isinf(p):
            return LpVerdict(p, x >= 0, 0.0, mode)
        member = x > inv_p
        integral = None
        if member:
            k = params.kappa
            ratio = params.delta ** (k * (1 - x * p) / 2)
            integral = 1 + params.d0 / (params.d0 - 1) * ratio / (1 - ratio)
        return LpVerdict(p, member, inv_p, mode, integral=integral)
    upper = 1.0 - inv_p
    if math.isinf(p):
        return LpVerdict(p, 0.0 <= x <= 1.0, 0.0, mode, upper_threshold_re=1.0)
    return LpVerdict(p, inv_p < x < upper, inv_p, mode, upper_threshold_re=upper)


def lp_partial_sum(params: TreeParams, z: complex, p: float, r_max: int,
                   mode: str = "h-function") -> float:
    """``sum_{r <= r_max} |S_r| |f(r)|^p`` over orbit radii, summed in log space."""
    if mode not in MODES:
        raise InvalidParameterError(f"mode must be one of {MODES}, got {mode!r}")
    k = params.kappa
    r = np.arange(0, r_max + 1, k)
    ld = _log_delta(params)
    if mode == "h-function":
        log_abs = -(complex(z).real * r / 2) * ld
    else:
        vals, _ = spherical_profile(params, z, r_max)
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(vals))
    log_size = np.array([math.log(sphere_size(params, int(x))) for x in r])
    return float(np.sum(np.exp(log_size + p * log_abs)))


# -- positive definiteness ---------------------------------------------------

@dataclass(frozen=True)
class PDReport:
    radius: int
    min_eigenvalue: float
    matrix_dim: int

    def to_dict(self) -> dict:
        return asdict(self)


def orbit_distance_matrix(ball: BallEnumeration, radius: int) -> np.ndarray:
    """Pairwise distances between orbit vertices of depth <= ``radius``."""
    p = ball.params
    k = p.kappa
    depths, rows = [], []
    for d in range(0, radius + 1, k):
        size = sphere_size(p, d)
        idx = np.arange(size, dtype=np.int64)
        anc = np.full((size, radius + 1), -1, dtype=np.int64)
        for t in range(d + 1):
            anc[:, t] = idx // (size // sphere_size(p, t))
        rows.append(anc)
        depths.append(np.full(size, d, dtype=np.int64))
    anc = np.vstack(rows)
    dep = np.concatenate(depths)
    j = pairwise_prefix(anc)
    return dep[:, None] + dep[None, :] - 2 * j


def pd_check(ball: BallEnumeration, kernel: Callable[[int], complex], radius: int,
             max_dim: int = PD_MAX_DIM) -> PDReport:
    """Smallest eigenvalue of the Gram matrix ``kernel(d(x, y))`` over orbit vertices.

    A positive definite radial function gives a positive semidefinite Gram
    matrix on every finite vertex set. The matrix is Hermitian-symmetrized
    before diagonalization.
    """
    if radius > ball.radius:
        raise InvalidParameterError(f"radius {radius} exceeds ball radius {ball.radius}")
    p = ball.params
    dim = sum(sphere_size(p, d) for d in range(0, radius + 1, p.kappa))
    if dim > max_dim:
        raise BudgetExceededError(f"Gram matrix of dimension {dim} exceeds {max_dim}")
    dist = orbit_distance_matrix(ball, radius)
    table = {}
    for d in np.unique(dist):
        try:
            v = kernel(int(d))
        except Exception as exc:  # noqa: BLE001 - report any kernel failure uniformly
            raise KernelUndefinedError(f"kernel failed at distance {d}: {exc}") from exc
        if v is None or not np.isfinite(complex(v)):
            raise KernelUndefinedError(f"kernel undefined at distance {d}")
        table[int(d)] = complex(v)
    lut = np.zeros(int(dist.max()) + 1, dtype=complex)
    for d, v in table.items():
        lut[d] = v
    gram = lut[dist]
    herm = (gram + gram.conj().T) / 2
    if np.abs(herm.imag).max() == 0:
        herm = herm.real
    eig = np.linalg.eigvalsh(herm)
    return PDReport(radius, float(eig[0]), dim)


def find_negative_witness(params: TreeParams, z: complex, max_radius: int = 12,
                          threshold: float = -1e-8, max_dim: int = PD_MAX_DIM,
                          ball: BallEnumeration | None = None) -> PDReport | None:
    """Grow the Gram radius until a negative eigenvalue below ``threshold`` shows.

    Returns ``None`` when nothing is found before ``max_radius`` or the
    dimension cap; the finite-radius search cannot prove positivity.
    """
    from .tree import enumerate_ball

    k = params.kappa
    for radius in range(k, max_radius + 1, k):
        dim = sum(sphere_size(params, d) for d in range(0, radius + 1, k))
        if dim > max_dim:
            return None
        if ball is None or ball.radius < radius:
            ball = enumerate_ball(params, radius)
        report = pd_check(ball, lambda d: spherical_eval(params, z, d), radius, max_dim)
        if report.min_eigenvalue < threshold:
            return report
    return None


# -- positive definite parameter set ---------------------------------------------

@dataclass(frozen=True)
class Arc:
    """Segment ``start -> end`` in the z-plane; ``closed_end`` marks inclusion of ``end``."""

    name: str
    start: complex
    end: complex
    closed_end: bool

    def point(self, s: float) -> complex:
        return self.start + s * (self.end - self.start)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "start": [self.start.real, self.start.imag],
            "end": [self.end.real, self.end.imag],
            "closed_end": self.closed_end,
        }


@dataclass(frozen=True)
class ParameterSet:
    """Parameters of the positive definite spherical functions.

    The critical segment ``1/2 + i[0, T]`` together with the half-open real
    edges ``[0, 1/2)`` and ``[0, 1/2) + iT``, where ``T = 2 pi / (kappa log delta)``.
    """

    params: TreeParams
    height: float
    arcs: tuple[Arc, ...]

    def sample(self, n: int) -> list[complex]:
        """Deterministic points covering every arc, including the four corners when n >= 4."""
        if n < 4:
            raise InvalidParameterError("need n >= 4 to cover all arcs and corners")
        T = self.height
        n_crit = max(2, round(n * T / (T + 1.0)))
        n_crit = min(n_crit, n - 2)
        rest = n - n_crit
        n_bottom = max(1, rest // 2)
        n_top = rest - n_bottom
        pts = [0.5 + 1j * t for t in np.linspace(0.0, T, n_crit)]
        pts += [complex(s) for s in np.linspace(0.0, 0.5, n_bottom, endpoint=False)]
        pts += [complex(s, T) for s in np.linspace(0.0, 0.5, n_top, endpoint=False)]
        return pts

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        z = complex(z)
        T = self.height
        if abs(z.real - 0.5) <= tol and -tol <= z.imag <= T + tol:
            return True
        on_edge = abs(z.imag) <= tol or abs(z.imag - T) <= tol
        return on_edge and -tol <= z.real < 0.5

    def describe(self) -> dict:
        return {**self.params.to_dict(), "height": self.height,
                "arcs": [a.to_dict() for a in self.arcs]}


def top_height(params: TreeParams) -> float:
    return 2 * math.pi / (params.kappa * _log_delta(params))


def param_set_P(params: TreeParams) -> ParameterSet:
    T = top_height(params)
    arcs = (
        Arc("critical", complex(0.5, 0.0), complex(0.5, T), True),
        Arc("real", 0j, complex(0.5, 0.0), False),
        Arc("top", complex(0.0, T), complex(0.5, T), False),
    )
    return ParameterSet(params, T, arcs)


def sign_character_parameter(params: TreeParams) -> complex:
    """Parameter of the spherical function ``s -> (-1)^{|s|}`` (kappa = 1 only)."""
    if params.kappa != 1:
        raise InvalidParameterError("the sign character is a spherical function only for kappa = 1")
    return 1j * top_height(params)
