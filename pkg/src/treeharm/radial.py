"""Radial (K-bi-invariant) convolution algebra on the tree.

A :class:`RadialFunction` stores the profile ``r -> f(r)`` on radii that
are multiples of kappa. The algebra is generated by ``mu_kappa``, the
normalized indicator of the sphere of radius kappa; products are computed
by expanding both factors as polynomials in ``mu_kappa``, multiplying the
polynomials, and converting back with the three-term recursion

    kappa = 1:  mu_1 * mu_n = 1/d0 mu_{n-1} + (d0-1)/d0 mu_{n+1}
    kappa = 2:  mu_2 * mu_n = 1/(d0(d1-1)) mu_{n-2} + (d1-2)/(d0(d1-1)) mu_n
                              + (d0-1)/d0 mu_{n+2}

Arithmetic stays in exact :class:`~fractions.Fraction` whenever every input
value is rational and falls back to complex floats otherwise.
"""
from __future__ import annotations

import json
import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Number

import numpy as np

from .errors import BallTooSmallError, InvalidParameterError, NonRadialError, ParameterMismatchError
from .kernels import prefix_counts
from .tree import (
    BallEnumeration,
    TreeParams,
    VertexAddress,
    ancestor_indices,
    ancestor_ratios,
    check_radius,
    index_to_address,
    make_tree_params,
    sphere_size,
)


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _all_exact(values) -> bool:
    return all(_is_exact(v) for v in values)


@lru_cache(maxsize=64)
def recursion_coefficients(params: TreeParams) -> tuple[Fraction, Fraction, Fraction]:
    """``(down, stay, up)`` weights of ``mu_kappa * mu_n`` for ``n >= kappa``.

    The same triple gives ``(mu_kappa * f)(r)`` on profiles:
    ``down f(r-kappa) + stay f(r) + up f(r+kappa)`` for ``r >= kappa``.
    """
    d0, d1 = params.d0, params.d1
    if params.kappa == 1:
        return Fraction(1, d0), Fraction(0), Fraction(d0 - 1, d0)
    return Fraction(1, d0 * (d1 - 1)), Fraction(d1 - 2, d0 * (d1 - 1)), Fraction(d0 - 1, d0)


@dataclass(frozen=True)
class RadialFunction:
    """Finitely supported radial function, stored as its profile on radii.

    ``coeffs[r]`` is the value of the function on the double coset of
    elements moving the root by ``r``; absent radii are zero.
    """

    params: TreeParams
    coeffs: Mapping[int, Number] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for r, v in sorted(dict(self.coeffs).items()):
            check_radius(self.params, r)
            if v != 0:
                clean[int(r)] = v
        object.__setattr__(self, "coeffs", clean)

    @property
    def exact(self) -> bool:
        return _all_exact(self.coeffs.values())

    @property
    def support_max(self) -> int:
        return max(self.coeffs, default=0)

    def value(self, r: int):
        return self.coeffs.get(r, 0)

    def __call__(self, r: int):
        return self.value(r)

    def _check(self, other: RadialFunction):
        if self.params != other.params:
            raise ParameterMismatchError(f"{self.params} vs {other.params}")

    def __add__(self, other: RadialFunction) -> RadialFunction:
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return RadialFunction(self.params, {r: self.value(r) + other.value(r) for r in keys})

    def __sub__(self, other: RadialFunction) -> RadialFunction:
        return self + (-1) * other

    def __mul__(self, scalar) -> RadialFunction:
        if isinstance(scalar, RadialFunction):
            return convolve(self, scalar)
        return RadialFunction(self.params, {r: scalar * v for r, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return (-1) * self

    def mu_coordinates(self) -> dict[int, Number]:
        """Coefficients in the basis ``mu_m`` (value times sphere size)."""
        return {r: v * sphere_size(self.params, r) for r, v in self.coeffs.items()}

    @classmethod
    def from_mu_coordinates(cls, params: TreeParams, coords: Mapping[int, Number]) -> RadialFunction:
        out = {}
        for r, c in coords.items():
            size = sphere_size(params, r)
            out[r] = Fraction(c) / size if _is_exact(c) else c / size
        return cls(params, out)

    def allclose(self, other: RadialFunction, rtol: float = 1e-12, atol: float = 0.0) -> bool:
        return max_relative_error(self, other) <= rtol or max_abs_error(self, other) <= atol

    def to_json(self) -> str:
        return json.dumps(radial_to_dict(self), separators=(", ", ": "))


def radial_to_dict(f: RadialFunction) -> dict:
    rows = []
    for r, v in sorted(f.coeffs.items()):
        c = complex(v)
        rows.append([r, c.real, c.imag])
    return {**f.params.to_dict(), "coeffs": rows}


def radial_from_dict(data: Mapping) -> RadialFunction:
    params = make_tree_params(data["d0"], data["d1"], data["kappa"])
    radii = [row[0] for row in data["coeffs"]]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    coeffs = {}
    for r, re, im in data["coeffs"]:
        coeffs[int(r)] = complex(re, im) if im else float(re)
    return RadialFunction(params, coeffs)


def max_abs_error(f: RadialFunction, g: RadialFunction) -> float:
    f._check(g)
    keys = set(f.coeffs) | set(g.coeffs)
    return max((abs(complex(f.value(r)) - complex(g.value(r))) for r in keys), default=0.0)


def max_relative_error(f: RadialFunction, g: RadialFunction) -> float:
    """Largest per-radius error, relative to the larger magnitude at that radius."""
    f._check(g)
    worst = 0.0
    for r in set(f.coeffs) | set(g.coeffs):
        a, b = complex(f.value(r)), complex(g.value(r))
        scale = max(abs(a), abs(b))
        if scale:
            worst = max(worst, abs(a - b) / scale)
    return worst


def mu(params: TreeParams, m: int) -> RadialFunction:
    """Normalized indicator of the sphere of radius ``m``; it integrates to 1."""
    m = check_radius(params, m)
    return RadialFunction(params, {m: Fraction(1, sphere_size(params, m))})


def integrate(f: RadialFunction):
    """Haar integral, i.e. the sum of the profile over the orbit of the root."""
    p = f.params
    total = f.value(0)
    weight = Fraction(p.d0, p.d0 - 1)
    for r, v in f.coeffs.items():
        if r:
            # delta^(r/2) is an integer on the orbit: r even, or kappa = 1 with delta square
            total += weight * _delta_half_power(p, r) * v
    return total


def _delta_half_power(p: TreeParams, r: int) -> int:
    if r % 2 == 0:
        return p.delta ** (r // 2)
    return (p.d0 - 1) ** r  # kappa = 1: delta = (d0 - 1)^2


def adjoint(f: RadialFunction) -> RadialFunction:
    """Involution ``f*(s) = conj f(s^-1)``; radial elements are symmetric."""
    return RadialFunction(f.params, {r: v.conjugate() for r, v in f.coeffs.items()})


def apply_generator(params: TreeParams, profile: np.ndarray) -> np.ndarray:
    """``(mu_kappa * f)`` on a profile sampled at radii ``0, kappa, 2 kappa, ...``.

    The last entry of the output needs one sample beyond the input and is
    dropped, so the result is one shorter than ``profile``.
    """
    down, stay, up = (float(c) for c in recursion_coefficients(params))
    f = np.asarray(profile)
    out = np.empty(len(f) - 1, dtype=np.result_type(f, float))
    out[0] = f[1]
    out[1:] = down * f[:-2] + stay * f[1:-1] + up * f[2:]
    return out


@dataclass(frozen=True)
class GeneratorPolynomial:
    """``sum_i coeffs[i] * mu_kappa^{*i}``."""

    params: TreeParams
    coeffs: tuple = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: GeneratorPolynomial) -> GeneratorPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return GeneratorPolynomial(self.params, tuple(x + y for x, y in zip(a, b)))

    def scale(self, s) -> GeneratorPolynomial:
        return GeneratorPolynomial(self.params, tuple(s * c for c in self.coeffs))

    def __mul__(self, other: GeneratorPolynomial) -> GeneratorPolynomial:
        if self.params != other.params:
            raise ParameterMismatchError(f"{self.params} vs {other.params}")
        if not self.coeffs or not other.coeffs:
            return GeneratorPolynomial(self.params, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return GeneratorPolynomial(self.params, tuple(out))

    def to_radial(self) -> RadialFunction:
        """Evaluate in the algebra by Horner's rule, multiplying by ``mu_kappa``
        with the recursion directly."""
        coords: dict[int, Number] = {}
        for c in reversed(self.coeffs):
            coords = _times_generator(self.params, coords)
            if c != 0:
                coords[0] = coords.get(0, 0) + c
        return RadialFunction.from_mu_coordinates(self.params, coords)


def _times_generator(params: TreeParams, coords: Mapping[int, Number]) -> dict[int, Number]:
    k = params.kappa
    down, stay, up = recursion_coefficients(params)
    out: dict[int, Number] = {}
    for n, c in coords.items():
        if n == 0:
            out[k] = out.get(k, 0) + c
            continue
        out[n - k] = out.get(n - k, 0) + down * c
        if stay:
            out[n] = out.get(n, 0) + stay * c
        out[n + k] = out.get(n + k, 0) + up * c
    return out


@lru_cache(maxsize=1024)
def _generator_poly_exact(params: TreeParams, m: int) -> tuple[Fraction, ...]:
    k = params.kappa
    if m == 0:
        return (Fraction(1),)
    if m == k:
        return (Fraction(0), Fraction(1))
    down, stay, up = recursion_coefficients(params)
    prev = _generator_poly_exact(params, m - 2 * k)
    cur = _generator_poly_exact(params, m - k)
    # mu_m = (X mu_{m-k} - down mu_{m-2k} - stay mu_{m-k}) / up
    shifted = (Fraction(0),) + cur
    n = len(shifted)
    prev = prev + (Fraction(0),) * (n - len(prev))
    cur = cur + (Fraction(0),) * (n - len(cur))
    return tuple((shifted[i] - down * prev[i] - stay * cur[i]) / up for i in range(n))


def expand_in_generator(params: TreeParams, m: int) -> GeneratorPolynomial:
    """``mu_m`` as a polynomial of degree ``m / kappa`` in ``mu_kappa``."""
    m = check_radius(params, m)
    return GeneratorPolynomial(params, _generator_poly_exact(params, m))


def to_generator_polynomial(f: RadialFunction) -> GeneratorPolynomial:
    coords = f.mu_coordinates()
    exact = f.exact
    total = GeneratorPolynomial(f.params, ())
    for m, c in coords.items():
        poly = expand_in_generator(f.params, m)
        if not exact:
            poly = GeneratorPolynomial(f.params, tuple(float(a) for a in poly.coeffs))
        total = total + poly.scale(c)
    return total


def _exact_parts(f: RadialFunction) -> tuple[RadialFunction, RadialFunction]:
    """Real and imaginary parts as exact rationals (every finite float is one)."""
    re, im = {}, {}
    for r, v in f.coeffs.items():
        c = complex(v)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise InvalidParameterError(f"non-finite value {v!r} at radius {r}")
        re[r], im[r] = Fraction(c.real), Fraction(c.imag)
    return RadialFunction(f.params, re), RadialFunction(f.params, im)


def _convolve_exact(f: RadialFunction, g: RadialFunction) -> RadialFunction:
    return (to_generator_polynomial(f) * to_generator_polynomial(g)).to_radial()


def convolve(f: RadialFunction, g: RadialFunction) -> RadialFunction:
    """Convolution product in the radial algebra.

    Rational inputs give an exact result. Float or complex inputs are split
    into real and imaginary parts, converted exactly to rationals, multiplied
    exactly, and rounded once, so the generator expansion cannot cancel away
    accuracy.
    """
    f._check(g)
    if f.exact and g.exact:
        return _convolve_exact(f, g)
    fr, fi = _exact_parts(f)
    gr, gi = _exact_parts(g)
    re = _convolve_exact(fr, gr) - _convolve_exact(fi, gi)
    im = _convolve_exact(fr, gi) + _convolve_exact(fi, gr)
    keys = set(re.coeffs) | set(im.coeffs)
    return RadialFunction(f.params, {r: complex(float(re.value(r)), float(im.value(r))) for r in keys})


# -- brute-force oracle ----------------------------------------------------

EXHAUSTIVE_SPHERE_MAX = 64


def _representatives(ball: BallEnumeration, r: int, count: int | str | None) -> list[VertexAddress]:
    """Evaluation vertices at depth ``r``.

    ``"all"`` takes the whole sphere; ``None`` takes the whole sphere when it
    is small and otherwise the first, the last and a seeded random vertex.
    """
    p = ball.params
    size = sphere_size(p, r)
    if count == "all" or (count is None and size <= EXHAUSTIVE_SPHERE_MAX):
        return [index_to_address(p, r, i) for i in range(size)]
    count = 3 if count is None else int(count)
    if size <= count:
        return [index_to_address(p, r, i) for i in range(size)]
    rng = np.random.default_rng(1000 + r)
    picks = {0, size - 1}
    while len(picks) < count:
        picks.add(int(rng.integers(0, size)))
    return [index_to_address(p, r, i) for i in sorted(picks)]


def _sphere_prefix_counts(ball: BallEnumeration, x: VertexAddress, a: int) -> np.ndarray:
    """Counts of depth-``a`` vertices by common-prefix length with ``x``.

    Cached on the ball, so every product evaluated against the same ball
    reuses the enumeration.
    """
    cache = ball.__dict__.setdefault("_prefix_cache", {})
    key = (x, a)
    if key not in cache:
        p = ball.params
        cache[key] = prefix_counts(
            sphere_size(p, a), ancestor_ratios(p, a), ancestor_indices(p, x), min(a, x.depth)
        )
    return cache[key]


def oracle_raw_values(ball: BallEnumeration, f: RadialFunction, g: RadialFunction,
                      representatives: int | str | None = None) -> dict[int, list]:
    """Unsymmetrized brute-force convolution at representative vertices.

    For each radius ``r`` up to ``supp f + supp g`` and each chosen vertex
    ``x`` at depth ``r``, sums ``f(|y|) g(d(y, x))`` over every orbit vertex
    ``y`` of the ball in the support of ``f``. ``representatives`` is
    ``"all"``, a count, or ``None`` (whole sphere when it has at most
    ``EXHAUSTIVE_SPHERE_MAX`` vertices, else three).
    """
    p = ball.params
    f._check(g)
    if p != ball.params:
        raise ParameterMismatchError("ball built for different parameters")
    mf, mg = f.support_max, g.support_max
    if ball.radius < mf:
        raise BallTooSmallError(f"ball radius {ball.radius} < support of f ({mf})")
    exact = f.exact and g.exact
    levels = [a for a in range(0, mf + 1, p.kappa) if f.value(a) != 0]
    out: dict[int, list] = {}
    for r in range(0, mf + mg + 1, p.kappa):
        vals = []
        for x in _representatives(ball, r, representatives):
            total = 0 if exact else 0j
            for a in levels:
                lim = min(a, r)
                counts = _sphere_prefix_counts(ball, x, a)
                fa = f.value(a)
                for j in range(lim + 1):
                    c = int(counts[j])
                    if c:
                        total += fa * g.value(a + r - 2 * j) * c
            vals.append(total)
        out[r] = vals
    return out


def convolve_oracle(ball: BallEnumeration, f: RadialFunction, g: RadialFunction,
                    representatives: int | str | None = None, rtol: float = 1e-12) -> RadialFunction:
    """Brute-force convolution by summing over the enumerated ball.

    The sum only ranges over the support of ``f``, so the ball needs radius
    at least ``supp f``; evaluation points up to ``supp f + supp g`` are
    addressed directly and may lie outside it. Values at the vertices of
    each sphere must agree to ``rtol``; otherwise :class:`NonRadialError`.
    """
    raw = oracle_raw_values(ball, f, g, representatives)
    coeffs = {}
    for r, vals in raw.items():
        first = vals[0]
        scale = max(abs(complex(v)) for v in vals)
        for v in vals[1:]:
            if abs(complex(v) - complex(first)) > rtol * max(scale, 1e-300):
                raise NonRadialError(f"values on sphere {r} differ: {first} vs {v}")
        coeffs[r] = first
    return RadialFunction(f.params, coeffs)


__all__ = [
    "GeneratorPolynomial",
    "RadialFunction",
    "adjoint",
    "apply_generator",
    "convolve",
    "convolve_oracle",
    "expand_in_generator",
    "integrate",
    "max_abs_error",
    "max_relative_error",
    "mu",
    "oracle_raw_values",
    "radial_from_dict",
    "radial_to_dict",
    "recursion_coefficients",
    "to_generator_polynomial",
]
