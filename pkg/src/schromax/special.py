"""Bessel functions of half-integer step order, their large-argument expansion,
the sphere-measure Fourier transform, the unit phases gamma(nu), and the
remainder kernel K_nu with its Schur constant."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import gamma as gamma_fn
from scipy.special import jv

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class BesselOrder:
    """Order nu = two_nu / 2 with two_nu an integer >= -1."""

    two_nu: int

    def __post_init__(self):
        if self.two_nu < -1:
            raise ValueError("order must satisfy nu >= -1/2")

    @property
    def nu(self) -> float:
        return self.two_nu / 2.0

    @classmethod
    def from_dimension(cls, n: int, k: int) -> "BesselOrder":
        """nu = n/2 + k - 1 for dimension n >= 1 and harmonic degree k >= 0."""
        if n < 1 or k < 0:
            raise ValueError("need n >= 1 and k >= 0")
        return cls(n + 2 * k - 2)

    @property
    def is_half_integer(self) -> bool:
        return self.two_nu % 2 != 0


def bessel_j(nu: BesselOrder, r) -> np.ndarray | float:
    """J_nu(r) for r >= 0 (r > 0 required at nu = -1/2 where the value diverges)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("argument must be nonnegative")
    if nu.two_nu == -1 and np.any(r_arr == 0):
        raise ValueError("J_{-1/2} diverges at r = 0")
    out = jv(nu.nu, r_arr)
    return out if np.ndim(r) else float(out)


def bessel_j_series(nu: BesselOrder, r: float, terms: int = 60) -> float:
    """Truncated power series sum_m (-1)^m (r/2)^{2m+nu} / (m! Gamma(m+nu+1)).

    Independent evaluation path, also the small-argument oracle in tests.
    """
    if r < 0:
        raise ValueError("argument must be nonnegative")
    v = nu.nu
    if r == 0.0:
        return 1.0 if nu.two_nu == 0 else 0.0
    half = r / 2.0
    total = 0.0
    term = half ** v / gamma_fn(v + 1.0)
    for m in range(terms):
        total += term
        term *= -half * half / ((m + 1.0) * (m + 1.0 + v))
    return total


@lru_cache(maxsize=None)
def _hankel_poly_coeffs(two_nu: int, count: int) -> tuple[float, ...]:
    # a_m(nu) = prod_{i=1..m} (4 nu^2 - (2i-1)^2) / (m! 8^m)
    nu2 = (two_nu / 2.0) ** 2
    coeffs = [1.0]
    val = 1.0
    for m in range(1, count):
        val *= (4.0 * nu2 - (2 * m - 1) ** 2) / (8.0 * m)
        coeffs.append(val)
    return tuple(coeffs)


@dataclass(frozen=True)
class AsymptoticExpansion:
    """J_nu(r) ~ sum_m [ a_m e^{ir} + b_m e^{-ir} ] / r^{m+1/2} for r >= cutoff.

    b_m = conj(a_m); the truncation remainder is O(r^{-terms-1/2}) beyond the
    cutoff, which the test suite validates against bessel_j.
    """

    order: BesselOrder
    terms: int = 3
    cutoff: float = 12.0

    def a_coefficients(self) -> np.ndarray:
        poly = _hankel_poly_coeffs(self.order.two_nu, self.terms)
        front = 0.5 * math.sqrt(2.0 / math.pi) * np.exp(
            -1j * (math.pi * self.order.nu / 2.0 + math.pi / 4.0))
        return front * (1j ** np.arange(self.terms)) * np.array(poly)

    def evaluate(self, r) -> np.ndarray | float:
        r_arr = np.asarray(r, dtype=float)
        a = self.a_coefficients()
        total = np.zeros_like(r_arr, dtype=np.complex128)
        for m in range(self.terms):
            total += (a[m] * np.exp(1j * r_arr)
                      + np.conj(a[m]) * np.exp(-1j * r_arr)) / r_arr ** (m + 0.5)
        out = total.real
        return out if np.ndim(r) else float(out)

    def remainder_bound_constant(self, r_max: float = 1e4, samples: int = 400) -> float:
        """sup of |J_nu - expansion| * r^{terms + 1/2} on [cutoff, r_max]."""
        r = np.geomspace(self.cutoff, r_max, samples)
        err = np.abs(bessel_j(self.order, r) - self.evaluate(r))
        return float(np.max(err * r ** (self.terms + 0.5)))


def sphere_fourier(n: int, rho) -> np.ndarray | complex:
    """Fourier transform of the unit-sphere surface measure in R^n.

    sigma_hat(rho) = (2 pi)^{n/2} rho^{1-n/2} J_{(n-2)/2}(rho); the constant is
    pinned by sigma_hat(0) = |S^{n-1}| and the n = 2, 3 closed forms.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    if np.any(rho_arr < 0):
        raise ValueError("rho must be nonnegative")
    m = (n - 2) / 2.0
    c = (2.0 * math.pi) ** (n / 2.0)
    out = np.empty(rho_arr.shape, dtype=np.complex128)
    pos = rho_arr > 0
    out[pos] = c * rho_arr[pos] ** (1.0 - n / 2.0) * jv(m, rho_arr[pos])
    # limit rho -> 0: J_m(rho) rho^{-m} -> 1 / (2^m Gamma(m+1))
    out[~pos] = c / (2.0 ** m * gamma_fn(m + 1.0))
    return out if np.ndim(rho) else complex(out[0])


def surface_area(n: int) -> float:
    """|S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0)


def gamma_unit(nu: BesselOrder) -> complex:
    """gamma(nu) = e^{-i (pi nu / 2 + pi / 4)}, a unit phase."""
    return complex(np.exp(-1j * (math.pi * nu.nu / 2.0 + math.pi / 4.0)))


def gamma_kernel(nu: BesselOrder) -> complex:
    """gamma_nu = (2 pi)^{-1/2} e^{-i (pi nu / 2 + pi / 4)}."""
    return gamma_unit(nu) / SQRT_TWO_PI


def symmetry_constant(nu: BesselOrder, nu1: BesselOrder) -> float:
    """c = 2 |sin(pi (nu - nu1) / 2)|, exactly sqrt(2) or 2 for half-integer gaps.

    Degenerate when 2 nu1 = 2 nu (mod 4), where c would vanish.
    """
    diff = nu.two_nu - nu1.two_nu
    residue = diff % 4
    if residue == 0:
        raise ValueError("degenerate pair: 2 nu1 = 2 nu (mod 4) gives c = 0")
    if residue == 2:
        return 2.0
    return math.sqrt(2.0)


def remainder_kernel(nu: BesselOrder, r) -> np.ndarray | complex:
    """K_nu(r) = r^{1/2} J_nu(r) - gamma_nu e^{ir} - conj(gamma_nu) e^{-ir}.

    Identically zero at nu = -1/2; otherwise bounded by C_nu / (1 + r).
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr <= 0):
        raise ValueError("r must be positive")
    g = gamma_kernel(nu)
    main = g * np.exp(1j * r_arr) + np.conj(g) * np.exp(-1j * r_arr)
    out = np.sqrt(r_arr) * jv(nu.nu, r_arr) - main
    return out if np.ndim(r) else complex(out)


def kernel_sup_constant(nu: BesselOrder, r_min: float = 1e-3, r_max: float = 1e4,
                        samples: int = 4000) -> float:
    """Numerically fitted sup of (1 + r) |K_nu(r)| — the operative C_nu."""
    r = np.geomspace(r_min, r_max, samples)
    return float(np.max((1.0 + r) * np.abs(remainder_kernel(nu, r))))


def schur_constant(kernel, upper: float = math.inf,
                   tail_constant: float | None = None) -> float:
    """A = integral_0^inf K(r) r^{-1/2} dr via the substitution r = u^2.

    ``kernel`` is a nonnegative vectorizable function on (0, inf).  For a
    finite ``upper`` with ``tail_constant`` C, the tail beyond ``upper`` is
    bounded by integral C/(1+r) r^{-1/2} dr <= 2 C / sqrt(upper) and added,
    so the result is an upper estimate.  Divergence (growing partial
    integrals) raises ValueError.
    """
    def integrand(u):
        return 2.0 * float(np.abs(kernel(u * u)))

    if math.isinf(upper):
        # probe the tail: r^{1/2} K(r) must decay for integrability
        probes = np.array([1e4, 1e6, 1e8])
        vals = np.array([float(np.abs(kernel(p))) * math.sqrt(p) for p in probes])
        if vals[-1] > 1e-8 and not np.all(np.diff(vals) < 0):
            raise ValueError("kernel tail not integrable against r^{-1/2}")
        val, _ = quad(integrand, 0.0, math.inf, limit=400,
                      epsabs=1e-12, epsrel=1e-9)
        return val

    val, _ = quad(integrand, 0.0, math.sqrt(upper), limit=400,
                  epsabs=1e-12, epsrel=1e-9)
    if tail_constant is not None:
        val += 2.0 * tail_constant / math.sqrt(upper)
    return val


@lru_cache(maxsize=None)
def schur_constant_for_order(two_nu: int, upper: float = 1e6) -> float:
    """A_nu = integral |K_nu(r)| r^{-1/2} dr, the Schur bound of Prop-3 type.

    The |K_nu| integrand oscillates, so the quadrature runs to ``upper`` and
    the fitted C_nu bounds the tail; the value is an upper estimate.
    """
    nu = BesselOrder(two_nu)
    if two_nu == -1:
        return 0.0
    c_nu = kernel_sup_constant(nu)

    def kern(r):
        return np.abs(remainder_kernel(nu, r))

    # piecewise to keep quad happy on the oscillatory |.| integrand; the
    # absolute-value kinks make quad report spurious roundoff warnings
    total = 0.0
    edges = [0.0] + list(np.geomspace(1.0, math.sqrt(upper), 40))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for lo, hi in zip(edges[:-1], edges[1:]):
            val, _ = quad(lambda u: 2.0 * float(kern(u * u)), lo, hi,
                          limit=400, epsabs=1e-11, epsrel=1e-8)
            total += val
    total += 2.0 * c_nu / math.sqrt(upper)
    return total
