"""Dimension reduction of radial/symmetric evolution to one dimension.

The Hankel-type evolution acts on a profile g on (0, inf) as

    (H_t g)(r) = integral_0^inf J_nu(rs) (rs)^{1/2} g(s) e^{i t s^a} ds,

and splitting the kernel as r^{1/2} J_nu(r) = gamma_nu e^{ir} +
conj(gamma_nu) e^{-ir} + K_nu(r) expresses it as a one-dimensional evolution
plus a remainder controlled by the Schur constant of |K_nu|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from schromax.special import (
    BesselOrder,
    gamma_kernel,
    gamma_unit,
    remainder_kernel,
    surface_area,
)
from schromax.spectral import (
    GridSpec,
    SpectralFunction1D,
    bump_value,
    sup_over_times,
)

SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


@dataclass
class RadialProfile:
    """Complex samples f1(r_i) on increasing positive nodes with quadrature weights."""

    nodes: np.ndarray
    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        self.values = np.asarray(self.values, dtype=np.complex128)
        self.weights = np.asarray(self.weights, dtype=float)
        if not (self.nodes.shape == self.values.shape == self.weights.shape):
            raise ValueError("node/value/weight counts must match")
        if np.any(self.nodes <= 0) or np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing and positive")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    def norm(self) -> float:
        """Discrete L2(R_+) norm."""
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))

    def interp(self, r, left: float = 0.0, right: float = 0.0) -> np.ndarray:
        """Linear interpolation of the profile, zero outside the node range."""
        r = np.asarray(r, dtype=float)
        re = np.interp(r, self.nodes, self.values.real, left=left, right=right)
        im = np.interp(r, self.nodes, self.values.imag, left=left, right=right)
        return re + 1j * im

    def to_csv(self, path) -> None:
        with open(path, "w", newline="\n") as fh:
            fh.write("r,re,im,weight\n")
            for r, v, w in zip(self.nodes, self.values, self.weights):
                fh.write(f"{float(r)!r},{float(v.real)!r},"
                         f"{float(v.imag)!r},{float(w)!r}\n")


def trapezoid_weights(nodes: np.ndarray, left_edge: float = 0.0) -> np.ndarray:
    """Composite trapezoid weights on [left_edge, nodes[-1]] (value 0 at the edge)."""
    edges = np.concatenate([[left_edge], nodes])
    w = np.empty(nodes.size)
    w[:-1] = 0.5 * (edges[2:] - edges[:-2])
    w[-1] = 0.5 * (nodes[-1] - edges[-2])
    return w


def simpson_weights(count: int, h: float) -> np.ndarray:
    """Simpson weights for nodes h, 2h, ..., count*h with an implicit zero at 0.

    count must be even (an even number of equal segments over [0, count*h]).
    """
    if count % 2 != 0:
        raise ValueError("simpson weights need an even node count")
    w = np.empty(count + 1)
    w[0] = 1.0
    w[-1] = 1.0
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return (h / 3.0) * w[1:]


def uniform_profile(func, r_max: float, count: int,
                    rule: str = "trapezoid") -> RadialProfile:
    """Sample a callable on the uniform nodes h, 2h, ..., r_max."""
    h = r_max / count
    nodes = h * np.arange(1, count + 1)
    values = np.asarray(func(nodes), dtype=np.complex128)
    if rule == "trapezoid":
        weights = np.full(count, h)
        weights[-1] = 0.5 * h
    elif rule == "simpson":
        weights = simpson_weights(count, h)
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return RadialProfile(nodes, values, weights)


@dataclass(frozen=True)
class HarmonicContext:
    """(n, k) with the derived Bessel order nu = n/2 + k - 1 and alpha_n."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 0:
            raise ValueError("need n >= 1 and k >= 0")

    @property
    def order(self) -> BesselOrder:
        return BesselOrder.from_dimension(self.n, self.k)

    @property
    def alpha_n(self) -> float:
        return (2.0 * math.pi) ** (self.n / 2.0)


@dataclass
class SymmetrizedLine:
    """A line spectrum satisfying gamma(nu) F(-r) = conj(gamma(nu)) F(r)."""

    line: SpectralFunction1D
    two_nu: int

    def __post_init__(self):
        nu = BesselOrder(self.two_nu)
        g = gamma_unit(nu)
        F = self.line.coefficients
        n = self.line.grid.point_count
        # grid index k maps xi -> -xi to index n - k (k >= 1)
        pos = F[n // 2 + 1:]
        neg = F[1:n // 2][::-1]
        if np.max(np.abs(g * neg - np.conj(g) * pos)) > 1e-12 * max(1.0, np.max(np.abs(F))):
            raise ValueError("line data does not satisfy the phase symmetry")


class HankelEvolution:
    """Evolution of a fixed profile under H_t, evaluated on fixed output nodes.

    Precomputes the kernel matrix so batches of times cost one matrix-vector
    product each.
    """

    def __init__(self, f1: RadialProfile, nu: BesselOrder, out_nodes: np.ndarray):
        self.f1 = f1
        self.nu = nu
        self.out_nodes = np.asarray(out_nodes, dtype=float)
        rs = np.outer(self.out_nodes, f1.nodes)
        self._kernel = jv(nu.nu, rs) * np.sqrt(rs)
        self._weighted = self._kernel * (f1.values * f1.weights)[None, :]

    def phases(self, t_values, a: float) -> np.ndarray:
        s_pow = self.f1.nodes ** a
        return np.exp(1j * np.asarray(t_values, dtype=float)[:, None] * s_pow[None, :])

    def field(self, t: float, a: float) -> np.ndarray:
        return self._weighted @ np.exp(1j * t * self.f1.nodes ** a)

    def sup_field(self, t_values, a: float) -> np.ndarray:
        """sup over the time batch of |H_t f1| at each output node."""
        fields = self._weighted @ self.phases(t_values, a).T
        return np.abs(fields).max(axis=1)


def hankel_propagate(f1: RadialProfile, t: float, a: float, nu: BesselOrder,
                     out_nodes: np.ndarray | None = None,
                     out_weights: np.ndarray | None = None) -> RadialProfile:
    """Quadrature evaluation of H_t f1; an isometry on L2(R_+) at t = 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if a <= 0:
        raise ValueError("a must be positive")
    if out_nodes is None:
        out_nodes = f1.nodes
        out_weights = f1.weights
    if out_weights is None:
        out_weights = trapezoid_weights(np.asarray(out_nodes, dtype=float))
    evo = HankelEvolution(f1, nu, np.asarray(out_nodes, dtype=float))
    return RadialProfile(evo.out_nodes, evo.field(t, a), out_weights)


def cosine_transform(f1: RadialProfile, out_nodes: np.ndarray) -> np.ndarray:
    """sqrt(2/pi) * integral cos(rs) f1(s) ds — the nu = -1/2, t = 0 reduction."""
    rs = np.outer(np.asarray(out_nodes, dtype=float), f1.nodes)
    return math.sqrt(2.0 / math.pi) * (np.cos(rs) @ (f1.values * f1.weights))


def even_odd_split(F: SpectralFunction1D) -> tuple[SpectralFunction1D, SpectralFunction1D]:
    """F = F_even + F_odd by reflecting the coefficient grid; Pythagoras holds."""
    c = F.coefficients
    n = F.grid.point_count
    refl = np.empty_like(c)
    refl[0] = c[0]          # -xi_max has no partner on the grid
    refl[1:] = c[1:][::-1]
    even = 0.5 * (c + refl)
    odd = 0.5 * (c - refl)
    odd[0] = 0.0
    even[0] = c[0]
    return (SpectralFunction1D(F.grid, even, band_limit=F.band_limit),
            SpectralFunction1D(F.grid, odd, band_limit=F.band_limit))


def symmetrize(f1: RadialProfile, nu: BesselOrder, variant: str,
               grid: GridSpec, nu1: BesselOrder | None = None) -> SymmetrizedLine:
    """Build the line spectrum realizing the requested phase symmetry.

    variant "prop1": F(xi) = gamma(nu) f1(xi) for xi > 0 and
    conj(gamma(nu)) f1(-xi) for xi < 0.  The "lemma7_P" / "lemma7_Q" pair
    treats f1 as a spectrum supported on the positive axis and builds the two
    symmetrized combinations whose sum has modulus c = 2|sin(pi(nu-nu1)/2)|
    times the original.
    """
    xi = grid.xi_nodes()
    pos_vals = f1.interp(np.abs(xi))
    coeffs = np.zeros(grid.point_count, dtype=np.complex128)
    if variant == "prop1":
        g = gamma_unit(nu)
        coeffs[xi > 0] = g * pos_vals[xi > 0]
        coeffs[xi < 0] = np.conj(g) * pos_vals[xi < 0]
        two_nu = nu.two_nu
    elif variant in ("lemma7_P", "lemma7_Q"):
        if nu1 is None:
            raise ValueError("lemma7 variants need the second order nu1")
        from schromax.special import symmetry_constant
        symmetry_constant(nu, nu1)  # rejects the degenerate c = 0 case
        if variant == "lemma7_P":
            base = -np.conj(gamma_unit(nu1)) * pos_vals
            g = gamma_unit(nu)
            two_nu = nu.two_nu
        else:
            base = np.conj(gamma_unit(nu)) * pos_vals
            g = gamma_unit(nu1)
            two_nu = nu1.two_nu
        coeffs[xi > 0] = g * base[xi > 0]
        coeffs[xi < 0] = np.conj(g) * base[xi < 0]
    else:
        raise ValueError(f"unknown symmetrize variant {variant!r}")
    line = SpectralFunction1D(grid, coeffs)
    return SymmetrizedLine(line, two_nu)


class RemainderOperator:
    """The kernel split of H_t on fixed node sets: main + remainder parts.

    main(r) = sum_s (gamma_nu e^{irs} + conj e^{-irs}) e^{its^a} f1(s) w_s,
    which equals alpha_1 S_t^{(1)} f on r > 0 for the symmetrized line f;
    rem uses the K_nu kernel, and sup_t |rem| <= integral |K_nu(rs)||f1(s)| ds.
    """

    def __init__(self, f1: RadialProfile, nu: BesselOrder, out_nodes: np.ndarray):
        self.f1 = f1
        self.nu = nu
        self.out_nodes = np.asarray(out_nodes, dtype=float)
        rs = np.outer(self.out_nodes, f1.nodes)
        g = gamma_kernel(nu)
        self._main_kernel = g * np.exp(1j * rs) + np.conj(g) * np.exp(-1j * rs)
        if nu.two_nu == -1:
            self._k_kernel = np.zeros_like(rs, dtype=np.complex128)
        else:
            self._k_kernel = remainder_kernel(nu, rs)

    def main(self, t: float, a: float) -> np.ndarray:
        wv = self.f1.values * self.f1.weights
        return (self._main_kernel * wv[None, :]) @ np.exp(1j * t * self.f1.nodes ** a)

    def rem(self, t: float, a: float) -> np.ndarray:
        wv = self.f1.values * self.f1.weights
        return (self._k_kernel * wv[None, :]) @ np.exp(1j * t * self.f1.nodes ** a)

    def rem_sup(self, t_values, a: float) -> np.ndarray:
        """sup over the time batch of |rem| at each output node."""
        wv = self.f1.values * self.f1.weights
        s_pow = self.f1.nodes ** a
        phases = np.exp(1j * np.asarray(t_values, dtype=float)[None, :] * s_pow[:, None])
        fields = (self._k_kernel * wv[None, :]) @ phases
        return np.abs(fields).max(axis=1)

    def rem_dominator(self) -> np.ndarray:
        """Pointwise dominating operator: integral |K_nu(rs)| |f1(s)| ds."""
        return np.abs(self._k_kernel) @ (np.abs(self.f1.values) * self.f1.weights)


def remainder_decompose(f1: RadialProfile, nu: BesselOrder, t: float, a: float,
                        out_nodes: np.ndarray | None = None,
                        ) -> tuple[RadialProfile, RadialProfile]:
    """Split H_t f1 into the one-dimensional main part and the K-kernel remainder.

    main + rem reconstructs H_t f1 exactly at the quadrature level.
    """
    if out_nodes is None:
        out_nodes = f1.nodes
        out_weights = f1.weights
    else:
        out_nodes = np.asarray(out_nodes, dtype=float)
        out_weights = trapezoid_weights(out_nodes)
    op = RemainderOperator(f1, nu, out_nodes)
    main = RadialProfile(out_nodes, op.main(t, a), out_weights)
    rem = RadialProfile(out_nodes, op.rem(t, a), out_weights)
    return main, rem


def schur_apply(kernel, f: RadialProfile,
                out_nodes: np.ndarray | None = None) -> RadialProfile:
    """T f(s) = integral K(r s) f(r) dr on the profile's quadrature."""
    if out_nodes is None:
        out_nodes = f.nodes
        out_weights = f.weights
    else:
        out_nodes = np.asarray(out_nodes, dtype=float)
        out_weights = trapezoid_weights(out_nodes)
    rs = np.outer(out_nodes, f.nodes)
    kvals = np.asarray(kernel(rs), dtype=float)
    values = kvals @ (f.values * f.weights)
    return RadialProfile(out_nodes, values, out_weights)


def radial_sup_norm(f1: RadialProfile, nu: BesselOrder, t_values, a: float,
                    out_nodes: np.ndarray | None = None,
                    out_weights: np.ndarray | None = None) -> float:
    """|| sup_{t in E} |H_t f1| ||_{L2(R_+)} on the output quadrature."""
    if out_nodes is None:
        out_nodes = f1.nodes
        out_weights = f1.weights
    if out_weights is None:
        out_weights = trapezoid_weights(np.asarray(out_nodes, dtype=float))
    evo = HankelEvolution(f1, nu, np.asarray(out_nodes, dtype=float))
    sup = evo.sup_field(t_values, a)
    return float(np.sqrt(np.sum(out_weights * sup ** 2)))


def lift_norm_identity(f1: RadialProfile, ctx: HarmonicContext, t_values,
                       a: float) -> tuple[float, float]:
    """Both sides of alpha_n ||S_E^{*(n)} f_P|| = ||H_E^* f1||_{L2(R_+)}.

    The left side goes through the n-dimensional pointwise formula
    |S_t f_P(x)| = alpha_n^{-1} |x|^{(1-n)/2} |H_t f1(|x|)| |P(-x')| and is
    integrated in polar coordinates on an offset radial grid; the right side
    is the direct radial maximal norm on the profile's own nodes.
    """
    nu = ctx.order
    # left: polar route on midpoint nodes (independent quadrature)
    mid = 0.5 * (f1.nodes[:-1] + f1.nodes[1:])
    mid_w = trapezoid_weights(mid, left_edge=f1.nodes[0])
    evo = HankelEvolution(f1, nu, mid)
    sup = evo.sup_field(t_values, a)
    # angular integral of |P|^2 over the sphere is 1 by normalization
    amp = (1.0 / ctx.alpha_n) * mid ** ((1 - ctx.n) / 2.0) * sup
    lhs = ctx.alpha_n * math.sqrt(
        float(np.sum(mid_w * amp ** 2 * mid ** (ctx.n - 1))))
    rhs = radial_sup_norm(f1, nu, t_values, a)
    return lhs, rhs


# ---------------------------------------------------------------------------
# two-dimensional tensor-grid oracle (n = 2, k = 0 only)
# ---------------------------------------------------------------------------

def _alternating(n: int) -> np.ndarray:
    sign = np.ones(n)
    sign[1::2] = -1.0
    return sign


def oracle_2d_propagate(f1, t: float, a: float, grid: GridSpec,
                        support_max: float | None = None) -> np.ndarray:
    """Full 2-D spectral propagation of the planar function f_P built from f1.

    The 2-D spectrum is F(xi) = P f1(|xi|) |xi|^{-1/2} with the constant
    harmonic P = (2 pi)^{-1/2}; f1 may be a RadialProfile (linear interp) or
    a callable evaluated exactly on the grid.  Returns the propagated spatial
    samples on the (N, N) tensor grid.  Used only as an independent
    cross-check of the Hankel route.
    """
    if callable(f1):
        if support_max is None:
            raise ValueError("callable profile needs an explicit support_max")
        evaluate = f1
    else:
        support_max = f1.nodes[-1]
        evaluate = f1.interp
    if support_max > grid.xi_max:
        raise ValueError("profile support exceeds the 2-D grid Nyquist frequency")
    xi = grid.xi_nodes()
    rr = np.hypot(xi[:, None], xi[None, :])
    p_const = 1.0 / math.sqrt(2.0 * math.pi)
    with np.errstate(divide="ignore"):
        radial_factor = np.where(rr > 0, rr ** -0.5, 0.0)
    spec = p_const * np.asarray(evaluate(rr), dtype=np.complex128) * radial_factor
    spec = spec * np.exp(1j * t * rr ** a)
    sign = _alternating(grid.point_count)
    checker = np.outer(sign, sign)
    # inverse 2-D transform under the (2 pi)^{-2} convention
    samples = checker * np.fft.ifft2(checker * spec) / grid.dx ** 2
    return samples


def oracle_2d_radius_sweep(samples: np.ndarray, grid: GridSpec,
                           radii: np.ndarray) -> np.ndarray:
    """|f| at the points (r, 0) of the tensor grid nearest to the given radii."""
    x = grid.x_nodes()
    j0 = grid.point_count // 2  # x = 0 row
    idx = np.searchsorted(x, radii)
    idx = np.clip(idx, 0, grid.point_count - 1)
    return np.abs(samples[idx, j0])


# ---------------------------------------------------------------------------
# random smooth test profiles and the theorem-level two-sided checks
# ---------------------------------------------------------------------------

def random_profile_func(seed: int, n_bumps: int = 4):
    """Seeded smooth random profile: a complex combination of bumps supported
    strictly inside (0, 6).  Returns (callable, support_max)."""
    rng = np.random.default_rng(seed)
    centers = rng.uniform(1.5, 4.5, n_bumps)
    widths = rng.uniform(0.5, 1.5, n_bumps)
    coeffs = rng.standard_normal(n_bumps) + 1j * rng.standard_normal(n_bumps)

    def func(s):
        s = np.asarray(s, dtype=float)
        total = np.zeros(s.shape, dtype=np.complex128)
        for c, mu, w in zip(coeffs, centers, widths):
            total += c * bump_value((s - mu) / w)
        return total

    return func, 6.0


def random_profile(seed: int, count: int = 384, n_bumps: int = 4) -> RadialProfile:
    """The sampled, unit-norm version of random_profile_func."""
    func, r_max = random_profile_func(seed, n_bumps)
    prof = uniform_profile(func, r_max, count)
    scale = prof.norm()
    return RadialProfile(prof.nodes, prof.values / scale, prof.weights)


def two_route_case(seed: int = 0, t: float = 0.1, a: float = 2.0,
                   grid_n: int = 1024, grid_l: float = 80.0,
                   r_lo: float = 1.0, r_hi: float = 10.0) -> dict:
    """|S_t f_P| on radii in [r_lo, r_hi] for n = 2, k = 0, by two routes.

    Route one is the Hankel reduction (exact quadrature of the profile);
    route two is the full 2-D tensor-grid propagation.  Radii are snapped to
    the tensor grid so both routes evaluate at identical points.
    """
    func, support = random_profile_func(seed)
    ctx = HarmonicContext(n=2, k=0)
    grid = GridSpec(grid_n, grid_l)
    x = grid.x_nodes()
    radii = x[(x >= r_lo) & (x <= r_hi)][::8]

    samples = oracle_2d_propagate(func, t, a, grid, support_max=support)
    oracle = oracle_2d_radius_sweep(samples, grid, radii)

    f1 = uniform_profile(func, support, 1536)
    evo = HankelEvolution(f1, ctx.order, radii)
    # |S_t f_P|(r) = alpha_2^{-1} (2 pi)^{-1/2} r^{-1/2} |H_t f1(r)|
    hankel = (np.abs(evo.field(t, a))
              / (ctx.alpha_n * SQRT_TWO_PI * np.sqrt(radii)))
    return {"radii": radii, "hankel": hankel, "oracle": oracle}


def default_time_set(count: int = 60) -> np.ndarray:
    """A fixed finite E subset of [0, 1] used by the inequality checks."""
    return np.linspace(0.0, 1.0, count)


def thm6_sides(seed: int, n: int = 2, k: int = 0,
               line_grid: GridSpec | None = None) -> tuple[float, float]:
    """Both sides of the dimension-reduction inequality

    alpha_n ||S_E^{*(n)} f_P|| <= alpha_1 sqrt(2) ||S_E^{*(1)} check(f1)|| + A_nu ||f1||.

    The left side is the radial maximal norm via the Hankel reduction; the
    right side evolves the line function with spectrum f1 (supported on the
    positive axis) on a periodic grid.  Truncations only lower the left side,
    so the check is one-sided safe.
    """
    from schromax.special import schur_constant_for_order

    func, support = random_profile_func(seed)
    f1 = uniform_profile(func, support, 768)
    ctx = HarmonicContext(n=n, k=k)
    times = default_time_set()
    out_nodes = np.linspace(0.02, 40.0, 2000)
    lhs = radial_sup_norm(f1, ctx.order, times, 2.0, out_nodes=out_nodes)

    if line_grid is None:
        line_grid = GridSpec(1024, 32.0)
    xi = line_grid.xi_nodes()
    coeffs = np.where(xi > 0, func(np.abs(xi)), 0.0)
    F = SpectralFunction1D(line_grid, coeffs)
    sup = sup_over_times(F, times, 2.0)
    line_norm = float(np.sqrt(np.sum(sup ** 2) * line_grid.dx))
    a_nu = schur_constant_for_order(ctx.order.two_nu)
    rhs = SQRT_TWO_PI * math.sqrt(2.0) * line_norm + a_nu * f1.norm()
    return lhs, rhs


def thm7_sides(seed: int) -> tuple[float, float]:
    """alpha_n ||S_E^{*(n)} f_P|| for (n, k) = (4, 0) and (2, 1).

    Both pairs share nu = 1, so the maximal norms coincide; each side goes
    through its own dimensional polar lift.
    """
    func, support = random_profile_func(seed)
    f1 = uniform_profile(func, support, 768)
    times = default_time_set()

    def side(n: int, k: int) -> float:
        ctx = HarmonicContext(n=n, k=k)
        out = np.linspace(0.02, 40.0, 2000)
        evo = HankelEvolution(f1, ctx.order, out)
        sup = evo.sup_field(times, 2.0)
        amp = (1.0 / ctx.alpha_n) * out ** ((1 - n) / 2.0) * sup
        w = trapezoid_weights(out)
        return ctx.alpha_n * math.sqrt(float(np.sum(w * amp ** 2 * out ** (n - 1))))

    return side(4, 0), side(2, 1)
