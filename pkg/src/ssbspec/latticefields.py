"""Discretized field theory on a periodic grid.

Conventions:
  - grid axes come first; field components trail (matter (..., n), gauge
    coefficient fields (..., D, r), transforms (..., n, n)).
  - derivatives are central differences with periodic wrap, O(h^2).
  - gauge fields are stored as real generator coefficients; contraction
    of algebra indices is the plain Euclidean coefficient product.
  - the metric is diagonal: all +1, or (+1, -1, ..., -1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .breaking import SpectrumResult
from .higgsmodel import HiggsModel
from .liecore import GeneratorSet, realify, unrealify

__all__ = [
    "ActionConfig",
    "ExpansionCheck",
    "Grid",
    "LatticeError",
    "NonGroupTransformError",
    "NotUnitaryGaugeError",
    "OrderMeasurement",
    "TransformedGauge",
    "central_difference",
    "convergence_orders",
    "covariant_derivative",
    "derivative_covariance_defect",
    "field_strength",
    "gauge_matrices",
    "gauge_transform_gauge",
    "gauge_transform_matter",
    "higgs_density",
    "klein_gordon_density",
    "quadratic_expansion_check",
    "smooth_gauge_field",
    "smooth_multiplet_field",
    "smooth_scalar_field",
    "smooth_transform_field",
    "strength_covariance_defect",
    "total_action",
    "yang_mills_density",
]


class LatticeError(ValueError):
    pass


class NonGroupTransformError(LatticeError):
    """A transform field is not valued in the represented group."""


class NotUnitaryGaugeError(LatticeError):
    """A perturbation has components along the orbit directions."""


@dataclass(frozen=True)
class Grid:
    """Periodic uniform grid with a diagonal metric."""

    dim: int
    shape: tuple[int, ...]
    spacing: float
    metric: str = "euclidean"

    def __post_init__(self):
        if self.dim < 1:
            raise LatticeError("grid dimension must be at least 1")
        object.__setattr__(self, "shape", tuple(int(m) for m in self.shape))
        if len(self.shape) != self.dim:
            raise LatticeError(f"expected {self.dim} extents, got {len(self.shape)}")
        if any(m < 4 for m in self.shape):
            raise LatticeError("each extent must be at least 4")
        if not self.spacing > 0:
            raise LatticeError("spacing must be positive")
        if self.metric not in ("euclidean", "lorentzian"):
            raise LatticeError(f"unknown metric {self.metric!r}")

    @property
    def signs(self) -> np.ndarray:
        s = np.ones(self.dim)
        if self.metric == "lorentzian":
            s[1:] = -1.0
        return s

    @property
    def site_count(self) -> int:
        return int(np.prod(self.shape))

    @property
    def volume_element(self) -> float:
        return self.spacing**self.dim

    def fractions(self) -> np.ndarray:
        """Per-axis site positions as fractions of the period, shape (D, *shape)."""
        axes = [np.arange(m) / m for m in self.shape]
        return np.stack(np.meshgrid(*axes, indexing="ij"))

    def refined(self, factor: int) -> "Grid":
        """Same physical box, factor times the resolution."""
        return Grid(
            dim=self.dim,
            shape=tuple(m * factor for m in self.shape),
            spacing=self.spacing / factor,
            metric=self.metric,
        )


def _check_grid_axes(grid: Grid, field: np.ndarray, trailing: int, what: str):
    if field.shape[: grid.dim] != grid.shape or field.ndim != grid.dim + trailing:
        raise LatticeError(
            f"{what} must have shape {grid.shape} + {trailing} trailing axes, "
            f"got {field.shape}"
        )


def central_difference(grid: Grid, field: np.ndarray, mu: int) -> np.ndarray:
    """(f(x+h e_mu) - f(x-h e_mu)) / 2h with periodic wrap."""
    if not 0 <= mu < grid.dim:
        raise LatticeError(f"direction {mu} out of range for dimension {grid.dim}")
    return (np.roll(field, -1, axis=mu) - np.roll(field, 1, axis=mu)) / (2.0 * grid.spacing)


def gauge_transform_matter(sigma: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Pointwise sigma(x) psi(x)."""
    sigma = np.asarray(sigma, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if sigma.shape[:-2] != psi.shape[:-1] or sigma.shape[-1] != psi.shape[-1]:
        raise LatticeError(
            f"transform shape {sigma.shape} does not match matter shape {psi.shape}"
        )
    return np.einsum("...ij,...j->...i", sigma, psi)


def gauge_matrices(gs: GeneratorSet, a: np.ndarray) -> np.ndarray:
    """Coefficient field (..., r) to matrix field (..., n, n)."""
    return np.einsum("...r,rij->...ij", np.asarray(a, dtype=float), gs.matrices)


@dataclass(frozen=True)
class TransformedGauge:
    coefficients: np.ndarray  # (*shape, D, r)
    projection_defect: float  # worst site defect of the span projection


def gauge_transform_gauge(
    gs: GeneratorSet,
    grid: Grid,
    sigma: np.ndarray,
    a: np.ndarray,
    tol_proj: float | None = None,
) -> TransformedGauge:
    """A'_mu = sigma A_mu sigma^-1 - (d_mu sigma) sigma^-1, in coefficients.

    The derivative term is a central difference, so for a smooth group
    valued sigma the result leaves the generator span by O(h^2); the
    projection defect records how much.  Passing tol_proj makes a larger
    defect an error.  A sigma that is not sitewise unitary is rejected.
    """
    sigma = np.asarray(sigma, dtype=complex)
    a = np.asarray(a, dtype=float)
    _check_grid_axes(grid, sigma, 2, "transform field")
    _check_grid_axes(grid, a, 2, "gauge field")
    if a.shape[grid.dim] != grid.dim or a.shape[-1] != gs.r:
        raise LatticeError(f"gauge field must end in ({grid.dim}, {gs.r})")
    n = gs.n
    eye = np.eye(n)
    unitary_defect = np.max(np.abs(np.einsum("...ij,...kj->...ik", sigma, sigma.conj()) - eye))
    if unitary_defect > 1e-8:
        raise NonGroupTransformError(
            f"transform field is not unitary (defect {float(unitary_defect):.3e})"
        )
    sigma_inv = sigma.conj().swapaxes(-1, -2)
    mats = gauge_matrices(gs, a)  # (*shape, D, n, n)
    conjugated = np.einsum("...ij,...djk,...kl->...dil", sigma, mats, sigma_inv)
    dsig = np.stack(
        [central_difference(grid, sigma, mu) for mu in range(grid.dim)], axis=grid.dim
    )
    inhomog = np.einsum("...dij,...jk->...dik", dsig, sigma_inv)
    coeffs, defect = gs.project(conjugated - inhomog)
    worst = float(np.max(defect)) if defect.size else 0.0
    if tol_proj is not None and worst > tol_proj:
        raise NonGroupTransformError(
            f"transformed field leaves the generator span (defect {worst:.3e} > {tol_proj:.3e})"
        )
    return TransformedGauge(coefficients=coeffs, projection_defect=worst)


def covariant_derivative(
    gs: GeneratorSet, grid: Grid, a: np.ndarray, psi: np.ndarray, mu: int
) -> np.ndarray:
    """d_mu psi + A_mu psi."""
    psi = np.asarray(psi, dtype=complex)
    _check_grid_axes(grid, psi, 1, "matter field")
    dpsi = central_difference(grid, psi, mu)
    if a is None:
        return dpsi
    a = np.asarray(a, dtype=float)
    return dpsi + np.einsum("...r,rij,...j->...i", a[..., mu, :], gs.matrices, psi)


def field_strength(
    gs: GeneratorSet, grid: Grid, a: np.ndarray, tol_alg: float = 1e-10
) -> np.ndarray:
    """F_{mu nu} = d_mu A_nu - d_nu A_mu + [A_mu, A_nu], in coefficients.

    The bracket is evaluated through the structure constants, so closure
    is exact; generator sets that do not close raise here.
    Returns shape (*grid, D, D, r), antisymmetric in (mu, nu).
    """
    a = np.asarray(a, dtype=float)
    _check_grid_axes(grid, a, 2, "gauge field")
    c = gs.structure_constants(tol_alg=tol_alg)
    D = grid.dim
    F = np.zeros(grid.shape + (D, D, gs.r))
    for mu in range(D):
        for nu in range(mu + 1, D):
            curl = central_difference(grid, a[..., nu, :], mu) - central_difference(
                grid, a[..., mu, :], nu
            )
            bracket = np.einsum("...i,...j,ijk->...k", a[..., mu, :], a[..., nu, :], c)
            F[..., mu, nu, :] = curl + bracket
            F[..., nu, mu, :] = -(curl + bracket)
    return F


def yang_mills_density(grid: Grid, f: np.ndarray) -> np.ndarray:
    """-1/4 F^{mu nu} F_{mu nu}, algebra indices contracted Euclidean."""
    f = np.asarray(f, dtype=float)
    s = grid.signs
    return -0.25 * np.einsum("m,n,...mnr,...mnr->...", s, s, f, f)


def klein_gordon_density(
    gs: GeneratorSet, grid: Grid, a: np.ndarray | None, psi: np.ndarray, mass: float
) -> np.ndarray:
    """(nabla^mu psi)^dag (nabla_mu psi) - m^2 psi^dag psi."""
    psi = np.asarray(psi, dtype=complex)
    s = grid.signs
    out = -(mass**2) * np.einsum("...i,...i->...", psi.conj(), psi).real
    for mu in range(grid.dim):
        grad = covariant_derivative(gs, grid, a, psi, mu)
        out = out + s[mu] * np.einsum("...i,...i->...", grad.conj(), grad).real
    return out


def _potential_field(potential, phi: np.ndarray) -> np.ndarray:
    return np.apply_along_axis(lambda v: potential.value(v), -1, phi)


def higgs_density(
    gs: GeneratorSet, grid: Grid, a: np.ndarray | None, phi: np.ndarray, potential
) -> np.ndarray:
    """(nabla^mu phi)^dag (nabla_mu phi) - V(phi)."""
    phi = np.asarray(phi, dtype=complex)
    s = grid.signs
    out = -_potential_field(potential, phi)
    for mu in range(grid.dim):
        grad = covariant_derivative(gs, grid, a, phi, mu)
        out = out + s[mu] * np.einsum("...i,...i->...", grad.conj(), grad).real
    return out


@dataclass(frozen=True)
class ActionConfig:
    """Field content entering the total action; omitted pieces contribute 0."""

    grid: Grid
    generators: GeneratorSet | None = None
    gauge: np.ndarray | None = None  # (*shape, D, r)
    matter: np.ndarray | None = None  # (*shape, n), Klein-Gordon
    matter_mass: float = 0.0
    higgs: np.ndarray | None = None  # (*shape, n)
    potential: object | None = None


def total_action(config: ActionConfig) -> float:
    """h^D weighted sum of the selected densities over all sites."""
    grid = config.grid
    total = np.zeros(grid.shape)
    if config.gauge is not None:
        if config.generators is None:
            raise LatticeError("gauge sector requires generators")
        total = total + yang_mills_density(
            grid, field_strength(config.generators, grid, config.gauge)
        )
    if config.matter is not None:
        total = total + klein_gordon_density(
            config.generators, grid, config.gauge, config.matter, config.matter_mass
        )
    if config.higgs is not None:
        if config.potential is None:
            raise LatticeError("higgs sector requires a potential")
        total = total + higgs_density(
            config.generators, grid, config.gauge, config.higgs, config.potential
        )
    return grid.volume_element * float(np.sum(total))


# ---------------------------------------------------------------------------
# smooth test fields, resolution independent for fixed seed


def _wave_set(rng: np.random.Generator, dim: int, terms: int):
    # lowest nonzero wavevectors only; higher harmonics would push the
    # h^2 error constants up and blur order measurements on coarse grids
    waves = []
    for _ in range(terms):
        k = rng.integers(-1, 2, size=dim)
        if not np.any(k):
            k[rng.integers(dim)] = 1
        waves.append((k, rng.uniform(0, 2 * np.pi), rng.normal()))
    return waves


def _eval_waves(grid: Grid, waves, scale: float) -> np.ndarray:
    frac = grid.fractions()  # (D, *shape)
    out = np.zeros(grid.shape)
    for k, phase, amp in waves:
        angle = 2.0 * np.pi * np.tensordot(k, frac, axes=(0, 0)) + phase
        out = out + amp * np.sin(angle)
    return scale * out / max(1, len(waves))


def smooth_scalar_field(grid: Grid, seed: int, terms: int = 3, scale: float = 1.0) -> np.ndarray:
    """Periodic band-limited random field; refining the grid resamples
    the same continuum function."""
    rng = np.random.default_rng(seed)
    return _eval_waves(grid, _wave_set(rng, grid.dim, terms), scale)


def smooth_multiplet_field(
    grid: Grid, n: int, seed: int, terms: int = 3, scale: float = 1.0
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(2 * n):
        parts.append(_eval_waves(grid, _wave_set(rng, grid.dim, terms), scale))
    stacked = np.stack(parts, axis=-1)
    return stacked[..., :n] + 1j * stacked[..., n:]


def smooth_gauge_field(
    grid: Grid, r: int, seed: int, terms: int = 3, scale: float = 1.0
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    comps = [
        [_eval_waves(grid, _wave_set(rng, grid.dim, terms), scale) for _ in range(r)]
        for _ in range(grid.dim)
    ]
    return np.stack([np.stack(row, axis=-1) for row in comps], axis=-2)


def smooth_transform_field(
    gs: GeneratorSet, grid: Grid, seed: int, terms: int = 3, scale: float = 0.4
) -> np.ndarray:
    """sigma(x) = exp(sum_i c_i(x) g_i) with smooth coefficient fields."""
    rng = np.random.default_rng(seed)
    coeffs = np.stack(
        [_eval_waves(grid, _wave_set(rng, grid.dim, terms), scale) for _ in range(gs.r)],
        axis=-1,
    )
    return scipy.linalg.expm(np.einsum("...r,rij->...ij", coeffs, gs.matrices))


# ---------------------------------------------------------------------------
# covariance measurements


def derivative_covariance_defect(
    gs: GeneratorSet,
    grid: Grid,
    a: np.ndarray,
    psi: np.ndarray,
    sigma: np.ndarray,
) -> float:
    """Root-mean-square of nabla'_mu (sigma psi) - sigma nabla_mu psi.

    RMS over sites, components, and directions; the mean-square norm
    keeps refinement ratios clean where a max would jump between sites.
    """
    a_prime = gauge_transform_gauge(gs, grid, sigma, a).coefficients
    psi_prime = gauge_transform_matter(sigma, psi)
    gaps = []
    for mu in range(grid.dim):
        lhs = covariant_derivative(gs, grid, a_prime, psi_prime, mu)
        rhs = gauge_transform_matter(sigma, covariant_derivative(gs, grid, a, psi, mu))
        gaps.append(np.abs(lhs - rhs) ** 2)
    return float(np.sqrt(np.mean(gaps)))


def strength_covariance_defect(
    gs: GeneratorSet, grid: Grid, a: np.ndarray, sigma: np.ndarray
) -> float:
    """Root-mean-square of F(A') - sigma F(A) sigma^-1, as matrices."""
    a_prime = gauge_transform_gauge(gs, grid, sigma, a).coefficients
    f_prime = gauge_matrices(gs, field_strength(gs, grid, a_prime))
    f = gauge_matrices(gs, field_strength(gs, grid, a))
    sigma_inv = sigma.conj().swapaxes(-1, -2)
    conj = np.einsum("...ij,...mnjk,...kl->...mnil", sigma, f, sigma_inv)
    return float(np.sqrt(np.mean(np.abs(f_prime - conj) ** 2)))


@dataclass(frozen=True)
class OrderMeasurement:
    defects: tuple[float, ...]  # per grid, coarse to fine
    orders: tuple[float, ...]  # log2 ratios between consecutive grids


def convergence_orders(
    gs: GeneratorSet,
    grid: Grid,
    seed: int = 0,
    refinements: int = 2,
    measure: Callable[[GeneratorSet, Grid, np.ndarray, np.ndarray, np.ndarray], float]
    | None = None,
) -> OrderMeasurement:
    """Measured convergence order of a covariance defect under refinement.

    The smooth test fields are resampled from the same continuum data on
    each grid, so the defect sequence estimates the discretization order
    (2 for central differences).
    """
    if measure is None:
        measure = derivative_covariance_defect
    defects = []
    for level in range(refinements + 1):
        g = grid.refined(2**level)
        a = smooth_gauge_field(g, gs.r, seed)
        psi = smooth_multiplet_field(g, gs.n, seed + 1)
        sigma = smooth_transform_field(gs, g, seed + 2)
        if measure is strength_covariance_defect:
            defects.append(measure(gs, g, a, sigma))
        else:
            defects.append(measure(gs, g, a, psi, sigma))
    orders = tuple(
        float(np.log2(defects[k] / defects[k + 1])) for k in range(len(defects) - 1)
    )
    return OrderMeasurement(defects=tuple(float(x) for x in defects), orders=orders)


# ---------------------------------------------------------------------------
# quadratic expansion of the combined higgs + gauge action


@dataclass(frozen=True)
class ExpansionCheck:
    eps: float
    remainder: float  # max-norm density gap at eps
    remainder_half: float  # the same at eps/2
    ratio: float  # remainder / remainder_half, ~8 for a cubic remainder
    cross_term_max: float  # gradient-orbit coupling, 0 in unitary gauge


def quadratic_expansion_check(
    model: HiggsModel,
    spec: SpectrumResult,
    eps: float,
    grid: Grid | None = None,
    seed: int = 0,
    delta_phi: np.ndarray | None = None,
    gauge: np.ndarray | None = None,
) -> ExpansionCheck:
    """Compare the full action density against its quadratic truncation.

    The scalar perturbation lives in the transverse (unitary gauge)
    subspace, so the gradient-orbit cross term cancels exactly and the
    remainder is third order in eps: halving eps divides it by ~8.
    A delta_phi with components along the orbit directions is rejected.
    """
    gs = model.generators
    v0 = spec.vacuum
    if grid is None:
        grid = Grid(dim=2, shape=(8, 8), spacing=0.125)
    transverse = spec.transverse_basis  # (2n - d, 2n)
    if delta_phi is None:
        rng_base = 1000 * (seed + 1)
        weights = np.stack(
            [
                smooth_scalar_field(grid, rng_base + j, scale=1.0)
                for j in range(transverse.shape[0])
            ],
            axis=-1,
        )
        delta_phi = unrealify(weights @ transverse)
    else:
        delta_phi = np.asarray(delta_phi, dtype=complex)
        _check_grid_axes(grid, delta_phi, 1, "scalar perturbation")
        orbit_components = np.einsum(
            "ok,...k->...o", spec.orbit_basis, realify(delta_phi)
        )
        worst = float(np.max(np.abs(orbit_components))) if orbit_components.size else 0.0
        if worst > 1e-8 * max(1.0, float(np.max(np.abs(delta_phi)))):
            raise NotUnitaryGaugeError(
                f"perturbation has orbit components up to {worst:.3e}"
            )
    if gauge is None:
        gauge = smooth_gauge_field(grid, gs.r, 7777 + seed)
    else:
        gauge = np.asarray(gauge, dtype=float)
        _check_grid_axes(grid, gauge, 2, "gauge perturbation")

    s = grid.signs
    hess = model.potential.hessian(v0)
    v_at_vacuum = model.potential.value(v0)
    mass_form = spec.mass_form_matrix

    def full_density(e: float) -> np.ndarray:
        phi = v0 + e * delta_phi
        return higgs_density(gs, grid, e * gauge, phi, model.potential) + yang_mills_density(
            grid, field_strength(gs, grid, e * gauge)
        )

    def quadratic_density(e: float) -> np.ndarray:
        out = np.full(grid.shape, -v_at_vacuum)
        y = realify(delta_phi)
        out = out - 0.5 * e * e * np.einsum("...i,ij,...j->...", y, hess, y)
        for mu in range(grid.dim):
            dgrad = central_difference(grid, delta_phi, mu)
            out = out + s[mu] * e * e * np.einsum("...i,...i->...", dgrad.conj(), dgrad).real
            a_mu = gauge[..., mu, :]
            out = out + s[mu] * e * e * np.einsum("...i,ij,...j->...", a_mu, mass_form, a_mu)
        for mu in range(grid.dim):
            for nu in range(grid.dim):
                if mu == nu:
                    continue
                lin = central_difference(grid, gauge[..., nu, :], mu) - central_difference(
                    grid, gauge[..., mu, :], nu
                )
                out = out - 0.25 * e * e * s[mu] * s[nu] * np.einsum(
                    "...r,...r->...", lin, lin
                )
        return out

    def remainder(e: float) -> float:
        return float(np.max(np.abs(full_density(e) - quadratic_density(e))))

    acted_v0 = np.einsum("...r,rij,j->...i", gauge, gs.matrices, v0)  # (*shape, D, n)
    cross = 0.0
    for mu in range(grid.dim):
        dgrad = central_difference(grid, delta_phi, mu)
        term = 2.0 * np.einsum("...i,...i->...", dgrad.conj(), acted_v0[..., mu, :]).real
        cross = max(cross, float(np.max(np.abs(s[mu] * eps * eps * term))))

    r1 = remainder(eps)
    r2 = remainder(0.5 * eps)
    ratio = r1 / r2 if r2 > 0 else float("nan")
    return ExpansionCheck(
        eps=eps,
        remainder=r1,
        remainder_half=r2,
        ratio=ratio,
        cross_term_max=cross,
    )
