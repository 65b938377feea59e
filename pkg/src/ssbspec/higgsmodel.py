"""Invariant scalar potentials and vacuum finding.

The built-in quartic potential is V(v) = -mu/2 |v|^2 + lambda/2 |v|^4 with
mu, lambda > 0, minimized on the sphere |v| = sqrt(mu / (2 lambda)).
Gradients and Hessians are taken in realified coordinates (interleaved
re/im pairs), where the vacuum sphere and curvature structure are plain
real calculus.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .liecore import (
    GeneratorSet,
    exponentiate,
    random_algebra_element,
    realify,
    unrealify,
)

__all__ = [
    "CustomPotential",
    "HiggsModel",
    "NotAVacuumError",
    "PotentialError",
    "QuarticPotential",
    "VacuumSolveError",
    "check_potential_invariance",
    "find_vacuum",
    "potential_gradient",
    "potential_hessian",
    "potential_value",
]

TOL_VAC = 1e-9


class PotentialError(ValueError):
    """Bad potential parameters or a bad solver seed."""


class NotAVacuumError(ValueError):
    """A supplied point fails the stationarity or curvature conditions."""


class VacuumSolveError(RuntimeError):
    """Minimization did not converge; carries the last iterate."""

    def __init__(self, message: str, last_point: np.ndarray, iterations: int):
        super().__init__(message)
        self.last_point = last_point
        self.iterations = iterations


@dataclass(frozen=True)
class QuarticPotential:
    """Rotation-invariant quartic potential with analytic derivatives."""

    mu: float
    lam: float

    def __post_init__(self):
        if not (self.mu > 0 and self.lam > 0):
            raise PotentialError(
                f"quartic potential needs mu > 0 and lambda > 0, got mu={self.mu}, lambda={self.lam}"
            )

    @property
    def vacuum_radius(self) -> float:
        return float(np.sqrt(self.mu / (2.0 * self.lam)))

    def value(self, v: np.ndarray) -> float:
        s = float(np.vdot(v, v).real)
        return -0.5 * self.mu * s + 0.5 * self.lam * s * s

    def gradient(self, v: np.ndarray) -> np.ndarray:
        x = realify(v)
        s = float(x @ x)
        return (-self.mu + 2.0 * self.lam * s) * x

    def hessian(self, v: np.ndarray) -> np.ndarray:
        x = realify(v)
        s = float(x @ x)
        return (-self.mu + 2.0 * self.lam * s) * np.eye(x.size) + 4.0 * self.lam * np.outer(x, x)


@dataclass(frozen=True)
class CustomPotential:
    """User-supplied potential with finite-difference fallbacks.

    value_fn takes a complex vector; gradient_fn/hessian_fn, when given,
    must work in realified coordinates.  Missing derivatives are filled
    in by central differences with step fd_step.
    """

    value_fn: Callable[[np.ndarray], float]
    gradient_fn: Callable[[np.ndarray], np.ndarray] | None = None
    hessian_fn: Callable[[np.ndarray], np.ndarray] | None = None
    fd_step: float = 1e-5

    def value(self, v: np.ndarray) -> float:
        return float(self.value_fn(np.asarray(v, dtype=complex)))

    def gradient(self, v: np.ndarray) -> np.ndarray:
        if self.gradient_fn is not None:
            return np.asarray(self.gradient_fn(v), dtype=float)
        x = realify(v)
        h = self.fd_step * max(1.0, float(np.linalg.norm(x)))
        grad = np.empty(x.size)
        for k in range(x.size):
            step = np.zeros(x.size)
            step[k] = h
            grad[k] = (
                self.value(unrealify(x + step)) - self.value(unrealify(x - step))
            ) / (2.0 * h)
        return grad

    def hessian(self, v: np.ndarray) -> np.ndarray:
        if self.hessian_fn is not None:
            return np.asarray(self.hessian_fn(v), dtype=float)
        # central differences of the (possibly finite-difference) gradient
        x = realify(v)
        h = self.fd_step * max(1.0, float(np.linalg.norm(x)))
        H = np.empty((x.size, x.size))
        for k in range(x.size):
            step = np.zeros(x.size)
            step[k] = h
            gp = self.gradient(unrealify(x + step))
            gm = self.gradient(unrealify(x - step))
            H[:, k] = (gp - gm) / (2.0 * h)
        return 0.5 * (H + H.T)


def potential_value(p, v: np.ndarray) -> float:
    return p.value(np.asarray(v, dtype=complex))


def potential_gradient(p, v: np.ndarray) -> np.ndarray:
    """Realified gradient, shape (2n,)."""
    return p.gradient(np.asarray(v, dtype=complex))


def potential_hessian(p, v: np.ndarray) -> np.ndarray:
    """Realified Hessian, shape (2n, 2n)."""
    return p.hessian(np.asarray(v, dtype=complex))


@dataclass(frozen=True)
class HiggsModel:
    """Generator set, invariant potential, and (optionally) a pinned vacuum.

    When a vacuum is supplied it is verified at construction: the
    gradient must vanish and the Hessian must be positive semidefinite,
    both to tol_vac scaled tolerances.
    """

    generators: GeneratorSet
    potential: object
    vacuum: np.ndarray | None = None

    def __post_init__(self):
        if self.vacuum is None:
            return
        v = np.array(self.vacuum, dtype=complex)
        if v.shape != (self.generators.n,):
            raise NotAVacuumError(
                f"vacuum must have shape ({self.generators.n},), got {v.shape}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "vacuum", v)
        grad = potential_gradient(self.potential, v)
        hess = potential_hessian(self.potential, v)
        scale = 1.0 + float(np.max(np.abs(hess)))
        if float(np.linalg.norm(grad)) > TOL_VAC * scale:
            raise NotAVacuumError(
                f"gradient norm {np.linalg.norm(grad):.3e} at the supplied vacuum"
            )
        lo = float(np.linalg.eigvalsh(hess).min())
        if lo < -TOL_VAC * scale:
            raise NotAVacuumError(f"Hessian has negative eigenvalue {lo:.3e} at the supplied vacuum")


def find_vacuum(
    model: HiggsModel,
    seed_point: np.ndarray,
    *,
    tol_vac: float = TOL_VAC,
    max_iter: int = 200,
) -> np.ndarray:
    """Minimize the potential from a nonzero seed point.

    Damped Newton with backtracking in realified coordinates; indefinite
    Hessians are shifted toward gradient descent.  Returns the vacuum as
    a complex vector; raises VacuumSolveError on non-convergence.
    """
    p = model.potential
    x = realify(np.asarray(seed_point, dtype=complex))
    if not np.any(x):
        raise PotentialError("seed point must be nonzero")

    def val(xr):
        return potential_value(p, unrealify(xr))

    f = val(x)
    for it in range(max_iter):
        v = unrealify(x)
        g = potential_gradient(p, v)
        gn = float(np.linalg.norm(g))
        H = potential_hessian(p, v)
        scale = 1.0 + float(np.max(np.abs(H)))
        if gn < tol_vac:
            lo = float(np.linalg.eigvalsh(H).min())
            if lo >= -tol_vac * scale:
                break
            # stationary but not a minimum: slide off along the most
            # negative curvature direction
            w, W = np.linalg.eigh(H)
            x = x + 0.1 * max(1.0, float(np.linalg.norm(x))) * W[:, 0]
            f = val(x)
            continue
        lo = float(np.linalg.eigvalsh(H).min())
        if lo < 1e-12 * scale:
            H = H + (abs(lo) + 1e-8 * scale) * np.eye(x.size)
        step = -np.linalg.solve(H, g)
        if step @ g >= 0.0:
            step = -g
        t, slope = 1.0, float(step @ g)
        while val(x + t * step) > f + 1e-4 * t * slope:
            t *= 0.5
            if t < 1e-14:
                step, t = -g, 1.0 / scale
                break
        x = x + t * step
        f = val(x)
    else:
        raise VacuumSolveError(
            f"no vacuum within {max_iter} iterations (gradient norm {gn:.3e})",
            unrealify(x),
            max_iter,
        )

    # one least-squares Newton polish; the Hessian is singular along the
    # vacuum orbit, so use a pseudoinverse
    v = unrealify(x)
    g = potential_gradient(p, v)
    H = potential_hessian(p, v)
    x = x - np.linalg.pinv(H, rcond=1e-10, hermitian=True) @ g
    return unrealify(x)


def check_potential_invariance(
    model: HiggsModel,
    samples: int = 100,
    seed: int = 0,
    scale: float = 1.0,
) -> float:
    """Worst |V(exp(X) v) - V(v)| over seeded random X and v.

    Order-of-draw is fixed, so the result is deterministic for a given
    seed and sample count.
    """
    rng = np.random.default_rng(seed)
    gs = model.generators
    worst = 0.0
    for _ in range(samples):
        coeffs = random_algebra_element(gs, rng, scale)
        v = rng.normal(size=gs.n) + 1j * rng.normal(size=gs.n)
        U = exponentiate(gs, coeffs)
        defect = abs(potential_value(model.potential, U @ v) - potential_value(model.potential, v))
        worst = max(worst, defect)
    return worst


def warn_if_not_vacuum(model: HiggsModel, v0: np.ndarray, tol_vac: float = TOL_VAC) -> None:
    """Emit a warning when v0 is not a stationary minimum of the potential."""
    grad = potential_gradient(model.potential, v0)
    hess = potential_hessian(model.potential, v0)
    scale = 1.0 + float(np.max(np.abs(hess)))
    if (
        float(np.linalg.norm(grad)) > tol_vac * scale
        or float(np.linalg.eigvalsh(hess).min()) < -tol_vac * scale
    ):
        warnings.warn("supplied point is not a vacuum of the potential", stacklevel=3)
