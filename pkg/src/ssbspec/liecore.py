"""Skew-Hermitian generator bases for compact symmetry actions on C^n.

Conventions used throughout the package:

* A symmetry algebra is stored as a stack of r skew-Hermitian n x n
  matrices.  Coupling constants are folded into the matrices themselves,
  and the stored basis is declared orthonormal: inner products between
  algebra elements are plain Euclidean dot products of coefficient
  vectors.
* Complex vectors realify to interleaved real vectors,
  (v1, v2, ...) -> (Re v1, Im v1, Re v2, Im v2, ...).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "AlgebraElement",
    "FactorLabel",
    "GeneratorError",
    "GeneratorSet",
    "ValidationReport",
    "act",
    "exponentiate",
    "random_algebra_element",
    "real_action_matrix",
    "realify",
    "unrealify",
    "validate_generators",
]

# Real coefficient vector with respect to a GeneratorSet basis.
AlgebraElement = np.ndarray


class GeneratorError(ValueError):
    """Structural problem with a generator set or an algebra element."""


@dataclass(frozen=True)
class FactorLabel:
    """Tags a block of generator indices as one group factor (metadata only)."""

    name: str
    indices: tuple[int, ...]  # 0-based positions into the generator stack
    coupling: float


@dataclass(frozen=True)
class GeneratorSet:
    """Basis of a compact symmetry algebra acting on C^n.

    Parameters
    ----------
    matrices : (r, n, n) complex ndarray
        One skew-Hermitian matrix per basis element, couplings folded in.
    factors : tuple of FactorLabel, optional
        Partition of the basis indices into group factors.
    """

    matrices: np.ndarray
    factors: tuple[FactorLabel, ...] | None = None

    def __post_init__(self):
        m = np.array(self.matrices, dtype=complex)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise GeneratorError(
                f"generators must form an (r, n, n) stack, got shape {m.shape}"
            )
        if m.shape[0] == 0 or m.shape[1] == 0:
            raise GeneratorError("generator stack must be nonempty")
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)
        if self.factors is not None:
            seen: set[int] = set()
            for f in self.factors:
                for i in f.indices:
                    if not 0 <= i < self.r or i in seen:
                        raise GeneratorError(
                            f"factor {f.name!r} has an out-of-range or repeated index {i}"
                        )
                    seen.add(i)

    @property
    def r(self) -> int:
        return self.matrices.shape[0]

    @property
    def n(self) -> int:
        return self.matrices.shape[1]

    def matrix_of(self, coeffs: AlgebraElement) -> np.ndarray:
        """The n x n matrix of the element with the given real coefficients."""
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (self.r,):
            raise GeneratorError(
                f"coefficient vector must have shape ({self.r},), got {c.shape}"
            )
        return np.einsum("r,rij->ij", c, self.matrices)

    def gram(self) -> np.ndarray:
        """Real Frobenius Gram matrix of the basis matrices."""
        return np.real(np.einsum("rij,sij->rs", np.conj(self.matrices), self.matrices))

    def project(self, mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Project matrices onto the real span of the basis.

        Parameters
        ----------
        mats : (..., n, n) complex ndarray

        Returns
        -------
        coeffs : (..., r) real ndarray
        defect : (...) real ndarray
            Frobenius distance between each matrix and its projection.
        """
        M = np.asarray(mats, dtype=complex)
        if M.shape[-2:] != (self.n, self.n):
            raise GeneratorError(f"expected trailing shape ({self.n}, {self.n})")
        b = np.real(np.einsum("rij,...ij->...r", np.conj(self.matrices), M))
        coeffs = np.linalg.solve(self.gram(), b[..., None])[..., 0]
        recon = np.einsum("...r,rij->...ij", coeffs, self.matrices)
        resid = (M - recon).reshape(M.shape[:-2] + (-1,))
        return coeffs, np.linalg.norm(resid, axis=-1)

    def structure_constants(self, tol_alg: float = 1e-10) -> np.ndarray:
        """c with [g_i, g_j] = sum_k c[i, j, k] g_k.

        Raises GeneratorError if some bracket leaves the span (the basis
        does not close under commutators).
        """
        prod = np.einsum("aij,bjk->abik", self.matrices, self.matrices)
        brackets = prod - np.transpose(prod, (1, 0, 2, 3))
        c, defect = self.project(brackets)
        scale = max(1.0, float(np.max(np.abs(brackets))))
        worst = float(np.max(defect))
        if worst > tol_alg * scale:
            raise GeneratorError(f"brackets leave the generator span (defect {worst:.3e})")
        return c

    def skew_defect(self) -> float:
        """Largest entry of g_i + g_i^dagger over the basis."""
        m = self.matrices
        return float(np.max(np.abs(m + np.conj(np.transpose(m, (0, 2, 1))))))

    def closure_defect(self) -> float:
        """Largest Frobenius distance of a bracket from the span."""
        prod = np.einsum("aij,bjk->abik", self.matrices, self.matrices)
        brackets = prod - np.transpose(prod, (1, 0, 2, 3))
        _, defect = self.project(brackets)
        return float(np.max(defect))


@dataclass(frozen=True)
class ValidationReport:
    skew_defect: float
    closure_defect: float
    tol_alg: float

    @property
    def ok(self) -> bool:
        return self.skew_defect <= self.tol_alg and self.closure_defect <= self.tol_alg


def validate_generators(gs: GeneratorSet, tol_alg: float = 1e-10) -> ValidationReport:
    """Check skew-Hermiticity and bracket closure of the basis."""
    return ValidationReport(gs.skew_defect(), gs.closure_defect(), tol_alg)


def act(gs: GeneratorSet, coeffs: AlgebraElement, v: np.ndarray) -> np.ndarray:
    """Apply the algebra element with the given coefficients to v in C^n."""
    vec = np.asarray(v, dtype=complex)
    if vec.shape != (gs.n,):
        raise GeneratorError(f"vector must have shape ({gs.n},), got {vec.shape}")
    return gs.matrix_of(coeffs) @ vec


def exponentiate(gs: GeneratorSet, coeffs: AlgebraElement) -> np.ndarray:
    """Group element exp(X) of the algebra element X; unitary for a valid basis."""
    return scipy.linalg.expm(gs.matrix_of(coeffs))


def realify(v: np.ndarray) -> np.ndarray:
    """Interleaved realification, (1+2j, 3) -> (1, 2, 3, 0).

    Acts on the last axis; an isometry from C^n to R^2n.
    """
    v = np.asarray(v, dtype=complex)
    out = np.empty(v.shape[:-1] + (2 * v.shape[-1],))
    out[..., 0::2] = v.real
    out[..., 1::2] = v.imag
    return out


def unrealify(x: np.ndarray) -> np.ndarray:
    """Inverse of realify; the last axis must have even length."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise GeneratorError("realified vectors have even length")
    return x[..., 0::2] + 1j * x[..., 1::2]


def real_action_matrix(gs: GeneratorSet, index: int) -> np.ndarray:
    """The 2n x 2n real matrix of generator `index` on realified vectors.

    Satisfies realify(g_i v) = R @ realify(v); antisymmetric when g_i is
    skew-Hermitian.
    """
    M = gs.matrices[index]
    n = gs.n
    R = np.zeros((2 * n, 2 * n))
    R[0::2, 0::2] = M.real
    R[0::2, 1::2] = -M.imag
    R[1::2, 0::2] = M.imag
    R[1::2, 1::2] = M.real
    return R


def random_algebra_element(
    gs: GeneratorSet,
    seed: int | np.random.Generator,
    scale: float = 1.0,
) -> AlgebraElement:
    """Deterministic pseudo-random coefficient vector, N(0, scale^2) entries."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.normal(0.0, scale, size=gs.r)
