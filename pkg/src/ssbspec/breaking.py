"""Symmetry breaking spectra: boson masses, Goldstone counting, Higgs modes.

Given a generator basis acting on C^n and a vacuum v0, the central object
is the mass form m(A, B) = Re <A v0, B v0>.  Its kernel is the unbroken
subalgebra; its nonzero eigenvalues give the boson masses M = sqrt(2 eig).
The realified potential Hessian at v0 splits into the orbit tangent
directions (flat, one per broken generator) and transverse directions
whose eigenvalues 2 m^2 give the scalar masses.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .higgsmodel import HiggsModel, NotAVacuumError, potential_gradient, potential_hessian, potential_value
from .liecore import GeneratorSet, realify, unrealify

__all__ = [
    "InconsistentSpectrumError",
    "MassForm",
    "OrbitSplit",
    "QuadraticReport",
    "ShiftDecomposition",
    "SpectrumResult",
    "StabilizerSplit",
    "boson_spectrum",
    "decompose_shift",
    "mass_form",
    "orbit_split",
    "quadratic_lagrangian",
    "spectrum",
    "stabilizer_split",
]

TOL_RANK = 1e-8
CLUSTER_GAP = 1e-8


class InconsistentSpectrumError(RuntimeError):
    """Rank decisions from different routes disagree."""


def _acted(gs: GeneratorSet, v0: np.ndarray) -> np.ndarray:
    """Rows realify(g_i v0), shape (r, 2n)."""
    v = np.asarray(v0, dtype=complex)
    if v.shape != (gs.n,):
        raise ValueError(f"vacuum must have shape ({gs.n},), got {v.shape}")
    return realify(gs.matrices @ v)


def _canonical_rows(rows: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Fix each row's sign so its first significant entry is positive."""
    rows = np.array(rows)
    for row in rows:
        big = np.flatnonzero(np.abs(row) > tol * max(1.0, np.abs(row).max()))
        if big.size and row[big[0]] < 0:
            row *= -1.0
    return rows + 0.0  # flush negative zeros


def _sort_clusters(values: np.ndarray, rows: np.ndarray, gap: float) -> tuple[np.ndarray, np.ndarray]:
    """Order rows by descending value; within near-degenerate clusters the
    rows are sign-fixed and sorted lexicographically for determinism."""
    order = np.argsort(-values, kind="stable")
    values, rows = values[order], _canonical_rows(rows[order])
    scale = max(1.0, float(np.abs(values).max())) if values.size else 1.0
    out_vals, out_rows, start = [], [], 0
    for k in range(1, values.size + 1):
        if k == values.size or values[start] - values[k] > gap * scale:
            block = rows[start:k]
            vals = values[start:k]
            idx = np.lexsort(block.T[::-1])
            out_rows.append(block[idx])
            out_vals.append(vals[idx])
            start = k
    if not out_rows:
        return values, rows
    return np.concatenate(out_vals), np.concatenate(out_rows)


@dataclass(frozen=True)
class MassForm:
    """Symmetric PSD matrix m_ij = Re <g_i v0, g_j v0> on coefficient vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(np.asarray(a) @ self.matrix @ np.asarray(b))


def mass_form(gs: GeneratorSet, v0: np.ndarray) -> MassForm:
    """Mass form of the vacuum v0; exactly symmetric by construction."""
    T = _acted(gs, v0)
    return MassForm(T @ T.T)


@dataclass(frozen=True)
class StabilizerSplit:
    """Orthonormal split of the coefficient space at a vacuum.

    unbroken rows annihilate v0; broken rows span the complement.
    """

    unbroken: np.ndarray  # (r - d, r)
    broken: np.ndarray  # (d, r)
    singular_values: np.ndarray

    @property
    def d(self) -> int:
        return self.broken.shape[0]


def stabilizer_split(gs: GeneratorSet, v0: np.ndarray, tol_rank: float = TOL_RANK) -> StabilizerSplit:
    """Kernel / complement split of X -> X v0 on coefficient vectors.

    Rank decisions use a relative singular value threshold; v0 = 0 gives
    an all-unbroken split.
    """
    A = _acted(gs, v0).T  # (2n, r)
    _, s, Vt = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol_rank * smax)) if smax > 0 else 0
    sv = np.zeros(gs.r)
    sv[: s.size] = s
    return StabilizerSplit(
        unbroken=_canonical_rows(Vt[rank:]),
        broken=_canonical_rows(Vt[:rank]),
        singular_values=sv,
    )


def boson_spectrum(
    mf: MassForm,
    split: StabilizerSplit,
    tol_rank: float = TOL_RANK,
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize the mass form.

    Returns (basis, masses): basis rows are an orthonormal eigenbasis of
    coefficient space ordered broken-first by descending mass, and masses
    are M_i = sqrt(2 eig_i), zero on the unbroken tail.  The number of
    nonzero masses is pinned to split.d; a PSD violation or a rank
    mismatch with the eigenvalue gaps raises.
    """
    eigvals, eigvecs = np.linalg.eigh(mf.matrix)
    scale = max(1.0, float(eigvals.max(initial=0.0)))
    if eigvals.min(initial=0.0) < -1e-10 * scale:
        raise InconsistentSpectrumError(
            f"mass form has negative eigenvalue {eigvals.min():.3e}"
        )
    d = split.d
    r = eigvals.size
    # eigenvalues of the mass form are squared singular values of the
    # orbit map, so the stabilizer rank must match the near-zero count;
    # the squared threshold would undershoot machine noise, hence the floor
    thr = max((tol_rank * split.singular_values.max(initial=0.0)) ** 2, 5e-14 * scale)
    near_zero = int(np.sum(eigvals <= thr))
    if r - near_zero != d:
        raise InconsistentSpectrumError(
            f"mass-form rank {r - near_zero} disagrees with stabilizer rank {d}"
        )
    vals, rows = _sort_clusters(eigvals, eigvecs.T, CLUSTER_GAP)
    masses = np.sqrt(2.0 * np.clip(vals, 0.0, None))
    masses[d:] = 0.0
    return rows, masses


@dataclass(frozen=True)
class OrbitSplit:
    """Orthonormal split of realified field space at a vacuum.

    orbit rows span the gauge-orbit tangent realify(g v0); transverse
    rows are Hessian eigendirections of the complement.
    """

    orbit: np.ndarray  # (d, 2n)
    transverse: np.ndarray  # (2n - d, 2n)
    higgs_masses: np.ndarray  # (2n - d,) descending
    hessian_eigenvalues: np.ndarray  # full realified spectrum, descending then zeros


def orbit_split(
    gs: GeneratorSet,
    v0: np.ndarray,
    hessian: np.ndarray,
    tol_rank: float = TOL_RANK,
    tol_flat: float = 1e-8,
) -> OrbitSplit:
    """Split the Hessian at a vacuum into orbit and transverse blocks.

    The Hessian must vanish on the orbit directions and be PSD on the
    complement; violations raise NotAVacuumError.  Transverse eigenvalues
    are 2 m^2 for scalar masses m.
    """
    A = _acted(gs, v0).T  # (2n, r)
    U, s, _ = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    d = int(np.sum(s > tol_rank * smax)) if smax > 0 else 0
    H = np.asarray(hessian, dtype=float)
    scale = 1.0 + float(np.max(np.abs(H)))
    e = U[:, :d].T
    P = U[:, d:]
    if d and float(np.max(np.abs(e @ H @ e.T))) > tol_flat * scale:
        raise NotAVacuumError(
            "Hessian does not vanish along the vacuum orbit; the point is not a group minimum"
        )
    Hp = P.T @ H @ P
    Hp = 0.5 * (Hp + Hp.T)
    lam, W = np.linalg.eigh(Hp)
    if lam.size and lam.min() < -tol_flat * scale:
        raise NotAVacuumError(
            f"Hessian eigenvalue {lam.min():.3e} on the transverse space; not a minimum"
        )
    vals, rows = _sort_clusters(lam, (P @ W).T, CLUSTER_GAP)
    eigs = np.concatenate([vals, np.zeros(d)])
    return OrbitSplit(
        orbit=_canonical_rows(e),
        transverse=rows,
        higgs_masses=np.sqrt(np.clip(vals, 0.0, None) / 2.0),
        hessian_eigenvalues=eigs,
    )


@dataclass(frozen=True)
class ShiftDecomposition:
    """Coordinates of phi - v0 in the orbit/transverse frame.

    The shift is (1/sqrt 2) (sum_i xi_i e_i + sum_j eta_j f_j) in
    realified coordinates.
    """

    xi: np.ndarray
    eta: np.ndarray


def decompose_shift(split: OrbitSplit, v0: np.ndarray, phi: np.ndarray) -> ShiftDecomposition:
    delta = realify(np.asarray(phi, dtype=complex) - np.asarray(v0, dtype=complex))
    root2 = np.sqrt(2.0)
    return ShiftDecomposition(xi=root2 * (split.orbit @ delta), eta=root2 * (split.transverse @ delta))


def reconstruct_shift(split: OrbitSplit, v0: np.ndarray, dec: ShiftDecomposition) -> np.ndarray:
    """Inverse of decompose_shift; exact because the frame is orthonormal."""
    delta = (split.orbit.T @ dec.xi + split.transverse.T @ dec.eta) / np.sqrt(2.0)
    return np.asarray(v0, dtype=complex) + unrealify(delta)


@dataclass(frozen=True)
class SpectrumResult:
    """Full spectrum data of a broken model at its vacuum."""

    vacuum: np.ndarray
    mass_form_matrix: np.ndarray
    unbroken: np.ndarray  # (r - d, r) coefficient rows
    broken: np.ndarray  # (d, r) mass-diagonal coefficient rows, descending mass
    boson_masses: np.ndarray  # (r,) descending, zeros on the unbroken tail
    goldstone_count: int
    orbit_basis: np.ndarray  # (d, 2n)
    transverse_basis: np.ndarray  # (2n - d, 2n)
    higgs_masses: np.ndarray  # (2n - d,) descending
    hessian_eigenvalues: np.ndarray


def spectrum(model: HiggsModel, tol_rank: float = TOL_RANK) -> SpectrumResult:
    """Run the whole pipeline: mass form, splits, boson and scalar masses."""
    if model.vacuum is None:
        raise NotAVacuumError("model has no vacuum; run find_vacuum first")
    gs, v0 = model.generators, model.vacuum
    mf = mass_form(gs, v0)
    split = stabilizer_split(gs, v0, tol_rank)
    basis, masses = boson_spectrum(mf, split, tol_rank)
    osplit = orbit_split(gs, v0, potential_hessian(model.potential, v0), tol_rank)
    d = split.d
    return SpectrumResult(
        vacuum=v0,
        mass_form_matrix=mf.matrix,
        unbroken=split.unbroken,
        broken=basis[:d],
        boson_masses=masses,
        goldstone_count=d,
        orbit_basis=osplit.orbit,
        transverse_basis=osplit.transverse,
        higgs_masses=osplit.higgs_masses,
        hessian_eigenvalues=osplit.hessian_eigenvalues,
    )


@dataclass(frozen=True)
class QuadraticReport:
    """Coefficients of the second-order expansion around a candidate vacuum.

    For a genuine vacuum: the constant term, scalar masses on transverse
    modes (Hessian eigenvalue / 2 = m^2), broken boson masses
    (2 x mass-form eigenvalue = M^2), and the massless boson count.
    When the point is not a vacuum the report instead carries the raw
    realified Hessian eigenvalues as scalar_mass_squared and flags
    is_vacuum False; the bosons are reported from the mass form as usual.
    """

    is_vacuum: bool
    constant: float
    boson_masses: tuple[float, ...]
    massless_boson_count: int
    goldstone_count: int
    higgs_masses: tuple[float, ...]
    scalar_mass_squared: tuple[float, ...] | None = None


def quadratic_lagrangian(
    model: HiggsModel,
    spec: SpectrumResult | None = None,
    *,
    at: np.ndarray | None = None,
) -> QuadraticReport:
    """Quadratic Lagrangian data at the model's vacuum (or a trial point).

    With a precomputed SpectrumResult this is pure bookkeeping.  Passing
    `at` expands around a trial point instead of the model's vacuum;
    points that fail the stationarity or curvature conditions fall into a
    guard branch reporting raw realified Hessian eigenvalues, with the
    (always well-defined) mass form still dictating the boson masses.
    """
    gs = model.generators
    v0 = np.asarray(at, dtype=complex) if at is not None else model.vacuum
    if v0 is None:
        raise NotAVacuumError("model has no vacuum; run find_vacuum first")
    const = potential_value(model.potential, v0)
    if spec is None or at is not None:
        grad = potential_gradient(model.potential, v0)
        hess = potential_hessian(model.potential, v0)
        scale = 1.0 + float(np.max(np.abs(hess)))
        mf = mass_form(gs, v0)
        split = stabilizer_split(gs, v0)
        basis, masses = boson_spectrum(mf, split)
        stationary = float(np.linalg.norm(grad)) <= 1e-9 * scale
        osplit = None
        if stationary:
            try:
                osplit = orbit_split(gs, v0, hess)
            except NotAVacuumError:
                osplit = None
        if osplit is None:
            eigs = np.sort(np.linalg.eigvalsh(hess))
            return QuadraticReport(
                is_vacuum=False,
                constant=const,
                boson_masses=tuple(masses),
                massless_boson_count=int(np.sum(masses == 0.0)),
                goldstone_count=split.d,
                higgs_masses=(),
                scalar_mass_squared=tuple(eigs),
            )
        return QuadraticReport(
            is_vacuum=True,
            constant=const,
            boson_masses=tuple(masses),
            massless_boson_count=int(np.sum(masses == 0.0)),
            goldstone_count=split.d,
            higgs_masses=tuple(osplit.higgs_masses),
        )
    return QuadraticReport(
        is_vacuum=True,
        constant=const,
        boson_masses=tuple(spec.boson_masses),
        massless_boson_count=int(np.sum(spec.boson_masses == 0.0)),
        goldstone_count=spec.goldstone_count,
        higgs_masses=tuple(spec.higgs_masses),
    )
