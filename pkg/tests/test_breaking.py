import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssbspec.breaking import (
    InconsistentSpectrumError,
    boson_spectrum,
    decompose_shift,
    mass_form,
    orbit_split,
    quadratic_lagrangian,
    reconstruct_shift,
    spectrum,
    stabilizer_split,
)
from ssbspec.electroweak import ElectroweakParams, build_generators, build_model
from ssbspec.higgsmodel import NotAVacuumError, QuarticPotential, potential_hessian
from ssbspec.liecore import exponentiate, random_algebra_element, realify


def closed_form_mass_matrix(g, gp, radius):
    """Independent closed form for the doublet mass form."""
    m = np.zeros((4, 4))
    m[0, 0] = m[1, 1] = m[2, 2] = g * g
    m[2, 3] = m[3, 2] = -g * gp
    m[3, 3] = gp * gp
    return 0.25 * radius * radius * m


def doublet_vacuum(radius):
    return np.array([0.0, radius], dtype=complex)


@settings(max_examples=50, deadline=None)
@given(
    st.floats(0.1, 5.0, allow_nan=False),
    st.floats(0.1, 5.0, allow_nan=False),
    st.floats(0.1, 5.0, allow_nan=False),
)
def test_mass_form_closed_form(g, gp, radius):
    gs = build_generators(g, gp)
    mf = mass_form(gs, doublet_vacuum(radius))
    np.testing.assert_allclose(mf.matrix, closed_form_mass_matrix(g, gp, radius), atol=1e-12)
    np.testing.assert_array_equal(mf.matrix, mf.matrix.T)


def test_mass_form_is_psd_bilinear():
    gs = build_generators(1.7, 0.9)
    mf = mass_form(gs, doublet_vacuum(1.3))
    a = np.array([0.2, -1.0, 0.5, 2.0])
    assert mf(a, a) >= 0.0
    b = np.array([1.0, 0.0, -0.3, 0.1])
    assert mf(a, b) == pytest.approx(mf(b, a))


def test_stabilizer_is_the_photon_line():
    g, gp = 2.0, 1.0
    gs = build_generators(g, gp)
    split = stabilizer_split(gs, doublet_vacuum(1.0))
    assert split.unbroken.shape == (1, 4)
    norm = np.hypot(g, gp)
    expected = np.array([0.0, 0.0, gp / norm, g / norm])
    # up to sign, the kernel is the (g' b_3 + g b_4) direction
    overlap = abs(split.unbroken[0] @ expected)
    assert overlap == pytest.approx(1.0, abs=1e-12)
    # and it annihilates the vacuum
    residual = np.einsum("r,rij,j->i", split.unbroken[0], gs.matrices, doublet_vacuum(1.0))
    assert np.linalg.norm(residual) < 1e-12


def test_stabilizer_split_zero_vacuum():
    gs = build_generators(2.0, 1.0)
    split = stabilizer_split(gs, np.zeros(2, dtype=complex))
    assert split.d == 0
    assert split.unbroken.shape == (4, 4)


def test_boson_spectrum_matches_closed_forms():
    p = ElectroweakParams(g=2.0, gp=1.0, mu=2.0, lam=1.0)
    model = build_model(p)
    s = spectrum(model)
    np.testing.assert_allclose(
        s.boson_masses, [np.sqrt(2.5), np.sqrt(2.0), np.sqrt(2.0), 0.0], atol=1e-12
    )
    assert s.goldstone_count == 3
    np.testing.assert_allclose(s.higgs_masses, [np.sqrt(2.0)], atol=1e-12)
    # the massive neutral direction is (g b3 - g' b4)/norm
    np.testing.assert_allclose(np.abs(s.broken[0]), [0, 0, 2 / np.sqrt(5), 1 / np.sqrt(5)], atol=1e-12)


def test_broken_masses_diagonalize_the_form():
    gs = build_generators(1.1, 0.7)
    v0 = doublet_vacuum(0.9)
    mf = mass_form(gs, v0)
    split = stabilizer_split(gs, v0)
    basis, masses = boson_spectrum(mf, split)
    D = basis @ mf.matrix @ basis.T
    np.testing.assert_allclose(D, np.diag(np.diag(D)), atol=1e-12)
    np.testing.assert_allclose(np.diag(D)[: split.d], 0.5 * masses[: split.d] ** 2, atol=1e-12)
    # rows are orthonormal
    np.testing.assert_allclose(basis @ basis.T, np.eye(4), atol=1e-12)


def test_mass_form_transforms_under_vacuum_rotation():
    gs = build_generators(2.0, 1.0)
    v0 = doublet_vacuum(1.0)
    rng = np.random.default_rng(5)
    for _ in range(5):
        U = exponentiate(gs, random_algebra_element(gs, rng))
        rotated = mass_form(gs, U @ v0).matrix
        # adjoint action of U^-1 on coefficients
        conj = np.einsum("ij,rjk,kl->ril", np.conj(U.T), gs.matrices, U)
        C, defect = gs.project(conj)
        assert defect.max() < 1e-10
        C = C.T  # column i holds the coefficients of U^-1 g_i U
        base = mass_form(gs, v0).matrix
        np.testing.assert_allclose(rotated, C.T @ base @ C, atol=1e-10)
        # the eigenvalue multiset is invariant
        np.testing.assert_allclose(
            np.linalg.eigvalsh(rotated), np.linalg.eigvalsh(base), atol=1e-10
        )


def test_orbit_split_structure():
    p = ElectroweakParams()
    model = build_model(p)
    gs, v0 = model.generators, model.vacuum
    split = orbit_split(gs, v0, potential_hessian(model.potential, v0))
    assert split.orbit.shape == (3, 4)
    assert split.transverse.shape == (1, 4)
    # the transverse direction is the real-radial one, realify((0, 1))
    np.testing.assert_allclose(np.abs(split.transverse[0]), [0, 0, 1, 0], atol=1e-12)
    np.testing.assert_allclose(split.higgs_masses, [np.sqrt(p.mu)], atol=1e-12)
    # exactly d zero Hessian eigenvalues
    eigs = np.sort(np.abs(split.hessian_eigenvalues))
    assert np.sum(eigs < 1e-8) == 3
    frame = np.vstack([split.orbit, split.transverse])
    np.testing.assert_allclose(frame @ frame.T, np.eye(4), atol=1e-12)


def test_orbit_split_rejects_non_minimum():
    gs = build_generators(2.0, 1.0)
    pot = QuarticPotential(2.0, 1.0)
    v = np.array([0.0, 0.4], dtype=complex)  # inside the sphere: indefinite Hessian
    with pytest.raises(NotAVacuumError):
        orbit_split(gs, v, potential_hessian(pot, v))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_shift_round_trip(seed):
    model = build_model()
    gs, v0 = model.generators, model.vacuum
    split = orbit_split(gs, v0, potential_hessian(model.potential, v0))
    rng = np.random.default_rng(seed)
    phi = rng.normal(size=2) + 1j * rng.normal(size=2)
    dec = decompose_shift(split, v0, phi)
    np.testing.assert_allclose(reconstruct_shift(split, v0, dec), phi, atol=1e-12)
    # coordinates carry the sqrt-2 normalization
    delta = realify(phi - v0)
    assert np.linalg.norm(dec.xi) ** 2 + np.linalg.norm(dec.eta) ** 2 == pytest.approx(
        2 * np.linalg.norm(delta) ** 2, rel=1e-10
    )


def test_quadratic_report_at_vacuum():
    model = build_model()
    rep = quadratic_lagrangian(model, spectrum(model))
    assert rep.is_vacuum
    assert rep.goldstone_count == 3
    assert rep.massless_boson_count == 1
    np.testing.assert_allclose(rep.higgs_masses, [np.sqrt(2.0)], atol=1e-12)
    assert rep.constant == pytest.approx(-0.5)  # -mu^2/(8 lambda)


def test_quadratic_report_guards_origin():
    model = build_model()
    rep = quadratic_lagrangian(model, at=np.zeros(2))
    assert not rep.is_vacuum
    assert rep.goldstone_count == 0
    np.testing.assert_array_equal(rep.boson_masses, np.zeros(4))
    assert rep.massless_boson_count == 4
    # 2n realified directions pair into n complex scalars of mass^2 = -mu
    np.testing.assert_allclose(rep.scalar_mass_squared, [-2.0] * 4, atol=1e-12)
    assert rep.higgs_masses == ()


def test_spectrum_requires_vacuum():
    model = build_model()
    stripped = type(model)(model.generators, model.potential, None)
    with pytest.raises(NotAVacuumError):
        spectrum(stripped)
