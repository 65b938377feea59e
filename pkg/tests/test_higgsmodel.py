import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssbspec.electroweak import build_generators, build_model
from ssbspec.higgsmodel import (
    CustomPotential,
    HiggsModel,
    NotAVacuumError,
    PotentialError,
    QuarticPotential,
    check_potential_invariance,
    find_vacuum,
    potential_gradient,
    potential_hessian,
    potential_value,
)
from ssbspec.liecore import realify, unrealify

QUARTIC = QuarticPotential(mu=2.0, lam=1.0)


def fd_gradient(p, v, h=1e-6):
    x = realify(v)
    out = np.empty(x.size)
    for k in range(x.size):
        e = np.zeros(x.size)
        e[k] = h
        out[k] = (potential_value(p, unrealify(x + e)) - potential_value(p, unrealify(x - e))) / (2 * h)
    return out


def fd_hessian(p, v, h=1e-5):
    x = realify(v)
    out = np.empty((x.size, x.size))
    for k in range(x.size):
        e = np.zeros(x.size)
        e[k] = h
        out[:, k] = (
            potential_gradient(p, unrealify(x + e)) - potential_gradient(p, unrealify(x - e))
        ) / (2 * h)
    return 0.5 * (out + out.T)


def test_parameter_validation():
    with pytest.raises(PotentialError):
        QuarticPotential(mu=-1.0, lam=1.0)
    with pytest.raises(PotentialError):
        QuarticPotential(mu=1.0, lam=0.0)


def test_vacuum_radius_and_curvature():
    assert QUARTIC.vacuum_radius == pytest.approx(1.0)
    v0 = np.array([0.0, 1.0], dtype=complex)
    np.testing.assert_array_equal(potential_gradient(QUARTIC, v0), np.zeros(4))
    H = potential_hessian(QUARTIC, v0)
    # the radial realified direction carries curvature 2 mu, the rest is flat
    assert H[2, 2] == pytest.approx(2 * QUARTIC.mu)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(H)), [0, 0, 0, 2 * QUARTIC.mu], atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_analytic_derivatives_match_finite_differences(seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    g, H = potential_gradient(QUARTIC, v), potential_hessian(QUARTIC, v)
    scale_g = max(1.0, np.linalg.norm(g))
    scale_h = max(1.0, np.abs(H).max())
    assert np.linalg.norm(g - fd_gradient(QUARTIC, v)) / scale_g < 1e-6
    assert np.abs(H - fd_hessian(QUARTIC, v)).max() / scale_h < 1e-6


def test_custom_potential_fd_defaults_track_quartic():
    custom = CustomPotential(value_fn=lambda v: QUARTIC.value(v))
    rng = np.random.default_rng(7)
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    np.testing.assert_allclose(custom.gradient(v), QUARTIC.gradient(v), rtol=1e-7, atol=1e-7)
    np.testing.assert_allclose(custom.hessian(v), QUARTIC.hessian(v), rtol=1e-4, atol=1e-4)


@pytest.mark.parametrize("seed", range(8))
def test_find_vacuum_hits_sphere(seed):
    model = HiggsModel(build_generators(2.0, 1.0), QUARTIC)
    rng = np.random.default_rng(seed)
    start = rng.normal(size=2) * 3 + 1j * rng.normal(size=2) * 3
    v0 = find_vacuum(model, start)
    assert abs(np.linalg.norm(v0) - QUARTIC.vacuum_radius) < 1e-10


def test_find_vacuum_general_parameters():
    for mu, lam in [(0.5, 0.25), (7.0, 3.0), (1e-2, 4.0)]:
        pot = QuarticPotential(mu, lam)
        model = HiggsModel(build_generators(1.3, 0.6), pot)
        v0 = find_vacuum(model, np.array([0.1 + 0.2j, -0.05j]))
        assert abs(np.linalg.norm(v0) - pot.vacuum_radius) < 1e-9 * max(1.0, pot.vacuum_radius)


def test_find_vacuum_with_finite_difference_potential():
    custom = CustomPotential(value_fn=lambda v: QUARTIC.value(v))
    model = HiggsModel(build_generators(2.0, 1.0), custom)
    v0 = find_vacuum(model, np.array([0.3, 0.4 - 0.1j]), tol_vac=1e-7)
    assert abs(np.linalg.norm(v0) - 1.0) < 1e-6


def test_find_vacuum_rejects_zero_seed():
    model = HiggsModel(build_generators(2.0, 1.0), QUARTIC)
    with pytest.raises(PotentialError):
        find_vacuum(model, np.zeros(2, dtype=complex))


def test_model_verifies_supplied_vacuum():
    gens = build_generators(2.0, 1.0)
    HiggsModel(gens, QUARTIC, np.array([0.0, 1.0]))  # on the sphere: fine
    with pytest.raises(NotAVacuumError):
        HiggsModel(gens, QUARTIC, np.array([0.0, 1.7]))
    with pytest.raises(NotAVacuumError):
        HiggsModel(gens, QUARTIC, np.array([0.0, 1.0, 0.0]))


def test_invariance_check_quartic_and_broken():
    model = build_model()
    assert check_potential_invariance(model, samples=100, seed=3) < 1e-9
    # a non-scalar diagonal quadratic form is not invariant under the action
    D = np.diag([1.0, 2.0])
    lopsided = CustomPotential(value_fn=lambda v: float(np.vdot(v, D @ v).real))
    skewed = HiggsModel(model.generators, lopsided)
    assert check_potential_invariance(skewed, samples=100, seed=3) > 0.01
