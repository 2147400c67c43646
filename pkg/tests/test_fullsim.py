"""Full co-colonization system: right-hand side identities, manifold
initialization, frequency extraction and simulation behavior."""

import numpy as np
import pytest

from straingrid import (ConfigError, ConnectivityMatrix, ExtinctPatch,
                        FrequencyState, FullModel, FullState,
                        IntegratorConfig, PatchParams, ScaleParams,
                        StrainPerturbations, extract_frequencies,
                        init_on_manifold, left_eigenvector,
                        neutral_equilibrium, rhs_full, simulate_full,
                        transmissible_load)

from conftest import random_supercritical_patch

ONE_PATCH = ConnectivityMatrix(entries=np.zeros((1, 1)))


def neutral_model(patches, N, d=0.0, eps=0.0, conn=None):
    P = len(patches)
    if conn is None:
        conn = ONE_PATCH if P == 1 else ConnectivityMatrix(
            entries=np.ones((P, P)) - P * np.eye(P))
    return FullModel(patches=tuple(patches),
                     pert=StrainPerturbations.zeros(P, N),
                     scale=ScaleParams(eps=eps, d=d), connectivity=conn)


def random_model(rng, P, N, eps):
    patches = tuple(random_supercritical_patch(rng) for _ in range(P))
    pert = StrainPerturbations(
        b=rng.normal(size=(P, N)), nu=rng.normal(size=(P, N)),
        c_pair=rng.normal(size=(P, N, N)), w=rng.normal(size=(P, N, N)),
        alpha=rng.normal(size=(P, N, N)))
    conn = ONE_PATCH if P == 1 else ConnectivityMatrix(
        entries=np.ones((P, P)) - P * np.eye(P))
    return FullModel(patches=patches, pert=pert,
                     scale=ScaleParams(eps=eps, d=1.0), connectivity=conn)


def random_state(rng, P, N):
    """Random interior state with unit patch mass."""
    S = rng.uniform(0.2, 0.5, size=P)
    I = rng.uniform(0.1, 1.0, size=(P, N))
    D = rng.uniform(0.1, 1.0, size=(P, N, N))
    rest = 1.0 - S
    scale = rest / (I.sum(axis=1) + D.sum(axis=(1, 2)))
    return FullState(S=S, I=I * scale[:, None], D=D * scale[:, None, None])


# ----------------------------------------------------------- model assembly

def test_model_assembles_strain_rates(worked_patch):
    pert = StrainPerturbations(
        b=np.array([[1.0, -0.5]]), nu=np.array([[0.2, 0.0]]),
        c_pair=np.full((1, 2, 2), 0.3), w=np.full((1, 2, 2), 0.1),
        alpha=np.full((1, 2, 2), -0.2))
    model = FullModel(patches=(worked_patch,), pert=pert,
                      scale=ScaleParams(eps=0.1, d=0.0), connectivity=ONE_PATCH)
    assert np.allclose(model.beta_i, [[4.1, 3.95]])
    assert np.allclose(model.gamma_i, [[1.02, 1.0]])
    assert np.allclose(model.gamma_ij, 1.03)
    assert np.allclose(model.k_ij, 0.98)
    assert np.allclose(model.prob_first, 0.51)


def test_model_rejects_inadmissible_rates(worked_patch):
    pert = StrainPerturbations(
        b=np.array([[-10.0]]), nu=np.zeros((1, 1)), c_pair=np.zeros((1, 1, 1)),
        w=np.zeros((1, 1, 1)), alpha=np.zeros((1, 1, 1)))
    with pytest.raises(ConfigError):
        FullModel(patches=(worked_patch,), pert=pert,
                  scale=ScaleParams(eps=1.0, d=0.0), connectivity=ONE_PATCH)
    wpert = StrainPerturbations(
        b=np.zeros((1, 1)), nu=np.zeros((1, 1)), c_pair=np.zeros((1, 1, 1)),
        w=np.full((1, 1, 1), 10.0), alpha=np.zeros((1, 1, 1)))
    with pytest.raises(ConfigError):
        FullModel(patches=(worked_patch,), pert=wpert,
                  scale=ScaleParams(eps=0.2, d=0.0), connectivity=ONE_PATCH)


def test_with_eps_preserves_structure(worked_patch):
    model = neutral_model([worked_patch], N=2, eps=0.1, d=2.0)
    other = model.with_eps(0.05)
    assert other.scale.eps == 0.05
    assert other.scale.d == 2.0
    assert other.patches == model.patches


# ------------------------------------------------------------- rhs identities

def test_disease_free_state_stationary(worked_patch, second_patch):
    model = neutral_model([worked_patch, second_patch], N=2, d=1.0, eps=0.0)
    state = FullState(S=np.ones(2), I=np.zeros((2, 2)), D=np.zeros((2, 2, 2)))
    deriv = rhs_full(state, model)
    assert np.max(np.abs(deriv.ravel())) < 1e-15


def test_neutral_manifold_stationary(worked_patch, second_patch):
    rng = np.random.default_rng(5)
    model = neutral_model([worked_patch, second_patch], N=3, d=0.0, eps=0.0)
    eqs = [neutral_equilibrium(p) for p in model.patches]
    z = FrequencyState(z=rng.dirichlet(np.ones(3), size=2))
    state = init_on_manifold(z, eqs)
    deriv = rhs_full(state, model)
    assert np.max(np.abs(deriv.ravel())) < 1e-14


def test_transmissible_load_neutral_split(worked_patch):
    """With probabilities exactly 1/2, J^i = I^i + the symmetrized pair
    load, and the total load is conserved."""
    rng = np.random.default_rng(9)
    model = neutral_model([worked_patch], N=3, eps=0.0)
    state = random_state(rng, 1, 3)
    J = transmissible_load(model, state.I, state.D)
    expected = state.I + 0.5 * (state.D.sum(axis=2) + state.D.sum(axis=1))
    assert np.allclose(J, expected, atol=1e-15)
    assert J.sum() == pytest.approx(state.I.sum() + state.D.sum(), abs=1e-14)


def test_mass_derivative_identity():
    """The summed right-hand side per patch equals the closed scalar law
    r(1 - mass) + delta * (connectivity @ mass) at any state."""
    rng = np.random.default_rng(13)
    for _ in range(10):
        model = random_model(rng, P=3, N=2, eps=0.03)
        state = random_state(rng, 3, 2)
        deriv = rhs_full(state, model)
        got = deriv.S + deriv.I.sum(axis=1) + deriv.D.sum(axis=(1, 2))
        mass = state.patch_mass()
        expected = model.r * (1.0 - mass) \
            + model.scale.delta * (model.connectivity.entries @ mass)
        assert np.max(np.abs(got - expected)) < 1e-13


# ------------------------------------------------- manifold init / extraction

def test_init_on_manifold_worked_values(worked_patch):
    eqs = [neutral_equilibrium(worked_patch)]
    z = FrequencyState(z=np.full((1, 4), 0.25))
    state = init_on_manifold(z, eqs)
    assert np.allclose(state.I, 0.25 / 4)
    assert np.allclose(state.D, 0.25 / 16)
    assert state.patch_mass()[0] == pytest.approx(1.0, abs=1e-15)


def test_init_single_strain_is_endemic_point(worked_patch):
    eqs = [neutral_equilibrium(worked_patch)]
    state = init_on_manifold(FrequencyState(z=np.ones((1, 1))), eqs)
    assert state.S[0] == 0.5
    assert state.I[0, 0] == 0.25
    assert state.D[0, 0, 0] == 0.25


def test_init_rejects_off_simplex(worked_patch):
    eqs = [neutral_equilibrium(worked_patch)]
    with pytest.raises(ConfigError):
        init_on_manifold(FrequencyState(z=np.array([[0.3, 0.6]])), eqs)


def test_extract_inverts_init(worked_patch, second_patch):
    rng = np.random.default_rng(17)
    eqs = [neutral_equilibrium(worked_patch), neutral_equilibrium(second_patch)]
    omegas = [left_eigenvector(eq) for eq in eqs]
    z0 = FrequencyState(z=rng.dirichlet(np.ones(3), size=2))
    state = init_on_manifold(z0, eqs)
    z = extract_frequencies(state, omegas)
    assert np.max(np.abs(z.z - z0.z)) < 1e-14


def test_extract_single_strain_is_one(worked_patch):
    eqs = [neutral_equilibrium(worked_patch)]
    omegas = [left_eigenvector(eq) for eq in eqs]
    state = FullState(S=np.array([0.9]), I=np.array([[0.05]]),
                      D=np.array([[[0.05]]]))
    z = extract_frequencies(state, omegas)
    assert z.z[0, 0] == 1.0


def test_extract_rows_sum_to_one(worked_patch):
    rng = np.random.default_rng(19)
    omegas = [left_eigenvector(neutral_equilibrium(worked_patch))] * 2
    for _ in range(20):
        state = random_state(rng, 2, 3)
        z = extract_frequencies(state, omegas)
        assert np.max(np.abs(z.z.sum(axis=1) - 1.0)) < 1e-14


def test_extract_extinct_patch(worked_patch):
    omegas = [left_eigenvector(neutral_equilibrium(worked_patch))]
    state = FullState(S=np.array([1.0]), I=np.zeros((1, 2)),
                      D=np.zeros((1, 2, 2)))
    with pytest.raises(ExtinctPatch):
        extract_frequencies(state, omegas)


# ------------------------------------------------------------------ dynamics

def test_single_strain_converges_to_endemic_point(worked_patch):
    rng = np.random.default_rng(21)
    model = neutral_model([worked_patch], N=1, eps=0.0)
    S0 = rng.uniform(0.2, 0.6)
    I0 = rng.uniform(0.05, 0.3)
    D0 = rng.uniform(0.01, min(0.3, 1.0 - S0 - I0))
    y0 = FullState(S=np.array([S0]), I=np.array([[I0]]), D=np.array([[[D0]]]))
    cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, t_end=200.0,
                           monitor_period=10.0)
    traj = simulate_full(model, y0, cfg)
    eq = neutral_equilibrium(worked_patch)
    final = FullState.unravel(traj.final_state(), 1, 1)
    assert abs(final.S[0] - eq.S_star) < 1e-6
    assert abs(final.I[0, 0] - eq.I_star) < 1e-6
    assert abs(final.D[0, 0, 0] - eq.D_star) < 1e-6


def test_mass_and_negativity_monitors(worked_patch, second_patch,
                                      two_patch_conn):
    rng = np.random.default_rng(27)
    patches = (worked_patch, second_patch)
    pert = StrainPerturbations(
        b=rng.normal(size=(2, 2)), nu=rng.normal(size=(2, 2)),
        c_pair=rng.normal(size=(2, 2, 2)), w=rng.normal(size=(2, 2, 2)) * 0.3,
        alpha=rng.normal(size=(2, 2, 2)))
    model = FullModel(patches=patches, pert=pert,
                      scale=ScaleParams(eps=0.05, d=1.0),
                      connectivity=two_patch_conn)
    eqs = [neutral_equilibrium(p) for p in patches]
    y0 = init_on_manifold(FrequencyState(z=np.array([[0.3, 0.7], [0.6, 0.4]])),
                          eqs)
    cfg = IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12, t_end=100.0,
                           monitor_period=5.0)
    traj = simulate_full(model, y0, cfg)
    assert traj.monitor_max[0] < 100 * (1e-10 + 1e-12)   # mass defect
    # min entry stays essentially nonnegative
    assert float(np.min(traj.states)) > -10 * (1e-10 + 1e-12)
