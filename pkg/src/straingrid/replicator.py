"""Reduced spatial replicator system on the product of P simplices.

Two algebraically identical right-hand sides are provided: the compact
form coupling patches through the reweighted migration matrix, and the
diffusion-plus-advection form that splits the coupling into the raw
connectivity and heterogeneity corrections. The driver integrates in the
slow time variable tau with simplex monitors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .ode import IntegratorConfig, Trajectory, integrate
from .reduction import (MigrationMatrix, fitness_structure, left_eigenvector,
                        migration_matrix, neutral_equilibrium)
from .types import ConnectivityMatrix, FrequencyState


@dataclass(frozen=True)
class ReplicatorSetup:
    """Per-patch speeds and fitness matrices plus the patch coupling."""

    Theta: np.ndarray            # (P,)
    Lambdas: np.ndarray          # (P, N, N)
    migration: MigrationMatrix
    d: float

    def __post_init__(self):
        if self.d < 0:
            raise ConfigError("migration intensity d must be >= 0")

    @property
    def n_patches(self) -> int:
        return self.Theta.shape[0]

    @property
    def n_strains(self) -> int:
        return self.Lambdas.shape[1]


def setup_from_model(model) -> ReplicatorSetup:
    """Derive the reduced system from a FullModel's patches, deviations
    and connectivity. Independent of eps by construction."""
    eqs = [neutral_equilibrium(p) for p in model.patches]
    omegas = [left_eigenvector(eq) for eq in eqs]
    structs = [fitness_structure(eq, p, model.pert, i)
               for i, (eq, p) in enumerate(zip(eqs, model.patches))]
    return ReplicatorSetup(
        Theta=np.array([s.Theta for s in structs]),
        Lambdas=np.array([s.Lambda for s in structs]),
        migration=migration_matrix(model.connectivity, eqs, omegas),
        d=model.scale.d,
    )


def _reaction(z: np.ndarray, Theta: np.ndarray, Lambdas: np.ndarray) -> np.ndarray:
    Az = np.einsum("pij,pj->pi", Lambdas, z)
    mean = np.einsum("pi,pi->p", z, Az)
    return Theta[:, None] * z * (Az - mean[:, None])


def rhs_replicator(z: FrequencyState, setup: ReplicatorSetup) -> np.ndarray:
    """Compact form: reaction + d * (M z^i)_p. Rows of the output sum to
    zero whenever z is on the simplex product."""
    dz = _reaction(z.z, setup.Theta, setup.Lambdas)
    if setup.d != 0.0:
        dz = dz + setup.d * (setup.migration.entries @ z.z)
    return dz


def rhs_replicator_advection(z: FrequencyState, setup: ReplicatorSetup,
                             D: ConnectivityMatrix) -> np.ndarray:
    """Diffusion-advection form: reaction + d (D z^i)_p
    + d sum_k d_pk nu_pk (z_k^i - z_p^i). Identical to rhs_replicator."""
    zz = z.z
    dz = _reaction(zz, setup.Theta, setup.Lambdas)
    if setup.d != 0.0:
        dmat = D.entries
        nu = setup.migration.advection
        diff = dmat @ zz
        adv = np.einsum("pk,pki->pi", dmat * nu, zz[None, :, :] - zz[:, None, :])
        dz = dz + setup.d * (diff + adv)
    return dz


def simplex_defect_monitor(P: int, N: int):
    def monitor(y):
        return float(np.max(np.abs(y.reshape(P, N).sum(axis=1) - 1.0)))
    return monitor


def simulate_replicator(setup: ReplicatorSetup, z0: FrequencyState,
                        cfg: IntegratorConfig) -> Trajectory:
    """Integrate the reduced system in slow time tau with simplex monitors."""
    P, N = setup.n_patches, setup.n_strains
    if z0.z.shape != (P, N):
        raise ConfigError(f"z0 has shape {z0.z.shape}, setup expects {(P, N)}")
    Theta, Lambdas, d = setup.Theta, setup.Lambdas, setup.d
    M = setup.migration.entries

    def rhs(tau, y):
        z = y.reshape(P, N)
        dz = _reaction(z, Theta, Lambdas)
        if d != 0.0:
            dz = dz + d * (M @ z)
        return dz.ravel()

    monitors = [simplex_defect_monitor(P, N), lambda y: float(np.min(y))]
    return integrate(rhs, z0.z.ravel(), cfg, monitors=monitors)
