"""Configuration documents.

A single JSON document describes a model: per-patch baseline rates,
strain trait deviations, connectivity (either an explicit matrix or
volumes plus pair weights), the scale (eps, d), and optional initial
frequencies and integrator settings.

``collect_issues`` produces an itemized validation report without
raising; ``build_model`` constructs the FullModel and fails on the first
problem. Hashing is canonical (stable under key reordering). Random
initial frequencies come from a named, versioned generator so results
are portable.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .connectivity import renormalize_to_density, validate_connectivity, volume_matrix
from .errors import ConfigError
from .fullsim import FullModel
from .types import (ConnectivityMatrix, FrequencyState, PatchParams,
                    ScaleParams, StrainPerturbations)

FREQUENCY_GENERATOR = "dirichlet-pcg64-v1"


def load_config(path) -> dict:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    return doc


def config_hash(doc: dict) -> str:
    """SHA-256 of the canonical (sorted-key) JSON serialization."""
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def _strain_arrays(doc: dict, P: int):
    strains = doc.get("strains", {})
    N = int(strains.get("N", 1))
    if N < 1:
        raise ConfigError("strains.N must be >= 1")

    def arr(name, shape):
        raw = strains.get(name)
        if raw is None:
            return np.zeros(shape)
        a = np.asarray(raw, dtype=float)
        if a.shape != shape:
            raise ConfigError(f"strains.{name} must have shape {shape}, got {a.shape}")
        return a

    return StrainPerturbations(
        b=arr("b", (P, N)),
        nu=arr("nu", (P, N)),
        c_pair=arr("c_pair", (P, N, N)),
        w=arr("w", (P, N, N)),
        alpha=arr("alpha", (P, N, N)),
    )


def build_connectivity(doc: dict, P: int) -> ConnectivityMatrix:
    conn = doc.get("connectivity")
    if conn is None:
        if P == 1:
            return ConnectivityMatrix(entries=np.zeros((1, 1)))
        raise ConfigError("connectivity section required for P > 1")
    has_matrix = "matrix" in conn
    has_volumes = "volumes" in conn or "weights" in conn
    if has_matrix and has_volumes:
        raise ConfigError("connectivity: give either a matrix or volumes+weights, not both")
    if has_matrix:
        entries = np.asarray(conn["matrix"], dtype=float)
    elif has_volumes:
        if "volumes" not in conn or "weights" not in conn:
            raise ConfigError("connectivity: volumes and weights must both be given")
        V = np.asarray(conn["volumes"], dtype=float)
        x = np.asarray(conn["weights"], dtype=float)
        entries = renormalize_to_density(volume_matrix(V, x), V)
    else:
        raise ConfigError("connectivity: expected 'matrix' or 'volumes'+'weights'")
    if entries.shape != (P, P):
        raise ConfigError(f"connectivity must be {P}x{P}, got {entries.shape}")
    return ConnectivityMatrix(entries=entries)


def build_model(doc: dict) -> FullModel:
    """Construct the full model; raises ConfigError on the first problem."""
    raw_patches = doc.get("patches")
    if not raw_patches:
        raise ConfigError("config needs a non-empty 'patches' array")
    patches = tuple(PatchParams(r=float(p["r"]), beta=float(p["beta"]),
                                gamma=float(p["gamma"]), k=float(p["k"]))
                    for p in raw_patches)
    P = len(patches)
    pert = _strain_arrays(doc, P)
    scale_doc = doc.get("scale", {})
    scale = ScaleParams(eps=float(scale_doc.get("eps", 0.0)),
                        d=float(scale_doc.get("d", 0.0)))
    connectivity = build_connectivity(doc, P)
    return FullModel(patches=patches, pert=pert, scale=scale,
                     connectivity=connectivity)


def collect_issues(doc: dict) -> list[str]:
    """Itemized validation report; empty list means the config is valid.

    Checks structural validity, positivity of the baseline rates,
    supercriticality of every patch, the three connectivity properties
    and admissibility of the assembled strain rates."""
    issues: list[str] = []
    raw_patches = doc.get("patches")
    if not raw_patches:
        return ["config needs a non-empty 'patches' array"]

    patches = []
    for idx, p in enumerate(raw_patches):
        try:
            pp = PatchParams(r=float(p["r"]), beta=float(p["beta"]),
                             gamma=float(p["gamma"]), k=float(p["k"]))
        except (ConfigError, KeyError, TypeError, ValueError) as exc:
            issues.append(f"patch {idx}: {exc}")
            continue
        patches.append(pp)
        if not pp.supercritical:
            issues.append(
                f"patch {idx}: subcritical, beta={pp.beta} <= r+gamma={pp.r + pp.gamma}")

    P = len(raw_patches)
    conn = doc.get("connectivity")
    if conn is not None and "matrix" in conn:
        M = np.asarray(conn["matrix"], dtype=float)
        if M.shape != (P, P):
            issues.append(f"connectivity: expected {P}x{P} matrix, got {M.shape}")
        else:
            report = validate_connectivity(M)
            if not report.metzler:
                issues.append("connectivity: Metzler violation (negative off-diagonal)")
            if not report.irreducible:
                issues.append("connectivity: not irreducible (patch graph disconnected)")
            if not report.row_sum_zero:
                issues.append("connectivity: row sums are not zero")
    else:
        try:
            build_connectivity(doc, P)
        except ConfigError as exc:
            issues.append(f"connectivity: {exc}")

    if not issues:
        try:
            build_model(doc)
        except ConfigError as exc:
            issues.append(str(exc))
    return issues


def initial_frequencies(doc: dict, P: int, N: int) -> FrequencyState:
    """Initial simplex frequencies: explicit z0, seeded Dirichlet draw,
    or uniform when the init section is absent."""
    init = doc.get("init", {})
    if "z0" in init:
        z = np.asarray(init["z0"], dtype=float)
        if z.shape != (P, N):
            raise ConfigError(f"init.z0 must have shape {(P, N)}, got {z.shape}")
        return FrequencyState(z=z)
    if "seed" in init:
        rng = np.random.default_rng(int(init["seed"]))
        return FrequencyState(z=rng.dirichlet(np.ones(N), size=P))
    return FrequencyState(z=np.full((P, N), 1.0 / N))


def integrator_settings(doc: dict) -> dict:
    """Integration overrides from the config; defaults live with the CLI."""
    integ = doc.get("integration", {})
    allowed = {"rel_tol", "abs_tol", "t_end", "max_step", "initial_step",
               "monitor_period"}
    unknown = set(integ) - allowed
    if unknown:
        raise ConfigError(f"unknown integration settings: {sorted(unknown)}")
    return {k: float(v) for k, v in integ.items()}
