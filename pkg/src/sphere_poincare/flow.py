"""Saturated-constraint energy, stationarity residual and gradient flow.

Fields here satisfy the pointwise unit-length constraint.  The negative
surface Laplacian is applied per Cartesian component through the scalar
spectral route at a chosen band limit (no finite differences, hence no
pole artifacts), and the flow is an explicit projected gradient descent
with pointwise renormalization after every step.  It is a qualitative
stability probe, not a performance solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import (
    SampledScalarField,
    SampledVectorField,
    dirichlet_energy_scalar_route,
    integrate,
    normal_field,
    scalar_basis,
)

__all__ = [
    "FlowState",
    "FlowRecord",
    "FlowResult",
    "project_tangent",
    "normalize_field",
    "el_residual",
    "second_variation_normal",
    "saturated_energy",
    "distance_to_normals",
    "gradient_flow",
    "write_trajectory_csv",
]

FOUR_PI = 4.0 * math.pi

_UNIT_TOL = 1e-8
_ENERGY_INCREASE_TOL = 1e-10


def _norms(values: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(values * values, axis=-1))


def _require_unit(u: SampledVectorField) -> None:
    gap = float(np.max(np.abs(_norms(u.values) - 1.0)))
    if gap > _UNIT_TOL:
        raise ValueError(f"field is not pointwise unit (max | |u|-1 | = {gap:.3e})")


def normalize_field(u: SampledVectorField) -> SampledVectorField:
    """Pointwise projection onto the unit sphere."""
    norms = _norms(u.values)
    if np.any(norms == 0.0):
        raise ValueError("cannot normalize a field with zero-length samples")
    return SampledVectorField(grid=u.grid, values=u.values / norms[..., None])


def project_tangent(u: SampledVectorField, w: SampledVectorField) -> SampledVectorField:
    """Pointwise projection of w onto the plane orthogonal to u."""
    radial = np.sum(w.values * u.values, axis=-1)
    return SampledVectorField(
        grid=u.grid, values=w.values - radial[..., None] * u.values
    )


def _minus_laplacian_field(u_values: np.ndarray, basis) -> np.ndarray:
    flat = u_values.reshape(-1, 3)
    coeffs = basis.weighted_flat @ flat
    lap = basis.matrix_flat.T @ (basis.eigenvalues[:, None] * coeffs)
    return lap.reshape(u_values.shape)


def el_residual(u: SampledVectorField, kappa: float, band_limit: int) -> SampledVectorField:
    """Stationarity residual u x (-lap u + kappa (u.n) n) of the
    saturated problem; vanishes exactly at critical points."""
    _require_unit(u)
    basis = scalar_basis(u.grid, band_limit)
    lap = _minus_laplacian_field(u.values, basis)
    normal = normal_field(u.grid).values
    radial = np.sum(u.values * normal, axis=-1)
    effective = lap + kappa * radial[..., None] * normal
    return SampledVectorField(grid=u.grid, values=np.cross(u.values, effective))


def _default_scalar_band(grid) -> int:
    return min(grid.n_t - 1, (grid.n_phi - 1) // 2)


def second_variation_normal(
    v: SampledVectorField, kappa: float, band_limit: int | None = None
) -> float:
    """Second variation of the saturated energy at the normal states.

    For a tangential perturbation v this is the quadratic form
    int |grad v|^2 - (kappa + 2) |v|^2, evaluated with the scalar-route
    Dirichlet energy.  Negative values certify instability.
    """
    normal = normal_field(v.grid).values
    radial_gap = float(np.max(np.abs(np.sum(v.values * normal, axis=-1))))
    if radial_gap > 1e-10:
        raise ValueError(f"perturbation is not tangential (max |v.n| = {radial_gap:.3e})")
    if band_limit is None:
        band_limit = _default_scalar_band(v.grid)
    dirichlet = dirichlet_energy_scalar_route(v, band_limit)
    mag = np.sum(v.values * v.values, axis=-1)
    weight = integrate(SampledScalarField(grid=v.grid, values=mag))
    return dirichlet - (kappa + 2.0) * weight


def saturated_energy(u: SampledVectorField, kappa: float, band_limit: int) -> float:
    """Penalized energy of a unit field: band-truncated Dirichlet part
    plus kappa times the quadrature anisotropy integral."""
    normal = normal_field(u.grid).values
    radial = np.sum(u.values * normal, axis=-1)
    aniso = integrate(SampledScalarField(grid=u.grid, values=radial * radial))
    return dirichlet_energy_scalar_route(u, band_limit) + kappa * aniso


def distance_to_normals(u: SampledVectorField) -> tuple[float, float]:
    """L2 distances to +normal and -normal, each normalized by sqrt(4 pi)."""
    normal = normal_field(u.grid).values
    w = u.grid.weights
    d_plus = np.sqrt(np.sum(w * np.sum((u.values - normal) ** 2, axis=-1)))
    d_minus = np.sqrt(np.sum(w * np.sum((u.values + normal) ** 2, axis=-1)))
    scale = math.sqrt(FOUR_PI)
    return float(d_plus) / scale, float(d_minus) / scale


@dataclass
class FlowState:
    """Current flow iterate: unit field, weight, truncation, progress."""

    field: SampledVectorField
    kappa: float
    band_limit: int
    step: int
    energy: float


@dataclass(frozen=True)
class FlowRecord:
    step: int
    time: float
    energy: float
    dist_plus: float
    dist_minus: float
    residual_max: float


@dataclass
class FlowResult:
    kappa: float
    dt: float
    band_limit: int
    records: list[FlowRecord]
    state: FlowState

    @property
    def final_distance(self) -> float:
        last = self.records[-1]
        return min(last.dist_plus, last.dist_minus)

    @property
    def max_distance(self) -> float:
        return max(min(r.dist_plus, r.dist_minus) for r in self.records)


def gradient_flow(
    u0: SampledVectorField,
    kappa: float,
    dt: float,
    steps: int,
    band_limit: int,
    record_every: int = 1,
) -> FlowResult:
    """Projected explicit gradient descent on the saturated energy.

    Each step moves against the tangential part of the energy gradient
    -2 lap u + 2 kappa (u.n) n, projects back onto the resolved band and
    renormalizes pointwise.  The band projection is required for
    correctness, not cosmetics: components above the band limit carry no
    Dirichlet penalty in the truncated energy, so without the projection
    roundoff noise in that complement grows at rate -(kappa + 2) and
    destroys the probe for kappa > -2.  The step size must sit below the
    spectral stability bound 1/(N(N+1)); an energy increase beyond
    tolerance aborts with a diagnostic.
    """
    _require_unit(u0)
    if steps < 1:
        raise ValueError("need at least one step")
    if record_every < 1:
        raise ValueError("record_every must be positive")
    if band_limit < 1:
        raise ValueError("band limit must resolve at least degree 1")
    limit = 1.0 / (band_limit * (band_limit + 1))
    if not dt < limit:
        raise ValueError(f"dt={dt} not below the stability bound {limit:.6g}")

    grid = u0.grid
    basis = scalar_basis(grid, band_limit)
    normal = normal_field(grid).values.reshape(-1, 3)
    weights = grid.weights.reshape(-1)
    shape = u0.values.shape

    u = normalize_field(u0).values.reshape(-1, 3)

    def truncated_coeffs(values):
        return basis.weighted_flat @ values

    def energy_of(values, coeffs):
        dirichlet = float(np.sum(basis.eigenvalues[:, None] * coeffs * coeffs))
        radial = np.sum(values * normal, axis=-1)
        return dirichlet + kappa * float(np.sum(weights * radial * radial))

    def residual_max_of(values, coeffs):
        lap = basis.matrix_flat.T @ (basis.eigenvalues[:, None] * coeffs)
        radial = np.sum(values * normal, axis=-1)
        effective = lap + kappa * radial[:, None] * normal
        res = np.cross(values, effective)
        return float(np.max(np.sqrt(np.sum(res * res, axis=-1))))

    def distances(values):
        d_plus = math.sqrt(float(np.sum(weights * np.sum((values - normal) ** 2, axis=-1))))
        d_minus = math.sqrt(float(np.sum(weights * np.sum((values + normal) ** 2, axis=-1))))
        scale = math.sqrt(FOUR_PI)
        return d_plus / scale, d_minus / scale

    coeffs = truncated_coeffs(u)
    energy = energy_of(u, coeffs)
    records = [FlowRecord(0, 0.0, energy, *distances(u), residual_max_of(u, coeffs))]

    for step in range(1, steps + 1):
        lap = basis.matrix_flat.T @ (basis.eigenvalues[:, None] * coeffs)
        radial = np.sum(u * normal, axis=-1)
        grad = 2.0 * lap + 2.0 * kappa * radial[:, None] * normal
        grad -= np.sum(grad * u, axis=-1)[:, None] * u
        candidate = u - dt * grad
        # Galerkin projection onto the resolved band before renormalizing.
        candidate = basis.matrix_flat.T @ (basis.weighted_flat @ candidate)
        candidate /= np.sqrt(np.sum(candidate * candidate, axis=-1))[:, None]
        new_coeffs = truncated_coeffs(candidate)
        new_energy = energy_of(candidate, new_coeffs)
        if new_energy > energy + _ENERGY_INCREASE_TOL:
            raise RuntimeError(
                f"energy increased by {new_energy - energy:.3e} at step {step}; "
                "dt too large for this band limit"
            )
        u, coeffs, energy = candidate, new_coeffs, new_energy
        if step % record_every == 0 or step == steps:
            records.append(
                FlowRecord(
                    step,
                    step * dt,
                    energy,
                    *distances(u),
                    residual_max_of(u, coeffs),
                )
            )

    final = SampledVectorField(grid=grid, values=u.reshape(shape))
    state = FlowState(field=final, kappa=kappa, band_limit=band_limit, step=steps, energy=energy)
    return FlowResult(kappa=kappa, dt=dt, band_limit=band_limit, records=records, state=state)


def write_trajectory_csv(result: FlowResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("step,time,energy,dist_to_plus_n,dist_to_minus_n,residual_max\n")
        for r in result.records:
            fh.write(
                f"{r.step},{r.time!r},{r.energy!r},{r.dist_plus!r},"
                f"{r.dist_minus!r},{r.residual_max!r}\n"
            )
