"""Invariant batteries behind the `verify` command.

Each suite returns a list of named checks with the measured residual and
the tolerance it is held to, so reports always show both.  Boolean
checks are encoded as residual 0/1 against tolerance 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import eigensolver, sharp, spectral, vsh
from .grid import dirichlet_energy_scalar_route, normal_field, verification_grid
from .vsh import CoeffSet, random_coeffs

__all__ = ["Check", "SUITES", "run_suite"]

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance


def _bool_check(name: str, ok: bool) -> Check:
    return Check(name, 0.0 if ok else 1.0, 0.0)


def suite_orthonormality(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []

    grid = verification_grid(8)
    basis = vsh.vector_basis(grid, 6)
    gram = np.einsum(
        "mijk,nijk->mn", basis.matrix * grid.weights[..., None], basis.matrix
    )
    checks.append(
        Check(
            "vsh-gram-identity-n<=6",
            float(np.max(np.abs(gram - np.eye(len(basis.modes))))),
            1e-10,
        )
    )

    grid4 = verification_grid(4)
    worst = 0.0
    for _ in range(50):
        coeffs = random_coeffs(4, rng)
        back = vsh.analyze(vsh.synthesize(coeffs, grid4), 4)
        worst = max(worst, float(np.max(np.abs(back.data - coeffs.data))))
    checks.append(Check("analyze-synthesize-roundtrip-band4", worst, 1e-11))
    return checks


def suite_energy_routes(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    for _ in range(1000):
        coeffs = random_coeffs(4, rng)
        lhs = spectral.g_kappa(coeffs, -3.7)
        rhs = spectral.dirichlet_energy(coeffs) - 3.7 * spectral.anisotropy_energy(coeffs)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    checks.append(Check("g-kappa-identity", worst, 1e-12))

    grid = verification_grid(4)
    worst = 0.0
    worst_parseval = 0.0
    for _ in range(100):
        coeffs = random_coeffs(4, rng)
        field = vsh.synthesize(coeffs, grid)
        for kappa in (-8.0, -4.0, 0.0, 6.0):
            report = spectral.energy_report(field, kappa, band_limit=4)
            worst = max(worst, report.route_gap)
        worst_parseval = max(
            worst_parseval,
            abs(spectral.norm_sq(coeffs) - spectral.norm_sq_quadrature(field)),
        )
    checks.append(Check("route-equivalence-band4", worst, 1e-8))
    checks.append(Check("parseval-band4", worst_parseval, 1e-10))

    normal = normal_field(grid)
    checks.append(
        Check(
            "normal-field-dirichlet-8pi",
            abs(dirichlet_energy_scalar_route(normal, 4) - 8.0 * math.pi),
            1e-9,
        )
    )
    kappa = -8.0
    report = spectral.energy_report(normal, kappa, band_limit=1)
    checks.append(
        Check(
            "normal-field-total-4pi(kappa+2)",
            abs(report.total - FOUR_PI * (kappa + 2.0)),
            1e-9,
        )
    )
    return checks


def suite_inequality(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []

    kappas = np.linspace(-10.0, 10.0, 20)
    worst = -np.inf
    for _ in range(1000):
        coeffs = random_coeffs(6, rng, norm_sq=FOUR_PI)
        dirichlet = spectral.dirichlet_energy(coeffs)
        aniso = spectral.anisotropy_energy(coeffs)
        for kappa in kappas:
            margin = (dirichlet + kappa * aniso) - FOUR_PI * sharp.gamma(float(kappa))
            worst = max(worst, -margin)
    checks.append(Check("poincare-lower-bound", max(worst, 0.0), 1e-9))

    worst = -np.inf
    for _ in range(200):
        coeffs = random_coeffs(6, rng, norm_sq=FOUR_PI)
        dirichlet = spectral.dirichlet_energy(coeffs)
        aniso = spectral.anisotropy_energy(coeffs)
        nrm = spectral.norm_sq(coeffs)
        for kappa in (-8.0, -4.0, -1.0, -0.25):
            lhs = dirichlet + abs(kappa) * (nrm - aniso)
            rhs = sharp.shifted_constant(kappa) * nrm
            worst = max(worst, rhs - lhs)
    checks.append(Check("rewritten-form-negative-kappa", max(worst, 0.0), 1e-9))

    worst = -np.inf
    for _ in range(500):
        coeffs = random_coeffs(6, rng, families=(2, 3), norm_sq=FOUR_PI)
        margin = spectral.dirichlet_energy(coeffs) - 2.0 * spectral.norm_sq(coeffs)
        worst = max(worst, -margin)
    checks.append(Check("tangential-lower-bound", max(worst, 0.0), 1e-9))

    equal = CoeffSet(1)
    equal[(2, 1, 0)] = math.sqrt(FOUR_PI)
    checks.append(
        Check(
            "tangential-equality-mode",
            abs(spectral.dirichlet_energy(equal) - 2.0 * spectral.norm_sq(equal)),
            1e-10,
        )
    )
    return checks


def suite_equality(seed: int) -> list[Check]:
    checks = []
    for kappa in (-8.0, -4.5, -4.0, -3.9, 0.0, 6.0, 100.0):
        _, coeffs = sharp.build_minimizer(kappa)
        checks.append(
            Check(
                f"equality-residual-kappa={kappa:g}",
                abs(sharp.equality_residual(coeffs, kappa)),
                1e-10,
            )
        )
        checks.append(
            Check(
                f"norm-4pi-kappa={kappa:g}",
                abs(spectral.norm_sq(coeffs) - FOUR_PI),
                1e-10,
            )
        )
        numeric = eigensolver.numeric_minimizer(kappa)
        checks.append(
            _bool_check(
                f"numeric-membership-kappa={kappa:g}",
                sharp.membership_check(numeric, kappa, 1e-8),
            )
        )

    # Both one-sided families survive at the boundary.
    _, below_style = sharp.build_minimizer(-4.0, c0=math.sqrt(FOUR_PI))
    _, above_style = sharp.build_minimizer(-4.0, c0=0.0)
    boundary = max(
        abs(sharp.equality_residual(below_style, -4.0)),
        abs(sharp.equality_residual(above_style, -4.0)),
    )
    checks.append(Check("boundary-coexistence-kappa=-4", boundary, 1e-9))
    return checks


def suite_lemma(seed: int) -> list[Check]:
    checks = []
    kappas = np.linspace(-50.0, 50.0, 201)

    u3_leak = 0.0
    high_leak = 0.0
    sign_defect = 0.0
    argmin_excess = 0
    for kappa in kappas:
        kappa = float(kappa)
        value, winners = eigensolver.gamma_numeric(kappa, n_max=30)
        degree = max(int(label.split()[0].split("=")[1]) for label in winners)
        argmin_excess = max(argmin_excess, degree - 1)
        if any(label.endswith("u3") for label in winners):
            argmin_excess = max(argmin_excess, 1)
        coeffs = eigensolver.numeric_minimizer(kappa, n_max=30)
        u3_leak = max(u3_leak, float(np.max(np.abs(coeffs.data[2]))))
        if coeffs.band_limit >= 2:
            high_leak = max(high_leak, float(np.max(np.abs(coeffs.data[:, 2:, :]))))
        for j in (-1, 0, 1):
            u1, u2 = coeffs[(1, 1, j)], coeffs[(2, 1, j)]
            if abs(u1) > 1e-12 or abs(u2) > 1e-12:
                sign_defect = max(sign_defect, -u1 * u2)
    checks.append(Check("minimizer-u3-channel-zero", u3_leak, 1e-12))
    checks.append(Check("minimizer-no-degree>=2", high_leak, 1e-12))
    checks.append(Check("minimizer-sign-agreement", max(sign_defect, 0.0), 1e-12))
    checks.append(Check("argmin-degree<=1", float(argmin_excess), 0.0))

    worst = 0.0
    for kappa in np.linspace(-20.0, 20.0, 200):
        kappa = float(kappa)
        value, _ = eigensolver.gamma_numeric(kappa, n_max=20)
        worst = max(worst, abs(value - sharp.gamma(kappa)))
    checks.append(Check("gamma-closed-vs-numeric", worst, 1e-12))
    return checks


SUITES = {
    "orthonormality": suite_orthonormality,
    "energy-routes": suite_energy_routes,
    "inequality": suite_inequality,
    "equality": suite_equality,
    "lemma": suite_lemma,
}


def run_suite(name: str, seed: int) -> list[Check]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed)
