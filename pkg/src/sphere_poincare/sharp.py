"""Closed-form sharp constant and the exact equality family.

For the penalized surface energy with anisotropy weight kappa, the best
constant of

    dirichlet + kappa * anisotropy >= gamma(kappa) * norm_sq

is

    gamma(kappa) = kappa + 2                                   kappa <= -4
                 = ((kappa+6) - sqrt(kappa^2+4kappa+36)) / 2    kappa > -4

and every equality field is supported on the radial degree-0 mode
(coefficient c0) and the degree-1 radial/gradient pair (coefficients
sigma_j, tau_j over j = -1, 0, 1), with regime-dependent relations:

* below (kappa < -4):    c0 = +-sqrt(4 pi), sigma = tau = 0;
* above (kappa > -4):    c0 = 0, tau_j = -2 sqrt(2)/(gamma-2) sigma_j,
  |sigma|^2 = 2 pi (-(kappa+2) + S)/S with S = sqrt(kappa^2+4kappa+36);
* critical (kappa = -4): tau_j = sigma_j sqrt(2)/2 and
  2 c0^2 + 3 |sigma|^2 = 8 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .spectral import g_kappa, norm_sq
from .vsh import CoeffSet, mode_list

__all__ = [
    "Regime",
    "MinimizerSpec",
    "classify_regime",
    "gamma",
    "gamma_plus",
    "shifted_constant",
    "build_minimizer",
    "equality_residual",
    "membership_check",
    "gamma_table_rows",
    "write_gamma_table",
]

FOUR_PI = 4.0 * math.pi

# Exact comparison after clamping: the formulas are continuous across the
# boundary, so classification within this tolerance is harmless.
_BOUNDARY_TOL = 1e-12

_NORMALIZATION_RTOL = 1e-6


class Regime(str, Enum):
    BELOW = "below"
    CRITICAL = "critical"
    ABOVE = "above"


def classify_regime(kappa: float) -> Regime:
    """Regime split of the anisotropy weight around the boundary -4."""
    _require_finite(kappa)
    if abs(kappa + 4.0) < _BOUNDARY_TOL:
        return Regime.CRITICAL
    return Regime.BELOW if kappa < -4.0 else Regime.ABOVE


def _require_finite(kappa: float) -> None:
    if not math.isfinite(kappa):
        raise ValueError("anisotropy weight must be finite")


def gamma_plus(kappa: float) -> float:
    """Smaller root of g^2 - (kappa+6) g + 2 kappa = 0, for all kappa."""
    _require_finite(kappa)
    return 0.5 * ((kappa + 6.0) - math.sqrt(kappa * kappa + 4.0 * kappa + 36.0))


def gamma(kappa: float) -> float:
    """Sharp constant: kappa + 2 up to the boundary -4, gamma_plus beyond."""
    _require_finite(kappa)
    if kappa <= -4.0:
        return kappa + 2.0
    return gamma_plus(kappa)


def shifted_constant(kappa: float) -> float:
    """|kappa| + gamma(kappa), the non-negative constant of the rewritten
    inequality for kappa < 0 (gradient plus |kappa| times the tangential
    part bounds the norm)."""
    _require_finite(kappa)
    if kappa >= 0.0:
        raise ValueError("shifted constant only defined for kappa < 0")
    return abs(kappa) + gamma(kappa)


@dataclass(frozen=True)
class MinimizerSpec:
    """Free parameters of one equality-family member."""

    kappa: float
    regime: Regime
    c0: float
    sigma: tuple[float, float, float]
    tau: tuple[float, float, float]


def _unit_direction(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise ValueError("direction must be a 3-vector over orders j = -1, 0, 1")
    nrm = math.sqrt(float(d @ d))
    if nrm == 0.0:
        raise ValueError("direction must be nonzero")
    return d / nrm


def _tau_ratio(kappa: float) -> float:
    return -2.0 * math.sqrt(2.0) / (gamma(kappa) - 2.0)


def build_minimizer(
    kappa: float,
    sign: float = 1.0,
    direction=None,
    c0: float | None = None,
) -> tuple[MinimizerSpec, CoeffSet]:
    """Construct an equality-family member for the given regime.

    Free parameters: ``sign`` picks the normal orientation below the
    boundary; ``direction`` picks the degenerate order direction above
    it (magnitude is forced); at the boundary ``c0`` and ``direction``
    mix the two families subject to 2 c0^2 + 3 |sigma|^2 = 8 pi.
    """
    regime = classify_regime(kappa)
    if regime is Regime.BELOW:
        if direction is not None or c0 is not None:
            raise ValueError("below the boundary only the sign is free")
        if sign == 0.0:
            raise ValueError("sign must be nonzero")
        c0_val = math.copysign(math.sqrt(FOUR_PI), sign)
        sigma = np.zeros(3)
        tau = np.zeros(3)
    elif regime is Regime.ABOVE:
        if c0 is not None and c0 != 0.0:
            raise ValueError("above the boundary c0 must vanish")
        d = _unit_direction(direction if direction is not None else (0.0, 1.0, 0.0))
        root = math.sqrt(kappa * kappa + 4.0 * kappa + 36.0)
        sigma_sq = 2.0 * math.pi * (-(kappa + 2.0) + root) / root
        c0_val = 0.0
        sigma = math.sqrt(sigma_sq) * d
        tau = _tau_ratio(kappa) * sigma
    else:
        c0_val = float(c0) if c0 is not None else math.sqrt(2.0 * math.pi)
        sigma_sq = (8.0 * math.pi - 2.0 * c0_val * c0_val) / 3.0
        if sigma_sq < -1e-12:
            raise ValueError("c0 too large: 2 c0^2 must not exceed 8 pi")
        if sigma_sq < 1e-12:  # snap the saturated case to exactly zero
            sigma_sq = 0.0
        if sigma_sq > 0.0:
            d = _unit_direction(direction if direction is not None else (0.0, 1.0, 0.0))
        else:
            d = np.zeros(3)
        sigma = math.sqrt(sigma_sq) * d
        tau = (math.sqrt(2.0) / 2.0) * sigma

    coeffs = CoeffSet(1)
    coeffs[(1, 0, 0)] = c0_val
    for offset, j in enumerate((-1, 0, 1)):
        coeffs[(1, 1, j)] = sigma[offset]
        coeffs[(2, 1, j)] = tau[offset]
    # Snap the norm to exactly 4 pi (pure rounding-level correction).
    scale = math.sqrt(FOUR_PI / norm_sq(coeffs))
    coeffs = scale * coeffs
    spec = MinimizerSpec(
        kappa=kappa,
        regime=regime,
        c0=scale * c0_val,
        sigma=tuple(scale * sigma),
        tau=tuple(scale * tau),
    )
    return spec, coeffs


def _require_normalized(coeffs: CoeffSet) -> None:
    nrm = norm_sq(coeffs)
    if abs(nrm - FOUR_PI) > _NORMALIZATION_RTOL * FOUR_PI:
        raise ValueError(f"coefficients must satisfy norm_sq = 4 pi, got {nrm}")


def equality_residual(coeffs: CoeffSet, kappa: float) -> float:
    """g_kappa minus its sharp lower bound 4 pi gamma(kappa).

    Non-negative up to rounding for every normalized table, and zero
    exactly on the equality family.
    """
    _require_finite(kappa)
    _require_normalized(coeffs)
    return g_kappa(coeffs, kappa) - FOUR_PI * gamma(kappa)


def membership_check(coeffs: CoeffSet, kappa: float, tol: float) -> bool:
    """True iff the table lies in the equality family within tol.

    Checks that all coefficients outside the family support vanish and
    that the regime-specific linear relations between c0, sigma and tau
    hold.  The input must already be normalized.
    """
    _require_finite(kappa)
    _require_normalized(coeffs)
    support = {(1, 0, 0)} | {(1, 1, j) for j in (-1, 0, 1)} | {(2, 1, j) for j in (-1, 0, 1)}
    leak = 0.0
    for mode in mode_list(coeffs.band_limit):
        if (mode.family, mode.n, mode.j) not in support:
            leak = max(leak, abs(coeffs[mode]))
    if leak > tol:
        return False

    c0 = coeffs[(1, 0, 0)]
    sigma = np.array([coeffs[(1, 1, j)] for j in (-1, 0, 1)])
    tau = np.array([coeffs[(2, 1, j)] for j in (-1, 0, 1)])
    regime = classify_regime(kappa)
    if regime is Regime.BELOW:
        return bool(np.max(np.abs(sigma)) <= tol and np.max(np.abs(tau)) <= tol)
    if regime is Regime.ABOVE:
        if abs(c0) > tol:
            return False
        return bool(np.max(np.abs(tau - _tau_ratio(kappa) * sigma)) <= tol)
    return bool(np.max(np.abs(tau - (math.sqrt(2.0) / 2.0) * sigma)) <= tol)


def gamma_table_rows(kappas) -> list[tuple[float, float, float, float | None]]:
    """Rows (kappa, gamma, gamma_plus, shifted-or-None) for the table."""
    rows = []
    for kappa in kappas:
        kappa = float(kappa)
        shifted = shifted_constant(kappa) if kappa < 0.0 else None
        rows.append((kappa, gamma(kappa), gamma_plus(kappa), shifted))
    return rows


def write_gamma_table(fh, kappas) -> None:
    """Write the constants table as CSV (shifted column empty for kappa >= 0)."""
    fh.write("kappa,gamma,gamma_plus,shifted\n")
    for kappa, gam, gam_plus, shifted in gamma_table_rows(kappas):
        tail = "" if shifted is None else repr(shifted)
        fh.write(f"{kappa!r},{gam!r},{gam_plus!r},{tail}\n")
