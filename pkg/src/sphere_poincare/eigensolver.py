"""Block-diagonal numeric recovery of the sharp constant and minimizers.

The penalized quadratic form decouples over (n, j): the (u1, u2) pair of
each degree n >= 1 sees the symmetric 2x2 block

    [[n* + 2 + kappa, -2 sqrt(n*)],
     [-2 sqrt(n*),     n*        ]]

while u3 sits in a decoupled channel with value n*, and degree 0 reduces
to the scalar kappa + 2 on u1 alone.  Minimizing the constrained energy
therefore reduces to a sweep of closed-form 2x2 eigensolves, which keeps
this module independent of any linear-algebra library and exact to
machine precision -- it is the brute-force oracle for the closed-form
sharp constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .vsh import CoeffSet

__all__ = [
    "SpectralBlock",
    "block",
    "min_eigenpair",
    "gamma_numeric",
    "numeric_minimizer",
]

_TIE_TOL = 1e-12


@dataclass(frozen=True)
class SpectralBlock:
    """Quadratic-form block of one degree: 2x2 on (u1, u2), scalar u3 channel."""

    n: int
    kappa: float
    matrix: np.ndarray
    u3_eigenvalue: float


def block(n: int, kappa: float) -> SpectralBlock:
    """Build the degree-n block; degree 0 degenerates to the scalar kappa + 2."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    nstar = float(n * (n + 1))
    if n == 0:
        matrix = np.array([[kappa + 2.0]])
    else:
        off = -2.0 * math.sqrt(nstar)
        matrix = np.array([[nstar + 2.0 + kappa, off], [off, nstar]])
    return SpectralBlock(n=n, kappa=kappa, matrix=matrix, u3_eigenvalue=nstar)


def min_eigenpair(blk: SpectralBlock) -> tuple[float, np.ndarray]:
    """Smaller eigenvalue and unit eigenvector of a degree >= 1 block.

    The eigenvector sign is fixed so u1 >= 0 (tie: u2 >= 0); the
    discriminant (kappa+2)^2 + 16 n* is always positive.
    """
    if blk.n < 1:
        raise ValueError("degree-0 block has no (u1, u2) eigenpair")
    a, b = blk.matrix[0, 0], blk.matrix[0, 1]
    d = blk.matrix[1, 1]
    disc = math.sqrt((a - d) ** 2 + 4.0 * b * b)
    value = 0.5 * ((a + d) - disc)
    vec = np.array([b, value - a])
    vec /= math.sqrt(float(vec @ vec))
    if vec[0] < 0.0 or (vec[0] == 0.0 and vec[1] < 0.0):
        vec = -vec
    return value, vec


def gamma_numeric(kappa: float, n_max: int = 20) -> tuple[float, tuple[str, ...]]:
    """Minimum over all channels up to degree n_max, with the argmin labels.

    Candidates: the degree-0 scalar kappa + 2, the smaller eigenvalue of
    every (u1, u2) block, and the decoupled u3 values n*.  Returns the
    minimum of the per-mode energy, i.e. the best constant for the
    normalized problem, together with every channel attaining it.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    candidates: list[tuple[float, str]] = [(kappa + 2.0, "n=0 scalar")]
    for n in range(1, n_max + 1):
        blk = block(n, kappa)
        value, _ = min_eigenpair(blk)
        candidates.append((value, f"n={n} block"))
        candidates.append((blk.u3_eigenvalue, f"n={n} u3"))
    best = min(value for value, _ in candidates)
    tol = _TIE_TOL * max(1.0, abs(best))
    winners = tuple(label for value, label in candidates if value - best <= tol)
    return best, winners


def _spread_direction(direction) -> np.ndarray:
    d = np.asarray(direction, dtype=float)
    if d.shape != (3,):
        raise ValueError("direction must be a 3-vector over orders j = -1, 0, 1")
    nrm = math.sqrt(float(d @ d))
    if nrm == 0.0:
        raise ValueError("direction must be nonzero")
    return d / nrm


def numeric_minimizer(
    kappa: float,
    n_max: int = 20,
    direction=None,
    rng: np.random.Generator | None = None,
) -> CoeffSet:
    """Coefficient table attaining gamma_numeric, scaled to norm_sq = 4 pi.

    When the argmin is the degree-1 block, its eigenvector fixes the
    u2/u1 ratio and the order multiplicity is resolved by ``direction``
    (a 3-vector over j = -1, 0, 1); the default is the deterministic
    j = 0 axis, or a random direction when ``rng`` is given.  Ties
    prefer the degree-0 channel.
    """
    _, winners = gamma_numeric(kappa, n_max)
    scale = math.sqrt(4.0 * math.pi)
    if "n=0 scalar" in winners:
        out = CoeffSet(1)
        out[(1, 0, 0)] = scale
        return out
    label = winners[0]
    n = int(label.split()[0].split("=")[1])
    if label.endswith("u3"):
        out = CoeffSet(n)
        out[(3, n, 0)] = scale
        return out
    _, vec = min_eigenpair(block(n, kappa))
    out = CoeffSet(n)
    if n == 1:
        if direction is not None:
            d = _spread_direction(direction)
        elif rng is not None:
            d = rng.standard_normal(3)
            d /= math.sqrt(float(d @ d))
        else:
            d = np.array([0.0, 1.0, 0.0])  # deterministic j = 0 axis
        for offset, j in enumerate((-1, 0, 1)):
            out[(1, 1, j)] = scale * vec[0] * d[offset]
            out[(2, 1, j)] = scale * vec[1] * d[offset]
        return out
    out[(1, n, 0)] = scale * vec[0]
    out[(2, n, 0)] = scale * vec[1]
    return out
