"""Real vector spherical harmonics: evaluation, synthesis and analysis.

Three families span L2 vector fields on the sphere:

* family 1 (radial):     y1_{n,j} = Y_{n,j} * normal
* family 2 (gradient):   y2_{n,j} = grad_S Y_{n,j} / sqrt(n(n+1))
* family 3 (curl):       y3_{n,j} = normal x y2_{n,j}

Families 2 and 3 start at degree 1; the formal degree-0 members are
identically zero and are representable only as zero coefficients.
Coefficients are stored dense per (family, n, j) up to the band limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import Grid, SampledVectorField, tangent_frame
from .legendre import MAX_DEGREE, scalar_sh, scalar_sh_grad_components

__all__ = [
    "ModeIndex",
    "CoeffSet",
    "VectorBasis",
    "mode_list",
    "eval_vsh",
    "vector_basis",
    "synthesize",
    "analyze",
    "random_coeffs",
]


@dataclass(frozen=True)
class ModeIndex:
    """One vector harmonic: family in {1,2,3}, degree n, order |j| <= n."""

    family: int
    n: int
    j: int

    def __post_init__(self):
        if self.family not in (1, 2, 3):
            raise ValueError(f"family must be 1, 2 or 3, got {self.family}")
        if self.n < 0 or self.n > MAX_DEGREE:
            raise ValueError(f"degree n={self.n} outside [0, {MAX_DEGREE}]")
        if abs(self.j) > self.n:
            raise ValueError(f"order j={self.j} outside [-n, n] for n={self.n}")
        if self.family != 1 and self.n == 0:
            raise ValueError("families 2 and 3 have no degree-0 mode")


@lru_cache(maxsize=None)
def _mode_tuple(band_limit: int) -> tuple[ModeIndex, ...]:
    modes = []
    for family in (1, 2, 3):
        start = 0 if family == 1 else 1
        for n in range(start, band_limit + 1):
            for j in range(-n, n + 1):
                modes.append(ModeIndex(family, n, j))
    return tuple(modes)


def mode_list(band_limit: int) -> list[ModeIndex]:
    """All modes with n <= band_limit in canonical (family, n, j) order."""
    return list(_mode_tuple(band_limit))


@lru_cache(maxsize=None)
def _valid_mask(band_limit: int) -> np.ndarray:
    mask = np.zeros((3, band_limit + 1, 2 * band_limit + 1), dtype=bool)
    for n in range(band_limit + 1):
        for j in range(-n, n + 1):
            mask[0, n, j + band_limit] = True
            if n >= 1:
                mask[1, n, j + band_limit] = True
                mask[2, n, j + band_limit] = True
    mask.setflags(write=False)
    return mask


class CoeffSet:
    """Band-limited real coefficient table indexed by (family, n, j).

    Missing modes mean zero; the degree-0 entries of families 2 and 3
    are pinned to zero.
    """

    def __init__(self, band_limit: int, data: np.ndarray | None = None):
        if band_limit < 0 or band_limit > MAX_DEGREE:
            raise ValueError(f"band limit {band_limit} outside [0, {MAX_DEGREE}]")
        self.band_limit = band_limit
        shape = (3, band_limit + 1, 2 * band_limit + 1)
        if data is None:
            self.data = np.zeros(shape)
        else:
            data = np.asarray(data, dtype=float)
            if data.shape != shape:
                raise ValueError(f"data shape {data.shape} != {shape}")
            if not np.all(np.isfinite(data)):
                raise ValueError("coefficients must be finite")
            if np.any(data[~_valid_mask(band_limit)] != 0.0):
                raise ValueError("nonzero coefficient outside the valid mode set")
            self.data = data.copy()

    @staticmethod
    def _key(key) -> tuple[int, int, int]:
        if isinstance(key, ModeIndex):
            return key.family, key.n, key.j
        family, n, j = key
        return int(family), int(n), int(j)

    def _position(self, family: int, n: int, j: int) -> tuple[int, int, int]:
        if family not in (1, 2, 3):
            raise ValueError(f"family must be 1, 2 or 3, got {family}")
        if n < 0 or abs(j) > n:
            raise ValueError(f"invalid degree/order ({n}, {j})")
        return family - 1, n, j + self.band_limit

    def __getitem__(self, key) -> float:
        family, n, j = self._key(key)
        if family != 1 and n == 0:
            return 0.0
        if n > self.band_limit:
            self._position(family, n, j)  # validate shape of the request
            return 0.0
        i, a, b = self._position(family, n, j)
        return float(self.data[i, a, b])

    def __setitem__(self, key, value: float) -> None:
        family, n, j = self._key(key)
        value = float(value)
        if not np.isfinite(value):
            raise ValueError("coefficient values must be finite")
        if family != 1 and n == 0:
            if value != 0.0:
                raise ValueError("degree-0 modes of families 2 and 3 are zero")
            return
        if n > self.band_limit:
            raise ValueError(f"degree {n} exceeds band limit {self.band_limit}")
        i, a, b = self._position(family, n, j)
        self.data[i, a, b] = value

    def items_nonzero(self):
        for mode in mode_list(self.band_limit):
            value = self[mode]
            if value != 0.0:
                yield mode, value

    def as_vector(self) -> np.ndarray:
        """Coefficients in canonical mode order."""
        # C-order traversal of the valid mask matches mode_list order.
        return self.data[_valid_mask(self.band_limit)]

    @classmethod
    def from_vector(cls, band_limit: int, vec: np.ndarray) -> "CoeffSet":
        mask = _valid_mask(band_limit)
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (int(mask.sum()),):
            raise ValueError(f"expected {int(mask.sum())} coefficients, got {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise ValueError("coefficients must be finite")
        out = cls(band_limit)
        out.data[mask] = vec
        return out

    def copy(self) -> "CoeffSet":
        return CoeffSet(self.band_limit, self.data)

    def with_band_limit(self, band_limit: int) -> "CoeffSet":
        """Zero-padded or truncated copy (truncation drops high degrees)."""
        out = CoeffSet(band_limit)
        n_keep = min(self.band_limit, band_limit)
        for mode in mode_list(n_keep):
            out[mode] = self[mode]
        return out

    def __add__(self, other: "CoeffSet") -> "CoeffSet":
        if not isinstance(other, CoeffSet):
            return NotImplemented
        if other.band_limit != self.band_limit:
            raise ValueError("band limits differ; pad with with_band_limit first")
        return CoeffSet(self.band_limit, self.data + other.data)

    def __mul__(self, scalar: float) -> "CoeffSet":
        return CoeffSet(self.band_limit, self.data * float(scalar))

    __rmul__ = __mul__

    def to_csv(self, path) -> None:
        """Write nonzero coefficients as CSV rows i,n,j,value."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("i,n,j,value\n")
            for mode, value in self.items_nonzero():
                fh.write(f"{mode.family},{mode.n},{mode.j},{float(value)!r}\n")

    @classmethod
    def from_csv(cls, path, band_limit: int | None = None) -> "CoeffSet":
        """Load coefficients; unknown (i,n,j) rows are rejected, missing rows are zero."""
        entries: dict[tuple[int, int, int], float] = {}
        with open(path, "r", encoding="utf-8") as fh:
            header = fh.readline().strip()
            if header != "i,n,j,value":
                raise ValueError(f"unexpected header {header!r}")
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                if len(parts) != 4:
                    raise ValueError(f"line {lineno}: expected 4 fields")
                family, n, j = int(parts[0]), int(parts[1]), int(parts[2])
                value = float(parts[3])
                ModeIndex(family, n, j)  # rejects unknown modes
                if (family, n, j) in entries:
                    raise ValueError(f"line {lineno}: duplicate mode ({family},{n},{j})")
                entries[(family, n, j)] = value
        if band_limit is None:
            band_limit = max((n for _, n, _ in entries), default=0)
        out = cls(band_limit)
        for (family, n, j), value in entries.items():
            if n > band_limit:
                raise ValueError(f"mode degree {n} exceeds band limit {band_limit}")
            out[(family, n, j)] = value
        return out


def eval_vsh(mode: ModeIndex, phi, t) -> np.ndarray:
    """Evaluate one vector harmonic at (phi, t); returns R^3 values."""
    eps_phi, eps_t, normal = tangent_frame(phi, t)
    y = scalar_sh(mode.n, mode.j, phi, t)
    if mode.family == 1:
        return np.asarray(y)[..., None] * normal
    d_phi, d_t = scalar_sh_grad_components(mode.n, mode.j, phi, t)
    t_arr = np.asarray(t, dtype=float)
    s = np.sqrt(1.0 - t_arr * t_arr)
    grad = (
        eps_phi * (np.asarray(d_phi) / s)[..., None]
        + eps_t * (s * np.asarray(d_t))[..., None]
    )
    y2 = grad / np.sqrt(mode.n * (mode.n + 1))
    if mode.family == 2:
        return y2
    return np.cross(normal, y2)


def _require_synthesis_resolution(grid: Grid, band_limit: int) -> None:
    if grid.n_t < band_limit + 1 or grid.n_phi < 2 * band_limit + 1:
        raise ValueError(
            f"grid ({grid.n_t}, {grid.n_phi}) does not resolve band limit {band_limit}"
        )


def _require_analysis_resolution(grid: Grid, band_limit: int) -> None:
    # Products of two band-N vector harmonics have scalar degree 2N + 2.
    if grid.n_t < band_limit + 2 or grid.n_phi < 2 * band_limit + 3:
        raise ValueError(
            f"grid ({grid.n_t}, {grid.n_phi}) under-resolved for analysis at band "
            f"limit {band_limit}; need at least ({band_limit + 2}, {2 * band_limit + 3})"
        )


class VectorBasis:
    """All vector harmonics up to a band limit evaluated on one grid."""

    def __init__(self, grid: Grid, band_limit: int):
        _require_synthesis_resolution(grid, band_limit)
        self.grid = grid
        self.band_limit = band_limit
        self.modes = mode_list(band_limit)
        t_mesh, phi_mesh = grid.meshes
        self.matrix = np.stack([eval_vsh(mode, phi_mesh, t_mesh) for mode in self.modes])
        self._weighted = self.matrix * grid.weights[..., None]

    def synthesize(self, coeffs: CoeffSet) -> SampledVectorField:
        if coeffs.band_limit != self.band_limit:
            coeffs = coeffs.with_band_limit(self.band_limit)
        values = np.einsum("m,mijk->ijk", coeffs.as_vector(), self.matrix)
        return SampledVectorField(grid=self.grid, values=values)

    def analyze(self, u: SampledVectorField) -> CoeffSet:
        _require_analysis_resolution(self.grid, self.band_limit)
        if u.grid is not self.grid and not (
            np.array_equal(u.grid.t, self.grid.t)
            and np.array_equal(u.grid.phi, self.grid.phi)
        ):
            raise ValueError("field sampled on a different grid")
        vec = np.einsum("mijk,ijk->m", self._weighted, u.values)
        return CoeffSet.from_vector(self.band_limit, vec)


def vector_basis(grid: Grid, band_limit: int) -> VectorBasis:
    """Cached VectorBasis for (grid, band_limit)."""
    key = ("vector", band_limit)
    if key not in grid._cache:
        grid._cache[key] = VectorBasis(grid, band_limit)
    return grid._cache[key]


def synthesize(coeffs: CoeffSet, grid: Grid) -> SampledVectorField:
    """Pointwise sum of coeff * mode over the grid."""
    return vector_basis(grid, coeffs.band_limit).synthesize(coeffs)


def analyze(u: SampledVectorField, band_limit: int) -> CoeffSet:
    """Coefficient table of a sampled field via quadrature inner products."""
    return vector_basis(u.grid, band_limit).analyze(u)


def random_coeffs(
    band_limit: int,
    rng: np.random.Generator,
    families=(1, 2, 3),
    norm_sq: float | None = None,
) -> CoeffSet:
    """Random coefficient table with iid standard normal entries.

    Drawing iid normals and rescaling to the constraint sphere samples
    the constraint set rotation-invariantly, which is what the fuzzing
    suites want.
    """
    out = CoeffSet(band_limit)
    family_rows = np.array([f in families for f in (1, 2, 3)])
    mask = _valid_mask(band_limit) & family_rows[:, None, None]
    out.data[mask] = rng.standard_normal(int(mask.sum()))
    if norm_sq is not None:
        current = float(np.sum(out.data * out.data))
        if current == 0.0:
            raise ValueError("cannot rescale an all-zero coefficient table")
        out.data *= np.sqrt(norm_sq / current)
    return out
