"""Uniform periodic grids on R^d, grid-sampled functions, and L_p quadrature.

The grid covers [-L, L)^d with periodic identification and N (a power of
two) points per axis.  All norms use the rectangle rule, which is exact
for node-aligned indicators and spectrally accurate for smooth functions
that decay inside the box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

INF = math.inf

TAIL_MASS_TOL = 1e-10


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Isotropic uniform tensor grid on [-L, L)^d."""

    dim: int
    half_extent: float
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.half_extent > 0:
            raise ValueError(f"half_extent must be positive, got {self.half_extent}")
        n = self.points_per_axis
        if not (_is_power_of_two(n) and n >= 8):
            raise ValueError(f"points_per_axis must be a power of two >= 8, got {n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.points_per_axis

    @property
    def shape(self) -> tuple:
        return (self.points_per_axis,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    def axis_coords(self) -> np.ndarray:
        """Node coordinates along one axis: x_k = -L + k*h."""
        return -self.half_extent + self.spacing * np.arange(self.points_per_axis)

    def squared_radius(self) -> np.ndarray:
        """||x||^2 at every node, shape self.shape."""
        x = self.axis_coords()
        r2 = np.zeros(self.shape)
        for axis in range(self.dim):
            sh = [1] * self.dim
            sh[axis] = self.points_per_axis
            r2 = r2 + (x ** 2).reshape(sh)
        return r2

    def frequency_squared(self) -> np.ndarray:
        """||xi||^2 on the discrete dual grid, xi_k = pi*k/L in FFT order."""
        xi = 2.0 * np.pi * np.fft.fftfreq(self.points_per_axis, d=self.spacing)
        k2 = np.zeros(self.shape)
        for axis in range(self.dim):
            sh = [1] * self.dim
            sh[axis] = self.points_per_axis
            k2 = k2 + (xi ** 2).reshape(sh)
        return k2


def make_grid(d: int, L: float, N: int) -> Grid:
    """Build a Grid; rejects unsupported d, nonpositive L, non-power-of-two N."""
    return Grid(dim=d, half_extent=float(L), points_per_axis=int(N))


@dataclass(frozen=True)
class GridFunction:
    """Complex-valued samples of f: R^d -> C on a Grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("values contain non-finite entries")
        object.__setattr__(self, "values", v)

    def _check_same_grid(self, other: "GridFunction"):
        if self.grid != other.grid:
            raise ValueError("operands must share an identical Grid")

    def __add__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        self._check_same_grid(other)
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, c) -> "GridFunction":
        return GridFunction(self.grid, self.values * complex(c))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not np.any(self.values)


@dataclass(frozen=True)
class GaussianSpec:
    """The density-normalized Gaussian g(x) = (2 pi s2)^(-d/2) exp(-||x||^2/(2 s2)).

    s2 may be complex; the principal branch of the complex power is used.
    """

    sigma2: complex
    dim: int

    def __post_init__(self):
        if not complex(self.sigma2).real > 0:
            raise ValueError(f"Re(sigma2) must be positive, got {self.sigma2}")

    @property
    def envelope_variance(self) -> float:
        """Variance of the (real Gaussian) modulus envelope: |s2|^2 / Re(s2)."""
        s2 = complex(self.sigma2)
        return abs(s2) ** 2 / s2.real


def gaussian_sample(grid: Grid, spec: GaussianSpec) -> GridFunction:
    """Sample the Gaussian at grid nodes; rejects grids too small for its mass."""
    if spec.dim != grid.dim:
        raise ValueError("GaussianSpec dimension does not match grid")
    s2 = complex(spec.sigma2)
    L = grid.half_extent
    if L < 6.0 * math.sqrt(s2.real):
        raise ValueError(
            f"grid half-extent {L} < 6*sqrt(Re sigma2) = {6.0 * math.sqrt(s2.real):.6g}"
        )
    # Mass of the modulus envelope outside the box, per axis.
    v = spec.envelope_variance
    tail = grid.dim * math.erfc(L / math.sqrt(2.0 * v))
    if tail > TAIL_MASS_TOL:
        raise ValueError(f"truncated Gaussian mass {tail:.3g} exceeds {TAIL_MASS_TOL}")
    amp = (2.0 * np.pi * s2) ** (-grid.dim / 2.0)
    vals = amp * np.exp(-grid.squared_radius() / (2.0 * s2))
    return GridFunction(grid, vals)


def lp_norm(f: GridFunction, p: float) -> float:
    """Quadrature L_p norm; p = math.inf gives the node maximum of |f|."""
    if p == INF:
        return float(np.max(np.abs(f.values)))
    if not p >= 1:
        raise ValueError(f"exponent must satisfy p >= 1, got {p}")
    a = np.abs(f.values)
    m = float(a.max())
    if m == 0.0:
        return 0.0
    # factor out the max to avoid overflow for large p
    s = float(np.sum((a / m) ** p)) * f.grid.cell_volume
    return m * s ** (1.0 / p)


def gaussian_lp_exact(sigma2: complex, d: int, q: float) -> float:
    """Exact L_q norm of the (possibly complex-variance) Gaussian.

    |g(x)| is itself a scaled real Gaussian with envelope variance
    v = |s2|^2/Re(s2) and amplitude factor (v/|s2|)^(d/2), so the real
    closed form applies to it.
    """
    s2 = complex(sigma2)
    if not s2.real > 0:
        raise ValueError(f"Re(sigma2) must be positive, got {sigma2}")
    v = abs(s2) ** 2 / s2.real
    amp = (v / abs(s2)) ** (d / 2.0)
    if q == INF:
        return amp * (2.0 * math.pi * v) ** (-d / 2.0)
    if not q >= 1:
        raise ValueError(f"exponent must satisfy q >= 1, got {q}")
    return amp * (2.0 * math.pi * v) ** (-d * (1.0 - 1.0 / q) / 2.0) * q ** (-d / (2.0 * q))


@dataclass(frozen=True)
class MomentProfile:
    """The moment function h(p) = |f|_p sampled on an increasing exponent grid."""

    p_grid: np.ndarray
    values: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        p = np.asarray(self.p_grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if p.size == 0:
            raise ValueError("empty exponent grid")
        if p.size != v.size:
            raise ValueError("p_grid and values length mismatch")
        if np.any(np.diff(p) <= 0):
            raise ValueError("p_grid must be strictly increasing")
        if not np.all(p >= 1):
            raise ValueError("all exponents must be >= 1")
        if np.any(v < 0):
            raise ValueError("moment values must be nonnegative")
        object.__setattr__(self, "p_grid", p)
        object.__setattr__(self, "values", v)

    def value_at(self, p: float) -> float:
        """h at an exponent that must be (nearly) a grid point."""
        i = int(np.argmin(np.abs(self.p_grid - p))) if p != INF else -1
        if p == INF:
            if self.p_grid[-1] != INF:
                raise ValueError("profile does not contain p = inf")
            return float(self.values[-1])
        if not math.isclose(self.p_grid[i], p, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(f"exponent {p} not in profile grid")
        return float(self.values[i])


def moment_profile(f: GridFunction, p_grid, provenance: str = "") -> MomentProfile:
    """Evaluate lp_norm at each exponent of a strictly increasing grid."""
    p = np.asarray(list(p_grid), dtype=float)
    if p.size == 0:
        raise ValueError("empty exponent grid")
    a = np.abs(f.values)
    m = float(a.max())
    vol = f.grid.cell_volume
    out = np.empty(p.size)
    if m == 0.0:
        out[:] = 0.0
        return MomentProfile(p, out, provenance)
    scaled = a / m
    for i, pi in enumerate(p):
        if pi == INF:
            out[i] = m
        elif pi >= 1:
            out[i] = m * (float(np.sum(scaled ** pi)) * vol) ** (1.0 / pi)
        else:
            raise ValueError(f"exponent must satisfy p >= 1, got {pi}")
    return MomentProfile(p, out, provenance)


def box_indicator(grid: Grid, nodes_per_axis: int) -> GridFunction:
    """Node-aligned box indicator with measure (m*h)^d; quadrature-exact."""
    m = int(nodes_per_axis)
    if not 1 <= m <= grid.points_per_axis:
        raise ValueError("nodes_per_axis out of range")
    axis = np.zeros(grid.points_per_axis)
    start = (grid.points_per_axis - m) // 2
    axis[start:start + m] = 1.0
    vals = axis
    for _ in range(grid.dim - 1):
        vals = np.multiply.outer(vals, axis)
    return GridFunction(grid, vals.astype(complex))


def box_measure(grid: Grid, nodes_per_axis: int) -> float:
    return (nodes_per_axis * grid.spacing) ** grid.dim


def periodic_convolve(f: GridFunction, g: GridFunction) -> GridFunction:
    """Discrete periodic convolution approximating (f*g)(x) = int f(y) g(x-y) dy."""
    f._check_same_grid(g)
    fh = np.fft.fftn(f.values)
    gh = np.fft.fftn(g.values)
    vals = np.fft.ifftn(fh * gh) * f.grid.cell_volume
    return GridFunction(f.grid, vals)
