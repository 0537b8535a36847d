"""Fourier-side representation of periodic mean-zero real fields.

Coefficients use the analysis convention  u(x) = sum_xi uhat(xi) e^{i xi x}
on the 2*pi torus, i.e. uhat(xi) = (1/2pi) int e^{-i xi x} u dx.  Only the
xi >= 1 half is stored; uhat(-xi) = conj(uhat(xi)) and uhat(0) = 0 hold by
construction, so reality and mean-zero cannot be violated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class RealityError(ValueError):
    """Raised when an operation would break conjugate symmetry."""


@dataclass(frozen=True)
class DispersionSymbol:
    """Dispersion symbol omega(xi): fractional |xi|^alpha xi, or xi^5.

    omega is odd for both kinds.  alpha = 2 reproduces xi^3 exactly in
    integer arithmetic, as does the quintic symbol; those two lanes feed
    the exact-rational multiplier evaluation.
    """

    kind: str = "fractional"
    alpha: float = 2.0

    def __post_init__(self):
        if self.kind not in ("fractional", "quintic"):
            raise ValueError(f"unknown dispersion kind {self.kind!r}")
        if self.kind == "fractional" and not 1.0 < self.alpha <= 2.0:
            raise ValueError("fractional dispersion requires 1 < alpha <= 2")

    @property
    def exponent(self) -> float:
        """Growth exponent used in resonance comparisons (|xi|^exponent)."""
        return self.alpha if self.kind == "fractional" else 4.0

    @property
    def is_exact(self) -> bool:
        """True when omega takes exact integer values on integers."""
        return self.kind == "quintic" or self.alpha == 2.0

    def omega(self, xi):
        """omega(xi), with omega(0) = 0.  Exact int on the exact lanes."""
        if self.kind == "quintic":
            return xi**5 if isinstance(xi, int) else float(xi) ** 5
        if self.alpha == 2.0:
            return xi**3 if isinstance(xi, int) else float(xi) ** 3
        if xi == 0:
            return 0.0
        return math.exp(self.alpha * math.log(abs(xi))) * xi

    def omega_array(self, xi: np.ndarray) -> np.ndarray:
        if self.kind == "quintic":
            return xi.astype(float) ** 5
        if self.alpha == 2.0:
            return xi.astype(float) ** 3
        out = np.abs(xi).astype(float) ** self.alpha * xi
        return out


@dataclass(frozen=True)
class Grid:
    """Resolved symmetric mode range xi in [-M, M].

    ``dealias_fraction`` scales the retained share of the padded physical
    grid; 1.0 gives the minimal alias-free padding for the requested
    product degree (the generalized 2/3 rule).
    """

    num_modes: int
    dealias_fraction: float = 1.0

    def __post_init__(self):
        if self.num_modes < 1:
            raise ValueError("num_modes must be >= 1")
        if not 0.0 < self.dealias_fraction <= 1.0:
            raise ValueError("dealias_fraction must be in (0, 1]")

    def physical_size(self, degree: int = 1) -> int:
        """Physical sample count for alias-free products of total degree."""
        needed = (degree + 1) * self.num_modes / self.dealias_fraction + 1
        needed = max(int(math.ceil(needed)), 2 * self.num_modes + 1)
        n = 1
        while n < needed:
            n *= 2
        return n


@dataclass(frozen=True)
class SpectralField:
    """Mean-zero real periodic field stored as coefficients for xi = 1..M."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.complex128)
        if c.shape != (self.grid.num_modes,):
            raise ValueError(
                f"expected {self.grid.num_modes} coefficients, got {c.shape}"
            )
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, grid: Grid) -> "SpectralField":
        return cls(grid, np.zeros(grid.num_modes, dtype=np.complex128))

    @classmethod
    def from_modes(cls, grid: Grid, modes: dict, tol: float = 1e-12) -> "SpectralField":
        """Build from {xi: amplitude}; the xi = 0 entry is projected away.

        When both xi and -xi are given they must be conjugate up to tol.
        """
        c = np.zeros(grid.num_modes, dtype=np.complex128)
        scale = max([1.0] + [abs(v) for v in modes.values()])
        for xi, val in modes.items():
            if xi == 0:
                continue
            if abs(xi) > grid.num_modes:
                raise ValueError(f"mode {xi} outside the resolved range")
            if xi > 0:
                c[xi - 1] = val
        for xi, val in modes.items():
            if xi >= 0:
                continue
            k = -xi - 1
            if -xi in modes or c[k] != 0:
                if abs(c[k] - np.conj(val)) > tol * scale:
                    raise RealityError(
                        f"modes {xi} and {-xi} are not conjugate-symmetric"
                    )
            else:
                c[k] = np.conj(val)
        return cls(grid, c)

    @classmethod
    def from_physical(cls, grid: Grid, samples: np.ndarray) -> "SpectralField":
        """Transform real samples on a uniform grid; projects out the mean."""
        samples = np.asarray(samples, dtype=float)
        n = samples.shape[0]
        if n < 2 * grid.num_modes + 1:
            raise ValueError("not enough samples to resolve the grid's modes")
        spec = np.fft.rfft(samples) / n
        return cls(grid, spec[1 : grid.num_modes + 1])

    # -- accessors ----------------------------------------------------

    def coeff(self, xi: int) -> complex:
        """uhat(xi) for any xi in [-M, M] (mirror for negative xi)."""
        if xi == 0:
            return 0.0 + 0.0j
        if abs(xi) > self.grid.num_modes:
            raise ValueError(f"mode {xi} outside the resolved range")
        return self.coeffs[xi - 1] if xi > 0 else np.conj(self.coeffs[-xi - 1])

    def full_modes(self) -> np.ndarray:
        """Dense coefficient array indexed xi + M, for xi in [-M, M]."""
        m = self.grid.num_modes
        full = np.zeros(2 * m + 1, dtype=np.complex128)
        full[m + 1 :] = self.coeffs
        full[:m] = np.conj(self.coeffs[::-1])
        return full

    def to_physical(self, num_points: int | None = None) -> np.ndarray:
        n = num_points or self.grid.physical_size()
        half = np.zeros(n // 2 + 1, dtype=np.complex128)
        m = min(self.grid.num_modes, n // 2)
        half[1 : m + 1] = self.coeffs[:m]
        return np.fft.irfft(half * n, n=n)

    def norm_inf_coeff(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if self.grid.num_modes else 0.0

    # -- arithmetic (value semantics) ----------------------------------

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_grid(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_grid(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__

    def _check_grid(self, other):
        if other.grid != self.grid:
            raise ValueError("grid mismatch")


def hs_norm(f: SpectralField, s: float) -> float:
    """Sobolev norm sqrt(sum_{xi != 0} |xi|^{2s} |fhat(xi)|^2).

    The mean contribution |fhat(0)|^2 is identically zero here.
    """
    if f.grid.num_modes == 0:
        return 0.0
    xi = np.arange(1, f.grid.num_modes + 1, dtype=float)
    return math.sqrt(2.0 * float(np.sum(xi ** (2 * s) * np.abs(f.coeffs) ** 2)))


def free_evolve(f: SpectralField, sym: DispersionSymbol, t: float) -> SpectralField:
    """Linear propagator: multiply mode xi by e^{i t omega(xi)}."""
    xi = np.arange(1, f.grid.num_modes + 1)
    phase = np.exp(1j * t * sym.omega_array(xi))
    return SpectralField(f.grid, f.coeffs * phase)


def apply_multiplier(f: SpectralField, m, tol: float = 1e-9) -> SpectralField:
    """Coefficient-wise product with the multiplier m(xi).

    Reality survives iff m(-xi) = conj(m(xi)); violations beyond tol
    (relative to the touched coefficients) raise RealityError.
    """
    out = np.empty_like(f.coeffs)
    for k in range(f.grid.num_modes):
        xi = k + 1
        mp, mm = complex(m(xi)), complex(m(-xi))
        if abs(mm - np.conj(mp)) * abs(f.coeffs[k]) > tol * (1.0 + abs(f.coeffs[k])):
            raise RealityError(
                f"multiplier breaks conjugate symmetry at xi = {xi}"
            )
        out[k] = mp * f.coeffs[k]
    return SpectralField(f.grid, out)


def project_mean_zero(f: SpectralField) -> SpectralField:
    """Projection onto mean-zero functions; identity on this representation.

    Constructors already strip the xi = 0 coefficient, which makes the
    projection idempotent by construction.
    """
    return f


def smooth_random_field(
    grid: Grid, rng: np.random.Generator, amplitude: float = 1.0, decay: float = 0.7
) -> SpectralField:
    """Random analytic field: |uhat(xi)| = amplitude*e^{-decay*xi}, random phases."""
    xi = np.arange(1, grid.num_modes + 1, dtype=float)
    mag = amplitude * np.exp(-decay * xi)
    phase = np.exp(2j * np.pi * rng.random(grid.num_modes))
    return SpectralField(grid, mag * phase)


def power_law_field(
    grid: Grid, rng: np.random.Generator, exponent: float, amplitude: float = 1.0
) -> SpectralField:
    """Random rough field: |uhat(xi)| = amplitude*|xi|^{-exponent}, random phases."""
    xi = np.arange(1, grid.num_modes + 1, dtype=float)
    mag = amplitude * xi ** (-exponent)
    phase = np.exp(2j * np.pi * rng.random(grid.num_modes))
    return SpectralField(grid, mag * phase)
