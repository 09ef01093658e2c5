"""Spatial grids, wavefunctions, and branched macroscopic superpositions.

Conventions
-----------
Gaussian packets are written with amplitude exp(-(x - x0)^2 / (4 s^2)), so
the mod-square density is exp(-(x - x0)^2 / (2 s^2)) and the position
variance is exactly s^2.  Every width-dependent formula in the package uses
this convention.

Grids are periodic: n_points cells of spacing dx cover [x_min, x_max) and
x_max is identified with x_min.  All state values are immutable after
construction; operations are pure functions returning new values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NonFiniteInputError, NotNormalizedError, ZeroNormError

# Unit-norm tolerance applied after every constructor and state-producing op.
NORM_TOL = 1e-9
# Below this mod-square norm a state counts as annihilated.
NORM_FLOOR = 1e-30


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid on [x_min, x_max) with n_points cells."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not (self.x_max > self.x_min):
            raise ValueError(f"x_max ({self.x_max}) must exceed x_min ({self.x_min})")
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def points(self) -> np.ndarray:
        x = self.x_min + self.dx * np.arange(self.n_points)
        x.setflags(write=False)
        return x

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Angular wavenumbers k matching the discrete Fourier transform."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        k.setflags(write=False)
        return k

    def wrap(self, offsets: np.ndarray | float) -> np.ndarray | float:
        """Minimal-image displacement on the periodic box."""
        L = self.length
        return (np.asarray(offsets) + 0.5 * L) % L - 0.5 * L

    def nearest_index(self, x: float) -> int:
        """Index of the grid cell whose center is closest to x (periodic)."""
        i = int(np.round((x - self.x_min) / self.dx))
        return i % self.n_points

    def region_mask(self, region: tuple[float, float]) -> np.ndarray:
        """Boolean mask of cells with lo <= x <= hi."""
        lo, hi = region
        return (self.points >= lo) & (self.points <= hi)


@dataclass(frozen=True)
class PhysicsParams:
    """Physical constants of a run.

    lam is the spontaneous-hit rate per particle, sigma the localization
    width.  Defaults use SI values; ``scaled()`` gives the desk-unit set
    (hbar = m = 1) used by most scenarios, since the SI rate produces no
    events on any feasible timescale.
    """

    hbar: float = 1.054571817e-34   # J s
    mass: float = 1.67262192369e-27  # kg (nucleon)
    lam: float = 1e-16               # 1/s per particle
    sigma: float = 1e-5              # m

    def __post_init__(self):
        for name in ("hbar", "mass", "lam", "sigma"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be strictly positive, got {value}")

    @classmethod
    def si(cls, lam: float = 1e-16, sigma: float = 1e-5) -> "PhysicsParams":
        return cls(lam=lam, sigma=sigma)

    @classmethod
    def scaled(cls, lam: float = 0.1, sigma: float = 1.0) -> "PhysicsParams":
        return cls(hbar=1.0, mass=1.0, lam=lam, sigma=sigma)


def _norm_squared(amplitudes: np.ndarray, dx: float) -> float:
    return float(np.sum(np.abs(amplitudes) ** 2) * dx)


@dataclass(frozen=True)
class WaveFunction1D:
    """Normalized complex amplitudes on a grid (dimension 1/sqrt(length)).

    The constructor enforces unit norm to within NORM_TOL; use
    ``from_samples`` to build a state from unnormalized samples.
    """

    grid: Grid1D
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (self.grid.n_points,):
            raise ValueError(
                f"amplitudes shape {amps.shape} does not match grid "
                f"({self.grid.n_points} points)"
            )
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise NonFiniteInputError("amplitudes contain NaN or infinity")
        n2 = _norm_squared(amps, self.grid.dx)
        if abs(n2 - 1.0) > NORM_TOL:
            raise NotNormalizedError(
                f"norm^2 = {n2!r} outside [1 - {NORM_TOL}, 1 + {NORM_TOL}]; "
                "use WaveFunction1D.from_samples to normalize"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_samples(cls, grid: Grid1D, samples: np.ndarray) -> "WaveFunction1D":
        """Normalize arbitrary complex samples into a valid state."""
        amps = np.asarray(samples, dtype=np.complex128)
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise NonFiniteInputError("samples contain NaN or infinity")
        n2 = _norm_squared(amps, grid.dx)
        if n2 < NORM_FLOOR:
            raise ZeroNormError(f"norm^2 = {n2!r} below {NORM_FLOOR}")
        return cls(grid, amps / np.sqrt(n2))

    @property
    def norm_squared(self) -> float:
        return _norm_squared(self.amplitudes, self.grid.dx)


def gaussian_packet(
    grid: Grid1D, center: float, width: float, wavenumber: float = 0.0
) -> WaveFunction1D:
    """Normalized Gaussian packet of position variance width^2.

    Parameters
    ----------
    grid : Grid1D
        Spatial grid; the packet should fit well inside the box.
    center : float
        Packet center x0.
    width : float
        Position standard deviation s; amplitude envelope
        exp(-(x - x0)^2 / (4 s^2)).
    wavenumber : float, optional
        Plane-wave factor exp(i k0 x) giving the packet mean momentum
        hbar * k0.
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width}")
    d = grid.wrap(grid.points - center)
    envelope = np.exp(-(d**2) / (4.0 * width**2))
    samples = envelope * np.exp(1j * wavenumber * grid.points)
    return WaveFunction1D.from_samples(grid, samples)


def uniform_state(grid: Grid1D) -> WaveFunction1D:
    """Constant amplitude over the whole box (zero kinetic energy)."""
    return WaveFunction1D.from_samples(grid, np.ones(grid.n_points, dtype=np.complex128))


def superposition(
    components: list[tuple[complex, WaveFunction1D]]
) -> WaveFunction1D:
    """Weighted sum of states on a common grid, renormalized."""
    grid = components[0][1].grid
    total = np.zeros(grid.n_points, dtype=np.complex128)
    for weight, psi in components:
        if psi.grid != grid:
            raise ValueError("superposition components must share one grid")
        total += weight * psi.amplitudes
    return WaveFunction1D.from_samples(grid, total)


def normalize(psi: WaveFunction1D) -> WaveFunction1D:
    """Rescale amplitudes by a positive real so that norm^2 = 1.

    Raises ZeroNormError when norm^2 < NORM_FLOOR (a fully annihilated
    state, e.g. after a compact truncation removed everything).
    """
    n2 = psi.norm_squared
    if n2 < NORM_FLOOR:
        raise ZeroNormError(f"norm^2 = {n2!r} below {NORM_FLOOR}")
    return WaveFunction1D(psi.grid, psi.amplitudes / np.sqrt(n2))


def mod_square_density(psi: WaveFunction1D) -> np.ndarray:
    """Pointwise |psi|^2; integrates (sum * dx) to norm^2."""
    return np.abs(psi.amplitudes) ** 2


def momentum_representation(psi: WaveFunction1D) -> np.ndarray:
    """Unitary discrete Fourier transform of the amplitudes.

    Parseval holds exactly in the l2 sense:
    sum_k |psi_k|^2 == sum_i |psi_i|^2.  Wavenumber of bin k is
    ``grid.wavenumbers[k]``; momentum is hbar * k.
    """
    return np.fft.fft(psi.amplitudes) / np.sqrt(psi.grid.n_points)


def wavefunction_from_momentum(grid: Grid1D, psi_k: np.ndarray) -> WaveFunction1D:
    """Inverse of momentum_representation."""
    return WaveFunction1D(grid, np.fft.ifft(psi_k) * np.sqrt(grid.n_points))


@dataclass(frozen=True)
class Branch:
    """One decohered product branch: complex weight, label, particle positions."""

    weight: complex
    label: str
    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.ndim != 1:
            raise ValueError("positions must be a 1-d per-particle array")
        if not np.all(np.isfinite(pos)):
            raise NonFiniteInputError("branch positions contain NaN or infinity")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "weight", complex(self.weight))


@dataclass(frozen=True)
class BranchedState:
    """Weighted list of mutually orthogonal point-localized product branches.

    Models a decohered macroscopic superposition: branches never overlap and
    evolve independently; branch_width is the nominal per-particle packet
    width, kept as metadata only (the dynamics treats branches as
    point-localized).
    """

    branches: tuple[Branch, ...]
    branch_width: float

    def __post_init__(self):
        if not self.branches:
            raise ValueError("BranchedState needs at least one branch")
        if self.branch_width <= 0:
            raise ValueError(f"branch_width must be positive, got {self.branch_width}")
        object.__setattr__(self, "branches", tuple(self.branches))
        n = self.branches[0].positions.size
        for b in self.branches:
            if b.positions.size != n:
                raise ValueError("all branches must have identical n_particles")
        labels = [b.label for b in self.branches]
        if len(set(labels)) != len(labels):
            raise ValueError(f"branch labels must be unique, got {labels}")
        closure = sum(abs(b.weight) ** 2 for b in self.branches)
        if abs(closure - 1.0) > NORM_TOL:
            raise NotNormalizedError(
                f"sum of mod-square weights = {closure!r} outside 1 +/- {NORM_TOL}"
            )

    @classmethod
    def from_amplitudes(
        cls,
        weights: list[complex],
        labels: list[str],
        positions: list[np.ndarray],
        branch_width: float,
    ) -> "BranchedState":
        """Build a branched state, normalizing the weight vector."""
        closure = sum(abs(w) ** 2 for w in weights)
        if closure < NORM_FLOOR:
            raise ZeroNormError("all branch weights are (numerically) zero")
        scale = 1.0 / np.sqrt(closure)
        branches = tuple(
            Branch(w * scale, lbl, np.asarray(pos, dtype=np.float64))
            for w, lbl, pos in zip(weights, labels, positions, strict=True)
        )
        return cls(branches, branch_width)

    @property
    def n_particles(self) -> int:
        return self.branches[0].positions.size

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.branches], dtype=np.complex128)

    @property
    def probabilities(self) -> np.ndarray:
        """Mod-square branch weights (Born weights)."""
        return np.abs(self.weights) ** 2

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(b.label for b in self.branches)


def branch_distance(state: BranchedState, j: int, k: int, particle: int) -> float:
    """|positions_j[particle] - positions_k[particle]| for two branches."""
    n = state.n_branches
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"branch index out of range (n_branches = {n})")
    if not (0 <= particle < state.n_particles):
        raise IndexError(f"particle index out of range (n_particles = {state.n_particles})")
    return float(
        abs(state.branches[j].positions[particle] - state.branches[k].positions[particle])
    )
