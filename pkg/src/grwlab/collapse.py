"""The stochastic hit process: exponential hit timing, Born-weighted center
sampling, and application of localization kernels to grid states and
branched states.

Kernel convention
-----------------
The Gaussian hit multiplies amplitudes by exp(-(x - z)^2 / (4 sigma^2)), so
a component at distance d from the collapse center keeps the amplitude
fraction exp(-d^2 / (4 sigma^2)) and the mod-square fraction
exp(-d^2 / (2 sigma^2)).  For center sampling the amplitude kernel carries
the prefactor (2 pi sigma^2)^(-1/4), which makes the center density
p(z) = |L_z psi|^2 integrate to one: p is the mod-square density convolved
with a normal density of variance sigma^2.

The compact-support kernel keeps the same Gaussian interior but sets
amplitudes with |x - z| > window exactly to zero.  The ideal kernel
projects onto the single grid cell nearest z; it is kept as an explicitly
unphysical reference (its energy cost diverges with grid resolution).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .errors import ZeroNormError
from .propagator import Potential1D, evolve, evolve_free
from .state import (
    NORM_FLOOR,
    NORM_TOL,
    Branch,
    BranchedState,
    PhysicsParams,
    WaveFunction1D,
    mod_square_density,
)


@dataclass(frozen=True)
class GaussianKernel:
    """Bell-curve hit of width sigma; never annihilates amplitude."""

    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")

    def amplitude_factor(self, distance):
        return np.exp(-np.square(distance) / (4.0 * self.sigma**2))


@dataclass(frozen=True)
class CompactSupportKernel:
    """Gaussian interior truncated to |x - z| <= window, then renormalized."""

    sigma: float
    window: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.window <= 0:
            raise ValueError(f"window must be positive, got {self.window}")

    def amplitude_factor(self, distance):
        d = np.asarray(distance, dtype=np.float64)
        inside = np.abs(d) <= self.window
        return np.exp(-np.square(d) / (4.0 * self.sigma**2)) * inside


@dataclass(frozen=True)
class IdealKernel:
    """Projection onto the single grid cell nearest the center (unphysical)."""

    def amplitude_factor(self, distance):
        return (np.asarray(distance, dtype=np.float64) == 0.0).astype(np.float64)


CollapseKernel = GaussianKernel | CompactSupportKernel | IdealKernel


def kernel_label(kernel: CollapseKernel) -> str:
    if isinstance(kernel, GaussianKernel):
        return f"gaussian(sigma={kernel.sigma!r})"
    if isinstance(kernel, CompactSupportKernel):
        return f"compact_support(sigma={kernel.sigma!r}, window={kernel.window!r})"
    return "ideal"


class RngStream:
    """Counter-based random stream, reproducible across platforms.

    Wraps numpy's Philox generator.  Identical (seed, spawn_key) pairs yield
    identical draw sequences; per-trial streams come from ``for_trial`` so
    ensembles can run in any order or in parallel without changing results.
    """

    def __init__(self, seed: int, spawn_key: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.spawn_key = tuple(spawn_key)
        sequence = np.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.Philox(sequence))

    @classmethod
    def for_trial(cls, master_seed: int, trial: int) -> "RngStream":
        return cls(master_seed, spawn_key=(trial,))

    def random(self) -> float:
        return float(self._gen.random())

    def integers(self, high: int) -> int:
        """Uniform integer in [0, high)."""
        return int(self._gen.integers(high))

    def exponential(self, mean: float) -> float:
        return float(self._gen.exponential(scale=mean))

    def uniforms(self, size: int) -> np.ndarray:
        return self._gen.random(size)

    def choose_index(self, probabilities: np.ndarray) -> int:
        """Inverse-CDF draw from a finite probability vector."""
        cdf = np.cumsum(probabilities)
        u = self.random() * cdf[-1]
        return min(int(np.searchsorted(cdf, u, side="right")), len(cdf) - 1)


@dataclass(frozen=True)
class CollapseEvent:
    """Record of a single hit.

    pre_weights / post_weights are mod-square branch weights (None for grid
    states, which carry no branch decomposition).
    """

    time: float
    particle: int
    center: float
    kernel: str
    selected_branch: str | None = None
    pre_weights: tuple[float, ...] | None = None
    post_weights: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.time < 0:
            raise ValueError(f"event time must be >= 0, got {self.time}")
        if self.post_weights is not None:
            total = sum(self.post_weights)
            if abs(total - 1.0) > NORM_TOL:
                raise ValueError(f"post_weights sum to {total!r}, expected 1")

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "particle": self.particle,
            "center": self.center,
            "kernel": self.kernel,
            "selected_branch": self.selected_branch,
            "pre_weights": list(self.pre_weights) if self.pre_weights else None,
            "post_weights": list(self.post_weights) if self.post_weights else None,
        }


def hit_rate(n_particles: int, params: PhysicsParams) -> float:
    """Total spontaneous-hit rate n_particles * lam.

    Computed through decimal arithmetic on the shortest decimal
    representation, so that round decimal inputs give round rates
    (1e23 particles at 1e-16 per second is exactly 1e7 per second, which a
    straight float product misses by one part in 1e16).
    """
    if n_particles < 1:
        raise ValueError(f"n_particles must be >= 1, got {n_particles}")
    return float(Decimal(repr(n_particles)) * Decimal(repr(params.lam)))


def sample_hit_time(n_particles: int, params: PhysicsParams, rng: RngStream) -> float:
    """Waiting time to the next hit: Exponential(rate = n_particles * lam).

    Which particle is hit is uniform over particles and is drawn separately
    (see run_grw).
    """
    return rng.exponential(1.0 / hit_rate(n_particles, params))


def _center_density(psi: WaveFunction1D, kernel: CollapseKernel) -> np.ndarray:
    """p(z) = |L_z psi|^2 evaluated at the grid points (sums to ~1/dx)."""
    grid = psi.grid
    rho = mod_square_density(psi)
    if isinstance(kernel, IdealKernel):
        # zero-width limit: the center density is the mod-square density
        return rho.copy()
    sigma = kernel.sigma
    offsets = grid.wrap(grid.points - grid.x_min)
    profile = np.exp(-(offsets**2) / (2.0 * sigma**2)) / math.sqrt(2.0 * math.pi * sigma**2)
    if isinstance(kernel, CompactSupportKernel):
        profile = profile * (np.abs(offsets) <= kernel.window)
        retained = math.erf(kernel.window / (sigma * math.sqrt(2.0)))
        profile = profile / retained
    # circular convolution: p_j = sum_i K(x_j - x_i) rho_i dx
    p = np.fft.ifft(np.fft.fft(rho) * np.fft.fft(profile)).real * grid.dx
    np.clip(p, 0.0, None, out=p)
    return p


def sample_center(
    psi: WaveFunction1D,
    kernel: CollapseKernel,
    rng: RngStream,
    size: int | None = None,
) -> float | np.ndarray:
    """Draw collapse center(s) z from p(z) = |L_z psi|^2.

    Inverse-CDF sampling over p evaluated at the grid points: exact to grid
    resolution and reproducible.  For the ideal kernel p reduces to the
    mod-square density itself (zero-width limit).
    """
    p = _center_density(psi, kernel)
    cdf = np.cumsum(p)
    if cdf[-1] < NORM_FLOOR:
        raise ZeroNormError("center density vanishes everywhere")
    u = rng.uniforms(size or 1) * cdf[-1]
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), psi.grid.n_points - 1)
    centers = psi.grid.points[idx]
    return centers if size is not None else float(centers[0])


def apply_hit(psi: WaveFunction1D, center: float, kernel: CollapseKernel) -> WaveFunction1D:
    """Multiply by the kernel amplitude centered at z, then renormalize.

    Gaussian hits leave every previously nonzero amplitude nonzero; the
    compact-support hit zeroes amplitudes beyond its window exactly; the
    ideal hit keeps only the single grid cell nearest z.
    """
    grid = psi.grid
    if isinstance(kernel, IdealKernel):
        idx = grid.nearest_index(center)
        amps = np.zeros(grid.n_points, dtype=np.complex128)
        amps[idx] = psi.amplitudes[idx]
    else:
        d = grid.wrap(grid.points - center)
        amps = psi.amplitudes * kernel.amplitude_factor(d)
    n2 = float(np.sum(np.abs(amps) ** 2) * grid.dx)
    if n2 < NORM_FLOOR:
        raise ZeroNormError(
            f"hit at z = {center!r} with {kernel_label(kernel)} annihilated the state"
        )
    return WaveFunction1D(grid, amps / np.sqrt(n2))


def apply_branch_hit(
    state: BranchedState,
    particle: int,
    kernel: CollapseKernel,
    rng: RngStream,
    time: float = 0.0,
) -> tuple[BranchedState, CollapseEvent]:
    """One hit on a branched state.

    Selects branch k with Born probability |w_k|^2, centers the kernel on
    that branch's position of the hit particle, multiplies every branch
    weight by the kernel amplitude at its distance from the center, and
    renormalizes.
    """
    if not (0 <= particle < state.n_particles):
        raise IndexError(f"particle index out of range (n_particles = {state.n_particles})")
    pre = state.probabilities
    k = rng.choose_index(pre)
    center = float(state.branches[k].positions[particle])
    distances = np.array(
        [abs(b.positions[particle] - center) for b in state.branches]
    )
    factors = kernel.amplitude_factor(distances)
    new_weights = state.weights * factors
    closure = float(np.sum(np.abs(new_weights) ** 2))
    if closure < NORM_FLOOR:
        raise ZeroNormError("hit annihilated every branch weight")
    new_weights = new_weights / np.sqrt(closure)
    branches = tuple(
        Branch(w, b.label, b.positions) for w, b in zip(new_weights, state.branches)
    )
    new_state = BranchedState(branches, state.branch_width)
    event = CollapseEvent(
        time=time,
        particle=particle,
        center=center,
        kernel=kernel_label(kernel),
        selected_branch=state.branches[k].label,
        pre_weights=tuple(float(p) for p in pre),
        post_weights=tuple(float(p) for p in new_state.probabilities),
    )
    return new_state, event


def run_grw(
    initial: WaveFunction1D | BranchedState,
    duration: float,
    kernel: CollapseKernel,
    params: PhysicsParams,
    rng: RngStream,
    potential: Potential1D | None = None,
    dt: float | None = None,
) -> tuple[WaveFunction1D | BranchedState, list[CollapseEvent]]:
    """Alternate unitary evolution and hits at sampled exponential times.

    Grid states free-evolve exactly between hits (or by Strang steps of size
    dt when a potential is supplied); branched states evolve trivially
    (positions fixed).  The event log is complete, time-ordered, and fully
    reproducible from the stream's seed.  Draw order per hit: waiting time,
    then hit particle, then branch/center selection.
    """
    if duration < 0:
        raise ValueError(f"duration must be >= 0, got {duration}")
    events: list[CollapseEvent] = []
    t = 0.0

    if isinstance(initial, BranchedState):
        state = initial
        n = state.n_particles
        while True:
            wait = sample_hit_time(n, params, rng)
            if t + wait > duration:
                break
            t += wait
            particle = rng.integers(n)
            state, event = apply_branch_hit(state, particle, kernel, rng, time=t)
            events.append(event)
        return state, events

    if potential is not None and dt is None:
        raise ValueError("dt is required when evolving with a potential")

    def advance(psi: WaveFunction1D, interval: float) -> WaveFunction1D:
        if interval == 0.0:
            return psi
        if potential is None:
            return evolve_free(psi, params, interval)
        n_steps = max(1, int(round(interval / dt)))
        return evolve(psi, potential, params, interval / n_steps, n_steps)

    psi = initial
    while True:
        wait = sample_hit_time(1, params, rng)
        if t + wait > duration:
            psi = advance(psi, duration - t)
            break
        psi = advance(psi, wait)
        t += wait
        center = sample_center(psi, kernel, rng)
        psi = apply_hit(psi, center, kernel)
        events.append(
            CollapseEvent(time=t, particle=0, center=center, kernel=kernel_label(kernel))
        )
    return psi, events


__all__ = [
    "GaussianKernel",
    "CompactSupportKernel",
    "IdealKernel",
    "CollapseKernel",
    "CollapseEvent",
    "RngStream",
    "kernel_label",
    "hit_rate",
    "sample_hit_time",
    "sample_center",
    "apply_hit",
    "apply_branch_hit",
    "run_grw",
]
