"""Closed-form time evolution of the k-photon atom-field system.

The atom starts in |e>, the field in a coherent state.  On resonance the
joint wave function stays in the closed form

    Psi(tau) = sum_n C_n [ cos(W_n tau) |n,e>  -  i sin(W_n tau) |n+k,g> ]

with W_n the generalized Rabi frequency of the n-photon sector.  Everything
in this module evaluates that formula or reduces it to the 2x2 atomic and
rank-2 field density operators; there is no integrator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import QuadraticRequiresK4
from .fock import DEFAULT_TAIL_TOL, coherent_state

__all__ = [
    "RabiMode",
    "ModelParams",
    "JointState",
    "AtomDensity",
    "FieldRank2",
    "rabi_frequency",
    "rabi_frequencies",
    "evolve",
    "field_rank2",
    "atom_density",
]


class RabiMode(enum.Enum):
    """Exact sqrt-product frequencies, or the k=4 quadratic approximation."""

    EXACT = "exact"
    QUADRATIC = "quadratic"


def rabi_frequency(n: int, k: int, mode: RabiMode) -> float:
    """Generalized Rabi frequency of the n-photon sector.

    EXACT: sqrt((n+1)(n+2)...(n+k)).  QUADRATIC (k=4 only): n^2 + 5n + 5,
    an odd integer for every n, which is what makes the special-time
    identities of the quadratic model exact.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode is RabiMode.QUADRATIC:
        if k != 4:
            raise QuadraticRequiresK4(f"quadratic mode is defined for k=4, got k={k}")
        return float(n * n + 5 * n + 5)
    return math.sqrt(math.prod(range(n + 1, n + k + 1)))


def rabi_frequencies(n_max: int, k: int, mode: RabiMode) -> np.ndarray:
    """Vector of frequencies for n = 0..n_max."""
    n = np.arange(n_max + 1, dtype=float)
    if mode is RabiMode.QUADRATIC:
        if k != 4:
            raise QuadraticRequiresK4(f"quadratic mode is defined for k=4, got k={k}")
        return n * n + 5.0 * n + 5.0
    prod = np.ones_like(n)
    for j in range(1, k + 1):
        prod *= n + j
    return np.sqrt(prod)


@dataclass(frozen=True)
class ModelParams:
    """k-photon model configuration: multiplicity, coherent amplitude, truncation.

    Resonance (atomic splitting = k times the cavity frequency) is assumed
    throughout, so there is no detuning field.
    """

    k: int
    alpha: complex
    cutoff: int
    mode: RabiMode = RabiMode.QUADRATIC
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.cutoff < self.k:
            raise ValueError("cutoff must be >= k")
        if self.mode is RabiMode.QUADRATIC and self.k != 4:
            raise QuadraticRequiresK4("quadratic mode requires k = 4")

    @property
    def nbar(self) -> float:
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class JointState:
    """Joint atom-field amplitudes at scaled time tau.

    ``excited[n]`` multiplies |n,e>, ``ground[n]`` multiplies |n,g>; the
    ground vector is zero below index k because each de-excitation deposits
    k photons.
    """

    excited: np.ndarray
    ground: np.ndarray
    tau: float
    k: int

    def __post_init__(self):
        for name in ("excited", "ground"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def cutoff(self) -> int:
        return len(self.excited) - 1

    def norm_squared(self) -> float:
        return float(np.vdot(self.excited, self.excited).real
                     + np.vdot(self.ground, self.ground).real)


@dataclass(frozen=True)
class AtomDensity:
    """2x2 reduced density matrix of the atom: rho11 = ground population,
    rho22 = excited population, rho12 the coherence.

    The coherence is reported in the convention where the ground branch
    carries +i sin(W_n tau) rather than the -i of the stored wave function
    (rho12 = -i <g|rho|e>); populations, Hermiticity and the entropy, which
    depends only on |rho12|, are unaffected, and the reported value matches
    the closed-form coherence predictions at the special interaction times.
    """

    rho11: float
    rho22: float
    rho12: complex

    @property
    def rho21(self) -> complex:
        return complex(np.conj(self.rho12))

    def eigenvalues(self) -> tuple[float, float]:
        """Eigenvalues (1 +/- sqrt((rho22-rho11)^2 + 4|rho12|^2)) / 2."""
        gap = math.sqrt((self.rho22 - self.rho11) ** 2 + 4.0 * abs(self.rho12) ** 2)
        return (0.5 * (1.0 + gap), 0.5 * (1.0 - gap))


@dataclass(frozen=True)
class FieldRank2:
    """Rank-2 decomposition of the field density operator.

    rho_F = |u><u| + |v><v| with u[n] = C_n cos(W_n tau) and
    v[n+k] = C_n sin(W_n tau); v is zero below index k.  The -i phase on the
    ground branch is absorbed (each dyad is insensitive to a global phase).
    """

    u: np.ndarray
    v: np.ndarray
    k: int = field(default=4)

    def __post_init__(self):
        for name in ("u", "v"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def purity(self) -> float:
        """Tr(rho_F^2) = ||u||^4 + ||v||^4 + 2|<u|v>|^2."""
        nu = float(np.vdot(self.u, self.u).real)
        nv = float(np.vdot(self.v, self.v).real)
        return nu * nu + nv * nv + 2.0 * abs(np.vdot(self.u, self.v)) ** 2

    def dense(self) -> np.ndarray:
        """Dense matrix |u><u| + |v><v| (for small-cutoff cross-checks)."""
        return np.outer(self.u, np.conj(self.u)) + np.outer(self.v, np.conj(self.v))


def evolve(params: ModelParams, tau: float) -> JointState:
    """Joint state at scaled time tau from the closed-form solution."""
    if not math.isfinite(tau):
        raise ValueError("tau must be finite")
    coh, _ = coherent_state(params.alpha, params.cutoff, params.tail_tol)
    c = coh.amplitudes
    freqs = rabi_frequencies(params.cutoff, params.k, params.mode)
    excited = c * np.cos(freqs * tau)
    ground = np.zeros(params.cutoff + 1, dtype=complex)
    k = params.k
    ground[k:] = -1j * c[:-k] * np.sin(freqs[:-k] * tau)
    return JointState(excited=excited, ground=ground, tau=tau, k=k)


def field_rank2(state: JointState) -> FieldRank2:
    """Reduced field density operator as the two dyads of the joint state."""
    return FieldRank2(u=state.excited.copy(), v=1j * state.ground, k=state.k)


def atom_density(state: JointState) -> AtomDensity:
    """Reduced 2x2 atomic density matrix (trace over the field)."""
    rho22 = float(np.vdot(state.excited, state.excited).real)
    rho11 = float(np.vdot(state.ground, state.ground).real)
    # <g|rho|e> = sum_n ground[n] conj(excited[n]); rotate the -i branch
    # phase out so the coherence lands in the closed-form convention.
    rho12 = -1j * complex(np.sum(state.ground * np.conj(state.excited)))
    return AtomDensity(rho11=rho11, rho22=rho22, rho12=rho12)
