"""Truncated Fock-space states and the canonical constructors.

A field state is a normalized complex amplitude vector over the photon-number
basis |0>..|N|.  Constructors build amplitudes by the stable recurrence
``c[n+1] = c[n] * alpha / sqrt(n+1)`` (no explicit factorials, which overflow
near n = 170) and renormalize only after verifying that the analytic
probability mass above the cutoff is below the caller's tail tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import CutoffMismatch, NonPositiveTolerance, TailTooHeavy

DEFAULT_TAIL_TOL = 1e-9

__all__ = [
    "FieldState",
    "TailReport",
    "coherent_state",
    "kerr_state",
    "overlap",
    "fidelity",
    "coherent_amplitudes",
]


@dataclass(frozen=True)
class FieldState:
    """Normalized pure state of the cavity field, truncated at ``cutoff``."""

    amplitudes: np.ndarray  # complex, shape (cutoff+1,)
    cutoff: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if self.cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        if amps.shape != (self.cutoff + 1,):
            raise ValueError("amplitude vector must have cutoff+1 entries")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def to_json(self) -> dict:
        """Serialize as {"cutoff": N, "re": [...], "im": [...]}."""
        return {
            "cutoff": self.cutoff,
            "re": self.amplitudes.real.tolist(),
            "im": self.amplitudes.imag.tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "FieldState":
        amps = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
        return cls(amplitudes=amps, cutoff=int(data["cutoff"]))


@dataclass(frozen=True)
class TailReport:
    """Probability mass the truncation discarded, computed analytically."""

    tail_mass: float
    cutoff_used: int


def _poisson_tail(nbar: float, cutoff: int) -> float:
    """Exact Poisson(nbar) mass above ``cutoff`` via the regularized
    lower incomplete gamma function: P(X > N) = P_gamma(N+1, nbar)."""
    if nbar == 0.0:
        return 0.0
    return float(special.gammainc(cutoff + 1, nbar))


def coherent_amplitudes(alpha: complex, cutoff: int) -> np.ndarray:
    """Raw coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!), un-renormalized."""
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[0] = 1.0
    for n in range(cutoff):
        amps[n + 1] = amps[n] * alpha / math.sqrt(n + 1)
    amps *= math.exp(-abs(alpha) ** 2 / 2)
    return amps


def _check_tail(alpha: complex, cutoff: int, tail_tol: float) -> TailReport:
    if tail_tol <= 0:
        raise NonPositiveTolerance(f"tail_tol must be > 0, got {tail_tol}")
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    tail = _poisson_tail(abs(alpha) ** 2, cutoff)
    if tail > tail_tol:
        raise TailTooHeavy(tail, cutoff, tail_tol)
    return TailReport(tail_mass=tail, cutoff_used=cutoff)


def coherent_state(
    alpha: complex, cutoff: int, tail_tol: float = DEFAULT_TAIL_TOL
) -> tuple[FieldState, TailReport]:
    """Truncated coherent state |alpha> with an analytic tail-mass guarantee.

    Raises :class:`TailTooHeavy` if the Poisson mass above ``cutoff`` exceeds
    ``tail_tol`` -- silent renormalization of a badly truncated state would
    mask configuration errors.
    """
    report = _check_tail(alpha, cutoff, tail_tol)
    amps = coherent_amplitudes(alpha, cutoff)
    amps /= np.linalg.norm(amps)
    return FieldState(amplitudes=amps, cutoff=cutoff), report


def kerr_state(
    alpha: complex, gamma: float, cutoff: int, tail_tol: float = DEFAULT_TAIL_TOL
) -> FieldState:
    """Coherent state dressed with the quadratic phase e^{i gamma n(n-1)/2}.

    The modulus of every amplitude equals the coherent-state modulus; gamma is
    reduced mod 2*pi first (exact for integer n(n-1)/2), which keeps the phase
    accurate for the large quantum numbers near a 256-photon cutoff.
    """
    report_state, _ = coherent_state(alpha, cutoff, tail_tol)
    n = np.arange(cutoff + 1, dtype=np.int64)
    half_pairs = (n * (n - 1)) // 2
    g = math.fmod(gamma, 2.0 * math.pi)
    phases = np.exp(1j * g * half_pairs)
    return FieldState(amplitudes=report_state.amplitudes * phases, cutoff=cutoff)


def overlap(a: FieldState, b: FieldState) -> complex:
    """Inner product <a|b> = sum conj(a_n) b_n."""
    if a.cutoff != b.cutoff:
        raise CutoffMismatch(f"cutoffs differ: {a.cutoff} vs {b.cutoff}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: FieldState, b: FieldState) -> float:
    """|<a|b>|^2, invariant under global phases of either state."""
    f = abs(overlap(a, b)) ** 2
    return min(f, 1.0)
