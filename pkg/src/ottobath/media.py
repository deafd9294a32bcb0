"""Working media: a two-level system and a harmonic oscillator.

Both media equilibrate, under weak coupling to a bath with effective
occupation ``N``, to a state that depends on the bath only through ``N``:

* qubit: excited-state population ``N / (2N + 1)``, zero coherence, mean
  energy ``-omega0 / (2 (2N + 1))`` for the symmetric splitting
  ``H = -(omega0/2) sigma_z`` convention used throughout;
* oscillator: geometric number distribution
  ``p_n = N^n / (N + 1)^{n+1}``, mean energy ``omega0 (N + 1/2)``.

Oscillator states are stored on a truncated Fock ladder ``0..n_max``.
Truncation is a declared budget: constructors raise
:class:`TruncationError` when the discarded geometric tail weight is not
below the requested bound, and the deficit is always reported rather than
silently renormalized away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "MediumKind",
    "TruncationError",
    "QubitState",
    "OscillatorState",
    "asymptotic_qubit_state",
    "asymptotic_oscillator_state",
    "qubit_mean_energy",
    "oscillator_mean_energy",
    "fock_truncation_bound",
]

# Slack for floating-point drift in stored probabilities.
_P_TOL = 1e-9


class MediumKind(str, Enum):
    QUBIT = "qubit"
    OSCILLATOR = "oscillator"


class TruncationError(ValueError):
    """Fock ladder too short for the requested tail-weight budget."""


@dataclass(frozen=True)
class QubitState:
    """Two-level state: excited population plus one complex coherence."""

    p_excited: float
    coherence: complex = 0j

    def __post_init__(self) -> None:
        p = float(self.p_excited)
        if not -_P_TOL <= p <= 1.0 + _P_TOL:
            raise ValueError(f"excited population must lie in [0, 1], got {p}")
        # |c|^2 <= p (1 - p) is positivity of the 2x2 density matrix.
        if abs(self.coherence) ** 2 > p * (1.0 - p) + _P_TOL:
            raise ValueError(
                f"coherence {self.coherence} too large for population {p} "
                "(density matrix would not be positive)"
            )

    @property
    def p_ground(self) -> float:
        return 1.0 - self.p_excited


@dataclass(frozen=True, eq=False)
class OscillatorState:
    """Diagonal Fock-basis state on the truncated ladder ``0..n_max``.

    ``populations[n]`` is the weight of Fock level ``n``.  The stored
    array is a read-only copy.  The total may fall short of one by the
    truncation deficit, which is exposed, not renormalized.
    """

    populations: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.populations, dtype=float).copy()
        if p.ndim != 1 or p.size == 0:
            raise ValueError("populations must be a non-empty 1-d array")
        if not np.all(np.isfinite(p)):
            raise ValueError("populations must be finite")
        if np.any(p < -_P_TOL):
            raise ValueError(f"negative population: min {p.min()}")
        total = float(p.sum())
        if total > 1.0 + _P_TOL:
            raise ValueError(f"populations sum to {total} > 1")
        p.setflags(write=False)
        object.__setattr__(self, "populations", p)

    @property
    def n_max(self) -> int:
        return self.populations.size - 1

    @property
    def trace(self) -> float:
        return float(self.populations.sum())

    @property
    def trace_deficit(self) -> float:
        """Weight lost to truncation, ``1 - sum(populations)``."""
        return 1.0 - self.trace

    @property
    def mean_occupation(self) -> float:
        n = np.arange(self.populations.size)
        return float(n @ self.populations)


def asymptotic_qubit_state(occupation: float) -> QubitState:
    """Steady qubit state for bath occupation ``N``: ``p_e = N/(2N+1)``."""
    if occupation < 0.0:
        raise ValueError(f"bath occupation must be non-negative, got {occupation}")
    return QubitState(p_excited=occupation / (2.0 * occupation + 1.0))


def asymptotic_oscillator_state(
    occupation: float, n_max: int, eps_trunc: float = 1e-9
) -> OscillatorState:
    """Steady oscillator state: geometric ``p_n = N^n / (N+1)^{n+1}``.

    Raises :class:`TruncationError` when the discarded tail
    ``(N/(N+1))^{n_max+1}`` is not below ``eps_trunc``; pick ``n_max``
    with :func:`fock_truncation_bound`.
    """
    if occupation < 0.0:
        raise ValueError(f"bath occupation must be non-negative, got {occupation}")
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    if occupation == 0.0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
        return OscillatorState(p)
    q = occupation / (occupation + 1.0)
    tail = q ** (n_max + 1)
    if tail >= eps_trunc:
        raise TruncationError(
            f"geometric tail {tail:.3e} at n_max={n_max} exceeds budget "
            f"{eps_trunc:.3e} for occupation {occupation}; "
            f"need n_max >= {fock_truncation_bound(occupation, eps_trunc)}"
        )
    n = np.arange(n_max + 1)
    return OscillatorState(q**n / (occupation + 1.0))


def qubit_mean_energy(omega0: float, occupation: float) -> float:
    """Steady mean energy ``-omega0 / (2 (2N + 1))`` of the qubit."""
    if omega0 <= 0.0:
        raise ValueError(f"level splitting must be positive, got {omega0}")
    if occupation < 0.0:
        raise ValueError(f"bath occupation must be non-negative, got {occupation}")
    return -omega0 / (2.0 * (2.0 * occupation + 1.0))


def oscillator_mean_energy(omega0: float, occupation: float) -> float:
    """Steady mean energy ``omega0 (N + 1/2)`` of the oscillator."""
    if omega0 <= 0.0:
        raise ValueError(f"oscillator frequency must be positive, got {omega0}")
    if occupation < 0.0:
        raise ValueError(f"bath occupation must be non-negative, got {occupation}")
    return omega0 * (occupation + 0.5)


def fock_truncation_bound(occupation: float, eps: float) -> int:
    """Smallest ``n_max`` whose geometric tail weight is below ``eps``.

    The discarded weight above level ``n_max`` is ``(N/(N+1))^{n_max+1}``,
    so ``n_max = ceil(ln eps / ln(N/(N+1))) - 1``, floored at 8 levels so
    short ladders still resolve transient dynamics.
    """
    if occupation < 0.0:
        raise ValueError(f"bath occupation must be non-negative, got {occupation}")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"tail budget must lie in (0, 1), got {eps}")
    if occupation == 0.0:
        return 8
    q = occupation / (occupation + 1.0)
    n_max = math.ceil(math.log(eps) / math.log(q)) - 1
    # Guard against ceil landing exactly on the boundary case tail == eps.
    while q ** (n_max + 1) >= eps:
        n_max += 1
    return max(n_max, 8)
