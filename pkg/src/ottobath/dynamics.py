"""Relaxation dynamics of the two media under weak bath coupling.

The populations obey closed kinetic equations once the bath enters only
through its effective occupation ``N``:

* qubit: ``dp_e/dt = -G0 (N+1) p_e + G0 N (1 - p_e)``, solved exactly;
  the coherence is damped at half the population rate with a phase
  rotating at the level splitting.
* oscillator: the birth-death chain on Fock populations,

      dp_n/dt = G0 (N+1) [(n+1) p_{n+1} - n p_n]
              + G0 N [n p_{n-1} - (n+1) p_n],

  integrated with an adaptive explicit Runge-Kutta scheme on a truncated
  ladder.  The upward escape out of the top level is dropped (reflecting
  truncation) so the generator conserves trace exactly; the wall is
  harmless when the ladder is long enough for the target occupation.

These routines exist to verify, not assume, that both media actually
reach the analytic asymptotic states the cycle bookkeeping relies on.
Each evolution works on a private copy of the state, so distinct
evolutions can run concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .media import (
    OscillatorState,
    QubitState,
    asymptotic_oscillator_state,
    asymptotic_qubit_state,
    fock_truncation_bound,
)

__all__ = [
    "RELAX_TIME_CAP",
    "LindbladSpec",
    "TrajectoryRecord",
    "IntegrationError",
    "ConvergenceError",
    "evolve_qubit",
    "evolve_oscillator",
    "relax_to_steady",
    "sample_relaxation",
    "state_distance",
    "steady_state_for",
    "trajectory_rows",
]

MediumState = QubitState | OscillatorState

#: Relaxation is abandoned after this many multiples of 1/gamma0.
RELAX_TIME_CAP = 1e4

# Looser than the tail budgets used for steady-state comparisons; this
# only rejects ladders too short to hold the target distribution at all.
_MIN_TRUNC_EPS = 1e-6

# Populations below this are integration blow-ups; above it they are
# interpolation ripple around zero (the dense output of the adaptive
# scheme undershoots empty levels by a few times its rtol of 1e-10)
# and get clipped.
_NEGATIVITY_FLOOR = -1e-9


class IntegrationError(RuntimeError):
    """Adaptive integration violated a trace or positivity guarantee."""


class ConvergenceError(RuntimeError):
    """Relaxation did not reach the requested tolerance within the time cap."""


@dataclass(frozen=True)
class LindbladSpec:
    """Dissipator parameters: bath occupation, medium frequency, decay rate."""

    N: float
    omega: float = 1.0
    gamma0: float = 1.0

    def __post_init__(self) -> None:
        if self.N < 0.0:
            raise ValueError(f"bath occupation must be non-negative, got {self.N}")
        if self.omega <= 0.0:
            raise ValueError(f"medium frequency must be positive, got {self.omega}")
        if self.gamma0 <= 0.0:
            raise ValueError(f"decay coefficient must be positive, got {self.gamma0}")


@dataclass(frozen=True)
class TrajectoryRecord:
    """Sampled relaxation path: times, matching states, convergence info."""

    times: np.ndarray
    states: tuple[MediumState, ...]
    converged: bool
    t_relax: float | None

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size == 0:
            raise ValueError("times must be a non-empty 1-d array")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ValueError("times must be strictly increasing")
        if len(self.states) != t.size:
            raise ValueError(
                f"{len(self.states)} states for {t.size} sample times"
            )
        t.setflags(write=False)
        object.__setattr__(self, "times", t)


# ---------------------------------------------------------------------------
# evolution
# ---------------------------------------------------------------------------


def evolve_qubit(state: QubitState, spec: LindbladSpec, t: float) -> QubitState:
    """Advance a qubit state by time ``t`` using the exact solution.

    ``p_e(t) = p_inf + (p_e(0) - p_inf) e^{-G0 (2N+1) t}`` with
    ``p_inf = N/(2N+1)``; the coherence picks up ``e^{-i omega t}`` and
    decays with ``e^{-G0 (2N+1) t / 2}``.
    """
    if t < 0.0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    lam = spec.gamma0 * (2.0 * spec.N + 1.0)
    p_inf = spec.N / (2.0 * spec.N + 1.0)
    decay = math.exp(-lam * t)
    p = p_inf + (state.p_excited - p_inf) * decay
    coh = state.coherence * np.exp(-1j * spec.omega * t) * math.sqrt(decay)
    return QubitState(p_excited=p, coherence=complex(coh))


def _birth_death_generator(dim: int, spec: LindbladSpec) -> np.ndarray:
    """Dense generator matrix of the truncated birth-death chain."""
    down = spec.gamma0 * (spec.N + 1.0)
    up = spec.gamma0 * spec.N
    g = np.zeros((dim, dim))
    for n in range(dim):
        g[n, n] -= down * n
        if n + 1 < dim:
            g[n, n + 1] += down * (n + 1)
            g[n, n] -= up * (n + 1)  # upward escape; absent at the top wall
        if n - 1 >= 0:
            g[n, n - 1] += up * n
    return g


def _check_ladder(state: OscillatorState, spec: LindbladSpec) -> None:
    needed = fock_truncation_bound(spec.N, _MIN_TRUNC_EPS)
    if state.n_max < needed:
        raise ValueError(
            f"ladder with n_max={state.n_max} cannot hold the steady state "
            f"for N={spec.N}; need n_max >= {needed}"
        )


def _finish_populations(
    p: np.ndarray, trace_before: float, elapsed: float, spec: LindbladSpec
) -> np.ndarray:
    """Enforce the positivity and trace-drift guarantees on a raw solution."""
    worst = float(p.min())
    if worst < _NEGATIVITY_FLOOR:
        raise IntegrationError(
            f"population went negative beyond tolerance: min {worst:.3e} "
            f"(N={spec.N}, gamma0={spec.gamma0}, t={elapsed})"
        )
    drift = abs(float(p.sum()) - trace_before)
    allowed = 1e-10 * max(1.0, spec.gamma0 * elapsed)
    if drift > allowed:
        raise IntegrationError(
            f"trace drifted by {drift:.3e} over t={elapsed} "
            f"(allowed {allowed:.3e}; N={spec.N}, gamma0={spec.gamma0})"
        )
    return np.clip(p, 0.0, None)


def _integrate_oscillator(
    p0: np.ndarray,
    spec: LindbladSpec,
    t: float,
    *,
    t_eval: np.ndarray | None = None,
    dense: bool = False,
    rtol: float = 1e-10,
    atol: float = 1e-14,
):
    gen = _birth_death_generator(p0.size, spec)
    sol = solve_ivp(
        lambda _t, p: gen @ p,
        (0.0, t),
        p0,
        method="DOP853",
        t_eval=t_eval,
        dense_output=dense,
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise IntegrationError(f"oscillator integration failed: {sol.message}")
    return sol


def evolve_oscillator(
    state: OscillatorState,
    spec: LindbladSpec,
    t: float,
    *,
    rtol: float = 1e-10,
    atol: float = 1e-14,
) -> OscillatorState:
    """Advance oscillator Fock populations by time ``t``.

    Uses adaptive explicit integration (DOP853) of the truncated chain.
    Raises :class:`IntegrationError` if the result drifts in trace beyond
    ``1e-10`` per unit of ``gamma0 t`` or develops negatives below
    ``-1e-9``; smaller negatives are clipped to zero.
    """
    if t < 0.0:
        raise ValueError(f"evolution time must be non-negative, got {t}")
    _check_ladder(state, spec)
    if t == 0.0:
        return state
    p0 = np.array(state.populations)
    sol = _integrate_oscillator(p0, spec, t, rtol=rtol, atol=atol)
    p = _finish_populations(sol.y[:, -1], float(p0.sum()), t, spec)
    return OscillatorState(p)


# ---------------------------------------------------------------------------
# distance to the steady state, relaxation
# ---------------------------------------------------------------------------


def steady_state_for(spec: LindbladSpec, like: MediumState) -> MediumState:
    """Analytic asymptotic state on the same state space as ``like``."""
    if isinstance(like, QubitState):
        return asymptotic_qubit_state(spec.N)
    # No tail budget here: the comparison ladder is whatever `like` uses.
    return asymptotic_oscillator_state(spec.N, like.n_max, eps_trunc=1.0)


def state_distance(a: MediumState, b: MediumState) -> float:
    """Trace (total-variation) distance between two states of one medium."""
    if isinstance(a, QubitState) and isinstance(b, QubitState):
        dp = a.p_excited - b.p_excited
        dc = a.coherence - b.coherence
        return math.sqrt(dp * dp + abs(dc) ** 2)
    if isinstance(a, OscillatorState) and isinstance(b, OscillatorState):
        pa, pb = a.populations, b.populations
        if pa.size != pb.size:
            size = max(pa.size, pb.size)
            pa = np.pad(pa, (0, size - pa.size))
            pb = np.pad(pb, (0, size - pb.size))
        return 0.5 * float(np.abs(pa - pb).sum()) + 0.5 * abs(a.trace - b.trace)
    raise TypeError(f"cannot compare {type(a).__name__} with {type(b).__name__}")


def _qubit_crossing_time(state: QubitState, spec: LindbladSpec, tol: float) -> float:
    """Exact first time at which the distance to the steady state hits tol.

    With ``z = e^{-lam t}`` the squared distance is ``A z^2 + B z`` where
    ``A = (p_e(0) - p_inf)^2`` and ``B = |c(0)|^2``, so the crossing is a
    root of a quadratic in ``z``.
    """
    lam = spec.gamma0 * (2.0 * spec.N + 1.0)
    p_inf = spec.N / (2.0 * spec.N + 1.0)
    a = (state.p_excited - p_inf) ** 2
    b = abs(state.coherence) ** 2
    t2 = tol * tol
    if a > 0.0:
        z = (-b + math.sqrt(b * b + 4.0 * a * t2)) / (2.0 * a)
    else:
        z = t2 / b
    return -math.log(z) / lam


def relax_to_steady(
    state: MediumState, spec: LindbladSpec, tol: float
) -> tuple[MediumState, float]:
    """Evolve until the distance to the analytic steady state drops below tol.

    Returns the state at the first crossing and the crossing time.  The
    qubit crossing is inverted from the closed form; the oscillator is
    integrated in doubling chunks with the crossing refined by bisection
    on the dense output.  Raises :class:`ConvergenceError` if the distance
    has not crossed by ``t = RELAX_TIME_CAP / gamma0``.
    """
    if tol <= 0.0:
        raise ValueError(f"relaxation tolerance must be positive, got {tol}")
    target = steady_state_for(spec, state)
    if state_distance(state, target) < tol:
        return state, 0.0
    cap = RELAX_TIME_CAP / spec.gamma0

    if isinstance(state, QubitState):
        t_cross = _qubit_crossing_time(state, spec, tol)
        if t_cross > cap:
            raise ConvergenceError(
                f"qubit would need t={t_cross:.3e} to reach tol={tol}, "
                f"beyond the cap {cap:.3e}"
            )
        return evolve_qubit(state, spec, t_cross), t_cross

    _check_ladder(state, spec)
    geo = np.array(target.populations)

    def dist_of(p: np.ndarray) -> float:
        return 0.5 * float(np.abs(p - geo).sum()) + 0.5 * abs(
            float(p.sum()) - float(geo.sum())
        )

    current = np.array(state.populations)
    elapsed = 0.0
    chunk = 1.0 / spec.gamma0
    while elapsed < cap:
        span = min(chunk, cap - elapsed)
        sol = _integrate_oscillator(current, spec, span, dense=True)
        p_end = sol.y[:, -1]
        if dist_of(p_end) < tol:
            lo, hi = 0.0, span
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if dist_of(sol.sol(mid)) < tol:
                    hi = mid
                else:
                    lo = mid
            t_cross = elapsed + hi
            p = _finish_populations(
                sol.sol(hi), float(state.populations.sum()), t_cross, spec
            )
            return OscillatorState(p), t_cross
        current = p_end
        elapsed += span
        chunk *= 2.0
    raise ConvergenceError(
        f"oscillator distance still {dist_of(current):.3e} > tol={tol} "
        f"at the time cap t={cap:.3e} (N={spec.N}, n_max={state.n_max})"
    )


def sample_relaxation(
    state: MediumState,
    spec: LindbladSpec,
    tol: float = 1e-8,
    n_samples: int = 200,
) -> TrajectoryRecord:
    """Relax to the steady state and record the path on a uniform time grid.

    The grid spans [0, t_relax].  If the start is already within tol the
    record holds the single initial sample with ``t_relax = 0``.  If the
    relaxation hits the time cap, the path up to the cap is returned with
    ``converged = False`` and ``t_relax = None``.
    """
    if n_samples < 2:
        raise ValueError(f"need at least 2 samples, got {n_samples}")
    target = steady_state_for(spec, state)
    if state_distance(state, target) < tol:
        return TrajectoryRecord(
            times=np.array([0.0]), states=(state,), converged=True, t_relax=0.0
        )
    try:
        _, t_relax = relax_to_steady(state, spec, tol)
        t_final, converged = t_relax, True
    except ConvergenceError:
        t_final, t_relax, converged = RELAX_TIME_CAP / spec.gamma0, None, False
    times = np.linspace(0.0, t_final, n_samples)

    if isinstance(state, QubitState):
        states = tuple(evolve_qubit(state, spec, float(t)) for t in times)
    else:
        p0 = np.array(state.populations)
        sol = _integrate_oscillator(p0, spec, t_final, t_eval=times)
        trace0 = float(p0.sum())
        states = tuple(
            OscillatorState(
                _finish_populations(sol.y[:, k], trace0, float(times[k]), spec)
            )
            for k in range(times.size)
        )
    return TrajectoryRecord(
        times=times, states=states, converged=converged, t_relax=t_relax
    )


def trajectory_rows(record: TrajectoryRecord) -> tuple[list[str], list[list[float]]]:
    """Header and rows of the CSV dump schema for a trajectory record.

    Qubit: ``time, p_excited, re_coh, im_coh``.  Oscillator: ``time,
    p_0 .. p_{n_max}``.
    """
    first = record.states[0]
    if isinstance(first, QubitState):
        header = ["time", "p_excited", "re_coh", "im_coh"]
        rows = [
            [float(t), s.p_excited, s.coherence.real, s.coherence.imag]
            for t, s in zip(record.times, record.states)
        ]
    else:
        header = ["time"] + [f"p_{n}" for n in range(first.n_max + 1)]
        rows = [
            [float(t)] + [float(p) for p in s.populations]
            for t, s in zip(record.times, record.states)
        ]
    return header, rows
