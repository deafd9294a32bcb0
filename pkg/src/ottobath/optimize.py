"""Work maximization and efficiency-at-maximum-work analysis.

Two routes to the optimal hot frequency are kept deliberately separate:

* :func:`maximize_work_numeric` golden-sections the exact output work
  from the cycle ledger, assuming nothing about temperature regimes;
* :func:`optimal_hot_frequency_limit` and
  :func:`efficiency_at_max_work_limit` evaluate the asymptotic closed
  forms.  Their whole velocity dependence enters through the factor
  ``D = doppler_log_factor(u)``; every formula here uses the identity
  ``2 u D = sqrt(1-u^2) log((1+u)/(1-u))`` so that ``u = 0`` is a regular
  point (``D(0) = 1``).

The effective-temperature fit asks whether a rest bath at some
``beta_eff`` reproduces the moving bath's efficiency at maximum work.
At the formula level the answer is always ``beta_eff = beta_h / D(u)``,
for all four (medium, regime) pairs; the fit finds it by bisection
without using that inversion.  The accompanying spectral mismatch then
shows the limit of the notion: no single rest temperature reproduces the
moving occupation as a function of frequency, because the band-averaged
spectrum is not Planckian in shape.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bath import (
    _check_velocity,
    doppler_log_factor,
    moving_occupation,
    planck_occupation,
)
from .cycle import REGIMES, CycleSpec, cycle_ledger
from .media import MediumKind

__all__ = [
    "OptimizationResult",
    "EffectiveTemperatureReport",
    "NonEngineError",
    "NonEngineWarning",
    "golden_section_maximize",
    "maximize_work_numeric",
    "optimal_hot_frequency_limit",
    "efficiency_at_max_work_limit",
    "reference_bounds",
    "effective_temperature_fit",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

# Pre-scan resolution used to localize the maximum before golden-section.
_SCAN_POINTS = 17

# Spectral comparison grid, in units of the hot-bath gap beta_h * omega.
_MISMATCH_GAP_RANGE = (1e-2, 30.0)
_MISMATCH_POINTS = 121


class NonEngineError(RuntimeError):
    """No positive output work anywhere in the search bracket."""


class NonEngineWarning(UserWarning):
    """Closed-form efficiency fell outside (0, 1): not an engine regime."""


@dataclass(frozen=True)
class OptimizationResult:
    """Outcome of maximizing output work over the hot frequency."""

    omega_h_star: float
    w_star: float
    eta_star: float
    iterations: int
    bracket: tuple[float, float]
    at_boundary: bool

    def __post_init__(self) -> None:
        lo, hi = self.bracket
        if not lo < hi:
            raise ValueError(f"bracket must be increasing, got {self.bracket}")
        if not lo <= self.omega_h_star <= hi:
            raise ValueError(
                f"optimum {self.omega_h_star} outside bracket {self.bracket}"
            )


@dataclass(frozen=True)
class EffectiveTemperatureReport:
    """Result of fitting a rest-bath temperature to a moving bath.

    ``beta_eff`` is NaN when the fit found no root; ``spectral_mismatch``
    is the sup over a log frequency grid of the relative difference
    between the moving occupation and the fitted Planck occupation.
    """

    medium: MediumKind
    regime: str
    beta_eff: float
    spectral_mismatch: float
    consistent: bool
    fit_converged: bool


def golden_section_maximize(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = 1e-10,
    max_iter: int = 200,
) -> tuple[float, float, int]:
    """Maximize a unimodal scalar function on [lo, hi] by golden section.

    Returns the best evaluated point, its value, and the iteration count.
    The interval shrinks by the inverse golden ratio per iteration until
    its width falls below ``rtol`` relative to the endpoint magnitudes.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if rtol <= 0.0:
        raise ValueError(f"relative tolerance must be positive, got {rtol}")
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    if fc >= fd:
        best_x, best_f = c, fc
    else:
        best_x, best_f = d, fd
    iters = 0
    while (b - a) > rtol * max(abs(a), abs(b)) and iters < max_iter:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
            if fc > best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
            if fd > best_f:
                best_x, best_f = d, fd
        iters += 1
    return best_x, best_f, iters


def maximize_work_numeric(
    omega_c: float,
    beta_c: float,
    beta_h: float,
    u: float,
    medium: MediumKind | str,
    bracket: tuple[float, float] | None = None,
    *,
    rtol: float = 1e-10,
) -> OptimizationResult:
    """Maximize the exact output work of the cycle over the hot frequency.

    A 17-point scan localizes the maximum (and defends the unimodality
    assumption), then golden section refines it to relative ``rtol``.
    The default bracket is ``[omega_c (1 + 1e-6), 50 omega_c]``.  Raises
    :class:`NonEngineError` when no positive work exists in the bracket;
    an optimum pinned to a bracket end is returned with
    ``at_boundary = True``.
    """
    medium = MediumKind(medium)
    if omega_c <= 0.0:
        raise ValueError(f"cold frequency must be positive, got {omega_c}")
    if bracket is None:
        bracket = (omega_c * (1.0 + 1e-6), omega_c * 50.0)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not omega_c < lo < hi:
        raise ValueError(
            f"bracket must satisfy omega_c < lo < hi, got omega_c={omega_c}, "
            f"bracket=({lo}, {hi})"
        )

    def w_out(omega_h: float) -> float:
        spec = CycleSpec(
            omega_c=omega_c,
            omega_h=omega_h,
            beta_c=beta_c,
            beta_h=beta_h,
            u=u,
            medium=medium,
        )
        return cycle_ledger(spec).w_out

    grid = np.linspace(lo, hi, _SCAN_POINTS)
    values = [w_out(float(w)) for w in grid]
    k = int(np.argmax(values))
    window = (float(grid[max(k - 1, 0)]), float(grid[min(k + 1, _SCAN_POINTS - 1)]))
    x_star, w_star, iters = golden_section_maximize(w_out, *window, rtol=rtol)
    if w_star <= 0.0:
        raise NonEngineError(
            f"no positive output work in bracket ({lo}, {hi}) for "
            f"medium={medium.value}, beta_c={beta_c}, beta_h={beta_h}, u={u} "
            f"(best W_out={w_star:.3e} at omega_h={x_star:.6g})"
        )
    edge = 1e-9 * (hi - lo)
    return OptimizationResult(
        omega_h_star=x_star,
        w_star=w_star,
        eta_star=1.0 - omega_c / x_star,
        iterations=iters,
        bracket=(lo, hi),
        at_boundary=(x_star - lo) <= edge or (hi - x_star) <= edge,
    )


def _check_limit_args(medium, regime, beta_c: float, beta_h: float, u: float):
    medium = MediumKind(medium)
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
    if beta_c <= 0.0 or beta_h <= 0.0:
        raise ValueError(
            f"inverse temperatures must be positive, got beta_c={beta_c}, "
            f"beta_h={beta_h}"
        )
    _check_velocity(u)
    return medium


def optimal_hot_frequency_limit(
    medium: MediumKind | str,
    regime: str,
    omega_c: float,
    beta_c: float,
    beta_h: float,
    u: float,
) -> float:
    """Closed-form work-maximizing hot frequency in the given regime.

    With ``D = doppler_log_factor(u)``:

        qubit   high_T: omega_c (D beta_c + beta_h) / (2 beta_h)
        qubit   low_T:  D / beta_h + omega_c / 2
        osc     high_T: omega_c sqrt(D beta_c / beta_h)
        osc     low_T:  sqrt(2 D omega_c / beta_h)
    """
    medium = _check_limit_args(medium, regime, beta_c, beta_h, u)
    if omega_c <= 0.0:
        raise ValueError(f"cold frequency must be positive, got {omega_c}")
    d = doppler_log_factor(u)
    if medium is MediumKind.QUBIT:
        if regime == "high_T":
            return omega_c * (d * beta_c + beta_h) / (2.0 * beta_h)
        return d / beta_h + 0.5 * omega_c
    if regime == "high_T":
        return omega_c * math.sqrt(d * beta_c / beta_h)
    return math.sqrt(2.0 * d * omega_c / beta_h)


def _eta_mw_form(
    medium: MediumKind, regime: str, d: float, beta_c: float, beta_h: float, omega_c: float
) -> float:
    """Efficiency at maximum work with the velocity factor passed in.

    The rest-bath curves used by the effective-temperature fit are the
    same formulas at ``d = 1``; sampling them outside the engine regime
    is legitimate there, so no flagging happens at this level.
    """
    if medium is MediumKind.QUBIT:
        if regime == "high_T":
            return 1.0 - 2.0 * beta_h / (d * beta_c + beta_h)
        return (2.0 * d - beta_h * omega_c) / (2.0 * d + beta_h * omega_c)
    if regime == "high_T":
        return 1.0 - math.sqrt(beta_h / (d * beta_c))
    return 1.0 - math.sqrt(beta_h * omega_c / (2.0 * d))


def efficiency_at_max_work_limit(
    medium: MediumKind | str,
    regime: str,
    beta_c: float,
    beta_h: float,
    u: float,
    omega_c: float = 1.0,
) -> float:
    """Closed-form efficiency at maximum work.

    With ``D = doppler_log_factor(u)``:

        qubit   high_T: 1 - 2 beta_h / (D beta_c + beta_h)
        qubit   low_T:  (2D - beta_h omega_c) / (2D + beta_h omega_c)
        osc     high_T: 1 - sqrt(beta_h / (D beta_c))
        osc     low_T:  1 - sqrt(beta_h omega_c / (2D))

    ``omega_c`` enters only the low-temperature forms, and only through
    the product ``beta_h * omega_c``.  At ``u = 0`` the oscillator
    high-T form is the Curzon-Ahlborn efficiency and the qubit high-T
    form is ``(beta_c - beta_h)/(beta_c + beta_h)``.  A value outside
    (0, 1) is returned as computed but flagged with
    :class:`NonEngineWarning`.
    """
    medium = _check_limit_args(medium, regime, beta_c, beta_h, u)
    if omega_c <= 0.0:
        raise ValueError(f"cold frequency must be positive, got {omega_c}")
    eta = _eta_mw_form(medium, regime, doppler_log_factor(u), beta_c, beta_h, omega_c)
    if not 0.0 < eta < 1.0:
        warnings.warn(
            f"efficiency at maximum work {eta:.6g} outside (0, 1): "
            f"{medium.value}/{regime} parameters are not an engine regime",
            NonEngineWarning,
            stacklevel=2,
        )
    return eta


def reference_bounds(beta_c: float, beta_h: float) -> tuple[float, float]:
    """Carnot and Curzon-Ahlborn efficiencies for the two temperatures.

    Returns ``(1 - beta_h/beta_c, 1 - sqrt(beta_h/beta_c))``.
    """
    if beta_c <= 0.0 or beta_h <= 0.0:
        raise ValueError(
            f"inverse temperatures must be positive, got beta_c={beta_c}, "
            f"beta_h={beta_h}"
        )
    ratio = beta_h / beta_c
    return 1.0 - ratio, 1.0 - math.sqrt(ratio)


def _spectral_mismatch(beta_h: float, u: float, beta_eff: float) -> float:
    """Sup-norm relative gap between moving and fitted rest occupations.

    Evaluated on a log grid of the hot-bath gap ``x = beta_h * omega``;
    the fitted bath is compared at the same physical frequency,
    ``planck_occupation(beta_eff * x / beta_h)``.
    """
    gaps = np.logspace(
        math.log10(_MISMATCH_GAP_RANGE[0]),
        math.log10(_MISMATCH_GAP_RANGE[1]),
        _MISMATCH_POINTS,
    )
    worst = 0.0
    for x in gaps:
        moving = moving_occupation(float(x), u)
        rest = planck_occupation(beta_eff * float(x) / beta_h)
        worst = max(worst, abs(moving - rest) / rest)
    return worst


def effective_temperature_fit(
    medium: MediumKind | str,
    regime: str,
    beta_c: float,
    beta_h: float,
    u: float,
    omega_c: float = 1.0,
) -> EffectiveTemperatureReport:
    """Fit a rest-bath inverse temperature reproducing the moving bath's
    efficiency at maximum work, and quantify how far the fit is from a
    true thermal equivalence.

    Solves ``eta_mw(medium, regime; beta_eff, u=0) = eta_mw(medium,
    regime; beta_h, u)`` for ``beta_eff`` by bisection on
    ``(0, 1000 beta_h]`` to an interval width of 1e-12 (the objective is
    strictly decreasing in ``beta_eff`` for all four formula pairs).
    ``u = 0`` is the identity fit and short-circuits to
    ``beta_eff = beta_h``.

    ``spectral_mismatch`` then compares occupation numbers across
    frequencies at the fitted temperature; ``consistent`` requires the
    sup-norm relative gap to stay below 1e-10, which only the identity
    fit achieves.  When no root lies in the bracket the report carries
    ``fit_converged = False`` and ``beta_eff = NaN``.
    """
    medium = _check_limit_args(medium, regime, beta_c, beta_h, u)
    if omega_c <= 0.0:
        raise ValueError(f"cold frequency must be positive, got {omega_c}")

    if u == 0.0:
        mismatch = _spectral_mismatch(beta_h, 0.0, beta_h)
        return EffectiveTemperatureReport(
            medium=medium,
            regime=regime,
            beta_eff=beta_h,
            spectral_mismatch=mismatch,
            consistent=mismatch < 1e-10,
            fit_converged=True,
        )

    target = _eta_mw_form(medium, regime, doppler_log_factor(u), beta_c, beta_h, omega_c)

    def objective(beta: float) -> float:
        return _eta_mw_form(medium, regime, 1.0, beta_c, beta, omega_c) - target

    lo, hi = 1e-12 * beta_h, 1e3 * beta_h
    f_lo, f_hi = objective(lo), objective(hi)
    if f_lo == 0.0:
        root = lo
    elif f_hi == 0.0:
        root = hi
    elif f_lo < 0.0 or f_hi > 0.0:
        return EffectiveTemperatureReport(
            medium=medium,
            regime=regime,
            beta_eff=math.nan,
            spectral_mismatch=math.inf,
            consistent=False,
            fit_converged=False,
        )
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            f_mid = objective(mid)
            if f_mid == 0.0:
                lo = hi = mid
                break
            if f_mid > 0.0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12:
                break
        root = 0.5 * (lo + hi)

    mismatch = _spectral_mismatch(beta_h, u, root)
    return EffectiveTemperatureReport(
        medium=medium,
        regime=regime,
        beta_eff=root,
        spectral_mismatch=mismatch,
        consistent=mismatch < 1e-10,
        fit_converged=True,
    )
