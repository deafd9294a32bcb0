"""Four-stroke Otto cycle bookkeeping with a moving hot bath.

Cycle corners, with the working medium thermalized at each isochore end:

    A (omega_c, cold bath)  --compression-->  B (omega_h, cold populations)
    B  --hot isochore-->   C (omega_h, hot populations)
    C  --expansion-->      D (omega_c, hot populations)
    D  --cold isochore-->  A

The cold bath is static with Planck occupation ``n_c``; the hot bath
moves at velocity ``u`` and acts through the band-averaged occupation
``N_h``.  Stroke works and heats follow the mean-energy differences, and
the per-stroke expressions below are exactly those differences.

Sign conventions: the stroke works ``W_AB, W_CD`` and their sum, the
mean work ``<W> = W_AB + W_CD``, are negative for a working engine; the
produced output work is ``W_out = Q_H + Q_C = -<W>`` and positive in the
engine region ``N_h > n_c``.  :func:`limit_work` reports the
high/low-temperature closed forms in both conventions.

Efficiency is ``eta = 1 - omega_c/omega_h`` regardless of bath
velocity; only the amount of work, not its efficiency, pays for the
motion of the hot bath.  Natural units ``hbar = k_B = 1`` throughout.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .bath import _check_velocity, doppler_log_factor, moving_occupation, planck_occupation
from .media import MediumKind

__all__ = [
    "CycleSpec",
    "StrokeLedger",
    "LimitWork",
    "RegimeValidityWarning",
    "stroke_energies",
    "cycle_ledger",
    "efficiency",
    "engine_condition",
    "limit_work",
]

REGIMES = ("high_T", "low_T")

# A regime label is only indicative; warn when the spec sits more than a
# factor of ten outside the regime it claims.
_REGIME_SLACK = 10.0


class RegimeValidityWarning(UserWarning):
    """Requested asymptotic regime is far from the given temperatures."""


@dataclass(frozen=True)
class CycleSpec:
    """Cycle parameters: two frequencies, two baths, the working medium.

    ``omega_h == omega_c`` is tolerated as a degenerate zero-work cycle
    (useful for diagnostics); a working engine needs ``omega_h > omega_c``
    so that compression raises the gap.
    """

    omega_c: float
    omega_h: float
    beta_c: float
    beta_h: float
    u: float = 0.0
    medium: MediumKind = MediumKind.QUBIT

    def __post_init__(self) -> None:
        if self.omega_c <= 0.0:
            raise ValueError(f"cold frequency must be positive, got {self.omega_c}")
        if self.omega_h < self.omega_c:
            raise ValueError(
                f"hot frequency {self.omega_h} below cold frequency {self.omega_c}"
            )
        if self.beta_c <= 0.0 or self.beta_h <= 0.0:
            raise ValueError(
                f"inverse temperatures must be positive, got "
                f"beta_c={self.beta_c}, beta_h={self.beta_h}"
            )
        _check_velocity(self.u)
        object.__setattr__(self, "medium", MediumKind(self.medium))

    @property
    def gap_cold(self) -> float:
        return self.beta_c * self.omega_c

    @property
    def gap_hot(self) -> float:
        return self.beta_h * self.omega_h

    def cold_occupation(self) -> float:
        return planck_occupation(self.gap_cold)

    def hot_occupation(self) -> float:
        return moving_occupation(self.gap_hot, self.u)


@dataclass(frozen=True)
class StrokeLedger:
    """Per-stroke energy audit of one cycle.

    ``eta`` always holds the frequency ratio form ``1 - omega_c/omega_h``;
    it is a meaningful efficiency only when ``is_engine``.
    """

    e_a: float
    e_b: float
    e_c: float
    e_d: float
    w_ab: float
    q_h: float
    w_cd: float
    q_c: float
    w_out: float
    eta: float
    is_engine: bool


@dataclass(frozen=True)
class LimitWork:
    """One asymptotic work value in both sign conventions.

    ``mean_work`` follows the stroke-work convention ``<W> = W_AB + W_CD``
    (negative for an engine); ``w_out = -mean_work`` is the produced
    output work plotted positive in the engine region.
    """

    mean_work: float
    w_out: float
    medium: MediumKind
    regime: str


def stroke_energies(spec: CycleSpec) -> tuple[float, float, float, float]:
    """Mean medium energies at the four cycle corners.

    Qubit: ``E = -omega / (2 (2 occupation + 1))``; oscillator:
    ``E = omega (occupation + 1/2)``.  Corners A, B share the cold-bath
    populations; C, D share the hot-bath populations.
    """
    n_c = spec.cold_occupation()
    n_h = spec.hot_occupation()
    if spec.medium is MediumKind.QUBIT:
        cold = -1.0 / (2.0 * (2.0 * n_c + 1.0))
        hot = -1.0 / (2.0 * (2.0 * n_h + 1.0))
    else:
        cold = n_c + 0.5
        hot = n_h + 0.5
    return (
        spec.omega_c * cold,
        spec.omega_h * cold,
        spec.omega_h * hot,
        spec.omega_c * hot,
    )


def cycle_ledger(spec: CycleSpec) -> StrokeLedger:
    """Full energy bookkeeping for one cycle.

    Works and heats are the corner-energy differences written in closed
    form; ``W_out = Q_H + Q_C`` and the first law
    ``W_AB + Q_H + W_CD + Q_C = 0`` holds to rounding.
    """
    n_c = spec.cold_occupation()
    n_h = spec.hot_occupation()
    e_a, e_b, e_c, e_d = stroke_energies(spec)
    if spec.medium is MediumKind.QUBIT:
        w_ab = (spec.omega_c - spec.omega_h) / (2.0 * (2.0 * n_c + 1.0))
        q_h = (spec.omega_h / 2.0) * (
            1.0 / (2.0 * n_c + 1.0) - 1.0 / (2.0 * n_h + 1.0)
        )
        w_cd = (spec.omega_h - spec.omega_c) / (2.0 * (2.0 * n_h + 1.0))
        q_c = (spec.omega_c / 2.0) * (
            -1.0 / (2.0 * n_c + 1.0) + 1.0 / (2.0 * n_h + 1.0)
        )
    else:
        w_ab = (spec.omega_h - spec.omega_c) * (n_c + 0.5)
        q_h = spec.omega_h * (n_h - n_c)
        w_cd = -(spec.omega_h - spec.omega_c) * (n_h + 0.5)
        q_c = spec.omega_c * (n_c - n_h)
    w_out = q_h + q_c
    return StrokeLedger(
        e_a=e_a,
        e_b=e_b,
        e_c=e_c,
        e_d=e_d,
        w_ab=w_ab,
        q_h=q_h,
        w_cd=w_cd,
        q_c=q_c,
        w_out=w_out,
        eta=efficiency(spec),
        is_engine=w_out > 0.0,
    )


def efficiency(spec: CycleSpec) -> float:
    """Otto efficiency ``1 - omega_c/omega_h``.

    Depends only on the two frequencies, not on the bath temperatures or
    the hot-bath velocity.
    """
    return 1.0 - spec.omega_c / spec.omega_h


def engine_condition(spec: CycleSpec) -> bool:
    """True iff the hot bath out-populates the cold one, ``N_h > n_c``.

    For ``omega_h > omega_c`` this is equivalent to ``W_out > 0``; at
    ``u = 0`` it reduces to ``beta_h omega_h < beta_c omega_c``, i.e.
    ``eta < eta_Carnot``.
    """
    return spec.hot_occupation() > spec.cold_occupation()


def _warn_regime(spec: CycleSpec, regime: str) -> None:
    if regime == "high_T":
        worst = max(spec.gap_cold, spec.gap_hot)
        if worst > _REGIME_SLACK:
            warnings.warn(
                f"high_T limit requested with beta*omega up to {worst:.3g}",
                RegimeValidityWarning,
                stacklevel=3,
            )
    else:
        if spec.gap_cold < 1.0 / _REGIME_SLACK or spec.gap_hot > _REGIME_SLACK:
            warnings.warn(
                f"low_T limit requested with beta_c*omega_c={spec.gap_cold:.3g}, "
                f"beta_h*omega_h={spec.gap_hot:.3g}",
                RegimeValidityWarning,
                stacklevel=3,
            )


def limit_work(spec: CycleSpec, regime: str) -> LimitWork:
    """Asymptotic closed form of the cycle work in the requested regime.

    ``high_T`` expands both baths to leading order in ``beta*omega``;
    ``low_T`` takes the cold bath deep quantum (``n_c -> 0``) with the hot
    bath still classical.  All four forms carry the whole velocity
    dependence through ``D = doppler_log_factor(u)``:

        qubit   high_T: (omega_c - omega_h) (D b_c w_c - b_h w_h) / (4 D)
        qubit   low_T:  (omega_c - omega_h)/2 * (1 - b_h w_h / (2 D))
        osc     high_T: (1/b_c) (eta/(1-eta) - D (b_c/b_h) eta)
        osc     low_T:  (omega_h - omega_c)/2 - (D/b_h) (1 - omega_c/omega_h)

    Emits :class:`RegimeValidityWarning` when the spec sits more than 10x
    outside the claimed regime.
    """
    if regime not in REGIMES:
        raise ValueError(f"regime must be one of {REGIMES}, got {regime!r}")
    _warn_regime(spec, regime)
    d = doppler_log_factor(spec.u)
    wc, wh = spec.omega_c, spec.omega_h
    bc, bh = spec.beta_c, spec.beta_h
    if spec.medium is MediumKind.QUBIT:
        if regime == "high_T":
            mean = (wc - wh) * (d * bc * wc - bh * wh) / (4.0 * d)
        else:
            mean = 0.5 * (wc - wh) * (1.0 - bh * wh / (2.0 * d))
    else:
        if regime == "high_T":
            eta = 1.0 - wc / wh
            mean = (eta / (1.0 - eta) - d * (bc / bh) * eta) / bc
        else:
            mean = 0.5 * (wh - wc) - (d / bh) * (1.0 - wc / wh)
    return LimitWork(mean_work=mean, w_out=-mean, medium=spec.medium, regime=regime)
