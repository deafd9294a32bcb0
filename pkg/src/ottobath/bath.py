"""Occupation statistics of static and moving thermal baths.

A detector coupled to a blackbody field while moving through it at a
constant velocity ``u`` (in units of the speed of light) does not see a
Planck spectrum.  At dimensionless gap ``x = beta*omega`` (natural units,
``hbar = k_B = 1``) the mean quanta number it sees is

    N(x, u) = ln[(1 - e^{-x e^{theta}}) / (1 - e^{-x e^{-theta}})]
              / (2 x sinh(theta)),        theta = artanh(u),

which is exactly the Planck occupation ``n(s) = 1/(e^s - 1)`` averaged
over the Doppler band ``s in [x e^{-theta}, x e^{theta}]``.  The band
average is implemented independently as a quadrature oracle so the two
routes can be checked against each other.

The recurring high-temperature prefactor

    D(u) = sqrt(1 - u^2) * ln((1+u)/(1-u)) / (2u) = theta / sinh(theta)

is exposed as :func:`doppler_log_factor`; ``D(0) = 1`` and ``D`` decreases
monotonically toward 0 as ``u -> 1``.

All functions are pure and operate on scalars; the velocity domain is
capped at ``U_MAX = 0.999`` because the lower band edge becomes
near-singular for faster baths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

__all__ = [
    "U_MAX",
    "BathSpec",
    "dimensionless_gap",
    "planck_occupation",
    "doppler_log_factor",
    "moving_occupation",
    "band_average_occupation_oracle",
    "occupation_asymptote",
]

#: Documented domain cap on the bath velocity (fraction of light speed).
U_MAX = 0.999

# Series-switch thresholds; below these the closed forms develop removable
# singularities and the discarded series terms are < 1e-12 relative.
_U_SWITCH = 1e-4
_X_SWITCH = 1e-8


def _check_gap(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"dimensionless gap must be positive and finite, got {x}")
    return x


def _check_velocity(u: float, u_max: float = U_MAX) -> float:
    u = float(u)
    if not 0.0 <= u <= u_max:
        raise ValueError(f"bath velocity must lie in [0, {u_max}], got {u}")
    return u


def dimensionless_gap(beta: float, omega: float) -> float:
    """Product ``beta*omega``, the only combination the statistics depend on."""
    if beta <= 0.0:
        raise ValueError(f"inverse temperature must be positive, got {beta}")
    if omega <= 0.0:
        raise ValueError(f"frequency must be positive, got {omega}")
    return _check_gap(beta * omega)


@dataclass(frozen=True)
class BathSpec:
    """One reservoir: inverse temperature ``beta`` and velocity ``u``.

    ``rapidity`` is always recomputed from ``u`` so the two can never get
    out of sync.
    """

    beta: float
    u: float = 0.0

    def __post_init__(self) -> None:
        if self.beta <= 0.0:
            raise ValueError(f"inverse temperature must be positive, got {self.beta}")
        _check_velocity(self.u)

    @property
    def rapidity(self) -> float:
        """artanh(u); the Doppler band edges are ``exp(+-rapidity)``."""
        return math.atanh(self.u)

    def gap(self, omega: float) -> float:
        return dimensionless_gap(self.beta, omega)

    def occupation(self, omega: float) -> float:
        """Mean quanta number seen at frequency ``omega``."""
        return moving_occupation(self.gap(omega), self.u)


def planck_occupation(x: float) -> float:
    """Planck occupation ``n(x) = 1/(e^x - 1)`` of a static thermal mode.

    For ``x < 1e-8`` the Laurent series ``1/x - 1/2 + x/12`` is used to
    avoid cancellation in ``e^x - 1``.
    """
    x = _check_gap(x)
    if x < _X_SWITCH:
        return 1.0 / x - 0.5 + x / 12.0
    return 1.0 / math.expm1(x)


def doppler_log_factor(u: float) -> float:
    """Velocity factor ``D(u) = sqrt(1-u^2) ln((1+u)/(1-u)) / (2u)``.

    ``D(0) = 1`` exactly (removable singularity, handled by the series
    ``1 - u^2/6 - 11 u^4/120`` below ``u = 1e-4``); the high-temperature
    moving occupation is ``D(u)/x``.
    """
    u = _check_velocity(u)
    if u < _U_SWITCH:
        u2 = u * u
        return 1.0 - u2 / 6.0 - 11.0 * u2 * u2 / 120.0
    return math.sqrt(1.0 - u * u) * math.log((1.0 + u) / (1.0 - u)) / (2.0 * u)


def _log1mexp(s: float) -> float:
    """ln(1 - e^{-s}) for s > 0, accurate at both ends."""
    if s > math.log(2.0):
        return math.log1p(-math.exp(-s))
    return math.log(-math.expm1(-s))


def moving_occupation(x: float, u: float) -> float:
    """Mean quanta number ``N(x, u)`` seen by a detector moving at ``u``.

    Evaluates the closed form in rapidity parameterization,

        N = [ln(1 - e^{-x e^{theta}}) - ln(1 - e^{-x e^{-theta}})]
            / (2 x sinh(theta)),

    which is algebraically the Planck occupation averaged over the Doppler
    band.  For ``u < 1e-4`` the u -> 0 limit is regularized by returning
    ``planck_occupation(x)`` plus the leading O(u^2) band-width correction

        (theta^2 / 6) * x n (1+n) [x (1+2n) - 3].
    """
    x = _check_gap(x)
    u = _check_velocity(u)
    theta = math.atanh(u)
    if u < _U_SWITCH:
        n = planck_occupation(x)
        corr = (theta * theta / 6.0) * x * n * (1.0 + n) * (x * (1.0 + 2.0 * n) - 3.0)
        return n + corr
    a = x * math.exp(-theta)
    b = x * math.exp(theta)
    return (_log1mexp(b) - _log1mexp(a)) / (2.0 * x * math.sinh(theta))


def band_average_occupation_oracle(x: float, u: float, tol: float = 1e-10) -> float:
    """Doppler-band average of the Planck occupation, by adaptive quadrature.

    Returns ``(1/(b-a)) * integral_a^b ds / (e^s - 1)`` with band edges
    ``a = x e^{-theta}``, ``b = x e^{theta}``.  This is the independent
    route to :func:`moving_occupation` (a moving bath is equivalent to a
    mixture of static baths spanning the band); the two agree to
    ``max(tol, 1e-12)``.  ``u = 0`` is the degenerate single-point band
    and falls back to :func:`planck_occupation`.
    """
    x = _check_gap(x)
    u = _check_velocity(u)
    if tol <= 0.0:
        raise ValueError(f"quadrature tolerance must be positive, got {tol}")
    theta = math.atanh(u)
    a = x * math.exp(-theta)
    b = x * math.exp(theta)
    if b - a <= 0.0:
        return planck_occupation(x)

    def integrand(s: float) -> float:
        # 1/(e^s - 1) written to survive band edges beyond the exp range.
        return math.exp(-s) / -math.expm1(-s)

    width = b - a
    integral, _ = quad(integrand, a, b, epsabs=tol * width, epsrel=tol, limit=200)
    return integral / width


def occupation_asymptote(x: float, u: float, regime: str) -> float:
    """Leading asymptotic form of the moving occupation.

    ``"high_T"`` (valid for ``x << 1``) returns ``D(u)/x``; the relative
    error is O(x).  ``"low_T"`` (valid for ``x e^{-theta} >> 1`` and
    ``u > 0``) returns ``e^{-x e^{-theta}} / (2 x sinh(theta))``, the
    leading term of the log; the relative error is O(e^{-x e^{-theta}}).
    The low-temperature form diverges as ``u -> 0`` and requires a moving
    bath.
    """
    x = _check_gap(x)
    u = _check_velocity(u)
    if regime == "high_T":
        return doppler_log_factor(u) / x
    if regime == "low_T":
        if u <= 0.0:
            raise ValueError("low_T asymptote requires u > 0 (band must have finite width)")
        theta = math.atanh(u)
        return math.exp(-x * math.exp(-theta)) / (2.0 * x * math.sinh(theta))
    raise ValueError(f"regime must be 'high_T' or 'low_T', got {regime!r}")
