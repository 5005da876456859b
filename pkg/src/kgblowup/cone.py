"""Forward light cone geometry: r(t), q(t) = a r^2 / a0, and monotonicity.

Data supported in |x| <= r0 at t = 0 stays inside |x| <= r(t) with

    r(t) = r0 + integral_0^t c / a(s) ds.

On the closed-form family the integral has elementary antiderivatives
(linear, power-law, logarithmic, or saturating-exponential); a tabulated
scale model falls back to adaptive Simpson quadrature.  The quantity
q(t) = a(t) r(t)^2 / a0 controls the Jensen-type comparison of the spatial
integral, and its monotonicity is decided by the sign of H together with
the auxiliary function d = r + (2c / a0 H) (a/a0)^(n(1+sigma)/2 - 1).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .cosmology import ClosedFormFLRW, CosmologyParams, ScaleModel, horizon_end, scale_eval
from .errors import DomainError, PreconditionError

__all__ = [
    "Monotonicity",
    "QClassification",
    "ConeGeometry",
    "comoving_radius",
    "q_eval",
    "log_q_eval",
    "classify_q",
    "q_tilde_eval",
    "log_q_tilde_eval",
]

_SIMPSON_MAX_DEPTH = 20  # subdivision cap 2**20 intervals
_EXP_SAFE = 600.0  # switch to log-asymptotic forms beyond this exponent


class Monotonicity(enum.Enum):
    NON_DECREASING = "NonDecreasing"
    NON_INCREASING = "NonIncreasing"
    NOT_MONOTONE = "NotMonotone"


@dataclass(frozen=True)
class QClassification:
    """Verdict plus the diagnostics used to reach it.

    ``d0`` is d(0) = r0 + 2c/(a0 H) for H != 0 (None when H == 0);
    ``qdot0`` is the initial slope (2 c r0 / a0 when H == 0);
    ``r0_threshold`` is -2c/(a0 H), the support-radius gate for H < 0.
    """

    monotonicity: Monotonicity
    d0: Optional[float]
    qdot0: float
    r0_threshold: Optional[float]


@dataclass(frozen=True)
class ConeGeometry:
    """Forward cone for data supported in |x| <= r0 on a given background."""

    params: CosmologyParams
    r0: float
    model: Optional[ScaleModel] = None

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError("initial support radius r0 must be positive")

    @property
    def end(self) -> float:
        if self.model is not None and not isinstance(self.model, ClosedFormFLRW):
            return self.model.end
        return horizon_end(self.params)

    @property
    def q0(self) -> float:
        return self.r0 * self.r0


def _check_time(t: float, end: float) -> None:
    if t < 0:
        raise DomainError(f"t={t} is negative")
    if math.isfinite(end) and t >= end * (1.0 - 1e-12):
        raise DomainError(f"t={t} is at or beyond the horizon T0={end}")


def _adaptive_simpson(f, a, b, rel_tol=1e-10):
    """Recursive Simpson with depth cap; integrand must be smooth."""

    def simpson(fa, fm, fb, a_, b_):
        return (b_ - a_) / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a_, b_, fa, fm, fb, whole, depth):
        m = 0.5 * (a_ + b_)
        lm, rm = 0.5 * (a_ + m), 0.5 * (m + b_)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, a_, m)
        right = simpson(fm, frm, fb, m, b_)
        if depth >= _SIMPSON_MAX_DEPTH:
            return left + right
        if abs(left + right - whole) <= 15.0 * rel_tol * max(abs(left + right), 1e-300):
            return left + right + (left + right - whole) / 15.0
        return recurse(a_, m, fa, flm, fm, left, depth + 1) + recurse(
            m, b_, fm, frm, fb, right, depth + 1
        )

    if b <= a:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = simpson(fa, fm, fb, a, b)
    return recurse(a, b, fa, fm, fb, whole, 0)


def _radius_closed_form(params: CosmologyParams, r0: float, t: float) -> float:
    n, c, a0, H, sigma = params.n, params.c, params.a0, params.H, params.sigma
    if H == 0.0:
        return r0 + c * t / a0
    if sigma == -1.0:
        return r0 + c / (a0 * H) * (1.0 - math.exp(-H * t))
    if sigma == -1.0 + 2.0 / n:
        return r0 + c * math.log1p(H * t) / (a0 * H)
    k = n * (1.0 + sigma) * H / 2.0
    beta = 2.0 / (n * (1.0 + sigma))
    g = 1.0 + k * t
    coef = 2.0 * c / (a0 * H * (2.0 - n * (1.0 + sigma)))
    return r0 + coef * (1.0 - g ** (1.0 - beta))


def _log_radius_closed_form(params: CosmologyParams, r0: float, t: float) -> float:
    """log r(t), stable against exp/power overflow at large t."""
    n, c, a0, H, sigma = params.n, params.c, params.a0, params.H, params.sigma
    if H == 0.0:
        return math.log(r0 + c * t / a0)
    if sigma == -1.0:
        if H > 0.0:
            return math.log(r0 + c / (a0 * H) * (1.0 - math.exp(-H * t)))
        x = -H * t
        scale = c / (a0 * (-H))
        if x <= _EXP_SAFE:
            return math.log(r0 + scale * (math.exp(x) - 1.0))
        return x + math.log(scale) + math.log1p((r0 - scale) / scale * math.exp(-x))
    if sigma == -1.0 + 2.0 / n:
        return math.log(r0 + c * math.log1p(H * t) / (a0 * H))
    k = n * (1.0 + sigma) * H / 2.0
    beta = 2.0 / (n * (1.0 + sigma))
    g = 1.0 + k * t
    coef = 2.0 * c / (a0 * H * (2.0 - n * (1.0 + sigma)))
    y = (1.0 - beta) * math.log(g)
    if y <= _EXP_SAFE:
        return math.log(r0 + coef * (1.0 - math.exp(y)))
    # divergent branch: r ~ (-coef) * g^(1-beta), and -coef > 0 there
    return y + math.log(-coef) + math.log1p((r0 + coef) / (-coef) * math.exp(-y))


def comoving_radius(geom: ConeGeometry, t: float) -> float:
    """r(t) = r0 + integral of c/a; closed form on the FLRW family."""
    _check_time(t, geom.end)
    if geom.model is None or isinstance(geom.model, ClosedFormFLRW):
        return _radius_closed_form(geom.params, geom.r0, t)
    model = geom.model
    c = geom.params.c
    integral = _adaptive_simpson(lambda s: c / scale_eval(model, s)[0], 0.0, t)
    return geom.r0 + integral


def q_eval(geom: ConeGeometry, t: float) -> float:
    """q(t) = a(t) r(t)^2 / a0; q(0) = r0^2 exactly."""
    _check_time(t, geom.end)
    if t == 0.0:
        return geom.q0
    r = comoving_radius(geom, t)
    if geom.model is None or isinstance(geom.model, ClosedFormFLRW):
        a, _, _ = scale_eval(ClosedFormFLRW(geom.params), t)
    else:
        a, _, _ = scale_eval(geom.model, t)
    return a * r * r / geom.params.a0


def log_q_eval(geom: ConeGeometry, t: float) -> float:
    """log q(t) on the closed-form family, valid far beyond exp overflow."""
    _check_time(t, geom.end)
    params = geom.params
    if geom.model is not None and not isinstance(geom.model, ClosedFormFLRW):
        return math.log(q_eval(geom, t))
    if params.sigma == -1.0:
        log_a_ratio = params.H * t
    else:
        k = params.n * (1.0 + params.sigma) * params.H / 2.0
        beta = 2.0 / (params.n * (1.0 + params.sigma))
        log_a_ratio = beta * math.log(1.0 + k * t)
    return log_a_ratio + 2.0 * _log_radius_closed_form(params, geom.r0, t)


def classify_q(geom: ConeGeometry) -> QClassification:
    """Monotonicity of q by the sufficient sign conditions.

    NonDecreasing for H >= 0, or for H < 0 with sigma <= -1 + 1/n and
    r0 <= -2c/(a0 H); NonIncreasing for H < 0 with sigma >= -1 + 1/n and
    r0 >= -2c/(a0 H); NotMonotone otherwise (the rows are silent there).
    Boundary parameter sets satisfying both rows report NonDecreasing.
    """
    params = geom.params
    n, c, a0, H, sigma = params.n, params.c, params.a0, params.H, params.sigma
    if H == 0.0:
        qdot0 = 2.0 * c * geom.r0 / a0
        return QClassification(Monotonicity.NON_DECREASING, None, qdot0, None)
    d0 = geom.r0 + 2.0 * c / (a0 * H)
    qdot0 = H * geom.r0 * d0
    threshold = -2.0 * c / (a0 * H) if H < 0.0 else None
    if H > 0.0:
        return QClassification(Monotonicity.NON_DECREASING, d0, qdot0, threshold)
    sigma_gate = -1.0 + 1.0 / n
    if sigma <= sigma_gate and geom.r0 <= threshold:
        return QClassification(Monotonicity.NON_DECREASING, d0, qdot0, threshold)
    if sigma >= sigma_gate and geom.r0 >= threshold:
        return QClassification(Monotonicity.NON_INCREASING, d0, qdot0, threshold)
    return QClassification(Monotonicity.NOT_MONOTONE, d0, qdot0, threshold)


def q_tilde_eval(geom: ConeGeometry, t: float) -> float:
    """Monotonized q: the constant q0 when q is non-increasing, else q(t)."""
    verdict = classify_q(geom).monotonicity
    if verdict is Monotonicity.NOT_MONOTONE:
        raise PreconditionError(
            "q is not certified monotone for these parameters; "
            "the monotonized envelope is undefined"
        )
    if verdict is Monotonicity.NON_INCREASING:
        _check_time(t, geom.end)
        return geom.q0
    return q_eval(geom, t)


def log_q_tilde_eval(geom: ConeGeometry, t: float) -> float:
    verdict = classify_q(geom).monotonicity
    if verdict is Monotonicity.NOT_MONOTONE:
        raise PreconditionError(
            "q is not certified monotone for these parameters; "
            "the monotonized envelope is undefined"
        )
    if verdict is Monotonicity.NON_INCREASING:
        _check_time(t, geom.end)
        return 2.0 * math.log(geom.r0)
    return log_q_eval(geom, t)
