"""Blow-up certificate: hypothesis checks, constants, and lifespan bound.

Given background parameters, a support radius, and data functionals
(w0, w1), this module evaluates every hypothesis needed to guarantee that
the spatial integral of the solution diverges in finite time:

  * admissibility of the shift N (N >= 0 and N^2 + inf M^2 >= 0),
  * monotonicity of q,
  * A = inf e^{cN(1-eps)t} / q~^{n/2}  > 0,
  * B = sup q~^{n/2} (N^2+M^2)^{1/(p-1)} e^{-cNt}  < infinity,
  * the data thresholds on w0 and w1,
  * the lifespan bound T* <= T0.

Positivity of A and finiteness of B are decided analytically first by
comparing exponential orders (q~ grows like e^{|H|t} in the exponential
family and polynomially otherwise), so the numeric optimizer never chases
a divergent objective.  The optimizer works on log-objectives over a
compactified grid plus golden-section refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .cone import ConeGeometry, Monotonicity, classify_q, log_q_tilde_eval
from .cosmology import (
    ClosedFormFLRW,
    CosmologyParams,
    MassTag,
    classify_mass_behavior,
    curved_mass_sq,
    horizon_end,
)
from .errors import ConfigurationError, PreconditionError

__all__ = [
    "TheoremInputs",
    "BlowupCertificate",
    "ExtremumResult",
    "CorollaryCaseResult",
    "unit_ball_volume",
    "cone_ball_factor",
    "rpow",
    "check_N",
    "compute_A",
    "compute_B",
    "data_thresholds",
    "lifespan",
    "corollary_case_check",
    "certify",
    "VERDICT_NAMES",
]

GRID_NODES = 4096
NEAR_ZERO_TIME = 1e-12
HORIZON_SHAVE = 1e-9

VERDICT_NAMES = (
    "support_radius_positive",
    "admissible_N",
    "q_monotone",
    "A_positive",
    "B_finite",
    "w0_above_threshold",
    "w1_above_threshold",
    "lifespan_within_horizon",
)


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def cone_ball_factor(params: CosmologyParams) -> float:
    """Q = omega_n^{2/n} * a0, the geometric factor in b and the thresholds."""
    return unit_ball_volume(params.n) ** (2.0 / params.n) * params.a0


def rpow(x: float, y: float) -> float:
    """x**y for x >= 0 and arbitrary real y, as exp(y log x); 0 maps to 0."""
    if x < 0.0:
        raise ValueError(f"rpow domain: x={x} < 0")
    if x == 0.0:
        return 0.0
    return math.exp(y * math.log(x))


@dataclass(frozen=True)
class TheoremInputs:
    """Everything the blow-up hypotheses quantify over."""

    geom: ConeGeometry
    N: float
    epsilon: float
    theta: float
    lam: float
    p: float
    w0: float
    w1: float

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be nonnegative")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        if not self.lam > 0.0:
            raise ValueError("lambda must be positive")
        if not 1.0 < self.p < math.inf:
            raise ValueError("p must lie in (1, infinity)")

    @property
    def params(self) -> CosmologyParams:
        return self.geom.params


@dataclass(frozen=True)
class ExtremumResult:
    """Outcome of one inf/sup evaluation.

    ``value`` is 0.0 (failed A) or inf (failed B) when the analytic gate
    rejects; ``arg_t`` is the grid/golden location of the extremum.
    """

    value: float
    ok: bool
    arg_t: Optional[float]
    reason: str


@dataclass(frozen=True)
class CorollaryCaseResult:
    case: Optional[str]
    excluded: bool
    reason: str
    clauses: Dict[str, bool] = field(default_factory=dict)


@dataclass(frozen=True)
class BlowupCertificate:
    A: Optional[float]
    B: Optional[float]
    Q: float
    omega_n: float
    D: Optional[float]
    C_squared: Optional[float]
    alpha: float
    w0_threshold: Optional[float]
    w1_threshold: Optional[float]
    T_star: Optional[float]
    T0: float
    verdicts: Dict[str, bool]
    reasons: List[str]
    corollary_case: Optional[str]
    excluded_region: bool
    valid: bool
    inconclusive: bool


# ---------------------------------------------------------------------------
# hypothesis (Cond-NM): admissibility of N
# ---------------------------------------------------------------------------


def check_N(inputs: TheoremInputs) -> Tuple[bool, str]:
    """N >= 0 and N^2 + inf M^2 >= 0, with the infimum taken from the
    exact classification bounds."""
    behavior = classify_mass_behavior(inputs.params)
    if behavior.tag is MassTag.DIVERGES_MINUS:
        return False, "excluded region: curved mass unbounded below"
    if inputs.N < 0:
        return False, "N is negative"
    if inputs.N**2 + behavior.inf_m2 < 0.0:
        return False, (
            f"N^2 + inf M^2 = {inputs.N ** 2 + behavior.inf_m2} < 0"
        )
    return True, "admissible"


# ---------------------------------------------------------------------------
# A and B: analytic gate + log-space optimization
# ---------------------------------------------------------------------------


def _q_growth(inputs: TheoremInputs, verdict: Monotonicity) -> Tuple[float, bool]:
    """(exponential rate of q~, polynomially-unbounded flag).

    Rate |H| in the exponential family (sigma == -1, H != 0) when q~ tracks
    q; otherwise rate 0.  The flag says whether a rate-0 q~ still diverges:
    always on an infinite horizon outside the exponential family, and on a
    finite horizon exactly in the excluded region (Big-Rip/Big-Crunch make
    a r^2 blow up there); the non-excluded monotone finite-horizon cases
    keep q bounded.
    """
    params = inputs.params
    if verdict is Monotonicity.NON_INCREASING:
        return 0.0, False
    if params.sigma == -1.0 and params.H != 0.0:
        return abs(params.H), False
    if math.isinf(horizon_end(params)):
        return 0.0, True
    return 0.0, params.excluded_region


def _time_grid(t_end: float, nodes: int) -> np.ndarray:
    if math.isinf(t_end):
        s = np.linspace(0.0, 1.0, nodes, endpoint=False)
        t = s / (1.0 - s)
    else:
        t = np.linspace(0.0, t_end * (1.0 - HORIZON_SHAVE), nodes)
    t[0] = NEAR_ZERO_TIME
    return t


def _golden_minimize(f: Callable[[float], float], lo: float, hi: float) -> Tuple[float, float]:
    """Golden-section search; returns (t_min, f_min)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    tol = 1e-10 * max(1.0, abs(hi))
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    if fc <= fd:
        return c, fc
    return d, fd


def _optimize_log(
    f_log: Callable[[float], float], t_end: float, nodes: int
) -> Tuple[float, float]:
    """Minimize a log-objective on (0, t_end); returns (t_min, f_min)."""
    grid = _time_grid(t_end, nodes)
    vals = np.array([f_log(t) for t in grid])
    i = int(np.nanargmin(vals))
    best_t, best_v = float(grid[i]), float(vals[i])
    if not math.isfinite(best_v):
        return best_t, best_v
    lo = float(grid[i - 1]) if i > 0 else float(grid[i])
    hi = float(grid[i + 1]) if i < grid.size - 1 else float(grid[i])
    if hi > lo:
        t_ref, v_ref = _golden_minimize(f_log, lo, hi)
        if v_ref < best_v:
            best_t, best_v = t_ref, v_ref
    return best_t, best_v


def _require_closed_form(inputs: TheoremInputs) -> None:
    if inputs.geom.model is not None and not isinstance(inputs.geom.model, ClosedFormFLRW):
        raise ConfigurationError(
            "certificates are defined on the closed-form scale family only"
        )


def compute_A(inputs: TheoremInputs, nodes: int = GRID_NODES) -> ExtremumResult:
    """A = inf over (0, T0) of e^{cN(1-eps)t} / q~^{n/2}(t)."""
    _require_closed_form(inputs)
    params = inputs.params
    verdict = classify_q(inputs.geom).monotonicity
    if verdict is Monotonicity.NOT_MONOTONE:
        raise PreconditionError("q is not certified monotone; A is undefined")

    growth = params.c * inputs.N * (1.0 - inputs.epsilon)
    exp_rate_q, poly_unbounded = _q_growth(inputs, verdict)
    rate = growth - params.n / 2.0 * exp_rate_q
    if rate < 0.0:
        return ExtremumResult(
            0.0,
            False,
            None,
            f"decay rate {rate}: exponential growth of q~ outruns e^(cN(1-eps)t)",
        )
    if poly_unbounded and (growth == 0.0 or math.isfinite(horizon_end(params))):
        # q~ diverges while the exponential cannot compensate (either it is
        # constant, or the horizon is finite so it stays bounded)
        return ExtremumResult(
            0.0, False, None, "q~ diverges with no exponential compensation"
        )

    n_half = params.n / 2.0
    geom = inputs.geom

    def f_log(t: float) -> float:
        return growth * t - n_half * log_q_tilde_eval(geom, t)

    t_min, f_min = _optimize_log(f_log, horizon_end(params), nodes)
    return ExtremumResult(math.exp(f_min), True, t_min, "positive infimum")


def compute_B(inputs: TheoremInputs, nodes: int = GRID_NODES) -> ExtremumResult:
    """B = sup over (0, T0) of q~^{n/2} (N^2 + M^2)^{1/(p-1)} e^{-cNt}."""
    _require_closed_form(inputs)
    params = inputs.params
    ok, reason = check_N(inputs)
    if not ok:
        raise PreconditionError(f"B needs admissible N: {reason}")
    verdict = classify_q(inputs.geom).monotonicity
    if verdict is Monotonicity.NOT_MONOTONE:
        raise PreconditionError("q is not certified monotone; B is undefined")

    behavior = classify_mass_behavior(params)
    if behavior.tag is MassTag.DIVERGES_PLUS:
        return ExtremumResult(
            math.inf,
            False,
            None,
            "curved mass diverges to +infinity at the finite horizon",
        )

    decay = params.c * inputs.N
    exp_rate_q, poly_unbounded = _q_growth(inputs, verdict)
    rate = params.n / 2.0 * exp_rate_q - decay
    if rate > 0.0:
        return ExtremumResult(
            math.inf,
            False,
            None,
            f"growth rate {rate}: q~^(n/2) outruns e^(cNt)",
        )
    if rate == 0.0 and exp_rate_q == 0.0 and poly_unbounded:
        # N == 0 with polynomially unbounded q~: finite only if the mass
        # factor decays fast enough (possible only when the limit of
        # N^2 + M^2 vanishes).
        limit_mass = inputs.N**2 + behavior.limit
        if limit_mass > 0.0:
            return ExtremumResult(
                math.inf, False, None, "q~ unbounded and N^2 + M^2 has a positive limit"
            )
        if params.sigma == 0.0 or params.H == 0.0:
            # M^2 constant and equal to -N^2: the objective vanishes
            return ExtremumResult(0.0, True, None, "N^2 + M^2 vanishes identically")
        deg_q, logs = _poly_degree_q(params)
        deg = params.n / 2.0 * deg_q - 2.0 / (inputs.p - 1.0)
        if deg > 0.0 or (deg == 0.0 and logs):
            return ExtremumResult(
                math.inf, False, None, "polynomial degree comparison diverges"
            )

    n_half = params.n / 2.0
    geom = inputs.geom
    inv_pm1 = 1.0 / (inputs.p - 1.0)
    n2 = inputs.N**2

    def neg_log(t: float) -> float:
        mass = n2 + curved_mass_sq(params, t)
        if mass <= 0.0:
            return math.inf  # objective 0 there
        return -(n_half * log_q_tilde_eval(geom, t) + inv_pm1 * math.log(mass) - decay * t)

    t_max, neg_min = _optimize_log(neg_log, horizon_end(params), nodes)
    if math.isinf(neg_min):
        return ExtremumResult(0.0, True, None, "objective vanishes identically")
    return ExtremumResult(math.exp(-neg_min), True, t_max, "finite supremum")


def _poly_degree_q(params: CosmologyParams) -> Tuple[float, bool]:
    """Polynomial degree in t of q(t) as t -> infinity (sigma != -1, H != 0),
    plus a flag for logarithmic correction factors."""
    beta = 2.0 / (params.n * (1.0 + params.sigma))
    if beta < 1.0:
        return 2.0 - beta, False
    if beta == 1.0:
        return 1.0, True
    return beta, False


# ---------------------------------------------------------------------------
# data thresholds and lifespan
# ---------------------------------------------------------------------------


def data_thresholds(inputs: TheoremInputs, A: float, B: float, Q: float) -> Tuple[float, float]:
    """(w0 threshold, w1 threshold) from the certified constants."""
    p, theta, lam, c = inputs.p, inputs.theta, inputs.lam, inputs.params.c
    n = inputs.params.n
    w0_thr = rpow(Q, n / 2.0) * B / rpow((1.0 - theta) * lam, 1.0 / (p - 1.0))
    r0 = inputs.geom.r0
    w0 = inputs.w0
    second = 0.0
    if w0 > 0.0:
        second = (
            math.sqrt(2.0 * lam * c * c * theta / (p + 1.0))
            * rpow(w0, (p + 1.0) / 2.0)
            / rpow(r0 * r0 * Q, n * (p - 1.0) / 4.0)
        )
    w1_thr = max(c * inputs.N * w0, second)
    return w0_thr, w1_thr


@dataclass(frozen=True)
class LifespanResult:
    D: float
    T_star: float
    C_squared: float
    alpha: float
    within_horizon: bool


def lifespan(inputs: TheoremInputs, A: float, Q: float) -> LifespanResult:
    """D, T*, C^2 and the envelope exponent alpha from certified A."""
    if not A > 0.0:
        raise PreconditionError("lifespan needs A > 0")
    if not inputs.w0 > 0.0:
        raise PreconditionError("lifespan needs w0 > 0")
    p, theta, lam, eps = inputs.p, inputs.theta, inputs.lam, inputs.epsilon
    c = inputs.params.c
    n = inputs.params.n
    D = (
        2.0
        * c
        * c
        * theta
        * lam
        * rpow(A, p - 1.0)
        / ((p + 1.0) * rpow(Q, n * (p - 1.0) / 2.0))
    )
    T_star = 2.0 / (eps * (p - 1.0) * math.sqrt(D) * rpow(inputs.w0, (p - 1.0) / 2.0))
    # inf( b~ e^{cN(1-eps)(p-1)t} ) = lambda Q^{-n(p-1)/2} A^{p-1}, so
    # C^2 = D * w0^{(1-eps)(p-1)}
    C_squared = D * rpow(inputs.w0, (1.0 - eps) * (p - 1.0))
    alpha = 1.0 + eps * (p - 1.0) / 2.0
    T0 = horizon_end(inputs.params)
    return LifespanResult(D, T_star, C_squared, alpha, T_star <= T0)


# ---------------------------------------------------------------------------
# corollary case table
# ---------------------------------------------------------------------------


def corollary_case_check(inputs: TheoremInputs) -> CorollaryCaseResult:
    """Match (H, sigma, N, r0, mass) against the eight closed-form cases.

    The case patterns partition the (H, sigma) plane outside the excluded
    region, so at most one candidate is tested; its remaining clauses are
    reported individually.
    """
    params = inputs.params
    n, c, a0, H, sigma = params.n, params.c, params.a0, params.H, params.sigma
    m2, N, eps, r0 = params.m_squared, inputs.N, inputs.epsilon, inputs.geom.r0

    if params.excluded_region:
        return CorollaryCaseResult(
            None, True, "excluded region (1+sigma)H<0, sigma<0", {}
        )
    if not N > 0.0:
        return CorollaryCaseResult(None, False, "corollary path requires N > 0", {})

    hub_sq = (n * H / (2.0 * c)) ** 2
    contracting_gate = -2.0 * c / (a0 * H) if H < 0.0 else None

    if H == 0.0:
        case, clauses = "i", {"N^2+m^2>=0": N**2 + m2 >= 0.0}
    elif H > 0.0 and sigma >= 0.0:
        case, clauses = "ii", {"N^2+m^2>=0": N**2 + m2 >= 0.0}
    elif H > 0.0 and -1.0 < sigma < 0.0:
        case = "iii"
        clauses = {"N^2+m^2+sigma(nH/2c)^2>=0": N**2 + m2 + sigma * hub_sq >= 0.0}
    elif H > 0.0 and sigma == -1.0:
        case = "iv"
        clauses = {
            "N^2+m^2-(nH/2c)^2>=0": N**2 + m2 - hub_sq >= 0.0,
            "N>nH/(2c(1-eps))": N > n * H / (2.0 * c * (1.0 - eps)),
        }
    elif H < 0.0 and sigma > 0.0:
        case = "v"
        clauses = {
            "N^2+m^2+sigma(nH/2c)^2>=0": N**2 + m2 + sigma * hub_sq >= 0.0,
            "r0>=-2c/(a0H)": r0 >= contracting_gate,
        }
    elif H < 0.0 and sigma == 0.0:
        case = "vi"
        clauses = {"N^2+m^2>=0": N**2 + m2 >= 0.0}
        if n >= 2:
            clauses["r0>=-2c/(a0H)"] = r0 >= contracting_gate
    elif H < 0.0 and sigma == -1.0:
        case = "vii"
        clauses = {
            "N^2+m^2-(nH/2c)^2>=0": N**2 + m2 - hub_sq >= 0.0,
            "r0<=2c/(a0|H|)": r0 <= 2.0 * c / (a0 * abs(H)),
            "N>n|H|/(2c(1-eps))": N > n * abs(H) / (2.0 * c * (1.0 - eps)),
        }
    else:  # H < 0 and sigma < -1
        case = "viii"
        clauses = {
            "N^2+m^2+sigma(nH/2c)^2>=0": N**2 + m2 + sigma * hub_sq >= 0.0,
            "r0<=2c/(a0|H|)": r0 <= 2.0 * c / (a0 * abs(H)),
        }

    clauses["r0>0"] = r0 > 0.0
    if all(clauses.values()):
        return CorollaryCaseResult(case, False, f"case ({case})", clauses)
    failed = ", ".join(k for k, v in clauses.items() if not v)
    return CorollaryCaseResult(
        None, False, f"candidate case ({case}) fails: {failed}", clauses
    )


# ---------------------------------------------------------------------------
# full certificate
# ---------------------------------------------------------------------------


def certify(inputs: TheoremInputs, nodes: int = GRID_NODES) -> BlowupCertificate:
    """Run every hypothesis check and assemble the certificate."""
    _require_closed_form(inputs)
    params = inputs.params
    omega_n = unit_ball_volume(params.n)
    Q = cone_ball_factor(params)
    T0 = horizon_end(params)
    alpha = 1.0 + inputs.epsilon * (inputs.p - 1.0) / 2.0
    reasons: List[str] = []
    verdicts: Dict[str, bool] = {name: False for name in VERDICT_NAMES}

    verdicts["support_radius_positive"] = inputs.geom.r0 > 0.0

    n_ok, n_reason = check_N(inputs)
    verdicts["admissible_N"] = n_ok
    if not n_ok:
        reasons.append(f"admissible_N: {n_reason}")

    q_class = classify_q(inputs.geom)
    monotone = q_class.monotonicity is not Monotonicity.NOT_MONOTONE
    verdicts["q_monotone"] = monotone
    if not monotone:
        reasons.append("q_monotone: parameters fall outside the monotonicity rows")

    A = B = None
    if monotone:
        a_res = compute_A(inputs, nodes=nodes)
        A = a_res.value
        verdicts["A_positive"] = a_res.ok
        if not a_res.ok:
            reasons.append(f"A_positive: {a_res.reason}")
        if n_ok:
            b_res = compute_B(inputs, nodes=nodes)
            B = b_res.value
            verdicts["B_finite"] = b_res.ok
            if not b_res.ok:
                reasons.append(f"B_finite: {b_res.reason}")

    w0_thr = w1_thr = None
    if B is not None and math.isfinite(B):
        w0_thr, w1_thr = data_thresholds(inputs, A, B, Q)
        verdicts["w0_above_threshold"] = inputs.w0 > w0_thr
        if not verdicts["w0_above_threshold"]:
            reasons.append(
                f"w0_above_threshold: w0={inputs.w0} <= threshold {w0_thr}"
            )
        verdicts["w1_above_threshold"] = inputs.w1 >= w1_thr
        if not verdicts["w1_above_threshold"]:
            reasons.append(
                f"w1_above_threshold: w1={inputs.w1} < threshold {w1_thr}"
            )

    D = C_squared = T_star = None
    if A is not None and A > 0.0 and inputs.w0 > 0.0:
        life = lifespan(inputs, A, Q)
        D, T_star, C_squared = life.D, life.T_star, life.C_squared
        verdicts["lifespan_within_horizon"] = life.within_horizon
        if not life.within_horizon:
            reasons.append(
                f"lifespan_within_horizon: T*={T_star} exceeds T0={T0} (inconclusive)"
            )

    corollary = corollary_case_check(inputs)
    others = [v for k, v in verdicts.items() if k != "lifespan_within_horizon"]
    valid = all(verdicts.values())
    inconclusive = all(others) and not verdicts["lifespan_within_horizon"]

    return BlowupCertificate(
        A=A,
        B=B,
        Q=Q,
        omega_n=omega_n,
        D=D,
        C_squared=C_squared,
        alpha=alpha,
        w0_threshold=w0_thr,
        w1_threshold=w1_thr,
        T_star=T_star,
        T0=T0,
        verdicts=verdicts,
        reasons=reasons,
        corollary_case=corollary.case,
        excluded_region=params.excluded_region,
        valid=valid,
        inconclusive=inconclusive,
    )
