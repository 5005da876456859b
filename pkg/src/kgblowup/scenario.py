"""Scenario files: strict JSON schema for runs and parameter sweeps.

A scenario carries four blocks: ``cosmology`` (n, c, a0, H, sigma,
m_squared), ``cone`` (r0), ``theorem`` (N, epsilon, theta, lambda, p, w0,
w1) and an optional ``run`` block with solver settings.  Unknown keys are
rejected so machine-generated sweeps fail loudly instead of silently
ignoring a typo.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .certificate import TheoremInputs
from .cone import ConeGeometry
from .cosmology import CosmologyParams

__all__ = [
    "ScenarioError",
    "RunSettings",
    "Scenario",
    "SweepSpec",
    "scenario_from_dict",
    "load_scenario",
    "load_sweep_spec",
    "set_by_path",
]


class ScenarioError(ValueError):
    """Scenario file violates the schema or a parameter constraint."""


_RUN_DEFAULTS: Dict[str, Any] = {
    "t_end": None,
    "rel_tol": 1e-10,
    "pde_rel_tol": 1e-8,
    "grid_h": 1e-2,
    "r_max_factor": 1.25,
    "output_interval": None,
    "out": None,
    "ode_mass_sq_const": None,
    "ode_forcing_const": None,
}


@dataclass(frozen=True)
class RunSettings:
    t_end: Optional[float] = None
    rel_tol: float = 1e-10
    pde_rel_tol: float = 1e-8
    grid_h: float = 1e-2
    r_max_factor: float = 1.25
    output_interval: Optional[float] = None
    out: Optional[str] = None
    ode_mass_sq_const: Optional[float] = None
    ode_forcing_const: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    params: CosmologyParams
    r0: float
    N: float
    epsilon: float
    theta: float
    lam: float
    p: float
    w0: float
    w1: float
    run: RunSettings = field(default_factory=RunSettings)

    def geometry(self) -> ConeGeometry:
        return ConeGeometry(self.params, self.r0)

    def inputs(self) -> TheoremInputs:
        return TheoremInputs(
            geom=self.geometry(),
            N=self.N,
            epsilon=self.epsilon,
            theta=self.theta,
            lam=self.lam,
            p=self.p,
            w0=self.w0,
            w1=self.w1,
        )


def _require_mapping(obj: Any, where: str) -> Dict[str, Any]:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected a JSON object")
    return obj


def _reject_unknown(block: Dict[str, Any], allowed, where: str) -> None:
    unknown = set(block) - set(allowed)
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {sorted(unknown)}")


def _number(block: Dict[str, Any], key: str, where: str, optional: bool = False):
    if key not in block:
        if optional:
            return None
        raise ScenarioError(f"{where}.{key}: missing required key")
    val = block[key]
    if val is None and optional:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ScenarioError(f"{where}.{key}: expected a number, got {val!r}")
    if isinstance(val, float) and not math.isfinite(val):
        raise ScenarioError(f"{where}.{key}: must be finite")
    return float(val)


def scenario_from_dict(data: Dict[str, Any], where: str = "scenario") -> Scenario:
    data = _require_mapping(data, where)
    _reject_unknown(data, {"cosmology", "cone", "theorem", "run"}, where)
    for block in ("cosmology", "cone", "theorem"):
        if block not in data:
            raise ScenarioError(f"{where}.{block}: missing required block")

    cosmo = _require_mapping(data["cosmology"], f"{where}.cosmology")
    _reject_unknown(
        cosmo, {"n", "c", "a0", "H", "sigma", "m_squared"}, f"{where}.cosmology"
    )
    n = _number(cosmo, "n", f"{where}.cosmology")
    if n != int(n) or n < 1:
        raise ScenarioError(
            f"{where}.cosmology.n: spatial dimension must be a positive integer"
        )
    try:
        params = CosmologyParams(
            n=int(n),
            c=_number(cosmo, "c", f"{where}.cosmology"),
            a0=_number(cosmo, "a0", f"{where}.cosmology"),
            H=_number(cosmo, "H", f"{where}.cosmology"),
            sigma=_number(cosmo, "sigma", f"{where}.cosmology"),
            m_squared=_number(cosmo, "m_squared", f"{where}.cosmology"),
        )
    except ValueError as exc:
        raise ScenarioError(f"{where}.cosmology: {exc}") from exc

    cone = _require_mapping(data["cone"], f"{where}.cone")
    _reject_unknown(cone, {"r0"}, f"{where}.cone")
    r0 = _number(cone, "r0", f"{where}.cone")
    if not r0 > 0:
        raise ScenarioError(f"{where}.cone.r0: support radius must be positive")

    thm = _require_mapping(data["theorem"], f"{where}.theorem")
    _reject_unknown(
        thm, {"N", "epsilon", "theta", "lambda", "p", "w0", "w1"}, f"{where}.theorem"
    )
    pieces = {
        "N": _number(thm, "N", f"{where}.theorem"),
        "epsilon": _number(thm, "epsilon", f"{where}.theorem"),
        "theta": _number(thm, "theta", f"{where}.theorem"),
        "lam": _number(thm, "lambda", f"{where}.theorem"),
        "p": _number(thm, "p", f"{where}.theorem"),
        "w0": _number(thm, "w0", f"{where}.theorem"),
        "w1": _number(thm, "w1", f"{where}.theorem"),
    }
    if not 0.0 < pieces["epsilon"] < 1.0:
        raise ScenarioError(f"{where}.theorem.epsilon: must lie in (0, 1)")
    if not 0.0 < pieces["theta"] < 1.0:
        raise ScenarioError(f"{where}.theorem.theta: must lie in (0, 1)")
    if not pieces["lam"] > 0.0:
        raise ScenarioError(f"{where}.theorem.lambda: must be positive")
    if not pieces["p"] > 1.0:
        raise ScenarioError(f"{where}.theorem.p: must lie in (1, infinity)")
    if pieces["N"] < 0.0:
        raise ScenarioError(f"{where}.theorem.N: must be nonnegative")

    run_block = data.get("run", {})
    run_block = _require_mapping(run_block, f"{where}.run")
    _reject_unknown(run_block, set(_RUN_DEFAULTS), f"{where}.run")
    merged = dict(_RUN_DEFAULTS)
    for key in run_block:
        if key == "out":
            if run_block[key] is not None and not isinstance(run_block[key], str):
                raise ScenarioError(f"{where}.run.out: expected a string path")
            merged[key] = run_block[key]
        else:
            merged[key] = _number(run_block, key, f"{where}.run", optional=True)
    for key in ("rel_tol", "pde_rel_tol", "grid_h", "r_max_factor"):
        if merged[key] is None or not merged[key] > 0:
            raise ScenarioError(f"{where}.run.{key}: must be positive")
    run = RunSettings(**merged)

    return Scenario(params=params, r0=r0, run=run, **pieces)


def load_scenario(path) -> Scenario:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(data, where=str(path))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

_AXIS_PREFIXES = ("cosmology.", "cone.", "theorem.", "run.")


@dataclass(frozen=True)
class SweepSpec:
    base: Dict[str, Any]
    axes: List[Tuple[str, List[float]]]
    parallelism: int = 1
    with_ode: bool = False
    max_points: int = 1_000_000

    @property
    def n_points(self) -> int:
        total = 1
        for _, values in self.axes:
            total *= len(values)
        return total


def set_by_path(data: Dict[str, Any], path: str, value: Any) -> None:
    """Assign base[block][key] = value for a dotted parameter path."""
    block, _, key = path.partition(".")
    if not key or "." in key:
        raise ScenarioError(f"axis path '{path}' must be '<block>.<key>'")
    data.setdefault(block, {})[key] = value


def load_sweep_spec(path) -> SweepSpec:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    data = _require_mapping(data, str(path))
    _reject_unknown(
        data, {"base", "axes", "parallelism", "with_ode", "max_points"}, str(path)
    )
    if "base" not in data or "axes" not in data:
        raise ScenarioError(f"{path}: sweep spec needs 'base' and 'axes'")
    base = _require_mapping(data["base"], f"{path}.base")
    scenario_from_dict(copy.deepcopy(base), where=f"{path}.base")  # validate now

    axes_raw = data["axes"]
    if not isinstance(axes_raw, list) or not axes_raw:
        raise ScenarioError(f"{path}.axes: must be a non-empty list")
    axes: List[Tuple[str, List[float]]] = []
    for i, axis in enumerate(axes_raw):
        axis = _require_mapping(axis, f"{path}.axes[{i}]")
        _reject_unknown(axis, {"path", "values"}, f"{path}.axes[{i}]")
        p = axis.get("path")
        if not isinstance(p, str) or not p.startswith(_AXIS_PREFIXES):
            raise ScenarioError(
                f"{path}.axes[{i}].path: must start with one of {_AXIS_PREFIXES}"
            )
        values = axis.get("values")
        if not isinstance(values, list) or not values:
            raise ScenarioError(f"{path}.axes[{i}].values: must be a non-empty list")
        axes.append((p, [float(v) for v in values]))

    parallelism = int(data.get("parallelism", 1) or 1)
    with_ode = bool(data.get("with_ode", False))
    max_points = int(data.get("max_points", 1_000_000))
    spec = SweepSpec(
        base=base, axes=axes, parallelism=parallelism, with_ode=with_ode,
        max_points=max_points,
    )
    if spec.n_points > spec.max_points:
        raise ScenarioError(
            f"{path}: sweep has {spec.n_points} points, above the cap {spec.max_points}"
        )
    return spec
