"""Numerical integration of Hamilton's equations with per-step observables.

Two methods are offered: an embedded 5(4) adaptive Runge-Kutta pair and a
fixed-step implicit midpoint rule (symmetric, Newton-solved).  The deformed
Hamiltonians are not kinetic-plus-potential separable, which rules out the
usual splitting integrators.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import PhasePoint, SystemSpec, hamiltonian_fn, in_domain
from .dual import hamiltonian_vector_field
from .errors import DomainError
from .observables import Observable


class Termination(str, Enum):
    COMPLETED = "completed"
    DOMAIN_EXIT = "domain_exit"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "adaptive_rk"  # or "implicit_midpoint"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    step: float = 1e-3
    t_end: float = 10.0
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.method not in ("adaptive_rk", "implicit_midpoint"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.step <= 0:
            raise ValueError("tolerances and step must be positive")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")


@dataclass
class Trajectory:
    times: list[float]
    states: list[PhasePoint]
    observable_values: dict[str, list[float]]
    termination: Termination

    def to_csv(self) -> str:
        """CSV with header t,x,y,z,px,py,pz,H,<observables...>; 17 significant digits."""
        names = [n for n in self.observable_values if n != "H"]
        header = "t,x,y,z,px,py,pz,H," + ",".join(names)
        lines = [header.rstrip(",")]
        for i, (t, s) in enumerate(zip(self.times, self.states)):
            row = [t, *s.as_tuple(), self.observable_values["H"][i]]
            row += [self.observable_values[n][i] for n in names]
            lines.append(",".join(f"{v:.17g}" for v in row))
        return "\n".join(lines) + "\n"


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)

_MIN_STEP = 1e-12


def _field(spec: SystemSpec, y: np.ndarray) -> np.ndarray:
    return hamiltonian_vector_field(spec, PhasePoint.from_array(y))


def _dp54_step(spec, y, h, f0):
    """One Dormand-Prince trial step; returns (y5, err_vec, f_last)."""
    k = [f0]
    for i in range(1, 7):
        yi = y + h * sum(a * ki for a, ki in zip(_DP_A[i], k))
        k.append(_field(spec, yi))
    k = np.array(k)
    y5 = y + h * (_DP_B5 @ k)
    err = h * ((_DP_B5 - _DP_B4) @ k)
    return y5, err, k[6]


def _integrate_adaptive(spec, y0, config, record):
    t, y = 0.0, y0.copy()
    f0 = _field(spec, y)
    h = min(config.step, config.t_end)
    record(t, y)
    steps = 0
    while t < config.t_end:
        if steps >= config.max_steps:
            return Termination.STEP_LIMIT
        h = min(h, config.t_end - t)
        try:
            y5, err, f_last = _dp54_step(spec, y, h, f0)
            valid = in_domain(spec, PhasePoint.from_array(y5), 0.0)
        except (DomainError, ZeroDivisionError, ValueError):
            y5, valid = None, False
        if not valid:
            h *= 0.5
            if h < _MIN_STEP:
                return Termination.DOMAIN_EXIT
            continue
        scale = config.abs_tol + config.rel_tol * np.maximum(np.abs(y), np.abs(y5))
        err_norm = np.sqrt(np.mean((err / scale) ** 2))
        steps += 1
        if err_norm <= 1.0:
            t += h
            y, f0 = y5, f_last
            record(t, y)
        factor = 0.9 * (1.0 / err_norm) ** 0.2 if err_norm > 0 else 5.0
        h *= min(5.0, max(0.2, factor))
        if h < _MIN_STEP:
            return Termination.DOMAIN_EXIT
    return Termination.COMPLETED


_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 20
_JAC_STEP = 1e-6


def _field_jacobian(spec, y):
    jac = np.empty((6, 6))
    for j in range(6):
        dy = np.zeros(6)
        dy[j] = _JAC_STEP
        jac[:, j] = (_field(spec, y + dy) - _field(spec, y - dy)) / (2.0 * _JAC_STEP)
    return jac


def _midpoint_step(spec, y, h):
    y_new = y + h * _field(spec, y)  # explicit Euler predictor
    for _ in range(_NEWTON_MAX_ITER):
        mid = 0.5 * (y + y_new)
        res = y_new - y - h * _field(spec, mid)
        if np.linalg.norm(res) <= _NEWTON_TOL:
            return y_new
        jac = np.eye(6) - 0.5 * h * _field_jacobian(spec, mid)
        y_new = y_new - np.linalg.solve(jac, res)
    mid = 0.5 * (y + y_new)
    res = y_new - y - h * _field(spec, mid)
    if np.linalg.norm(res) > 1e-8:
        raise DomainError(f"implicit midpoint Newton iteration stalled, |res|={np.linalg.norm(res):.3g}")
    return y_new


def _integrate_midpoint(spec, y0, config, record):
    t, y = 0.0, y0.copy()
    record(t, y)
    steps = 0
    n_full = int(np.floor(config.t_end / config.step + 1e-12))
    remainder = config.t_end - n_full * config.step
    plan = [config.step] * n_full + ([remainder] if remainder > 1e-14 else [])
    for h in plan:
        if steps >= config.max_steps:
            return Termination.STEP_LIMIT
        try:
            y_new = _midpoint_step(spec, y, h)
            valid = in_domain(spec, PhasePoint.from_array(y_new), 0.0)
        except (DomainError, ZeroDivisionError, ValueError):
            valid = False
        if not valid:
            return Termination.DOMAIN_EXIT
        steps += 1
        t += h
        y = y_new
        record(t, y)
    return Termination.COMPLETED


def integrate(
    spec: SystemSpec,
    initial: PhasePoint,
    config: IntegratorConfig,
    observables: list[Observable] = (),
) -> Trajectory:
    """Flow of the Hamiltonian vector field, observables stamped at accepted steps."""
    if not in_domain(spec, initial, 0.0):
        raise DomainError(f"initial state {initial.as_tuple()} outside the domain")
    H = hamiltonian_fn(spec)
    times: list[float] = []
    states: list[PhasePoint] = []
    values: dict[str, list[float]] = {"H": []}
    for o in observables:
        values[o.name] = []

    def record(t, y):
        point = PhasePoint.from_array(y)
        times.append(t)
        states.append(point)
        values["H"].append(float(H(*point.as_tuple())))
        for o in observables:
            values[o.name].append(o.at(point))

    if config.method == "adaptive_rk":
        term = _integrate_adaptive(spec, initial.as_array(), config, record)
    else:
        term = _integrate_midpoint(spec, initial.as_array(), config, record)
    return Trajectory(times, states, values, term)


def drift_report(trajectory: Trajectory) -> dict[str, tuple[float, float]]:
    """Per observable: max |K(t) - K(0)| and the same normalized by 1 + |K(0)|."""
    if len(trajectory.times) < 2:
        raise ValueError("trajectory needs at least 2 samples")
    out = {}
    for name, series in trajectory.observable_values.items():
        arr = np.asarray(series)
        max_abs = float(np.max(np.abs(arr - arr[0])))
        out[name] = (max_abs, max_abs / (1.0 + abs(arr[0])))
    return out
