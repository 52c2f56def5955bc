"""Conformally flat metrics, closed-form curvatures, and a finite-difference oracle.

Closed forms follow the coordinate-plane convention for the oscillator
families and orthogonal spherical planes (r-theta, r-phi, theta-phi) for the
Kepler family.  The oracle recomputes everything from central differences of
the metric alone, so it is independent of the closed forms it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Family, PhasePoint, SystemSpec, conformal_denominator_fn, in_domain
from .errors import DomainError


@dataclass(frozen=True)
class MetricAt:
    """Metric tensor evaluated at one configuration-space position."""

    position: np.ndarray
    g: np.ndarray


def _check_position(spec: SystemSpec, position, margin: float = 0.0):
    position = np.asarray(position, dtype=float)
    # only the configuration-space constraints matter here
    point = PhasePoint(position[0], position[1], position[2], 0.0, 0.0, 0.0)
    if not in_domain(spec, point, margin):
        raise DomainError(f"position {tuple(position)} outside the domain")
    return position


def metric(spec: SystemSpec, position) -> MetricAt:
    """Cartesian metric: conformal factor (1/mu) times the identity."""
    position = _check_position(spec, position)
    factor = conformal_denominator_fn(spec)(*position)
    return MetricAt(position, float(factor) * np.eye(3))


def sectional_curvatures(spec: SystemSpec, position):
    """The family's three closed-form sectional curvatures.

    Oscillator families: planes (x,y), (x,z), (y,z).
    Kepler: planes (r,theta), (r,phi), (theta,phi).
    """
    position = _check_position(spec, position)
    x, y, z = position
    lam = spec.deform
    if spec.family in (Family.OSC_LINEAR, Family.OSC_INVERSE_SQ):
        r2 = x * x + y * y + z * z
        den = (1.0 - lam * r2) ** 3
        return (
            lam * (2.0 - 3.0 * lam * z * z) / den,
            lam * (2.0 - 3.0 * lam * y * y) / den,
            lam * (2.0 - 3.0 * lam * x * x) / den,
        )
    if spec.family is Family.OSC_112:
        f = x * x + y * y + 4.0 * z * z
        den = (1.0 - lam * f) ** 3
        return (
            2.0 * lam * (1.0 - 12.0 * lam * z * z) / den,
            lam * (5.0 - 3.0 * lam * (x * x + 2.0 * y * y - 4.0 * z * z)) / den,
            lam * (5.0 - 3.0 * lam * (2.0 * x * x + y * y - 4.0 * z * z)) / den,
        )
    # Kepler
    r = math.sqrt(x * x + y * y + z * z)
    kappa = lam
    den = (r - kappa) ** 3
    k_rt = kappa / (2.0 * den)
    k_tp = kappa * (3.0 * kappa - 4.0 * r) / (4.0 * r * den)
    return (k_rt, k_rt, k_tp)


def ricci_scalar(spec: SystemSpec, position) -> float:
    """Closed-form scalar curvature; equals twice the sum of the sectionals."""
    position = _check_position(spec, position)
    x, y, z = position
    lam = spec.deform
    if spec.family in (Family.OSC_LINEAR, Family.OSC_INVERSE_SQ):
        r2 = x * x + y * y + z * z
        return 6.0 * lam * (2.0 - lam * r2) / (1.0 - lam * r2) ** 3
    if spec.family is Family.OSC_112:
        f = x * x + y * y + 4.0 * z * z
        return 6.0 * lam * (4.0 - 3.0 * lam * (x * x + y * y)) / (1.0 - lam * f) ** 3
    r = math.sqrt(x * x + y * y + z * z)
    kappa = lam
    return 3.0 * kappa * kappa / (2.0 * r * (r - kappa) ** 3)


# ---------------------------------------------------------------------------
# Finite-difference oracle


FD_STEP = 1e-4


def _christoffels(metric_fn, q, h):
    """Gamma^i_{jk} from central differences of the metric."""
    g = metric_fn(q)
    ginv = np.linalg.inv(g)
    dg = np.empty((3, 3, 3))  # dg[k, i, j] = d g_ij / d q_k
    for k in range(3):
        dq = np.zeros(3)
        dq[k] = h
        dg[k] = (metric_fn(q + dq) - metric_fn(q - dq)) / (2.0 * h)
    gamma = np.empty((3, 3, 3))  # gamma[i, j, k]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                s = 0.0
                for l in range(3):
                    s += ginv[i, l] * (dg[j, l, k] + dg[k, l, j] - dg[l, j, k])
                gamma[i, j, k] = 0.5 * s
    return gamma


def _riemann_lowered(metric_fn, q, h):
    """Fully lowered curvature tensor R_{ijkl} by nested central differences."""
    g = metric_fn(q)
    gamma = _christoffels(metric_fn, q, h)
    dgamma = np.empty((3, 3, 3, 3))  # dgamma[k, i, j, l] = d Gamma^i_{jl} / d q_k
    for k in range(3):
        dq = np.zeros(3)
        dq[k] = h
        dgamma[k] = (_christoffels(metric_fn, q + dq, h) - _christoffels(metric_fn, q - dq, h)) / (2.0 * h)
    riem_up = np.empty((3, 3, 3, 3))  # R^i_{jkl}
    for i in range(3):
        for j in range(3):
            for k in range(3):
                for l in range(3):
                    val = dgamma[k, i, j, l] - dgamma[l, i, j, k]
                    for m in range(3):
                        val += gamma[i, k, m] * gamma[m, j, l] - gamma[i, l, m] * gamma[m, j, k]
                    riem_up[i, j, k, l] = val
    return np.einsum("im,mjkl->ijkl", g, riem_up)


def _curvatures_from_metric(metric_fn, q, h):
    g = metric_fn(q)
    riem = _riemann_lowered(metric_fn, q, h)
    planes = ((0, 1), (0, 2), (1, 2))
    sectionals = []
    for a, b in planes:
        area2 = g[a, a] * g[b, b] - g[a, b] ** 2
        sectionals.append(riem[a, b, a, b] / area2)
    ginv = np.linalg.inv(g)
    ricci = np.einsum("ik,jl,ijkl->", ginv, ginv, riem)
    return tuple(sectionals), float(ricci)


def _cartesian_metric_fn(spec: SystemSpec):
    denom = conformal_denominator_fn(spec)
    return lambda q: denom(q[0], q[1], q[2]) * np.eye(3)


def _spherical_metric_fn(kappa: float):
    def fn(q):
        r, theta, _phi = q
        factor = 1.0 - kappa / r
        return factor * np.diag([1.0, r * r, r * r * math.sin(theta) ** 2])

    return fn


def to_spherical(position):
    x, y, z = position
    r = math.sqrt(x * x + y * y + z * z)
    theta = math.acos(z / r)
    phi = math.atan2(y, x)
    return np.array([r, theta, phi])


def numeric_curvature_oracle(spec: SystemSpec, position, h: float = FD_STEP):
    """Sectional curvatures and Ricci scalar from finite differences of the metric."""
    position = _check_position(spec, position, margin=1e-3)
    if spec.family is Family.KEPLER:
        q = to_spherical(position)
        # keep theta away from the poles where the spherical chart degenerates
        if min(q[1], math.pi - q[1]) < 1e-2:
            raise DomainError("position too close to the polar axis for the spherical chart")
        return _curvatures_from_metric(_spherical_metric_fn(spec.deform), q, h)
    return _curvatures_from_metric(_cartesian_metric_fn(spec), np.asarray(position, dtype=float), h)
