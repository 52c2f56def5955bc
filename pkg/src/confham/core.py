"""Phase-space points, system parameters and the four Hamiltonian families.

Every evaluator returned here is generic in its six scalar arguments: it
accepts plain floats, numpy arrays, or dual numbers, which is what makes the
gradient and bracket machinery in :mod:`confham.dual` work without any
per-family differentiation code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import DomainError, SamplingError


class Family(str, Enum):
    OSC_LINEAR = "osc_linear"
    OSC_INVERSE_SQ = "osc_inverse_sq"
    OSC_112 = "osc_112"
    KEPLER = "kepler"


@dataclass(frozen=True)
class PhasePoint:
    """A point in 6-dimensional phase space (positions and momenta)."""

    x: float
    y: float
    z: float
    px: float
    py: float
    pz: float

    def __post_init__(self):
        for name in ("x", "y", "z", "px", "py", "pz"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"phase point component {name} is not finite")

    def as_tuple(self):
        return (self.x, self.y, self.z, self.px, self.py, self.pz)

    def as_array(self):
        return np.array(self.as_tuple(), dtype=float)

    @staticmethod
    def from_array(a) -> "PhasePoint":
        a = np.asarray(a, dtype=float)
        return PhasePoint(*(float(v) for v in a))

    @property
    def r2(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    def flip_momenta(self) -> "PhasePoint":
        return PhasePoint(self.x, self.y, self.z, -self.px, -self.py, -self.pz)


@dataclass(frozen=True)
class SystemSpec:
    """Family identifier plus couplings defining one Hamiltonian.

    ``deform`` is the conformal deformation parameter; it multiplies r^2 for
    the two isotropic-oscillator families, x^2+y^2+4z^2 for the 1:1:2
    oscillator, and enters as 1 - deform/r for the Kepler family.
    """

    family: Family
    k1: float = 0.0
    k2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0
    deform: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))

    @property
    def ks(self):
        return (self.k1, self.k2, self.k3, self.k4)

    def undeformed(self) -> "SystemSpec":
        return replace(self, deform=0.0)

    def inverse_square_axes(self):
        """Indices (0=x, 1=y, 2=z) whose inverse-square barrier is present.

        Only axes with a nonzero coupling count: with k_j = 0 the barrier
        term drops out of the Hamiltonian and the plane is not singular.
        """
        if self.family is Family.OSC_LINEAR:
            return ()
        ks = (self.k2, self.k3, self.k4)
        return tuple(i for i in range(3) if ks[i] != 0.0)


@dataclass(frozen=True)
class DomainSample:
    """A sampled phase point kept at least ``margin`` away from singular sets."""

    point: PhasePoint
    margin: float

    def __post_init__(self):
        if self.margin <= 0.0:
            raise ValueError("margin must be positive")


def conformal_denominator_fn(spec: SystemSpec):
    """Generic evaluator for the denominator of the conformal multiplier."""
    lam = spec.deform
    if spec.family in (Family.OSC_LINEAR, Family.OSC_INVERSE_SQ):
        return lambda x, y, z: 1.0 - lam * (x * x + y * y + z * z)
    if spec.family is Family.OSC_112:
        return lambda x, y, z: 1.0 - lam * (x * x + y * y + 4.0 * z * z)
    # Kepler: 1 - kappa/r
    from .dual import sqrt  # local import to avoid a cycle at module load

    return lambda x, y, z: 1.0 - lam / sqrt(x * x + y * y + z * z)


def mu_fn(spec: SystemSpec):
    """Generic evaluator for the conformal multiplier mu = 1/denominator."""
    denom = conformal_denominator_fn(spec)
    return lambda x, y, z: 1.0 / denom(x, y, z)


def mu(spec: SystemSpec, point: PhasePoint) -> float:
    """Conformal multiplier at ``point``; strictly positive inside the domain."""
    d = conformal_denominator_fn(spec)(point.x, point.y, point.z)
    if d <= 0.0:
        raise DomainError(
            f"conformal denominator {d:.6g} <= 0 for {spec.family.value} "
            f"with deform={spec.deform}"
        )
    return 1.0 / d


def in_domain(spec: SystemSpec, point: PhasePoint, margin: float = 0.0) -> bool:
    """True iff ``point`` keeps distance > ``margin`` from every singular set."""
    if margin < 0.0:
        raise ValueError("margin must be >= 0")
    pos = (point.x, point.y, point.z)
    r = math.sqrt(point.r2)
    if spec.family is Family.KEPLER:
        # k1/r and the multiplier itself are singular at the origin.
        if r <= margin:
            return False
    d = conformal_denominator_fn(spec)(point.x, point.y, point.z)
    if not d > margin:
        return False
    for i in spec.inverse_square_axes():
        if not abs(pos[i]) > margin:
            return False
    return True


def euclid_hamiltonian_fn(spec: SystemSpec):
    """Generic evaluator for the undeformed (flat-metric) Hamiltonian."""
    from .dual import sqrt

    k1, k2, k3, k4 = spec.ks
    family = spec.family

    def potential(x, y, z):
        if family is Family.OSC_LINEAR:
            v = k1 * (x * x + y * y + z * z)
            if k2 != 0.0:
                v = v + k2 * x
            if k3 != 0.0:
                v = v + k3 * y
            if k4 != 0.0:
                v = v + k4 * z
            return v
        if family is Family.KEPLER:
            v = k1 / sqrt(x * x + y * y + z * z)
        elif family is Family.OSC_112:
            v = k1 * (x * x + y * y + 4.0 * z * z)
        else:  # OSC_INVERSE_SQ
            v = k1 * (x * x + y * y + z * z)
        if k2 != 0.0:
            v = v + k2 / (x * x)
        if k3 != 0.0:
            v = v + k3 / (y * y)
        if k4 != 0.0:
            v = v + k4 / (z * z)
        return v

    def h(x, y, z, px, py, pz):
        return 0.5 * (px * px + py * py + pz * pz) + potential(x, y, z)

    return h


def hamiltonian_fn(spec: SystemSpec):
    """Generic evaluator for the conformally deformed Hamiltonian mu * H."""
    h0 = euclid_hamiltonian_fn(spec)
    if spec.deform == 0.0:
        # mu is identically 1: return the flat form exactly.
        return h0
    m = mu_fn(spec)

    def h(x, y, z, px, py, pz):
        return m(x, y, z) * h0(x, y, z, px, py, pz)

    return h


def hamiltonian(spec: SystemSpec, point: PhasePoint) -> float:
    """Value of the deformed Hamiltonian at ``point``.

    Raises DomainError outside the family's validity domain.
    """
    if not in_domain(spec, point, 0.0):
        raise DomainError(
            f"point {point.as_tuple()} outside the domain of {spec.family.value}"
        )
    return float(hamiltonian_fn(spec)(*point.as_tuple()))


# ---------------------------------------------------------------------------
# Rejection sampling away from singular sets


DEFAULT_MARGIN = 0.05
_MAX_REJECTS = 10_000


def _position_box(spec: SystemSpec) -> float:
    lam = spec.deform
    if spec.family in (Family.OSC_LINEAR, Family.OSC_INVERSE_SQ, Family.OSC_112):
        if lam > 0.0:
            return 0.9 / math.sqrt(lam)
    return 3.0


def sample_domain(
    spec: SystemSpec,
    n: int,
    rng: np.random.Generator,
    margin: float = DEFAULT_MARGIN,
    momentum_box: float = 2.0,
) -> list[DomainSample]:
    """Draw ``n`` phase points uniformly from a box, rejecting near-singular ones."""
    box = _position_box(spec)
    out = []
    rejects = 0
    while len(out) < n:
        q = rng.uniform(-box, box, size=3)
        p = rng.uniform(-momentum_box, momentum_box, size=3)
        point = PhasePoint(q[0], q[1], q[2], p[0], p[1], p[2])
        if in_domain(spec, point, margin):
            out.append(DomainSample(point, margin))
            rejects = 0
        else:
            rejects += 1
            if rejects >= _MAX_REJECTS:
                raise SamplingError(
                    f"{_MAX_REJECTS} consecutive rejections sampling "
                    f"{spec.family.value} with margin {margin}"
                )
    return out
