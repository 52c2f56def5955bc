"""Forward-mode dual scalars and the gradient/Poisson-bracket machinery.

A :class:`Dual` carries a value and its six partial derivatives with respect
to (x, y, z, px, py, pz).  Values may be scalars or numpy arrays, so a single
evaluation of a phase-space function on seeded duals yields the gradient at
one point or at a whole batch of points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PhasePoint, SystemSpec, hamiltonian_fn, in_domain
from .errors import DomainError

N_VARS = 6


class Dual:
    """Value plus 6-vector of partial derivatives, with exact arithmetic."""

    __slots__ = ("val", "eps")

    def __init__(self, val, eps):
        self.val = np.asarray(val, dtype=float)
        self.eps = np.asarray(eps, dtype=float)

    # -- helpers -----------------------------------------------------------

    @staticmethod
    def _parts(other):
        if isinstance(other, Dual):
            return other.val, other.eps
        return np.asarray(other, dtype=float), None

    def __repr__(self):
        return f"Dual({self.val!r}, {self.eps!r})"

    # -- arithmetic --------------------------------------------------------

    def __neg__(self):
        return Dual(-self.val, -self.eps)

    def __add__(self, other):
        v, e = self._parts(other)
        return Dual(self.val + v, self.eps if e is None else self.eps + e)

    __radd__ = __add__

    def __sub__(self, other):
        v, e = self._parts(other)
        return Dual(self.val - v, self.eps if e is None else self.eps - e)

    def __rsub__(self, other):
        v, _ = self._parts(other)
        return Dual(v - self.val, -self.eps)

    def __mul__(self, other):
        v, e = self._parts(other)
        if e is None:
            return Dual(self.val * v, v[..., None] * self.eps)
        return Dual(
            self.val * v,
            self.val[..., None] * e + v[..., None] * self.eps,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        v, e = self._parts(other)
        if np.any(v == 0.0):
            raise ZeroDivisionError("dual division by zero value part")
        inv = 1.0 / v
        if e is None:
            return Dual(self.val * inv, inv[..., None] * self.eps)
        val = self.val * inv
        return Dual(val, inv[..., None] * (self.eps - val[..., None] * e))

    def __rtruediv__(self, other):
        v, _ = self._parts(other)
        if np.any(self.val == 0.0):
            raise ZeroDivisionError("dual division by zero value part")
        val = v / self.val
        return Dual(val, (-val / self.val)[..., None] * self.eps)

    def __pow__(self, n):
        if not isinstance(n, (int, float)):
            return NotImplemented
        if n != int(n) or n < 0:
            if np.any(self.val <= 0.0):
                raise ValueError("dual power needs a positive value part")
        val = self.val**n
        return Dual(val, (n * self.val ** (n - 1))[..., None] * self.eps)


def sqrt(u):
    """Square root usable on floats, numpy arrays, or duals."""
    if isinstance(u, Dual):
        if np.any(u.val <= 0.0):
            raise ValueError("dual sqrt needs a positive value part")
        root = np.sqrt(u.val)
        return Dual(root, (0.5 / root)[..., None] * u.eps)
    return np.sqrt(u)


def seed(coords):
    """Seed six dual variables from scalar or array coordinates."""
    coords = [np.asarray(c, dtype=float) for c in coords]
    duals = []
    for i, c in enumerate(coords):
        eps = np.zeros(c.shape + (N_VARS,))
        eps[..., i] = 1.0
        duals.append(Dual(c, eps))
    return duals


@dataclass(frozen=True)
class GradientVector:
    """Phase-space gradient split into position and momentum parts."""

    dq: np.ndarray
    dp: np.ndarray

    def as_array(self):
        return np.concatenate([self.dq, self.dp])


def gradient(f, point: PhasePoint) -> GradientVector:
    """Exact forward-mode gradient of ``f`` at ``point``."""
    out = f(*seed(point.as_tuple()))
    if not isinstance(out, Dual):  # constant function
        g = np.zeros(N_VARS)
    else:
        g = np.asarray(out.eps, dtype=float)
    if not np.all(np.isfinite(g)):
        raise DomainError(f"non-finite gradient at {point.as_tuple()}")
    return GradientVector(g[:3].copy(), g[3:].copy())


def value_and_gradients(f, coords: np.ndarray):
    """Batched evaluation: coords has shape (n, 6); returns (values, grads)."""
    coords = np.asarray(coords, dtype=float)
    out = f(*seed([coords[:, i] for i in range(N_VARS)]))
    if not isinstance(out, Dual):
        vals = np.broadcast_to(np.asarray(out, dtype=float), coords.shape[:1])
        return vals.copy(), np.zeros_like(coords)
    vals = np.broadcast_to(out.val, coords.shape[:1]).copy()
    grads = np.broadcast_to(out.eps, coords.shape).copy()
    return vals, grads


def bracket_from_gradients(gf: np.ndarray, gg: np.ndarray):
    """Canonical bracket from stacked (..., 6) gradient arrays."""
    return np.sum(gf[..., :3] * gg[..., 3:] - gf[..., 3:] * gg[..., :3], axis=-1)


def poisson_bracket(f, g, point: PhasePoint) -> float:
    """Canonical Poisson bracket {f, g} evaluated at ``point``."""
    gf = gradient(f, point)
    gg = gradient(g, point)
    return float(np.dot(gf.dq, gg.dp) - np.dot(gf.dp, gg.dq))


def hamiltonian_vector_field(spec: SystemSpec, point: PhasePoint) -> np.ndarray:
    """(dH/dp, -dH/dq) at ``point``; the right-hand side of Hamilton's equations."""
    if not in_domain(spec, point, 0.0):
        raise DomainError(
            f"point {point.as_tuple()} outside the domain of {spec.family.value}"
        )
    g = gradient(hamiltonian_fn(spec), point)
    return np.concatenate([g.dp, -g.dq])
