"""Named constants of motion for the four Hamiltonian families.

Each observable is a closed-form phase-space function; evaluators accept
floats, numpy arrays, or duals.  Names are stable snake_case identifiers and
appear verbatim in trajectory CSV columns and verification reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .core import Family, PhasePoint, SystemSpec, euclid_hamiltonian_fn, hamiltonian_fn, in_domain, mu_fn
from .errors import DomainError, FamilyMismatch, ParameterError


@dataclass(frozen=True)
class Observable:
    """A named phase-space function with its polynomial degree in momenta."""

    name: str
    family: Family
    degree: int
    evaluator: Callable

    def __call__(self, *coords):
        return self.evaluator(*coords)

    def at(self, point: PhasePoint) -> float:
        return float(self.evaluator(*point.as_tuple()))


@dataclass(frozen=True)
class ComplexObservable:
    """Real/imaginary pair whose squared modulus is itself an integral."""

    re: Observable
    im: Observable


def _require_family(spec: SystemSpec, family: Family):
    if spec.family is not family:
        raise FamilyMismatch(
            f"expected family {family.value}, got {spec.family.value}"
        )


# ---------------------------------------------------------------------------
# Angular momentum


def j1(x, y, z, px, py, pz):
    return y * pz - z * py


def j2(x, y, z, px, py, pz):
    return z * px - x * pz


def j3(x, y, z, px, py, pz):
    return x * py - y * px


_J = (j1, j2, j3)


def angular_momentum(i: int, point: PhasePoint) -> float:
    """i-th component (1-based) of the angular momentum at ``point``."""
    if i not in (1, 2, 3):
        raise ValueError("axis index must be 1, 2 or 3")
    return float(_J[i - 1](*point.as_tuple()))


# ---------------------------------------------------------------------------
# Oscillator with linear terms


def osc_linear_integrals(spec: SystemSpec) -> list[Observable]:
    """Six quadratic tensor integrals plus the linear angular-momentum combination."""
    _require_family(spec, Family.OSC_LINEAR)
    k1, k2, k3, k4 = spec.ks
    lam = spec.deform
    H = hamiltonian_fn(spec)

    def k_xx(x, y, z, px, py, pz):
        return px * px + 2.0 * (k1 * x * x + k2 * x) + 2.0 * lam * x * x * H(x, y, z, px, py, pz)

    def k_yy(x, y, z, px, py, pz):
        return py * py + 2.0 * (k1 * y * y + k3 * y) + 2.0 * lam * y * y * H(x, y, z, px, py, pz)

    def k_zz(x, y, z, px, py, pz):
        return pz * pz + 2.0 * (k1 * z * z + k4 * z) + 2.0 * lam * z * z * H(x, y, z, px, py, pz)

    def k_xy(x, y, z, px, py, pz):
        return px * py + (2.0 * k1 * x * y + k3 * x + k2 * y) + 2.0 * lam * x * y * H(x, y, z, px, py, pz)

    def k_yz(x, y, z, px, py, pz):
        return py * pz + (2.0 * k1 * y * z + k4 * y + k3 * z) + 2.0 * lam * y * z * H(x, y, z, px, py, pz)

    def k_zx(x, y, z, px, py, pz):
        return pz * px + (2.0 * k1 * z * x + k4 * x + k2 * z) + 2.0 * lam * z * x * H(x, y, z, px, py, pz)

    def i_linear(x, y, z, px, py, pz):
        return (
            k2 * j1(x, y, z, px, py, pz)
            + k3 * j2(x, y, z, px, py, pz)
            + k4 * j3(x, y, z, px, py, pz)
        )

    f = spec.family
    return [
        Observable("k_xx_lambda", f, 2, k_xx),
        Observable("k_yy_lambda", f, 2, k_yy),
        Observable("k_zz_lambda", f, 2, k_zz),
        Observable("k_xy_lambda", f, 2, k_xy),
        Observable("k_yz_lambda", f, 2, k_yz),
        Observable("k_zx_lambda", f, 2, k_zx),
        Observable("i_linear", f, 1, i_linear),
    ]


def fradkin_matrix(spec: SystemSpec, point: PhasePoint):
    """Symmetric 3x3 matrix of the quadratic tensor integrals at ``point``."""
    import numpy as np

    if not in_domain(spec, point, 0.0):
        raise DomainError(f"point {point.as_tuple()} outside domain")
    obs = {o.name: o for o in osc_linear_integrals(spec)}
    xx = obs["k_xx_lambda"].at(point)
    yy = obs["k_yy_lambda"].at(point)
    zz = obs["k_zz_lambda"].at(point)
    xy = obs["k_xy_lambda"].at(point)
    yz = obs["k_yz_lambda"].at(point)
    zx = obs["k_zx_lambda"].at(point)
    return np.array([[xx, xy, zx], [xy, yy, yz], [zx, yz, zz]])


# ---------------------------------------------------------------------------
# Caged oscillator (inverse-square barriers)


def _kj_terms(ka, kb, a, b):
    """2*ka*(b/a)^2 + 2*kb*(a/b)^2 with zero couplings skipped."""
    out = 0.0
    if ka != 0.0:
        out = out + 2.0 * ka * (b / a) ** 2
    if kb != 0.0:
        out = out + 2.0 * kb * (a / b) ** 2
    return out


def _kj_observables(spec: SystemSpec) -> list[Observable]:
    k1, k2, k3, k4 = spec.ks

    def k_j1(x, y, z, px, py, pz):
        return j1(x, y, z, px, py, pz) ** 2 + _kj_terms(k3, k4, y, z)

    def k_j2(x, y, z, px, py, pz):
        return j2(x, y, z, px, py, pz) ** 2 + _kj_terms(k2, k4, x, z)

    def k_j3(x, y, z, px, py, pz):
        return j3(x, y, z, px, py, pz) ** 2 + _kj_terms(k2, k3, x, y)

    f = spec.family
    return [
        Observable("k_j1", f, 2, k_j1),
        Observable("k_j2", f, 2, k_j2),
        Observable("k_j3", f, 2, k_j3),
    ]


def osc_inverse_sq_integrals(spec: SystemSpec) -> list[Observable]:
    """Three Cartesian quadratic integrals plus the three barrier-corrected J^2."""
    _require_family(spec, Family.OSC_INVERSE_SQ)
    k1, k2, k3, k4 = spec.ks
    lam = spec.deform
    H = hamiltonian_fn(spec)

    def _axis(k_bar, pick_q, pick_p):
        def ev(x, y, z, px, py, pz):
            q = pick_q(x, y, z)
            p = pick_p(px, py, pz)
            val = p * p + 2.0 * k1 * q * q + 2.0 * lam * q * q * H(x, y, z, px, py, pz)
            if k_bar != 0.0:
                val = val + 2.0 * k_bar / (q * q)
            return val

        return ev

    f = spec.family
    axes = [
        Observable("k_1_lambda", f, 2, _axis(k2, lambda x, y, z: x, lambda px, py, pz: px)),
        Observable("k_2_lambda", f, 2, _axis(k3, lambda x, y, z: y, lambda px, py, pz: py)),
        Observable("k_3_lambda", f, 2, _axis(k4, lambda x, y, z: z, lambda px, py, pz: pz)),
    ]
    return axes + _kj_observables(spec)


# ---------------------------------------------------------------------------
# 1:1:2 oscillator


def _dilation(x, y, z, px, py, pz):
    return x * px + y * py + z * pz


def osc112_rl_functions(spec: SystemSpec):
    """Deformed Runge-Lenz-type pair (K_RL1mu, K_RL2mu) and their z-ladder companions."""
    _require_family(spec, Family.OSC_112)
    k1, k2, k3, k4 = spec.ks
    lam = spec.deform
    H = hamiltonian_fn(spec)

    def rl1(x, y, z, px, py, pz):
        val = -px * j2(x, y, z, px, py, pz) + 2.0 * k1 * x * x * z
        if k2 != 0.0:
            val = val - 2.0 * k2 * z / (x * x)
        if lam != 0.0:
            val = val + 2.0 * lam * x * x * z * H(x, y, z, px, py, pz)
        return val

    def rl2(x, y, z, px, py, pz):
        val = py * j1(x, y, z, px, py, pz) + 2.0 * k1 * y * y * z
        if k3 != 0.0:
            val = val - 2.0 * k3 * z / (y * y)
        if lam != 0.0:
            val = val + 2.0 * lam * y * y * z * H(x, y, z, px, py, pz)
        return val

    def companion1(x, y, z, px, py, pz):
        return x * px / z

    def companion2(x, y, z, px, py, pz):
        return y * py / z

    f = spec.family
    return (
        Observable("k_rl1_mu", f, 2, rl1),
        Observable("k_rl2_mu", f, 2, rl2),
        Observable("dilation_1_over_z", f, 1, companion1),
        Observable("dilation_2_over_z", f, 1, companion2),
    )


def osc112_integrals(spec: SystemSpec):
    """Registered integrals plus the complex pair (when k4 > 0).

    Returns ``(observables, complex_pair)`` where ``complex_pair`` is a tuple
    of two ComplexObservable or None when k4 = 0 (then the two quadratic
    Runge-Lenz-type functions are registered instead of the quartics).
    """
    _require_family(spec, Family.OSC_112)
    k1, k2, k3, k4 = spec.ks
    if k4 < 0.0:
        raise ParameterError("k4 must be >= 0 for the 1:1:2 oscillator integrals")
    lam = spec.deform
    H = hamiltonian_fn(spec)
    f = spec.family

    def _axis(k_bar, stiff, pick_q, pick_p):
        def ev(x, y, z, px, py, pz):
            q = pick_q(x, y, z)
            p = pick_p(px, py, pz)
            val = p * p + stiff * k1 * q * q + stiff * lam * q * q * H(x, y, z, px, py, pz)
            if k_bar != 0.0:
                val = val + 2.0 * k_bar / (q * q)
            return val

        return ev

    k_1 = Observable("k_1_lambda", f, 2, _axis(k2, 2.0, lambda x, y, z: x, lambda px, py, pz: px))
    k_2 = Observable("k_2_lambda", f, 2, _axis(k3, 2.0, lambda x, y, z: y, lambda px, py, pz: py))
    k_3 = Observable("k_3_lambda", f, 2, _axis(k4, 8.0, lambda x, y, z: z, lambda px, py, pz: pz))
    k_j3 = next(o for o in _kj_observables(spec) if o.name == "k_j3")
    k_j3 = Observable("k_j3", f, 2, k_j3.evaluator)

    rl1, rl2, comp1, comp2 = osc112_rl_functions(spec)
    obs = [k_1, k_2, k_3, k_j3]

    if k4 == 0.0:
        # the z-barrier is absent and the quadratic pair is conserved as is
        return obs + [rl1, rl2], None

    s = math.sqrt(2.0 * k4)

    def m1_im(x, y, z, px, py, pz):
        return s * x * px / z

    def m2_im(x, y, z, px, py, pz):
        return s * y * py / z

    m1 = ComplexObservable(
        Observable("m_1_mu_re", f, 2, rl1.evaluator),
        Observable("m_1_mu_im", f, 1, m1_im),
    )
    m2 = ComplexObservable(
        Observable("m_2_mu_re", f, 2, rl2.evaluator),
        Observable("m_2_mu_im", f, 1, m2_im),
    )

    def k_5(x, y, z, px, py, pz):
        args = (x, y, z, px, py, pz)
        return m1.im.evaluator(*args) * m2.re.evaluator(*args) - m1.re.evaluator(*args) * m2.im.evaluator(*args)

    def k_6a(x, y, z, px, py, pz):
        args = (x, y, z, px, py, pz)
        return m1.re.evaluator(*args) * m2.re.evaluator(*args) + m1.im.evaluator(*args) * m2.im.evaluator(*args)

    def k_6b(x, y, z, px, py, pz):
        args = (x, y, z, px, py, pz)
        return m1.re.evaluator(*args) ** 2 + m1.im.evaluator(*args) ** 2

    def k_6c(x, y, z, px, py, pz):
        args = (x, y, z, px, py, pz)
        return m2.re.evaluator(*args) ** 2 + m2.im.evaluator(*args) ** 2

    obs += [
        Observable("k_5_lambda", f, 3, k_5),
        Observable("k_6a_lambda", f, 4, k_6a),
        Observable("k_6b_lambda", f, 4, k_6b),
        Observable("k_6c_lambda", f, 4, k_6c),
    ]
    return obs, (m1, m2)


# ---------------------------------------------------------------------------
# Kepler-related family


def kepler_rl_functions(spec: SystemSpec):
    """Deformed Runge-Lenz components W_a and their dilation companions."""
    _require_family(spec, Family.KEPLER)
    from .dual import sqrt

    k1, k2, k3, k4 = spec.ks
    kappa = spec.deform
    H0 = euclid_hamiltonian_fn(spec)

    def _r(x, y, z):
        return sqrt(x * x + y * y + z * z)

    def _potential_slope(x, y, z):
        # k1/r + 2 k2/x^2 + 2 k3/y^2 + 2 k4/z^2, zero couplings skipped
        val = k1 / _r(x, y, z)
        if k2 != 0.0:
            val = val + 2.0 * k2 / (x * x)
        if k3 != 0.0:
            val = val + 2.0 * k3 / (y * y)
        if k4 != 0.0:
            val = val + 2.0 * k4 / (z * z)
        return val

    def _w(axis):
        def ev(x, y, z, px, py, pz):
            args = (x, y, z, px, py, pz)
            if axis == 0:
                val = j2(*args) * pz - j3(*args) * py - x * _potential_slope(x, y, z)
                a = x
            elif axis == 1:
                val = j3(*args) * px - j1(*args) * pz - y * _potential_slope(x, y, z)
                a = y
            else:
                val = j1(*args) * py - j2(*args) * px - z * _potential_slope(x, y, z)
                a = z
            if kappa != 0.0:
                val = val - kappa * a / (_r(x, y, z) - kappa) * H0(*args)
            return val

        return ev

    def _companion(axis):
        def ev(x, y, z, px, py, pz):
            a = (x, y, z)[axis]
            return _dilation(x, y, z, px, py, pz) / a

        return ev

    f = spec.family
    ws = [Observable(n, f, 2, _w(i)) for i, n in enumerate(("w_x", "w_y", "w_z"))]
    comps = [
        Observable(n, f, 1, _companion(i))
        for i, n in enumerate(("dilation_over_x", "dilation_over_y", "dilation_over_z"))
    ]
    return ws, comps


def kepler_integrals(spec: SystemSpec):
    """Registered integrals plus complex pairs for axes with k_j > 0.

    Returns ``(observables, complex_by_axis)`` where ``complex_by_axis`` maps
    axis name to a ComplexObservable (axes with k_j = 0 register the quadratic
    W_a instead and are absent from the map).
    """
    _require_family(spec, Family.KEPLER)
    k1, k2, k3, k4 = spec.ks
    for name, k in (("k2", k2), ("k3", k3), ("k4", k4)):
        if k < 0.0:
            raise ParameterError(f"{name} must be >= 0 for the Kepler-related integrals")

    obs = _kj_observables(spec)
    ws, comps = kepler_rl_functions(spec)
    f = spec.family
    complex_by_axis = {}

    for axis, (w, comp, kj) in enumerate(zip(ws, comps, (k2, k3, k4))):
        axis_name = "xyz"[axis]
        if kj == 0.0:
            obs.append(w)
            continue
        s = math.sqrt(2.0 * kj)

        def _im(comp_ev=comp.evaluator, s=s):
            def ev(x, y, z, px, py, pz):
                return s * comp_ev(x, y, z, px, py, pz)

            return ev

        pair = ComplexObservable(
            Observable(f"m_{axis_name}_mu_re", f, 2, w.evaluator),
            Observable(f"m_{axis_name}_mu_im", f, 1, _im()),
        )
        complex_by_axis[axis_name] = pair

        def _quartic(w_ev=w.evaluator, im_ev=pair.im.evaluator):
            def ev(x, y, z, px, py, pz):
                return w_ev(x, y, z, px, py, pz) ** 2 + im_ev(x, y, z, px, py, pz) ** 2

            return ev

        obs.append(Observable(f"k_4{axis_name}_mu", f, 4, _quartic()))

    return obs, complex_by_axis


# ---------------------------------------------------------------------------
# Catalog and ladder residuals


def catalog(spec: SystemSpec) -> list[Observable]:
    """Every registered constant of motion of ``spec``'s family."""
    if spec.family is Family.OSC_LINEAR:
        return osc_linear_integrals(spec)
    if spec.family is Family.OSC_INVERSE_SQ:
        return osc_inverse_sq_integrals(spec)
    if spec.family is Family.OSC_112:
        return osc112_integrals(spec)[0]
    return kepler_integrals(spec)[0]


def complex_pairs(spec: SystemSpec) -> dict[str, ComplexObservable]:
    """ComplexObservable pairs of the family, keyed by a short label."""
    if spec.family is Family.OSC_112:
        pair = osc112_integrals(spec)[1]
        if pair is None:
            return {}
        return {"m_1_mu": pair[0], "m_2_mu": pair[1]}
    if spec.family is Family.KEPLER:
        return {f"m_{a}_mu": p for a, p in kepler_integrals(spec)[1].items()}
    return {}


def bracket_chain_residuals(spec: SystemSpec, point: PhasePoint):
    """Absolute residuals of the ladder relations tying the Runge-Lenz-type
    functions to their dilation companions via brackets with H."""
    from .dual import poisson_bracket

    if not in_domain(spec, point, 0.0):
        raise DomainError(f"point {point.as_tuple()} outside domain")
    H = hamiltonian_fn(spec)
    args = point.as_tuple()
    out = []

    if spec.family is Family.OSC_112:
        k4 = spec.k4
        m = mu_fn(spec)
        lam_mu = float(m(point.x, point.y, point.z)) / point.z**2
        rl1, rl2, comp1, comp2 = osc112_rl_functions(spec)
        for rl, comp in ((rl1, comp1), (rl2, comp2)):
            lhs = poisson_bracket(rl.evaluator, H, point)
            rhs = 2.0 * k4 * lam_mu * comp.at(point)
            out.append((f"{rl.name}_bracket", abs(lhs - rhs)))
            lhs = poisson_bracket(comp.evaluator, H, point)
            out.append((f"{comp.name}_bracket", abs(lhs + lam_mu * rl.at(point))))
        return out

    if spec.family is Family.KEPLER:
        r = math.sqrt(point.r2)
        mu_val = r / (r - spec.deform)
        ws, comps = kepler_rl_functions(spec)
        for axis, (w, comp, kj) in enumerate(zip(ws, comps, (spec.k2, spec.k3, spec.k4))):
            a = (point.x, point.y, point.z)[axis]
            lam_amu = mu_val / a**2
            lhs = poisson_bracket(w.evaluator, H, point)
            rhs = 2.0 * kj * lam_amu * comp.at(point)
            out.append((f"{w.name}_bracket", abs(lhs - rhs)))
            lhs = poisson_bracket(comp.evaluator, H, point)
            out.append((f"{comp.name}_bracket", abs(lhs + lam_amu * w.at(point))))
        return out

    return out
