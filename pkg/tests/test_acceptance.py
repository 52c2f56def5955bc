"""End-to-end acceptance gate.

Each test covers one numbered claim and prints a single pass/fail line, so a
plain ``pytest -v tests/test_acceptance.py`` run doubles as a checklist.
"""

import math
import time

import numpy as np
import pytest

from confham.core import Family, PhasePoint, SystemSpec, hamiltonian
from confham.dynamics import IntegratorConfig, Termination, drift_report, integrate
from confham.geometry import ricci_scalar, sectional_curvatures
from confham.observables import catalog, osc112_integrals, osc112_rl_functions
from confham.verify import (
    VerifyConfig,
    _curvature_deviation,
    check_brackets,
    check_identities,
    check_negative_controls,
    hamiltonian_observable,
    independence_rank,
    independence_witness_set,
)

from conftest import make_spec, sample_points

OSCILLATORS = (Family.OSC_LINEAR, Family.OSC_INVERSE_SQ, Family.OSC_112)

# one representative deformed spec per family for the per-family criteria
CANONICAL = [make_spec(f, 0.4 if f is Family.KEPLER else 0.05) for f in Family]


def deforms_for(family):
    return (-0.3, -0.05, 0.4 if family is Family.KEPLER else 0.05)


def report(criterion, description, ok):
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {description}")
    assert ok, f"criterion {criterion} failed: {description}"


def test_criterion_1_bracket_vanishing():
    start = time.monotonic()
    worst = 0.0
    for family in Family:
        for deform in deforms_for(family):
            spec = make_spec(family, deform)
            for name, (mx, _) in check_brackets(spec, n_samples=100, seed=0).items():
                worst = max(worst, mx)
    elapsed = time.monotonic() - start
    report(
        1,
        f"scaled bracket residuals <= 1e-9 at 100 points x 12 specs "
        f"(worst {worst:.2e}, {elapsed:.1f}s < 10s)",
        worst <= 1e-9 and elapsed < 10.0,
    )


def test_criterion_2_maximal_superintegrability():
    ok = True
    detail = []
    for spec in CANONICAL:
        subset = independence_witness_set(spec)
        best = max(
            independence_rank(spec, subset, p)[0]
            for p in sample_points(spec, 5, seed=3)
        )
        detail.append(f"{spec.family.value}={best}")
        ok &= best == 5

    # dependent sets must come out exactly as degenerate as claimed
    osc = make_spec(Family.OSC_LINEAR, 0.05)
    cat = {o.name: o for o in catalog(osc)}
    diag = [hamiltonian_observable(osc)] + [
        cat[n] for n in ("k_xx_lambda", "k_yy_lambda", "k_zz_lambda")
    ]
    diag_ranks = {independence_rank(osc, diag, p)[0] for p in sample_points(osc, 5, seed=4)}
    ok &= diag_ranks == {3}

    flat112 = SystemSpec(Family.OSC_112, 1.0, 0.2, 0.3, 0.4, 0.0)
    cat = {o.name: o for o in catalog(flat112)}
    quintet = [cat[n] for n in ("k_1_lambda", "k_2_lambda", "k_3_lambda", "k_j3", "k_5_lambda")]
    quintet_best = max(
        independence_rank(flat112, quintet, p)[0] for p in sample_points(flat112, 5, seed=5)
    )
    ok &= quintet_best == 4

    report(
        2,
        f"witness rank 5 ({', '.join(detail)}); degenerate sets rank "
        f"{sorted(diag_ranks)[0]} and {quintet_best}",
        ok,
    )


def test_criterion_3_algebraic_identities():
    worst = 0.0
    for spec in CANONICAL:
        for res in check_identities(spec, n_samples=100, seed=1).values():
            worst = max(worst, res)
    report(3, f"identity residuals <= 1e-8 x scale at 100 points (worst {worst:.2e})", worst <= 1e-8)


def test_criterion_4_conservation_under_flow():
    worst = 0.0
    ok = True
    for spec in CANONICAL:
        initial = sample_points(spec, 1, seed=6, margin=0.25)[0]
        traj = integrate(
            spec, initial, IntegratorConfig(t_end=10.0, rel_tol=1e-10, abs_tol=1e-10), catalog(spec)
        )
        ok &= traj.termination is Termination.COMPLETED
        worst = max(worst, max(rel for _, rel in drift_report(traj).values()))
    ok &= worst <= 1e-6

    harmonic = SystemSpec(Family.OSC_LINEAR, k1=1.0)
    period = 2.0 * math.pi / math.sqrt(2.0)
    traj = integrate(harmonic, PhasePoint(1, 0, 0, 0, 0, 0), IntegratorConfig(t_end=period))
    period_err = max(abs(traj.states[-1].x - 1.0), abs(traj.states[-1].px))
    ok &= period_err <= 1e-6

    report(
        4,
        f"drift <= 1e-6 over t_end=10 (worst {worst:.2e}); harmonic period error {period_err:.2e}",
        ok,
    )


def test_criterion_5_curvature():
    ok = True
    worst = 0.0
    for spec in CANONICAL:
        dev = _curvature_deviation(spec, VerifyConfig(curvature_points=50))
        worst = max(worst, dev)
        for p in sample_points(spec, 20, seed=7):
            pos = (p.x, p.y, p.z)
            cs = sectional_curvatures(spec, pos)
            ric = ricci_scalar(spec, pos)
            ok &= abs(ric - 2.0 * sum(cs)) <= 1e-12 * (1.0 + abs(ric))
            if spec.family is Family.KEPLER:
                ok &= ric >= 0.0
            else:
                ok &= np.sign(ric) == np.sign(spec.deform)
    # negative deform oscillators must flip the sign too
    for family in OSCILLATORS:
        neg = make_spec(family, -0.3)
        p = sample_points(neg, 1, seed=8)[0]
        ok &= ricci_scalar(neg, (p.x, p.y, p.z)) < 0.0
    ok &= worst <= 1e-5
    report(
        5,
        f"FD oracle within 1e-5 at 50 points/family (worst {worst:.2e}); "
        "Ricci = 2*sum(sectionals); curvature signs as claimed",
        ok,
    )


def test_criterion_6_limits():
    ok = True

    # exact reduction at deform = 0
    worst_flat = 0.0
    for spec in CANONICAL:
        flat = spec.undeformed()
        euclid = {o.name: o for o in catalog(flat)}
        for p in sample_points(flat, 20, seed=9):
            for name, o in euclid.items():
                # deformed closures evaluated at deform=0 must agree with the
                # flat-spec construction exactly
                rebuilt = SystemSpec(spec.family, *spec.ks, deform=0.0)
                other = next(x for x in catalog(rebuilt) if x.name == name)
                scale = 1.0 + abs(o.at(p))
                worst_flat = max(worst_flat, abs(o.at(p) - other.at(p)) / scale)
    ok &= worst_flat <= 1e-12

    # O(eps) approach to the flat values
    for spec in CANONICAL:
        flat = spec.undeformed()
        p = sample_points(flat, 1, seed=10)[0]
        gaps = {}
        for eps in (1e-3, 1e-6):
            spec_eps = SystemSpec(spec.family, *spec.ks, deform=eps)
            gaps[eps] = abs(hamiltonian(spec_eps, p) - hamiltonian(flat, p))
        ok &= gaps[1e-6] <= 2e-3 * gaps[1e-3] + 1e-15

    # k4 -> 0: the quartic collapses onto the squared quadratic, O(k4)
    p = PhasePoint(0.6, 0.8, 0.5, 0.3, -0.7, 0.9)
    base = SystemSpec(Family.OSC_112, 1.0, 0.2, 0.3, 0.0, 0.05)
    target = osc112_rl_functions(base)[0].at(p) ** 2
    gaps = {}
    for k4 in (1e-3, 1e-6):
        spec = SystemSpec(Family.OSC_112, 1.0, 0.2, 0.3, k4, 0.05)
        k_6b = next(o for o in osc112_integrals(spec)[0] if o.name == "k_6b_lambda")
        gaps[k4] = abs(k_6b.at(p) - target)
    ok &= gaps[1e-6] <= 2e-3 * gaps[1e-3]

    report(
        6,
        f"deform=0 reduction exact to 1e-12 (worst {worst_flat:.2e}); "
        "O(eps) scaling and O(k4) quartic limit confirmed",
        ok,
    )


def test_criterion_7_negative_controls():
    worst_name, worst_frac = None, 1.0
    for spec in CANONICAL:
        for name, frac in check_negative_controls(spec, n_samples=100, seed=2).items():
            if frac < worst_frac:
                worst_name, worst_frac = f"{spec.family.value}/{name}", frac
    report(
        7,
        f"10% coupling mutations break conservation at >= 95% of points "
        f"(weakest {worst_name}: {worst_frac:.0%})",
        worst_frac >= 0.95,
    )
