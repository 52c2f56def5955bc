"""Full verification suite: bracket residuals, functional independence,
algebraic identities, conservation drift, and curvature cross-checks."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import Family, PhasePoint, SystemSpec, hamiltonian_fn, sample_domain
from .dual import bracket_from_gradients, gradient, value_and_gradients
from .dynamics import IntegratorConfig, Termination, drift_report, integrate
from .errors import ConfhamError, DomainError, ParameterError, SamplingError
from .geometry import numeric_curvature_oracle, ricci_scalar, sectional_curvatures
from .observables import Observable, catalog, complex_pairs

RANK_THRESHOLD = 1e-8


@dataclass(frozen=True)
class VerifyConfig:
    n_samples: int = 100
    seed: int = 0
    bracket_tol: float = 1e-9
    identity_tol: float = 1e-8
    drift_tol: float = 1e-6
    curvature_tol: float = 1e-5
    curvature_points: int = 50
    n_witness: int = 5
    expected_rank: int = 5
    t_end: float = 10.0
    rel_tol: float = 1e-10


@dataclass
class VerificationReport:
    spec: SystemSpec
    sample_count: int
    bracket_residuals: dict[str, tuple[float, float]] = field(default_factory=dict)
    identity_residuals: dict[str, float] = field(default_factory=dict)
    independence: dict | None = None
    drift: dict[str, float] = field(default_factory=dict)
    curvature_check: float | None = None
    errors: list[str] = field(default_factory=list)
    passed: bool = False

    def to_json_dict(self) -> dict:
        indep = None
        if self.independence is not None:
            indep = {
                "rank": self.independence["rank"],
                "singular_values": list(self.independence["singular_values"]),
                "witness_point": list(self.independence["witness_point"].as_tuple()),
            }
        return {
            "spec": {
                "family": self.spec.family.value,
                "k1": self.spec.k1,
                "k2": self.spec.k2,
                "k3": self.spec.k3,
                "k4": self.spec.k4,
                "deform": self.spec.deform,
            },
            "sample_count": self.sample_count,
            "bracket_residuals": {
                k: {"max": v[0], "mean": v[1]} for k, v in self.bracket_residuals.items()
            },
            "identity_residuals": dict(self.identity_residuals),
            "independence": indep,
            "drift": dict(self.drift),
            "curvature_check": self.curvature_check,
            "errors": list(self.errors),
            "passed": self.passed,
        }


def _sample_coords(spec, n, seed, margin=0.05):
    rng = np.random.default_rng(seed)
    samples = sample_domain(spec, n, rng, margin=margin)
    return np.array([s.point.as_array() for s in samples])


def scaled_bracket_residuals(spec: SystemSpec, observable: Observable, coords: np.ndarray):
    """|{K, H}| / (1 + |K| + |H|) at each row of ``coords`` (batched)."""
    h_vals, h_grads = value_and_gradients(hamiltonian_fn(spec), coords)
    return _scaled_residuals(observable, h_vals, h_grads, coords)


def _scaled_residuals(observable, h_vals, h_grads, coords):
    k_vals, k_grads = value_and_gradients(observable.evaluator, coords)
    brackets = bracket_from_gradients(k_grads, h_grads)
    return np.abs(brackets) / (1.0 + np.abs(k_vals) + np.abs(h_vals))


def check_brackets(
    spec: SystemSpec,
    n_samples: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
) -> dict[str, tuple[float, float]]:
    """Max/mean scale-normalized bracket residual per registered integral."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    coords = _sample_coords(spec, n_samples, seed)
    h_vals, h_grads = value_and_gradients(hamiltonian_fn(spec), coords)
    out = {}
    for o in sorted(catalog(spec), key=lambda o: o.name):
        res = _scaled_residuals(o, h_vals, h_grads, coords)
        out[o.name] = (float(np.max(res)), float(np.mean(res)))
    return out


def independence_rank(spec: SystemSpec, observables: list[Observable], point: PhasePoint):
    """Numerical rank of the stacked gradient matrix at ``point``."""
    rows = [gradient(o.evaluator, point).as_array() for o in observables]
    sv = np.linalg.svd(np.array(rows), compute_uv=False)
    rank = int(np.sum(sv > RANK_THRESHOLD * sv[0]))
    return rank, sv


def hamiltonian_observable(spec: SystemSpec) -> Observable:
    return Observable("H", spec.family, 2, hamiltonian_fn(spec))


def independence_witness_set(spec: SystemSpec) -> list[Observable]:
    """A 5-observable subset, including H, expected to have full rank."""
    cat = {o.name: o for o in catalog(spec)}
    H = hamiltonian_observable(spec)
    if spec.family is Family.OSC_LINEAR:
        names = ["k_xx_lambda", "k_yy_lambda", "k_xy_lambda", "k_yz_lambda"]
    elif spec.family is Family.OSC_INVERSE_SQ:
        names = ["k_1_lambda", "k_2_lambda", "k_j1", "k_j2"]
    elif spec.family is Family.OSC_112:
        quartic = "k_6b_lambda" if "k_6b_lambda" in cat else "k_rl1_mu"
        names = ["k_1_lambda", "k_2_lambda", "k_j3", quartic]
    else:
        names = ["k_j1", "k_j2"]
        names += [n for n in ("k_4x_mu", "w_x", "k_4y_mu", "w_y") if n in cat][:2]
    return [H] + [cat[n] for n in names]


def _identity_entries(spec: SystemSpec, coords: np.ndarray):
    """(name, residual array, scale array) triples for the family's identities."""
    cols = [coords[:, i] for i in range(6)]
    x, y, z, px, py, pz = cols
    H = hamiltonian_fn(spec)
    h_vals = np.asarray(H(*cols), dtype=float)
    cat = {o.name: o for o in catalog(spec)}
    entries = []

    def add(name, lhs, rhs):
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        entries.append((name, np.abs(lhs - rhs), 1.0 + np.abs(lhs) + np.abs(rhs)))

    def bracket(f, g):
        _, gf = value_and_gradients(f, coords)
        _, gg = value_and_gradients(g, coords)
        return bracket_from_gradients(gf, gg)

    if spec.family is Family.OSC_LINEAR:
        k1, k2, k3, k4 = spec.ks
        lam = spec.deform
        K = {n: np.asarray(cat[f"k_{n}_lambda"].evaluator(*cols), dtype=float)
             for n in ("xx", "yy", "zz", "xy", "yz", "zx")}
        J1, J2, J3 = y * pz - z * py, z * px - x * pz, x * py - y * px
        I = k2 * J1 + k3 * J2 + k4 * J3
        dil = x * px + y * py + z * pz
        r2 = x * x + y * y + z * z
        add("trace", K["xx"] + K["yy"] + K["zz"], 2.0 * h_vals)
        # matrix-times-angular-momentum identity, componentwise
        add("matrix_j_x", K["xx"] * J1 + K["xy"] * J2 + K["zx"] * J3, I * x)
        add("matrix_j_y", K["xy"] * J1 + K["yy"] * J2 + K["yz"] * J3, I * y)
        add("matrix_j_z", K["zx"] * J1 + K["yz"] * J2 + K["zz"] * J3, I * z)
        add("plane_xy", x * x * K["yy"] - 2 * x * y * K["xy"] + y * y * K["xx"], J3**2)
        add("plane_yz", y * y * K["zz"] - 2 * y * z * K["yz"] + z * z * K["yy"], J1**2)
        add("plane_zx", z * z * K["xx"] - 2 * z * x * K["zx"] + x * x * K["zz"], J2**2)
        add(
            "minor_xy",
            K["xx"] * K["yy"] - K["xy"] ** 2,
            2 * J3**2 * (lam * h_vals + k1) - 2 * (k3 * px - k2 * py) * J3 - (k3 * x - k2 * y) ** 2,
        )
        add(
            "minor_yz",
            K["yy"] * K["zz"] - K["yz"] ** 2,
            2 * J1**2 * (lam * h_vals + k1) - 2 * (k4 * py - k3 * pz) * J1 - (k4 * y - k3 * z) ** 2,
        )
        qKq = (
            K["xx"] * x * x + K["yy"] * y * y + K["zz"] * z * z
            + 2 * (K["xy"] * x * y + K["yz"] * y * z + K["zx"] * z * x)
        )
        add("contract_qq", qKq, 2 * r2 * h_vals - (J1**2 + J2**2 + J3**2))
        qKp = (
            K["xx"] * x * px + K["yy"] * y * py + K["zz"] * z * pz
            + K["xy"] * (x * py + y * px) + K["yz"] * (y * pz + z * py) + K["zx"] * (z * px + x * pz)
        )
        add(
            "contract_qp",
            qKp,
            2 * dil * h_vals
            + ((k3 * x - k2 * y) * J3 + (k4 * y - k3 * z) * J1 + (k2 * z - k4 * x) * J2),
        )
        pKp = (
            K["xx"] * px * px + K["yy"] * py * py + K["zz"] * pz * pz
            + 2 * (K["xy"] * px * py + K["yz"] * py * pz + K["zx"] * pz * px)
        )
        p2 = px * px + py * py + pz * pz
        add(
            "contract_pp",
            pKp,
            p2**2 + 2 * dil**2 * (lam * h_vals + k1) + 2 * (k2 * px + k3 * py + k4 * pz) * dil,
        )
        return entries

    if spec.family is Family.OSC_INVERSE_SQ:
        K1 = np.asarray(cat["k_1_lambda"].evaluator(*cols), dtype=float)
        K2 = np.asarray(cat["k_2_lambda"].evaluator(*cols), dtype=float)
        K3 = np.asarray(cat["k_3_lambda"].evaluator(*cols), dtype=float)
        add("trace", K1 + K2 + K3, 2.0 * h_vals)

        def kj23(*a):
            return cat["k_j2"].evaluator(*a) + cat["k_j3"].evaluator(*a)

        add("kj_commute", bracket(cat["k_j1"].evaluator, kj23), 0.0)
        return entries

    if spec.family is Family.OSC_112:
        K1 = np.asarray(cat["k_1_lambda"].evaluator(*cols), dtype=float)
        K2 = np.asarray(cat["k_2_lambda"].evaluator(*cols), dtype=float)
        K3 = np.asarray(cat["k_3_lambda"].evaluator(*cols), dtype=float)
        add("trace", K1 + K2 + K3, 2.0 * h_vals)
        pairs = complex_pairs(spec)
        if pairs:
            k5 = np.asarray(cat["k_5_lambda"].evaluator(*cols), dtype=float)
            k6a = np.asarray(cat["k_6a_lambda"].evaluator(*cols), dtype=float)
            k6b = np.asarray(cat["k_6b_lambda"].evaluator(*cols), dtype=float)
            k6c = np.asarray(cat["k_6c_lambda"].evaluator(*cols), dtype=float)
            add("det_quartic", k6b * k6c - k6a**2, k5**2)
            for label, pair in sorted(pairs.items()):
                re = np.asarray(pair.re.evaluator(*cols), dtype=float)
                im = np.asarray(pair.im.evaluator(*cols), dtype=float)
                which = "k_6b_lambda" if label == "m_1_mu" else "k_6c_lambda"
                add(f"modulus_{label}", re**2 + im**2, np.asarray(cat[which].evaluator(*cols), dtype=float))
        return entries

    # Kepler
    def kj23(*a):
        return cat["k_j2"].evaluator(*a) + cat["k_j3"].evaluator(*a)

    add("kj_commute", bracket(cat["k_j1"].evaluator, kj23), 0.0)
    for label, pair in sorted(complex_pairs(spec).items()):
        axis = label.split("_")[1]
        re = np.asarray(pair.re.evaluator(*cols), dtype=float)
        im = np.asarray(pair.im.evaluator(*cols), dtype=float)
        add(f"modulus_{label}", re**2 + im**2, np.asarray(cat[f"k_4{axis}_mu"].evaluator(*cols), dtype=float))
    return entries


def check_identities(spec: SystemSpec, n_samples: int = 100, seed: int = 0) -> dict[str, float]:
    """Max scale-normalized residual per algebraic identity of the family."""
    coords = _sample_coords(spec, n_samples, seed)
    out = {}
    for name, res, scale in _identity_entries(spec, coords):
        out[name] = float(np.max(res / scale))
    return out


# ---------------------------------------------------------------------------
# Negative controls

# Which coupling each observable genuinely depends on; mutating it must
# break conservation (guards against vacuous bracket tolerances).
_MUTATION_TARGETS = {
    Family.OSC_LINEAR: {
        "k_xx_lambda": "k1", "k_yy_lambda": "k1", "k_zz_lambda": "k1",
        "k_xy_lambda": "k1", "k_yz_lambda": "k1", "k_zx_lambda": "k1",
        "i_linear": "k2",
    },
    Family.OSC_INVERSE_SQ: {
        "k_1_lambda": "k1", "k_2_lambda": "k1", "k_3_lambda": "k1",
        "k_j1": "k3", "k_j2": "k2", "k_j3": "k2",
    },
    Family.OSC_112: {
        "k_1_lambda": "k1", "k_2_lambda": "k1", "k_3_lambda": "k1",
        "k_j3": "k2", "k_rl1_mu": "k1", "k_rl2_mu": "k1",
        "k_5_lambda": "k1", "k_6a_lambda": "k1", "k_6b_lambda": "k1",
        "k_6c_lambda": "k1",
    },
    Family.KEPLER: {
        "k_j1": "k3", "k_j2": "k2", "k_j3": "k2",
        "w_x": "k1", "w_y": "k1", "w_z": "k1",
        "k_4x_mu": "k1", "k_4y_mu": "k1", "k_4z_mu": "k1",
    },
}


def mutated_observable(spec: SystemSpec, name: str, factor: float = 1.1) -> Observable:
    """The observable rebuilt with one of its couplings scaled by ``factor``."""
    target = _MUTATION_TARGETS[spec.family][name]
    mutated_spec = replace(spec, **{target: getattr(spec, target) * factor})
    for o in catalog(mutated_spec):
        if o.name == name:
            return o
    raise KeyError(name)


def check_negative_controls(
    spec: SystemSpec,
    n_samples: int = 100,
    seed: int = 0,
    residual_floor: float = 1e-4,
) -> dict[str, float]:
    """Fraction of sample points where each mutated integral's raw bracket
    magnitude exceeds ``residual_floor``."""
    coords = _sample_coords(spec, n_samples, seed)
    _, h_grads = value_and_gradients(hamiltonian_fn(spec), coords)
    out = {}
    for o in sorted(catalog(spec), key=lambda o: o.name):
        bad = mutated_observable(spec, o.name)
        _, k_grads = value_and_gradients(bad.evaluator, coords)
        raw = np.abs(bracket_from_gradients(k_grads, h_grads))
        out[o.name] = float(np.mean(raw > residual_floor))
    return out


# ---------------------------------------------------------------------------
# Full suite


def _curvature_deviation(spec: SystemSpec, config: VerifyConfig) -> float:
    rng = np.random.default_rng(config.seed + 2)
    worst = 0.0
    checked = 0
    while checked < config.curvature_points:
        s = sample_domain(spec, 1, rng, margin=0.1)[0]
        pos = s.point.as_array()[:3]
        try:
            ocs, oric = numeric_curvature_oracle(spec, pos)
        except DomainError:
            continue
        cs = sectional_curvatures(spec, pos)
        ric = ricci_scalar(spec, pos)
        for closed, num in zip((*cs, ric), (*ocs, oric)):
            worst = max(worst, abs(closed - num) / (1.0 + abs(closed)))
        checked += 1
    return worst


def run_full_suite(spec: SystemSpec, config: VerifyConfig = VerifyConfig()) -> VerificationReport:
    """Compose all checks into one report; never raises on domain issues."""
    report = VerificationReport(spec=spec, sample_count=config.n_samples)
    try:
        cat = catalog(spec)
    except (ParameterError, ConfhamError) as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        return report

    ok = True
    try:
        report.bracket_residuals = check_brackets(spec, config.n_samples, config.seed, config.bracket_tol)
        ok &= all(mx <= config.bracket_tol for mx, _ in report.bracket_residuals.values())

        report.identity_residuals = check_identities(spec, config.n_samples, config.seed + 1)
        ok &= all(v <= config.identity_tol for v in report.identity_residuals.values())

        witnesses = sample_domain(
            spec, config.n_witness, np.random.default_rng(config.seed + 3), margin=0.1
        )
        best = None
        subset = independence_witness_set(spec)
        for s in witnesses:
            rank, sv = independence_rank(spec, subset, s.point)
            if best is None or rank > best["rank"]:
                best = {"rank": rank, "singular_values": sv, "witness_point": s.point}
        report.independence = best
        ok &= best["rank"] >= config.expected_rank

        initial = sample_domain(
            spec, 1, np.random.default_rng(config.seed + 4), margin=0.25, momentum_box=1.0
        )[0].point
        traj = integrate(
            spec,
            initial,
            IntegratorConfig(t_end=config.t_end, rel_tol=config.rel_tol, abs_tol=config.rel_tol),
            cat,
        )
        report.drift = {name: rel for name, (_, rel) in drift_report(traj).items()}
        ok &= traj.termination is not Termination.STEP_LIMIT
        ok &= all(v <= config.drift_tol for v in report.drift.values())

        report.curvature_check = _curvature_deviation(spec, config)
        ok &= report.curvature_check <= config.curvature_tol
    except (SamplingError, DomainError) as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        ok = False

    report.passed = bool(ok) and not report.errors
    return report
