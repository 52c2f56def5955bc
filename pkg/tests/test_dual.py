import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from confham.core import Family, PhasePoint, SystemSpec, hamiltonian_fn
from confham.dual import (
    Dual,
    gradient,
    hamiltonian_vector_field,
    poisson_bracket,
    seed,
    sqrt,
    value_and_gradients,
)

from conftest import make_spec, sample_points

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)
nonzero = finite.filter(lambda v: abs(v) > 1e-3)


def fd_gradient(f, point, h=1e-6):
    """Central finite differences; the independent oracle for dual gradients."""
    base = point.as_array()
    out = np.empty(6)
    for i in range(6):
        up, dn = base.copy(), base.copy()
        up[i] += h
        dn[i] -= h
        out[i] = (f(*up) - f(*dn)) / (2 * h)
    return out


class TestDualArithmetic:
    @given(a=finite, b=finite)
    @settings(max_examples=50)
    def test_product_rule_on_monomials(self, a, b):
        x, y = seed([a, b, 0, 0, 0, 0])[:2]
        out = (x * x) * y  # d/dx = 2ab, d/dy = a^2
        assert out.val == pytest.approx(a * a * b)
        assert out.eps[0] == pytest.approx(2 * a * b)
        assert out.eps[1] == pytest.approx(a * a)

    @given(a=nonzero)
    @settings(max_examples=50)
    def test_chain_rule_through_division(self, a):
        (x,) = seed([a, 0, 0, 0, 0, 0])[:1]
        out = 1.0 / (x * x)
        assert out.eps[0] == pytest.approx(-2.0 / a**3, rel=1e-12)

    def test_seeding_gives_unit_vectors(self):
        duals = seed([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        for i, d in enumerate(duals):
            expected = np.zeros(6)
            expected[i] = 1.0
            assert np.array_equal(d.eps, expected)

    def test_sqrt_derivative(self):
        (x,) = seed([4.0, 0, 0, 0, 0, 0])[:1]
        out = sqrt(x)
        assert out.val == 2.0
        assert out.eps[0] == pytest.approx(0.25)

    def test_division_by_zero_value_raises(self):
        (x,) = seed([0.0, 0, 0, 0, 0, 0])[:1]
        with pytest.raises(ZeroDivisionError):
            1.0 / x
        with pytest.raises(ZeroDivisionError):
            x / x

    def test_sqrt_of_nonpositive_raises(self):
        (x,) = seed([0.0, 0, 0, 0, 0, 0])[:1]
        with pytest.raises(ValueError):
            sqrt(x)

    def test_subtraction_and_negation(self):
        x, y = seed([3.0, 5.0, 0, 0, 0, 0])[:2]
        out = -(x - y)
        assert out.val == 2.0
        assert out.eps[0] == -1.0 and out.eps[1] == 1.0


class TestGradient:
    def test_product_xpx(self):
        g = gradient(lambda x, y, z, px, py, pz: x * px, PhasePoint(2, 0, 0, 3, 0, 0))
        assert np.allclose(g.dq, [3, 0, 0])
        assert np.allclose(g.dp, [2, 0, 0])

    def test_r_squared(self):
        g = gradient(
            lambda x, y, z, px, py, pz: x * x + y * y + z * z,
            PhasePoint(1, 2, 3, 0, 0, 0),
        )
        assert np.allclose(g.dq, [2, 4, 6])
        assert np.allclose(g.dp, [0, 0, 0])

    def test_matches_finite_differences_on_hamiltonians(self, any_spec):
        f = hamiltonian_fn(any_spec)
        for p in sample_points(any_spec, 10, seed=4):
            exact = gradient(f, p).as_array()
            approx = fd_gradient(f, p)
            assert np.allclose(exact, approx, rtol=1e-6, atol=1e-8)

    def test_batched_matches_pointwise(self, any_spec):
        f = hamiltonian_fn(any_spec)
        pts = sample_points(any_spec, 8, seed=5)
        coords = np.array([p.as_array() for p in pts])
        vals, grads = value_and_gradients(f, coords)
        for i, p in enumerate(pts):
            assert vals[i] == pytest.approx(f(*p.as_tuple()), rel=1e-14)
            assert np.allclose(grads[i], gradient(f, p).as_array(), rtol=1e-14)


class TestPoissonBracket:
    def test_canonical_pairs(self):
        p = PhasePoint(0.3, -0.2, 0.9, 1.2, 0.4, -0.7)
        assert poisson_bracket(
            lambda x, y, z, px, py, pz: x, lambda x, y, z, px, py, pz: px, p
        ) == pytest.approx(1.0)
        assert poisson_bracket(
            lambda x, y, z, px, py, pz: x, lambda x, y, z, px, py, pz: py, p
        ) == pytest.approx(0.0)

    def test_rotational_symmetry(self):
        # J3 commutes with the isotropic oscillator
        spec = SystemSpec(Family.OSC_LINEAR, k1=1.0)
        H = hamiltonian_fn(spec)
        j3 = lambda x, y, z, px, py, pz: x * py - y * px
        for p in sample_points(spec, 10, seed=6):
            assert abs(poisson_bracket(j3, H, p)) < 1e-12

    def test_antisymmetry_and_bilinearity(self, any_spec):
        H = hamiltonian_fn(any_spec)
        g = lambda x, y, z, px, py, pz: x * py + z * z * px
        for p in sample_points(any_spec, 10, seed=7):
            fw = poisson_bracket(H, g, p)
            assert poisson_bracket(g, H, p) == pytest.approx(-fw, rel=1e-12, abs=1e-12)
            combo = lambda *a: 2.0 * g(*a) + 0.5 * a[0]
            expected = 2.0 * fw + 0.5 * poisson_bracket(H, lambda *a: a[0], p)
            assert poisson_bracket(H, combo, p) == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_leibniz_rule(self, any_spec):
        H = hamiltonian_fn(any_spec)
        f = lambda x, y, z, px, py, pz: x * px + y
        g = lambda x, y, z, px, py, pz: z * pz - py
        for p in sample_points(any_spec, 10, seed=8):
            fg = lambda *a: f(*a) * g(*a)
            lhs = poisson_bracket(fg, H, p)
            rhs = f(*p.as_tuple()) * poisson_bracket(g, H, p) + poisson_bracket(
                f, H, p
            ) * g(*p.as_tuple())
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-10)

    def test_h_with_itself_vanishes(self, any_spec):
        H = hamiltonian_fn(any_spec)
        for p in sample_points(any_spec, 5, seed=9):
            assert poisson_bracket(H, H, p) == 0.0


class TestVectorField:
    def test_free_particle(self):
        spec = SystemSpec(Family.OSC_LINEAR)
        v = hamiltonian_vector_field(spec, PhasePoint(1, 0, 0, 0, 1, 0))
        assert np.allclose(v, [0, 1, 0, 0, 0, 0])

    def test_harmonic_force(self):
        spec = SystemSpec(Family.OSC_LINEAR, k1=0.5)
        v = hamiltonian_vector_field(spec, PhasePoint(1, 0, 0, 0, 0, 0))
        assert np.allclose(v, [0, 0, 0, -1, 0, 0])

    def test_matches_finite_differences(self):
        spec = make_spec(Family.KEPLER, 0.4)
        f = hamiltonian_fn(spec)
        for p in sample_points(spec, 5, seed=10):
            v = hamiltonian_vector_field(spec, p)
            fd = fd_gradient(f, p)
            assert np.allclose(v, np.concatenate([fd[3:], -fd[:3]]), rtol=1e-6, atol=1e-8)
