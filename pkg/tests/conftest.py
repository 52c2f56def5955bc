import numpy as np
import pytest

from confham.core import Family, SystemSpec, sample_domain


def make_spec(family, deform=0.05, k1=None):
    if k1 is None:
        k1 = -1.0 if family is Family.KEPLER else 1.0
    return SystemSpec(family, k1, 0.2, 0.3, 0.4, deform)


ALL_SPECS = [
    make_spec(Family.OSC_LINEAR, -0.3),
    make_spec(Family.OSC_LINEAR, 0.05),
    make_spec(Family.OSC_INVERSE_SQ, -0.3),
    make_spec(Family.OSC_INVERSE_SQ, 0.05),
    make_spec(Family.OSC_112, -0.3),
    make_spec(Family.OSC_112, 0.05),
    make_spec(Family.KEPLER, -0.3),
    make_spec(Family.KEPLER, 0.4),
]


def spec_id(spec):
    return f"{spec.family.value}:deform={spec.deform}"


@pytest.fixture(params=ALL_SPECS, ids=spec_id)
def any_spec(request):
    return request.param


def sample_points(spec, n, seed=0, margin=0.1):
    rng = np.random.default_rng(seed)
    return [s.point for s in sample_domain(spec, n, rng, margin=margin)]
