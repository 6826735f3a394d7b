import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barrier_lifetime import (
    FDConfig,
    PotentialSpec,
    QuadratureConfig,
    completeness_deficit,
    denominator,
    lifetime,
    mean_energy,
    numerator,
    time_moments,
)
from barrier_lifetime.moments import BOUND_STATE_THRESHOLD, derived_times

# Frozen from the default configuration after agreeing with the time-domain
# oracle to ~1e-5 and with the damped route to ~1e-5 (den) / ~1e-4 (num).
FROZEN = {
    0.0: (0.18763511602972444, 0.45895135249362223),
    -2.0: (1174501.9279118767, 24.358284345880836),
    -4.0: (0.006584091096953954, 0.06022886920237689),
}


@pytest.mark.parametrize("v0a2", sorted(FROZEN))
def test_frozen_moments(v0a2):
    num, den = FROZEN[v0a2]
    res = lifetime(PotentialSpec.from_v0a2(v0a2))
    assert res.numerator == pytest.approx(num, rel=1e-7)
    assert res.denominator == pytest.approx(den, rel=1e-7)


@pytest.mark.parametrize("v0a2", [0.0, -1.0, -3.0, -6.5, -12.0])
def test_result_identities(v0a2):
    spec = PotentialSpec.from_v0a2(v0a2)
    r = lifetime(spec)
    assert r.numerator > 0 and r.denominator > 0
    assert r.t2_mean == r.numerator / r.denominator
    assert r.t_bar == math.sqrt(r.t2_mean / 2)
    assert r.tau_bar == r.t_bar / spec.t0
    assert 0.0 <= r.deficit <= 1.0
    assert r.deficit_raw >= -1e-6
    assert r.bound_state == (r.deficit > BOUND_STATE_THRESHOLD)
    assert r.e_mean == math.pi**2 / 2 + v0a2


def test_separate_entry_points_match_lifetime():
    spec = PotentialSpec.from_v0a2(-4.0)
    r = lifetime(spec)
    assert denominator(spec).value == r.denominator
    assert numerator(spec).value == pytest.approx(r.numerator, rel=1e-14)


def test_no_well_has_no_deficit():
    deficit, raw = completeness_deficit(PotentialSpec())
    assert deficit < 1e-3 and abs(raw) < 1e-6
    assert not lifetime(PotentialSpec()).bound_state


def test_deep_well_binds():
    deficit, raw = completeness_deficit(PotentialSpec.from_v0a2(-20.0))
    assert deficit > 0.1 and deficit == raw


def test_deficit_jumps_at_threshold():
    # tan(qa) = -qa first has a real solution near v0a2 = -2.058
    below = completeness_deficit(PotentialSpec.from_v0a2(-2.05))[0]
    above = completeness_deficit(PotentialSpec.from_v0a2(-2.07))[0]
    assert below < 1e-6 and above > 0.3


def test_mean_energy():
    e, e_dim = mean_energy(PotentialSpec(a=2.0, v0=-0.5))
    assert e == pytest.approx(math.pi**2 / 8 - 0.5, rel=1e-15)
    assert e_dim == pytest.approx(math.pi**2 / 2 - 2.0, rel=1e-15)
    assert mean_energy(PotentialSpec.from_v0a2(-math.pi**2 / 2))[1] == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-30, 0), st.floats(-30, 0), st.floats(0.3, 3))
def test_mean_energy_monotone(v1, v2, a):
    lo, hi = sorted((v1, v2))
    assert mean_energy(PotentialSpec(a=a, v0=lo))[1] <= mean_energy(PotentialSpec(a=a, v0=hi))[1]


def test_fd_step_insensitive():
    spec = PotentialSpec.from_v0a2(-4.0)
    a = lifetime(spec, fd=FDConfig(h0=1e-3)).numerator
    b = lifetime(spec, fd=FDConfig(h0=3e-3)).numerator
    assert b == pytest.approx(a, rel=1e-8)


def test_derived_times():
    t2, t_bar, tau = derived_times(8.0, 1.0, 2.0)
    assert (t2, t_bar, tau) == (8.0, 2.0, 1.0)


@pytest.mark.parametrize("gamma", [0.1, 1.0, 10.0])
def test_exponential_moments(gamma):
    num, den, t2, t_bar = time_moments(lambda t: math.exp(-gamma * t))
    assert den == pytest.approx(1 / gamma, rel=1e-10)
    assert num == pytest.approx(2 / gamma**3, rel=1e-10)
    assert t_bar == pytest.approx(1 / gamma, rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0.05, 5.0), st.floats(0.2, 10.0)), min_size=1, max_size=4))
def test_exponential_mixture(terms):
    w = np.array([t[0] for t in terms])
    g = np.array([t[1] for t in terms])
    _, _, t2, _ = time_moments(lambda t: float(np.sum(w * np.exp(-g * t))))
    expected = 2 * np.sum(w / g**3) / np.sum(w / g)
    assert t2 == pytest.approx(expected, rel=1e-8)


def test_kmax_doubling_below_rel_tol():
    spec = PotentialSpec.from_v0a2(-8.0)
    base = denominator(spec).value
    wide = denominator(spec, QuadratureConfig(k_max=80 * math.pi)).value
    assert abs(wide / base - 1) < QuadratureConfig().rel_tol


def test_to_dict_is_json_ready():
    import json

    d = lifetime(PotentialSpec.from_v0a2(-1.0)).to_dict()
    assert json.loads(json.dumps(d))["spec"]["v0"] == -1.0
