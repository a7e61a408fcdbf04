import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from neutrosophic import (
    KernelError,
    NormPair,
    UnitValue,
    apply_tconorm,
    apply_tnorm,
    diagonal_witness,
    get_kernel,
    tconorm_residual,
    tnorm_residual,
    VerificationError,
    verify_norm_axioms,
)
from neutrosophic.errors import UsageError
from neutrosophic.norms import CANDIDATES, KERNELS, certify

unit = st.floats(0.0, 1.0, allow_nan=False)
TNORMS = ["min", "product", "lukasiewicz"]
TCONORMS = ["max", "probsum"]


@pytest.mark.parametrize(
    "name,s,t,expected",
    [("min", 0.4, 1.0, 0.4), ("lukasiewicz", 0.3, 0.7, 0.0), ("product", 0.5, 0.5, 0.25)],
)
def test_apply_tnorm_examples(name, s, t, expected):
    assert apply_tnorm(get_kernel(name), s, t) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "name,s,t,expected",
    [("max", 0.4, 0.0, 0.4), ("probsum", 0.5, 0.5, 0.75), ("max", 0.2, 0.9, 0.9)],
)
def test_apply_tconorm_examples(name, s, t, expected):
    assert apply_tconorm(get_kernel(name), s, t) == pytest.approx(expected, abs=1e-15)


def test_kind_mismatch_is_an_error():
    with pytest.raises(KernelError):
        apply_tnorm(get_kernel("max"), 0.1, 0.2)
    with pytest.raises(KernelError):
        apply_tconorm(get_kernel("min"), 0.1, 0.2)


def test_unit_value_range():
    assert float(UnitValue(0.5)) == 0.5
    for bad in (-0.1, 1.1, math.nan):
        with pytest.raises(UsageError):
            UnitValue(bad)


def test_unknown_kernel_name():
    with pytest.raises(UsageError):
        get_kernel("drastic")


def test_pair_slots_checked():
    with pytest.raises(UsageError):
        NormPair.named("max", "min")


@pytest.mark.parametrize("name", sorted(KERNELS))
def test_builtins_pass_axiom_suite(name):
    rep = verify_norm_axioms(get_kernel(name), samples=20_000, seed=3)
    assert rep.ok
    assert rep.witnesses() == []
    assert rep["continuity"].status == "probe-limited"


def test_mean_candidate_fails_associativity_with_replayable_witness():
    mean = CANDIDATES["mean"]
    rep = verify_norm_axioms(mean, samples=1000, seed=0)
    assert rep["associativity"].failed
    w = rep["associativity"].witnesses[0]
    s, t, u = w.points[:3]
    f = mean.fn
    assert abs(f(f(s, t), u) - f(s, f(t, u))) > 1e-12
    # hand example: f(f(0,0),1) = 0.5, f(0,f(0,1)) = 0.25
    assert f(f(0.0, 0.0), 1.0) == 0.5 and f(0.0, f(0.0, 1.0)) == 0.25


def test_verify_is_deterministic():
    k = get_kernel("product")
    a = verify_norm_axioms(k, samples=500, seed=11).to_dict()
    b = verify_norm_axioms(k, samples=500, seed=11).to_dict()
    assert a == b


def test_certify_refuses_candidate():
    with pytest.raises(VerificationError, match="associativity"):
        certify(CANDIDATES["mean"], samples=500)


def test_steep_slope_bound_flags_continuity():
    rep = verify_norm_axioms(get_kernel("probsum"), samples=500, seed=0, slope_bound=0.5)
    assert rep["continuity"].failed


# residuals: expected values from closed forms, frozen
@pytest.mark.parametrize(
    "name,e1,e2,expected",
    [("min", 0.8, 0.5, 0.5), ("lukasiewicz", 0.8, 0.5, 0.7), ("product", 0.8, 0.5, 0.625)],
)
def test_tnorm_residual_examples(name, e1, e2, expected):
    assert tnorm_residual(get_kernel(name), e1, e2) == pytest.approx(expected, abs=2e-9)


def test_tnorm_residual_min_near_target():
    d = 1e-6
    assert tnorm_residual(get_kernel("min"), 0.9, 0.9 - d) == pytest.approx(0.9 - d, abs=2e-9)


@pytest.mark.parametrize("name,e1,e2,expected", [("max", 0.8, 0.5, 0.8), ("probsum", 0.8, 0.5, 0.6)])
def test_tconorm_residual_examples(name, e1, e2, expected):
    assert tconorm_residual(get_kernel(name), e1, e2) == pytest.approx(expected, abs=2e-9)


def test_tconorm_residual_max_near_bound():
    d = 1e-6
    assert tconorm_residual(get_kernel("max"), 0.5 + d, 0.5) == pytest.approx(0.5 + d, abs=2e-9)


def test_residual_preconditions():
    with pytest.raises(UsageError):
        tnorm_residual(get_kernel("min"), 0.4, 0.5)
    with pytest.raises(KernelError):
        tnorm_residual(get_kernel("max"), 0.8, 0.5)


@pytest.mark.parametrize(
    "pair,e5,expected",
    [
        (("min", "max"), 0.5, (0.5, 0.5)),
        (("lukasiewicz", "probsum"), 0.5, (0.75, 1 - math.sqrt(0.5))),
        (("product", "probsum"), 0.81, (0.9, 1 - math.sqrt(0.19))),
    ],
)
def test_diagonal_witness_examples(pair, e5, expected):
    p = NormPair.named(*pair)
    e6, e7 = diagonal_witness(p, e5)
    assert e6 == pytest.approx(expected[0], abs=2e-9)
    assert e7 == pytest.approx(expected[1], abs=2e-9)
    assert p.tnorm.fn(e6, e6) >= e5
    assert p.tconorm.fn(e7, e7) <= e5


# properties

@given(unit)
def test_tnorm_identity_exact(s):
    for name in TNORMS:
        assert apply_tnorm(get_kernel(name), s, 1.0) == s


@given(unit)
def test_tconorm_identity_exact(s):
    for name in TCONORMS:
        assert apply_tconorm(get_kernel(name), s, 0.0) == s


@given(unit, unit)
def test_pointwise_ordering(s, t):
    luk, prod, mn = (get_kernel(n).fn for n in ("lukasiewicz", "product", "min"))
    mx, ps = (get_kernel(n).fn for n in ("max", "probsum"))
    assert luk(s, t) <= prod(s, t) + 1e-15
    assert prod(s, t) <= mn(s, t)
    assert mx(s, t) <= ps(s, t) + 1e-15


@settings(max_examples=200)
@given(st.sampled_from(TNORMS), st.floats(0.01, 0.99), st.floats(0.0, 1.0))
def test_tnorm_residual_satisfies_inequality(name, e1, frac):
    e2 = e1 * frac * 0.999 + 1e-6
    k = get_kernel(name)
    e3 = tnorm_residual(k, e1, e2)
    assert 0 < e3 < 1 or e3 == pytest.approx(1.0)
    assert k.fn(e1, e3) >= e2


@settings(max_examples=200)
@given(st.sampled_from(TCONORMS), st.floats(0.02, 0.99), st.floats(0.0, 1.0))
def test_tconorm_residual_satisfies_inequality(name, e1, frac):
    e2 = e1 * frac * 0.999
    k = get_kernel(name)
    e4 = tconorm_residual(k, e1, e2)
    assert 0 < e4 < 1
    assert k.fn(e4, e2) <= e1


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(KERNELS)), st.integers(1, 300), st.integers(0, 2**32 - 1))
def test_verify_deterministic_property(name, samples, seed):
    k = get_kernel(name)
    assert verify_norm_axioms(k, samples, seed).to_dict() == verify_norm_axioms(k, samples, seed).to_dict()


def test_diagonal_rejects_endpoints():
    with pytest.raises(UsageError):
        diagonal_witness(NormPair.named("min", "max"), 1.0)


def test_vectorised_kernels_match_scalar():
    rng = np.random.default_rng(0)
    s, t = rng.random(100), rng.random(100)
    for name in KERNELS:
        k = get_kernel(name)
        vec = np.asarray(k.fn(s, t), dtype=float)
        ref = np.array([k.fn(float(a), float(b)) for a, b in zip(s, t)])
        assert np.array_equal(vec, ref)
