import numpy as np
import pytest

from wavecls.expr import parse
from wavecls.oracle import (DEFAULT_BOX, is_constant, is_identically_zero,
                            sample_box)


def test_true_zero_passes():
    v = is_identically_zero(parse("(x + u)^2 - x^2 - 2*x*u - u^2"))
    assert v
    assert v.identically_zero
    assert v.witness is None


def test_nonzero_carries_witness():
    e = parse("x * u - 1")
    v = is_identically_zero(e)
    assert not v
    assert v.witness is not None
    assert abs(v.value) > 0
    # the witness really does violate the identity
    from wavecls.expr import evaluate
    assert abs(evaluate(e, v.witness)) == pytest.approx(abs(v.value))


def test_scale_aware_threshold():
    # each additive term is huge; the residual is zero relative to them
    e = parse("(x + 1000000.0) - x - 1000000.0")
    assert is_identically_zero(e)


def test_near_zero_but_not_zero_detected():
    assert not is_identically_zero(parse("0.001 * x"))
    assert not is_identically_zero(parse("u_x - v_x"))


def test_is_constant():
    v = is_constant(parse("exp(x) * exp(-x) + u - u"), ("x", "u"))
    assert v.constant
    assert v.value == pytest.approx(1.0)
    w = is_constant(parse("x * u"), ("x", "u"))
    assert not w.constant
    assert w.witness_var in ("x", "u")


def test_deterministic_given_seed():
    e = parse("x * u - 1")
    a = is_identically_zero(e, seed=5)
    b = is_identically_zero(e, seed=5)
    assert a.witness == b.witness and a.value == b.value


def test_sample_box_respects_bounds():
    rng = np.random.default_rng(0)
    pts = sample_box(DEFAULT_BOX, ("x", "v_x"), 500, rng)
    assert pts.shape == (500, 2)
    lo, hi = DEFAULT_BOX["x"]
    assert (pts[:, 0] >= lo).all() and (pts[:, 0] <= hi).all()
    lo, hi = DEFAULT_BOX["v_x"]
    assert (pts[:, 1] >= lo).all() and (pts[:, 1] <= hi).all()


def test_parameters_are_bound():
    e = parse("C * x - x", parameters=("C",))
    assert is_identically_zero(e, params={"C": 1.0})
    assert not is_identically_zero(e, params={"C": 2.0})
