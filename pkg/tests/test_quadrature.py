import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chiralnet.quadrature import (
    QuadratureError,
    QuadratureSpec,
    composite_rule,
    integrate_lines,
    integrate_square,
    unit_rule,
)


def test_unit_rule_shape_and_weights():
    x, w = unit_rule(4, 8)
    assert x.shape == w.shape == (32,)
    assert np.all((x > 0) & (x < 1)) and np.all(np.diff(x) > 0)
    assert math.isclose(w.sum(), 1.0, abs_tol=1e-15)


@given(st.integers(0, 15), st.integers(1, 4))
def test_polynomials_integrated_exactly(deg, panels):
    x, w = unit_rule(panels, 8)
    assert abs(w @ x**deg - 1 / (deg + 1)) < 1e-14


def test_composite_rule_interval():
    x, w = composite_rule(2.0, 5.0, 3, 6)
    assert math.isclose(w.sum(), 3.0, rel_tol=1e-15)
    assert math.isclose(w @ x, (25 - 4) / 2, rel_tol=1e-14)


def test_integrate_lines_batch():
    a = np.array([0.0, 1.0, -2.0])
    b = np.array([1.0, 3.0, 0.5])
    vals, _ = integrate_lines(np.exp, a, b)
    assert np.allclose(vals, np.exp(b) - np.exp(a), rtol=1e-12, atol=0)


def test_integrate_lines_oscillatory_refines():
    vals, panels = integrate_lines(lambda x: np.cos(40 * x), np.array([0.0]), np.array([3.0]))
    assert abs(vals[0] - math.sin(120) / 40) < 1e-9
    assert panels > 2


def test_integrate_square_complex():
    val, _ = integrate_square(lambda u, v: np.exp(1j * 5 * u * v) + 0 * v)
    # termwise: int int (5i uv)^n / n! = (5i)^n / (n! (n+1)^2)
    series = 1 + sum((5j) ** n / (math.factorial(n) * (n + 1) ** 2) for n in range(1, 60))
    assert abs(val - series) < 1e-7


def test_nonconvergence_raises():
    spec = QuadratureSpec(tol=1e-14, max_panels=8)
    with pytest.raises(QuadratureError, match="not converged"):
        integrate_square(lambda u, v: np.sqrt(np.abs(u - 1 / 3)) + 0 * v, spec)
    with pytest.raises(QuadratureError):
        integrate_lines(lambda x: np.abs(x - 0.3) ** 0.5, np.array([0.0]), np.array([1.0]), spec)


@pytest.mark.parametrize(
    "kwargs", [dict(panels=0), dict(order=0), dict(tol=0), dict(tol=-1), dict(max_panels=1, panels=2), dict(scheme="simpson")]
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        QuadratureSpec(**kwargs)


def test_deterministic():
    f = lambda u, v: np.exp(1j * np.sin(7 * u) * v)
    assert integrate_square(f)[0] == integrate_square(f)[0]
