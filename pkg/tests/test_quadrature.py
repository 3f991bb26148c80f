from __future__ import annotations

import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from whichpath.errors import ConvergenceError, IntegrandError
from whichpath.quadrature import QuadratureResult, erf, erfc, erfcx, integrate


class TestIntegrate:
    def test_half_line_exponential(self):
        assert integrate(lambda x: math.exp(-x), 0.0, math.inf).value == pytest.approx(1.0, abs=1e-10)

    def test_real_line_lorentzian(self):
        res = integrate(lambda x: 1.0 / (1.0 + x * x), -math.inf, math.inf)
        assert res.value == pytest.approx(math.pi, abs=1e-10)

    def test_lower_half_line(self):
        res = integrate(lambda x: math.exp(x), -math.inf, 0.0)
        assert res.value == pytest.approx(1.0, abs=1e-10)

    def test_log_endpoint_singularity(self):
        res = integrate(lambda x: -math.log(x) if x > 0 else 0.0, 0.0, 1.0)
        assert res.value == pytest.approx(1.0, abs=1e-8)

    def test_result_fields(self):
        res = integrate(math.sin, 0.0, math.pi)
        assert isinstance(res, QuadratureResult)
        assert res.error_estimate >= 0 and res.evaluations > 0
        assert float(res) == res.value

    def test_breakpoints(self):
        f = lambda x: 1.0 if x < 0.3 else 0.0  # noqa: E731
        assert integrate(f, 0.0, 1.0, points=[0.3]).value == pytest.approx(0.3, abs=1e-12)

    def test_decay_scale_matches_substitution(self):
        f = lambda x: math.exp(-3.0 * x) * math.cos(x)  # noqa: E731
        exact = 3.0 / 10.0
        a = integrate(f, 0.0, math.inf)
        b = integrate(f, 0.0, math.inf, decay_scale=1.0 / 3.0)
        assert a.value == pytest.approx(exact, rel=1e-8)
        assert b.value == pytest.approx(exact, rel=1e-8)

    def test_nan_names_abscissa(self):
        with pytest.raises(IntegrandError) as info:
            integrate(lambda x: math.nan if x > 0.5 else 1.0, 0.0, 1.0)
        assert info.value.abscissa > 0.5

    def test_convergence_error_carries_estimate(self):
        with pytest.raises(ConvergenceError) as info:
            integrate(lambda x: math.sin(1.0 / x) / x if x > 0 else 0.0, 0.0, 1.0,
                      limit=5, rel_tol=1e-14, abs_tol=1e-300)
        assert math.isfinite(info.value.best_estimate)
        assert info.value.evaluations > 0

    @pytest.mark.parametrize("bad", [0.0, -1e-3])
    def test_bad_tolerance(self, bad):
        with pytest.raises(ValueError):
            integrate(math.sin, 0.0, 1.0, rel_tol=bad)

    def test_determinism(self):
        f = lambda x: math.exp(-x * x) * math.cos(3 * x)  # noqa: E731
        runs = {integrate(f, -math.inf, math.inf) for _ in range(3)}
        assert len(runs) == 1

    def test_against_fixed_grid(self):
        import numpy as np
        x = np.linspace(0.0, 2.0, 20001)
        ref = oracles.simpson(np.exp(-x) * np.sin(5 * x) ** 2, x[1] - x[0])
        res = integrate(lambda t: math.exp(-t) * math.sin(5 * t) ** 2, 0.0, 2.0)
        assert res.value == pytest.approx(ref, rel=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.5, 4))
    def test_linearity(self, alpha, beta, k):
        f = lambda x: math.exp(-k * x)  # noqa: E731
        g = lambda x: 1.0 / (1.0 + x * x) ** 2  # noqa: E731
        lhs = integrate(lambda x: alpha * f(x) + beta * g(x), 0.0, math.inf).value
        rhs = alpha * integrate(f, 0.0, math.inf).value + beta * integrate(g, 0.0, math.inf).value
        assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-10)


class TestErf:
    def test_zero(self):
        assert erf(0.0) == 0.0

    def test_one(self):
        assert erf(1.0) == pytest.approx(0.8427007929, abs=1e-10)

    @given(st.floats(-6, 6))
    def test_against_series(self, x):
        assert abs(erf(x) - oracles.erf_series(x)) <= 1e-12

    @given(st.floats(-50, 50))
    def test_odd(self, x):
        assert erf(-x) == -erf(x)

    def test_limits(self):
        assert erf(math.inf) == 1.0 and erf(-math.inf) == -1.0
        assert erf(30.0) == 1.0

    @given(st.floats(-5, 25))
    def test_erfc_erfcx_consistent(self, x):
        assert erfcx(x) * math.exp(-x * x) == pytest.approx(erfc(x), rel=1e-12, abs=1e-300)
