"""Tests for integrals along trajectories."""

import numpy as np
import pytest

from noether_kit.config import SamplePlan
from noether_kit.errors import PreconditionError
from noether_kit.expr import parse
from noether_kit.trajectory import quadrature_along, running_integral, smooth_arc

L = parse("(v1^2 - 1)^2", 1)


def generate_degrees():
    return list(range(0, 41, 5)) + [1, 2, 3]


class TestQuadratureAlong:
    """Test quadrature_along()."""

    def test_zigzag_functional_is_zero(self, zigzag):
        assert quadrature_along(zigzag, L) == pytest.approx(0.0, abs=1e-14)

    def test_rest_functional_is_one(self, rest):
        assert quadrature_along(rest, L) == pytest.approx(1.0, rel=1e-12)

    def test_plateau_functional(self, plateau):
        assert quadrature_along(plateau, L) == pytest.approx(1 / 3, rel=1e-12)

    @pytest.mark.parametrize("k", generate_degrees())
    def test_monomials_are_exact(self, zigzag, k):
        """Test that t^k integrates to 1/(k+1) across a breakpoint."""
        value = quadrature_along(zigzag, parse(f"t^{k}", 1))
        assert abs(value - 1 / (k + 1)) <= 1e-10 * (1 / (k + 1))

    def test_smooth_integrand(self):
        arc = smooth_arc(1, (0.0, np.pi), ["sin(t)"])
        assert quadrature_along(arc, parse("x1", 1)) == pytest.approx(2.0, rel=1e-12)

    def test_more_nodes_for_rough_integrands(self):
        arc = smooth_arc(1, (0.0, 10.0), ["t"])
        coarse = quadrature_along(arc, parse("cos(5*x1)", 1), SamplePlan(quadrature_nodes=4))
        fine = quadrature_along(arc, parse("cos(5*x1)", 1), SamplePlan(quadrature_nodes=64))
        assert fine == pytest.approx(np.sin(50.0) / 5, rel=1e-10)
        assert abs(coarse - fine) > 1e-6

    @pytest.mark.parametrize("source", ["s*v1", "a1"])
    def test_rejects_parameter_and_acceleration(self, zigzag, source):
        with pytest.raises(PreconditionError):
            quadrature_along(zigzag, parse(source, 1))


class TestRunningIntegral:
    """Test running_integral()."""

    def test_velocity_integrates_to_position(self, zigzag):
        F = running_integral(zigzag, parse("v1", 1))
        assert F(0.5) == pytest.approx(0.5)
        assert F(1.0) == pytest.approx(0.0, abs=1e-14)
        assert F.total == pytest.approx(0.0, abs=1e-14)

    def test_vectorized(self, zigzag):
        F = running_integral(zigzag, parse("v1", 1))
        times = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
        np.testing.assert_allclose(F(times), [0.0, 0.25, 0.5, 0.25, 0.0], atol=1e-14)

    def test_scalar_input_gives_float(self, zigzag):
        assert isinstance(running_integral(zigzag, parse("1", 1))(0.3), float)

    def test_agrees_with_total(self, plateau):
        F = running_integral(plateau, L)
        assert F(1.0) == pytest.approx(quadrature_along(plateau, L))
