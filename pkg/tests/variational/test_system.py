"""Tests for Lagrangian systems and the Weierstrass excess."""

import math

import numpy as np
import pytest

from noether_kit.config import SamplingBox
from noether_kit.errors import DerivativeValidationError, PreconditionError, UnknownIdentifierError
from noether_kit.expr import Point, differentiate, evaluate, is_identically_zero, parse, simplify
from noether_kit.trajectory import smooth_arc
from noether_kit.variational import (
    build_system,
    check_slope,
    functional_value,
    hamiltonian_like,
    richardson_slope,
    validate_partial,
    weierstrass_excess,
    weierstrass_excess_many,
)


class TestBuildSystem:
    """Test build_system()."""

    def test_counterexample_partials(self, counterexample):
        assert counterexample.Lt == 0
        assert counterexample.Lx == (0,)
        assert counterexample.Lv == (simplify(parse("4*v1^3 - 4*v1", 1)),)
        assert counterexample.is_autonomous

    def test_oscillator_partials(self, oscillator):
        assert oscillator.Lx == (simplify(parse("-x1", 1)),)
        assert oscillator.Lv == (parse("v1", 1),)

    def test_time_dependent(self):
        system = build_system(1, (0.0, 1.0), "t*v1^2")
        assert system.Lt == simplify(parse("v1^2", 1))
        assert not system.is_autonomous

    def test_planar(self):
        system = build_system(2, (0.0, 1.0), "(v1^2 + v2^2)/2 - (x1^2 + x2^2)/2")
        assert len(system.Lx) == len(system.Lv) == 2
        assert system.Lv[1] == parse("v2", 2)

    @pytest.mark.parametrize("source", ["s*v1^2", "a1*x1"])
    def test_rejects_parameter_and_acceleration(self, source):
        with pytest.raises(PreconditionError):
            build_system(1, (0.0, 1.0), source)

    def test_rejects_out_of_range_coordinate(self):
        with pytest.raises(UnknownIdentifierError):
            build_system(1, (0.0, 1.0), "v2^2")

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            build_system(1, (1.0, 1.0), "v1^2")

    def test_validation_catches_a_wrong_partial(self):
        box = SamplingBox.standard(1, (0.0, 1.0))
        with pytest.raises(DerivativeValidationError):
            validate_partial(parse("v1^2", 1), parse("v1", 1), "v1", box)

    @pytest.mark.parametrize("seed", range(10))
    def test_pole_does_not_fail_validation(self, seed):
        """Test that sample points next to the pole of 1/x1 are skipped, for every seed."""
        system = build_system(1, (0.0, 1.0), "v1^2/2 + 1/x1", seed=seed)
        assert system.Lx == (simplify(parse("-1/x1^2", 1)),)

    def test_validation_reports_points_checked(self):
        box = SamplingBox.standard(1, (0.0, 1.0))
        assert validate_partial(parse("v1^3", 1), parse("3*v1^2", 1), "v1", box, points=20) == 20


class TestCheckSlope:
    """Test richardson_slope() and check_slope()."""

    def test_extrapolated_slope(self):
        slope, gap = richardson_slope(math.sin, 0.3)
        assert slope == pytest.approx(math.cos(0.3), abs=1e-9)
        assert gap < 1e-9

    def test_step_scales_with_the_coordinate(self):
        slope, _ = richardson_slope(lambda x: x**2, 1e6)
        assert slope == pytest.approx(2e6, rel=1e-9)

    def test_agreeing_slope(self):
        assert check_slope("x1^3", "x1", {"x1": 1.0}, 3.0, lambda x: x**3, 1.0)

    def test_wrong_slope_raises(self):
        with pytest.raises(DerivativeValidationError):
            check_slope("x1^3", "x1", {"x1": 1.0}, 2.0, lambda x: x**3, 1.0)

    def test_point_next_to_a_pole_is_skipped(self):
        """Test that 1/x one step from its pole is reported unusable, not wrong."""
        centre = 2e-5
        assert not check_slope("1/x1", "x1", {"x1": centre}, -1.0 / centre**2, lambda x: 1.0 / x, centre)


class TestHamiltonianLike:
    """Test hamiltonian_like()."""

    def test_free_particle(self, free_particle):
        assert hamiltonian_like(free_particle) == simplify(parse("-v1^2/2", 1))

    def test_counterexample(self, counterexample):
        """Test that L - v Lv is 1 + 2v^2 - 3v^4 for L = (v^2 - 1)^2."""
        assert hamiltonian_like(counterexample) == simplify(parse("-3*v1^4 + 2*v1^2 + 1", 1))

    @pytest.mark.parametrize("source", ["(v1^2 - 1)^2", "v1^2/2 - x1^2/2", "v1^2/2 + 1/x1", "exp(v1)*sqrt(1 + x1^2)"])
    def test_time_independent_lagrangian_gives_time_independent_bracket(self, source):
        system = build_system(1, (0.0, 1.0), source)
        rate = differentiate(hamiltonian_like(system), "t")
        assert is_identically_zero(rate, SamplingBox.standard(1, (0.0, 1.0))).is_zero


class TestWeierstrassExcess:
    """Test weierstrass_excess()."""

    @pytest.mark.parametrize("v,w,expected", [(0.0, 1.0, -1.0), (0.0, -1.0, -1.0), (1.0, 0.0, 1.0), (1.0, 2.0, 9.0)])
    def test_counterexample(self, counterexample, v, w, expected):
        base = Point(t=0.5, x=(0.0,), v=(v,))
        assert weierstrass_excess(counterexample, base, [w]) == pytest.approx(expected)

    def test_vanishes_at_base_velocity(self, counterexample):
        base = Point(t=0.2, x=(0.3,), v=(0.7,))
        assert weierstrass_excess(counterexample, base, [0.7]) == pytest.approx(0.0, abs=1e-15)

    def test_many_matches_single(self, counterexample):
        base = Point(t=0.0, x=(0.0,), v=(0.3,))
        probes = np.linspace(-2.0, 2.0, 9).reshape(-1, 1)
        many = weierstrass_excess_many(counterexample, base, probes)
        single = [weierstrass_excess(counterexample, base, [w]) for w in probes[:, 0]]
        np.testing.assert_allclose(many, single)

    def test_convex_lagrangian_has_nonnegative_excess(self, free_particle, oscillator):
        """Test 1000 random (base, probe) pairs for Lagrangians convex in v."""
        rng = np.random.default_rng(5)
        for system in (free_particle, oscillator):
            for _ in range(1000):
                base = Point(t=float(rng.uniform(0, 1)), x=(float(rng.uniform(-2, 2)),), v=(float(rng.uniform(-3, 3)),))
                w = float(rng.uniform(-3, 3))
                assert weierstrass_excess(system, base, [w]) >= -1e-12

    def test_free_particle_closed_form(self, free_particle):
        base = Point(t=0.0, x=(0.0,), v=(1.5,))
        assert weierstrass_excess(free_particle, base, [-0.5]) == pytest.approx(0.5 * (-0.5 - 1.5) ** 2)

    def test_dimension_mismatch(self, counterexample):
        with pytest.raises(ValueError):
            weierstrass_excess(counterexample, Point(t=0.0, x=(0.0,), v=(0.0,)), [1.0, 2.0])


class TestFunctionalValue:
    """Test functional_value()."""

    def test_counterexample_trajectories(self, counterexample, zigzag, rest, plateau):
        assert functional_value(counterexample, zigzag) == pytest.approx(0.0, abs=1e-14)
        assert functional_value(counterexample, rest) == pytest.approx(1.0)
        assert functional_value(counterexample, plateau) == pytest.approx(1 / 3)

    def test_free_particle_line(self, free_particle):
        line = smooth_arc(1, (0.0, 1.0), ["2*t"])
        assert functional_value(free_particle, line) == pytest.approx(2.0)
        assert evaluate(free_particle.L, {"v1": 2.0}) == 2.0
