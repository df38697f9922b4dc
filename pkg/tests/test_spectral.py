import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nsk.errors import NegativePowerOnMean, NonZeroMean
from nsk.spectral import Grid
from nsk.verify import refined_sobolev_constant, refined_sobolev_ratio

grids = st.sampled_from([Grid(1, 32), Grid(1, 64), Grid(2, 16), Grid(2, 32)])
seeds = st.integers(0, 2 ** 32 - 1)


def _field(grid, seed, zero_mean=False):
    return grid.random_field(np.random.default_rng(seed), zero_mean=zero_mean)


def _fd4(f, dx, axis):
    # fourth-order central difference, periodic
    return (-np.roll(f, -2, axis) + 8 * np.roll(f, -1, axis)
            - 8 * np.roll(f, 1, axis) + np.roll(f, 2, axis)) / (12 * dx)


class TestOperatorIdentities:
    @given(grids, seeds, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
    def test_fractional_power_composes(self, grid, seed, a, b):
        f = _field(grid, seed, zero_mean=True)
        lhs = grid.fractional_power(grid.fractional_power(f, a), b)
        rhs = grid.fractional_power(f, a + b)
        scale = max(1.0, np.max(np.abs(rhs)))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale

    @given(grids, seeds)
    def test_riesz_squares_sum_to_minus_identity(self, grid, seed):
        f = _field(grid, seed, zero_mean=True)
        total = sum(grid.riesz(grid.riesz(f, i), i) for i in range(grid.dim))
        assert np.max(np.abs(total + f)) <= 1e-12

    @given(grids, seeds)
    def test_parseval(self, grid, seed):
        f = _field(grid, seed)
        direct = float(grid.integrate(f ** 2))
        assert abs(direct - grid.modal_energy(f)) <= 1e-12 * direct

    @given(grids, seeds, st.floats(0.0, 2.0))
    def test_fractional_power_self_adjoint(self, grid, seed, s):
        f = _field(grid, seed)
        g = _field(grid, seed + 1)
        lhs = grid.integrate(grid.fractional_power(f, s) * g)
        rhs = grid.integrate(f * grid.fractional_power(g, s))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    @given(grids, seeds)
    def test_derivative_skew_adjoint(self, grid, seed):
        f = _field(grid, seed)
        g = _field(grid, seed + 1)
        for axis in range(grid.dim):
            lhs = grid.integrate(grid.derivative(f, axis) * g)
            rhs = -grid.integrate(f * grid.derivative(g, axis))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))

    @given(grids, seeds)
    def test_divergence_of_gradient_is_laplacian(self, grid, seed):
        f = _field(grid, seed)
        assert np.max(np.abs(grid.divergence(grid.gradient(f)) - grid.laplacian(f))) <= 1e-10

    @given(grids, seeds)
    def test_inverse_laplacian_round_trip(self, grid, seed):
        f = _field(grid, seed, zero_mean=True)
        assert np.max(np.abs(grid.laplacian(grid.inverse_laplacian(f)) - f)) <= 1e-12

    @given(grids, seeds)
    def test_lambda_two_is_minus_laplacian(self, grid, seed):
        f = _field(grid, seed)
        assert np.max(np.abs(grid.fractional_power(f, 2.0) + grid.laplacian(f))) <= 1e-10


class TestAgainstClosedForms:
    def test_gradient_of_trig_field(self):
        grid = Grid(2, 32)
        x, y = grid.coordinates
        f = np.sin(3 * x) * np.cos(2 * y)
        gx, gy = grid.gradient(f)
        assert np.max(np.abs(gx - 3 * np.cos(3 * x) * np.cos(2 * y))) < 1e-12
        assert np.max(np.abs(gy + 2 * np.sin(3 * x) * np.sin(2 * y))) < 1e-12

    def test_gradient_matches_finite_differences(self):
        # independent route: FD4 error must shrink 16x per halving of dx
        errors = []
        for n in (32, 64, 128):
            grid = Grid(1, n)
            x = grid.coordinates[0]
            f = np.exp(np.sin(x))
            errors.append(np.max(np.abs(grid.derivative(f, 0) - _fd4(f, grid.dx, -1))))
        assert errors[1] / errors[2] > 12
        assert errors[2] < 1e-5

    def test_nondefault_length(self):
        grid = Grid(1, 64, length=3.0)
        x = grid.coordinates[0]
        f = np.sin(2 * np.pi * 2 * x / 3.0)
        exact = (2 * np.pi * 2 / 3.0) * np.cos(2 * np.pi * 2 * x / 3.0)
        assert np.max(np.abs(grid.derivative(f, 0) - exact)) < 1e-11

    def test_sobolev_norm_single_mode(self):
        grid = Grid(1, 64)
        f = np.sin(5 * grid.coordinates[0])
        for s in (-1.0, 0.5, 2.0):
            assert grid.sobolev_norm(f, s) == pytest.approx(5 ** s * math.sqrt(math.pi), rel=1e-12)
        assert grid.sobolev_norm(f, 1.0, homogeneous=False) == pytest.approx(
            math.sqrt(math.pi * (1 + 25)), rel=1e-12)

    def test_homogeneous_seminorm_ignores_mean(self):
        grid = Grid(2, 16)
        f = 3.0 + np.sin(grid.coordinates[0])
        assert grid.sobolev_norm(f, 0.0) == pytest.approx(grid.sobolev_norm(f - 3.0, 0.0))

    def test_riesz_of_cosine(self):
        grid = Grid(1, 32)
        x = grid.coordinates[0]
        # R = i xi/|xi| maps cos(kx) to -sin(kx) for k > 0
        assert np.max(np.abs(grid.riesz(np.cos(4 * x), 0) + np.sin(4 * x))) < 1e-13


class TestDomainErrors:
    def test_negative_power_needs_zero_mean(self):
        grid = Grid(1, 32)
        with pytest.raises(NegativePowerOnMean):
            grid.fractional_power(1.0 + np.sin(grid.coordinates[0]), -1.0)
        with pytest.raises(NegativePowerOnMean):
            grid.sobolev_norm(np.ones(grid.shape), -0.5)

    def test_inverse_laplacian_needs_zero_mean(self):
        grid = Grid(2, 16)
        with pytest.raises(NonZeroMean):
            grid.inverse_laplacian(np.ones(grid.shape))


class TestDyadic:
    @given(grids, seeds)
    def test_blocks_sum_to_field(self, grid, seed):
        f = _field(grid, seed)
        total = sum(block for _, block in grid.dyadic_blocks(f))
        assert np.max(np.abs(total - f)) <= 1e-12

    def test_besov_single_mode(self):
        grid = Grid(1, 64)
        f = np.sin(4 * grid.coordinates[0])  # lives in block j = 2
        for s in (-1.0, 0.0, 1.5):
            assert grid.besov_norm(f, s, math.inf, math.inf) == pytest.approx(4.0 ** s, rel=1e-12)
        lp = grid.lp_norm(f, 2.0)
        assert grid.besov_norm(f, 1.0, 2, 2) == pytest.approx(4.0 * lp, rel=1e-12)

    def test_besov_l2_matches_sobolev_up_to_dyadic_constants(self):
        # B^s_{2,2} and H^s agree within 2^|s| on mean-free fields
        grid = Grid(2, 32)
        f = _field(grid, 3, zero_mean=True)
        ratio = grid.besov_norm(f, 1.0, 2, 2) / grid.sobolev_norm(f, 1.0)
        assert 0.5 <= ratio <= 2.0

    def test_besov_rejects_bad_exponents(self):
        with pytest.raises(ValueError):
            Grid(1, 16).besov_norm(np.zeros(16), 0.0, 0.5, 2)


class TestRefinedSobolev:
    @given(seeds)
    def test_ratio_bounded(self, seed):
        grid = Grid(1, 128)
        f = grid.random_field(np.random.default_rng(seed), 32)
        assert 0 < refined_sobolev_ratio(grid, f, 4.0, 2.0, 1.0) < 3.0

    def test_constant_stable_across_resolutions(self):
        consts = [refined_sobolev_constant(Grid(1, n), count=30) for n in (64, 128, 256)]
        assert max(consts) / min(consts) < 2.0

    def test_rejects_bad_exponents(self):
        grid = Grid(1, 32)
        f = np.sin(grid.coordinates[0])
        with pytest.raises(ValueError):
            refined_sobolev_ratio(grid, f, 2.0, 4.0, 1.0)
        with pytest.raises(ValueError):
            refined_sobolev_ratio(grid, f, 4.0, 2.0, 0.0)


class TestDealiasing:
    def test_mask_keeps_low_band(self):
        grid = Grid(1, 64)
        x = grid.coordinates[0]
        low, high = np.sin(21 * x), np.sin(22 * x)
        assert np.max(np.abs(grid.dealias(low) - low)) < 1e-13
        assert np.max(np.abs(grid.dealias(high))) < 1e-13

    def test_random_field_has_no_nyquist(self):
        grid = Grid(2, 16)
        fh = grid.fft(_field(grid, 0))
        assert np.max(np.abs(fh[..., -1])) < 1e-12
        assert np.max(np.abs(fh[8])) < 1e-12
