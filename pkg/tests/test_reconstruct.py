"""Tests for curl checks and gradient integration."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wfcterrain.errors import IntegrabilityError
from wfcterrain.models.domain import GradientField, HeightMap
from wfcterrain.services.gradient import compute_gradients
from wfcterrain.services.reconstruct import (
    curl_residual,
    integrate,
    integrate_columns_first,
    integrate_rows_first,
    path_deviation,
    residual_grid,
)


def planar_corner(cells: np.ndarray) -> np.ndarray:
    """Copy of ``cells`` whose bottom-right height satisfies zero curl."""
    cells = cells.copy()
    cells[-1, -1] = cells[-2, -1] + cells[-1, -2] - cells[-2, -2]
    return cells


class TestCurlResidual:
    """Tests for the integrability check."""

    def test_gradients_of_heightmap_are_integrable(self, small_heightmap):
        """Test that any heightmap's gradients have zero curl."""
        report = curl_residual(compute_gradients(small_heightmap))
        assert report.integrable
        assert report.max_abs_residual == 0
        assert (report.rows, report.cols) == (2, 2)

    def test_detects_violation(self):
        """Test that a perturbed field reports the defect."""
        gf = GradientField([[0, 0], [0, 0]], [[0, 0], [0, 0]])
        assert curl_residual(gf).integrable
        bad = GradientField([[0, 0], [0, 0]], [[0, 3], [0, 0]])
        report = curl_residual(bad)
        assert not report.integrable
        assert report.max_abs_residual == 3
        assert report.violation_count == 1

    def test_residual_formula(self):
        """Test (gx[y][x] + gy[y][x+1]) - (gy[y][x] + gx[y+1][x]) on one cell."""
        gf = GradientField([[1, 9], [4, 9]], [[2, 5], [9, 9]])
        assert residual_grid(gf).tolist() == [[(1 + 5) - (2 + 4)]]

    def test_single_row_has_no_interior(self):
        """Test that a 1xN field has nothing to check."""
        report = curl_residual(GradientField([[1, 2, 3]], [[4, 5, 6]]))
        assert report.integrable
        assert (report.rows, report.cols) == (0, 2)


class TestIntegrate:
    """Tests for reconstruction."""

    def test_round_trip_small(self, small_heightmap):
        """Test that integrating gradients restores every determined cell."""
        gf = compute_gradients(small_heightmap)
        hm = integrate(gf, int(small_heightmap.cells[0, 0]))
        assert hm.shape == small_heightmap.shape
        assert np.array_equal(hm.cells[:-1, :], small_heightmap.cells[:-1, :])
        assert np.array_equal(hm.cells[:, :-1], small_heightmap.cells[:, :-1])

    def test_corner_completed_with_zero_curl(self, small_heightmap):
        """Test the bottom-right height no gradient reaches."""
        hm = integrate(compute_gradients(small_heightmap), 10)
        c = small_heightmap.cells
        assert hm.cells[-1, -1] == c[-2, -1] + c[-1, -2] - c[-2, -2]

    def test_base_height_shifts_everything(self, small_heightmap):
        """Test that the base height is an additive constant."""
        gf = compute_gradients(small_heightmap)
        assert np.array_equal(integrate(gf, 100).cells - integrate(gf, 0).cells, np.full((4, 4), 100))
        assert integrate(gf, -7).cells[0, 0] == -7

    def test_not_integrable(self):
        """Test that a curled field is refused with its report."""
        bad = GradientField([[0, 0], [0, 0]], [[0, 1], [0, 0]])
        with pytest.raises(IntegrabilityError) as excinfo:
            integrate(bad)
        assert excinfo.value.report.violation_count == 1

    def test_verify_mode(self, sine_field):
        """Test that verification passes on an integrable field."""
        assert integrate(sine_field, 0, verify=True) == integrate(sine_field, 0)

    def test_orders_differ_on_curled_field(self):
        """Test that path deviation exposes a nonzero curl."""
        bad = GradientField([[1, 0], [0, 0]], [[0, 0], [0, 0]])
        assert path_deviation(bad) == 1
        assert not np.array_equal(integrate_rows_first(bad), integrate_columns_first(bad))

    def test_single_cell_field(self):
        """Test that a 1x1 field integrates to a 2x2 heightmap."""
        hm = integrate(GradientField([[3]], [[-2]]), 10)
        assert hm.tolist() == [[10, 13], [8, 11]]

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(min_value=2, max_value=24),
        st.integers(min_value=2, max_value=24),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_round_trip_property(self, rows, cols, seed):
        """Test bitwise identity on random heightmaps with a planar last block."""
        cells = planar_corner(np.random.default_rng(seed).integers(-500, 9001, size=(rows, cols)))
        hm = HeightMap(cells)
        assert integrate(compute_gradients(hm), int(cells[0, 0])) == hm

    @settings(max_examples=50, deadline=None)
    @given(
        st.integers(min_value=2, max_value=16),
        st.integers(min_value=2, max_value=16),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_gradients_of_integral(self, rows, cols, seed):
        """Test that differentiating the integral gives the field back exactly."""
        gf = compute_gradients(HeightMap(np.random.default_rng(seed).integers(0, 1000, size=(rows, cols))))
        assert compute_gradients(integrate(gf, 0)) == gf
        assert path_deviation(gf) == 0
