# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from hardy_rellich_lab.exc import GridError
from hardy_rellich_lab.grid import (
    DEFAULT_R_MAX_WHOLE_SPACE,
    MeshKindEnum,
    BoundaryEnum,
    RadialDomain,
    GridSpec,
    build_grid,
    quad_integral,
    prolongation,
)


class TestRadialDomain:
    def test_validation(self):
        assert RadialDomain(dim=5).is_bounded is False
        assert RadialDomain(dim=5, radius=2).is_bounded is True
        with pytest.raises(GridError):
            RadialDomain(dim=0)
        with pytest.raises(GridError):
            RadialDomain(dim=2.5)
        with pytest.raises(GridError):
            RadialDomain(dim=3, radius=0.0)


class TestBuildGrid:
    def test_geometric_progression(self):
        grid = build_grid(
            RadialDomain(dim=5, radius=1.0),
            GridSpec(M=4, r_min=1e-3, r_max=1.0, kind="log"),
        )
        np.testing.assert_allclose(grid.r, [1e-3, 1e-2, 1e-1, 1.0], rtol=1e-12)
        ratios = grid.r[1:] / grid.r[:-1]
        np.testing.assert_allclose(ratios, 10.0, rtol=1e-12)

    def test_defaults(self):
        grid = build_grid(RadialDomain(dim=5))
        assert grid.M == 2048
        assert grid.r_max == DEFAULT_R_MAX_WHOLE_SPACE
        assert grid.r_min == 1e-4
        grid = build_grid(RadialDomain(dim=5, radius=0.5), GridSpec(M=64))
        assert grid.r_max == 0.5
        assert grid.r_min == pytest.approx(0.5e-4)

    def test_invariants(self):
        for kind in MeshKindEnum:
            grid = build_grid(RadialDomain(dim=3, radius=2.0), GridSpec(M=101, kind=kind.value))
            assert np.all(np.diff(grid.r) > 0)
            assert np.all(grid.weights > 0)
            assert 0 < grid.r_min < grid.r_max <= 2.0

    def test_mapped_mesh(self):
        grid = build_grid(RadialDomain(dim=3, radius=1.0), GridSpec(M=201, kind="mapped"))
        assert grid.r_max == pytest.approx(1.0 - 1e-4)
        assert not grid.uses_log_map
        # graded toward both ends
        steps = np.diff(grid.r)
        middle = steps[len(steps) // 2]
        assert steps[0] < middle and steps[-1] < middle
        with pytest.raises(GridError):
            build_grid(RadialDomain(dim=3, radius=1.0), GridSpec(M=64, r_max=1.0, kind="mapped"))
        # the whole space falls back to the log map
        assert build_grid(RadialDomain(dim=3), GridSpec(M=64, kind="mapped")).uses_log_map

    @pytest.mark.parametrize(
        "spec",
        [
            GridSpec(M=3),
            GridSpec(M=64, r_min=1.0, r_max=0.5),
            GridSpec(M=64, r_min=-1.0),
            GridSpec(M=64, r_max=3.0),
            GridSpec(M=64, kind="chebyshev"),
        ],
    )
    def test_invalid(self, spec):
        with pytest.raises(GridError):
            build_grid(RadialDomain(dim=3, radius=2.0), spec)

    def test_coarsen_is_every_other_node(self):
        grid = build_grid(RadialDomain(dim=5), GridSpec(M=129))
        coarse = grid.coarsen()
        assert coarse.M == 65
        np.testing.assert_allclose(coarse.r, grid.r[::2], rtol=1e-12)
        with pytest.raises(GridError):
            build_grid(RadialDomain(dim=5), GridSpec(M=5)).coarsen()

    def test_widen(self):
        grid = build_grid(RadialDomain(dim=5), GridSpec(M=101, r_min=1e-2, r_max=1e2))
        wide = grid.widen()
        assert wide.M == 201
        assert wide.h == pytest.approx(grid.h)
        assert wide.r_min == pytest.approx(1e-4)
        assert wide.r_max == pytest.approx(1e4)
        with pytest.raises(GridError):
            build_grid(RadialDomain(dim=5, radius=1.0), GridSpec(M=64)).widen()

    def test_to_dict(self):
        data = build_grid(RadialDomain(dim=5), GridSpec(M=16)).to_dict()
        assert data["M"] == 16
        assert data["kind"] == "log"
        assert data["domain"] == {"dim": 5, "radius": math.inf}


class TestQuadIntegral:
    def test_constant_integrand(self):
        grid = build_grid(RadialDomain(dim=1), GridSpec(M=1025, r_min=1.0, r_max=2.0))
        assert quad_integral(grid, np.ones(grid.M), rule="simpson") == pytest.approx(1.0, abs=1e-10)

    def test_exponential_tail(self):
        grid = build_grid(RadialDomain(dim=1), GridSpec(M=2048, r_min=1e-10, r_max=50.0))
        assert quad_integral(grid, np.exp(-grid.r)) == pytest.approx(1.0, abs=1e-8)

    def test_singular_weight_cancellation(self):
        N = 5
        grid = build_grid(RadialDomain(dim=N, radius=1.0), GridSpec(M=2049))
        f = grid.r ** (N - 5) * grid.r**4
        assert quad_integral(grid, f, rule="simpson") == pytest.approx(0.2, abs=1e-8)

    def test_exact_for_constant_in_mesh_coordinate(self):
        grid = build_grid(RadialDomain(dim=3), GridSpec(M=33, r_min=1e-2, r_max=1e2))
        # 1/r dr = dxi
        assert quad_integral(grid, 1.0 / grid.r) == pytest.approx(math.log(1e4), rel=1e-13)

    def test_refinement_shrinks_error(self):
        errors = list()
        for M in (65, 129, 257):
            grid = build_grid(RadialDomain(dim=1), GridSpec(M=M, r_min=1.0, r_max=3.0))
            errors.append(abs(quad_integral(grid, grid.r**2) - 26.0 / 3.0))
        assert errors[1] < 0.3 * errors[0]
        assert errors[2] < 0.3 * errors[1]

    def test_errors(self):
        grid = build_grid(RadialDomain(dim=3), GridSpec(M=16))
        with pytest.raises(GridError):
            quad_integral(grid, np.ones(15))
        f = np.ones(16)
        f[3] = np.nan
        with pytest.raises(GridError):
            quad_integral(grid, f)


class TestProlongation:
    def test_shapes(self):
        grid = build_grid(RadialDomain(dim=3), GridSpec(M=20))
        assert prolongation(grid).shape == (20, 16)
        assert prolongation(grid, "dirichlet", "dirichlet").shape == (20, 18)
        assert prolongation(grid, BoundaryEnum.free.value, "dirichlet").shape == (20, 19)

    def test_clamped_end_conditions(self):
        grid = build_grid(RadialDomain(dim=3), GridSpec(M=12))
        P = prolongation(grid)
        u = P @ np.arange(1.0, P.shape[1] + 1.0)
        assert u[0] == 0.0 and u[-1] == 0.0
        assert -3 * u[0] + 4 * u[1] - u[2] == pytest.approx(0.0)
        assert -3 * u[-1] + 4 * u[-2] - u[-3] == pytest.approx(0.0)

    def test_too_small(self):
        grid = build_grid(RadialDomain(dim=3), GridSpec(M=4))
        with pytest.raises(GridError):
            prolongation(grid)


if __name__ == "__main__":
    from hardy_rellich_lab.tests import run_cov_test

    run_cov_test(__file__, "hardy_rellich_lab.grid", preview=False)
