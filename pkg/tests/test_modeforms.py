# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest
import scipy.linalg

from hardy_rellich_lab.exc import PreconditionError, ProfileSupportError
from hardy_rellich_lab.grid import RadialDomain, GridSpec, build_grid, quad_integral, prolongation
from hardy_rellich_lab.weightlang import parse
from hardy_rellich_lab import modeforms
from hardy_rellich_lab.modeforms import (
    ModeIndex,
    mode_coeff,
    assemble_weighted_form,
    hr_lhs_form,
    hr_rhs_form,
    rellich_rhs_form,
    hardy_lhs_form,
    mass_form,
    bump_profile,
    decompose_check,
)


def _grid(M=201, r_min=1e-2, r_max=1e2, N=5, R=math.inf):
    return build_grid(RadialDomain(dim=N, radius=R), GridSpec(M=M, r_min=r_min, r_max=r_max))


def _max_rel_diff(A, B) -> float:
    scale = abs(B.matrix).max()
    return float(abs(A.matrix - B.matrix).max() / scale)


class TestModeCoeff:
    def test_examples(self):
        assert mode_coeff(0, 7) == 0
        assert mode_coeff(1, 5) == 4
        assert mode_coeff(2, 5) == 10
        assert ModeIndex(k=1, N=5).c_k == 4

    def test_invariants(self):
        for N in range(2, 9):
            c = [mode_coeff(k, N) for k in range(10)]
            assert c[0] == 0 and c[1] == N - 1
            assert all(a < b for a, b in zip(c, c[1:]))
            assert all(ck >= 2 * N for ck in c[2:])

    @pytest.mark.parametrize("k,N", [(-1, 5), (1.5, 5), (0, 0)])
    def test_invalid(self, k, N):
        with pytest.raises(PreconditionError):
            mode_coeff(k, N)


class TestAssemble:
    def test_order0_is_quadrature(self):
        N = 5
        grid = _grid(N=N)
        u = bump_profile(0.5, 3.0).on_grid(grid)
        form = assemble_weighted_form("1", 0, 0, N, grid)
        expected = quad_integral(grid, grid.r ** (N - 1) * u**2)
        assert form.quadratic(u) == pytest.approx(expected, rel=1e-10)
        assert form.nonnegative

    def test_order1_linear_profile(self):
        N = 3
        grid = _grid(M=801, r_min=1.0, r_max=2.0, N=N)
        form = assemble_weighted_form("1", 0, 1, N, grid)
        expected = (2.0**N - 1.0) / N
        assert form.quadratic(grid.r) == pytest.approx(expected, rel=1e-5)

    @pytest.mark.parametrize("order", [1, 2])
    def test_second_order_convergence(self, order):
        values = list()
        for M in (101, 201, 401):
            grid = _grid(M=M, r_min=1.0, r_max=math.exp(2.0), N=2)
            u = np.sin(np.log(grid.r))
            values.append(assemble_weighted_form("1", 0, order, 2, grid).quadratic(u))
        e1 = abs(values[1] - values[0])
        e2 = abs(values[2] - values[1])
        assert e2 < 0.35 * e1

    def test_symmetric(self):
        grid = _grid(M=101)
        for order in (0, 1, 2):
            form = assemble_weighted_form("1+r^2", -2, order, 5, grid)
            assert form.is_symmetric()
        assert hr_lhs_form("1+r^2", 5, 2, grid).is_symmetric()
        assert hr_rhs_form("N+2-r^2", 5, 1, grid).is_symmetric()

    def test_invalid_order(self):
        with pytest.raises(ValueError):
            assemble_weighted_form("1", 0, 3, 5, _grid(M=16))

    def test_label_and_export(self):
        form = assemble_weighted_form("1", -2, 1, 5, _grid(M=16))
        assert form.label == "int (1.0) r^2 |u'|^2"
        data = form.to_dict()
        assert data["bandwidth"] == 1
        assert len(data["upper"]) == 2
        assert len(data["upper"][0]) == 16


class TestHardyRellichForms:
    def test_radial_mode_reduces(self):
        N = 5
        grid = _grid()
        form = hr_lhs_form("1", N, 0, grid)
        expected = assemble_weighted_form("1", 0, 2, N, grid) + (N - 1) * assemble_weighted_form("1", -2, 1, N, grid)
        assert _max_rel_diff(form, expected) < 1e-13

    def test_block_consistency(self):
        N = 5
        grid = _grid()
        base = hr_lhs_form("1", N, 0, grid)
        for k in (1, 2, 3):
            c = mode_coeff(k, N)
            expected = (
                base
                + 2 * c * assemble_weighted_form("1", -2, 1, N, grid)
                + (c * c + 2 * (N - 4) * c) * assemble_weighted_form("1", -4, 0, N, grid)
            )
            assert _max_rel_diff(hr_lhs_form("1", N, k, grid), expected) < 1e-12

    def test_mode_one_coefficients(self):
        N, k = 5, 1
        c = mode_coeff(k, N)
        assert N - 1 + 2 * c == 12
        assert c * c + 2 * (N - 4) * c == 24

    def test_six_terms(self):
        N, k = 5, 1
        grid = _grid(M=401, r_min=1e-2, r_max=50.0)
        V = parse("1+r^2")
        dV, ddV = V.derivative(), V.derivative().derivative()
        c = mode_coeff(k, N)
        u = grid.r**2 * np.exp(-grid.r) * bump_profile(0.05, 40.0, power=3).on_grid(grid)
        blocks = [
            (1.0, V, 0, 2),
            (N - 1 + 2 * c, V, -2, 1),
            (c * c + 2 * (N - 4) * c, V, -4, 0),
            (-(N - 1), dV, -1, 1),
            (-(N - 5) * c, dV, -3, 0),
            (-c, ddV, -2, 0),
        ]
        expected = sum(
            coeff * assemble_weighted_form(w, p, order, N, grid).quadratic(u)
            for coeff, w, p, order in blocks
            if coeff != 0
        )
        got = hr_lhs_form(V, N, k, grid).quadratic(u)
        assert got == pytest.approx(expected, rel=1e-9)

    def test_positive_semidefinite_on_clamped_space(self):
        N = 5
        grid = _grid(M=121, r_min=0.1, r_max=10.0)
        P = prolongation(grid)
        for k in (0, 1, 2):
            form = hr_lhs_form("1", N, k, grid)
            assert form.nonnegative
            eig = scipy.linalg.eigvalsh(form.restrict(P).toarray())
            assert eig.min() >= -1e-10 * abs(eig).max()

    def test_rhs_examples(self):
        N = 5
        grid = _grid()
        B0 = hr_rhs_form("1/r^2", N, 0, grid)
        assert _max_rel_diff(B0, assemble_weighted_form("1", -2, 1, N, grid)) < 1e-13
        B1 = hr_rhs_form("1/r^2", N, 1, grid)
        expected = assemble_weighted_form("1", -2, 1, N, grid) + 4 * assemble_weighted_form("1", -4, 0, N, grid)
        assert _max_rel_diff(B1, expected) < 1e-13
        assert B1.nonnegative

    def test_signed_rhs_is_indefinite(self):
        N = 5
        grid = _grid(M=401, r_min=1e-2, r_max=20.0)
        B = hr_rhs_form("N+2-r^2", N, 0, grid)
        assert not B.nonnegative
        u = bump_profile(3.5, 6.0).on_grid(grid)
        assert B.quadratic(u) < 0

    def test_mode_monotonicity(self):
        N = 5
        grid = _grid(M=201)
        u = bump_profile(0.2, 5.0).on_grid(grid)
        grad = assemble_weighted_form("1", -2, 1, N, grid).quadratic(u)
        mass = assemble_weighted_form("1", -4, 0, N, grid).quadratic(u)
        values = [2 * grad + (mode_coeff(k, N) + 3 * N - 9) * mass for k in range(6)]
        assert all(a <= b for a, b in zip(values, values[1:]))


class TestOtherForms:
    def test_rellich_rhs(self):
        grid = _grid()
        u = bump_profile(0.5, 2.0).on_grid(grid)
        assert rellich_rhs_form("1", 5, grid).quadratic(u) > 0
        zero = rellich_rhs_form("0", 5, grid)
        assert zero.quadratic(u) == 0.0
        assert zero.nonnegative
        assert zero.k is None

    def test_hardy_lhs(self):
        N = 5
        grid = _grid()
        form = hardy_lhs_form("1", N, 2, grid)
        expected = hr_rhs_form("1", N, 2, grid)
        assert _max_rel_diff(form, expected) < 1e-13
        assert form.k == 2

    def test_mass_form(self):
        grid = _grid()
        mass = mass_form("1", 5, -4, grid)
        assert mass.order == 0
        np.testing.assert_allclose(mass.matrix.diagonal(), grid.weights, rtol=1e-13)

    def test_arithmetic(self):
        grid = _grid(M=16)
        A = assemble_weighted_form("1", 0, 0, 5, grid)
        B = assemble_weighted_form("r", 0, 1, 5, grid)
        C = A - 2 * B
        assert C.order == 1
        assert not C.nonnegative
        assert (A + B).nonnegative
        assert C.shape == (16, 16)


class TestDecomposeCheck:
    def test_radial(self):
        grid = _grid(M=16, N=3)
        p = bump_profile(0.5, 1.5)
        assert decompose_check([(0, p)], grid) < 1e-6

    def test_mixture(self):
        grid = _grid(M=16, N=3)
        p = bump_profile(0.5, 1.5)
        q = bump_profile(0.5, 1.5, power=5)
        assert decompose_check([(0, p), (1, q)], grid) < 1e-5
        assert decompose_check([(2, p)], grid) < 1e-5

    def test_three_modes(self):
        grid = _grid(M=16, N=3)
        p = bump_profile(0.5, 1.5)
        q = bump_profile(0.5, 1.5, power=5)
        assert decompose_check([(0, p), (1, q), (2, p)], grid) < 1e-5

    def test_detects_a_wrong_rhs_matrix(self, monkeypatch):
        grid = _grid(M=16, N=3)
        p = bump_profile(0.5, 1.5)
        assembled = modeforms.hr_rhs_form
        monkeypatch.setattr(
            modeforms, "hr_rhs_form", lambda *args: 1.01 * assembled(*args)
        )
        assert decompose_check([(0, p), (1, p)], grid) > 5e-3

    def test_errors(self):
        grid = _grid(M=16, N=3)
        p = bump_profile(0.5, 1.5)
        with pytest.raises(PreconditionError):
            decompose_check([(0, p)], grid, N=4)
        with pytest.raises(PreconditionError):
            decompose_check([(0, p), (0, p)], grid)
        with pytest.raises(PreconditionError):
            decompose_check([(k, p) for k in range(4)], grid)
        with pytest.raises(PreconditionError):
            decompose_check([], grid)
        with pytest.raises(ProfileSupportError):
            decompose_check([(0, bump_profile(0.5, 200.0))], grid)
        with pytest.raises(ProfileSupportError):
            bump_profile(0.0, 1.0)


if __name__ == "__main__":
    from hardy_rellich_lab.tests import run_cov_test

    run_cov_test(__file__, "hardy_rellich_lab.modeforms", preview=False)
