# -*- coding: utf-8 -*-

import numpy as np
import pytest

from hardy_rellich_lab.exc import PreconditionError
from hardy_rellich_lab.grid import RadialDomain, GridSpec, build_grid
from hardy_rellich_lab.weightlang import ParamBinding, evaluate, parse, catalog, catalog_names
from hardy_rellich_lab.besselpair import (
    VerdictEnum,
    solve_pair_ode,
    ansatz_residual,
    is_bessel_pair,
    hardy_rellich_weight,
    shift_dimension,
)


def _setup(d: int, M: int = 1025, r_min=None, r_max=None, R=float("inf")):
    domain = RadialDomain(dim=d, radius=R)
    return domain, build_grid(domain, GridSpec(M=M, r_min=r_min, r_max=r_max))


class TestSolvePairOde:
    def test_constant_solution(self):
        domain, grid = _setup(5, M=129)
        cert = solve_pair_ode("1", "0", 5, domain, grid)
        assert cert.min_phi == pytest.approx(1.0)
        np.testing.assert_allclose(cert.phi, 1.0, atol=1e-9)
        assert cert.ode_residual < 1e-6

    def test_gaussian(self):
        d = 5
        domain, grid = _setup(d, M=513, r_min=1e-3, r_max=4.0)
        cert = solve_pair_ode("1", "N-r^2", d, domain, grid)
        assert cert.message == ""
        assert cert.min_phi > 0
        assert cert.ode_residual < 1e-4
        # phi follows exp(-r^2/2) up to the start value
        i = np.searchsorted(cert.r, 2.0)
        assert cert.phi[i] / cert.phi[0] == pytest.approx(np.exp(-cert.r[i] ** 2 / 2), rel=1e-3)

    def test_oscillating_solution(self):
        domain, grid = _setup(3, M=513, r_min=1e-3, r_max=50.0)
        cert = solve_pair_ode("1", "1", 3, domain, grid)
        # sin(r) / r changes sign at pi
        assert cert.min_phi < 0

    def test_non_positive_v(self):
        domain, grid = _setup(3, M=65)
        with pytest.raises(PreconditionError):
            solve_pair_ode("1-r", "0", 3, domain, grid)

    def test_export(self):
        domain, grid = _setup(5, M=600)
        data = solve_pair_ode("1", "2/r^2", 5, domain, grid).to_dict()
        assert len(data["phi"]["r"]) == 256
        assert data["d"] == 5


class TestAnsatzResidual:
    @pytest.mark.parametrize(
        "W,phi",
        [
            ("N-r^2", "exp(-r^2/2)"),
            ("(N-1)/r-1", "exp(-r)"),
            ("(N-2)^2/(4*r^2)", "r^(-(N-2)/2)"),
            ("0", "1"),
        ],
    )
    def test_exact_solutions(self, W, phi):
        _, grid = _setup(5, M=257, r_min=1e-2, r_max=10.0)
        assert ansatz_residual("1", W, 5, phi, grid) < 1e-8

    def test_wrong_candidate(self):
        _, grid = _setup(5, M=257, r_min=1e-2, r_max=10.0)
        assert ansatz_residual("1", "N-r^2", 5, "exp(-r)", grid) > 1e-2


class TestIsBesselPair:
    def test_critical_hardy_weight(self):
        domain, grid = _setup(5)
        cert = is_bessel_pair("1", "2.25/r^2", 5, domain, grid)
        assert cert.verdict == VerdictEnum.pair.value
        assert cert.min_phi > 0
        assert cert.form_margin > -1e-6
        assert cert.violating_profile is None

    def test_above_critical(self):
        domain, grid = _setup(5)
        cert = is_bessel_pair("1", "1.05*2.25/r^2", 5, domain, grid)
        assert cert.verdict == VerdictEnum.not_pair.value
        assert cert.form_margin < 0
        assert cert.violating_profile is not None
        assert cert.to_dict()["verdict"] == "not_pair"

    def test_dimension_seven(self):
        domain, grid = _setup(7)
        assert is_bessel_pair("1", "25/(4*r^2)", 7, domain, grid).verdict == "pair"
        # parameters default to the dimension
        assert is_bessel_pair("1", "(N-2)^2/(4*r^2)", 7, domain, grid).verdict == "pair"
        assert is_bessel_pair("1", "25/(2*r^2)", 7, domain, grid).verdict == "not_pair"

    def test_scaling_invariance(self):
        domain, grid = _setup(5, M=513)
        for W in ("2/r^2", "3/r^2"):
            plain = is_bessel_pair("1", W, 5, domain, grid).verdict
            scaled = is_bessel_pair("2", f"2*({W})", 5, domain, grid).verdict
            assert plain == scaled

    def test_zero_weight(self):
        domain, grid = _setup(5, M=257)
        cert = is_bessel_pair("1", "0", 5, domain, grid)
        assert cert.verdict == "pair"
        assert cert.min_phi == pytest.approx(1.0)

    def test_explicit_binding(self):
        domain, grid = _setup(7, M=513)
        cert = is_bessel_pair("1", "N^2/(4*r^2)", 7, domain, grid, binding=ParamBinding(N=5))
        assert cert.verdict == "pair"


class TestDimensionShift:
    def test_hardy_rellich_weight(self):
        W2 = hardy_rellich_weight("1", "0", 5)
        assert evaluate(W2, 2.0) == pytest.approx(1.0)
        W2 = hardy_rellich_weight("r^2", "0", 5)
        # 4 - 8
        assert evaluate(W2, 3.0) == pytest.approx(-4.0)

    def test_shift(self):
        binding = ParamBinding(N=5)
        W, d = shift_dimension("1", parse("(N-2)^2/(4*r^2)"), 5)
        assert d == 7
        assert evaluate(W, 1.0, binding) == pytest.approx(6.25)
        assert evaluate(W, 2.0, binding) == pytest.approx(6.25 / 4)
        W, d = shift_dimension("1", "0", 5)
        assert evaluate(W, 1.0) == pytest.approx(4.0)

    def test_shifted_pair_survives(self):
        W, d = shift_dimension("1", "(N-2)^2/(4*r^2)", 5)
        domain, grid = _setup(d)
        cert = is_bessel_pair("1", W, d, domain, grid, binding=ParamBinding(N=5))
        assert cert.verdict == "pair"


_BINDINGS = {
    "hr_ball_boundary": ParamBinding(N=5, R=1.0),
    "hr_brezis_vazquez": ParamBinding(N=5, R=1.0),
    "ckn_blt1": ParamBinding(N=5, b=0.5),
    "ckn_bgt1": ParamBinding(N=5, b=2.0),
}

# the growing companion of a decaying solution stays below round off here
_WINDOWS = {
    "heisenberg2": (1e-3, 5.0),
    "hydrogen2": (1e-3, 5.0),
    "ckn_blt1": (1e-3, 5.0),
    "ckn_bgt1": (1e-2, 10.0),
    "rellich": (1e-2, 1e2),
}

_CERTIFIED = ["hardy", "hardy_rellich", "heisenberg2", "hydrogen2", "ckn_blt1"]


def _catalog_grid(name: str, domain: RadialDomain, M: int = 1025):
    r_min, r_max = _WINDOWS.get(name, (None, None))
    return build_grid(domain, GridSpec(M=M, r_min=r_min, r_max=r_max))


def _entry(name: str):
    entry = catalog(name, _BINDINGS.get(name, ParamBinding(N=5)))
    return entry, _catalog_grid(name, entry.domain)


class TestCatalogPairs:
    @pytest.mark.parametrize("name", _CERTIFIED)
    def test_certified(self, name):
        entry, grid = _entry(name)
        cert = is_bessel_pair(*entry, grid)
        assert cert.verdict == "pair", (cert.form_margin, cert.min_phi)

    @pytest.mark.parametrize("name", ["hr_ball_boundary", "hr_brezis_vazquez", "ckn_bgt1"])
    def test_never_rejected(self, name):
        entry, grid = _entry(name)
        assert is_bessel_pair(*entry, grid).verdict != "not_pair"

    def test_second_order_pair_keeps_base_dimension(self):
        entry, grid = _entry("hardy_rellich")
        assert entry.dim == 7
        assert evaluate(entry.W, 1.0) == pytest.approx(6.25)
        # N bound to d = 7 gives 49/4 > 25/4
        assert is_bessel_pair("1", "N^2/(4*r^2)", 7, entry.domain, grid).verdict == "not_pair"

    @pytest.mark.parametrize("name", catalog_names())
    def test_routes_agree(self, name):
        entry, grid = _entry(name)
        cert = is_bessel_pair(*entry, grid)
        ode_positive = cert.min_phi is not None and cert.min_phi > 0
        assert not (ode_positive and cert.verdict == "not_pair")

    def test_rellich_weight_is_not_a_pair(self):
        entry, grid = _entry("rellich")
        cert = is_bessel_pair(*entry, grid)
        assert cert.verdict == "not_pair"
        assert cert.min_phi is None or cert.min_phi < 0

    @pytest.mark.parametrize("name", _CERTIFIED)
    def test_shift_keeps_pair(self, name):
        entry, _ = _entry(name)
        W, d = shift_dimension(entry.V, entry.W, entry.dim)
        assert d == entry.dim + 2
        domain = RadialDomain(dim=d, radius=entry.domain.radius)
        cert = is_bessel_pair(entry.V, W, d, domain, _catalog_grid(name, domain))
        assert cert.verdict == "pair", (cert.form_margin, cert.min_phi)

    def test_shifted_solution(self):
        entry, _ = _entry("heisenberg2")
        W, d = shift_dimension(entry.V, entry.W, entry.dim)
        _, grid = _setup(d, M=257, r_min=1e-2, r_max=5.0)
        # exp(-r^2/2) solves the ODE in dimension 7, divided by r in 9
        assert ansatz_residual(entry.V, W, d, "exp(-r^2/2)/r", grid) < 1e-8


if __name__ == "__main__":
    from hardy_rellich_lab.tests import run_cov_test

    run_cov_test(__file__, "hardy_rellich_lab.besselpair", preview=False)
