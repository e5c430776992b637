# -*- coding: utf-8 -*-

"""
Bessel pairs.

``(V, W)`` is a ``d``-dimensional Bessel pair on ``(0, R)`` when

.. math::

    (r^{d-1} V \\varphi')' + r^{d-1} W \\varphi = 0

has a positive solution. Equivalently the weighted Hardy inequality
``int V |grad u|^2 >= int W |u|^2`` holds in dimension ``d``. Both routes are
computed here:

1. the ODE, integrated from ``r_min`` with ``phi = 1, phi' = 0``,
2. the smallest eigenvalue of the radial Hardy form ``A - B``.

The ODE runs in ``t = log r`` with Pruefer variables
``phi = rho cos(theta)``, ``r V phi' = rho sin(theta)``, so that fast growing
or decaying solutions never overflow and ``phi > 0`` iff ``cos(theta) > 0``.

The parameter ``N`` of a weight is the base dimension of its family and is
kept apart from the certification dimension ``d``: a second order pair such
as ``N^2/(4 r^2)`` lives in ``d = N + 2``. ``N`` falls back to ``d`` only when
neither the weights (see :func:`~hardy_rellich_lab.weightlang.bind`) nor the
``binding`` fix it.
"""

import typing as T
import enum
import logging
import dataclasses

import numpy as np
import scipy.integrate

from .exc import PreconditionError, ConvergenceError, EvaluationError
from .grid import Grid, RadialDomain
from .weightlang import (
    WeightExpr,
    ParamBinding,
    as_weight,
    derivative,
    evaluate,
    parse,
)
from .spectrum import FORM_TOL, ProblemEnum, compute_margin
from .utils import T_DATA, downsample

logger = logging.getLogger(__name__)

ODE_RTOL = 1.0e-10
ODE_ATOL = 1.0e-12
FD_STEP = 1.0e-6

T_WEIGHT = T.Union[str, float, WeightExpr]


class VerdictEnum(str, enum.Enum):
    pair = "pair"
    not_pair = "not_pair"
    inconclusive = "inconclusive"


@dataclasses.dataclass
class BesselCertificate:
    """
    Evidence for or against the Bessel pair property.

    :param phi: the ODE solution at ``r``, scaled to max norm one.
    :param min_phi: ``min cos(theta)`` over the nodes, positive iff the ODE
        solution stays positive.
    :param ode_residual: largest normalized defect of the integrated solution
        in the ODE.
    :param form_margin: smallest eigenvalue of the Hardy form ``A - B``
        against ``int V r^{d-3} |u|^2``.
    :param violating_profile: eigenvector of a negative margin.
    """

    V: str
    W: str
    d: int
    r: T.Optional[np.ndarray] = None
    phi: T.Optional[np.ndarray] = None
    min_phi: T.Optional[float] = None
    ode_residual: T.Optional[float] = None
    form_margin: T.Optional[float] = None
    margin_sensitivity: T.Optional[float] = None
    verdict: str = VerdictEnum.inconclusive.value
    violating_profile: T.Optional[T_DATA] = None
    grid: T.Optional[T_DATA] = None
    message: str = ""

    def to_dict(self) -> T_DATA:
        data = dict(
            V=self.V,
            W=self.W,
            d=self.d,
            min_phi=self.min_phi,
            ode_residual=self.ode_residual,
            form_margin=self.form_margin,
            margin_sensitivity=self.margin_sensitivity,
            verdict=self.verdict,
            violating_profile=self.violating_profile,
            grid=self.grid,
            message=self.message,
        )
        if self.phi is not None:
            data["phi"] = downsample(self.r, self.phi)
        return data


def _ode_nodes(grid: Grid) -> np.ndarray:
    r = grid.r
    if grid.domain.is_bounded and r[-1] >= grid.domain.radius:
        # weights may be singular at R
        r = r[:-1]
    return r


def _binding_for(d: int, domain: RadialDomain, binding: T.Optional[ParamBinding]):
    return (binding or ParamBinding()).with_defaults(N=d, R=domain.radius)


def solve_pair_ode(
    V: T_WEIGHT,
    W: T_WEIGHT,
    d: int,
    domain: RadialDomain,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> BesselCertificate:
    """
    Integrate the pair ODE with ``phi(r_min) = 1``, ``phi'(r_min) = 0`` by the
    implicit Radau IIA method and fill ``phi``, ``min_phi`` and
    ``ode_residual`` of a certificate. A failed integration is reported in
    ``message`` and leaves those fields empty.

    :raises PreconditionError: ``V`` is not positive on the nodes.
    """
    V, W = as_weight(V), as_weight(W)
    binding = _binding_for(d, domain, binding)
    cert = BesselCertificate(V=str(V), W=str(W), d=d, grid=grid.to_dict())
    r_nodes = _ode_nodes(grid)
    V_nodes = evaluate(V, r_nodes, binding)
    if np.any(V_nodes <= 0):
        bad = float(r_nodes[np.argmax(V_nodes <= 0)])
        raise PreconditionError(f"V must be positive, V({bad!r}) <= 0")

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        r = np.exp(t)
        v = evaluate(V, r, binding)
        r2w = r * r * evaluate(W, r, binding)
        theta = y[0]
        s, c = np.sin(theta), np.cos(theta)
        d_theta = -(d - 2) * s * c - r2w * c * c - s * s / v
        d_log_rho = s * c * (1.0 / v - r2w) - (d - 2) * s * s
        return np.array([d_theta, d_log_rho])

    t_nodes = np.log(r_nodes)
    try:
        sol = scipy.integrate.solve_ivp(
            rhs,
            t_span=(t_nodes[0], t_nodes[-1]),
            y0=[0.0, 0.0],
            method="Radau",
            t_eval=t_nodes,
            dense_output=True,
            rtol=ODE_RTOL,
            atol=ODE_ATOL,
        )
    except EvaluationError as e:
        cert.message = f"ODE integration failed: {e}"
        logger.info(cert.message)
        return cert
    if sol.status != 0:
        cert.message = f"ODE integration failed: {sol.message}"
        logger.info(cert.message)
        return cert
    logger.debug("pair ODE: %d rhs evaluations, %d steps", sol.nfev, len(sol.t))

    theta, log_rho = sol.y
    cos_theta = np.cos(theta)
    cert.r = r_nodes
    cert.min_phi = float(np.min(cos_theta))
    cert.phi = np.exp(log_rho - np.max(log_rho)) * cos_theta

    # defect of the dense output in both first order equations, divided by rho
    inner = t_nodes[1:-1]
    dy = (sol.sol(inner + FD_STEP) - sol.sol(inner - FD_STEP)) / (2 * FD_STEP)
    th, _ = sol.sol(inner)
    s, c = np.sin(th), np.cos(th)
    r = np.exp(inner)
    v = evaluate(V, r, binding)
    r2w = r * r * evaluate(W, r, binding)
    # phi_t = q / V
    e1 = dy[1] * c - dy[0] * s - s / v
    # q_t = -(d - 2) q - r^2 W phi
    e2 = dy[1] * s + dy[0] * c + (d - 2) * s + r2w * c
    res1 = np.abs(e1) / (1.0 + np.abs(s / v))
    res2 = np.abs(e2) / (1.0 + np.abs((d - 2) * s) + np.abs(r2w * c))
    cert.ode_residual = float(
        max(np.max(res1, initial=0.0), np.max(res2, initial=0.0))
    )
    return cert


def ansatz_residual(
    V: T_WEIGHT,
    W: T_WEIGHT,
    d: int,
    phi: T_WEIGHT,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> float:
    """
    Largest normalized defect of an explicit candidate ``phi`` in the pair
    ODE, from exact symbolic derivatives::

        V phi'' + ((d - 1) V / r + V') phi' + W phi = 0
    """
    V, W, phi = as_weight(V), as_weight(W), as_weight(phi)
    binding = _binding_for(d, grid.domain, binding)
    r = _ode_nodes(grid)
    d_phi = derivative(phi)
    terms = [
        evaluate(V, r, binding) * evaluate(derivative(d_phi), r, binding),
        ((d - 1) * evaluate(V, r, binding) / r + evaluate(derivative(V), r, binding))
        * evaluate(d_phi, r, binding),
        evaluate(W, r, binding) * evaluate(phi, r, binding),
    ]
    total = np.abs(sum(terms))
    scale = sum(np.abs(t) for t in terms) + 1e-300
    return float(np.max(total / scale))


def is_bessel_pair(
    V: T_WEIGHT,
    W: T_WEIGHT,
    d: int,
    domain: RadialDomain,
    grid: Grid,
    tol: float = FORM_TOL,
    binding: T.Optional[ParamBinding] = None,
) -> BesselCertificate:
    """
    Certify ``(V, W)`` by both routes and combine them:

    - ``not_pair`` when the form margin is below ``-(tol + s)``, ``s`` its
      change under halving the resolution. The eigenvector is attached.
    - ``pair`` when the margin is above that bound and the ODE solution
      stays positive.
    - ``inconclusive`` otherwise.
    """
    V, W = as_weight(V), as_weight(W)
    binding = _binding_for(d, domain, binding)
    try:
        cert = solve_pair_ode(V, W, d, domain, grid, binding)
    except ConvergenceError as e:
        cert = BesselCertificate(V=str(V), W=str(W), d=d, grid=grid.to_dict())
        cert.message = str(e)
    margin = compute_margin(ProblemEnum.hardy, V, W, d, 0, grid, binding)
    cert.form_margin = margin.value
    cert.margin_sensitivity = margin.sensitivity
    if margin.violates(tol):
        cert.verdict = VerdictEnum.not_pair.value
        cert.violating_profile = margin.pair.profile_dict()
    elif cert.min_phi is not None and cert.min_phi > 0:
        cert.verdict = VerdictEnum.pair.value
    else:
        cert.verdict = VerdictEnum.inconclusive.value
    logger.debug(
        "pair check d=%d: margin %r, min_phi %r -> %s",
        d, cert.form_margin, cert.min_phi, cert.verdict,
    )
    return cert


_R = parse("r")


def hardy_rellich_weight(V: T_WEIGHT, W1: T_WEIGHT, N: int) -> WeightExpr:
    """
    ``W2 = (N - 1) V / r^2 - (N - 1) V' / r + W1``, the right hand weight of
    the Hardy-Rellich inequality ``int V |Delta u|^2 >= int W2 |grad u|^2``
    built from an ``N``-dimensional pair ``(V, W1)``.
    """
    V, W1 = as_weight(V), as_weight(W1)
    dV = derivative(V)
    return (N - 1) * V / (_R * _R) - (N - 1) * dV / _R + W1


def shift_dimension(
    V: T_WEIGHT,
    W1: T_WEIGHT,
    N: int,
) -> T.Tuple[WeightExpr, int]:
    """
    If ``phi`` solves the ``N``-dimensional ODE of ``(V, W1)`` then
    ``psi = phi / r`` solves the ``(N + 2)``-dimensional ODE of
    ``(V, W2 + N V' / r)``. Returns that second slot as one expression and
    ``N + 2``.
    """
    V = as_weight(V)
    W2 = hardy_rellich_weight(V, W1, N)
    return W2 + N * derivative(V) / _R, N + 2
