# -*- coding: utf-8 -*-

"""
Sufficient conditions on the weights of the Hardy-Rellich inequality.

Pointwise conditions, sampled on a dense log spaced set:

- ``con``:   ``W - 2 V / r^2 + 2 V' / r - V'' >= 0``
- ``con2``:  ``V'' - 3 V' / r - (N - 5) V / r^2 <= 0``
- ``con3``:  ``V'' - 3 V' / r - (3N - 5) V / r^2 <= 0``

Integral conditions, nonnegativity of the quadratic form::

    Q[u] = 2 int V r^{N-3} |u'|^2 - int V'' r^{N-3} |u|^2
           - (N - 5) int V' r^{N-4} |u|^2 + kappa int V r^{N-5} |u|^2
           - int W r^{N-3} |u|^2

with ``kappa = 3N - 9`` (``conm``) or ``5N - 9`` (``conm2``).
"""

import typing as T
import math
import enum
import logging
import dataclasses

import numpy as np
import scipy.optimize

from .exc import PreconditionError
from .grid import Grid, RadialDomain, DEFAULT_R_MIN_FACTOR, DEFAULT_R_MAX_WHOLE_SPACE
from .modeforms import assemble_weighted_form, mass_form
from .spectrum import FORM_TOL, MarginResult, margin_eig
from .weightlang import WeightExpr, ParamBinding, as_weight, derivative, evaluate, parse
from .utils import T_DATA

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 10_000

T_WEIGHT = T.Union[str, float, WeightExpr]


class ConditionEnum(str, enum.Enum):
    con = "con"
    con2 = "con2"
    con3 = "con3"
    conm = "conm"
    conm2 = "conm2"

    @classmethod
    def parse(cls, value: T.Union[str, "ConditionEnum"]) -> "ConditionEnum":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())

    @property
    def is_pointwise(self) -> bool:
        return self in (ConditionEnum.con, ConditionEnum.con2, ConditionEnum.con3)


@dataclasses.dataclass
class ConditionReport:
    """
    :param worst_point: radius of the worst sample, or of the peak of the
        witness profile for integral conditions.
    :param worst_value: value of the condition's expression there (pointwise)
        or the form margin (integral).
    :param normalized_defect: worst value of the expression scaled by
        ``r^2 / |V|`` and signed so that negative means violated.
    :param sign_changes: radii where the expression changes sign.
    :param witness: violating profile of a failed integral condition.
    """

    id: str
    N: int
    V: str
    W: T.Optional[str]
    holds: bool
    worst_point: T.Optional[float] = None
    worst_value: T.Optional[float] = None
    normalized_defect: T.Optional[float] = None
    samples: T.Optional[int] = None
    sign_changes: T.List[float] = dataclasses.field(default_factory=list)
    margin: T.Optional[float] = None
    margin_sensitivity: T.Optional[float] = None
    witness: T.Optional[T_DATA] = None

    def to_dict(self) -> T_DATA:
        return dataclasses.asdict(self)


_R = parse("r")


def condition_expression(
    id: T.Union[str, ConditionEnum],
    V: T_WEIGHT,
    W: T.Optional[T_WEIGHT],
    N: int,
) -> T.Tuple[WeightExpr, float]:
    """
    The expression of a pointwise condition and its orientation: the
    condition reads ``orientation * expression >= 0``.
    """
    id = ConditionEnum.parse(id)
    V = as_weight(V)
    dV = derivative(V)
    ddV = derivative(dV)
    r2 = _R * _R
    if id is ConditionEnum.con:
        if W is None:
            raise PreconditionError("condition con needs W")
        expr = as_weight(W) - 2 * V / r2 + 2 * dV / _R - ddV
        return expr, 1.0
    if id is ConditionEnum.con2:
        kappa = N - 5
    elif id is ConditionEnum.con3:
        kappa = 3 * N - 5
    else:
        raise PreconditionError(f"{id.value} is not a pointwise condition")
    expr = ddV - 3 * dV / _R - kappa * V / r2
    return expr, -1.0


def _sample_range(domain: RadialDomain) -> T.Tuple[float, float]:
    R = domain.radius
    r_lo = DEFAULT_R_MIN_FACTOR * min(R, 1.0)
    r_hi = R * (1.0 - 1.0e-6) if domain.is_bounded else DEFAULT_R_MAX_WHOLE_SPACE
    return r_lo, r_hi


def check_pointwise(
    id: T.Union[str, ConditionEnum],
    V: T_WEIGHT,
    W: T.Optional[T_WEIGHT],
    N: int,
    domain: RadialDomain,
    samples: int = DEFAULT_SAMPLES,
    tol: float = FORM_TOL,
    binding: T.Optional[ParamBinding] = None,
) -> ConditionReport:
    """
    Sample a pointwise condition on ``samples`` log spaced radii, refine the
    worst sample by a bounded scalar minimization between its neighbours and
    locate sign changes by root bracketing. The condition holds iff the
    normalized defect stays above ``-tol``.
    """
    id = ConditionEnum.parse(id)
    V = as_weight(V)
    binding = (binding or ParamBinding()).with_defaults(N=N, R=domain.radius)
    expr, orientation = condition_expression(id, V, W, N)

    def normalized(r):
        return orientation * evaluate(expr, r, binding) * r * r / np.abs(
            evaluate(V, r, binding)
        )

    r_lo, r_hi = _sample_range(domain)
    r = np.geomspace(r_lo, r_hi, samples)
    values = normalized(r)
    i = int(np.argmin(values))
    worst_r, worst = float(r[i]), float(values[i])
    lo, hi = r[max(i - 1, 0)], r[min(i + 1, samples - 1)]
    if hi > lo:
        res = scipy.optimize.minimize_scalar(
            lambda t: normalized(math.exp(t)),
            bounds=(math.log(lo), math.log(hi)),
            method="bounded",
        )
        if res.fun < worst:
            worst_r, worst = float(math.exp(res.x)), float(res.fun)

    sign_changes = list()
    flips = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    for j in flips:
        root = scipy.optimize.brentq(
            lambda t: normalized(math.exp(t)),
            math.log(r[j]),
            math.log(r[j + 1]),
        )
        sign_changes.append(float(math.exp(root)))

    report = ConditionReport(
        id=id.value,
        N=N,
        V=str(V),
        W=None if W is None else str(as_weight(W)),
        holds=bool(worst >= -tol),
        worst_point=worst_r,
        worst_value=float(evaluate(expr, worst_r, binding)),
        normalized_defect=worst,
        samples=samples,
        sign_changes=sign_changes,
    )
    logger.debug(
        "%s: normalized defect %r at r=%r, holds=%s",
        id.value, worst, worst_r, report.holds,
    )
    return report


def integral_kappa(id: T.Union[str, ConditionEnum], N: int) -> float:
    id = ConditionEnum.parse(id)
    if id is ConditionEnum.conm:
        return 3.0 * N - 9.0
    if id is ConditionEnum.conm2:
        return 5.0 * N - 9.0
    raise PreconditionError(f"{id.value} is not an integral condition")


def _integral_margin(
    kappa: float,
    V: WeightExpr,
    W: WeightExpr,
    N: int,
    grid: Grid,
    binding: T.Optional[ParamBinding],
):
    dV = derivative(V)
    ddV = derivative(dV)
    A = 2.0 * assemble_weighted_form(V, -2, 1, N, grid, binding)
    for coeff, weight, r_power in (
        (-1.0, ddV, -2),
        (-(N - 5.0), dV, -3),
        (kappa, V, -4),
    ):
        if coeff != 0 and not weight.is_zero():
            A = A + coeff * assemble_weighted_form(weight, r_power, 0, N, grid, binding)
    B = assemble_weighted_form(W, -2, 0, N, grid, binding)
    mass = mass_form(V, N, -4, grid, binding)
    return margin_eig(A, B, mass)


def check_integral(
    id: T.Union[str, ConditionEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    grid: Grid,
    tol: float = FORM_TOL,
    binding: T.Optional[ParamBinding] = None,
) -> ConditionReport:
    """
    Smallest eigenvalue of ``Q`` against ``int V r^{N-5} |u|^2`` over
    profiles vanishing at both truncation ends. The condition holds iff the
    margin is above ``-(tol + s)``, ``s`` the change of the margin when the
    resolution is halved. The raw margin is reported, so margins of ``conm``
    and ``conm2`` differ by exactly ``2N``.
    """
    id = ConditionEnum.parse(id)
    kappa = integral_kappa(id, N)
    V, W = as_weight(V), as_weight(W)
    fine = _integral_margin(kappa, V, W, N, grid, binding)
    coarse = _integral_margin(kappa, V, W, N, grid.coarsen(), binding)
    result = MarginResult(value=fine.value, coarse_value=coarse.value, pair=fine)
    holds = result.holds(tol)
    peak = int(np.argmax(np.abs(fine.profile)))
    report = ConditionReport(
        id=id.value,
        N=N,
        V=str(V),
        W=str(W),
        holds=holds,
        worst_point=float(grid.r[peak]),
        worst_value=result.value,
        margin=result.value,
        margin_sensitivity=result.sensitivity,
        witness=None if holds else fine.profile_dict(),
    )
    logger.debug("%s: margin %r, holds=%s", id.value, result.value, holds)
    return report
