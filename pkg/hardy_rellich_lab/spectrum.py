# -*- coding: utf-8 -*-

"""
Best constants, inequality margins and mode scans.

For one mode ``k`` every problem is a pencil ``(A, B)`` of
:class:`~hardy_rellich_lab.modeforms.FormMatrix`:

=============== ================================ ==============================
problem         A                                B
=============== ================================ ==============================
hardy           int V r^{N-1} |u'|^2 + c_k ...   int W r^{N-1} |u|^2
hardy_rellich   mode k part of int V |Delta u|^2 mode k part of int W |grad u|^2
rellich         mode k part of int V |Delta u|^2 int W r^{N-1} |u|^2
=============== ================================ ==============================

- The **best constant** is the smallest eigenvalue of ``A u = lambda B u``
  and needs ``B >= 0``.
- The **margin** is the smallest eigenvalue of ``A - B`` against the natural
  mass of the problem. The inequality ``A >= B`` holds at mode ``k`` iff the
  margin is nonnegative. It works for signed ``W``.

First order problems vanish at both truncation ends (Dirichlet), second
order ones are clamped (``u = u' = 0``).
"""

import typing as T
import math
import enum
import logging
import dataclasses
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.optimize

from .exc import (
    HardyRellichLabError,
    IndefiniteFormError,
    PreconditionError,
    GridError,
)
from .grid import (
    Grid,
    GridSpec,
    RadialDomain,
    BoundaryEnum,
    build_grid,
    prolongation,
)
from .modeforms import (
    FormMatrix,
    mode_coeff,
    assemble_weighted_form,
    hr_lhs_form,
    hr_rhs_form,
    rellich_rhs_form,
    hardy_lhs_form,
    mass_form,
)
from .weightlang import WeightExpr, ParamBinding, as_weight
from .eigen import EIGEN_TOL, MAX_ITERATIONS, smallest_eigenpair
from .waiter import Waiter
from .utils import T_DATA, downsample

logger = logging.getLogger(__name__)

FORM_TOL = 1.0e-6
CONVERGED_SENSITIVITY = 5.0e-3
DEFAULT_K_RANGE = range(0, 9)
MELLIN_TAU_MAX = 100.0
TIE_RTOL = 1.0e-9

T_WEIGHT = T.Union[str, float, WeightExpr]


class ProblemEnum(str, enum.Enum):
    hardy = "hardy"
    hardy_rellich = "hardy_rellich"
    rellich = "rellich"

    @classmethod
    def parse(cls, value: T.Union[str, "ProblemEnum"]) -> "ProblemEnum":
        """
        Accept ``hardy-rellich`` as well as ``hardy_rellich``.
        """
        if isinstance(value, cls):
            return value
        return cls(str(value).replace("-", "_"))

    @property
    def order(self) -> int:
        return 1 if self is ProblemEnum.hardy else 2

    @property
    def mass_power(self) -> int:
        """
        ``r`` power offset of the natural mass ``int V r^{N-1+p} |u|^2``,
        the one with the dilation homogeneity of the problem.
        """
        return -2 if self is ProblemEnum.hardy else -4


def _boundary_for(order: int) -> BoundaryEnum:
    return BoundaryEnum.clamped if order == 2 else BoundaryEnum.dirichlet


# ------------------------------------------------------------------------------
# Generalized eigenvalue problems on forms
# ------------------------------------------------------------------------------
@dataclasses.dataclass
class EigenPair:
    """
    :param value: the eigenvalue.
    :param profile: nodal values of the eigenvector on ``grid``, max norm one.
    """

    value: float
    profile: np.ndarray
    grid: Grid

    def profile_dict(self, max_points: int = 256) -> T_DATA:
        return downsample(self.grid.r, self.profile, max_points)


def _restricted_pencil(
    A: FormMatrix,
    B: FormMatrix,
    mass: T.Optional[FormMatrix],
    left: T.Optional[str],
    right: T.Optional[str],
):
    order = max(A.order, B.order)
    left = left or _boundary_for(order)
    right = right or _boundary_for(order)
    P = prolongation(A.grid, left, right)
    scale = None
    if mass is not None:
        scale = mass.restrict(P).diagonal()
    return P, A.restrict(P), B.restrict(P), scale


def min_gen_eig(
    A: FormMatrix,
    B: FormMatrix,
    mass: T.Optional[FormMatrix] = None,
    left: T.Optional[str] = None,
    right: T.Optional[str] = None,
    tol: float = EIGEN_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> EigenPair:
    """
    Smallest ``lambda`` with ``A u = lambda B u`` over the admissible nodal
    vectors. Boundary conditions default to clamped ends when a second order
    term is present and to Dirichlet ends otherwise.

    :param mass: positive diagonal form used to scale the pencil.
    :raises IndefiniteFormError: ``B`` is not known to be nonnegative, use
        :func:`margin_eig` instead.
    :raises ConvergenceError: the solver ran out of iterations.
    """
    if not B.nonnegative:
        raise IndefiniteFormError(
            f"the right hand side {B.label} is not nonnegative, "
            f"compute an inequality margin instead"
        )
    P, A_r, B_r, scale = _restricted_pencil(A, B, mass, left, right)
    res = smallest_eigenpair(A_r, B_r, scale=scale, tol=tol, max_iter=max_iter)
    return EigenPair(value=res.value, profile=P @ res.vector, grid=A.grid)


def margin_eig(
    A: FormMatrix,
    B: FormMatrix,
    mass: FormMatrix,
    left: T.Optional[str] = None,
    right: T.Optional[str] = None,
    tol: float = EIGEN_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> EigenPair:
    """
    Smallest eigenvalue of ``A - B`` against a positive diagonal ``mass``.
    ``B`` may be indefinite.
    """
    P, A_r, B_r, scale = _restricted_pencil(A, B, mass, left, right)
    M_r = mass.restrict(P)
    res = smallest_eigenpair(
        (A_r - B_r).tocsr(), M_r, scale=scale, tol=tol, max_iter=max_iter
    )
    return EigenPair(value=res.value, profile=P @ res.vector, grid=A.grid)


# ------------------------------------------------------------------------------
# Problem pencils
# ------------------------------------------------------------------------------
@dataclasses.dataclass
class ProblemForms:
    A: FormMatrix
    B: FormMatrix
    mass: FormMatrix


def problem_forms(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    mass_power: T.Optional[int] = None,
) -> ProblemForms:
    problem = ProblemEnum.parse(problem)
    if mass_power is None:
        mass_power = problem.mass_power
    if problem is ProblemEnum.hardy:
        A = hardy_lhs_form(V, N, k, grid, binding)
        B = rellich_rhs_form(W, N, grid, binding)
    elif problem is ProblemEnum.hardy_rellich:
        A = hr_lhs_form(V, N, k, grid, binding)
        B = hr_rhs_form(W, N, k, grid, binding)
    else:
        A = hr_lhs_form(V, N, k, grid, binding)
        B = rellich_rhs_form(W, N, grid, binding)
    mass = mass_form(V, N, mass_power, grid, binding)
    return ProblemForms(A=A, B=B, mass=mass)


def _window_extrapolation_applies(grid: Grid) -> bool:
    return grid.uses_log_map and not grid.domain.is_bounded


def _constant_on(
    problem: ProblemEnum,
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding],
    extrapolate: bool,
) -> EigenPair:
    forms = problem_forms(problem, V, W, N, k, grid, binding)
    pair = min_gen_eig(forms.A, forms.B, forms.mass)
    if extrapolate and _window_extrapolation_applies(grid):
        # lambda(L) = lambda_inf + kappa / L^2 in the log window length L
        wide = grid.widen()
        forms_w = problem_forms(problem, V, W, N, k, wide, binding)
        pair_w = min_gen_eig(forms_w.A, forms_w.B, forms_w.mass)
        value = (4.0 * pair_w.value - pair.value) / 3.0
        logger.debug(
            "window extrapolation %s k=%d: %r (L) %r (2L) -> %r",
            problem.value, k, pair.value, pair_w.value, value,
        )
        pair = EigenPair(value=value, profile=pair.profile, grid=grid)
    return pair


@dataclasses.dataclass
class ConstantResult:
    """
    A best constant with its grid sensitivity, the relative change when the
    resolution is halved.
    """

    value: float
    coarse_value: float
    pair: EigenPair

    @property
    def sensitivity(self) -> float:
        return abs(self.value - self.coarse_value) / max(abs(self.value), 1e-300)

    @property
    def converged(self) -> bool:
        return self.sensitivity < CONVERGED_SENSITIVITY

    def to_dict(self) -> T_DATA:
        return dict(
            value=self.value,
            coarse_value=self.coarse_value,
            sensitivity=self.sensitivity,
            converged=self.converged,
        )


def compute_best_constant(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    extrapolate: bool = True,
) -> ConstantResult:
    """
    :func:`best_constant` together with the value on the coarsened grid.
    """
    problem = ProblemEnum.parse(problem)
    fine = _constant_on(problem, V, W, N, k, grid, binding, extrapolate)
    coarse = _constant_on(problem, V, W, N, k, grid.coarsen(), binding, extrapolate)
    return ConstantResult(value=fine.value, coarse_value=coarse.value, pair=fine)


def best_constant(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    extrapolate: bool = True,
) -> float:
    """
    Best constant of mode ``k``, the smallest eigenvalue of the problem's
    pencil. On the whole space with a log mesh the truncation of the log
    window is extrapolated away from windows of length ``L`` and ``2L``.

    :raises IndefiniteFormError: the right hand side form is not nonnegative.
    """
    problem = ProblemEnum.parse(problem)
    return _constant_on(problem, V, W, N, k, grid, binding, extrapolate).value


@dataclasses.dataclass
class MarginResult:
    """
    An inequality margin with the value on the coarsened grid. The
    inequality is accepted when ``value >= -(tol + |value - coarse_value|)``.
    """

    value: float
    coarse_value: T.Optional[float]
    pair: EigenPair

    @property
    def sensitivity(self) -> float:
        if self.coarse_value is None:
            return 0.0
        return abs(self.value - self.coarse_value)

    def holds(self, tol: float = FORM_TOL) -> bool:
        return self.value >= -(tol + self.sensitivity)

    def violates(self, tol: float = FORM_TOL) -> bool:
        return not self.holds(tol)

    def to_dict(self) -> T_DATA:
        return dict(
            value=self.value,
            coarse_value=self.coarse_value,
            sensitivity=self.sensitivity,
        )


def _margin_on(
    problem: ProblemEnum,
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding],
    mass_power: T.Optional[int],
) -> EigenPair:
    forms = problem_forms(problem, V, W, N, k, grid, binding, mass_power)
    return margin_eig(forms.A, forms.B, forms.mass)


def compute_margin(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    mass_power: T.Optional[int] = None,
    with_sensitivity: bool = True,
) -> MarginResult:
    problem = ProblemEnum.parse(problem)
    fine = _margin_on(problem, V, W, N, k, grid, binding, mass_power)
    coarse_value = None
    if with_sensitivity:
        coarse_value = _margin_on(
            problem, V, W, N, k, grid.coarsen(), binding, mass_power
        ).value
    return MarginResult(value=fine.value, coarse_value=coarse_value, pair=fine)


def inequality_margin(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    mass_power: T.Optional[int] = None,
) -> float:
    """
    Smallest eigenvalue of ``A - B`` against the natural mass
    ``int V r^{N-1+p} |u|^2`` (``p = -2`` for hardy, ``-4`` otherwise, or
    ``mass_power``).

    For the second order problems the mass is ``V r^{N-5}``, not the volume
    element ``r^{N-1}``; ``mass_power=0`` gives ``int V r^{N-1} |u|^2``.
    Changing the mass changes the value, never the sign.
    """
    return compute_margin(
        problem, V, W, N, k, grid, binding, mass_power, with_sensitivity=False
    ).value


# ------------------------------------------------------------------------------
# Closed form constants of power weights
# ------------------------------------------------------------------------------
def _mellin_symbol(problem: ProblemEnum, N: int, k: int) -> T.Callable[[float], float]:
    c = mode_coeff(k, N)
    if problem is ProblemEnum.hardy:
        sigma = (2.0 - N) / 2.0
        return lambda tau: sigma**2 + tau**2 + c

    sigma = (4.0 - N) / 2.0

    def numerator(tau: float) -> float:
        s = complex(sigma, tau)
        return (
            abs(s * (s - 1)) ** 2
            + (N - 1 + 2 * c) * abs(s) ** 2
            + c * c
            + 2 * (N - 4) * c
        )

    if problem is ProblemEnum.rellich:
        return numerator
    if k == 0:
        # numerator / |s|^2 with the common factor |s|^2 cancelled
        return lambda tau: abs(complex(sigma - 1, tau)) ** 2 + N - 1
    return lambda tau: numerator(tau) / (sigma**2 + tau**2 + c)


def mellin_constant(problem: T.Union[str, ProblemEnum], N: int, k: int) -> float:
    """
    Best constant of mode ``k`` for ``V = 1`` and the scale invariant power
    weight of the problem (``1/r^2`` for hardy and hardy_rellich, ``1/r^4``
    for rellich), from the profiles ``r^s`` with ``s`` on the critical line:
    minimize the symbol over ``tau`` in ``[0, 100]``.

    Example::

        >>> mellin_constant("hardy_rellich", 4, 1)
        3.0
    """
    problem = ProblemEnum.parse(problem)
    symbol = _mellin_symbol(problem, N, k)
    res = scipy.optimize.minimize_scalar(
        symbol,
        bounds=(0.0, MELLIN_TAU_MAX),
        method="bounded",
        options=dict(xatol=1e-12),
    )
    return float(min(symbol(0.0), res.fun))


# ------------------------------------------------------------------------------
# Mode scans
# ------------------------------------------------------------------------------
class ValueKindEnum(str, enum.Enum):
    constant = "constant"
    margin = "margin"


@dataclasses.dataclass
class ModeResult:
    k: int
    value: T.Optional[float]
    converged: bool
    sensitivity: T.Optional[float]
    kind: str = ValueKindEnum.constant.value
    error: T.Optional[str] = None

    def to_dict(self) -> T_DATA:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class SpectralReport:
    """
    Per mode values of one problem. ``argmin_k`` is the mode of the smallest
    value, ``radial_optimal`` tells whether the radial mode attains it (ties
    count as radial optimal).
    """

    problem: str
    N: int
    V: str
    W: str
    modes: T.List[ModeResult]
    grid: T_DATA

    @property
    def valued_modes(self) -> T.List[ModeResult]:
        return [m for m in self.modes if m.value is not None]

    @property
    def global_value(self) -> T.Optional[float]:
        values = [m.value for m in self.valued_modes]
        return min(values) if values else None

    @property
    def argmin_k(self) -> T.Optional[int]:
        best = self.global_value
        if best is None:
            return None
        cutoff = best + TIE_RTOL * abs(best)
        return min(m.k for m in self.valued_modes if m.value <= cutoff)

    @property
    def radial_optimal(self) -> bool:
        return self.argmin_k == 0

    def value_of(self, k: int) -> T.Optional[float]:
        for m in self.modes:
            if m.k == k:
                return m.value
        return None

    def to_dict(self) -> T_DATA:
        return dict(
            problem=self.problem,
            N=self.N,
            V=self.V,
            W=self.W,
            modes=[m.to_dict() for m in self.modes],
            argmin_k=self.argmin_k,
            radial_optimal=self.radial_optimal,
            global_value=self.global_value,
            grid=self.grid,
        )

    def to_rows(self) -> T.List[T_DATA]:
        """
        One row per mode, the CSV layout.
        """
        return [
            dict(
                problem=self.problem,
                N=self.N,
                k=m.k,
                value=m.value,
                converged=m.converged,
                sensitivity=m.sensitivity,
            )
            for m in self.modes
        ]


def _scan_one(
    problem: ProblemEnum,
    V: WeightExpr,
    W: WeightExpr,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding],
) -> ModeResult:
    try:
        forms = problem_forms(problem, V, W, N, k, grid, binding)
        if forms.B.nonnegative:
            res = compute_best_constant(problem, V, W, N, k, grid, binding)
            return ModeResult(
                k=k,
                value=res.value,
                converged=res.converged,
                sensitivity=res.sensitivity,
                kind=ValueKindEnum.constant.value,
            )
        res = compute_margin(problem, V, W, N, k, grid, binding)
        scale = max(abs(res.value), 1.0)
        return ModeResult(
            k=k,
            value=res.value,
            converged=res.sensitivity / scale < CONVERGED_SENSITIVITY,
            sensitivity=res.sensitivity / scale,
            kind=ValueKindEnum.margin.value,
        )
    except HardyRellichLabError as e:
        logger.warning("mode k=%d failed: %s", k, e)
        return ModeResult(
            k=k, value=None, converged=False, sensitivity=None, error=str(e)
        )


def mode_scan(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    grid: Grid,
    k_range: T.Iterable[int] = DEFAULT_K_RANGE,
    binding: T.Optional[ParamBinding] = None,
    workers: int = 1,
) -> SpectralReport:
    """
    Best constant (for ``W >= 0``) or inequality margin (signed ``W``) for
    every mode in ``k_range``. Failed modes are kept in the report with their
    error message. With ``workers > 1`` the modes run in a thread pool, the
    report is ordered by ``k`` either way.
    """
    problem = ProblemEnum.parse(problem)
    V, W = as_weight(V), as_weight(W)
    ks = sorted(set(int(k) for k in k_range))
    if not ks:
        raise PreconditionError("empty mode range")
    run = lambda k: _scan_one(problem, V, W, N, k, grid, binding)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            modes = list(executor.map(run, ks))
    else:
        modes = [run(k) for k in ks]
    return SpectralReport(
        problem=problem.value,
        N=N,
        V=str(V),
        W=str(W),
        modes=modes,
        grid=grid.to_dict(),
    )


@dataclasses.dataclass
class SymmetryVerdict:
    radial_optimal: bool
    argmin_k: int
    gap: float

    def to_dict(self) -> T_DATA:
        return dataclasses.asdict(self)

    def to_text(self) -> str:
        if self.radial_optimal:
            return f"RADIAL OPTIMAL: argmin k={self.argmin_k}, gap={self.gap:.6g}"
        return f"SYMMETRY BREAKING: argmin k={self.argmin_k}, gap={self.gap:.6g}"


def symmetry_verdict(report: SpectralReport) -> SymmetryVerdict:
    """
    Whether the radial mode is optimal, and the gap
    ``value(argmin_k) - value(0)``.

    :raises PreconditionError: fewer than two converged modes or no value
        for ``k = 0``.
    """
    converged = [m for m in report.modes if m.converged and m.value is not None]
    if len(converged) < 2:
        raise PreconditionError(
            f"need at least 2 converged modes, got {len(converged)}"
        )
    value_0 = report.value_of(0)
    if value_0 is None:
        raise PreconditionError("the report has no value for the radial mode")
    argmin_k = report.argmin_k
    return SymmetryVerdict(
        radial_optimal=argmin_k == 0,
        argmin_k=argmin_k,
        gap=report.value_of(argmin_k) - value_0,
    )


# ------------------------------------------------------------------------------
# Cross checks
# ------------------------------------------------------------------------------
@dataclasses.dataclass
class EquivalenceCheck:
    c_hr_radial: float
    c_hardy_np2: float

    @property
    def rel_diff(self) -> float:
        return abs(self.c_hr_radial - self.c_hardy_np2) / abs(self.c_hardy_np2)

    def to_dict(self) -> T_DATA:
        return dict(
            c_hr_radial=self.c_hr_radial,
            c_hardy_np2=self.c_hardy_np2,
            rel_diff=self.rel_diff,
        )


def _grid_for(
    N: int,
    R: float,
    grid: T.Optional[T.Union[Grid, GridSpec]],
) -> Grid:
    if isinstance(grid, Grid):
        if grid.domain.radius != R:
            raise GridError(
                f"grid radius {grid.domain.radius} does not match R={R}"
            )
        return grid
    return build_grid(RadialDomain(dim=N, radius=R), grid)


def radial_equivalence_check(
    W: T_WEIGHT,
    N: int,
    R: float = math.inf,
    grid: T.Optional[T.Union[Grid, GridSpec]] = None,
    binding: T.Optional[ParamBinding] = None,
) -> EquivalenceCheck:
    """
    With ``u' = r v`` the radial Hardy-Rellich form in dimension ``N`` is the
    Hardy form of ``v`` in dimension ``N + 2``:

    .. math::

        \\int r^{N-1} |u''|^2 + (N-1) \\int r^{N-3} |u'|^2
        = \\int r^{N+1} |v'|^2,
        \\qquad \\int W r^{N-1} |u'|^2 = \\int W r^{N+1} |v|^2

    so the radial Hardy-Rellich constant of ``(1, W)`` in dimension ``N``
    and the Hardy constant of ``(1, W)`` in dimension ``N + 2`` agree.
    """
    grid = _grid_for(N, R, grid)
    c_hr = best_constant(ProblemEnum.hardy_rellich, 1, W, N, 0, grid, binding)
    c_hardy = best_constant(ProblemEnum.hardy, 1, W, N + 2, 0, grid, binding)
    return EquivalenceCheck(c_hr_radial=c_hr, c_hardy_np2=c_hardy)


def remainder_constant(
    N: int,
    R: float = 1.0,
    grid: T.Optional[T.Union[Grid, GridSpec]] = None,
) -> float:
    """
    Best constant of the Hardy remainder on the ball ``B_R``::

        int r^{N-1} |u'|^2 - (N - 2)^2 / 4 int r^{N-3} |u|^2
            >= lambda int r^{N-1} |u|^2

    After ``u = r^{-(N-2)/2} v`` the left side is ``int r |v'|^2`` and the
    right side ``int r |v|^2``, the radial Dirichlet problem of the disc,
    so ``lambda = z_0^2 / R^2`` with ``z_0`` the first zero of ``J_0``. The
    inner end is left free.
    """
    if not math.isfinite(R):
        raise PreconditionError("the remainder constant needs a finite radius")
    grid = _grid_for(N, R, grid)
    A = assemble_weighted_form(1, 0, 1, 2, grid)
    B = assemble_weighted_form(1, 0, 0, 2, grid)
    pair = min_gen_eig(
        A, B, mass=B, left=BoundaryEnum.free, right=BoundaryEnum.dirichlet
    )
    return pair.value


class UncertaintyEnum(str, enum.Enum):
    heisenberg = "heisenberg"
    hydrogen = "hydrogen"
    ckn = "ckn"


_UNCERTAINTY_WEIGHTS = {
    # name: (w_C, w_D)
    UncertaintyEnum.heisenberg: ("r^2", "1"),
    UncertaintyEnum.hydrogen: ("1", "1/r"),
    UncertaintyEnum.ckn: ("r^(-2*b)", "r^(-(b+1))"),
}


def uncertainty_reference(
    name: T.Union[str, UncertaintyEnum],
    N: int,
    b: T.Optional[float] = None,
) -> float:
    """
    The constant ``K`` known for the radial mode.
    """
    name = UncertaintyEnum(name)
    if name is UncertaintyEnum.heisenberg:
        return (N + 2) / 2
    if name is UncertaintyEnum.hydrogen:
        return (N + 1) / 2
    if b is None:
        raise PreconditionError("the ckn family needs b")
    if b < 1:
        return (N + 1 - b) / 2
    return (N + b - 1) / 2


def uncertainty_constant(
    name: T.Union[str, UncertaintyEnum],
    N: int,
    k: int,
    grid: Grid,
    b: T.Optional[float] = None,
) -> float:
    """
    Best ``K`` of mode ``k`` in the second order uncertainty principle

    .. math::

        \\left(\\int |\\Delta u|^2\\right)^{1/2}
        \\left(\\int w_C |\\nabla u|^2\\right)^{1/2}
        \\geq K \\int w_D |\\nabla u|^2

    Both sides scale the same way under dilations, which turn the product
    into a sum, so ``K = lambda_min(A + C, D) / 2``.
    """
    name = UncertaintyEnum(name)
    if name is UncertaintyEnum.ckn and (b is None or b == 1):
        raise PreconditionError("the ckn family needs b != 1")
    binding = ParamBinding(N=N, R=grid.domain.radius, b=b)
    w_C, w_D = _UNCERTAINTY_WEIGHTS[name]
    A = hr_lhs_form(1, N, k, grid, binding)
    C = hr_rhs_form(w_C, N, k, grid, binding)
    D = hr_rhs_form(w_D, N, k, grid, binding)
    mass = mass_form(1, N, -4, grid, binding)
    return 0.5 * min_gen_eig(A + C, D, mass).value


@dataclasses.dataclass
class RefinementReport:
    """
    Values on a sequence of grids with ``M_{j+1} = 2 M_j - 1`` and the
    Richardson extrapolation of the last two.
    """

    levels: T.List[T.Tuple[int, float]]
    extrapolated: float
    converged: bool

    @property
    def value(self) -> float:
        return self.levels[-1][1]

    def to_dict(self) -> T_DATA:
        return dict(
            levels=[dict(M=M, value=v) for M, v in self.levels],
            value=self.value,
            extrapolated=self.extrapolated,
            converged=self.converged,
        )


def refine_best_constant(
    problem: T.Union[str, ProblemEnum],
    V: T_WEIGHT,
    W: T_WEIGHT,
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    rtol: float = 1.0e-4,
    max_levels: int = 4,
) -> RefinementReport:
    """
    Refine the mesh until two successive best constants agree to ``rtol``.
    Not converging within ``max_levels`` refinements is reported through
    ``converged``, not raised.
    """
    levels = [(grid.M, best_constant(problem, V, W, N, k, grid, binding))]
    converged = False
    try:
        for _ in Waiter(max_levels, label="grid refinement"):
            grid = grid.with_spec(M=2 * grid.M - 1)
            levels.append((grid.M, best_constant(problem, V, W, N, k, grid, binding)))
            prev, last = levels[-2][1], levels[-1][1]
            if abs(last - prev) <= rtol * abs(last):
                converged = True
                break
    except HardyRellichLabError as e:
        logger.info("refinement stopped: %s", e)
    last = levels[-1][1]
    extrapolated = last
    if len(levels) > 1:
        extrapolated = (4.0 * last - levels[-2][1]) / 3.0
    return RefinementReport(
        levels=levels,
        extrapolated=extrapolated,
        converged=converged,
    )
