# -*- coding: utf-8 -*-

"""
One dimensional quadratic forms of the spherical harmonics decomposition.

Writing ``u(x) = sum_k u_k(r) phi_k(sigma)`` with Laplace-Beltrami
eigenvalues ``c_k = k (N + k - 2)`` turns every radially weighted energy on
``R^N`` into a sum of independent forms in ``u_k``. This module discretizes
the building block

.. math::

    \\int_0^R w(r) r^{N - 1 + p} |u^{(j)}(r)|^2 dr,    j = 0, 1, 2

on a :class:`~hardy_rellich_lab.grid.Grid` and combines the blocks into the
per mode forms of the Hardy, Hardy-Rellich and Rellich problems.

Matrices act on all ``M`` nodal values. Boundary conditions are applied later
by restriction with :func:`~hardy_rellich_lab.grid.prolongation`.
"""

import typing as T
import math
import logging
import dataclasses

import numpy as np
import scipy.sparse
import scipy.special
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

from .exc import EvaluationError, PreconditionError, ProfileSupportError
from .grid import Grid, GridSpec, build_grid
from .utils import T_DATA
from .weightlang import WeightExpr, ParamBinding, as_weight, evaluate, derivative

logger = logging.getLogger(__name__)


def mode_coeff(k: int, N: int) -> float:
    """
    Eigenvalue ``c_k = k (N + k - 2)`` of the Laplace-Beltrami operator on
    the sphere ``S^{N-1}``.
    """
    if int(k) != k or k < 0:
        raise PreconditionError(f"mode index must be an integer >= 0, got {k!r}")
    if int(N) != N or N < 1:
        raise PreconditionError(f"dimension must be an integer >= 1, got {N!r}")
    return float(k * (N + k - 2))


@dataclasses.dataclass(frozen=True)
class ModeIndex:
    k: int
    N: int

    @property
    def c_k(self) -> float:
        return mode_coeff(self.k, self.N)


@dataclasses.dataclass(frozen=True, eq=False)
class FormMatrix:
    """
    A symmetric ``M x M`` matrix ``K`` with ``u^T K u`` approximating a
    quadratic form over nodal values ``u``.

    :param matrix: sparse symmetric matrix.
    :param order: highest derivative order of the form.
    :param label: human readable description of the form.
    :param nonnegative: whether the form is known to be positive
        semidefinite (nonnegative weights on every block).
    """

    matrix: scipy.sparse.csr_matrix
    order: int
    label: str
    N: int
    grid: Grid
    k: T.Optional[int] = None
    nonnegative: bool = False

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        return FormMatrix(
            matrix=(self.matrix + other.matrix).tocsr(),
            order=max(self.order, other.order),
            label=f"{self.label} + {other.label}",
            N=self.N,
            grid=self.grid,
            k=self.k if self.k is not None else other.k,
            nonnegative=self.nonnegative and other.nonnegative,
        )

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "FormMatrix":
        scalar = float(scalar)
        return FormMatrix(
            matrix=(scalar * self.matrix).tocsr(),
            order=self.order,
            label=f"{scalar:g} * ({self.label})",
            N=self.N,
            grid=self.grid,
            k=self.k,
            nonnegative=self.nonnegative and scalar >= 0,
        )

    __rmul__ = __mul__

    @property
    def shape(self) -> T.Tuple[int, int]:
        return self.matrix.shape

    def quadratic(self, u: np.ndarray) -> float:
        """
        Evaluate ``u^T K u`` for a nodal vector ``u``.
        """
        u = np.asarray(u, dtype=float)
        return float(u @ (self.matrix @ u))

    def restrict(self, P: scipy.sparse.spmatrix) -> scipy.sparse.csr_matrix:
        return (P.T @ self.matrix @ P).tocsr()

    def asymmetry(self) -> float:
        """
        ``max |K - K^T| / max |K|``.
        """
        diff = abs(self.matrix - self.matrix.T)
        scale = abs(self.matrix).max()
        if scale == 0:
            return 0.0
        return float(diff.max() / scale)

    def is_symmetric(self, rtol: float = 1.0e-12) -> bool:
        return self.asymmetry() <= rtol

    def bandwidth(self) -> int:
        coo = self.matrix.tocoo()
        if coo.nnz == 0:
            return 0
        return int(np.max(np.abs(coo.row - coo.col)))

    def to_dict(self) -> T_DATA:
        """
        Banded export: ``upper[j]`` is the ``j``-th super diagonal.
        """
        bw = self.bandwidth()
        return dict(
            label=self.label,
            order=self.order,
            N=self.N,
            k=self.k,
            M=self.shape[0],
            bandwidth=bw,
            upper=[self.matrix.diagonal(j).tolist() for j in range(bw + 1)],
        )


# ------------------------------------------------------------------------------
# Assembly
# ------------------------------------------------------------------------------
def _binding_for(grid: Grid, N: int, binding: T.Optional[ParamBinding]) -> ParamBinding:
    return (binding or ParamBinding()).with_defaults(N=N, R=grid.domain.radius)


def _sample_nodes(
    weight: WeightExpr,
    r: np.ndarray,
    binding: ParamBinding,
) -> np.ndarray:
    """
    Evaluate at the nodes. The interior must evaluate, the two end nodes may
    fail (a weight singular at ``R``) and are then set to zero, they only
    matter for free ends.
    """
    values = np.zeros_like(r)
    values[1:-1] = evaluate(weight, r[1:-1], binding)
    for i in (0, len(r) - 1):
        try:
            values[i] = evaluate(weight, float(r[i]), binding)
        except EvaluationError as e:
            logger.debug("weight %s dropped at end node: %s", weight, e)
    return values


def _second_derivative_operator(grid: Grid) -> scipy.sparse.csr_matrix:
    """
    Rows approximate ``u''(r_i)`` at every node, with
    ``u_rr = (u_xixi - u_xi r_xixi / r_xi) / r_xi^2``. Interior rows use
    central differences, the end rows second order one sided ones.
    """
    M, h = grid.M, grid.h
    a = grid.r_xixi / grid.r_xi
    s = 1.0 / grid.r_xi**2
    i = np.arange(1, M - 1)
    lower = (1.0 / h**2 + a[i] / (2 * h)) * s[i]
    main = (-2.0 / h**2) * s[i]
    upper = (1.0 / h**2 - a[i] / (2 * h)) * s[i]
    rows = np.concatenate([i, i, i])
    cols = np.concatenate([i - 1, i, i + 1])
    vals = np.concatenate([lower, main, upper])
    # one sided: u_xixi ~ (2, -5, 4, -1) / h^2, u_xi ~ (-3, 4, -1) / (2h)
    d2 = np.array([2.0, -5.0, 4.0, -1.0]) / h**2
    d1 = np.array([-3.0, 4.0, -1.0, 0.0]) / (2 * h)
    for node, sign, idx in ((0, 1.0, np.arange(4)), (M - 1, -1.0, M - 1 - np.arange(4))):
        stencil = (d2 - a[node] * sign * d1) * s[node]
        rows = np.concatenate([rows, np.full(4, node)])
        cols = np.concatenate([cols, idx])
        vals = np.concatenate([vals, stencil])
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(M, M))


def _first_difference(grid: Grid) -> scipy.sparse.csr_matrix:
    M = grid.M
    ones = np.ones(M - 1) / grid.h
    return scipy.sparse.diags(
        [-ones, ones], [0, 1], shape=(M - 1, M), format="csr"
    )


def assemble_weighted_form(
    weight: T.Union[str, float, WeightExpr],
    r_power: int,
    order: int,
    N: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
    k: T.Optional[int] = None,
) -> FormMatrix:
    """
    Discretize ``int weight(r) r^{N-1+r_power} |u^{(order)}|^2 dr``.

    - order 0: trapezoid rule, a diagonal matrix.
    - order 1: midpoint rule on cell differences.
    - order 2: trapezoid rule on the nodal second derivative, with exact
      chain rule factors of the mesh map.

    Every rule is second order in the mesh coordinate.

    :param binding: parameter values, ``N`` and ``R`` default to the
        dimension and the grid's radius.
    :raises EvaluationError: the weight can not be evaluated on the grid.
    """
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order!r}")
    weight = as_weight(weight)
    binding = _binding_for(grid, N, binding)
    power = N - 1 + r_power
    if order == 1:
        g = evaluate(weight, grid.r_mid, binding) * grid.r_mid**power
        D = _first_difference(grid)
        K = D.T @ scipy.sparse.diags(g * grid.h / grid.r_xi_mid) @ D
    else:
        g = _sample_nodes(weight, grid.r, binding) * grid.r**power
        w = g * grid.weights
        if order == 0:
            K = scipy.sparse.diags(w)
        else:
            L = _second_derivative_operator(grid)
            K = L.T @ scipy.sparse.diags(w) @ L
    K = K.tocsr()
    if order == 2:
        K = (0.5 * (K + K.T)).tocsr()
    primes = "'" * order
    label = f"int ({weight}) r^{power} |u{primes}|^2"
    return FormMatrix(
        matrix=K,
        order=order,
        label=label,
        N=N,
        grid=grid,
        k=k,
        nonnegative=bool(np.all(g >= 0)),
    )


def _combine(
    terms: T.List[T.Tuple[float, WeightExpr, int, int]],
    N: int,
    grid: Grid,
    binding: T.Optional[ParamBinding],
    k: T.Optional[int],
    label: str,
    nonnegative: T.Optional[bool] = None,
) -> FormMatrix:
    form = None
    for coeff, weight, r_power, order in terms:
        if coeff == 0 or weight.is_zero():
            continue
        block = coeff * assemble_weighted_form(
            weight, r_power, order, N, grid, binding=binding, k=k
        )
        form = block if form is None else form + block
    if form is None:
        form = FormMatrix(
            matrix=scipy.sparse.csr_matrix((grid.M, grid.M)),
            order=0,
            label="0",
            N=N,
            grid=grid,
            k=k,
            nonnegative=True,
        )
    if nonnegative is None:
        nonnegative = form.nonnegative
    return dataclasses.replace(form, label=label, k=k, nonnegative=nonnegative)


def hr_lhs_form(
    V: T.Union[str, float, WeightExpr],
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> FormMatrix:
    """
    Mode ``k`` part of ``int V |Delta u|^2``::

        int V r^{N-1} |u''|^2 + (N - 1 + 2 c_k) int V r^{N-3} |u'|^2
        + (c_k^2 + 2 (N - 4) c_k) int V r^{N-5} |u|^2
        - (N - 1) int V' r^{N-2} |u'|^2
        - (N - 5) c_k int V' r^{N-4} |u|^2
        - c_k int V'' r^{N-3} |u|^2
    """
    V = as_weight(V)
    c = mode_coeff(k, N)
    dV = derivative(V)
    ddV = derivative(dV)
    terms = [
        (1.0, V, 0, 2),
        (N - 1 + 2 * c, V, -2, 1),
        (c * c + 2 * (N - 4) * c, V, -4, 0),
        (-(N - 1), dV, -1, 1),
        (-(N - 5) * c, dV, -3, 0),
        (-c, ddV, -2, 0),
    ]
    # a sum of squares whenever V >= 0
    v_nonneg = assemble_weighted_form(V, 0, 0, N, grid, binding).nonnegative
    return _combine(
        terms, N, grid, binding, k,
        label=f"hr_lhs(V={V}, N={N}, k={k})",
        nonnegative=v_nonneg,
    )


def hr_rhs_form(
    W: T.Union[str, float, WeightExpr],
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> FormMatrix:
    """
    Mode ``k`` part of ``int W |grad u|^2``:
    ``int W r^{N-1} |u'|^2 + c_k int W r^{N-3} |u|^2``. ``W`` may be signed.
    """
    W = as_weight(W)
    c = mode_coeff(k, N)
    return _combine(
        [(1.0, W, 0, 1), (c, W, -2, 0)],
        N, grid, binding, k,
        label=f"hr_rhs(W={W}, N={N}, k={k})",
    )


def rellich_rhs_form(
    W: T.Union[str, float, WeightExpr],
    N: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> FormMatrix:
    """
    ``int W r^{N-1} |u|^2``, the same matrix for every mode.
    """
    W = as_weight(W)
    return _combine(
        [(1.0, W, 0, 0)], N, grid, binding, None,
        label=f"rellich_rhs(W={W}, N={N})",
    )


def hardy_lhs_form(
    V: T.Union[str, float, WeightExpr],
    N: int,
    k: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> FormMatrix:
    """
    Mode ``k`` part of ``int V |grad u|^2``:
    ``int V r^{N-1} |u'|^2 + c_k int V r^{N-3} |u|^2``.
    """
    V = as_weight(V)
    c = mode_coeff(k, N)
    return _combine(
        [(1.0, V, 0, 1), (c, V, -2, 0)],
        N, grid, binding, k,
        label=f"hardy_lhs(V={V}, N={N}, k={k})",
    )


def mass_form(
    V: T.Union[str, float, WeightExpr],
    N: int,
    r_power: int,
    grid: Grid,
    binding: T.Optional[ParamBinding] = None,
) -> FormMatrix:
    """
    ``int V r^{N-1+r_power} |u|^2``, used to normalize margins.
    """
    V = as_weight(V)
    form = assemble_weighted_form(V, r_power, 0, N, grid, binding)
    return dataclasses.replace(form, label=f"mass(V={V}, r^{N - 1 + r_power})")


# ------------------------------------------------------------------------------
# Decomposition identity in three dimensions
# ------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class RadialProfile:
    """
    A polynomial radial profile supported on ``[a, b]``, zero outside.
    """

    poly: Polynomial
    a: float
    b: float

    def value(self, r: np.ndarray, order: int = 0) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        p = self.poly.deriv(order) if order else self.poly
        inside = (r >= self.a) & (r <= self.b)
        return np.where(inside, p(r), 0.0)

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return self.value(r)

    def on_grid(self, grid: Grid) -> np.ndarray:
        return self.value(grid.r)


def bump_profile(a: float, b: float, power: int = 6) -> RadialProfile:
    """
    ``((r - a)(b - r))^power`` scaled to peak value 1, a ``C^{power-1}``
    profile with support ``[a, b]``.
    """
    if not 0 < a < b:
        raise ProfileSupportError(f"need 0 < a < b, got ({a}, {b})")
    base = Polynomial([-a * b, a + b, -1.0])  # (r - a)(b - r)
    peak = (0.5 * (b - a)) ** 2
    return RadialProfile(poly=(base / peak) ** power, a=float(a), b=float(b))


def _zonal_harmonic(k: int, cos_theta: np.ndarray) -> np.ndarray:
    return math.sqrt((2 * k + 1) / (4 * math.pi)) * scipy.special.eval_legendre(
        k, cos_theta
    )


def _sphere_rule(n_theta: int, n_phi: int) -> T.Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre in ``cos(theta)`` times trapezoid in ``phi``. Returns unit
    vectors of shape ``(n, 3)`` and weights summing to ``4 pi``.
    """
    t, wt = leggauss(n_theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    T_, P_ = np.meshgrid(t, phi, indexing="ij")
    s = np.sqrt(1.0 - T_**2)
    points = np.stack([s * np.cos(P_), s * np.sin(P_), T_], axis=-1).reshape(-1, 3)
    weights = np.outer(wt, np.full(n_phi, 2 * math.pi / n_phi)).ravel()
    return points, weights


def decompose_check(
    mode_profiles: T.List[T.Tuple[int, RadialProfile]],
    grid: Grid,
    N: int = 3,
    W: T.Union[str, float, WeightExpr] = "1/r^2",
    n_r: int = 48,
    n_theta: int = 16,
    n_phi: int = 16,
    delta: float = 1.0e-3,
    n_forms: int = 2049,
) -> float:
    """
    Compare ``int |Delta u|^2`` and ``int W |grad u|^2`` of
    ``u(x) = sum_k u_k(|x|) Y_k(x / |x|)`` computed by three dimensional
    quadrature with the sums of the one dimensional mode forms.

    ``Y_k`` is the zonal harmonic of degree ``k``. Derivatives of ``u`` are
    fourth order central differences with step ``delta`` in Cartesian
    coordinates. The one dimensional side evaluates :func:`hr_lhs_form` and
    :func:`hr_rhs_form` of every mode on the sampled profile, on a grid of
    ``n_forms`` nodes spanning the supports.

    :returns: the larger relative discrepancy of the two integrals.
    :raises PreconditionError: ``N != 3``, more than three modes or a
        repeated mode.
    :raises ProfileSupportError: a profile is not supported inside
        ``(grid.r_min, grid.r_max)``.
    """
    if N != 3:
        raise PreconditionError("the decomposition check runs in dimension 3")
    if not 1 <= len(mode_profiles) <= 3:
        raise PreconditionError("need between one and three mode profiles")
    ks = [k for k, _ in mode_profiles]
    if len(set(ks)) != len(ks):
        raise PreconditionError(f"modes must be distinct, got {ks}")
    for k, p in mode_profiles:
        if not (grid.r_min < p.a and p.b < grid.r_max):
            raise ProfileSupportError(
                f"profile of mode {k} supported on [{p.a}, {p.b}] is not inside "
                f"({grid.r_min}, {grid.r_max})"
            )
    W = as_weight(W)
    binding = _binding_for(grid, N, None)
    a = min(p.a for _, p in mode_profiles)
    b = max(p.b for _, p in mode_profiles)

    # one dimensional side: the mode forms on a grid over the joint support,
    # Richardson extrapolated against its coarsening
    support = build_grid(grid.domain, GridSpec(M=n_forms, r_min=a, r_max=b))

    def mode_sums(g: Grid) -> T.Tuple[float, float]:
        lap, grad = 0.0, 0.0
        for k, p in mode_profiles:
            u = p.on_grid(g)
            lap += hr_lhs_form(1, N, k, g, binding).quadratic(u)
            grad += hr_rhs_form(W, N, k, g, binding).quadratic(u)
        return lap, grad

    lap_f, grad_f = mode_sums(support)
    lap_c, grad_c = mode_sums(support.coarsen())
    lap_1d = (4.0 * lap_f - lap_c) / 3.0
    grad_1d = (4.0 * grad_f - grad_c) / 3.0

    # three dimensional side
    x, wx = leggauss(n_r)
    r1 = 0.5 * (b - a) * x + 0.5 * (b + a)
    w1 = 0.5 * (b - a) * wx
    W1 = evaluate(W, r1, binding)
    sigma, ws = _sphere_rule(n_theta, n_phi)
    X = (r1[:, None, None] * sigma[None, :, :]).reshape(-1, 3)
    wX = (w1[:, None] * r1[:, None] ** 2 * ws[None, :]).ravel()
    WX = np.repeat(W1, len(ws))

    def u_at(points: np.ndarray) -> np.ndarray:
        rr = np.linalg.norm(points, axis=-1)
        ct = points[..., 2] / rr
        return sum(p.value(rr) * _zonal_harmonic(k, ct) for k, p in mode_profiles)

    u_center = u_at(X)
    grad_sq = np.zeros(len(X))
    laplacian = np.zeros(len(X))
    for j in range(3):
        e = np.zeros(3)
        e[j] = delta
        fp1, fm1 = u_at(X + e), u_at(X - e)
        fp2, fm2 = u_at(X + 2 * e), u_at(X - 2 * e)
        d1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * delta)
        d2 = (-fp2 + 16 * fp1 - 30 * u_center + 16 * fm1 - fm2) / (12 * delta**2)
        grad_sq += d1**2
        laplacian += d2
    lap_3d = float(np.sum(wX * laplacian**2))
    grad_3d = float(np.sum(wX * WX * grad_sq))

    residual = max(
        abs(lap_3d - lap_1d) / abs(lap_1d),
        abs(grad_3d - grad_1d) / abs(grad_1d),
    )
    logger.debug(
        "decomposition check: |Delta u|^2 %r vs %r, W|grad u|^2 %r vs %r",
        lap_3d, lap_1d, grad_3d, grad_1d,
    )
    return float(residual)
