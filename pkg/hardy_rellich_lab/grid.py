# -*- coding: utf-8 -*-

"""
Graded radial meshes on ``(0, R)`` and quadrature over them.

A grid is uniform in a mesh coordinate ``xi`` and the radius is a smooth
function ``r(xi)``:

- ``log``: ``xi = log r``. Power weights become translation invariant.
- ``mapped``: ``xi = log(r / (R - r))`` on a finite ball, graded toward both
  ends. On the whole space it is the same as ``log``.

The truncation bounds ``r_min`` and ``r_max`` are the first and the last node.
Boundary conditions are imposed by a prolongation matrix ``P`` so that every
admissible nodal vector is ``u = P v``.
"""

import typing as T
import math
import enum
import logging
import dataclasses

import numpy as np
import scipy.sparse
import scipy.special
import scipy.integrate

from .exc import GridError
from .utils import T_DATA

logger = logging.getLogger(__name__)

DEFAULT_M = 2048
MIN_NODES = 4
MIN_USER_NODES = 16
DEFAULT_R_MAX_WHOLE_SPACE = 1.0e4
DEFAULT_R_MIN_FACTOR = 1.0e-4


class MeshKindEnum(str, enum.Enum):
    log = "log"
    mapped = "mapped"


class BoundaryEnum(str, enum.Enum):
    dirichlet = "dirichlet"  # u = 0
    clamped = "clamped"  # u = 0 and u' = 0
    free = "free"  # no constraint


@dataclasses.dataclass(frozen=True)
class RadialDomain:
    """
    The interval ``(0, R)`` seen as the radial part of a ball (or of the
    whole space when ``R`` is infinite) in dimension ``dim``.
    """

    dim: int
    radius: float = math.inf

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise GridError(f"dimension must be an integer >= 1, got {self.dim!r}")
        if not self.radius > 0:
            raise GridError(f"radius must be positive, got {self.radius!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def is_bounded(self) -> bool:
        return math.isfinite(self.radius)

    def to_dict(self) -> T_DATA:
        return dict(dim=self.dim, radius=self.radius)


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """
    User facing grid parameters. ``None`` bounds are resolved against the
    domain by :meth:`resolve`.

    :param M: number of nodes, endpoints included. The command line asks for
        at least ``MIN_USER_NODES``; library calls accept down to
        ``MIN_NODES`` so that coarsened grids of sensitivity estimates and
        small inner grids stay valid.
    :param r_min: inner truncation radius, defaults to ``1e-4 * min(R, 1)``.
    :param r_max: outer truncation radius, defaults to ``R`` (``R * (1 - 1e-4)``
        for the mapped mesh, whose coordinate is infinite at ``R``) or ``1e4``
        on the whole space.
    :param kind: ``log`` or ``mapped``.
    """

    M: int = DEFAULT_M
    r_min: T.Optional[float] = None
    r_max: T.Optional[float] = None
    kind: str = MeshKindEnum.log.value

    def resolve(self, domain: RadialDomain) -> "GridSpec":
        try:
            kind = MeshKindEnum(self.kind)
        except ValueError:
            raise GridError(
                f"unknown mesh kind {self.kind!r}, "
                f"choose from {[k.value for k in MeshKindEnum]}"
            )
        if int(self.M) != self.M or self.M < MIN_NODES:
            raise GridError(f"need at least {MIN_NODES} nodes, got M={self.M!r}")
        R = domain.radius
        r_min = self.r_min
        if r_min is None:
            r_min = DEFAULT_R_MIN_FACTOR * min(R, 1.0)
        r_max = self.r_max
        if r_max is None:
            if not domain.is_bounded:
                r_max = DEFAULT_R_MAX_WHOLE_SPACE
                logger.info(
                    "whole space truncated at r_max=%s, check the sensitivity "
                    "to r_max for the tail",
                    r_max,
                )
            elif kind is MeshKindEnum.mapped:
                r_max = R * (1.0 - DEFAULT_R_MIN_FACTOR)
            else:
                r_max = R
        r_min, r_max = float(r_min), float(r_max)
        if not (0 < r_min < r_max):
            raise GridError(f"need 0 < r_min < r_max, got ({r_min}, {r_max})")
        if r_max > R:
            raise GridError(f"r_max={r_max} exceeds the radius R={R}")
        if kind is MeshKindEnum.mapped and domain.is_bounded and r_max >= R:
            raise GridError("the mapped mesh needs r_max < R")
        return GridSpec(M=int(self.M), r_min=r_min, r_max=r_max, kind=kind.value)

    def to_dict(self) -> T_DATA:
        return dataclasses.asdict(self)


def _log_map(xi: np.ndarray) -> T.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = np.exp(xi)
    return r, r, r


def _logit_map(
    xi: np.ndarray, R: float
) -> T.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    r = R * scipy.special.expit(xi)
    r_xi = r * (R - r) / R
    r_xixi = r_xi * (1.0 - 2.0 * r / R)
    return r, r_xi, r_xixi


@dataclasses.dataclass(frozen=True, eq=False)
class Grid:
    """
    An immutable radial mesh. Arrays are sampled at the ``M`` nodes and at the
    ``M - 1`` cell midpoints (suffix ``_mid``).

    :param xi: uniformly spaced mesh coordinate.
    :param r: node radii, increasing, ``r[0] = r_min`` and ``r[-1] = r_max``.
    :param r_xi: ``dr/dxi`` at the nodes.
    :param r_xixi: ``d^2r/dxi^2`` at the nodes.
    :param weights: trapezoid quadrature weights for ``int f dr``, positive.
    """

    domain: RadialDomain
    spec: GridSpec
    h: float
    xi: np.ndarray
    r: np.ndarray
    r_xi: np.ndarray
    r_xixi: np.ndarray
    r_mid: np.ndarray
    r_xi_mid: np.ndarray
    weights: np.ndarray

    @property
    def M(self) -> int:
        return len(self.r)

    @property
    def kind(self) -> MeshKindEnum:
        return MeshKindEnum(self.spec.kind)

    @property
    def r_min(self) -> float:
        return float(self.r[0])

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    @property
    def uses_log_map(self) -> bool:
        return self.kind is MeshKindEnum.log or not self.domain.is_bounded

    def with_spec(self, **kwargs) -> "Grid":
        return build_grid(self.domain, dataclasses.replace(self.spec, **kwargs))

    def coarsen(self) -> "Grid":
        """
        The grid with ``(M + 1) // 2`` nodes on the same interval. For odd
        ``M`` its nodes are every other node of this grid.
        """
        M_c = (self.M + 1) // 2
        if M_c < MIN_NODES:
            raise GridError(f"can not coarsen a grid of {self.M} nodes")
        return self.with_spec(M=M_c)

    def widen(self) -> "Grid":
        """
        Double the length of the log window about its center, keeping the
        spacing, hence ``2M - 1`` nodes. Only for whole space log meshes.
        """
        if not self.uses_log_map:
            raise GridError("only log meshes can be widened")
        xi_min, xi_max = float(self.xi[0]), float(self.xi[-1])
        half = 0.5 * (xi_max - xi_min)
        r_min = math.exp(xi_min - half)
        r_max = math.exp(xi_max + half)
        if r_max > self.domain.radius:
            raise GridError(
                f"widened window r_max={r_max} exceeds R={self.domain.radius}"
            )
        return self.with_spec(M=2 * self.M - 1, r_min=r_min, r_max=r_max)

    def sample(self, fn: T.Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        return np.asarray(fn(self.r), dtype=float)

    def to_dict(self) -> T_DATA:
        return dict(
            M=self.M,
            r_min=self.r_min,
            r_max=self.r_max,
            kind=self.spec.kind,
            domain=self.domain.to_dict(),
        )


def build_grid(
    domain: RadialDomain,
    spec: T.Optional[GridSpec] = None,
) -> Grid:
    """
    Build the mesh described by ``spec`` (defaults when omitted) on ``domain``.

    :raises GridError: invalid node count, bounds or mesh kind.
    """
    spec = (spec or GridSpec()).resolve(domain)
    M = spec.M
    if spec.kind == MeshKindEnum.mapped.value and domain.is_bounded:
        R = domain.radius
        to_xi = lambda r: math.log(r / (R - r))
        mapping = lambda xi: _logit_map(xi, R)
    else:
        to_xi = math.log
        mapping = _log_map
    xi_min, xi_max = to_xi(spec.r_min), to_xi(spec.r_max)
    xi = np.linspace(xi_min, xi_max, M)
    h = (xi_max - xi_min) / (M - 1)
    r, r_xi, r_xixi = mapping(xi)
    # pin the truncation bounds against rounding in the map
    r[0], r[-1] = spec.r_min, spec.r_max
    xi_mid = 0.5 * (xi[1:] + xi[:-1])
    r_mid, r_xi_mid, _ = mapping(xi_mid)
    weights = np.full(M, h) * r_xi
    weights[0] *= 0.5
    weights[-1] *= 0.5
    logger.debug(
        "built %s grid: M=%d, r in [%g, %g], h=%g", spec.kind, M, r[0], r[-1], h
    )
    return Grid(
        domain=domain,
        spec=spec,
        h=h,
        xi=xi,
        r=r,
        r_xi=r_xi,
        r_xixi=r_xixi,
        r_mid=r_mid,
        r_xi_mid=r_xi_mid,
        weights=weights,
    )


class QuadRuleEnum(str, enum.Enum):
    trapezoid = "trapezoid"
    simpson = "simpson"


def quad_integral(
    grid: Grid,
    f: np.ndarray,
    rule: str = QuadRuleEnum.trapezoid.value,
) -> float:
    """
    ``int_{r_min}^{r_max} f(r) dr`` from samples at the nodes, as a composite
    rule in the mesh coordinate. ``trapezoid`` is exact for ``f dr/dxi``
    constant and spectrally accurate for integrands decaying at both ends;
    ``simpson`` is fourth order.

    :raises GridError: wrong length or non finite samples.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != grid.r.shape:
        raise GridError(f"expected {grid.M} samples, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        bad = int(np.flatnonzero(~np.isfinite(f))[0])
        raise GridError(f"non finite sample at r={grid.r[bad]!r}")
    rule = QuadRuleEnum(rule)
    if rule is QuadRuleEnum.trapezoid:
        return float(np.dot(grid.weights, f))
    return float(scipy.integrate.simpson(f * grid.r_xi, dx=grid.h))


def prolongation(
    grid: Grid,
    left: str = BoundaryEnum.clamped.value,
    right: str = BoundaryEnum.clamped.value,
) -> scipy.sparse.csr_matrix:
    """
    The ``M x n`` matrix ``P`` mapping free unknowns to nodal values.

    - dirichlet: the end node is zero.
    - clamped: the end node is zero and the one sided second order
      difference ``-3 u_0 + 4 u_1 - u_2`` vanishes, so ``u_1 = u_2 / 4``.
    - free: no constraint.
    """
    left, right = BoundaryEnum(left), BoundaryEnum(right)
    M = grid.M
    n_left = {BoundaryEnum.free: 0, BoundaryEnum.dirichlet: 1, BoundaryEnum.clamped: 2}
    lo = n_left[left]
    hi = M - n_left[right]
    n = hi - lo
    if n < 1:
        raise GridError(f"no free unknowns left on a grid of {M} nodes")
    rows = list(range(lo, hi))
    cols = list(range(n))
    vals = [1.0] * n
    if left is BoundaryEnum.clamped:
        rows.append(1)
        cols.append(0)
        vals.append(0.25)
    if right is BoundaryEnum.clamped:
        rows.append(M - 2)
        cols.append(n - 1)
        vals.append(0.25)
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(M, n))
