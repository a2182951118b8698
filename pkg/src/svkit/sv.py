"""Spectral-volume semi-discrete operator: du/dt from the control-volume residuals.

Each element imposes the integral conservation statement on its k+1 control
volumes.  Fluxes at interior control-volume faces use the single-valued
in-element polynomial; fluxes at element interfaces use the upwind trace.  The
degree-k polynomial is recovered from its k+1 control-volume integrals by one
LU-factorized reference solve per rule kind.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .exceptions import InvalidConfigError, SingularMatrixError
from .mesh import FluxCoefficient, Partition, Scheme
from .poly import PiecewisePoly
from .quadrature import MAX_ORDER, QuadratureRule, RuleKind, legendre_basis, make_rule

_COND_LIMIT = 1e8


@dataclass(frozen=True)
class SchemeConfig:
    """Order, variant, and quadrature settings for one spectral-volume run."""

    k: int
    variant: Scheme
    tie_break: RuleKind = RuleKind.RADAU_RIGHT
    source_quad_points: int | None = None  # default k+2 per control volume

    def __post_init__(self):
        if not 1 <= self.k <= MAX_ORDER:
            raise InvalidConfigError(f"order k must lie in [1, {MAX_ORDER}], got {self.k}")
        q = self.resolved_source_quad()
        if q < self.k + 1:
            raise InvalidConfigError(
                f"source quadrature needs at least k+1 = {self.k + 1} points, got {q}"
            )

    def resolved_source_quad(self) -> int:
        return self.source_quad_points if self.source_quad_points is not None else self.k + 2


@dataclass(frozen=True)
class ControlVolumeMatrix:
    """Reference matrix of Legendre moments over control volumes, pre-factorized.

    ``matrix[j, m]`` is the integral of L_m over [s_j, s_{j+1}]; columns are
    computed exactly from the Legendre antiderivative identity.
    """

    kind: RuleKind
    k: int
    matrix: np.ndarray
    lu: tuple
    inverse: np.ndarray


def _legendre_antiderivative_table(k: int, s: np.ndarray) -> np.ndarray:
    """A[j, m] = antiderivative of L_m evaluated at s_j (constant-free)."""
    vals = legendre_basis(k + 1, s)
    table = np.empty((s.size, k + 1))
    table[:, 0] = s
    for m in range(1, k + 1):
        table[:, m] = (vals[:, m + 1] - vals[:, m - 1]) / (2 * m + 1)
    return table


_CV_CACHE: dict[tuple[RuleKind, int], ControlVolumeMatrix] = {}


def cv_matrix(rule: QuadratureRule) -> ControlVolumeMatrix:
    """Control-volume moment matrix for one rule, cached per (kind, order)."""
    key = (rule.kind, rule.k)
    cached = _CV_CACHE.get(key)
    if cached is not None:
        return cached

    anti = _legendre_antiderivative_table(rule.k, rule.points)
    matrix = anti[1:] - anti[:-1]
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond >= _COND_LIMIT:
        raise SingularMatrixError(
            f"control-volume matrix ill-conditioned ({cond:.2e}) for "
            f"{rule.kind.value} k={rule.k}"
        )
    lu = lu_factor(matrix)
    inverse = lu_solve(lu, np.eye(rule.k + 1))
    matrix.setflags(write=False)
    inverse.setflags(write=False)
    result = ControlVolumeMatrix(kind=rule.kind, k=rule.k, matrix=matrix, lu=lu, inverse=inverse)
    _CV_CACHE[key] = result
    return result


def upwind_fluxes(u: PiecewisePoly, coeff: FluxCoefficient) -> np.ndarray:
    """Flux alpha * upwind-trace at all N+1 interfaces (last equals first)."""
    um = u.right_traces()
    up = u.left_traces()
    a = coeff.interface_values[:-1]
    flux = np.where(a > 0.0, a * np.roll(um, 1), a * up)
    return np.concatenate([flux, flux[:1]])


def upwind_interface_flux(u: PiecewisePoly, coeff: FluxCoefficient, index: int) -> float:
    """Flux alpha * u-hat at interface ``index`` (periodic indexing)."""
    n = u.mesh.n_elements
    p = index % n
    a = float(coeff.interface_values[p])
    if a > 0.0:
        return a * float(u.right_traces()[(p - 1) % n])
    return a * float(u.left_traces()[p])


class SVOperator:
    """Precomputed spectral-volume right-hand side for a fixed partition.

    The instance is reusable across time steps: all geometry, coefficient
    samples, and factorizations are set up once.  Calling it is pure in its
    arguments, so the element loop below could be sharded without locking.
    """

    def __init__(
        self,
        config: SchemeConfig,
        partition: Partition,
        coeff: FluxCoefficient,
        source=None,
    ):
        if config.k != partition.k:
            raise InvalidConfigError("config order does not match partition order")
        if config.variant is not partition.scheme:
            raise InvalidConfigError("config variant does not match partition scheme")
        self.config = config
        self.partition = partition
        self.coeff = coeff
        self.source = source

        mesh = partition.mesh
        k = config.k
        self._mesh = mesh
        self._k = k
        self._alt = (-1.0) ** np.arange(k + 1)
        self._a_if = coeff.interface_values[:-1].copy()
        self._pos_if = self._a_if > 0.0
        self._two_over_h = 2.0 / mesh.sizes

        self._groups = partition.element_groups()
        self._vint = {}
        self._minv_t = {}
        for kind, idx in self._groups.items():
            rule = make_rule(kind, k)
            self._vint[kind] = legendre_basis(k, rule.points[1 : k + 1]).T  # (k+1, k)
            self._minv_t[kind] = cv_matrix(rule).inverse.T

        self._a_int = np.asarray(coeff.alpha(partition.subpoints[:, 1 : k + 1]), dtype=float)

        if source is not None:
            q = config.resolved_source_quad()
            sg, wg = np.polynomial.legendre.leggauss(q)
            sp = partition.subpoints  # (N, k+2)
            mid = 0.5 * (sp[:, 1:] + sp[:, :-1])[..., None]        # (N, k+1, 1)
            half = 0.5 * (sp[:, 1:] - sp[:, :-1])[..., None]       # (N, k+1, 1)
            self._src_x = mid + half * sg[None, None, :]           # (N, k+1, q)
            self._src_w = half * wg[None, None, :]                 # (N, k+1, q)
            self._src_memo: tuple[float, np.ndarray] | None = None

    def _source_cv(self, t: float) -> np.ndarray:
        if self._src_memo is not None and self._src_memo[0] == t:
            return self._src_memo[1]
        g = np.asarray(self.source(self._src_x, t), dtype=float)
        cv = np.sum(g * self._src_w, axis=2)
        self._src_memo = (t, cv)
        return cv

    def __call__(self, u: PiecewisePoly, t: float) -> PiecewisePoly:
        c = u.coeffs
        um = c.sum(axis=1)
        up = c @ self._alt
        flux = np.where(self._pos_if, self._a_if * np.roll(um, 1), self._a_if * up)

        faces = np.empty((c.shape[0], self._k + 2))
        faces[:, 0] = flux
        faces[:, -1] = np.roll(flux, -1)
        for kind, idx in self._groups.items():
            faces[idx, 1:-1] = self._a_int[idx] * (c[idx] @ self._vint[kind])

        residual = faces[:, :-1] - faces[:, 1:]
        if self.source is not None:
            residual = residual + self._source_cv(t)

        out = np.empty_like(c)
        for kind, idx in self._groups.items():
            out[idx] = residual[idx] @ self._minv_t[kind]
        out *= self._two_over_h[:, None]
        return PiecewisePoly(self._mesh, self._k, out)


def sv_rhs(
    u: PiecewisePoly,
    t: float,
    config: SchemeConfig,
    partition: Partition,
    coeff: FluxCoefficient,
    g=None,
) -> PiecewisePoly:
    """One-shot du/dt evaluation; builds a fresh operator each call.

    Time-stepping loops should construct an :class:`SVOperator` once instead.
    """
    return SVOperator(config, partition, coeff, g)(u, t)
