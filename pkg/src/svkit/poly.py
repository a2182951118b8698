"""Broken polynomials on the mesh: evaluation, interpolation, transforms, norms.

A :class:`PiecewisePoly` stores one degree-k polynomial per element in the
Legendre modal basis, so the element mass matrix is diagonal and the cell
average is the zeroth coefficient.  The module also provides

* the one-sided Lagrange interpolants onto the partition nodes and the
  upwind-aware automatic choice between them,
* the transform taking a broken polynomial to the piecewise constant over
  control volumes whose recurrence mirrors the spectral-volume residual,
* broken L2/Linf norms and the transform-induced triple norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .exceptions import DegenerateNodesError, OutOfDomainError
from .mesh import DOMAIN_LENGTH, FluxCoefficient, Mesh1D, Partition
from .quadrature import RuleKind, legendre_basis, legendre_basis_deriv, make_rule

_BREAKPOINT_TOL = 1e-12
LINF_SAMPLES = 21


@dataclass
class PiecewisePoly:
    """Piecewise polynomial of degree k with Legendre modal coefficients (N, k+1)."""

    mesh: Mesh1D
    k: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        expected = (self.mesh.n_elements, self.k + 1)
        if self.coeffs.shape != expected:
            raise ValueError(f"coefficient array must have shape {expected}")

    @classmethod
    def zeros(cls, mesh: Mesh1D, k: int) -> "PiecewisePoly":
        return cls(mesh, k, np.zeros((mesh.n_elements, k + 1)))

    def copy(self) -> "PiecewisePoly":
        return PiecewisePoly(self.mesh, self.k, self.coeffs.copy())

    # -- elementwise evaluation at reference coordinates ---------------------

    def eval_ref(self, s) -> np.ndarray:
        """Values at reference coordinates; s is (P,) shared or (N, P) per element."""
        s = np.asarray(s, dtype=float)
        basis = legendre_basis(self.k, s)
        if s.ndim == 1:
            return self.coeffs @ basis.T
        return np.einsum("npm,nm->np", basis, self.coeffs)

    def eval_ref_deriv(self, s) -> np.ndarray:
        """x-derivatives at reference coordinates (chain factor 2/h per element)."""
        s = np.asarray(s, dtype=float)
        _, dbasis = legendre_basis_deriv(self.k, s)
        scale = 2.0 / self.mesh.sizes
        if s.ndim == 1:
            return (self.coeffs @ dbasis.T) * scale[:, None]
        return np.einsum("npm,nm->np", dbasis, self.coeffs) * scale[:, None]

    def right_traces(self) -> np.ndarray:
        """One-sided values at each element's right endpoint."""
        return self.coeffs.sum(axis=1)

    def left_traces(self) -> np.ndarray:
        """One-sided values at each element's left endpoint."""
        alt = (-1.0) ** np.arange(self.k + 1)
        return self.coeffs @ alt

    # -- pointwise evaluation -------------------------------------------------

    def eval(self, x: float, side: str = "interior", derivative: bool = False):
        """Value (and optionally x-derivative) at a single domain point.

        ``side`` must be "left" or "right" when x coincides with an element
        breakpoint; the domain wraps periodically so x = 0 / 2*pi address the
        last / first element as needed.
        """
        x = float(x)
        if x < -_BREAKPOINT_TOL or x > DOMAIN_LENGTH + _BREAKPOINT_TOL:
            raise OutOfDomainError(f"x = {x} outside [0, 2*pi]")
        bp = self.mesh.breakpoints
        n = self.mesh.n_elements

        idx = int(np.argmin(np.abs(bp - x)))
        if abs(bp[idx] - x) <= _BREAKPOINT_TOL:
            if side == "left":
                elem = (idx - 1) % n
                s = 1.0
            elif side == "right":
                elem = idx % n
                s = -1.0
            else:
                raise ValueError(
                    f"x = {x} is a breakpoint; side='left' or side='right' is required"
                )
        else:
            elem = int(np.searchsorted(bp, x)) - 1
            elem = min(max(elem, 0), n - 1)
            s = (2.0 * x - bp[elem] - bp[elem + 1]) / (bp[elem + 1] - bp[elem])

        vals, ders = legendre_basis_deriv(self.k, s)
        value = float(self.coeffs[elem] @ vals)
        if not derivative:
            return value
        dvalue = float(self.coeffs[elem] @ ders) * 2.0 / float(self.mesh.sizes[elem])
        return value, dvalue

    # -- arithmetic -----------------------------------------------------------

    def _like(self, coeffs: np.ndarray) -> "PiecewisePoly":
        return PiecewisePoly(self.mesh, self.k, coeffs)

    def _check_compatible(self, other: "PiecewisePoly"):
        if other.mesh is not self.mesh and not np.array_equal(
            other.mesh.breakpoints, self.mesh.breakpoints
        ):
            raise ValueError("operands live on different meshes")
        if other.k != self.k:
            raise ValueError("operands have different degrees")

    def __add__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        self._check_compatible(other)
        return self._like(self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, PiecewisePoly):
            return NotImplemented
        self._check_compatible(other)
        return self._like(self.coeffs - other.coeffs)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return self._like(self.coeffs * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return self._like(-self.coeffs)


def cell_averages(u: PiecewisePoly) -> np.ndarray:
    """Per-element means; exactly the zeroth modal coefficients."""
    return u.coeffs[:, 0].copy()


def total_mass(u: PiecewisePoly) -> float:
    """Integral of u over the whole domain."""
    return float(np.dot(u.mesh.sizes, u.coeffs[:, 0]))


# -- interpolation ------------------------------------------------------------


class InterpKind(Enum):
    MINUS = "minus"            # nodes x_{i,1} .. x_{i,k+1} (right endpoint in)
    PLUS = "plus"              # nodes x_{i,0} .. x_{i,k}   (left endpoint in)
    PLUS_MINUS = "plus_minus"  # both endpoints plus x_{i,1} .. x_{i,k-1}
    AUTO = "auto"              # per-element choice from the coefficient signs


def _ref_interp_nodes(rule_points: np.ndarray, kind: InterpKind) -> np.ndarray:
    k = rule_points.size - 2
    if kind is InterpKind.MINUS:
        return rule_points[1:]
    if kind is InterpKind.PLUS:
        return rule_points[:-1]
    if kind is InterpKind.PLUS_MINUS:
        return np.concatenate([rule_points[:1], rule_points[1:k], rule_points[-1:]])
    raise ValueError(f"no node set for {kind}")


def auto_interp_kinds(partition: Partition, coeff: FluxCoefficient) -> np.ndarray:
    """Per-element interpolant choice driven by the endpoint signs of alpha.

    The upwind flux consults an element's left trace only where alpha <= 0
    at its left interface, and its right trace only where alpha > 0 at its
    right interface.  Each element anchors exactly the endpoints that are
    consulted: both (source-type sign change) selects the endpoint-anchored
    set, only the right selects the right-biased set, only the left the
    left-biased set, and an unconsulted (sink-type) element defaults to the
    right-biased set matching its inflow from the positive side.  This makes
    the upwind trace of the interpolant exact at every interface while keeping
    all interior partition points interpolated wherever possible.
    """
    left = coeff.interface_signs[:-1]
    right = coeff.interface_signs[1:]
    kinds = np.empty(partition.mesh.n_elements, dtype=object)
    kinds[:] = InterpKind.MINUS
    kinds[(left <= 0) & (right <= 0)] = InterpKind.PLUS
    kinds[(left <= 0) & (right > 0)] = InterpKind.PLUS_MINUS
    return kinds


class InterpNodes(NamedTuple):
    x: np.ndarray       # (N, k+1) domain coordinates of the interpolation nodes
    s: np.ndarray       # (N, k+1) matching reference coordinates
    kinds: np.ndarray   # per-element InterpKind actually used


def interpolation_nodes(
    partition: Partition,
    coeff: FluxCoefficient | None = None,
    kind: InterpKind = InterpKind.AUTO,
) -> InterpNodes:
    """Domain/reference coordinates of each element's k+1 interpolation nodes."""
    n = partition.mesh.n_elements
    k = partition.k
    if kind is InterpKind.AUTO:
        if coeff is None:
            raise ValueError("automatic interpolation needs the flux coefficient")
        ikinds = auto_interp_kinds(partition, coeff)
    else:
        ikinds = np.empty(n, dtype=object)
        ikinds[:] = kind

    centers = partition.mesh.centers
    half = 0.5 * partition.mesh.sizes
    s_nodes = np.empty((n, k + 1))
    for rule_kind, idx in partition.element_groups().items():
        rule = make_rule(rule_kind, k)
        for ik in (InterpKind.MINUS, InterpKind.PLUS, InterpKind.PLUS_MINUS):
            sel = idx[ikinds[idx] == ik]
            if not sel.size:
                continue
            ref = _ref_interp_nodes(rule.points, ik)
            if np.min(np.diff(ref)) < 1e-13:
                raise DegenerateNodesError(
                    f"interpolation nodes coincide for {rule_kind.value}/{ik.value}"
                )
            s_nodes[sel] = ref[None, :]
    x_nodes = centers[:, None] + half[:, None] * s_nodes
    return InterpNodes(x=x_nodes, s=s_nodes, kinds=ikinds)


def interpolate(
    f: Callable[[np.ndarray], np.ndarray],
    partition: Partition,
    coeff: FluxCoefficient | None = None,
    kind: InterpKind = InterpKind.AUTO,
) -> PiecewisePoly:
    """Element-by-element Lagrange interpolation of f onto the broken space.

    ``f`` must accept ndarray arguments.  The result reproduces any piecewise
    polynomial of degree <= k exactly.
    """
    nodes = interpolation_nodes(partition, coeff, kind)
    k = partition.k
    coeffs = np.empty((partition.mesh.n_elements, k + 1))
    fx = np.asarray(f(nodes.x), dtype=float)

    # Solve the Legendre Vandermonde system once per distinct reference node set.
    done = np.zeros(partition.mesh.n_elements, dtype=bool)
    for rule_kind, idx in partition.element_groups().items():
        for ik in (InterpKind.MINUS, InterpKind.PLUS, InterpKind.PLUS_MINUS):
            sel = idx[(nodes.kinds[idx] == ik) & ~done[idx]]
            if not sel.size:
                continue
            ref = nodes.s[sel[0]]
            vand = legendre_basis(k, ref)           # (k+1, k+1), rows are nodes
            inv = np.linalg.inv(vand)
            coeffs[sel] = fx[sel] @ inv.T
            done[sel] = True
    return PiecewisePoly(partition.mesh, k, coeffs)


# -- control-volume transform ---------------------------------------------------


@dataclass(frozen=True)
class PiecewiseConstant:
    """One value per control volume; the image of a broken polynomial."""

    partition: Partition
    values: np.ndarray  # (N, k+1)


def t_transform(w: PiecewisePoly, partition: Partition) -> PiecewiseConstant:
    """Map w to its control-volume constants via the weighted-derivative recurrence.

    Starting from the element's own left-endpoint value, each constant adds the
    scaled rule weight times w_x at the next partition point.  For node sets
    whose endpoint weight vanishes the first/last constants collapse to the
    one-sided endpoint traces of w.
    """
    if w.k != partition.k:
        raise ValueError("polynomial degree does not match partition order")
    k = partition.k
    # w_x at all k+2 partition points, grouped by rule kind.
    wx = np.empty((w.mesh.n_elements, k + 2))
    for rule_kind, idx in partition.element_groups().items():
        rule = make_rule(rule_kind, k)
        _, dbasis = legendre_basis_deriv(k, rule.points)
        wx[idx] = (w.coeffs[idx] @ dbasis.T) * (2.0 / w.mesh.sizes[idx, None])
    increments = partition.subweights * wx
    values = np.cumsum(increments[:, : k + 1], axis=1)
    values += w.left_traces()[:, None]
    return PiecewiseConstant(partition=partition, values=values)


def element_antiderivative(u: PiecewisePoly) -> PiecewisePoly:
    """Per-element antiderivative (degree k+1), vanishing constant mode.

    Uses the Legendre identity: the antiderivative of L_m is
    (L_{m+1} - L_{m-1}) / (2m+1) for m >= 1 and L_1 for m = 0, scaled by h/2.
    """
    n, k = u.mesh.n_elements, u.k
    out = np.zeros((n, k + 2))
    half = 0.5 * u.mesh.sizes
    out[:, 1] += half * u.coeffs[:, 0]
    for m in range(1, k + 1):
        c = half * u.coeffs[:, m] / (2 * m + 1)
        out[:, m + 1] += c
        out[:, m - 1] -= c
    return PiecewisePoly(u.mesh, k + 1, out)


def cv_integrals(u: PiecewisePoly, partition: Partition) -> np.ndarray:
    """Exact integrals of u over every control volume, shape (N, k+1)."""
    from .sv import cv_matrix  # local import to avoid a cycle

    k = partition.k
    out = np.empty((u.mesh.n_elements, k + 1))
    half = 0.5 * u.mesh.sizes
    for rule_kind, idx in partition.element_groups().items():
        m = cv_matrix(make_rule(rule_kind, k)).matrix
        out[idx] = (u.coeffs[idx] @ m.T) * half[idx, None]
    return out


def transform_inner_products(u: PiecewisePoly, partition: Partition) -> np.ndarray:
    """Per-element inner products of u against its own transform image."""
    tu = t_transform(u, partition)
    return np.sum(cv_integrals(u, partition) * tu.values, axis=1)


def triple_norm(u: PiecewisePoly, partition: Partition) -> float:
    """Square root of the summed transform inner products.

    Coincides with the broken L2 norm on Radau partitions and stays uniformly
    equivalent to it on Gauss partitions.
    """
    total = float(np.sum(transform_inner_products(u, partition)))
    return float(np.sqrt(max(total, 0.0)))


# -- norms ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _panel(m: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(m)
    return nodes, weights


def broken_norm(
    u: PiecewisePoly,
    kind: str = "l2",
    reference: Callable[[np.ndarray], np.ndarray] | None = None,
    weight: Callable[[np.ndarray], np.ndarray] | None = None,
    quad_points: int | None = None,
) -> float:
    """Broken L2 or Linf norm of u, or of weight * (u - reference).

    L2 integrates the squared integrand with a per-element Gauss panel of
    ``quad_points`` nodes (default k+3, exact for the bare polynomial).  Linf
    samples 21 equispaced points per element, endpoints included, so both
    one-sided traces at every breakpoint participate.
    """
    mesh = u.mesh
    if kind == "l2":
        q = quad_points if quad_points is not None else u.k + 3
        s, wq = _panel(q)
    elif kind == "linf":
        s = np.linspace(-1.0, 1.0, LINF_SAMPLES)
    else:
        raise ValueError(f"unknown norm kind {kind!r}")

    vals = u.eval_ref(s)
    if reference is not None or weight is not None:
        x = mesh.centers[:, None] + 0.5 * mesh.sizes[:, None] * s[None, :]
        if reference is not None:
            vals = vals - np.asarray(reference(x), dtype=float)
        if weight is not None:
            vals = vals * np.asarray(weight(x), dtype=float)

    if kind == "linf":
        return float(np.max(np.abs(vals)))
    per_elem = (vals * vals) @ wq
    return float(np.sqrt(0.5 * np.dot(mesh.sizes, per_elem)))
