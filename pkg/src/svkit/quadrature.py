"""Gauss-Legendre and Radau quadrature rules on the reference interval [-1, 1].

A rule of order k carries k+2 abscissae s_0 = -1 < s_1 < ... < s_{k+1} = 1.
Both endpoints are always present because they double as partition points of
the control volumes; an endpoint that is not a quadrature node carries zero
weight.  The interior nodes are the zeros of

* ``L_k``              for the Gauss kind (k nodes, exact to degree 2k-1),
* ``L_{k+1} - L_k``    for the right Radau kind (k+1 nodes incl. +1, degree 2k),
* ``L_{k+1} + L_k``    for the left Radau kind (k+1 nodes incl. -1, degree 2k),

where ``L_m`` is the Legendre polynomial normalized by ``L_m(1) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .exceptions import InvalidConfigError, NonConvergenceError

MAX_ORDER = 12

_NEWTON_TOL = 1e-14
_NEWTON_CAP = 100
_RESIDUAL_TOL = 1e-13


class RuleKind(Enum):
    GAUSS = "gauss"
    RADAU_RIGHT = "radau_right"
    RADAU_LEFT = "radau_left"


def legendre_basis(k: int, s) -> np.ndarray:
    """Values of L_0 .. L_k at ``s`` via the three-term recurrence.

    Returns an array of shape ``s.shape + (k+1,)``.
    """
    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape + (k + 1,))
    out[..., 0] = 1.0
    if k >= 1:
        out[..., 1] = s
    for m in range(1, k):
        out[..., m + 1] = ((2 * m + 1) * s * out[..., m] - m * out[..., m - 1]) / (m + 1)
    return out


def legendre_basis_deriv(k: int, s) -> tuple[np.ndarray, np.ndarray]:
    """Values and first derivatives of L_0 .. L_k at ``s``.

    Uses L'_{m+1} = L'_{m-1} + (2m+1) L_m, which is stable at the endpoints.
    """
    s = np.asarray(s, dtype=float)
    vals = legendre_basis(k, s)
    der = np.zeros_like(vals)
    if k >= 1:
        der[..., 1] = 1.0
    for m in range(1, k):
        der[..., m + 1] = der[..., m - 1] + (2 * m + 1) * vals[..., m]
    return vals, der


def legendre_eval(k: int, s: float) -> tuple[float, float]:
    """Value and derivative of the degree-k Legendre polynomial at ``s``."""
    if k < 0:
        raise InvalidConfigError(f"polynomial degree must be >= 0, got {k}")
    vals, der = legendre_basis_deriv(k, float(s))
    return float(vals[..., k]), float(der[..., k])


@dataclass(frozen=True)
class QuadratureRule:
    """Reference-interval node/weight set of one of the three kinds."""

    kind: RuleKind
    k: int
    points: np.ndarray   # k+2 abscissae, s_0 = -1 < ... < s_{k+1} = 1
    weights: np.ndarray  # k+2 weights; non-node endpoints carry 0

    @property
    def exact_degree(self) -> int:
        """Highest polynomial degree integrated exactly."""
        return 2 * self.k - 1 if self.kind is RuleKind.GAUSS else 2 * self.k

    def apply(self, values: np.ndarray) -> float:
        """Apply the rule to pointwise values taken at ``self.points``."""
        return float(np.dot(self.weights, values))


def _gauss_panel(m: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(m)
    return nodes, weights


def _target(kind: RuleKind, k: int, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Root-finding target polynomial and its derivative for the interior nodes."""
    vals, der = legendre_basis_deriv(k + 1, s)
    if kind is RuleKind.GAUSS:
        return vals[..., k], der[..., k]
    if kind is RuleKind.RADAU_RIGHT:
        return vals[..., k + 1] - vals[..., k], der[..., k + 1] - der[..., k]
    return vals[..., k + 1] + vals[..., k], der[..., k + 1] + der[..., k]


def _initial_guesses(kind: RuleKind, k: int) -> np.ndarray:
    """Chebyshev-flavored starting points for the k interior roots."""
    if kind is RuleKind.GAUSS:
        j = np.arange(1, k + 1)
        return np.sort(np.cos(np.pi * (4 * j - 1) / (4 * k + 2)))
    # Left Radau: nodes cluster toward -1; right Radau is the mirror image.
    j = np.arange(1, k + 1)
    left = -np.cos(2 * np.pi * j / (2 * k + 1))
    if kind is RuleKind.RADAU_LEFT:
        return np.sort(left)
    return np.sort(-left)


def _newton_interior(kind: RuleKind, k: int) -> np.ndarray:
    s = _initial_guesses(kind, k)
    for _ in range(_NEWTON_CAP):
        f, df = _target(kind, k, s)
        step = f / df
        s = s - step
        if np.max(np.abs(step)) < _NEWTON_TOL:
            break
    else:
        raise NonConvergenceError(
            f"node iteration for {kind.value} k={k} did not converge in {_NEWTON_CAP} steps"
        )
    s = np.sort(s)
    resid, _ = _target(kind, k, s)
    if np.max(np.abs(resid)) >= _RESIDUAL_TOL:
        raise NonConvergenceError(
            f"node residual {np.max(np.abs(resid)):.2e} exceeds {_RESIDUAL_TOL} "
            f"for {kind.value} k={k}"
        )
    if np.any(np.diff(s) < 1e-8) or s[0] <= -1.0 or s[-1] >= 1.0:
        raise NonConvergenceError(f"interior nodes degenerate for {kind.value} k={k}")
    return s


def _cardinal_weights(nodes: np.ndarray, panel: int) -> np.ndarray:
    """Weights A_j = integral over [-1,1] of the Lagrange cardinal at nodes[j]."""
    sg, wg = _gauss_panel(panel)
    weights = np.empty(nodes.size)
    for j, node in enumerate(nodes):
        others = np.delete(nodes, j)
        card = np.prod((sg[:, None] - others[None, :]) / (node - others[None, :]), axis=1)
        weights[j] = np.dot(wg, card)
    return weights


@lru_cache(maxsize=None)
def make_rule(kind: RuleKind, k: int) -> QuadratureRule:
    """Build the quadrature rule of the given kind and order k in [1, 12]."""
    if not isinstance(k, int) or isinstance(k, bool):
        raise InvalidConfigError(f"order k must be an integer, got {k!r}")
    if not 1 <= k <= MAX_ORDER:
        raise InvalidConfigError(f"order k must lie in [1, {MAX_ORDER}], got {k}")
    if not isinstance(kind, RuleKind):
        raise InvalidConfigError(f"unknown rule kind {kind!r}")

    interior = _newton_interior(kind, k)
    points = np.concatenate(([-1.0], interior, [1.0]))

    # Quadrature nodes: interior points plus any endpoint that is a Radau node.
    if kind is RuleKind.GAUSS:
        active = slice(1, k + 1)
    elif kind is RuleKind.RADAU_RIGHT:
        active = slice(1, k + 2)
    else:
        active = slice(0, k + 1)
    weights = np.zeros(k + 2)
    weights[active] = _cardinal_weights(points[active], panel=k + 2)

    points.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(kind=kind, k=k, points=points, weights=weights)


def integrate_panel(f, a: float, b: float, m: int) -> float:
    """m-point Gauss-Legendre approximation of the integral of f over [a, b].

    Exact to roundoff for polynomials of degree <= 2m - 1.  ``f`` must accept
    an ndarray of abscissae.
    """
    if not a < b:
        raise InvalidConfigError(f"interval must satisfy a < b, got [{a}, {b}]")
    if m < 1:
        raise InvalidConfigError(f"point count must be >= 1, got {m}")
    sg, wg = _gauss_panel(m)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(wg, np.asarray(f(mid + half * sg), dtype=float)))
