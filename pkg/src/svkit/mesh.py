"""Element meshes on [0, 2*pi], control-volume partitions, and coefficient caching.

The domain is always the periodic interval [0, 2*pi].  A partition subdivides
each element into k+1 control volumes whose breakpoints are the affine image
of a reference quadrature rule; which rule a given element receives is the
defining difference between the two spectral-volume variants:

* LSV uses the Gauss rule everywhere,
* RSV picks right/left Radau by the sign of the flux coefficient at the two
  element endpoints, falling back to a configurable tie-break when the sign
  pattern is mixed or degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .exceptions import InvalidConfigError
from .quadrature import QuadratureRule, RuleKind, make_rule

DOMAIN_LENGTH = 2.0 * np.pi

# Coefficient magnitudes at or below this level are treated as exact zeros so
# that upwind branches and element classification stay platform-independent.
ZERO_SNAP = 1e-14

MAX_PERTURBATION = 0.4
MAX_SIZE_RATIO = 10.0


class Scheme(Enum):
    LSV = "lsv"
    RSV = "rsv"


@dataclass(frozen=True)
class Mesh1D:
    """Strictly increasing breakpoints x_{1/2} .. x_{N+1/2} covering [0, 2*pi]."""

    breakpoints: np.ndarray
    periodic: bool = True

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 3:
            raise InvalidConfigError("mesh needs at least 2 elements")
        if not (np.all(np.diff(bp) > 0)):
            raise InvalidConfigError("breakpoints must be strictly increasing")
        if abs(bp[0]) > 1e-14 or abs(bp[-1] - DOMAIN_LENGTH) > 1e-12:
            raise InvalidConfigError("mesh must cover exactly [0, 2*pi]")
        h = np.diff(bp)
        if h.max() / h.min() > MAX_SIZE_RATIO:
            raise InvalidConfigError(
                f"shape regularity violated: max/min element ratio {h.max() / h.min():.2f}"
            )
        bp = bp.copy()
        bp.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)

    @property
    def n_elements(self) -> int:
        return self.breakpoints.size - 1

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.breakpoints[:-1] + self.breakpoints[1:])


def build_mesh(n: int, perturbation: float = 0.0, seed: int = 0) -> Mesh1D:
    """Uniform n-element mesh, optionally with seeded jitter at interior breakpoints.

    Each interior breakpoint moves by at most ``perturbation * (2*pi/n)``;
    perturbation must stay below 0.4 to preserve monotonicity.
    """
    if n < 2:
        raise InvalidConfigError(f"element count must be >= 2, got {n}")
    if not 0.0 <= perturbation < MAX_PERTURBATION:
        raise InvalidConfigError(
            f"perturbation must lie in [0, {MAX_PERTURBATION}), got {perturbation}"
        )
    bp = np.linspace(0.0, DOMAIN_LENGTH, n + 1)
    if perturbation > 0.0:
        rng = np.random.default_rng(seed)
        jitter = rng.uniform(-1.0, 1.0, n - 1) * perturbation * (DOMAIN_LENGTH / n)
        bp[1:-1] += jitter
    return Mesh1D(breakpoints=bp)


class FluxCoefficient:
    """The coefficient alpha as an evaluable plus cached interface values/signs.

    ``alpha`` must accept ndarray arguments.  Interface values within
    ``ZERO_SNAP`` of zero are snapped to exactly 0 and classified with the
    non-positive upwind branch; the wrap-around interface reuses the value at
    x = 0 so both ends of the periodic domain agree bitwise.
    """

    def __init__(self, alpha, mesh: Mesh1D):
        self.alpha = alpha
        self.mesh = mesh
        vals = np.asarray(alpha(mesh.breakpoints), dtype=float).copy()
        vals[-1] = vals[0]  # periodic identification of x = 0 and x = 2*pi
        vals[np.abs(vals) <= ZERO_SNAP] = 0.0
        signs = np.sign(vals).astype(np.int8)
        vals.setflags(write=False)
        signs.setflags(write=False)
        self.interface_values = vals
        self.interface_signs = signs

    def __call__(self, x):
        return self.alpha(x)


def classify_elements(mesh: Mesh1D, coeff: FluxCoefficient) -> np.ndarray:
    """Class 1/2/3 per element: both endpoint signs positive, both negative, mixed.

    Snapped zero endpoint values always land an element in class 3.
    """
    left = coeff.interface_signs[:-1]
    right = coeff.interface_signs[1:]
    omega = np.full(mesh.n_elements, 3, dtype=np.int8)
    omega[(left > 0) & (right > 0)] = 1
    omega[(left < 0) & (right < 0)] = 2
    return omega


@dataclass(frozen=True)
class Partition:
    """Per-element control-volume breakpoints and their quadrature metadata."""

    mesh: Mesh1D
    k: int
    scheme: Scheme
    tie_break: RuleKind
    kinds: np.ndarray       # RuleKind value per element, as object array of enums
    subpoints: np.ndarray   # (N, k+2) domain coordinates, endpoints exact
    subweights: np.ndarray  # (N, k+2) scaled weights (h_i/2) * A_j
    omega: np.ndarray       # element class 1/2/3

    def rule(self, kind: RuleKind) -> QuadratureRule:
        return make_rule(kind, self.k)

    def element_groups(self) -> dict[RuleKind, np.ndarray]:
        """Element indices grouped by rule kind (insertion order deterministic)."""
        groups: dict[RuleKind, np.ndarray] = {}
        for kind in (RuleKind.GAUSS, RuleKind.RADAU_RIGHT, RuleKind.RADAU_LEFT):
            idx = np.nonzero(self.kinds == kind)[0]
            if idx.size:
                groups[kind] = idx
        return groups


def build_partition(
    mesh: Mesh1D,
    k: int,
    scheme: Scheme,
    coeff: FluxCoefficient,
    tie_break: RuleKind = RuleKind.RADAU_RIGHT,
) -> Partition:
    """Assign a rule kind to every element and map its points into the element."""
    if tie_break not in (RuleKind.RADAU_RIGHT, RuleKind.RADAU_LEFT):
        raise InvalidConfigError("tie_break must be one of the two Radau kinds")
    make_rule(RuleKind.GAUSS, k)  # validates k range once

    n = mesh.n_elements
    omega = classify_elements(mesh, coeff)
    kinds = np.empty(n, dtype=object)
    if scheme is Scheme.LSV:
        kinds[:] = RuleKind.GAUSS
    elif scheme is Scheme.RSV:
        kinds[:] = tie_break
        kinds[omega == 1] = RuleKind.RADAU_RIGHT
        kinds[omega == 2] = RuleKind.RADAU_LEFT
    else:
        raise InvalidConfigError(f"unknown scheme {scheme!r}")

    centers = mesh.centers
    half = 0.5 * mesh.sizes
    subpoints = np.empty((n, k + 2))
    subweights = np.empty((n, k + 2))
    for kind in (RuleKind.GAUSS, RuleKind.RADAU_RIGHT, RuleKind.RADAU_LEFT):
        idx = np.nonzero(kinds == kind)[0]
        if not idx.size:
            continue
        rule = make_rule(kind, k)
        subpoints[idx] = centers[idx, None] + half[idx, None] * rule.points[None, :]
        subweights[idx] = half[idx, None] * rule.weights[None, :]
    # Control-volume endpoints are element breakpoints, bit for bit.
    subpoints[:, 0] = mesh.breakpoints[:-1]
    subpoints[:, -1] = mesh.breakpoints[1:]

    for arr in (kinds, subpoints, subweights, omega):
        arr.setflags(write=False)
    return Partition(
        mesh=mesh,
        k=k,
        scheme=scheme,
        tie_break=tie_break,
        kinds=kinds,
        subpoints=subpoints,
        subweights=subweights,
        omega=omega,
    )
