"""Error functionals, superconvergence-point sampling, and convergence orders.

Beyond the plain broken L2/Linf errors, the report measures the mismatch of
the numerical flux and of the solution at the places where spectral-volume
solutions are superconvergent: element interfaces, the interpolation nodes,
cell averages, and the stationary points of each element's node polynomial.
All RMS functionals normalize by the element count only, keeping inner sums
over nodes unscaled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import BelowRoundoffError
from .mesh import FluxCoefficient, Partition
from .poly import (
    InterpKind,
    PiecewisePoly,
    broken_norm,
    interpolate,
    interpolation_nodes,
)
from .sv import upwind_fluxes

_BISECT_STEPS = 60


def _omega_prime(x: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Derivative of prod_j (x - nodes_j), evaluated via the product-rule sum."""
    diff = x[..., None] - nodes  # (..., k+1)
    total = np.zeros_like(x)
    m = nodes.shape[-1]
    for j in range(m):
        sel = np.delete(diff, j, axis=-1)
        total += np.prod(sel, axis=-1)
    return total


def _extrema_batch(nodes: np.ndarray) -> np.ndarray:
    """Roots of the node-polynomial derivative, one per consecutive node gap.

    ``nodes`` is (N, k+1) with strictly increasing rows; bisection keeps each
    root bracketed inside its gap, so interlacing holds by construction.
    """
    lo = nodes[:, :-1].copy()
    hi = nodes[:, 1:].copy()
    k = lo.shape[1]
    # At the left end of gap j the derivative has sign (-1)^(k-j): the factors
    # from nodes above the gap are negative, those below positive.
    sign_lo = np.where((k - np.arange(k)) % 2 == 0, 1.0, -1.0)[None, :]
    sign_lo = np.broadcast_to(sign_lo, lo.shape)
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        fm = np.empty_like(mid)
        for j in range(k):
            fm[:, j] = _omega_prime(mid[:, j], nodes)
        same = fm * sign_lo > 0.0
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def node_polynomial_extrema(nodes) -> np.ndarray:
    """The k stationary points of prod (x - nodes_j) for k+1 distinct nodes.

    Bisection to 1e-13; each root lies strictly between consecutive nodes.
    """
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 1 or nodes.size < 2:
        raise ValueError("need a 1-D array of at least two nodes")
    if np.any(np.diff(nodes) <= 0):
        raise ValueError("nodes must be strictly increasing")
    return _extrema_batch(nodes[None, :])[0]


@dataclass
class ErrorReport:
    """Every error functional for one (scheme, order, resolution, time) run."""

    scheme: str
    k: int
    n: int
    t_final: float
    l2: float
    linf: float
    # flux functionals: alpha-weighted mismatch measures
    flux_gap_l2: float        # ||alpha (u_h - interpolant)||
    flux_cell_rms: float      # RMS of per-element flux-average mismatch
    flux_node_rms: float      # RMS over interpolation nodes
    flux_iface_rms: float     # RMS of exact-vs-upwind flux at interfaces
    flux_deriv_rms: float     # RMS of alpha * d/dx mismatch at extrema points
    # solution functionals
    gap_l2: float             # ||u_h - interpolant||
    cell_rms: float
    node_rms: float
    iface_rms: float
    extrema_value_rms: float  # (u - u_h) sampled at the extrema points
    extrema_deriv_rms: float  # d/dx (u - u_h) at the extrema points (headline)
    # optional comparison against the upwind DG twin
    dg_diff_l2: float | None = None
    dg_diff_flux_cell_rms: float | None = None
    dg_diff_cell_rms: float | None = None

    METRIC_FIELDS = (
        "l2",
        "linf",
        "flux_gap_l2",
        "flux_cell_rms",
        "flux_node_rms",
        "flux_iface_rms",
        "flux_deriv_rms",
        "gap_l2",
        "cell_rms",
        "node_rms",
        "iface_rms",
        "extrema_value_rms",
        "extrema_deriv_rms",
        "dg_diff_l2",
        "dg_diff_flux_cell_rms",
        "dg_diff_cell_rms",
    )

    def metric_items(self):
        for name in self.METRIC_FIELDS:
            value = getattr(self, name)
            if value is not None:
                yield name, value


def _quad_grid(partition: Partition, extra: int = 3):
    mesh = partition.mesh
    sg, wg = np.polynomial.legendre.leggauss(partition.k + extra)
    x = mesh.centers[:, None] + 0.5 * mesh.sizes[:, None] * sg[None, :]
    return sg, wg, x


def flux_superconv_errors(
    u_h: PiecewisePoly,
    u: Callable,
    u_x: Callable,
    coeff: FluxCoefficient,
    partition: Partition,
) -> tuple[float, float, float, float, float]:
    """Flux-side functionals (gap L2, cell RMS, node RMS, interface RMS, deriv RMS)."""
    parts = _functional_parts(u_h, u, u_x, coeff, partition)
    return (
        parts["flux_gap_l2"],
        parts["flux_cell_rms"],
        parts["flux_node_rms"],
        parts["flux_iface_rms"],
        parts["flux_deriv_rms"],
    )


def solution_superconv_errors(
    u_h: PiecewisePoly,
    u: Callable,
    u_x: Callable,
    partition: Partition,
    coeff: FluxCoefficient,
) -> tuple[float, float, float, float, float, float]:
    """Solution-side functionals (gap L2, cell, node, interface, value/deriv at extrema)."""
    parts = _functional_parts(u_h, u, u_x, coeff, partition)
    return (
        parts["gap_l2"],
        parts["cell_rms"],
        parts["node_rms"],
        parts["iface_rms"],
        parts["extrema_value_rms"],
        parts["extrema_deriv_rms"],
    )


def _functional_parts(u_h, u, u_x, coeff, partition) -> dict[str, float]:
    mesh = partition.mesh
    n = mesh.n_elements
    k = partition.k
    interp = interpolate(u, partition, coeff, InterpKind.AUTO)
    diff = u_h - interp

    out: dict[str, float] = {}
    out["flux_gap_l2"] = broken_norm(diff, "l2", weight=coeff.alpha)
    out["gap_l2"] = broken_norm(diff, "l2")

    # Interfaces x_{i+1/2}, i = 1..N; the wrap interface is the first one.
    flux_num = upwind_fluxes(u_h, coeff)[1:]
    a_if = coeff.interface_values[1:]
    x_if = mesh.breakpoints[1:]
    u_if = np.asarray(u(x_if), dtype=float)
    uhat = np.where(a_if > 0.0, u_h.right_traces(), np.roll(u_h.left_traces(), -1))
    out["flux_iface_rms"] = float(np.sqrt(np.mean((a_if * u_if - flux_num) ** 2)))
    out["iface_rms"] = float(np.sqrt(np.mean((u_if - uhat) ** 2)))

    # Cell averages of the mismatch, flux-weighted and plain.
    sg, wg, xq = _quad_grid(partition)
    mismatch = np.asarray(u(xq), dtype=float) - u_h.eval_ref(sg)
    aq = np.asarray(coeff.alpha(xq), dtype=float)
    out["flux_cell_rms"] = float(np.sqrt(np.mean((0.5 * ((aq * mismatch) @ wg)) ** 2)))
    out["cell_rms"] = float(np.sqrt(np.mean((0.5 * (mismatch @ wg)) ** 2)))

    # Interpolation nodes and the stationary points of the node polynomial.
    nodes = interpolation_nodes(partition, coeff, InterpKind.AUTO)
    node_mismatch = np.asarray(u(nodes.x), dtype=float) - u_h.eval_ref(nodes.s)
    a_nodes = np.asarray(coeff.alpha(nodes.x), dtype=float)
    out["flux_node_rms"] = float(np.sqrt(np.sum((a_nodes * node_mismatch) ** 2) / n))
    out["node_rms"] = float(np.sqrt(np.sum(node_mismatch ** 2) / n))

    z = _extrema_batch(nodes.x)
    s_z = (2.0 * z - (mesh.breakpoints[:-1] + mesh.breakpoints[1:])[:, None]) / mesh.sizes[:, None]
    dz = np.asarray(u_x(z), dtype=float) - u_h.eval_ref_deriv(s_z)
    vz = np.asarray(u(z), dtype=float) - u_h.eval_ref(s_z)
    a_z = np.asarray(coeff.alpha(z), dtype=float)
    out["flux_deriv_rms"] = float(np.sqrt(np.sum((a_z * dz) ** 2) / n))
    out["extrema_value_rms"] = float(np.sqrt(np.sum(vz ** 2) / n))
    out["extrema_deriv_rms"] = float(np.sqrt(np.sum(dz ** 2) / n))
    return out


def compare_sv_dg(
    u_sv: PiecewisePoly, u_dg: PiecewisePoly, coeff: FluxCoefficient
) -> tuple[float, float, float]:
    """L2, flux-weighted cell RMS, and cell RMS of the SV-minus-DG difference."""
    diff = u_sv - u_dg
    l2 = broken_norm(diff, "l2")
    mesh = u_sv.mesh
    sg, wg = np.polynomial.legendre.leggauss(u_sv.k + 3)
    xq = mesh.centers[:, None] + 0.5 * mesh.sizes[:, None] * sg[None, :]
    aq = np.asarray(coeff.alpha(xq), dtype=float)
    flux_cell = 0.5 * ((aq * diff.eval_ref(sg)) @ wg)
    cell = diff.coeffs[:, 0]
    n = mesh.n_elements
    return (
        float(l2),
        float(np.sqrt(np.sum(flux_cell ** 2) / n)),
        float(np.sqrt(np.sum(cell ** 2) / n)),
    )


def error_report(
    u_h: PiecewisePoly,
    u: Callable,
    u_x: Callable,
    coeff: FluxCoefficient,
    partition: Partition,
    *,
    scheme: str,
    t_final: float,
    u_dg: PiecewisePoly | None = None,
) -> ErrorReport:
    """Assemble the full functional report for one finished run."""
    parts = _functional_parts(u_h, u, u_x, coeff, partition)
    comparison = (None, None, None)
    if u_dg is not None:
        comparison = compare_sv_dg(u_h, u_dg, coeff)
    return ErrorReport(
        scheme=scheme,
        k=partition.k,
        n=partition.mesh.n_elements,
        t_final=t_final,
        l2=broken_norm(u_h, "l2", reference=u),
        linf=broken_norm(u_h, "linf", reference=u),
        dg_diff_l2=comparison[0],
        dg_diff_flux_cell_rms=comparison[1],
        dg_diff_cell_rms=comparison[2],
        **parts,
    )


def convergence_orders(errors: list[tuple[int, float]]) -> list[float]:
    """Refinement-ratio order estimates between consecutive (n, error) rows."""
    if len(errors) < 2:
        return []
    orders = []
    for (n1, e1), (n2, e2) in zip(errors, errors[1:]):
        if n2 <= n1:
            raise ValueError("resolutions must be strictly increasing")
        if e1 <= 1e-15 or e2 <= 1e-15:
            raise BelowRoundoffError(
                f"error at roundoff level ({e1:.2e}, {e2:.2e}); order undefined"
            )
        orders.append(float(np.log(e1 / e2) / np.log(n2 / n1)))
    return orders
