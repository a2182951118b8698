"""Convergence-study driver and table emission (CSV / Markdown).

A study sweeps (scheme, order, resolution) over one manufactured case,
integrates with RK4 at dt = dt_factor / n, and collects the full error report
per run, including the optional difference against an upwind DG twin that is
started from the identical interpolated initial state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cases import CaseSpec, manufactured_case
from .dg import DGOperator
from .exceptions import InvalidConfigError
from .mesh import FluxCoefficient, Scheme, build_mesh, build_partition
from .metrics import ErrorReport, convergence_orders, error_report
from .poly import InterpKind, interpolate
from .quadrature import RuleKind
from .sv import SchemeConfig, SVOperator
from .timestep import integrate_to

SCHEME_NAMES = ("rsv", "lsv", "dg")

_TIE_BREAKS = {
    "radau_right": RuleKind.RADAU_RIGHT,
    "right": RuleKind.RADAU_RIGHT,
    "radau_left": RuleKind.RADAU_LEFT,
    "left": RuleKind.RADAU_LEFT,
}


@dataclass
class StudyConfig:
    """Sweep definition for one study."""

    example: str = "example1"
    schemes: tuple[str, ...] = ("rsv",)
    k_values: tuple[int, ...] = (1,)
    n_values: tuple[int, ...] = (32, 64)
    t_final: float | None = None         # None: the case default
    dt_factor: float = 0.01
    tie_break: str = "radau_right"
    perturbation: float = 0.0
    seed: int = 0
    compare_dg: bool = False
    fmt: str = "csv"
    out: str | None = None

    def __post_init__(self):
        self.schemes = tuple(str(s).lower() for s in self.schemes)
        for s in self.schemes:
            if s not in SCHEME_NAMES:
                raise InvalidConfigError(f"unknown scheme {s!r}")
        self.k_values = tuple(int(k) for k in self.k_values)
        self.n_values = tuple(int(n) for n in self.n_values)
        if any(n < 4 for n in self.n_values):
            raise InvalidConfigError("all resolutions must satisfy n >= 4")
        if list(self.n_values) != sorted(set(self.n_values)):
            raise InvalidConfigError("resolutions must be strictly increasing")
        if self.tie_break not in _TIE_BREAKS:
            raise InvalidConfigError(f"unknown tie break {self.tie_break!r}")
        if self.fmt not in ("csv", "md"):
            raise InvalidConfigError(f"unknown output format {self.fmt!r}")
        if self.dt_factor <= 0:
            raise InvalidConfigError("dt factor must be positive")


@dataclass
class StudyResult:
    reports: list[ErrorReport]
    # orders[(scheme, k, metric)] aligned with the n sweep; first entry None
    orders: dict[tuple[str, int, str], list[float | None]] = field(default_factory=dict)


def run_single(
    case: CaseSpec,
    scheme: str,
    k: int,
    n: int,
    *,
    t_final: float | None = None,
    dt_factor: float = 0.01,
    tie_break: RuleKind = RuleKind.RADAU_RIGHT,
    perturbation: float = 0.0,
    seed: int = 0,
    compare_dg: bool = False,
) -> ErrorReport:
    """Solve one (scheme, k, n) instance of a case and report every functional.

    The initial state is the automatic interpolant of the initial data.  A DG
    comparison run, when requested, starts from that same interpolant.  The
    standalone ``scheme="dg"`` run uses the Gauss partition for its initial
    interpolant and superconvergence-point bookkeeping.
    """
    scheme = scheme.lower()
    if scheme not in SCHEME_NAMES:
        raise InvalidConfigError(f"unknown scheme {scheme!r}")
    mesh = build_mesh(n, perturbation, seed=seed)
    coeff = FluxCoefficient(case.alpha, mesh)
    t_end = case.t_final if t_final is None else float(t_final)
    dt = dt_factor / n

    if scheme == "dg":
        partition = build_partition(mesh, k, Scheme.LSV, coeff, tie_break)
        operator = DGOperator(mesh, k, coeff, case.source)
    else:
        variant = Scheme.RSV if scheme == "rsv" else Scheme.LSV
        partition = build_partition(mesh, k, variant, coeff, tie_break)
        config = SchemeConfig(k=k, variant=variant, tie_break=tie_break)
        operator = SVOperator(config, partition, coeff, case.source)

    u0 = interpolate(case.u0, partition, coeff, InterpKind.AUTO)
    u_end = integrate_to(u0, 0.0, t_end, dt, operator)

    u_dg_end = None
    if compare_dg and scheme != "dg":
        dg_operator = DGOperator(mesh, k, coeff, case.source)
        u_dg_end = integrate_to(u0, 0.0, t_end, dt, dg_operator)

    return error_report(
        u_end,
        lambda x: case.u_exact(x, t_end),
        lambda x: case.u_x(x, t_end),
        coeff,
        partition,
        scheme=scheme,
        t_final=t_end,
        u_dg=u_dg_end,
    )


def run_study(config: StudyConfig) -> StudyResult:
    """Run the whole sweep; order estimates pair consecutive resolutions."""
    case = manufactured_case(config.example)
    tie_break = _TIE_BREAKS[config.tie_break]
    reports: list[ErrorReport] = []
    for scheme in config.schemes:
        for k in config.k_values:
            for n in config.n_values:
                reports.append(
                    run_single(
                        case,
                        scheme,
                        k,
                        n,
                        t_final=config.t_final,
                        dt_factor=config.dt_factor,
                        tie_break=tie_break,
                        perturbation=config.perturbation,
                        seed=config.seed,
                        compare_dg=config.compare_dg,
                    )
                )

    result = StudyResult(reports=reports)
    for scheme in config.schemes:
        for k in config.k_values:
            series = [r for r in reports if r.scheme == scheme and r.k == k]
            series.sort(key=lambda r: r.n)
            for metric in ErrorReport.METRIC_FIELDS:
                values = [(r.n, getattr(r, metric)) for r in series]
                if any(v is None for _, v in values) or len(values) < 2:
                    continue
                if any(v <= 1e-15 for _, v in values):
                    continue  # below roundoff; leave the order column empty
                orders = convergence_orders(values)
                result.orders[(scheme, k, metric)] = [None, *orders]
    return result


def _fmt_value(v: float) -> str:
    return f"{v:.2e}"


def _fmt_order(o: float | None) -> str:
    return "" if o is None else f"{o:.2f}"


def _csv_lines(result: StudyResult) -> list[str]:
    lines = ["scheme,k,n,T,metric,value,order"]
    seen = []
    for r in result.reports:
        key = (r.scheme, r.k)
        if key not in seen:
            seen.append(key)
    for scheme, k in seen:
        series = sorted(
            (r for r in result.reports if r.scheme == scheme and r.k == k),
            key=lambda r: r.n,
        )
        for metric in ErrorReport.METRIC_FIELDS:
            if getattr(series[0], metric) is None:
                continue
            orders = result.orders.get((scheme, k, metric), [None] * len(series))
            for r, order in zip(series, orders):
                lines.append(
                    f"{scheme},{k},{r.n},{r.t_final:.10g},{metric},"
                    f"{_fmt_value(getattr(r, metric))},{_fmt_order(order)}"
                )
    return lines


def _markdown_lines(result: StudyResult) -> list[str]:
    lines: list[str] = []
    seen = []
    for r in result.reports:
        key = (r.scheme, r.k)
        if key not in seen:
            seen.append(key)
    for scheme, k in seen:
        series = sorted(
            (r for r in result.reports if r.scheme == scheme and r.k == k),
            key=lambda r: r.n,
        )
        metrics = [m for m in ErrorReport.METRIC_FIELDS if getattr(series[0], m) is not None]
        lines.append(f"## {scheme.upper()}, k = {k}")
        lines.append("")
        header = "| n | " + " | ".join(f"{m} | order" for m in metrics) + " |"
        rule = "|" + " --- |" * (1 + 2 * len(metrics))
        lines.append(header)
        lines.append(rule)
        for i, r in enumerate(series):
            cells = [str(r.n)]
            for m in metrics:
                orders = result.orders.get((scheme, k, m), [None] * len(series))
                cells.append(_fmt_value(getattr(r, m)))
                cells.append(_fmt_order(orders[i]))
            lines.append("| " + " | ".join(cells) + " |")
        lines.append("")
    return lines


def render_table(result: StudyResult, fmt: str = "csv") -> str:
    if fmt == "csv":
        return "\n".join(_csv_lines(result)) + "\n"
    if fmt == "md":
        return "\n".join(_markdown_lines(result)) + "\n"
    raise InvalidConfigError(f"unknown output format {fmt!r}")


def emit_table(result: StudyResult, fmt: str = "csv", path: str | Path | None = None) -> str:
    """Render the study as CSV or Markdown; write it when a path is given."""
    text = render_table(result, fmt)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text
