"""Command-line interface.

Subcommands:
  transform  per-study transformed table
  pool       full pipeline: transform, pool, back-transform, diagnose
  diagnose   dataset diagnostics only
  curves     transform-curve data (CSV), optionally rendered to a figure
  stabilize  exact variance-ratio sweep (CSV), optionally rendered

Exit codes: 0 on success, 2 when the analysis completed but produced
error-severity findings, 1 on failure to run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .backtransform import BackTransformConvention
from .report import (
    AnalysisConfig,
    StudyInputError,
    emit_curves,
    emit_stabilization,
    findings_to_csv,
    parse_studies,
    report_to_csv,
    report_to_json,
    run_analysis,
)
from .diagnostics import detect_order_reversals, overlap_report
from .stabilization import DEFAULT_N_SET, DEFAULT_P_GRID
from .transforms import StudyRecord, TransformKind, transform_study

_DEFAULT_CURVE_NS = (10.0, 100.0, 1000.0)


def _parse_convention(text: str) -> BackTransformConvention:
    if text == "harmonic":
        return BackTransformConvention.harmonic_mean()
    if text == "invvar":
        return BackTransformConvention.inverse_variance()
    if text.startswith("explicit="):
        return BackTransformConvention.explicit(float(text.split("=", 1)[1]))
    raise argparse.ArgumentTypeError(
        f"expected harmonic, invvar, or explicit=<N>, got {text!r}"
    )


def _parse_float_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must be non-empty")
    return values


def _parse_int_list(text: str) -> list[int]:
    return [int(x) for x in _parse_float_list(text)]


def _transform_kind(text: str) -> TransformKind:
    return TransformKind.DOUBLE_ARCSINE if text == "double" else TransformKind.SINGLE_ARCSINE


def _add_input_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--input", default="-", metavar="PATH",
        help="study CSV with columns events,total[,label]; '-' for stdin",
    )


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--transform", choices=("single", "double"), default="double")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--out", default="-", metavar="PATH", help="output path; '-' for stdout")


def _read_studies(path: str) -> list[StudyRecord]:
    if path == "-":
        return parse_studies(sys.stdin)
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_studies(fh)


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _cmd_transform(args: argparse.Namespace) -> int:
    studies = _read_studies(args.input)
    kind = _transform_kind(args.transform)
    rows = [
        {
            "label": s.label,
            "events": s.events,
            "total": s.total,
            "p": float(format(s.proportion, ".12g")),
            "theta": float(format(t.theta, ".12g")),
            "variance": float(format(t.variance, ".12g")),
        }
        for s, t in ((s, transform_study(s, kind)) for s in studies)
    ]
    if args.format == "json":
        _write(args.out, json.dumps({"schema": "prop-meta/1", "studies": rows}, indent=2) + "\n")
    else:
        out = io.StringIO()
        writer = csv.DictWriter(
            out, fieldnames=["label", "events", "total", "p", "theta", "variance"],
            lineterminator="\n",
        )
        writer.writeheader()
        writer.writerows(rows)
        _write(args.out, out.getvalue())
    return 0


def _cmd_pool(args: argparse.Namespace) -> int:
    studies = _read_studies(args.input)
    config = AnalysisConfig(
        transform=_transform_kind(args.transform),
        model=args.model,
        convention=args.n_convention,
        level=args.level,
        diagnostics_enabled=not args.no_diagnostics,
        output_format=args.format,
    )
    report = run_analysis(studies, config)
    text = report_to_json(report) if args.format == "json" else report_to_csv(report)
    _write(args.out, text)
    return 2 if report.has_errors else 0


def _cmd_diagnose(args: argparse.Namespace) -> int:
    studies = _read_studies(args.input)
    kind = _transform_kind(args.transform)
    findings = []
    if len(studies) >= 2:
        findings.extend(detect_order_reversals(studies, kind))
        overlap = overlap_report(studies, kind)
        if overlap is not None:
            findings.append(overlap)
    if args.format == "json":
        payload = {
            "schema": "prop-meta/1",
            "transform": kind.value,
            "findings": [
                {
                    "kind": f.kind.value,
                    "severity": f.severity.value,
                    "studies": list(f.studies),
                    "detail": f.detail,
                }
                for f in findings
            ],
        }
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    else:
        _write(args.out, findings_to_csv(findings))
    return 2 if any(f.severity.value == "error" for f in findings) else 0


def _cmd_curves(args: argparse.Namespace) -> int:
    _write(args.out, emit_curves(args.n_list, args.p_grid))
    if args.plot:
        from .plots import plot_transform_curves

        plot_transform_curves(args.n_list, args.p_grid, args.plot)
    return 0


def _cmd_stabilize(args: argparse.Namespace) -> int:
    _write(args.out, emit_stabilization(args.n_list, args.p_grid))
    if args.plot:
        from .plots import plot_variance_ratios

        plot_variance_ratios(args.n_list, args.p_grid, args.plot)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="propmeta",
        description="Meta-analysis of proportions on arcsine-family scales, "
        "with pathology diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_transform = sub.add_parser("transform", help="per-study transformed table")
    _add_input_arg(p_transform)
    _add_common_args(p_transform)
    p_transform.set_defaults(func=_cmd_transform)

    p_pool = sub.add_parser("pool", help="full analysis pipeline")
    _add_input_arg(p_pool)
    _add_common_args(p_pool)
    p_pool.add_argument("--model", choices=("fixed", "dl"), default="fixed")
    p_pool.add_argument(
        "--n-convention", type=_parse_convention,
        default=BackTransformConvention.inverse_variance(),
        metavar="{harmonic|invvar|explicit=<N>}",
    )
    p_pool.add_argument("--level", type=float, default=0.95)
    p_pool.add_argument("--no-diagnostics", action="store_true")
    p_pool.set_defaults(func=_cmd_pool)

    p_diag = sub.add_parser("diagnose", help="dataset diagnostics only")
    _add_input_arg(p_diag)
    _add_common_args(p_diag)
    p_diag.set_defaults(func=_cmd_diagnose)

    p_curves = sub.add_parser("curves", help="transform-curve data")
    p_curves.add_argument("--n-list", type=_parse_float_list, default=list(_DEFAULT_CURVE_NS))
    p_curves.add_argument(
        "--p-grid", type=_parse_float_list,
        default=[round(0.01 * i, 2) for i in range(101)],
    )
    p_curves.add_argument("--out", default="-", metavar="PATH")
    p_curves.add_argument("--plot", metavar="PATH", help="also render a figure to PATH")
    p_curves.set_defaults(func=_cmd_curves)

    p_stab = sub.add_parser("stabilize", help="variance stabilization sweep")
    p_stab.add_argument("--n-list", type=_parse_int_list, default=list(DEFAULT_N_SET))
    p_stab.add_argument("--p-grid", type=_parse_float_list, default=list(DEFAULT_P_GRID))
    p_stab.add_argument("--out", default="-", metavar="PATH")
    p_stab.add_argument("--plot", metavar="PATH", help="also render a figure to PATH")
    p_stab.set_defaults(func=_cmd_stabilize)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StudyInputError, ValueError, OSError) as exc:
        print(f"propmeta: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
