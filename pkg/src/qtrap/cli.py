"""Command-line interface.

Subcommands:

    run       one simulation -> CSV (stdout or --out), plus a PNG next to it
    figure1   entropy comparison runs (a) ground, (b) cat, (c) deformed cat
    figure2   mutual-entropy pipeline run: t, Inv, I, SP, SC
    peaks     collapse/revival event report from a CSV or a fresh run
    sweep     independent runs over a list of tau values + event summary

Configuration comes from dataclass defaults, overridden by a flat JSON file
(--config, keys mirror RunConfig fields), overridden by CLI flags.  Exit
codes: 0 success, 2 usage/configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import dataclasses
import json
import sys
from pathlib import Path

from .analysis import (
    DEFAULT_ENVELOPE_HALF_WINDOW,
    DEFAULT_MIN_HEIGHT,
    DEFAULT_MIN_SEPARATION,
    DEFAULT_ZERO_THRESHOLD,
    EventReport,
    classify_events,
    find_onsets,
    find_peaks,
)
from .propagator import NumericalError
from .runner import (
    COLUMNS,
    ConfigError,
    RunConfig,
    RunResult,
    format_value,
    render_csv,
    simulate,
)

_CONFIG_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}

_FLAG_TO_FIELD = {
    "omega_bar": "omega_bar",
    "delta_bar": "delta_bar",
    "epsilon_bar": "epsilon_bar",
    "beta": "beta",
    "tau": "tau",
    "nmax": "n_max",
    "initial": "initial",
    "tmax": "t_max_rescaled",
    "dt": "dt_rescaled",
    "out": "output_path",
    "emit": "emit",
}


def _parse_beta(value) -> complex:
    try:
        return complex(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"beta must be a complex number, got {value!r}") from exc


def _parse_emit(value) -> tuple[str, ...]:
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
    else:
        parts = [str(p) for p in value]
    return tuple(parts)


def _parse_taus(text: str) -> list[float]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"invalid tau list {text!r}") from exc


def load_config_file(path: str) -> dict:
    """Flat JSON document with RunConfig field names as keys."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = sorted(set(data) - set(_CONFIG_FIELDS))
    if unknown:
        raise ConfigError(f"config file {path} has unknown keys {unknown}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then config-file values, then explicit CLI flags."""
    values: dict = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for flag, field in _FLAG_TO_FIELD.items():
        flag_value = getattr(args, flag, None)
        if flag_value is not None:
            values[field] = flag_value
    coerced = {}
    for field, value in values.items():
        try:
            if field == "beta":
                coerced[field] = _parse_beta(value)
            elif field == "emit":
                coerced[field] = _parse_emit(value)
            elif field == "n_max":
                coerced[field] = int(value)
            elif field == "initial":
                coerced[field] = str(value)
            elif field == "output_path":
                coerced[field] = str(value)
            else:
                coerced[field] = float(value)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid value for {field}: {value!r}") from exc
    cfg = RunConfig(**coerced)
    cfg.validate()
    return cfg


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _render_run_png(result: RunResult, path: Path) -> None:
    from . import plotting

    columns = [c for c in result.config.columns() if c != "t"]
    t = [float(x) for x in result.grid]
    plotting.render_series(
        str(path), t, {c: result.column_values(c) for c in columns}
    )


def _detect(result: RunResult, args: argparse.Namespace) -> EventReport:
    sp_series = result.series("SP")
    inv_series = result.series("Inv")
    peaks = find_peaks(
        sp_series,
        min_height=args.min_height,
        min_separation=args.min_separation,
        smooth_window=args.smooth_window,
    )
    report = classify_events(peaks, inv_series, half_window=args.envelope_half_window)
    return report.with_onsets(find_onsets(sp_series, args.zero_threshold))


def _events_csv(report: EventReport) -> str:
    lines = ["t,SP,kind"]
    for ev in report.events:
        lines.append(f"{format_value(ev.t)},{format_value(ev.value)},{ev.kind}")
    return "\n".join(lines) + "\n"


def _print_report(report: EventReport) -> None:
    if not report.events:
        print("no events detected")
    else:
        print("events:")
        for ev in report.events:
            print(f"  {ev.kind:<8} t={ev.t:g}  SP={ev.value:.6g}")
    if report.onsets:
        print("onsets (S(P) at zero):")
        for lo, hi in report.onsets:
            print(f"  [{lo:g}, {hi:g}]")


def cmd_run(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    result = simulate(cfg)
    text = render_csv(result)
    if cfg.output_path:
        out = Path(cfg.output_path)
        _write_text(out, text)
        if not args.no_plot:
            _render_run_png(result, out.with_suffix(".png"))
    else:
        sys.stdout.write(text)
    return 0


def cmd_figure1(args: argparse.Namespace) -> int:
    taus = _parse_taus(args.taus)
    if len(taus) != 2:
        raise ConfigError(f"figure1 needs exactly two tau values, got {taus}")
    base = build_config(args)
    outdir = Path(args.outdir)
    runs = [
        ("figure1a", "ground", taus[0]),
        ("figure1b", "cat", taus[0]),
        ("figure1c", "cat", taus[1]),
    ]
    panels = []
    for name, kind, tau in runs:
        cfg = dataclasses.replace(
            base,
            initial=kind,
            tau=tau,
            emit=("t", "S_paper", "S_vN"),
            output_path="",
        )
        result = simulate(cfg)
        _write_text(outdir / f"{name}.csv", render_csv(result))
        panels.append(
            (
                f"{name}: {kind}, tau={tau:g}",
                [float(x) for x in result.grid],
                {
                    "S_paper": result.column_values("S_paper"),
                    "S_vN": result.column_values("S_vN"),
                },
            )
        )
    if not args.no_plot:
        from . import plotting

        plotting.render_panels(str(outdir / "figure1.png"), panels)
    return 0


def cmd_figure2(args: argparse.Namespace) -> int:
    base = build_config(args)
    cfg = dataclasses.replace(
        base, initial="cat", emit=("t", "Inv", "I", "SP", "SC"), output_path=""
    )
    result = simulate(cfg)
    outdir = Path(args.outdir)
    _write_text(outdir / "figure2.csv", render_csv(result))
    if not args.no_plot:
        from . import plotting

        t = [float(x) for x in result.grid]
        plotting.render_panels(
            str(outdir / "figure2.png"),
            [
                ("Inv", t, {"Inv": result.column_values("Inv")}),
                ("I", t, {"I": result.column_values("I")}),
                (
                    "S(P), S(C)",
                    t,
                    {
                        "SP": result.column_values("SP"),
                        "SC": result.column_values("SC"),
                    },
                ),
            ],
        )
    return 0


def _series_from_csv(path: str) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            fields = reader.fieldnames or []
            missing = [c for c in ("t", "SP", "Inv") if c not in fields]
            if missing:
                raise ConfigError(f"input CSV {path} lacks required columns {missing}")
            sp, inv = [], []
            for row in reader:
                t = float(row["t"])
                if row["SP"] != "":
                    sp.append((t, float(row["SP"])))
                if row["Inv"] != "":
                    inv.append((t, float(row["Inv"])))
    except OSError as exc:
        raise ConfigError(f"cannot read input CSV {path}: {exc}") from exc
    return sp, inv


def cmd_peaks(args: argparse.Namespace) -> int:
    if args.input:
        sp_series, inv_series = _series_from_csv(args.input)
        peaks = find_peaks(
            sp_series,
            min_height=args.min_height,
            min_separation=args.min_separation,
            smooth_window=args.smooth_window,
        )
        report = classify_events(
            peaks, inv_series, half_window=args.envelope_half_window
        )
        report = report.with_onsets(find_onsets(sp_series, args.zero_threshold))
        result = None
    else:
        cfg = build_config(args)
        result = simulate(cfg, with_mutual=True)
        report = _detect(result, args)
    _print_report(report)
    if args.out:
        out = Path(args.out)
        _write_text(out, _events_csv(report))
        if result is not None and not args.no_plot:
            from . import plotting

            plotting.render_events(
                str(out.with_suffix(".png")),
                [float(x) for x in result.grid],
                result.column_values("SP"),
                result.column_values("Inv"),
                report,
            )
    return 0


def _sweep_one(base: RunConfig, tau: float, outdir: Path, args: argparse.Namespace):
    cfg = dataclasses.replace(base, tau=tau, output_path="")
    result = simulate(cfg, with_mutual=True)
    _write_text(outdir / f"tau_{tau:g}.csv", render_csv(result))
    report = _detect(result, args)
    if not args.no_plot:
        from . import plotting

        plotting.render_events(
            str(outdir / f"tau_{tau:g}.png"),
            [float(x) for x in result.grid],
            result.column_values("SP"),
            result.column_values("Inv"),
            report,
        )
    return report


def cmd_sweep(args: argparse.Namespace) -> int:
    taus = _parse_taus(args.taus)
    base = build_config(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    failures: list[str] = []
    reports: dict[float, EventReport] = {}
    if taus:
        workers = min(4, len(taus))
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {
                pool.submit(_sweep_one, base, tau, outdir, args): tau for tau in taus
            }
            for future in concurrent.futures.as_completed(futures):
                tau = futures[future]
                try:
                    reports[tau] = future.result()
                except (NumericalError, ConfigError, ValueError) as exc:
                    failures.append(f"tau={tau:g}: {exc}")
                    print(f"tau={tau:g} failed: {exc}", file=sys.stderr)
    lines = ["tau,kind,t,SP"]
    for tau in taus:
        report = reports.get(tau)
        if report is None:
            continue
        for ev in report.events:
            lines.append(
                f"{format_value(tau)},{ev.kind},{format_value(ev.t)},{format_value(ev.value)}"
            )
    _write_text(outdir / "summary.csv", "\n".join(lines) + "\n")
    return 3 if failures else 0


def _add_config_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model configuration")
    group.add_argument("--config", help="flat JSON config file (keys mirror RunConfig)")
    group.add_argument("--omega-bar", dest="omega_bar", type=float,
                       help="trap frequency over Rabi frequency")
    group.add_argument("--delta-bar", dest="delta_bar", type=float,
                       help="detuning over Rabi frequency")
    group.add_argument("--epsilon-bar", dest="epsilon_bar", type=float,
                       help="coupling strength over Rabi frequency")
    group.add_argument("--beta", help="coherent amplitude (complex, e.g. 4 or 1+2j)")
    group.add_argument("--tau", type=float, help="trap deformation exponent")
    group.add_argument("--nmax", type=int, help="Fock truncation index")
    group.add_argument("--initial", choices=("ground", "excited", "cat"),
                       help="initial state kind")
    group.add_argument("--tmax", type=float, help="grid end in rescaled time")
    group.add_argument("--dt", type=float, help="grid step in rescaled time")
    group.add_argument("--emit", help="comma-separated column subset (t always kept)")


def _add_detector_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("event detector")
    group.add_argument("--min-height", type=float, default=DEFAULT_MIN_HEIGHT,
                       help="peak threshold as a fraction of the smoothed maximum")
    group.add_argument("--min-separation", type=float, default=DEFAULT_MIN_SEPARATION,
                       help="minimum peak spacing in rescaled time")
    group.add_argument("--smooth-window", type=float, default=None,
                       help="moving-average width (default min-separation / 5)")
    group.add_argument("--zero-threshold", type=float, default=DEFAULT_ZERO_THRESHOLD,
                       help="S(P) level treated as zero for onset intervals")
    group.add_argument("--envelope-half-window", type=float,
                       default=DEFAULT_ENVELOPE_HALF_WINDOW,
                       help="half width of the inversion envelope window")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtrap",
        description="Two-level ion in a deformed trap: dynamics, entropies, events.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one simulation -> CSV (stdout or --out)")
    _add_config_options(p_run)
    p_run.add_argument("--out", help="output CSV path (stdout when omitted)")
    p_run.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    p_run.set_defaults(func=cmd_run)

    p_f1 = sub.add_parser("figure1", help="entropy comparison runs (a), (b), (c)")
    _add_config_options(p_f1)
    p_f1.add_argument("--taus", default="0.0,0.004",
                      help="two tau values: runs (a)/(b) use the first, (c) the second")
    p_f1.add_argument("--outdir", default=".", help="directory for CSV/PNG output")
    p_f1.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    p_f1.set_defaults(func=cmd_figure1)

    p_f2 = sub.add_parser("figure2", help="mutual-entropy pipeline run")
    _add_config_options(p_f2)
    p_f2.add_argument("--outdir", default=".", help="directory for CSV/PNG output")
    p_f2.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    p_f2.set_defaults(func=cmd_figure2)

    p_peaks = sub.add_parser("peaks", help="collapse/revival event report")
    _add_config_options(p_peaks)
    _add_detector_options(p_peaks)
    p_peaks.add_argument("--input", help="existing run CSV with t, SP, Inv columns")
    p_peaks.add_argument("--out", help="events CSV path (report always prints)")
    p_peaks.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    p_peaks.set_defaults(func=cmd_peaks)

    p_sweep = sub.add_parser("sweep", help="independent runs over tau values")
    _add_config_options(p_sweep)
    _add_detector_options(p_sweep)
    p_sweep.add_argument("--taus", required=True,
                         help="comma-separated tau values (empty for none)")
    p_sweep.add_argument("--outdir", default="sweep", help="directory for outputs")
    p_sweep.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
