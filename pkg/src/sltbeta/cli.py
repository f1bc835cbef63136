"""
Command-line interface.

    sltbeta fit      --input data.csv --method all
    sltbeta screen   --input data.csv
    sltbeta simulate --model normal --replications 1000 --seed 42
    sltbeta compare  --fits fits.json --a nls --b slt
    sltbeta report   --input data.csv --fits fits.json

Outputs go to ``--output-dir`` (default: ``$SLTBETA_OUTPUT_DIR`` or
``./sltbeta-output``). Each run also writes ``manifest-<command>.json``.
On failure the exit code is nonzero and stderr holds one JSON object
``{"error": <code>, "message": <text>}``.
"""
import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import DataError, SltBetaError
from .estimation import FitFailure, FitResult, Method, fit_many
from .reporting import (
    agreement_scatter,
    empirical_variance_by_delay,
    model_variance_matrix,
    summarize_lnk,
    write_agreement_csv,
    write_summary_csv,
    write_variance_csv,
)
from .screening import johnson_bickel_screen
from .simulation import GeneratorModel, generators_from_fits, run_monte_carlo

OUTPUT_ENV = "SLTBETA_OUTPUT_DIR"
BUNDLED_DATA = "synthetic_population.csv"
BUNDLED_FITS = "synthetic_fits.json"


class UsageError(SltBetaError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _summary_dict(table):
    return {r.method: {k: getattr(r, k) for k in ("n", "min", "q1", "median", "q3", "max", "mean", "sd")} for r in table.rows}


def _warn(message):
    print(f"warning: {message}", file=sys.stderr)


def _resolve_input(args, cfg):
    path = args.input or cfg.io_input
    return Path(path) if path else io.bundled_path(BUNDLED_DATA)


def _load_population(args, cfg):
    path = _resolve_input(args, cfg)
    population = io.ingest(path)
    if cfg.screen_enabled:
        kept = [s for s in population if johnson_bickel_screen(s, cfg.screen_c1_threshold, cfg.screen_c2_threshold).passes]
        _warn(f"screen removed {len(population) - len(kept)} of {len(population)} subjects")
        population = kept
    return path, population


def _methods(name):
    return list(Method) if name == "all" else [Method(name)]


def _fit(methods, args, cfg, population):
    records = fit_many(population, methods, cfg.slt, cfg.fit_options(), workers=args.workers)
    for r in records:
        if isinstance(r, FitFailure):
            _warn(f"{r.method.value} fit failed for subject {r.subject_id!r}: {r.message}")
    return records


def cmd_fit(args, cfg, out):
    path, population = _load_population(args, cfg)
    records = _fit(_methods(args.method), args, cfg, population)
    fits = [r for r in records if isinstance(r, FitResult)]
    summary = None
    outputs = [out / "fits.json"]
    try:
        table = summarize_lnk(fits)
        summary = _summary_dict(table)
        write_summary_csv(table, out / "summary_lnk.csv")
        outputs.append(out / "summary_lnk.csv")
    except DataError:
        _warn("no converged fits; summary table skipped")
    delays = {s.subject_id: s.delays for s in population}
    io.write_fits_file(records, out / "fits.json", cfg, summary, delays)
    n_err = sum(isinstance(r, FitFailure) for r in records)
    print(f"fitted {len(population)} subjects: {len(fits)} fits, {n_err} errors -> {out / 'fits.json'}")
    return [path], outputs


def cmd_screen(args, cfg, out):
    path = _resolve_input(args, cfg)
    population = io.ingest(path)
    c1 = cfg.screen_c1_threshold
    c2 = cfg.screen_c2_threshold
    target = out / "screen.csv"
    with open(target, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=["subject_id", "passes", "criterion1_violations", "criterion2_violated"])
        w.writeheader()
        n_pass = 0
        for s in population:
            res = johnson_bickel_screen(s, c1, c2)
            n_pass += res.passes
            w.writerow(res.to_row())
    print(f"{n_pass} of {len(population)} subjects pass -> {target}")
    return [path], [target]


def _fits_for_simulation(args, cfg):
    if args.input:
        path, population = _load_population(args, cfg)
        records = _fit([Method.NLS, Method.SLT], args, cfg, population)
        fits = [r for r in records if isinstance(r, FitResult)]
        delays = {s.subject_id: tuple(s.delays) for s in population}
        return [path], fits, delays
    path = Path(args.fits) if args.fits else io.bundled_path(BUNDLED_FITS)
    doc = io.read_json(path)
    fits, _ = io.read_fits_file(path)
    delays = {k: tuple(v) for k, v in doc.get("delays", {}).items()}
    if not delays:
        data = io.ingest(Path(args.data) if args.data else io.bundled_path(BUNDLED_DATA))
        delays = {s.subject_id: tuple(s.delays) for s in data}
    return [path], fits, delays


def cmd_simulate(args, cfg, out):
    inputs, fits, delays = _fits_for_simulation(args, cfg)
    models = list(GeneratorModel) if args.model == "both" else [GeneratorModel(args.model)]
    outputs = []
    for model in models:
        gens = generators_from_fits(fits, delays, model)
        if not gens:
            raise DataError(f"no converged fits usable for the {model.value} model")
        report = run_monte_carlo(gens, cfg.simulation_replications, cfg.simulation_seed, workers=args.workers)
        target = out / f"simulation_{model.value}.json"
        io.write_json({"schema": io.REPORT_SCHEMA, **report.to_dict()}, target)
        plot = out / f"invalid_by_delay_{model.value}.csv"
        write_variance_csv(
            report.delays,
            {"invalid": report.invalid_by_delay, "below": report.below_by_delay, "above": report.above_by_delay},
            plot,
        )
        outputs += [target, plot]
        print(
            f"{model.value}: {report.n_subjects} subjects x {report.replications} replications, "
            f"invalid points {report.invalid_total_proportion:.4f}, "
            f"subjects with any invalid {report.subjects_with_any_invalid_proportion:.4f} -> {target}"
        )
    return inputs, outputs


def cmd_compare(args, cfg, out):
    path = Path(args.fits) if args.fits else io.bundled_path(BUNDLED_FITS)
    fits, _ = io.read_fits_file(path)
    a = [f for f in fits if f.method is Method(args.a)]
    b = [f for f in fits if f.method is Method(args.b)]
    common = {f.subject_id for f in a} & {f.subject_id for f in b}
    if args.strict:
        agreement = agreement_scatter(a, b)
    else:
        agreement = agreement_scatter(
            [f for f in a if f.subject_id in common], [f for f in b if f.subject_id in common], drop_unconverged=True
        )
    stem = f"agreement_{args.a}_{args.b}"
    write_agreement_csv(agreement, out / f"{stem}.csv")
    io.write_json(
        {
            "method_a": args.a,
            "method_b": args.b,
            "n": len(agreement.subject_ids),
            "correlation": agreement.correlation,
            "dropped_unconverged": list(agreement.dropped),
        },
        out / f"{stem}.json",
    )
    print(f"{args.a} vs {args.b}: n = {len(agreement.subject_ids)}, r = {agreement.correlation:.4f}")
    return [path], [out / f"{stem}.csv", out / f"{stem}.json"]


def cmd_report(args, cfg, out):
    data_path, population = _load_population(args, cfg)
    fits_path = Path(args.fits) if args.fits else io.bundled_path(BUNDLED_FITS)
    fits, _ = io.read_fits_file(fits_path)
    delays = population[0].delays
    columns = {"empirical": empirical_variance_by_delay(population)}
    outputs = []
    for m in Method:
        sel = [f for f in fits if f.method is m]
        if not sel:
            continue
        mat = model_variance_matrix(sel, delays)
        if len(mat) == 0:
            continue
        columns[f"{m.value}_median"] = np.median(mat, axis=0)
        columns[f"{m.value}_mean"] = np.mean(mat, axis=0)
        per = out / f"model_variance_{m.value}.csv"
        write_variance_csv(delays, {f"subject_{i}": mat[i] for i in range(len(mat))}, per)
        outputs.append(per)
    write_variance_csv(delays, columns, out / "variance_by_delay.csv")
    outputs.append(out / "variance_by_delay.csv")
    table = summarize_lnk(fits)
    write_summary_csv(table, out / "summary_lnk.csv")
    outputs.append(out / "summary_lnk.csv")
    print(f"report written to {out}")
    return [data_path, fits_path], outputs


def build_parser():
    p = _Parser(prog="sltbeta", description="SLT beta regression for delay-discounting data.")
    common = _Parser(add_help=False)
    common.add_argument("--config", help="flat key = value config file")
    common.add_argument("--output-dir", help=f"output directory (default ${OUTPUT_ENV} or ./sltbeta-output)")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--seed", type=int, help="overrides simulation.seed")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fit", parents=[common], help="fit every subject")
    f.add_argument("--input", help="long-format CSV (default: bundled synthetic data)")
    f.add_argument("--method", choices=["nls", "beta", "slt", "all"], default="all")
    f.add_argument("--slt-s", type=float)
    f.add_argument("--slt-l", type=float)
    f.add_argument("--screen", action="store_true", help="drop subjects failing the Johnson-Bickel screen")

    s = sub.add_parser("screen", parents=[common], help="Johnson-Bickel screen")
    s.add_argument("--input")
    s.add_argument("--c1", type=float, help="criterion 1 threshold")
    s.add_argument("--c2", type=float, help="criterion 2 threshold")

    m = sub.add_parser("simulate", parents=[common], help="Monte Carlo invalid-point campaign")
    m.add_argument("--model", choices=["normal", "beta", "both"], default="both")
    m.add_argument("--fits", help="fits file (default: bundled synthetic fits)")
    m.add_argument("--data", help="dataset giving each subject's delays when the fits file lacks them")
    m.add_argument("--input", help="fit this dataset first, then simulate")
    m.add_argument("--replications", type=int)
    m.add_argument("--slt-s", type=float)
    m.add_argument("--slt-l", type=float)
    m.add_argument("--screen", action="store_true")

    c = sub.add_parser("compare", parents=[common], help="ln(k) agreement between two methods")
    c.add_argument("--fits")
    c.add_argument("--a", choices=[x.value for x in Method], default="nls")
    c.add_argument("--b", choices=[x.value for x in Method], default="slt")
    c.add_argument("--strict", action="store_true", help="fail on unmatched or unconverged subjects")

    r = sub.add_parser("report", parents=[common], help="variance profiles and summary tables")
    r.add_argument("--input")
    r.add_argument("--fits")
    r.add_argument("--screen", action="store_true")
    return p


COMMANDS = {
    "fit": cmd_fit,
    "screen": cmd_screen,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "report": cmd_report,
}


def _overrides(args):
    get = lambda name: getattr(args, name, None)  # noqa: E731
    return {
        "slt.s": get("slt_s"),
        "slt.l": get("slt_l"),
        "screen.c1_threshold": get("c1"),
        "screen.c2_threshold": get("c2"),
        "screen.enabled": True if get("screen") else None,
        "simulation.replications": get("replications"),
        "simulation.seed": get("seed"),
    }


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(argv)
        cfg = io.load_config(args.config, _overrides(args))
        out = Path(args.output_dir or cfg.io_output_dir or os.environ.get(OUTPUT_ENV) or "sltbeta-output")
        out.mkdir(parents=True, exist_ok=True)
        inputs, outputs = COMMANDS[args.command](args, cfg, out)
        io.write_manifest(out / f"manifest-{args.command}.json", args.command, argv, cfg, inputs, outputs)
        return 0
    except SltBetaError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": "io", "message": str(exc)}), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
