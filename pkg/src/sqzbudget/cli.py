"""Command-line interface: budget tables, spectrum CSVs, efficiency sweeps.

Exit codes: 0 success, 2 parse or usage error, 3 physically invalid model.
All frequencies on the command line and in output are MHz; dB values are
printed with 2 decimals in tables and 6 decimals in CSV.
"""

import argparse
import dataclasses
import sys

import numpy as np

from . import chain, interferometer
from .quadcore import UnphysicalError, variance_to_db
from .scenario_io import ScenarioParseError, load_scenario
from .source import vacuum_source


def _csv_num(x):
    # round first so negative values that format to zero lose their sign
    return "%.6f" % (round(float(x), 6) + 0.0)


def format_budget(report):
    """Aligned text table for a BudgetReport."""
    rows = [(r.name, r.category, f"{r.eta:.4f}") for r in report.rows]
    name_w = max(len("element"), *(len(r[0]) for r in rows))
    cat_w = max(len("category"), *(len(r[1]) for r in rows))
    lines = [f"loss budget: {report.scenario}", ""]
    lines.append(f"{'element':<{name_w}}  {'category':<{cat_w}}     eta")
    for name, cat, eta in rows:
        lines.append(f"{name:<{name_w}}  {cat:<{cat_w}}  {eta}")
    lines.append("")
    for cat, sub in report.subtotals:
        lines.append(f"subtotal {cat:<{cat_w}}  {sub:.4f}")
    lines.append("")
    lines.append(f"total efficiency  {report.total:.4f}")
    lines.append(f"input squeezing   {report.input_db:.2f} dB")
    lines.append(f"output squeezing  {report.output_db:.2f} dB")
    return "\n".join(lines) + "\n"


def cmd_budget(args, out):
    sc = load_scenario(args.scenario)
    out.write(format_budget(chain.build_budget(sc)))
    return 0


def cmd_spectrum(args, out):
    sc = load_scenario(args.scenario)
    if args.fmin_mhz is not None or args.fmax_mhz is not None or args.points is not None:
        grid = sc.grid
        grid = chain.FrequencyGrid(
            fmin_hz=(args.fmin_mhz * 1e6 if args.fmin_mhz is not None else grid.fmin_hz),
            fmax_hz=(args.fmax_mhz * 1e6 if args.fmax_mhz is not None else grid.fmax_hz),
            points=(args.points if args.points is not None else grid.points),
        )
        sc = dataclasses.replace(sc, grid=grid)
    freqs = sc.grid.frequencies()
    if sc.cavity_stage("src") is not None:
        ns = interferometer.snr_spectrum(sc, freqs)
        columns = zip(ns.frequency_hz, ns.noise_db, ns.signal_db, ns.snr_improvement_db)
    else:
        # no recycling cavity: flat unit signal gain, improvement = suppression
        shot_sc = dataclasses.replace(sc, source=vacuum_source(sc.source))
        rows = []
        for f in freqs:
            v = chain.homodyne_readout(chain.propagate(sc, f), sc.homodyne_angle)
            v_shot = chain.homodyne_readout(chain.propagate(shot_sc, f), sc.homodyne_angle)
            ndb = variance_to_db(v / v_shot)
            rows.append((f, ndb, 0.0, ndb))
        columns = rows
    out.write("frequency_mhz,noise_db,signal_db,snr_improvement_db\n")
    for f, noise, signal, improvement in columns:
        out.write(",".join(
            [_csv_num(f / 1e6), _csv_num(noise), _csv_num(signal), _csv_num(improvement)]
        ) + "\n")
    return 0


def cmd_sweep(args, out):
    points = chain.efficiency_sweep(args.input_db, args.eta_min, args.eta_max, args.points)
    out.write("eta,observed_db\n")
    for eta, db in points:
        out.write(f"{_csv_num(eta)},{_csv_num(db)}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sqzbudget",
        description="Loss budgets and quantum-noise spectra for squeezed-light setups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_budget = sub.add_parser("budget", help="print the loss budget of a scenario file")
    p_budget.add_argument("scenario", help="scenario file (.scn)")
    p_budget.set_defaults(func=cmd_budget)

    p_spec = sub.add_parser("spectrum", help="print noise/signal/SNR spectra as CSV")
    p_spec.add_argument("scenario", help="scenario file (.scn)")
    p_spec.add_argument("--fmin-mhz", type=float, default=None)
    p_spec.add_argument("--fmax-mhz", type=float, default=None)
    p_spec.add_argument("--points", type=int, default=None)
    p_spec.set_defaults(func=cmd_spectrum)

    p_sweep = sub.add_parser("sweep", help="observed squeezing versus detection efficiency")
    p_sweep.add_argument("--input-db", type=float, required=True)
    p_sweep.add_argument("--eta-min", type=float, default=0.5)
    p_sweep.add_argument("--eta-max", type=float, default=1.0)
    p_sweep.add_argument("--points", type=int, default=51)
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def entry(argv=None, out=None):
    """Console entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    try:
        return args.func(args, out)
    except UnphysicalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ScenarioParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(entry())


if __name__ == "__main__":
    main()
