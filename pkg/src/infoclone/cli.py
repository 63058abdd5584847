"""Command-line front end.

Subcommands build transfer matrices, report clone parameters, run the
truncated-basis verifier, drive Monte Carlo fidelity experiments, emit the
closed-form fidelity densities, and print the scheme-comparison table.

Exit codes: 0 when every internal gate passes, 2 for invalid configuration,
3 when a numeric or statistical gate fails.  All output is deterministic for
a fixed seed.  Relative ``--output`` paths are resolved against the
``INFOCLONE_OUTPUT_DIR`` environment variable when it is set.

File schemas (version 1):
  samples CSV   header ``trial,re_est,im_est,F``, one row per trial, floats
                rendered with 17 significant digits for lossless round-trips.
  summary JSON  single object with ``schema_version``, run configuration,
                ``mean``, ``variance``, ``ks_statistic``, ``ks_critical_5pct``,
                ``ks_pass`` and a 50-bin histogram.
  density CSV   header ``F,p`` on a log-spaced grid from 1e-12 to 1.
  dump CSV      header ``index,n_<mode>...,re,im`` over the flattened number
                basis (source mode slowest).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import fock_oracle, gaussian_cloner, measurement, phase_space

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GATE = 3
SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "INFOCLONE_OUTPUT_DIR"
PDF_GRID_FLOOR = 1e-12
DEFAULT_TABLE_CASES = "1,2;1,4;2,2;2,4"


def _parse_complex(text: str) -> complex:
    try:
        re_part, im_part = text.split(",")
        return complex(float(re_part), float(im_part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_complex_list(text: str) -> list[complex]:
    return [_parse_complex(part) for part in text.split(";") if part != ""]


def _parse_cases(text: str) -> list[tuple[int, int]]:
    cases = []
    for part in text.split(";"):
        if not part:
            continue
        try:
            m_text, n_text = part.split(",")
            cases.append((int(m_text), int(n_text)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected 'M,N' pairs, got {part!r}") from None
    if not cases:
        raise argparse.ArgumentTypeError("no cases given")
    return cases


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _fmt_complex(value: complex) -> str:
    return f"{value.real:.12g}{value.imag:+.12g}j"


def _resolve_output(path: str | None) -> str | None:
    if path is None:
        return None
    if not os.path.isabs(path):
        base = os.environ.get(OUTPUT_DIR_ENV)
        if base:
            return os.path.join(base, path)
    return path


@contextmanager
def _open_output(path: str | None):
    resolved = _resolve_output(path)
    if resolved is None:
        yield sys.stdout
    else:
        parent = os.path.dirname(resolved)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(resolved, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _network_from_args(args) -> phase_space.CloneNetworkConfig:
    """Build the coupling network from --copies or --r/--delta/--time flags."""
    if args.copies is not None and args.r is not None:
        raise ValueError("give either --copies or --r, not both")
    if args.copies is not None:
        if args.copies < 1:
            raise ValueError("--copies must be positive")
        if args.time is None:
            return phase_space.symmetric_clone_config(args.copies)
        return phase_space.CloneNetworkConfig(
            np.ones(args.copies), np.zeros(args.copies), args.time
        )
    if args.r is None:
        raise ValueError("specify --copies or --r with --time")
    if args.time is None:
        raise ValueError("--time is required with --r")
    magnitudes = np.asarray(args.r, dtype=float)
    if args.delta is not None:
        phases = np.asarray(args.delta, dtype=float)
    else:
        phases = np.zeros(magnitudes.size)
    return phase_space.CloneNetworkConfig(magnitudes, phases, args.time)


def cmd_transfer(args) -> int:
    config = _network_from_args(args)
    matrix = phase_space.build_transfer(config)
    deviation = phase_space.unitarity_deviation(matrix)
    with _open_output(args.output) as out:
        if args.format == "json":
            payload = {
                "schema_version": SCHEMA_VERSION,
                "dim": matrix.shape[0],
                "entries": [[[z.real, z.imag] for z in row] for row in matrix],
                "unitarity_deviation": deviation,
            }
            json.dump(payload, out)
            out.write("\n")
        elif args.format == "csv":
            out.write("row,col,re,im\n")
            for i, row in enumerate(matrix):
                for j, z in enumerate(row):
                    out.write(f"{i},{j},{z.real:.17g},{z.imag:.17g}\n")
        else:
            for row in matrix:
                out.write("  ".join(_fmt_complex(z) for z in row) + "\n")
            out.write(f"max unitarity deviation: {_fmt(deviation)}\n")
    return EXIT_OK if deviation <= phase_space.UNITARITY_TOL else EXIT_GATE


def cmd_clone(args) -> int:
    if args.copies < 1:
        raise ValueError("--copies must be positive")
    params = phase_space.information_clone(args.alpha, args.copies)
    fidelity = phase_space.info_overlap_fidelity(args.alpha, args.copies)
    with _open_output(args.output) as out:
        if args.format == "json":
            payload = {
                "schema_version": SCHEMA_VERSION,
                "alpha": [args.alpha.real, args.alpha.imag],
                "copies": args.copies,
                "source": [params.source.real, params.source.imag],
                "targets": [[z.real, z.imag] for z in params.targets],
                "overlap_fidelity": fidelity,
            }
            json.dump(payload, out)
            out.write("\n")
        elif args.format == "csv":
            out.write("mode,re,im\n")
            for index, z in enumerate(params.entries):
                out.write(f"{index},{z.real:.17g},{z.imag:.17g}\n")
        else:
            out.write(f"source: {_fmt_complex(params.source)}\n")
            for index, z in enumerate(params.targets, start=1):
                out.write(f"target {index}: {_fmt_complex(z)}\n")
            out.write(f"overlap fidelity: {_fmt(fidelity)}\n")
    return EXIT_OK


def _write_amplitude_dump(path, state: fock_oracle.FockVector):
    occupations = fock_oracle.mode_occupations(state.mode_count, state.levels)
    with _open_output(path) as out:
        header = ",".join(f"n_{m}" for m in range(state.mode_count))
        out.write(f"index,{header},re,im\n")
        for index, amp in enumerate(state.amplitudes):
            occ = ",".join(str(n) for n in occupations[index])
            out.write(f"{index},{occ},{amp.real:.17g},{amp.imag:.17g}\n")


def cmd_fock_verify(args) -> int:
    config = _network_from_args(args)
    betas = args.beta or []
    if len(betas) > config.n_targets:
        raise ValueError("more --beta values than target modes")
    entries = np.zeros(config.n_targets + 1, dtype=complex)
    entries[0] = args.alpha
    entries[1 : 1 + len(betas)] = betas
    params = phase_space.CoherentParams(entries)

    infidelity = fock_oracle.verify_disentanglement(
        params, config, args.truncation, dim_budget=args.budget
    )
    predicted = phase_space.apply_transfer(phase_space.build_transfer(config), params)
    if args.dump:
        evolved = fock_oracle.evolve_product_state(
            params, config, args.truncation, dim_budget=args.budget
        )
        _write_amplitude_dump(args.dump, evolved)

    dim = args.truncation ** (config.n_targets + 1)
    with _open_output(args.output) as out:
        if args.format == "json":
            payload = {
                "schema_version": SCHEMA_VERSION,
                "truncation": args.truncation,
                "dim": dim,
                "infidelity": infidelity,
                "gate": args.gate,
                "predicted": [[z.real, z.imag] for z in predicted.entries],
            }
            json.dump(payload, out)
            out.write("\n")
        else:
            out.write(f"truncation: {args.truncation} levels, dimension {dim}\n")
            out.write(
                "predicted parameters: "
                + "  ".join(_fmt_complex(z) for z in predicted.entries)
                + "\n"
            )
            out.write(f"infidelity: {_fmt(infidelity)}\n")
    return EXIT_OK if infidelity < args.gate else EXIT_GATE


def _write_samples_csv(handle, samples):
    handle.write("trial,re_est,im_est,F\n")
    for index, sample in enumerate(samples):
        handle.write(
            f"{index},{sample.alpha_est.real:.17g},"
            f"{sample.alpha_est.imag:.17g},{sample.fidelity:.17g}\n"
        )


def _run_mc(args, scheme: str) -> int:
    run = measurement.FidelityRun(
        alpha_true=args.alpha,
        sources=args.sources,
        copies=args.copies,
        trials=args.trials,
        seed=args.seed,
        scheme=scheme,
    )
    if scheme == measurement.INFO_SCHEME:
        samples = measurement.run_info_trials(run, workers=args.workers)
        reference = measurement.info_cdf(run.sources)
        exponent = float(run.sources)
    else:
        samples = gaussian_cloner.run_gauss_trials(run, workers=args.workers)
        reference = gaussian_cloner.gauss_cdf(run.sources, run.copies)
        exponent = gaussian_cloner.gauss_exponent(run.sources, run.copies)
    summary = measurement.summarize(samples, reference)
    critical = measurement.ks_critical(run.trials)
    ks_pass = summary.ks_statistic < critical

    if args.output:
        with _open_output(args.output) as out:
            _write_samples_csv(out, samples)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "scheme": scheme,
        "alpha_true": [run.alpha_true.real, run.alpha_true.imag],
        "sources": run.sources,
        "copies": run.copies,
        "trials": run.trials,
        "seed": run.seed,
        "workers": args.workers,
        "reference_cdf_exponent": exponent,
        "mean": summary.mean,
        "variance": summary.variance,
        "ks_statistic": summary.ks_statistic,
        "ks_critical_5pct": critical,
        "ks_pass": ks_pass,
        "histogram": {
            "bin_edges": [float(edge) for edge in summary.bin_edges],
            "counts": [int(count) for count in summary.counts],
        },
    }
    print(json.dumps(payload))
    return EXIT_OK if ks_pass else EXIT_GATE


def cmd_mc_info(args) -> int:
    return _run_mc(args, measurement.INFO_SCHEME)


def cmd_mc_gauss(args) -> int:
    return _run_mc(args, measurement.GAUSS_SCHEME)


def cmd_pdf(args) -> int:
    if args.scheme == "info":
        density = measurement.info_pdf(args.sources)
    else:
        if args.copies is None:
            raise ValueError("--copies is required for the gaussian scheme")
        density = gaussian_cloner.gauss_pdf(args.sources, args.copies)
    # log-spaced grid keeps trapezoidal mass accurate for the singular c<1 laws
    grid = np.geomspace(PDF_GRID_FLOOR, 1.0, args.grid)
    values = np.asarray(density(grid), dtype=float)
    with _open_output(args.output) as out:
        out.write("F,p\n")
        for f, p in zip(grid, values):
            out.write(f"{f:.17g},{p:.17g}\n")
    return EXIT_OK


def cmd_table(args) -> int:
    rows = gaussian_cloner.comparison_table(args.cases)
    with _open_output(args.output) as out:
        if args.format == "json":
            payload = {
                "schema_version": SCHEMA_VERSION,
                "rows": [
                    {
                        "sources": row.sources,
                        "copies": row.copies,
                        "gaussian_mean": float(row.gauss_mean),
                        "gaussian_mean_fraction": str(row.gauss_mean),
                        "info_mean": float(row.info_mean),
                        "info_mean_fraction": str(row.info_mean),
                    }
                    for row in rows
                ],
            }
            json.dump(payload, out)
            out.write("\n")
        elif args.format == "csv":
            out.write("sources,copies,gaussian_mean,info_mean\n")
            for row in rows:
                out.write(
                    f"{row.sources},{row.copies},"
                    f"{float(row.gauss_mean):.17g},{float(row.info_mean):.17g}\n"
                )
        else:
            out.write(f"{'M':>3} {'N':>3}  {'gaussian':<28} {'info':<28}\n")
            for row in rows:
                gauss = f"{row.gauss_mean} ({_fmt(float(row.gauss_mean))})"
                info = f"{row.info_mean} ({_fmt(float(row.info_mean))})"
                out.write(f"{row.sources:>3} {row.copies:>3}  {gauss:<28} {info:<28}\n")
    return EXIT_OK


def _add_network_flags(parser):
    parser.add_argument("--copies", type=int, default=None,
                        help="symmetric network with this many equal unit couplings")
    parser.add_argument("--r", type=_parse_floats, default=None,
                        help="coupling magnitudes, comma separated")
    parser.add_argument("--delta", type=_parse_floats, default=None,
                        help="coupling phases in radians, comma separated")
    parser.add_argument("--time", type=float, default=None, help="interaction time")


def _add_output_flags(parser, formats=("text", "csv", "json")):
    parser.add_argument("--format", choices=formats, default=formats[0])
    parser.add_argument("--output", default=None,
                        help=f"output path (relative paths honor ${OUTPUT_DIR_ENV})")


def _add_mc_flags(parser):
    parser.add_argument("--alpha", type=_parse_complex, default=complex(1.0, 0.0),
                        help="true source parameter as 're,im'")
    parser.add_argument("--sources", type=int, required=True, help="number of source copies M")
    parser.add_argument("--copies", type=int, required=True, help="clones per source N")
    parser.add_argument("--trials", type=int, default=100000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel batch workers; results are worker-count independent")
    parser.add_argument("--output", default=None, help="write per-trial samples CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="infoclone",
        description="Coherent-state information cloning: transfer matrices, "
        "truncated-basis verification, and measurement-fidelity Monte Carlo.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    transfer = sub.add_parser("transfer", help="build a transfer matrix and report unitarity")
    _add_network_flags(transfer)
    _add_output_flags(transfer)
    transfer.set_defaults(func=cmd_transfer)

    clone = sub.add_parser("clone", help="information-clone a source parameter")
    clone.add_argument("--alpha", type=_parse_complex, required=True,
                       help="source parameter as 're,im'")
    clone.add_argument("--copies", type=int, required=True)
    _add_output_flags(clone)
    clone.set_defaults(func=cmd_clone)

    verify = sub.add_parser("fock-verify",
                            help="verify the parameter map by truncated-basis evolution")
    verify.add_argument("--alpha", type=_parse_complex, required=True,
                        help="source parameter as 're,im'")
    verify.add_argument("--beta", type=_parse_complex_list, default=None,
                        help="initial target parameters as 're,im;re,im;...'")
    _add_network_flags(verify)
    verify.add_argument("--truncation", type=int, default=16, help="levels per mode")
    verify.add_argument("--budget", type=int, default=fock_oracle.DEFAULT_DIM_BUDGET,
                        help="total-dimension budget")
    verify.add_argument("--gate", type=float, default=1e-6, help="infidelity pass threshold")
    verify.add_argument("--dump", default=None, help="write evolved amplitudes CSV here")
    _add_output_flags(verify, formats=("text", "json"))
    verify.set_defaults(func=cmd_fock_verify)

    mc_info = sub.add_parser("mc-info", help="Monte Carlo fidelities, information cloning")
    _add_mc_flags(mc_info)
    mc_info.set_defaults(func=cmd_mc_info)

    mc_gauss = sub.add_parser("mc-gauss", help="Monte Carlo fidelities, Gaussian copier")
    _add_mc_flags(mc_gauss)
    mc_gauss.set_defaults(func=cmd_mc_gauss)

    pdf = sub.add_parser("pdf", help="emit the closed-form fidelity density as CSV")
    pdf.add_argument("--scheme", choices=("info", "gauss"), required=True)
    pdf.add_argument("--sources", type=int, required=True)
    pdf.add_argument("--copies", type=int, default=None)
    pdf.add_argument("--grid", type=int, default=10000, help="number of grid points")
    pdf.add_argument("--output", default=None)
    pdf.set_defaults(func=cmd_pdf)

    table = sub.add_parser("table", help="scheme-comparison table of mean fidelities")
    table.add_argument("--cases", type=_parse_cases, default=_parse_cases(DEFAULT_TABLE_CASES),
                       help="semicolon-separated 'M,N' pairs")
    _add_output_flags(table)
    table.set_defaults(func=cmd_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
