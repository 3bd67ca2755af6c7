"""
Copyright 2026 The chirpfit developers

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this module except in compliance with the License.
You may obtain a copy of the License at:

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an
"AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF
ANY KIND, either express or implied.

Command line interface

    chirpfit.py synth    --params P.json --n N [--noise X.json --seed S]
                         --out signal.csv
    chirpfit.py estimate --signal signal.csv --p P --method M
                         (--init a1,..,ap,beta | --hint a1,..,ap,beta)
                         [--out result.json] [--avar SIGMA]
    chirpfit.py sweep    --config C.json --out PREFIX
    chirpfit.py avar     --params P.json --noise X.json [--n N]
                         [--out table.csv]
    chirpfit.py timing   --config C.json [--out table.csv]

Exit codes: 0 success, 2 usage or input error, 3 numerical failure.
"""
import logging
import sys
from argparse import ArgumentParser
from typing import List, Optional, Sequence

import numpy as np

from .asymptotics import AsymptoticReport
from .errors import BadStartError, ChirpfitError, DegenerateDesignError
from .estimators import METHODS, StartValues, estimate as run_estimator
from .estimators import start_values
from .model import signal_power_and_snr, synthesize
from .montecarlo import run_sweep, run_timing
from .noise import generate
from .optimize import COARSE_SQRT_N, DEFAULT_GRID_POINTS
from . import reader, writer

__all__ = ['main', 'build_parser']

logger = logging.getLogger(name='chirpfit.cli')

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(',')]
    except ValueError:
        raise ChirpfitError(f"expected comma-separated numbers, got '{text}'")


def synth(args) -> int:
    params = reader.read_params(args.params)
    noise = None
    if args.noise:
        model = reader.read_noise(args.noise)
        noise = generate(model, args.n, args.seed)
    signal = synthesize(params, args.n, noise)
    writer.write_signal(signal, args.out)
    print(f"wrote {signal.n_samples} samples to {args.out}")
    if args.noise:
        variance = model.sigma**2 * model.long_run_constant
        if variance > 0:
            power, snr = signal_power_and_snr(params, np.sqrt(variance))
            print(f"signal power {power:.6g}, SNR {snr:.4f} dB")
        else:
            print("noise variance is zero")
    return EXIT_OK


def _print_table(header: Sequence[str], rows: Sequence[Sequence]):
    print(''.join(f'{h:>18}' for h in header))
    for row in rows:
        print(''.join(f'{v:>18.10g}' if isinstance(v, float) else f'{v:>18}'
                      for v in row))


def estimate(args) -> int:
    signal = reader.read_signal(args.signal)
    xi = _floats(args.init or args.hint)
    if len(xi) != args.p + 1:
        raise ChirpfitError(
            f"expected {args.p + 1} values (alpha_1..alpha_{args.p}, beta), "
            f"got {len(xi)}")
    if args.init:
        start = StartValues.from_xi(xi)
    else:
        hints = [(alpha, xi[-1]) for alpha in xi[:-1]]
        start = start_values(signal, hints, COARSE_SQRT_N, args.points)
    result = run_estimator(args.method, signal, start)

    header = ['parameter', 'estimate']
    columns = [result.names, result.theta.tolist()]
    if args.avar is not None:
        theory = AsymptoticReport(result.params_hat, 1.0, args.avar**2,
                                  signal.n_samples)
        header.append('std_error')
        columns.append([
            float(np.sqrt(theory.variance(args.method, name, scaled=False)))
            for name in result.names])
    _print_table(header, list(zip(*columns)))
    if not result.converged:
        print("warning: an inner optimization did not converge")
    if args.out:
        writer.write_result(result, args.out)
    return EXIT_OK


def sweep(args) -> int:
    config = reader.read_sweep_config(args.config)
    report = run_sweep(config)
    writer.write_mse_report(report, args.out)
    print(f"wrote {len(report.rows)} rows to {args.out}.csv and "
          f"{args.out}.json")
    return EXIT_OK


def avar(args) -> int:
    params = reader.read_params(args.params)
    noise = reader.read_noise(args.noise)
    report = AsymptoticReport(params, noise.long_run_constant,
                              noise.sigma**2, args.n)
    _print_table(report.columns, report.rows)
    if args.out:
        writer.write_avar_report(report, args.out)
    return EXIT_OK


def timing(args) -> int:
    config = reader.read_sweep_config(args.config)
    table = run_timing(config)
    _print_table(table.columns, table.rows)
    if args.out:
        writer.write_timing(table, args.out)
    return EXIT_OK


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog='chirpfit',
        description='Estimate equal-chirp-rate multi-component chirps.')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for optimizer details')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('synth', help='synthesize a signal CSV')
    p.add_argument('--params', required=True, help='parameter JSON')
    p.add_argument('--n', type=int, required=True, help='sample count')
    p.add_argument('--noise', help='noise model JSON (default: noiseless)')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True, help='output CSV')
    p.set_defaults(func=synth)

    p = sub.add_parser('estimate', help='estimate parameters of a signal')
    p.add_argument('--signal', required=True, help='signal CSV (n,y)')
    p.add_argument('--p', type=int, required=True, help='component count')
    p.add_argument('--method', choices=METHODS, required=True)
    start = p.add_mutually_exclusive_group(required=True)
    start.add_argument('--init', help='start point a1,..,ap,beta')
    start.add_argument('--hint', help='grid-search around a1,..,ap,beta '
                       'within +-1/sqrt(N)')
    p.add_argument('--points', type=int, default=DEFAULT_GRID_POINTS,
                   help='grid points per dimension for --hint')
    p.add_argument('--avar', type=float, metavar='SIGMA',
                   help='add asymptotic standard errors for i.i.d. noise '
                   'of std SIGMA')
    p.add_argument('--out', help='result JSON')
    p.set_defaults(func=estimate)

    p = sub.add_parser('sweep', help='run a Monte-Carlo MSE sweep')
    p.add_argument('--config', required=True, help='sweep config JSON')
    p.add_argument('--out', required=True,
                   help='output prefix for .csv and .json')
    p.set_defaults(func=sweep)

    p = sub.add_parser('avar', help='print asymptotic variances')
    p.add_argument('--params', required=True, help='parameter JSON')
    p.add_argument('--noise', required=True, help='noise model JSON')
    p.add_argument('--n', type=int, default=500,
                   help='sample size of the unscaled column')
    p.add_argument('--out', help='output .csv or .json')
    p.set_defaults(func=avar)

    p = sub.add_parser('timing', help='compare estimator wall-clock times')
    p.add_argument('--config', required=True, help='sweep config JSON')
    p.add_argument('--out', help='output .csv or .json')
    p.set_defaults(func=timing)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose,
                                                      logging.DEBUG)
    logging.basicConfig(level=level)
    logger.debug(f"running '{args.command}'")
    try:
        return args.func(args)
    except (DegenerateDesignError, BadStartError,
            np.linalg.LinAlgError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
