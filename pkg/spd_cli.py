#!/usr/bin/env python3
"""
Spectrally positive Levy densities - Command Line Interface
Usage: python spd_cli.py {exponent,density,check,scaling} --config model.json [options]

Examples:
  python spd_cli.py exponent --config stable.json --grid 1e-3:1e3:61,log
  python spd_cli.py density --config stable.json --t 1 --x-grid=-5:5:201 --method all
  python spd_cli.py check --config stable.json --suite all --report report.json
  python spd_cli.py scaling --config brownian.json --target Phi
"""

import sys
import json
import math
import argparse
import logging
from typing import Any, Dict, List, Optional

from data.models import RunConfig, OracleConfig, GridSpec, SCALING_TARGETS
from data.processor import ModelConfigProcessor, SchemaError
from calculations.errors import NumericalError, OutOfRangeError
from calculations.exponents import ExponentSuite
from calculations.saddlepoint import saddle_w
from calculations.inversion import InversionOracle
from analysis.envelopes import EnvelopeAnalyzer, HypothesisViolationError, envelope_hypotheses
from analysis.validation import GridError, run_suite
from ui.export import ExportManager, ExportError
from app_config import (EXIT_OK, EXIT_SCHEMA, EXIT_NUMERICAL, EXIT_HYPOTHESIS, ORACLE_REL_TOL)

logger = logging.getLogger('spd')

EXPONENT_FUNCTIONS = ('phi', 'phi1', 'phi2', 'phi3', 'psi', 'K', 'h', 'Phi', 'Phi_star', 'psi_star')
DEFAULT_WHAT = 'phi,phi1,phi2,psi,K,h,Phi'
DENSITY_METHOD_CHOICES = ('asym', 'oracle', 'oracle_psi', 'envelope', 'all')


def evaluate_exponents(suite: ExponentSuite, grid: List[float], what: List[str]) -> Dict[str, List[float]]:
    """One column per requested function over the grid"""
    evaluators = {
        'phi': lambda x: suite.phi(x),
        'phi1': lambda x: suite.phi(x, 1),
        'phi2': lambda x: suite.phi(x, 2),
        'phi3': lambda x: suite.phi(x, 3),
        'psi': lambda x: suite.re_psi(x),
        'K': lambda x: suite.pruitt_K(x),
        'h': lambda x: suite.pruitt_h(x),
        'Phi': lambda x: suite.big_phi(x),
        'Phi_star': suite.big_phi_star,
        'psi_star': suite.psi_star,
    }
    unknown = [name for name in what if name not in evaluators]
    if unknown:
        raise SchemaError([('what', f"unknown functions {unknown}; use {EXPONENT_FUNCTIONS}")])
    return {name: [float(evaluators[name](x)) for x in grid] for name in what}


def _asym_row(suite: ExponentSuite, t: float, x: float) -> Dict[str, float]:
    try:
        saddle = saddle_w(suite, t, x)
    except OutOfRangeError:
        return {'p_asym': math.nan, 'hardness': math.nan, 'w': math.nan}
    return {'p_asym': saddle.prefactor * math.exp(-saddle.exponent),
            'hardness': saddle.hardness, 'w': saddle.w}


def evaluate_densities(suite: ExponentSuite, t: float, xs: List[float], method: str,
                       rel_tol: float, debug: bool = False) -> List[Dict[str, Any]]:
    """Rows of the density CSV for the chosen method"""
    oracle = InversionOracle(suite, OracleConfig(rel_tol=rel_tol), debug=debug)
    analyzer = EnvelopeAnalyzer(suite, debug=debug)

    if method == 'asym':
        return [dict(x=x, **_asym_row(suite, t, x)) for x in xs]
    if method in ('oracle', 'oracle_psi'):
        return [{'x': e.x, 'p_oracle': e.value, 'err_bound': e.error, 'contour_w': e.contour_w,
                 'nodes_used': e.nodes_used} for e in oracle.sweep(t, xs, method)]
    if method == 'envelope':
        rows = []
        for x in xs:
            regime, value = analyzer.envelope(t, x)
            rows.append({'x': x, 'regime': regime.tag, 'envelope_value': value})
        return rows

    failed = envelope_hypotheses(suite)
    if failed:
        logger.warning("Envelope columns left empty; failed hypotheses: %s", ', '.join(failed))
    estimates = oracle.sweep(t, xs, 'oracle')
    rows = []
    for x, estimate in zip(xs, estimates):
        p_asym = _asym_row(suite, t, x)['p_asym']
        regime, value = '', math.nan
        if not failed:
            try:
                regime_obj, value = analyzer.envelope(t, x)
                regime = regime_obj.tag
            except HypothesisViolationError as e:
                logger.warning("No envelope at x=%g: %s", x, e)
        rows.append({
            'x': x,
            'p_oracle': estimate.value,
            'p_asym': p_asym,
            'envelope_value': value,
            'regime': regime,
            'ratio_oracle_env': estimate.value / value if value > 0 else math.nan,
            'ratio_oracle_asym': estimate.value / p_asym if p_asym > 0 else math.nan,
        })
    return rows


def run(config: RunConfig, args: argparse.Namespace) -> int:
    """Execute a validated configuration and write its outputs"""
    suite = ExponentSuite(config.model, debug=args.debug)
    exporter = ExportManager(config.model)

    if config.command == 'exponent':
        what = list(config.what) or DEFAULT_WHAT.split(',')
        values = evaluate_exponents(suite, config.grid, what)
        text = exporter.export_exponents_to_csv(config.grid, values, config.out)

    elif config.command == 'density':
        if config.t is None or config.grid is None:
            raise SchemaError([('t', 'density needs --t and --x-grid')])
        rows = evaluate_densities(suite, config.t, config.grid, config.method, config.rel_tol, args.debug)
        text = exporter.export_densities_to_csv(rows, config.t, config.method, config.out)

    elif config.command == 'check':
        grid_spec = GridSpec(points_per_decade=args.points_per_decade, refine=not args.no_refine)
        reports, summary = run_suite(suite, config.suite, grid_spec, OracleConfig(rel_tol=config.rel_tol))
        text = exporter.export_check_reports(reports, summary, config.out)
        if config.out is not None:
            print(json.dumps({k: summary[k] for k in ('total', 'passed', 'failed', 'skipped')}))
        if not summary['ok']:
            if config.out is None:
                print(text, end='')
            logger.warning("Failed checks: %s", ', '.join(summary['failed_checks']))
            return EXIT_NUMERICAL

    else:
        report = suite.scaling_report(config.target, config.scan_range)
        text = exporter.export_scaling_report(report, config.out)

    if config.out is None:
        print(text, end='')
    return EXIT_OK


def _error_exit(error: Exception, code: int, details: Optional[Any] = None) -> int:
    payload = {'error': type(error).__name__, 'message': str(error), 'details': details}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='spd',
        description="Transition densities of spectrally positive Levy processes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  spd exponent --config stable.json --grid 1e-3:1e3:61,log --what phi,Phi
  spd density --config stable.json --t 1 --x-grid=-5:5:201 --method all --out p.csv
  spd density --config stable.json --t 0.2 --x-grid=-3:0:31 --method oracle --rel-tol 1e-10
  spd check --config stable.json --suite INEQ_20,EQ43 --report report.json
  spd scaling --config tempered.json --target phi_dd --scan-range 1:1000

Model files are JSON, e.g. {"sigma": 0, "b": "centered", "jumps": {"family": "stable", "alpha": 1.5}}.
Exit codes: 0 ok, 2 schema, 3 numerical failure or failed checks, 4 hypothesis violation.
SPD_THREADS caps the worker threads of grid sweeps and check suites.
        """
    )
    parser.add_argument('--debug', action='store_true', help='Log numerical progress at DEBUG level')
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p):
        p.add_argument('--config', required=True, help='Model (or run) configuration JSON file')
        p.add_argument('--out', default=None, help='Output file (default: standard output)')
        p.add_argument('--rel-tol', type=float, default=ORACLE_REL_TOL,
                       help=f'Oracle relative tolerance (default: {ORACLE_REL_TOL})')

    p = sub.add_parser('exponent', help='Tabulate phi, its derivatives, psi, K, h and Phi')
    common(p)
    p.add_argument('--grid', default='1e-3:1e3:61,log', help='Argument grid a:b:n[,log]')
    p.add_argument('--what', default=DEFAULT_WHAT, help=f'Comma list from {",".join(EXPONENT_FUNCTIONS)}')

    p = sub.add_parser('density', help='Evaluate p(t, x) on an x-grid')
    common(p)
    p.add_argument('--t', type=float, required=True, help='Time t > 0')
    p.add_argument('--x-grid', required=True, help='Spatial grid a:b:n (write --x-grid=a:b:n when a is negative)')
    p.add_argument('--method', choices=DENSITY_METHOD_CHOICES, default='all', help='Evaluation method')

    p = sub.add_parser('check', help='Run the certification catalog')
    common(p)
    p.add_argument('--suite', default='all', help="'all' or a comma list of check ids")
    p.add_argument('--report', default=None, help='JSON report file (alias of --out)')
    p.add_argument('--points-per-decade', type=int, default=GridSpec().points_per_decade,
                   help='Sample grid density')
    p.add_argument('--no-refine', action='store_true', help='Skip the grid-refinement stability pass')

    p = sub.add_parser('scaling', help='Empirical weak-scaling report')
    common(p)
    p.add_argument('--target', choices=SCALING_TARGETS, default='Phi', help='Function whose indices are measured')
    p.add_argument('--scan-range', default=None, help='Scan range lo:hi')
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    overrides = {'command': args.command, 'rel_tol': args.rel_tol, 'out': args.out}
    if args.command == 'exponent':
        overrides.update(grid=args.grid, what=args.what)
    elif args.command == 'density':
        overrides.update(grid=args.x_grid, t=args.t, method=args.method)
    elif args.command == 'check':
        overrides.update(suite=args.suite, out=args.report or args.out)
    elif args.command == 'scaling':
        overrides['target'] = args.target
        if args.scan_range:
            try:
                lo, hi = (float(v) for v in args.scan_range.split(':'))
            except ValueError:
                raise SchemaError([('scan_range', f"expected lo:hi, got {args.scan_range!r}")])
            overrides['scan_range'] = [lo, hi]
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI function"""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.WARNING,
                        format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)

    try:
        with open(args.config, encoding='utf-8') as f:
            text = f.read()
        config = ModelConfigProcessor().parse_config(text, _overrides(args))
        return run(config, args)
    except SchemaError as e:
        return _error_exit(e, EXIT_SCHEMA, e.to_dict())
    except (GridError, ValueError, OSError) as e:
        return _error_exit(e, EXIT_SCHEMA)
    except HypothesisViolationError as e:
        return _error_exit(e, EXIT_HYPOTHESIS, {'hypothesis': e.hypothesis})
    except (NumericalError, ExportError) as e:
        return _error_exit(e, EXIT_NUMERICAL)


if __name__ == "__main__":
    sys.exit(main())
