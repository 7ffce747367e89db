"""
Command-Line Driver

Every result is reproduced as a named verification and reported as text
(banners and a pandas summary table) or JSON. Exit codes:

    0  every verification passed
    1  a verification failed, or the engine raised
    2  usage error (bad flags, missing file)
    3  parse error in an input file or expression

Usage:
    bimod verify all [--seed S] [--format json]
    bimod verify center --mode zeta3 --bound 3
    bimod solve metric --middle-linear --mode generic --pmin 0 --pmax 8 --rmin 0 --rmax 8
    bimod connection right-from-left --in gamma.txt
    bimod compat check --gamma g.txt --gammatilde g.txt --metric g.txt [--center-only]
    bimod matrixgeo verify
    bimod demo rescaled-sigma
"""

import argparse
import logging
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra.qalgebra import ExponentWindow
from .algebra.scalar import FieldMode
from .analysis import verifications as V
from .geometry.compat import compat_over_center, metric_compat_residuals
from .geometry.connection import (
    admissibility_clauses,
    gauge_transform_frame,
    is_sigma_compatible,
    solve_right_from_left,
)
from .geometry.metric import is_tau_symmetric, solve_middle_linear
from .utils.config import get_config, load_config
from .utils.errors import BimodError, ConfigError, NotAdmissibleError, ParseError
from .utils.files import load_input, read_christoffel, read_gauge, read_metric
from .utils.reporting import VerificationResult, print_result, print_summary, render_json, verification

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3

MODES = {'generic': FieldMode.GENERIC_Q, 'zeta3': FieldMode.ZETA3}


class UsageError(Exception):
    """Bad command-line input detected after argparse"""


# ============================================================================
# COMMANDS OUTSIDE THE VERIFICATION GROUPS
# ============================================================================

def _window(args: argparse.Namespace, config: Dict[str, Any]) -> ExponentWindow:
    settings = config['verifications']['middle_linear']
    if args.laurent:
        default = settings['generic_laurent_window']
    elif args.mode == 'zeta3':
        default = settings['zeta3_window']
    else:
        default = settings['generic_polynomial_window']
    given = [args.pmin, args.pmax, args.rmin, args.rmax]
    window = ExponentWindow.from_list([d if g is None else g for g, d in zip(given, default)])
    if window.is_empty:
        raise UsageError(f"empty exponent window {window}")
    if (window.pmin < 0 or window.rmin < 0) and not args.laurent:
        raise UsageError("negative exponents need --laurent")
    return window


@verification('solve metric')
def solve_metric(mode: FieldMode, window: ExponentWindow,
                 tau_symmetric: bool = False) -> Tuple[bool, Dict[str, Any]]:
    """Middle-linear metrics in the window; the solve itself always passes"""
    basis = solve_middle_linear(window, mode, tau_symmetric=tau_symmetric)
    details = {
        'mode': mode.value,
        'window': [window.pmin, window.pmax, window.rmin, window.rmax],
        'tau_symmetric': tau_symmetric,
        'dimension': len(basis),
        'basis': [str(g) for g in basis],
    }
    if tau_symmetric:
        details['all_tau_symmetric'] = all(is_tau_symmetric(g) for g in basis)
        return details['all_tau_symmetric'], details
    return True, details


@verification('connection right-from-left')
def right_from_left(path: str, mode: Optional[FieldMode] = None) -> Tuple[bool, Dict[str, Any]]:
    gamma = read_christoffel(load_input(path, mode), 'gamma')
    clauses = admissibility_clauses(gamma)
    details: Dict[str, Any] = {
        'gamma': {k: v for k, v in gamma.to_dict().items() if v != '0'},
        'clauses': [f"{'✓' if ok else '✗'} {name}" for name, ok in clauses],
    }
    try:
        gamma_tilde = solve_right_from_left(gamma)
    except NotAdmissibleError as e:
        details['failed_clauses'] = e.failed_clauses
        return False, details
    details['gammatilde'] = {k: v for k, v in gamma_tilde.to_dict().items() if v != '0'}
    details['sigma_compatible'] = is_sigma_compatible(gamma, gamma_tilde)
    return details['sigma_compatible'], details


@verification('connection gauge')
def frame_gauge_from_file(path: str, mode: Optional[FieldMode] = None) -> Tuple[bool, Dict[str, Any]]:
    """Apply the [gauge] matrix of a file to its [gamma] symbols"""
    source = load_input(path, mode)
    U = read_gauge(source)
    gamma = read_christoffel(source, 'gamma')
    moved = gauge_transform_frame(U, gamma)
    restored = gauge_transform_frame(U.inverse(), moved) == gamma
    details = {
        'U': U.to_dict(),
        'transformed': {k: v for k, v in moved.to_dict().items() if v != '0'},
        'failed_clauses': [name for name, ok in admissibility_clauses(moved) if not ok],
        'inverse_restores': restored,
    }
    return restored, details


@verification('compat check')
def compat_check(gamma_path: str, gamma_tilde_path: str, metric_path: str,
                 center_only: bool = False, mode: Optional[FieldMode] = None) -> Tuple[bool, Dict[str, Any]]:
    gamma = read_christoffel(load_input(gamma_path, mode), 'gamma')
    gamma_tilde = read_christoffel(load_input(gamma_tilde_path, mode), 'gammatilde')
    g = read_metric(load_input(metric_path, mode))
    details: Dict[str, Any] = {'metric': g.to_dict()}
    if center_only:
        satisfied = compat_over_center(gamma, gamma_tilde, g)
        details['checked_on'] = 'central 1-forms'
    else:
        report = metric_compat_residuals(gamma, gamma_tilde, g)
        satisfied = report.satisfied
        details['checked_on'] = 'basis pairs'
        details['residuals'] = report.to_dict()
    details['compatible'] = satisfied
    return satisfied, details


# ============================================================================
# ARGUMENT PARSING
# ============================================================================

def _common(config: Dict[str, Any]) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--format', choices=('text', 'json'), default=config['format'],
                        help='Report encoding')
    common.add_argument('--seed', type=int, default=config['random_state'],
                        help='Seed for randomized suites')
    common.add_argument('--n-jobs', type=int, default=config['n_jobs'],
                        help='joblib workers for randomized suites')
    common.add_argument('--save', action='store_true',
                        help='Also write the JSON report under paths.reports')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging and full details')
    common.add_argument('--config', type=str, default=None, help='Alternative config.yaml')
    return common


def build_parser(config: Optional[Dict[str, Any]] = None) -> argparse.ArgumentParser:
    config = config or get_config()
    common = _common(config)
    parser = argparse.ArgumentParser(
        prog='bimod',
        description='Exact verifications for bimodule connections on the quantum plane and matrix geometry',
    )
    commands = parser.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify', help='Run named verifications').add_subparsers(
        dest='target', required=True)
    for name in ('all', 'families', 'sigma-compat', 'whole-bimodule', 'gauge', 'compat',
                 'appendix', 'matrixgeo'):
        verify.add_parser(name, parents=[common])
    center = verify.add_parser('center', parents=[common])
    center.add_argument('--mode', choices=tuple(MODES), default='zeta3')
    center.add_argument('--bound', type=int, default=None, help='Degree bound for the center basis')

    solve = commands.add_parser('solve', help='Constraint solvers').add_subparsers(dest='target', required=True)
    metric = solve.add_parser('metric', parents=[common])
    metric.add_argument('--middle-linear', action='store_true', required=True)
    metric.add_argument('--mode', choices=tuple(MODES), default='generic')
    metric.add_argument('--laurent', action='store_true', help='Allow negative exponents')
    metric.add_argument('--tau-symmetric', action='store_true')
    for bound in ('--pmin', '--pmax', '--rmin', '--rmax'):
        metric.add_argument(bound, type=int, default=None)

    connection = commands.add_parser('connection', help='Connections').add_subparsers(
        dest='target', required=True)
    rfl = connection.add_parser('right-from-left', parents=[common])
    rfl.add_argument('--in', dest='input', required=True, help='File with a [gamma] section')
    rfl.add_argument('--mode', choices=tuple(MODES), default=None)
    whole = connection.add_parser('whole-bimodule', parents=[common])
    whole.add_argument('--mode', choices=tuple(MODES), default=None)
    connection.add_parser('gauge-demo', parents=[common])
    gauge = connection.add_parser('gauge', parents=[common])
    gauge.add_argument('--in', dest='input', required=True, help='File with [gamma] and [gauge] sections')
    gauge.add_argument('--mode', choices=tuple(MODES), default=None)

    compat = commands.add_parser('compat', help='Metric compatibility').add_subparsers(
        dest='target', required=True)
    check = compat.add_parser('check', parents=[common])
    check.add_argument('--gamma', required=True)
    check.add_argument('--gammatilde', required=True)
    check.add_argument('--metric', required=True)
    check.add_argument('--center-only', action='store_true')
    check.add_argument('--mode', choices=tuple(MODES), default=None)
    equivalence = compat.add_parser('equivalence-test', parents=[common])
    equivalence.add_argument('--trials', type=int, default=None)

    matrixgeo = commands.add_parser('matrixgeo', help='Matrix geometry').add_subparsers(
        dest='target', required=True)
    mg_verify = matrixgeo.add_parser('verify', parents=[common])
    mg_verify.add_argument('--trials', type=int, default=None)

    demo = commands.add_parser('demo', help='Demonstrations').add_subparsers(dest='target', required=True)
    rescaled = demo.add_parser('rescaled-sigma', parents=[common])
    rescaled.add_argument('--degree', type=int, default=None)
    return parser


def _mode(args: argparse.Namespace) -> Optional[FieldMode]:
    name = getattr(args, 'mode', None)
    return MODES[name] if name else None


def _require_file(path: str) -> str:
    if not os.path.exists(path):
        raise UsageError(f"input file not found: {path}")
    return path


def dispatch(args: argparse.Namespace, config: Dict[str, Any]) -> List[VerificationResult]:
    """Run the selected command and return its results in declaration order"""
    seed, n_jobs = args.seed, args.n_jobs
    command = (args.command, args.target)

    if args.command == 'verify':
        runners = {
            'all': lambda: V.verify_all(seed, n_jobs, config=config),
            'center': lambda: [V.verify_center(_mode(args), args.bound, config=config)],
            'families': lambda: [V.verify_middle_linear(config=config)],
            'sigma-compat': lambda: [V.verify_sigma_compat(seed, n_jobs, config=config)],
            'whole-bimodule': lambda: [V.verify_whole_bimodule(seed, n_jobs, config=config)],
            'gauge': lambda: [V.verify_gauge(seed, n_jobs, config=config)],
            'compat': lambda: [V.verify_compat(seed, n_jobs, config=config)],
            'appendix': lambda: [V.verify_appendix(seed, n_jobs, config=config)],
            'matrixgeo': lambda: [V.verify_matrixgeo(seed, n_jobs, config=config)],
        }
        return runners[args.target]()
    if command == ('solve', 'metric'):
        return [solve_metric(MODES[args.mode], _window(args, config), args.tau_symmetric)]
    if command == ('connection', 'right-from-left'):
        return [right_from_left(_require_file(args.input), _mode(args))]
    if command == ('connection', 'whole-bimodule'):
        return [V.verify_whole_bimodule(seed, n_jobs, mode=_mode(args), config=config)]
    if command == ('connection', 'gauge-demo'):
        return [V.gauge_demo()]
    if command == ('connection', 'gauge'):
        return [frame_gauge_from_file(_require_file(args.input), _mode(args))]
    if command == ('compat', 'check'):
        paths = [_require_file(p) for p in (args.gamma, args.gammatilde, args.metric)]
        return [compat_check(*paths, center_only=args.center_only, mode=_mode(args))]
    if command == ('compat', 'equivalence-test'):
        return [V.compat_equivalence_test(args.trials, seed, n_jobs, config=config)]
    if command == ('matrixgeo', 'verify'):
        return [V.verify_matrixgeo(seed, n_jobs, args.trials, config=config)]
    if command == ('demo', 'rescaled-sigma'):
        return [V.demo_rescaled_sigma(args.degree, config=config)]
    raise UsageError(f"unknown command {' '.join(command)}")


def _save(results: Sequence[VerificationResult], args: argparse.Namespace, config: Dict[str, Any]) -> str:
    directory = config['paths']['reports']
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"{args.command}_{args.target}.json")
    with open(path, 'w', encoding='utf-8') as f:
        f.write(render_json(results))
    return path


def _config_path(argv: Sequence[str]) -> Optional[str]:
    for n, arg in enumerate(argv):
        if arg == '--config' and n + 1 < len(argv):
            return argv[n + 1]
        if arg.startswith('--config='):
            return arg.split('=', 1)[1]
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        config = load_config(_config_path(argv))
    except ConfigError as e:
        print(f"✗ Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        args = build_parser(config).parse_args(argv)
    except SystemExit as e:
        return EXIT_PASS if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )

    try:
        results = dispatch(args, config)
    except UsageError as e:
        print(f"✗ Usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"✗ Parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BimodError as e:
        print(f"\n✗ Error: {e}", file=sys.stderr)
        return EXIT_FAIL

    # Input-file errors are reported inside a FAIL result by the decorator;
    # surface parse failures with their own exit code.
    parse_failures = [r for r in results if str(r.details.get('error', '')).startswith('ParseError')]
    if parse_failures:
        for r in parse_failures:
            print(f"✗ {r.name}: {r.details['error']}", file=sys.stderr)
        return EXIT_PARSE

    if args.format == 'json':
        print(render_json(results))
    else:
        for result in results:
            print_result(result, args.verbose)
        if len(results) > 1 or args.command == 'verify':
            print_summary(results)
    if args.save:
        path = _save(results, args, config)
        if args.format == 'text':
            print(f"\n✓ Report saved to: {path}")

    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


if __name__ == '__main__':
    sys.exit(main())
