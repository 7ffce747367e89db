import json

import pytest

from bimod.cli import EXIT_FAIL, EXIT_PARSE, EXIT_PASS, EXIT_USAGE, build_parser, main
from bimod.utils.config import DEFAULT_CONFIG
from bimod.utils.reporting import parse_report

SMALL_CONFIG = """\
verifications:
  center:
    bound: 3
  middle_linear:
    generic_polynomial_window: [0, 3, 0, 3]
    zeta3_window: [0, 4, 0, 4]
  compat:
    equivalence_trials: 3
    max_degree: 2
  matrixgeo:
    trials: 2
matrixgeo:
  m: 1
  n: 2
  max_degree: 1
paths:
  reports: "{reports}"
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / 'config.yaml'
    path.write_text(SMALL_CONFIG.format(reports=(tmp_path / 'reports').as_posix()), encoding='utf-8')
    return str(path)


@pytest.fixture
def write(tmp_path):
    def build(name, text):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return str(path)
    return build


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parser_knows_every_command():
    parser = build_parser(DEFAULT_CONFIG)
    args = parser.parse_args(['compat', 'check', '--gamma', 'a', '--gammatilde', 'b', '--metric', 'c'])
    assert (args.command, args.target, args.center_only) == ('compat', 'check', False)
    args = parser.parse_args(['demo', 'rescaled-sigma', '--degree', '2'])
    assert args.degree == 2


def test_verify_center(capsys, config_file):
    code, out, _ = run(capsys, 'verify', 'center', '--mode', 'zeta3', '--bound', '3', '--config', config_file)
    assert code == EXIT_PASS
    assert 'verify center' in out
    assert 'All verifications passed' in out


def test_json_output(capsys, config_file):
    code, out, _ = run(capsys, 'verify', 'center', '--mode', 'generic', '--format', 'json',
                       '--config', config_file)
    assert code == EXIT_PASS
    results = parse_report(out)
    assert results[0].details['center_dimension'] == 1
    assert json.loads(out)['passed'] is True


def test_solve_metric_generic(capsys, config_file):
    code, out, _ = run(capsys, 'solve', 'metric', '--middle-linear', '--mode', 'generic',
                       '--pmax', '3', '--rmax', '3', '--format', 'json', '--config', config_file)
    assert code == EXIT_PASS
    assert parse_report(out)[0].details['dimension'] == 0


def test_solve_metric_laurent(capsys, config_file):
    code, out, _ = run(capsys, 'solve', 'metric', '--middle-linear', '--laurent', '--format', 'json',
                       '--config', config_file)
    assert code == EXIT_PASS
    assert parse_report(out)[0].details['dimension'] == 4
    code, out, _ = run(capsys, 'solve', 'metric', '--middle-linear', '--laurent', '--tau-symmetric',
                       '--format', 'json', '--config', config_file)
    assert code == EXIT_PASS
    assert parse_report(out)[0].details['dimension'] == 3


def test_gauge_demo(capsys, config_file):
    code, out, _ = run(capsys, 'connection', 'gauge-demo', '--config', config_file)
    assert code == EXIT_PASS
    assert '✓ PASS' in out


def test_right_from_left(capsys, config_file, write):
    path = write('gamma.txt', "[gamma]\nG^1_11 = x*y\nG^2_11 = y^2\n")
    code, out, _ = run(capsys, 'connection', 'right-from-left', '--in', path, '--config', config_file)
    assert code == EXIT_PASS
    assert 'gammatilde' in out


def test_right_from_left_not_admissible(capsys, config_file, write):
    path = write('gamma.txt', "[gamma]\nG^1_12 = 1\n")
    code, out, _ = run(capsys, 'connection', 'right-from-left', '--in', path,
                       '--format', 'json', '--config', config_file)
    assert code == EXIT_FAIL
    assert parse_report(out)[0].details['failed_clauses'] == ['fails G^1_12 in xA']


def test_frame_gauge_from_file(capsys, config_file, write):
    path = write('gauge.txt', "[gamma]\n[gauge]\nU12 = x\nUinv12 = -x\n")
    code, out, _ = run(capsys, 'connection', 'gauge', '--in', path, '--format', 'json', '--config', config_file)
    assert code == EXIT_PASS
    assert parse_report(out)[0].details['transformed'] == {'G^1_12': '1'}


def test_compat_check(capsys, config_file, write):
    gamma = write('gamma.txt', "[gamma]\n")
    tilde = write('tilde.txt', "[gammatilde]\n")
    metric = write('metric.txt', "[metric]\nG11 = 1\nG22 = 1\n")
    code, _, _ = run(capsys, 'compat', 'check', '--gamma', gamma, '--gammatilde', tilde,
                     '--metric', metric, '--config', config_file)
    assert code == EXIT_PASS
    bad = write('bad_metric.txt', "[metric]\nG11 = x\n")
    code, _, _ = run(capsys, 'compat', 'check', '--gamma', gamma, '--gammatilde', tilde,
                     '--metric', bad, '--center-only', '--config', config_file)
    assert code == EXIT_FAIL


def test_parse_error_exit_code(capsys, config_file, write):
    path = write('gamma.txt', "[gamma]\nG^1_12 = x +\n")
    code, _, err = run(capsys, 'connection', 'right-from-left', '--in', path, '--config', config_file)
    assert code == EXIT_PARSE
    assert 'line 2' in err


def test_usage_errors(capsys, config_file, tmp_path):
    assert run(capsys, 'verify', 'everything')[0] == EXIT_USAGE
    assert run(capsys, 'solve', 'metric', '--mode', 'generic')[0] == EXIT_USAGE
    missing = str(tmp_path / 'missing.txt')
    assert run(capsys, 'connection', 'right-from-left', '--in', missing, '--config', config_file)[0] == EXIT_USAGE
    code = run(capsys, 'solve', 'metric', '--middle-linear', '--pmin', '-1', '--config', config_file)[0]
    assert code == EXIT_USAGE


def test_bad_config(capsys, write):
    path = write('config.yaml', "n_jobs: 0\n")
    code, _, err = run(capsys, 'connection', 'gauge-demo', '--config', path)
    assert code == EXIT_USAGE
    assert 'n_jobs' in err


def test_help_exits_cleanly(capsys):
    assert run(capsys, '--help')[0] == EXIT_PASS


def test_save_writes_report(capsys, config_file, tmp_path):
    code, out, _ = run(capsys, 'connection', 'gauge-demo', '--save', '--config', config_file)
    assert code == EXIT_PASS
    saved = tmp_path / 'reports' / 'connection_gauge-demo.json'
    assert saved.exists()
    assert parse_report(saved.read_text(encoding='utf-8'))[0].passed
