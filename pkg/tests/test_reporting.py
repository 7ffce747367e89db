import pytest

from bimod.utils.errors import NotCentralError, ParseError
from bimod.utils.reporting import (
    FAIL,
    PASS,
    VerificationResult,
    build_report,
    parse_report,
    print_result,
    print_summary,
    render_json,
    verification,
)


@verification('always passes')
def _passing(value):
    return True, {'value': value}


@verification('raises')
def _raising():
    raise NotCentralError("y is not central")


def test_decorator_builds_results():
    result = _passing(3)
    assert result.name == 'always passes'
    assert result.passed
    assert result.details == {'value': 3}
    assert result.elapsed >= 0


def test_engine_errors_become_failures():
    result = _raising()
    assert result.status == FAIL
    assert result.details['error'] == 'NotCentralError: y is not central'


def test_other_errors_propagate():
    @verification('broken')
    def broken():
        raise KeyError('oops')

    with pytest.raises(KeyError):
        broken()


def test_status_is_validated():
    with pytest.raises(ValueError):
        VerificationResult('x', 'MAYBE')


def test_json_round_trip():
    results = [_passing(1), _raising()]
    text = render_json(results)
    assert '"passed": false' in text
    back = parse_report(text)
    assert [r.name for r in back] == ['always passes', 'raises']
    assert [r.status for r in back] == [PASS, FAIL]
    assert back[0].details == {'value': 1}


@pytest.mark.parametrize('text', ['not json', '{}', '{"results": [{"name": "x"}]}'])
def test_bad_reports(text):
    with pytest.raises(ParseError):
        parse_report(text)


def test_summary_table():
    table = build_report([_passing('a'), _raising()])
    assert list(table.columns) == ['verification', 'status', 'elapsed_s', 'summary']
    assert list(table['status']) == [PASS, FAIL]


def test_text_output(capsys):
    print_result(VerificationResult('demo', PASS, {'items': list(range(20))}))
    out = capsys.readouterr().out
    assert '✓ PASS' in out
    assert '20 entries' in out
    print_summary([VerificationResult('a', PASS), VerificationResult('b', FAIL)])
    out = capsys.readouterr().out
    assert '1 verification(s) failed: b' in out
