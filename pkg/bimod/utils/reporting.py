"""
Verification Reports

Results of named verifications, assembled into a pandas table for text
output or a JSON document that ``parse_report`` reads back.
"""

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from functools import wraps
from typing import Any, Callable, Dict, List, Sequence, Tuple

import pandas as pd

from .errors import BimodError, ParseError

logger = logging.getLogger(__name__)

PASS = 'PASS'
FAIL = 'FAIL'


@dataclass
class VerificationResult:
    """One named verification: PASS iff every check matched exactly"""
    name: str
    status: str
    details: Dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    def __post_init__(self):
        if self.status not in (PASS, FAIL):
            raise ValueError(f"status must be {PASS} or {FAIL}, got {self.status!r}")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def verification(name: str) -> Callable:
    """
    Turn a check returning (passed, details) into one returning a timed
    VerificationResult. Engine errors become a FAIL carrying the message.
    """
    def decorator(check: Callable[..., Tuple[bool, Dict[str, Any]]]) -> Callable[..., VerificationResult]:
        @wraps(check)
        def run(*args, **kwargs) -> VerificationResult:
            start = time.perf_counter()
            try:
                passed, details = check(*args, **kwargs)
            except BimodError as e:
                logger.exception("verification %s raised", name)
                passed, details = False, {'error': f"{type(e).__name__}: {e}"}
            elapsed = time.perf_counter() - start
            logger.info("%s: %s in %.2fs", name, PASS if passed else FAIL, elapsed)
            return VerificationResult(name, PASS if passed else FAIL, details, round(elapsed, 3))
        return run
    return decorator


def _summary(details: Dict[str, Any], width: int = 60) -> str:
    text = ', '.join(f"{k}={v}" for k, v in details.items() if not isinstance(v, (list, dict)))
    return text if len(text) <= width else text[:width - 3] + '...'


def build_report(results: Sequence[VerificationResult]) -> pd.DataFrame:
    """One row per verification, in the order given"""
    rows = [{
        'verification': r.name,
        'status': r.status,
        'elapsed_s': r.elapsed,
        'summary': _summary(r.details),
    } for r in results]
    return pd.DataFrame(rows, columns=['verification', 'status', 'elapsed_s', 'summary'])


def render_json(results: Sequence[VerificationResult]) -> str:
    document = {
        'passed': all(r.passed for r in results),
        'results': [r.to_dict() for r in results],
    }
    return json.dumps(document, indent=2, ensure_ascii=False)


def parse_report(text: str) -> List[VerificationResult]:
    """Read a document written by ``render_json``"""
    try:
        document = json.loads(text)
        return [VerificationResult(**entry) for entry in document['results']]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ParseError(f"invalid report: {e}")


def _format_detail(value: Any) -> List[str]:
    if isinstance(value, dict):
        return [f"{k}: {v}" for k, v in value.items()]
    if isinstance(value, list):
        return [str(v) for v in value]
    return [str(value)]


def print_result(result: VerificationResult, verbose: bool = False) -> None:
    """Print one result in the banner style"""
    print(f"\n{'=' * 60}")
    print(result.name)
    print(f"{'=' * 60}")
    mark = '✓' if result.passed else '✗'
    print(f"Status: {mark} {result.status} ({result.elapsed:.2f}s)")
    for key, value in result.details.items():
        lines = _format_detail(value)
        if len(lines) == 1:
            print(f"  {key}: {lines[0]}")
        elif verbose or len(lines) <= 8:
            print(f"  {key}:")
            for line in lines:
                print(f"    {line}")
        else:
            print(f"  {key}: {len(lines)} entries (use --verbose to list)")


def print_summary(results: Sequence[VerificationResult]) -> None:
    print(f"\n{'=' * 60}")
    print("Overall Summary")
    print(f"{'=' * 60}")
    print(build_report(results).to_string(index=False))
    if all(r.passed for r in results):
        print("\n✓ All verifications passed!")
    else:
        failed = [r.name for r in results if not r.passed]
        print(f"\n✗ {len(failed)} verification(s) failed: {', '.join(failed)}")
