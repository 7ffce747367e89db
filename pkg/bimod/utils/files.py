"""
Labeled-Section Input Files

Connections, metrics and gauge matrices are read from UTF-8 text files:

    # comment
    [settings]
    mode = zeta3

    [gamma]
    G^1_12 = x
    G^2_22 = x^2*y

    [metric]
    G11 = 1
    G22 = 1

    [gauge]
    U12 = x
    Uinv12 = -x

Entries use the algebra grammar of ``bimod.algebra.parsing``. Missing entries
are zero (identity for gauge matrices). Every error carries its line number.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..algebra.parsing import parse_alg
from ..algebra.qalgebra import AlgElem, PowerMode, format_alg
from ..algebra.scalar import FieldMode
from ..geometry.connection import Christoffel, GaugeMatrix, Side, christoffel_label, parse_christoffel_label
from ..geometry.metric import ENTRY_LABELS, Metric
from .errors import BimodError, ParseError

logger = logging.getLogger(__name__)

SECTIONS = ('settings', 'metric', 'gamma', 'gammatilde', 'gauge')
GAUGE_LABELS = tuple(f"{prefix}{i}{j}" for prefix in ('U', 'Uinv') for i in (1, 2) for j in (1, 2))

# (line, key, value, column of value)
Entry = Tuple[int, str, str, int]


@dataclass
class InputFile:
    """Raw entries per section, with the field mode to read them in"""
    path: str
    mode: FieldMode
    sections: Dict[str, List[Entry]] = field(default_factory=dict)

    def has(self, section: str) -> bool:
        return section in self.sections


def read_sections(text: str) -> Dict[str, List[Entry]]:
    """Split file text into sections of ``key = value`` entries"""
    sections: Dict[str, List[Entry]] = {}
    current: Optional[str] = None
    seen_keys: Dict[str, set] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith('['):
            if not stripped.endswith(']'):
                raise ParseError("unterminated section header", lineno, len(raw) + 1)
            name = stripped[1:-1].strip().lower()
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", lineno, raw.index('[') + 1)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", lineno, raw.index('[') + 1)
            sections[name] = []
            seen_keys[name] = set()
            current = name
            continue
        if current is None:
            raise ParseError("entry outside any section", lineno, 1)
        if '=' not in line:
            raise ParseError("expected key = value", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split('=', 1)
        key = key.strip()
        if key in seen_keys[current]:
            raise ParseError(f"duplicate key {key!r} in [{current}]", lineno, 1)
        seen_keys[current].add(key)
        sections[current].append((lineno, key, value.strip(), line.index('=') + 2))
    return sections


def _settings_mode(entries: List[Entry], default: FieldMode) -> FieldMode:
    mode = default
    for lineno, key, value, column in entries:
        if key != 'mode':
            raise ParseError(f"unknown setting {key!r}", lineno, 1)
        try:
            mode = FieldMode(value.lower())
        except ValueError:
            raise ParseError(f"unknown field mode {value!r}", lineno, column)
    return mode


def parse_input(text: str, path: str = '<string>',
                mode: Optional[FieldMode] = None) -> InputFile:
    """
    Parse file text. A [settings] mode is used unless the caller forces one;
    the default is the cube-root mode.
    """
    sections = read_sections(text)
    file_mode = _settings_mode(sections.get('settings', []), FieldMode.ZETA3)
    return InputFile(path, mode or file_mode, sections)


def load_input(path: str, mode: Optional[FieldMode] = None) -> InputFile:
    if not os.path.exists(path):
        raise FileNotFoundError(f"input file not found: {path}")
    with open(path, encoding='utf-8') as f:
        text = f.read()
    parsed = parse_input(text, path, mode)
    logger.debug("loaded %s: sections %s", path, list(parsed.sections))
    return parsed


def _require(source: InputFile, section: str) -> List[Entry]:
    if section not in source.sections:
        raise ParseError(f"{source.path}: missing section [{section}]", 1, 1)
    return source.sections[section]


def _value(source: InputFile, entry: Entry) -> AlgElem:
    lineno, key, value, column = entry
    try:
        return parse_alg(value, source.mode, PowerMode.POLYNOMIAL, line=lineno)
    except ParseError as e:
        raise ParseError(f"{key}: {e.reason}", lineno, column + e.column - 1)
    except BimodError as e:
        raise ParseError(f"{key}: {e}", lineno, column)


def read_christoffel(source: InputFile, section: str = 'gamma') -> Christoffel:
    """Christoffel symbols from [gamma] (left) or [gammatilde] (right)"""
    side = Side.RIGHT if section == 'gammatilde' else Side.LEFT
    gamma = {}
    for entry in _require(source, section):
        lineno, key, _, _ = entry
        try:
            index = parse_christoffel_label(key)
        except ValueError:
            raise ParseError(f"bad Christoffel label {key!r} (expected G^i_jk)", lineno, 1)
        gamma[index] = _value(source, entry)
    return Christoffel(gamma, side, source.mode)


def read_metric(source: InputFile) -> Metric:
    entries = [AlgElem.zero(source.mode) for _ in ENTRY_LABELS]
    for entry in _require(source, 'metric'):
        lineno, key, _, _ = entry
        if key not in ENTRY_LABELS:
            raise ParseError(f"bad metric label {key!r} (expected G11, G12, G21 or G22)", lineno, 1)
        entries[ENTRY_LABELS.index(key)] = _value(source, entry)
    return Metric(entries)


def read_gauge(source: InputFile) -> GaugeMatrix:
    """
    U and its declared inverse; unspecified entries default to the identity.

    Raises:
        ParseError: on a bad label or expression
        InverseInvalidError: if Uinv is not the two-sided inverse of U
    """
    one, zero = AlgElem.one(source.mode), AlgElem.zero(source.mode)
    grids = {'U': [[one, zero], [zero, one]], 'Uinv': [[one, zero], [zero, one]]}
    for entry in _require(source, 'gauge'):
        lineno, key, _, _ = entry
        if key not in GAUGE_LABELS:
            raise ParseError(f"bad gauge label {key!r} (expected U11..U22 or Uinv11..Uinv22)", lineno, 1)
        prefix, i, j = key[:-2], int(key[-2]) - 1, int(key[-1]) - 1
        grids[prefix][i][j] = _value(source, entry)
    return GaugeMatrix(grids['U'], grids['Uinv'])


def format_christoffel(gamma: Christoffel) -> str:
    """The section text that ``read_christoffel`` reads back"""
    section = 'gammatilde' if gamma.side is Side.RIGHT else 'gamma'
    lines = [f"[{section}]"]
    for index, value in sorted(gamma.gamma.items()):
        lines.append(f"{christoffel_label(index)} = {format_alg(value)}")
    return '\n'.join(lines) + '\n'


def format_metric(g: Metric) -> str:
    lines = ['[metric]']
    lines.extend(f"{label} = {format_alg(e)}" for label, e in zip(ENTRY_LABELS, g.G) if not e.is_zero)
    return '\n'.join(lines) + '\n'
