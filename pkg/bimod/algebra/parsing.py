"""
Expression Parsing

Textual grammar shared by the CLI, input files and tests:
- algebra elements: x, y, q, rationals, *, +, -, ^ (integer exponents), parentheses
- 1-forms: the letters xi and eta (or the Greek letters) with algebra coefficients
  on either side, e.g. ``xi*(q^2*y) + eta*(q*x)`` or ``x*eta``
- tensors: ``oxA`` joins the legs of a tensor over the algebra, ``ox`` over the field

Expressions are read with sympy using noncommutative symbols for x, y, xi
and eta, expanded, and each term is normal-ordered by the engine.
"""

import re
from typing import List, Optional, Tuple

import sympy
from sympy import Add, I
from sympy.parsing.sympy_parser import parse_expr

from .oneforms import OneForm, TensorOverA, TensorOverC, left_mul_form
from .qalgebra import AlgElem, PowerMode, alg_mul
from .scalar import PARSE_TRANSFORMATIONS, Q_SYMBOL, FieldMode, scalar_from_sympy
from ..utils.errors import ParseError

X = sympy.Symbol('x', commutative=False)
Y = sympy.Symbol('y', commutative=False)
XI = sympy.Symbol('xi', commutative=False)
ETA = sympy.Symbol('eta', commutative=False)
OXA = sympy.Symbol('OXA', commutative=False)
OXC = sympy.Symbol('OXC', commutative=False)

LOCALS = {'x': X, 'y': Y, 'xi': XI, 'eta': ETA, 'q': Q_SYMBOL,
          'OXA': OXA, 'OXC': OXC, 'I': I}

UNICODE = (('ξ', 'xi'), ('η', 'eta'), ('⊗_A', ' oxA '), ('⊗', ' ox '), ('·', '*'), ('−', '-'))

_FORM_SYMBOLS = {XI: 0, ETA: 1}


def _prepare(text: str) -> str:
    for old, new in UNICODE:
        text = text.replace(old, new)
    text = re.sub(r'\boxA\b', '*OXA*', text)
    text = re.sub(r'\box\b', '*OXC*', text)
    return text


def _to_sympy(text: str, line: int = 1) -> sympy.Expr:
    if not text.strip():
        raise ParseError("empty expression", line, 1)
    try:
        expr = parse_expr(_prepare(text), local_dict=dict(LOCALS), transformations=PARSE_TRANSFORMATIONS)
    except SyntaxError as e:
        raise ParseError(f"syntax error in {text!r}", line, e.offset or 1)
    except Exception as e:
        raise ParseError(f"cannot parse {text!r}: {e}", line, 1)
    return sympy.expand(expr)


def _factors(term: sympy.Expr) -> Tuple[sympy.Expr, List[Tuple[sympy.Symbol, int]]]:
    """Split a term into its commutative coefficient and ordered (symbol, power) factors"""
    commutative, noncommutative = term.args_cnc()
    factors: List[Tuple[sympy.Symbol, int]] = []
    for f in noncommutative:
        factors.extend(_expand_factor(f))
    return sympy.Mul(*commutative), factors


def _expand_factor(f: sympy.Expr) -> List[Tuple[sympy.Symbol, int]]:
    base, exp = (f.base, f.exp) if isinstance(f, sympy.Pow) else (f, sympy.Integer(1))
    if not exp.is_Integer:
        raise ValueError(f"non-integer exponent in {f}")
    if isinstance(base, sympy.Symbol):
        return [(base, int(exp))]
    if isinstance(base, sympy.Mul) and exp > 0:
        inner = []
        for g in base.args:
            inner.extend(_expand_factor(g))
        return inner * int(exp)
    raise ValueError(f"unsupported factor {f}")


def _word_to_alg(factors: List[Tuple[sympy.Symbol, int]], mode: FieldMode,
                 power_mode: PowerMode) -> AlgElem:
    result = AlgElem.one(mode, power_mode)
    for base, exp in factors:
        if base == X:
            result = alg_mul(result, AlgElem.monomial(exp, 0, mode, power_mode))
        elif base == Y:
            result = alg_mul(result, AlgElem.monomial(0, exp, mode, power_mode))
        else:
            raise ValueError(f"unexpected symbol {base} in an algebra coefficient")
    return result


def _needs_laurent(factors: List[Tuple[sympy.Symbol, int]]) -> bool:
    return any(exp < 0 for base, exp in factors if base in (X, Y))


def _coefficient(coeff: sympy.Expr, mode: FieldMode):
    return scalar_from_sympy(coeff, mode)


def _power_mode(power_mode: Optional[PowerMode], laurent: bool) -> PowerMode:
    if power_mode is not None:
        return power_mode
    return PowerMode.LAURENT if laurent else PowerMode.POLYNOMIAL


def parse_alg(text: str, mode: FieldMode, power_mode: Optional[PowerMode] = None,
              line: int = 1) -> AlgElem:
    """Parse an algebra element; negative exponents select LAURENT unless a mode is forced"""
    expr = _to_sympy(text, line)
    try:
        parsed = [_factors(t) for t in Add.make_args(expr)]
        pm = _power_mode(power_mode, any(_needs_laurent(f) for _, f in parsed))
        result = AlgElem.zero(mode, pm)
        for coeff, factors in parsed:
            if any(base not in (X, Y) for base, _ in factors):
                raise ValueError("1-form letters in an algebra element")
            result = result + _word_to_alg(factors, mode, pm).scale(_coefficient(coeff, mode))
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(f"invalid algebra element {text!r}: {e}", line, 1)
    return result


def _split_form_term(factors, mode: FieldMode, pm: PowerMode) -> OneForm:
    positions = [i for i, (base, _) in enumerate(factors) if base in _FORM_SYMBOLS]
    if len(positions) != 1 or factors[positions[0]][1] != 1:
        raise ValueError("each term of a 1-form needs exactly one xi or eta")
    i = positions[0]
    left = _word_to_alg(factors[:i], mode, pm)
    right = _word_to_alg(factors[i + 1:], mode, pm)
    basis = OneForm.basis(_FORM_SYMBOLS[factors[i][0]], mode, pm)
    return left_mul_form(left, basis * right)


def parse_oneform(text: str, mode: FieldMode, power_mode: Optional[PowerMode] = None,
                  line: int = 1) -> OneForm:
    expr = _to_sympy(text, line)
    try:
        parsed = [_factors(t) for t in Add.make_args(expr)] if expr != 0 else []
        pm = _power_mode(power_mode, any(_needs_laurent(f) for _, f in parsed))
        result = OneForm.zero(mode, pm)
        for coeff, factors in parsed:
            result = result + _split_form_term(factors, mode, pm).scale(_coefficient(coeff, mode))
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(f"invalid 1-form {text!r}: {e}", line, 1)
    return result


def _parse_tensor_terms(text: str, marker: sympy.Symbol, mode: FieldMode,
                        power_mode: Optional[PowerMode], line: int):
    expr = _to_sympy(text, line)
    parsed = [_factors(t) for t in Add.make_args(expr)] if expr != 0 else []
    pm = _power_mode(power_mode, any(_needs_laurent(f) for _, f in parsed))
    terms = []
    for coeff, factors in parsed:
        cut = [i for i, (base, _) in enumerate(factors) if base == marker]
        if len(cut) != 1:
            raise ValueError(f"each tensor term needs exactly one '{'oxA' if marker == OXA else 'ox'}'")
        k = cut[0]
        omega = _split_form_term(factors[:k], mode, pm)
        rho = _split_form_term(factors[k + 1:], mode, pm)
        terms.append((_coefficient(coeff, mode), omega, rho))
    return pm, terms


def parse_tensorA(text: str, mode: FieldMode, power_mode: Optional[PowerMode] = None,
                  line: int = 1) -> TensorOverA:
    """Parse ``... oxA ...``; a middle coefficient may sit on either leg"""
    try:
        pm, terms = _parse_tensor_terms(text, OXA, mode, power_mode, line)
        result = TensorOverA.zero(mode, pm)
        for c, omega, rho in terms:
            result = result + TensorOverA.from_forms(omega, rho).scale(c)
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(f"invalid tensor over the algebra {text!r}: {e}", line, 1)
    return result


def parse_tensorC(text: str, mode: FieldMode, power_mode: Optional[PowerMode] = None,
                  line: int = 1) -> TensorOverC:
    """Parse ``... ox ...``; middle coefficients are normalized into the legs"""
    try:
        pm, terms = _parse_tensor_terms(text, OXC, mode, power_mode, line)
        result = TensorOverC.zero(mode, pm)
        for c, omega, rho in terms:
            result = result + TensorOverC.from_forms(omega, rho).scale(c)
    except ParseError:
        raise
    except Exception as e:
        raise ParseError(f"invalid tensor over the field {text!r}: {e}", line, 1)
    return result
