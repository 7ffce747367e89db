"""
Single-Step Rewriting Oracle

An independent, deliberately naive normal-ordering engine. A term is a word
over the letters x, y, xi, eta and the tensor marker '|' (tensor over the
algebra), and words are rewritten one adjacent pair at a time:

    y x   -> q^-1 x y
    x xi  -> q^2 xi x
    x eta -> q eta x + (q^2 - 1) xi y
    y xi  -> q xi y
    y eta -> q^2 eta y
    a |   -> | a          (algebra letters pass across the tensor sign)

Normal words are basis letters (and markers) followed by x's then y's. The
closed-form engine in ``oneforms`` is checked against this oracle.
"""

from typing import Dict, List, Optional, Tuple

from .oneforms import OneForm, TensorOverA
from .qalgebra import AlgElem, PowerMode
from .scalar import FieldMode, Scalar, q_power

Word = Tuple[str, ...]

ALGEBRA_LETTERS = ('x', 'y')
FORM_LETTERS = ('xi', 'eta')
TENSOR_MARK = '|'


def _rules(mode: FieldMode) -> Dict[Tuple[str, str], List[Tuple[Scalar, Word]]]:
    one = Scalar.one(mode)
    q = q_power(1, mode)
    q2 = q_power(2, mode)
    return {
        ('y', 'x'): [(q_power(-1, mode), ('x', 'y'))],
        ('x', 'xi'): [(q2, ('xi', 'x'))],
        ('x', 'eta'): [(q, ('eta', 'x')), (q2 - one, ('xi', 'y'))],
        ('y', 'xi'): [(q, ('xi', 'y'))],
        ('y', 'eta'): [(q2, ('eta', 'y'))],
        ('x', TENSOR_MARK): [(one, (TENSOR_MARK, 'x'))],
        ('y', TENSOR_MARK): [(one, (TENSOR_MARK, 'y'))],
    }


def _first_redex(word: Word, rules) -> Optional[int]:
    for i in range(len(word) - 1):
        if (word[i], word[i + 1]) in rules:
            return i
    return None


def rewrite(terms: Dict[Word, Scalar], mode: FieldMode, max_steps: int = 1_000_000) -> Dict[Word, Scalar]:
    """
    Rewrite a linear combination of words to normal form, one step at a time.

    Each step picks the first word (in sorted order) that still has a
    reducible pair and rewrites its leftmost one.
    """
    rules = _rules(mode)
    pending = {w: c for w, c in terms.items() if c}
    normal: Dict[Word, Scalar] = {}
    steps = 0
    while pending:
        word = min(pending)
        coeff = pending.pop(word)
        i = _first_redex(word, rules)
        if i is None:
            total = normal[word] + coeff if word in normal else coeff
            if total:
                normal[word] = total
            else:
                normal.pop(word, None)
            continue
        for c, replacement in rules[(word[i], word[i + 1])]:
            new_word = word[:i] + replacement + word[i + 2:]
            value = coeff * c
            total = pending[new_word] + value if new_word in pending else value
            if total:
                pending[new_word] = total
            else:
                pending.pop(new_word, None)
        steps += 1
        if steps > max_steps:
            raise RuntimeError("rewriting did not terminate")
    return normal


def monomial_word(p: int, r: int) -> Word:
    return ('x',) * p + ('y',) * r


def _split_normal(word: Word) -> Tuple[Word, Tuple[int, int]]:
    head = tuple(w for w in word if w not in ALGEBRA_LETTERS)
    tail = word[len(head):]
    return head, (tail.count('x'), tail.count('y'))


def oracle_alg_word(word: Word, mode: FieldMode) -> AlgElem:
    """Normal-ordered value of a word in x and y"""
    normal = rewrite({word: Scalar.one(mode)}, mode)
    coeffs = {}
    for w, c in normal.items():
        _, mono = _split_normal(w)
        coeffs[mono] = coeffs[mono] + c if mono in coeffs else c
    return AlgElem(coeffs, mode, PowerMode.POLYNOMIAL)


def oracle_left_mul_form(p: int, r: int, j: int, mode: FieldMode) -> OneForm:
    """x^p y^r . theta^j by single-step rewriting"""
    word = monomial_word(p, r) + (FORM_LETTERS[j],)
    normal = rewrite({word: Scalar.one(mode)}, mode)
    comps: List[Dict] = [{}, {}]
    for w, c in normal.items():
        head, mono = _split_normal(w)
        slot = comps[FORM_LETTERS.index(head[0])]
        slot[mono] = slot[mono] + c if mono in slot else c
    pm = PowerMode.POLYNOMIAL
    return OneForm(AlgElem(comps[0], mode, pm), AlgElem(comps[1], mode, pm))


def oracle_left_mul_tensor(p: int, r: int, j: int, k: int, mode: FieldMode) -> TensorOverA:
    """x^p y^r . theta^j (x)_A theta^k by single-step rewriting"""
    word = monomial_word(p, r) + (FORM_LETTERS[j], TENSOR_MARK, FORM_LETTERS[k])
    normal = rewrite({word: Scalar.one(mode)}, mode)
    entries: List[Dict] = [{}, {}, {}, {}]
    for w, c in normal.items():
        head, mono = _split_normal(w)
        first, _, second = head
        slot = entries[2 * FORM_LETTERS.index(first) + FORM_LETTERS.index(second)]
        slot[mono] = slot[mono] + c if mono in slot else c
    pm = PowerMode.POLYNOMIAL
    return TensorOverA([AlgElem(e, mode, pm) for e in entries])
