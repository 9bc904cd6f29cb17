"""
Action Formula Parser.

Parses the textual formula syntax of game files into formula trees and
evaluates formulas against played action sets.

Grammar: atom | "!" f | f "&" f | f "|" f | "(" f ")" | "true" | "false",
with "!" binding tightest and "&" binding tighter than "|".
"""

import logging

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from ..domain.formula import FALSE, TRUE, And, Formula, Not, Or, Var
from ..errors import InputError, ParseError

logger = logging.getLogger(__name__)

FORMULA_GRAMMAR = r"""
    ?start: disjunction

    ?disjunction: conjunction
        | disjunction "|" conjunction   -> or_op

    ?conjunction: negation
        | conjunction "&" negation      -> and_op

    ?negation: primary
        | "!" negation                  -> not_op

    ?primary: "true"                    -> true
        | "false"                       -> false
        | LETTER                        -> var
        | "(" disjunction ")"

    LETTER: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.WS
    %ignore WS
"""


class _FormulaBuilder(Transformer):
    """Turns the lark parse tree into formula nodes."""

    def or_op(self, children: list[Formula]) -> Formula:
        return Or(children[0], children[1])

    def and_op(self, children: list[Formula]) -> Formula:
        return And(children[0], children[1])

    def not_op(self, children: list[Formula]) -> Formula:
        return Not(children[0])

    def true(self, _children: list[Token]) -> Formula:
        return TRUE

    def false(self, _children: list[Token]) -> Formula:
        return FALSE

    def var(self, children: list[Token]) -> Formula:
        return Var(str(children[0]))


_PARSER = Lark(FORMULA_GRAMMAR, parser="lalr", transformer=_FormulaBuilder())


def _unclosed_paren_column(text: str) -> int | None:
    """1-based column of the innermost "(" left open at the end of `text`."""
    stack: list[int] = []
    for i, ch in enumerate(text):
        if ch == "(":
            stack.append(i + 1)
        elif ch == ")" and stack:
            stack.pop()
    return stack[-1] if stack else None


def parse_formula(text: str, location: str | None = None) -> Formula:
    """
    Parse formula text.

    Args:
        text: Formula source, e.g. "x & !(y | z)"
        location: Prefix for diagnostics (e.g. a JSON path)

    Returns:
        Formula tree

    Raises:
        ParseError: With the 1-based column of the offending character; an
            input ending inside parentheses reports the unclosed "(".
    """
    try:
        formula: Formula = _PARSER.parse(text)
        return formula
    except UnexpectedInput as e:
        at_end = isinstance(e, UnexpectedEOF) or (
            isinstance(e, UnexpectedToken) and e.token.type == "$END"
        )
        if at_end:
            column = _unclosed_paren_column(text)
            if column is not None:
                message = f"unclosed parenthesis in formula {text!r}"
            else:
                column = len(text) + 1
                message = f"unexpected end of formula {text!r}"
        elif isinstance(e, UnexpectedCharacters):
            column = e.column
            message = f"unexpected character {text[e.pos_in_stream]!r} in formula {text!r}"
        else:
            column = e.column
            message = f"unexpected token in formula {text!r}"
        where = f"{location}, column {column}" if location else f"column {column}"
        logger.debug(f"Formula parse failure at {where}: {e}")
        raise ParseError(message, where, line=1, column=column) from None


def eval_formula(act: frozenset[str], formula: Formula, alphabet: frozenset[str]) -> bool:
    """
    Evaluate a formula on a played action set.

    Letters in `act` are true, all other letters of the alphabet are false.

    Raises:
        InputError: If `act` or the formula's atoms leave the alphabet.
    """
    stray = (act | formula.atoms()) - alphabet
    if stray:
        raise InputError(f"letters outside the alphabet: {', '.join(sorted(stray))}")
    return formula.holds(act)
