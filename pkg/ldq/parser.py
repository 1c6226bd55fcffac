"""
Surface syntax of the core fragment.

    expr    := pattern | "(" expr "AND" expr ")" | "(" expr "UNION" expr ")"
             | "(" expr "OPT" expr ")" | "(" expr "FILTER" cond ")"
    pattern := "(" (uri|var) (uri|var) (uri|literal|var) ")"
    cond    := var "=" (uri|literal) | var "=" var | "BOUND(" var ")"
             | "!" cond | "(" cond "&&" cond ")" | "(" cond "||" cond ")"

Binary operators are always parenthesized; keywords are uppercase;
`#` starts a comment that runs to the end of the line.
"""
from __future__ import annotations

import re

from .algebra import (
    And,
    Bound,
    CondAnd,
    CondOr,
    Eq,
    EqVar,
    Filter,
    FilterCondition,
    Not,
    Opt,
    Pattern,
    SparqlExpression,
    Union,
)
from .errors import ParseError
from .rdf import Literal, TriplePattern, Uri, Variable, scan_term

_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_OPERATORS = {"AND": And, "UNION": Union, "OPT": Opt}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "#":
                end = text.find("\n", self.pos)
                self.pos = len(text) if end == -1 else end + 1
            else:
                break

    def found(self) -> str:
        if self.pos >= len(self.text):
            return "end of input"
        word = _WORD.match(self.text, self.pos)
        if word:
            return repr(word.group(0))
        return repr(self.text[self.pos])

    def peek(self, literal: str) -> bool:
        return self.text.startswith(literal, self.pos)

    def expect(self, literal: str) -> None:
        self.skip()
        if not self.peek(literal):
            raise ParseError(self.pos, repr(literal), self.found())
        self.pos += len(literal)

    def keyword(self, expected: str):
        self.skip()
        word = _WORD.match(self.text, self.pos)
        if not word:
            raise ParseError(self.pos, expected, self.found())
        return word

    def term(self, allowed: tuple, expected: str):
        self.skip()
        start = self.pos
        term, end = scan_term(self.text, start, allow_blanks=False)
        if not isinstance(term, allowed):
            raise ParseError(start, expected, "literal" if isinstance(term, Literal) else str(term))
        self.pos = end
        return term

    def variable(self) -> Variable:
        self.skip()
        if not self.peek("?"):
            raise ParseError(self.pos, "variable", self.found())
        return self.term((Variable,), "variable")

    def expr(self) -> SparqlExpression:
        self.expect("(")
        self.skip()
        if not self.peek("("):
            return self.pattern_body()
        left = self.expr()
        word = self.keyword("AND, UNION, OPT or FILTER")
        name = word.group(0)
        if name == "FILTER":
            self.pos = word.end()
            cond = self.cond()
            self.expect(")")
            return Filter(left, cond)
        if name not in _OPERATORS:
            raise ParseError(self.pos, "AND, UNION, OPT or FILTER", repr(name))
        self.pos = word.end()
        right = self.expr()
        self.expect(")")
        return _OPERATORS[name](left, right)

    def pattern_body(self) -> Pattern:
        s = self.term((Uri, Variable), "URI or variable in subject position")
        p = self.term((Uri, Variable), "URI or variable in predicate position")
        o = self.term((Uri, Literal, Variable), "URI, literal or variable in object position")
        self.expect(")")
        return Pattern(TriplePattern(s, p, o))

    def cond(self) -> FilterCondition:
        self.skip()
        if self.peek("!"):
            self.pos += 1
            return Not(self.cond())
        if self.peek("("):
            self.pos += 1
            left = self.cond()
            self.skip()
            if self.peek("&&"):
                combine = CondAnd
            elif self.peek("||"):
                combine = CondOr
            else:
                raise ParseError(self.pos, "'&&' or '||'", self.found())
            self.pos += 2
            right = self.cond()
            self.expect(")")
            return combine(left, right)
        if self.peek("?"):
            var = self.variable()
            self.expect("=")
            self.skip()
            if self.peek("?"):
                return EqVar(var, self.variable())
            return Eq(var, self.term((Uri, Literal), "URI or literal"))
        word = self.keyword("filter condition")
        if word.group(0) != "BOUND":
            raise ParseError(self.pos, "filter condition", repr(word.group(0)))
        self.pos = word.end()
        self.expect("(")
        var = self.variable()
        self.expect(")")
        return Bound(var)

    def finish(self) -> None:
        self.skip()
        if self.pos != len(self.text):
            raise ParseError(self.pos, "end of input", self.found())


def parse_expression(text: str) -> SparqlExpression:
    parser = _Parser(text)
    expr = parser.expr()
    parser.finish()
    return expr


def parse_condition(text: str) -> FilterCondition:
    parser = _Parser(text)
    cond = parser.cond()
    parser.finish()
    return cond


def print_condition(cond: FilterCondition) -> str:
    if isinstance(cond, Eq):
        return f"{cond.var} = {cond.value}"
    if isinstance(cond, EqVar):
        return f"{cond.left} = {cond.right}"
    if isinstance(cond, Bound):
        return f"BOUND({cond.var})"
    if isinstance(cond, Not):
        return "!" + print_condition(cond.cond)
    if isinstance(cond, CondAnd):
        return f"({print_condition(cond.left)} && {print_condition(cond.right)})"
    if isinstance(cond, CondOr):
        return f"({print_condition(cond.left)} || {print_condition(cond.right)})"
    raise TypeError(f"not a filter condition: {cond!r}")


def print_expression(expr: SparqlExpression) -> str:
    if isinstance(expr, Pattern):
        return str(expr.tp)
    if isinstance(expr, Filter):
        return f"({print_expression(expr.expr)} FILTER {print_condition(expr.cond)})"
    keyword = {And: "AND", Union: "UNION", Opt: "OPT"}[type(expr)]
    return f"({print_expression(expr.left)} {keyword} {print_expression(expr.right)})"
