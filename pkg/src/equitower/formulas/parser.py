"""Hand-rolled s-expression parser for the formula DSL.

Grammar::

    formula := (equi t t t t) | (= t t) | (and f...) | (or f...)
             | (not f) | (implies f g)
             | (exists (x...) f) | (forall (x...) f)
             | (bigand k [start] f) | (bigor n [start] f)
             | (rel NAME idx... t...)
    t       := symbol | (pt X Y)        -- X, Y integers, 'p/q', or decimals
    idx     := integer | symbol          -- symbols name bigand/bigor indices

Errors carry 1-based line and column of the offending token.
"""

from __future__ import annotations

from fractions import Fraction

from ..geometry import Point
from ..oracles import RELATION_SPECS
from .ast import (
    And,
    AtomEq,
    AtomEqui,
    Const,
    CountableAnd,
    CountableOr,
    Exists,
    ForAll,
    Formula,
    Implies,
    Not,
    Or,
    SchemaRef,
    Term,
    Var,
)

RESERVED = {
    "equi", "=", "and", "or", "not", "implies",
    "exists", "forall", "bigand", "bigor", "rel", "pt",
}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class _Token:
    __slots__ = ("text", "line", "column")

    def __init__(self, text: str, line: int, column: int):
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch in "()":
            tokens.append(_Token(ch, line, col))
            col += 1
            i += 1
            continue
        start, start_col = i, col
        while i < len(text) and not text[i].isspace() and text[i] not in "();":
            i += 1
            col += 1
        tokens.append(_Token(text[start:i], line, start_col))
    return tokens


class _Node:
    """Either an atom token or a parenthesized list of nodes."""

    __slots__ = ("atom", "items", "line", "column")

    def __init__(self, atom: _Token | None, items: "list[_Node] | None", line: int, column: int):
        self.atom = atom
        self.items = items
        self.line = line
        self.column = column


def _read(tokens: list[_Token], pos: int) -> tuple[_Node, int]:
    if pos >= len(tokens):
        raise ParseError("unexpected end of input", 0, 0)
    tok = tokens[pos]
    if tok.text == "(":
        items: list[_Node] = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise ParseError("unclosed '('", tok.line, tok.column)
            if tokens[pos].text == ")":
                return _Node(None, items, tok.line, tok.column), pos + 1
            node, pos = _read(tokens, pos)
            items.append(node)
    if tok.text == ")":
        raise ParseError("unbalanced ')'", tok.line, tok.column)
    return _Node(tok, None, tok.line, tok.column), pos + 1


def _want_symbol(node: _Node, what: str) -> str:
    if node.atom is None:
        raise ParseError(f"expected {what}, found a list", node.line, node.column)
    text = node.atom.text
    if text in RESERVED or _is_int(text):
        raise ParseError(f"expected {what}, found {text!r}", node.line, node.column)
    return text


def _is_int(text: str) -> bool:
    body = text[1:] if text[:1] in "+-" else text
    return body.isdigit()


def _parse_coordinate(node: _Node) -> object:
    if node.atom is None:
        raise ParseError("expected a coordinate", node.line, node.column)
    text = node.atom.text
    try:
        if "." in text or "e" in text or "E" in text:
            return float(text)
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad coordinate {text!r}", node.line, node.column) from None


def _parse_term(node: _Node) -> Term:
    if node.atom is not None:
        return Var(_want_symbol(node, "a variable"))
    items = node.items or []
    if not items or items[0].atom is None or items[0].atom.text != "pt":
        raise ParseError("expected a variable or (pt X Y)", node.line, node.column)
    if len(items) != 3:
        raise ParseError("(pt X Y) takes two coordinates", node.line, node.column)
    return Const(Point(_parse_coordinate(items[1]), _parse_coordinate(items[2])))


def _parse_var_list(node: _Node) -> tuple[str, ...]:
    if node.items is None:
        raise ParseError("expected a variable list (x ...)", node.line, node.column)
    if not node.items:
        raise ParseError("quantifier needs at least one variable", node.line, node.column)
    return tuple(_want_symbol(item, "a variable") for item in node.items)


def _parse_formula(node: _Node) -> Formula:
    if node.atom is not None:
        raise ParseError(f"expected a formula, found {node.atom.text!r}", node.line, node.column)
    items = node.items or []
    if not items:
        raise ParseError("empty form", node.line, node.column)
    head_node = items[0]
    if head_node.atom is None:
        raise ParseError("form head must be a symbol", head_node.line, head_node.column)
    head = head_node.atom.text
    rest = items[1:]

    if head == "equi":
        if len(rest) != 4:
            raise ParseError("(equi ...) takes four terms", node.line, node.column)
        t1, t2, t3, t4 = (_parse_term(r) for r in rest)
        return AtomEqui(t1, t2, t3, t4)
    if head == "=":
        if len(rest) != 2:
            raise ParseError("(= ...) takes two terms", node.line, node.column)
        return AtomEq(_parse_term(rest[0]), _parse_term(rest[1]))
    if head == "not":
        if len(rest) != 1:
            raise ParseError("(not ...) takes one formula", node.line, node.column)
        return Not(_parse_formula(rest[0]))
    if head == "and":
        return And(tuple(_parse_formula(r) for r in rest))
    if head == "or":
        return Or(tuple(_parse_formula(r) for r in rest))
    if head == "implies":
        if len(rest) != 2:
            raise ParseError("(implies ...) takes two formulas", node.line, node.column)
        return Implies(_parse_formula(rest[0]), _parse_formula(rest[1]))
    if head in ("exists", "forall"):
        if len(rest) != 2:
            raise ParseError(f"({head} ...) takes a variable list and a body", node.line, node.column)
        names = _parse_var_list(rest[0])
        body = _parse_formula(rest[1])
        return Exists(names, body) if head == "exists" else ForAll(names, body)
    if head in ("bigand", "bigor"):
        if len(rest) not in (2, 3):
            raise ParseError(f"({head} var [start] body)", node.line, node.column)
        var = _want_symbol(rest[0], "an index variable")
        start = 1
        body_node = rest[-1]
        if len(rest) == 3:
            if rest[1].atom is None or not _is_int(rest[1].atom.text):
                raise ParseError("start bound must be an integer", rest[1].line, rest[1].column)
            start = int(rest[1].atom.text)
        body = _parse_formula(body_node)
        return CountableAnd(var, start, body) if head == "bigand" else CountableOr(var, start, body)
    if head == "rel":
        if not rest:
            raise ParseError("(rel NAME ...) needs a relation name", node.line, node.column)
        name_node = rest[0]
        if name_node.atom is None:
            raise ParseError("relation name must be a symbol", name_node.line, name_node.column)
        name = name_node.atom.text.upper()
        spec = RELATION_SPECS.get(name)
        if spec is None:
            raise ParseError(f"unknown relation {name!r}", name_node.line, name_node.column)
        n_idx, arity, _ = spec
        args = rest[1:]
        if len(args) != n_idx + arity:
            raise ParseError(
                f"{name} takes {n_idx} index argument(s) and {arity} term(s)",
                node.line,
                node.column,
            )
        index_args: list[int | str] = []
        for arg in args[:n_idx]:
            if arg.atom is not None and _is_int(arg.atom.text):
                index_args.append(int(arg.atom.text))
            elif arg.atom is not None and arg.atom.text not in RESERVED:
                index_args.append(arg.atom.text)
            else:
                raise ParseError("index argument must be an integer or index variable", arg.line, arg.column)
        terms = tuple(_parse_term(arg) for arg in args[n_idx:])
        return SchemaRef(name, tuple(index_args), terms)
    raise ParseError(f"unknown form {head!r}", head_node.line, head_node.column)


def parse_formula(text: str) -> Formula:
    """Parse DSL text into a Formula; raises :class:`ParseError` with position."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input", 1, 1)
    node, pos = _read(tokens, 0)
    if pos != len(tokens):
        trailing = tokens[pos]
        raise ParseError("trailing input after formula", trailing.line, trailing.column)
    return _parse_formula(node)
