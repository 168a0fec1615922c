"""Filter-expression subset of the NGSI-LD query language.

Grammar::

    expr    = term *( ";" term )          ; ";" is AND
    term    = path op literal
    op      = "==" / "!=" / "~="          ; "~=" is a full regex match
    path    = name *( "." name )          ; descends into sub-attributes
    literal = quoted string / number / "true" / "false"

Terminal resolution of a path yields the value of Property instances or the
object id of Relationship instances. Multi-instance attributes match when ANY
instance matches, at every level of the path.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any

from ..errors import QuerySyntaxError
from .model import PROPERTY, Attribute, Entity

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_NUMBER_RE = re.compile(r"-?\d+(\.\d+)?")

_OPS = ("==", "!=", "~=")


@dataclass(frozen=True)
class Comparison:
    path: tuple[str, ...]
    op: str
    literal: Any

    # a compiled pattern for ~= terms, kept off the dataclass equality
    def pattern(self) -> re.Pattern:
        return re.compile(str(self.literal))


class QueryExpression:
    def __init__(self, source: str, terms: list[Comparison]):
        self.source = source
        self.terms = terms
        self._patterns = {
            i: t.pattern() for i, t in enumerate(terms) if t.op == "~="
        }

    def matches(self, entity: Entity) -> bool:
        for i, term in enumerate(self.terms):
            values = resolve_path(entity, term.path)
            if not _term_matches(term, values, self._patterns.get(i)):
                return False
        return True


def parse_q(source: str) -> QueryExpression:
    parser = _Parser(source)
    terms = [parser.term()]
    while parser.accept(";"):
        terms.append(parser.term())
    parser.expect_end()
    return QueryExpression(source, terms)


def eval_q(source: str | QueryExpression, entity: Entity) -> bool:
    expr = source if isinstance(source, QueryExpression) else parse_q(source)
    return expr.matches(entity)


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.pos = 0

    def error(self, message: str) -> QuerySyntaxError:
        return QuerySyntaxError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.source) and self.source[self.pos].isspace():
            self.pos += 1

    def accept(self, token: str) -> bool:
        self.skip_ws()
        if self.source.startswith(token, self.pos):
            self.pos += len(token)
            return True
        return False

    def expect_end(self) -> None:
        self.skip_ws()
        if self.pos != len(self.source):
            raise self.error("unexpected trailing input")

    def term(self) -> Comparison:
        path = self.path()
        op = self.op()
        self.skip_ws()
        literal_pos = self.pos
        literal = self.literal()
        if op == "~=":
            try:
                re.compile(str(literal))
            except re.error as exc:
                raise QuerySyntaxError(f"bad regex: {exc}", literal_pos) from None
        return Comparison(path=path, op=op, literal=literal)

    def path(self) -> tuple[str, ...]:
        self.skip_ws()
        names = [self.name()]
        while self.source.startswith(".", self.pos):
            self.pos += 1
            names.append(self.name())
        return tuple(names)

    def name(self) -> str:
        m = _NAME_RE.match(self.source, self.pos)
        if not m:
            raise self.error("expected attribute name")
        self.pos = m.end()
        return m.group(0)

    def op(self) -> str:
        self.skip_ws()
        for candidate in _OPS:
            if self.source.startswith(candidate, self.pos):
                self.pos += len(candidate)
                return candidate
        raise self.error("expected ==, != or ~=")

    def literal(self) -> Any:
        self.skip_ws()
        if self.pos >= len(self.source):
            raise self.error("expected a literal")
        ch = self.source[self.pos]
        if ch == '"':
            return self.quoted()
        m = _NUMBER_RE.match(self.source, self.pos)
        if m:
            self.pos = m.end()
            text = m.group(0)
            return float(text) if "." in text else int(text)
        for word, value in (("true", True), ("false", False)):
            if self.source.startswith(word, self.pos):
                self.pos += len(word)
                return value
        raise self.error("expected a quoted string, number, or boolean")

    def quoted(self) -> str:
        assert self.source[self.pos] == '"'
        self.pos += 1
        out: list[str] = []
        while self.pos < len(self.source):
            ch = self.source[self.pos]
            if ch == "\\":
                if self.pos + 1 >= len(self.source):
                    raise self.error("dangling escape")
                nxt = self.source[self.pos + 1]
                out.append({"n": "\n", "t": "\t"}.get(nxt, nxt))
                self.pos += 2
            elif ch == '"':
                self.pos += 1
                return "".join(out)
            else:
                out.append(ch)
                self.pos += 1
        raise self.error("unterminated string")


def resolve_path(entity: Entity, path: tuple[str, ...]) -> list[Any]:
    """All terminal values reachable through path; [] when unresolvable."""
    values: list[Any] = []

    def walk(instances: list[Attribute], rest: tuple[str, ...]) -> None:
        for inst in instances:
            if not rest:
                values.append(inst.value if inst.kind == PROPERTY else inst.object)
            else:
                walk(inst.sub_attributes.get(rest[0], []), rest[1:])

    walk(entity.attributes.get(path[0], []), path[1:])
    return values


def _value_equals(value: Any, literal: Any) -> bool:
    if isinstance(value, list):
        return value == literal or literal in value
    if isinstance(value, bool) or isinstance(literal, bool):
        return value is literal
    if isinstance(value, (int, float)) and isinstance(literal, (int, float)):
        return value == literal
    return value == literal


def _value_regex(value: Any, pattern: re.Pattern) -> bool:
    if isinstance(value, list):
        return any(_value_regex(v, pattern) for v in value)
    return isinstance(value, str) and pattern.search(value) is not None


def _term_matches(term: Comparison, values: list[Any], pattern: re.Pattern | None) -> bool:
    if term.op == "==":
        return any(_value_equals(v, term.literal) for v in values)
    if term.op == "!=":
        # attribute must exist, and none of its values may equal the literal
        return bool(values) and not any(_value_equals(v, term.literal) for v in values)
    return any(_value_regex(v, pattern) for v in values)
