"""
schemas/grammars.py

LALR grammars for the four line-oriented input formats (.lts, .cba, .msc,
.fault) and the entry points that turn read, lark and
transformer failures into ParseError.

All formats share the same line discipline: one item per line, blank lines
and `#` comments anywhere.
"""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Optional, Type, Union

from lark import Lark, Token, Transformer, Tree
from lark.exceptions import (
    UnexpectedCharacters,
    UnexpectedEOF,
    UnexpectedInput,
    UnexpectedToken,
    VisitError,
)

from schemas.errors import ParseError

_COMMON = r"""
_NL: /(\r?\n[\t \f]*(#[^\n]*)?)+/
COMMENT: /#[^\n]*/
INT: /[0-9]+/
NAME: /[A-Za-z_][A-Za-z0-9_]*/
%ignore /[\t \f]+/
%ignore COMMENT
"""

LTS_GRAMMAR = r"""
start: _NL? item (_NL item)* _NL?
?item: header | init | final | transition

header: "lts" LTS_NAME
init: "init" STATE
final: "final" STATE+
transition: STATE LABEL STATE

LTS_NAME: /[A-Za-z0-9_|.\-]+/
STATE: /[A-Za-z0-9_]+/
LABEL: /tau|[0-9]+[?!.][A-Za-z_][A-Za-z0-9_]*(:(req|ntf))?/
""" + _COMMON

CBA_GRAMMAR = r"""
start: _NL? item (_NL item)* _NL?
?item: system | freshfrom | component | binding | behavior | glue

system: "system" NAME
freshfrom: "freshfrom" INT
component: "component" NAME COORDINATOR?
binding: SIDE INT "->" "connector" INT role?
role: "role" SIDE
behavior: "behavior" PATH
glue: "glue" NAME "=" NAME+

COORDINATOR: "coordinator"
SIDE: "top" | "bottom"
PATH: /[^\s#]+/
""" + _COMMON

MSC_GRAMMAR = r"""
start: _NL? item (_NL item)* _NL?
?item: enhancement | note | wrapper | coordinator | targets | bmsc | hmsc

enhancement: "enhancement" NAME
note: "note" TEXT
wrapper: "wrapper" NAME
coordinator: "coordinator" NAME
targets: "targets" NAME ("," NAME)*

bmsc: "bmsc" NAME _NL (_bmsc_line _NL)* "end"
_bmsc_line: instance | event
instance: "instance" NAME (","? NAME)*
event: NAME "->" NAME ":" NAME (":" KIND)? "@" INT

hmsc: "hmsc" _NL (_hmsc_line _NL)* "end"
_hmsc_line: hinit | hfinal | node | edge
hinit: "init" NAME
hfinal: "final" NAME+
node: "node" NAME "=" NAME
edge: "edge" NAME "->" NAME edge_mod*
edge_mod: "repeat" INT   -> repeat
        | "exhausted"    -> exhausted

KIND: "req" | "ntf"
TEXT: /[^\n#]+/
""" + _COMMON

FAULT_GRAMMAR = r"""
start: _NL? item (_NL item)* _NL?
?item: component | decide | exhausted

component: "component" NAME
decide: "decide" NAME (","? NAME)*
exhausted: "exhausted" POLICY

POLICY: "repeat-last" | "default-order"
""" + _COMMON

_GRAMMARS = {
    "lts": LTS_GRAMMAR,
    "cba": CBA_GRAMMAR,
    "msc": MSC_GRAMMAR,
    "fault": FAULT_GRAMMAR,
}


@lru_cache(maxsize=None)
def parser_for(fmt: str) -> Lark:
    return Lark(_GRAMMARS[fmt], parser="lalr", lexer="contextual")


def _position(err: UnexpectedInput):
    line = getattr(err, "line", None)
    column = getattr(err, "column", None)
    if not isinstance(line, int) or line < 0:
        return None, None
    return line, column


def parse_tree(fmt: str, text: str, source: str = "<text>",
               error: Type[ParseError] = ParseError) -> Tree:
    """Parse `text` in format `fmt`; lark errors surface as `error` with line/column."""
    if not text.strip():
        raise error(f"empty {fmt} input", source=source)
    try:
        return parser_for(fmt).parse(text)
    except UnexpectedToken as e:
        line, column = _position(e)
        raise error(f"unexpected token {e.token!r}", line, column, e.expected, source) from e
    except UnexpectedCharacters as e:
        line, column = _position(e)
        raise error(f"unexpected character {e.char!r}", line, column, e.allowed or (), source) from e
    except UnexpectedEOF as e:
        raise error("unexpected end of input", expected=e.expected, source=source) from e


def _first_token(obj) -> Optional[Token]:
    if isinstance(obj, Token):
        return obj
    if isinstance(obj, Tree):
        for value in obj.scan_values(lambda v: isinstance(v, Token)):
            return value
    return None


def transform_tree(transformer: Transformer, tree: Tree, source: str = "<text>",
                   error: Type[ParseError] = ParseError):
    """Run `transformer`; a failing callback surfaces as `error` at its first token."""
    try:
        return transformer.transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from e
        token = _first_token(e.obj)
        line = token.line if token is not None else None
        column = token.column if token is not None else None
        raise error(str(e.orig_exc), line, column, source=source) from e.orig_exc


def read_source(path: Union[str, Path], what: str) -> str:
    """UTF-8 text of `path`; unreadable or undecodable files raise ParseError."""
    path = Path(path)
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {what}: {e.strerror}", source=str(path)) from e
    except UnicodeDecodeError as e:
        raise ParseError(f"{what} is not valid UTF-8 (byte {e.start})", source=str(path)) from e
