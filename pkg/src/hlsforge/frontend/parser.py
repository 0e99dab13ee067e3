"""Recursive-descent parser for the HLS-C subset.

Supported: functions with scalar/array parameters, fixed-size
multi-dimensional arrays, affine ``for`` loops, if/else, assignments with
the usual arithmetic operators, calls, pointer declarations, and
``new``/``malloc`` tokens (parsed so the dynamic-allocation detector has
something to see). ``#pragma HLS`` lines are the only preprocessor
construct allowed.

Pragma attachment: a pragma written at the start of a loop or function
body belongs to that loop/function (vendor placement); a pragma written
directly before a ``for`` statement belongs to that loop; any other
pragma belongs to the enclosing function.
"""

from __future__ import annotations

import re
from typing import List, Optional, Tuple

from ..errors import ParseError, UnsupportedConstruct
from . import nodes as N

_KEYWORDS = {"void", "for", "if", "else", "return", "new", "unsigned",
             "int", "short", "long", "char", "float", "double"}

# Constructs we recognize well enough to refuse loudly.
_UNSUPPORTED_KEYWORDS = {"struct", "class", "union", "enum", "typedef",
                         "template", "namespace", "while", "do", "switch",
                         "goto", "static", "extern", "volatile"}

_TYPE_KEYWORDS = {"void", "int", "unsigned", "short", "long", "char", "float", "double"}

_TWO_CHAR_OPS = ("<=", ">=", "==", "!=", "&&", "||", "++", "--",
                 "+=", "-=", "*=", "/=", "%=")
_ONE_CHAR_OPS = "+-*/%<>=!&(){}[];,:"

_TOKEN_IDENT = "ident"
_TOKEN_INT = "int"
_TOKEN_FLOAT = "float"
_TOKEN_OP = "op"
_TOKEN_PRAGMA = "pragma"
_TOKEN_EOF = "eof"


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}({self.text!r})@{self.line}:{self.col}"


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)

    def error(msg):
        raise ParseError(msg, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("/*", i):
            end = text.find("*/", i + 2)
            if end < 0:
                error("unterminated comment")
            for ch in text[i:end + 2]:
                if ch == "\n":
                    line += 1
                    col = 1
                else:
                    col += 1
            i = end + 2
            continue
        if c == "#":
            start, start_line, start_col = i, line, col
            while i < n and text[i] != "\n":
                i += 1
            raw = text[start:i]
            col += len(raw)
            if not re.match(r"#\s*pragma\s+hls\b", raw, re.IGNORECASE):
                raise UnsupportedConstruct(
                    f"preprocessor line {raw.strip()!r} is outside the subset "
                    "(only '#pragma HLS' lines are allowed)",
                    start_line, start_col)
            tokens.append(_Token(_TOKEN_PRAGMA, raw, start_line, start_col))
            continue
        if c.isalpha() or c == "_":
            m = re.match(r"[A-Za-z_]\w*", text[i:])
            word = m.group()
            tokens.append(_Token(_TOKEN_IDENT, word, line, col))
            i += len(word)
            col += len(word)
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            m = re.match(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?[fF]?", text[i:])
            num = m.group()
            kind = _TOKEN_FLOAT if any(ch in num for ch in ".eEfF") else _TOKEN_INT
            tokens.append(_Token(kind, num, line, col))
            i += len(num)
            col += len(num)
            continue
        two = text[i:i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(_Token(_TOKEN_OP, two, line, col))
            i += 2
            col += 2
            continue
        if c in _ONE_CHAR_OPS:
            tokens.append(_Token(_TOKEN_OP, c, line, col))
            i += 1
            col += 1
            continue
        error(f"unexpected character {c!r}")
    tokens.append(_Token(_TOKEN_EOF, "", line, col))
    return tokens


def _parse_pragma_line(raw: str, line: int, col: int) -> N.Pragma:
    body = re.sub(r"^#\s*pragma\s+hls\s*", "", raw, flags=re.IGNORECASE).strip()
    if not body:
        raise ParseError("empty HLS pragma", line, col)
    parts = body.split()
    kind = parts[0].lower()
    kv = {}
    flags = []
    for part in parts[1:]:
        if "=" in part:
            k, v = part.split("=", 1)
            kv[k.lower()] = v
        else:
            flags.append(part.lower())
    loc = N.Loc(line, col)

    def intval(key):
        try:
            return int(kv[key])
        except ValueError:
            raise ParseError(f"pragma {key} must be an integer, got {kv[key]!r}",
                             line, col) from None

    try:
        if kind == "pipeline":
            return N.Pragma("pipeline", ii=intval("ii") if "ii" in kv else None, loc=loc)
        if kind == "unroll":
            return N.Pragma("unroll", factor=intval("factor") if "factor" in kv else None,
                            loc=loc)
        if kind == "array_partition":
            ptype = next((f for f in flags if f in N.PARTITION_TYPES), None)
            if ptype is None and "type" in kv:
                ptype = kv["type"].lower()
            if "variable" not in kv:
                raise ParseError("array_partition needs variable=<name>", line, col)
            return N.Pragma(
                "array_partition",
                variable=kv["variable"],
                ptype=ptype or "complete",
                factor=intval("factor") if "factor" in kv else None,
                dim=intval("dim") if "dim" in kv else 1,
                loc=loc,
            )
        if kind == "dataflow":
            return N.Pragma("dataflow", loc=loc)
    except ValueError as exc:
        raise ParseError(str(exc), line, col) from None
    raise UnsupportedConstruct(f"unknown HLS pragma kind {kind!r}", line, col)


class _Parser:
    def __init__(self, tokens: List[_Token], unit_name: str):
        self.toks = tokens
        self.pos = 0
        self.unit_name = unit_name
        self._fn_pragmas: List[N.Pragma] = []

    # -- token helpers ------------------------------------------------

    def peek(self, ahead=0) -> _Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> _Token:
        t = self.toks[self.pos]
        if t.kind != _TOKEN_EOF:
            self.pos += 1
        return t

    def at(self, text: str, ahead=0) -> bool:
        t = self.peek(ahead)
        return t.kind in (_TOKEN_OP, _TOKEN_IDENT) and t.text == text

    def expect(self, text: str) -> _Token:
        t = self.peek()
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        return self.next()

    def loc(self, t: Optional[_Token] = None) -> N.Loc:
        t = t or self.peek()
        return N.Loc(t.line, t.col)

    # -- types --------------------------------------------------------

    def _at_type(self, ahead=0) -> bool:
        t = self.peek(ahead)
        return t.kind == _TOKEN_IDENT and t.text in _TYPE_KEYWORDS

    def parse_type(self) -> str:
        t = self.next()
        if t.text == "unsigned" and self.peek().text in ("int", "short", "long", "char"):
            inner = self.next().text
            return "unsigned" if inner == "int" else inner
        return t.text

    # -- unit / function ----------------------------------------------

    def parse_unit(self) -> N.Ast:
        functions = []
        while self.peek().kind != _TOKEN_EOF:
            if self.peek().kind == _TOKEN_PRAGMA:
                t = self.next()
                raise UnsupportedConstruct(
                    "pragma outside any function body", t.line, t.col)
            functions.append(self.parse_function())
        if not functions:
            t = self.peek()
            raise ParseError("no function definitions found", t.line, t.col)
        return N.Ast(functions=tuple(functions), name=self.unit_name)

    def parse_function(self) -> N.FunctionDecl:
        start = self.peek()
        if start.kind == _TOKEN_IDENT and start.text in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstruct(
                f"{start.text!r} is outside the supported subset",
                start.line, start.col)
        if not self._at_type():
            raise UnsupportedConstruct(
                f"expected a function definition, found {start.text!r}",
                start.line, start.col)
        ret_type = self.parse_type()
        name_tok = self.next()
        if name_tok.kind != _TOKEN_IDENT:
            raise ParseError("expected function name", name_tok.line, name_tok.col)
        self.expect("(")
        params = []
        while not self.at(")"):
            params.append(self.parse_param())
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        self._fn_pragmas = []
        body, leading = self.parse_block(owner_is_loop=False)
        pragmas = N._canonical_pragmas(tuple(leading) + tuple(self._fn_pragmas))
        return N.FunctionDecl(ret_type=ret_type, name=name_tok.text,
                              params=tuple(params), body=body,
                              pragmas=pragmas, loc=self.loc(start))

    def parse_param(self) -> N.Param:
        start = self.peek()
        if not self._at_type():
            raise UnsupportedConstruct(
                f"unsupported parameter type {start.text!r}", start.line, start.col)
        base = self.parse_type()
        is_pointer = False
        if self.at("*"):
            self.next()
            is_pointer = True
        name_tok = self.next()
        if name_tok.kind != _TOKEN_IDENT:
            raise ParseError("expected parameter name", name_tok.line, name_tok.col)
        dims: List[Optional[N.Expr]] = []
        while self.at("["):
            self.next()
            dims.append(None if self.at("]") else self.parse_expr())
            self.expect("]")
        return N.Param(base_type=base, name=name_tok.text, dims=tuple(dims),
                       is_pointer=is_pointer, loc=self.loc(start))

    # -- blocks and statements ----------------------------------------

    def parse_block(self, owner_is_loop: bool) -> Tuple[N.Block, List[N.Pragma]]:
        """Parse ``{ ... }``. Returns (block, pragmas-for-the-block-owner)."""
        open_tok = self.expect("{")
        leading: List[N.Pragma] = []
        pending: List[N.Pragma] = []
        stmts: List[N.Stmt] = []
        while not self.at("}"):
            if self.peek().kind == _TOKEN_EOF:
                raise ParseError("unexpected end of input inside block",
                                 open_tok.line, open_tok.col)
            if self.peek().kind == _TOKEN_PRAGMA:
                t = self.next()
                p = _parse_pragma_line(t.text, t.line, t.col)
                (leading if not stmts else pending).append(p)
                continue
            stmt = self.parse_statement(pending)
            pending = []
            stmts.append(stmt)
        self.expect("}")
        return N.Block(stmts=tuple(stmts), loc=self.loc(open_tok)), leading

    def parse_statement(self, pending_pragmas: Optional[List[N.Pragma]] = None) -> N.Stmt:
        pending = pending_pragmas or []
        t = self.peek()
        if t.kind == _TOKEN_IDENT and t.text in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstruct(
                f"{t.text!r} is outside the supported subset", t.line, t.col)
        if self.at("{"):
            block, leading = self.parse_block(owner_is_loop=False)
            self._fn_pragmas.extend(leading + pending)
            return block
        if self.at("for") or (t.kind == _TOKEN_IDENT and self.at(":", 1)
                              and self.at("for", 2)):
            return self.parse_for(pending)
        self._fn_pragmas.extend(pending)
        if self.at("if"):
            return self.parse_if()
        if self.at("return"):
            tok = self.next()
            value = None if self.at(";") else self.parse_expr()
            self.expect(";")
            return N.Return(value=value, loc=self.loc(tok))
        if self._at_declaration():
            return self.parse_declaration()
        return self.parse_expr_or_assign()

    def _at_declaration(self) -> bool:
        t = self.peek()
        if t.kind != _TOKEN_IDENT or t.text in ("new",):
            return False
        if t.text in _TYPE_KEYWORDS:
            return True
        # Unknown-type declarations ("size_t n;", "mytype *p;") so the
        # unsupported-type detector has real nodes to flag.
        nxt, nxt2 = self.peek(1), self.peek(2)
        if nxt.kind == _TOKEN_IDENT and nxt.text not in _KEYWORDS and \
                nxt2.text in (";", "=", "[", ","):
            return True
        if nxt.text == "*" and nxt2.kind == _TOKEN_IDENT and \
                self.peek(3).text in (";", "=", "["):
            return True
        return False

    def parse_declaration(self) -> N.VarDecl:
        start = self.peek()
        base = self.parse_type()
        is_pointer = False
        if self.at("*"):
            self.next()
            is_pointer = True
        name_tok = self.next()
        if name_tok.kind != _TOKEN_IDENT:
            raise ParseError("expected variable name", name_tok.line, name_tok.col)
        dims: List[N.Expr] = []
        while self.at("["):
            self.next()
            dims.append(self.parse_expr())
            self.expect("]")
        init = None
        if self.at("="):
            self.next()
            init = self.parse_expr()
        self.expect(";")
        return N.VarDecl(base_type=base, name=name_tok.text, dims=tuple(dims),
                         init=init, is_pointer=is_pointer, loc=self.loc(start))

    def parse_for(self, pending: List[N.Pragma]) -> N.For:
        label = None
        if not self.at("for"):
            label = self.next().text
            self.expect(":")
        for_tok = self.expect("for")
        self.expect("(")
        init = None
        if not self.at(";"):
            init = (self.parse_declaration() if self._at_declaration()
                    else self.parse_simple_assign(eat_semi=True))
        else:
            self.next()
        cond = None if self.at(";") else self.parse_expr()
        self.expect(";")
        step = None if self.at(")") else self.parse_simple_assign(eat_semi=False)
        self.expect(")")
        if self.at("{"):
            body, leading = self.parse_block(owner_is_loop=True)
        else:
            stmt = self.parse_statement()
            body, leading = N.Block(stmts=(stmt,), loc=stmt.loc), []
        pragmas = N._canonical_pragmas(tuple(pending) + tuple(leading))
        return N.For(init=init, cond=cond, step=step, body=body, label=label,
                     pragmas=pragmas, loc=self.loc(for_tok))

    def parse_if(self) -> N.If:
        if_tok = self.expect("if")
        self.expect("(")
        cond = self.parse_expr()
        self.expect(")")
        if self.at("{"):
            then, leading = self.parse_block(owner_is_loop=False)
            self._fn_pragmas.extend(leading)
        else:
            stmt = self.parse_statement()
            then = N.Block(stmts=(stmt,), loc=stmt.loc)
        orelse = None
        if self.at("else"):
            self.next()
            if self.at("{"):
                orelse, leading = self.parse_block(owner_is_loop=False)
                self._fn_pragmas.extend(leading)
            else:
                stmt = self.parse_statement()
                orelse = N.Block(stmts=(stmt,), loc=stmt.loc)
        return N.If(cond=cond, then=then, orelse=orelse, loc=self.loc(if_tok))

    def parse_simple_assign(self, eat_semi: bool) -> N.Stmt:
        """Assignment or ++/-- statement (loop init/step position and bodies)."""
        stmt = self.parse_expr_or_assign(eat_semi=eat_semi)
        return stmt

    def parse_expr_or_assign(self, eat_semi: bool = True) -> N.Stmt:
        start = self.peek()
        # Prefix increment: ++i / --i
        if self.at("++") or self.at("--"):
            op = self.next().text
            target = self.parse_unary()
            stmt = N.Assign(target=target, op="+=" if op == "++" else "-=",
                            value=N.IntLit(1, loc=self.loc(start)), loc=self.loc(start))
            if eat_semi:
                self.expect(";")
            return stmt
        expr = self.parse_expr()
        if self.at("++") or self.at("--"):
            op = self.next().text
            stmt = N.Assign(target=expr, op="+=" if op == "++" else "-=",
                            value=N.IntLit(1, loc=self.loc(start)), loc=self.loc(start))
        elif self.peek().text in ("=", "+=", "-=", "*=", "/=", "%="):
            op = self.next().text
            value = self.parse_expr()
            stmt = N.Assign(target=expr, op=op, value=value, loc=self.loc(start))
        else:
            stmt = N.ExprStmt(expr=expr, loc=self.loc(start))
        if eat_semi:
            self.expect(";")
        return stmt

    # -- expressions (precedence climbing) ----------------------------

    _PRECEDENCE = [("||",), ("&&",), ("==", "!="), ("<", "<=", ">", ">="),
                   ("+", "-"), ("*", "/", "%")]

    def parse_expr(self, level: int = 0) -> N.Expr:
        if level == len(self._PRECEDENCE):
            return self.parse_unary()
        ops = self._PRECEDENCE[level]
        left = self.parse_expr(level + 1)
        while self.peek().kind == _TOKEN_OP and self.peek().text in ops:
            op_tok = self.next()
            right = self.parse_expr(level + 1)
            left = N.Binary(op=op_tok.text, left=left, right=right,
                            loc=N.Loc(op_tok.line, op_tok.col))
        return left

    def parse_unary(self) -> N.Expr:
        t = self.peek()
        if t.kind == _TOKEN_OP and t.text in ("-", "!", "*", "&", "+"):
            self.next()
            operand = self.parse_unary()
            if t.text == "+":
                return operand
            if t.text == "-" and isinstance(operand, N.IntLit):
                return N.IntLit(-operand.value, loc=N.Loc(t.line, t.col))
            if t.text == "-" and isinstance(operand, N.FloatLit):
                return N.FloatLit(-operand.value, loc=N.Loc(t.line, t.col))
            return N.Unary(op=t.text, operand=operand, loc=N.Loc(t.line, t.col))
        return self.parse_primary()

    def parse_primary(self) -> N.Expr:
        t = self.next()
        loc = N.Loc(t.line, t.col)
        if t.kind == _TOKEN_INT:
            return N.IntLit(int(t.text), loc=loc)
        if t.kind == _TOKEN_FLOAT:
            return N.FloatLit(float(t.text.rstrip("fF")), loc=loc)
        if t.text == "(":
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if t.text == "new":
            type_tok = self.next()
            size = None
            if self.at("["):
                self.next()
                size = self.parse_expr()
                self.expect("]")
            return N.NewExpr(elem_type=type_tok.text, size=size, loc=loc)
        if t.kind == _TOKEN_IDENT:
            if self.at("("):
                self.next()
                args = []
                while not self.at(")"):
                    args.append(self.parse_expr())
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
                return N.Call(name=t.text, args=tuple(args), loc=loc)
            if self.at("["):
                indices = []
                while self.at("["):
                    self.next()
                    indices.append(self.parse_expr())
                    self.expect("]")
                return N.ArrayRef(name=t.text, indices=tuple(indices), loc=loc)
            return N.Ident(name=t.text, loc=loc)
        raise ParseError(f"unexpected token {t.text or 'end of input'!r}",
                         t.line, t.col)


def parse(unit) -> N.Ast:
    """Parse a SourceUnit (or raw string) into an Ast."""
    if isinstance(unit, str):
        unit = N.SourceUnit(name="unit", text=unit)
    tokens = _tokenize(unit.text)
    return _Parser(tokens, unit.name).parse_unit()
