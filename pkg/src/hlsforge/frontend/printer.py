"""Deterministic pretty-printer. parse(emit(ast)) is structurally equal to ast."""

from __future__ import annotations

from . import nodes as N

_INDENT = "    "


def _fmt_float(v: float) -> str:
    text = repr(v)
    return text if ("." in text or "e" in text or "inf" in text) else text + ".0"


def emit_expr(e: N.Expr) -> str:
    if isinstance(e, N.IntLit):
        return str(e.value)
    if isinstance(e, N.FloatLit):
        return _fmt_float(e.value)
    if isinstance(e, N.Ident):
        return e.name
    if isinstance(e, N.ArrayRef):
        return e.name + "".join(f"[{emit_expr(i)}]" for i in e.indices)
    if isinstance(e, N.Unary):
        inner = emit_expr(e.operand)
        if isinstance(e.operand, N.Binary):
            inner = f"({inner})"
        return f"{e.op}{inner}"
    if isinstance(e, N.Binary):
        return f"{_paren(e, e.left)} {e.op} {_paren(e, e.right, right=True)}"
    if isinstance(e, N.Call):
        return f"{e.name}({', '.join(emit_expr(a) for a in e.args)})"
    if isinstance(e, N.NewExpr):
        size = f"[{emit_expr(e.size)}]" if e.size is not None else ""
        return f"new {e.elem_type}{size}"
    raise TypeError(f"not an expression: {e!r}")


_LEVEL = {"||": 0, "&&": 1, "==": 2, "!=": 2, "<": 3, "<=": 3, ">": 3, ">=": 3,
          "+": 4, "-": 4, "*": 5, "/": 5, "%": 5}


def _paren(parent: N.Binary, child: N.Expr, right: bool = False) -> str:
    text = emit_expr(child)
    if not isinstance(child, N.Binary):
        return text
    pl, cl = _LEVEL[parent.op], _LEVEL[child.op]
    if cl < pl or (right and cl == pl):
        return f"({text})"
    return text


def emit_pragma(p: N.Pragma) -> str:
    if p.kind == "pipeline":
        return "#pragma HLS PIPELINE" + (f" II={p.ii}" if p.ii is not None else "")
    if p.kind == "unroll":
        return "#pragma HLS UNROLL" + (f" factor={p.factor}" if p.factor is not None else "")
    if p.kind == "array_partition":
        parts = [f"variable={p.variable}", p.ptype or "complete"]
        if p.factor is not None:
            parts.append(f"factor={p.factor}")
        parts.append(f"dim={p.dim if p.dim is not None else 1}")
        return "#pragma HLS ARRAY_PARTITION " + " ".join(parts)
    if p.kind == "dataflow":
        return "#pragma HLS DATAFLOW"
    raise ValueError(f"unknown pragma kind {p.kind!r}")


def _decl_text(d: N.VarDecl) -> str:
    star = "*" if d.is_pointer else ""
    dims = "".join(f"[{emit_expr(x)}]" for x in d.dims)
    init = f" = {emit_expr(d.init)}" if d.init is not None else ""
    return f"{d.base_type} {star}{d.name}{dims}{init};"


def _assign_text(a: N.Assign, as_step: bool = False) -> str:
    target = emit_expr(a.target)
    if isinstance(a.value, N.IntLit) and a.value.value == 1 and a.op in ("+=", "-="):
        text = f"{target}{'++' if a.op == '+=' else '--'}"
    else:
        text = f"{target} {a.op} {emit_expr(a.value)}"
    return text if as_step else text + ";"


def _emit_stmt(s: N.Stmt, depth: int, out: list) -> None:
    pad = _INDENT * depth
    if isinstance(s, N.VarDecl):
        out.append(pad + _decl_text(s))
    elif isinstance(s, N.Assign):
        out.append(pad + _assign_text(s))
    elif isinstance(s, N.ExprStmt):
        out.append(pad + emit_expr(s.expr) + ";")
    elif isinstance(s, N.Return):
        out.append(pad + ("return;" if s.value is None else f"return {emit_expr(s.value)};"))
    elif isinstance(s, N.Block):
        out.append(pad + "{")
        for inner in s.stmts:
            _emit_stmt(inner, depth + 1, out)
        out.append(pad + "}")
    elif isinstance(s, N.If):
        out.append(pad + f"if ({emit_expr(s.cond)}) {{")
        for inner in s.then.stmts:
            _emit_stmt(inner, depth + 1, out)
        if s.orelse is not None:
            out.append(pad + "} else {")
            for inner in s.orelse.stmts:
                _emit_stmt(inner, depth + 1, out)
        out.append(pad + "}")
    elif isinstance(s, N.For):
        init = ""
        if isinstance(s.init, N.VarDecl):
            init = _decl_text(s.init)[:-1]
        elif isinstance(s.init, N.Assign):
            init = _assign_text(s.init, as_step=True)
        cond = emit_expr(s.cond) if s.cond is not None else ""
        step = _assign_text(s.step, as_step=True) if isinstance(s.step, N.Assign) else ""
        label = f"{s.label}: " if s.label else ""
        out.append(pad + f"{label}for ({init}; {cond}; {step}) {{")
        for p in s.pragmas:
            out.append(pad + _INDENT + emit_pragma(p))
        for inner in s.body.stmts:
            _emit_stmt(inner, depth + 1, out)
        out.append(pad + "}")
    else:
        raise TypeError(f"not a statement: {s!r}")


def _emit_function(fn: N.FunctionDecl, out: list) -> None:
    params = []
    for p in fn.params:
        star = "*" if p.is_pointer else ""
        dims = "".join("[]" if d is None else f"[{emit_expr(d)}]" for d in p.dims)
        params.append(f"{p.base_type} {star}{p.name}{dims}")
    out.append(f"{fn.ret_type} {fn.name}({', '.join(params)}) {{")
    for p in fn.pragmas:
        out.append(_INDENT + emit_pragma(p))
    for s in fn.body.stmts:
        _emit_stmt(s, 1, out)
    out.append("}")


def emit(ast: N.Ast, origin: str = "generated") -> N.SourceUnit:
    """Pretty-print an Ast back to a SourceUnit."""
    out: list = []
    for i, fn in enumerate(ast.functions):
        if i:
            out.append("")
        _emit_function(fn, out)
    return N.SourceUnit(name=ast.name, text="\n".join(out) + "\n", origin=origin)


def emit_text(ast: N.Ast) -> str:
    return emit(ast).text
