"""HLS-C frontend: parse, analyze, transform, and re-emit."""

from .nodes import (
    Ast, SourceUnit, Loc, Pragma, FunctionDecl, Param, Block, For, If, Return,
    ExprStmt, VarDecl, Assign, IntLit, FloatLit, Ident, ArrayRef, Unary,
    Binary, Call, NewExpr, SUPPORTED_SCALARS, INT_WIDTHS, FLOAT_TYPES,
    walk, get_at, replace_at, remove_at, paths_overlap, loops_of, loop_index,
    find_site, attach_pragma, detach_pragma, all_placed_pragmas, strip_pragmas,
)
from .parser import parse
from .printer import emit, emit_text, emit_expr, emit_pragma
from .metadata import (
    DesignMetadata, LoopInfo, ArrayInfo, Access, extract_metadata,
    affine_form, const_value, trip_count, loop_bounds, loop_index_var,
    collect_accesses,
)

__all__ = [
    "Ast", "SourceUnit", "Loc", "Pragma", "FunctionDecl", "Param", "Block",
    "For", "If", "Return", "ExprStmt", "VarDecl", "Assign", "IntLit",
    "FloatLit", "Ident", "ArrayRef", "Unary", "Binary", "Call", "NewExpr",
    "SUPPORTED_SCALARS", "INT_WIDTHS", "FLOAT_TYPES",
    "walk", "get_at", "replace_at", "remove_at", "paths_overlap", "loops_of",
    "loop_index", "find_site", "attach_pragma", "detach_pragma",
    "all_placed_pragmas", "strip_pragmas",
    "parse", "emit", "emit_text", "emit_expr", "emit_pragma",
    "DesignMetadata", "LoopInfo", "ArrayInfo", "Access", "extract_metadata",
    "affine_form", "const_value", "trip_count", "loop_bounds",
    "loop_index_var", "collect_accesses",
]
