"""AST node definitions for the supported HLS-C subset.

All nodes are frozen dataclasses: analyses never mutate a tree, edits
rebuild the spine (structural sharing makes this cheap). Source locations
take no part in equality, so a reparsed pretty-print compares equal to
the tree it came from.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union

from ..errors import UnknownSite

# Scalar types synthesizable by this toolkit. Anything else parses (so the
# UDT detector has something to point at) but is not on this list.
SUPPORTED_SCALARS = ("int", "unsigned", "short", "long", "char", "float", "double")

INT_WIDTHS = {"int": 32, "unsigned": 32, "short": 16, "long": 64, "char": 8}
FLOAT_TYPES = ("float", "double")


@dataclass(frozen=True)
class Loc:
    line: int = 0
    col: int = 0


def _loc_field():
    return field(default=Loc(), compare=False, repr=False)


# ---------------------------------------------------------------------------
# Pragmas

PRAGMA_KINDS = ("pipeline", "unroll", "array_partition", "dataflow")
# Canonical emission order when several pragmas share a site.
PRAGMA_ORDER = {k: i for i, k in enumerate(PRAGMA_KINDS)}
PARTITION_TYPES = ("cyclic", "block", "complete")


@dataclass(frozen=True)
class Pragma:
    """One HLS directive.

    ``site`` names the attachment target (a loop id such as ``"L2"`` or a
    function name) while the pragma travels outside a tree, e.g. inside a
    PragmaPlan. Once attached, position is authoritative and site is None.
    For ``unroll``, factor=None means full unroll.
    """

    kind: str
    ii: Optional[int] = None
    factor: Optional[int] = None
    variable: Optional[str] = None
    ptype: Optional[str] = None
    dim: Optional[int] = None
    site: Optional[str] = None
    loc: Loc = _loc_field()

    def __post_init__(self):
        if self.kind not in PRAGMA_KINDS:
            raise ValueError(f"unknown pragma kind {self.kind!r}")
        if self.factor is not None and self.factor < 2:
            raise ValueError("pragma factor must be >= 2 when present")
        if self.ii is not None and self.ii < 1:
            raise ValueError("pipeline II must be >= 1")
        if self.ptype is not None and self.ptype not in PARTITION_TYPES:
            raise ValueError(f"unknown partition type {self.ptype!r}")

    def placed(self, site: str) -> "Pragma":
        return dataclasses.replace(self, site=site)

    def unplaced(self) -> "Pragma":
        return dataclasses.replace(self, site=None) if self.site else self


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class IntLit:
    value: int
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class FloatLit:
    value: float
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Ident:
    name: str
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class ArrayRef:
    name: str
    indices: Tuple["Expr", ...]
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Unary:
    op: str  # "-", "!", "*" (deref), "&"
    operand: "Expr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expr", ...]
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class NewExpr:
    """C++ ``new T[size]`` (size None for plain ``new T``)."""

    elem_type: str
    size: Optional["Expr"]
    loc: Loc = _loc_field()


Expr = Union[IntLit, FloatLit, Ident, ArrayRef, Unary, Binary, Call, NewExpr]


# ---------------------------------------------------------------------------
# Statements


@dataclass(frozen=True)
class VarDecl:
    base_type: str
    name: str
    dims: Tuple[Expr, ...] = ()
    init: Optional[Expr] = None
    is_pointer: bool = False
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Assign:
    target: Expr  # Ident, ArrayRef, or Unary("*") deref
    op: str  # "=", "+=", "-=", "*=", "/=", "%="
    value: Expr
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Block:
    stmts: Tuple["Stmt", ...]
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class For:
    init: Optional["Stmt"]
    cond: Optional[Expr]
    step: Optional["Stmt"]
    body: Block
    label: Optional[str] = None
    pragmas: Tuple[Pragma, ...] = ()
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Block
    orelse: Optional[Block] = None
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Return:
    value: Optional[Expr] = None
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr
    loc: Loc = _loc_field()


Stmt = Union[VarDecl, Assign, For, If, Return, ExprStmt, Block]


@dataclass(frozen=True)
class Param:
    base_type: str
    name: str
    dims: Tuple[Optional[Expr], ...] = ()
    is_pointer: bool = False
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class FunctionDecl:
    ret_type: str
    name: str
    params: Tuple[Param, ...]
    body: Block
    pragmas: Tuple[Pragma, ...] = ()
    loc: Loc = _loc_field()


@dataclass(frozen=True)
class Ast:
    functions: Tuple[FunctionDecl, ...]
    name: str = field(default="unit", compare=False)


@dataclass(frozen=True)
class SourceUnit:
    name: str
    text: str
    origin: str = "user"  # corpus | user | generated

    def __post_init__(self):
        if not self.text:
            raise ValueError("SourceUnit.text must be non-empty")


# ---------------------------------------------------------------------------
# Tree access: every node is addressed by a path of (field, index) steps.

Path = Tuple


def _child_fields(node):
    for f in dataclasses.fields(node):
        if f.name == "loc":
            continue
        yield f.name, getattr(node, f.name)


def _is_node(v) -> bool:
    return dataclasses.is_dataclass(v) and not isinstance(v, (Loc, Pragma, SourceUnit))


def walk(node, path: Path = ()) -> Iterator[Tuple[Path, object]]:
    """Pre-order traversal yielding (path, node) pairs, root included."""
    yield path, node
    for name, value in _child_fields(node):
        if _is_node(value):
            yield from walk(value, path + (name,))
        elif isinstance(value, tuple):
            for i, item in enumerate(value):
                if _is_node(item):
                    yield from walk(item, path + (name, i))


def get_at(root, path: Path):
    node = root
    for step in path:
        node = node[step] if isinstance(step, int) else getattr(node, step)
    return node


def replace_at(root, path: Path, new_node):
    """Rebuild the spine from root to ``path`` with ``new_node`` substituted."""
    if not path:
        return new_node
    step = path[0]
    if isinstance(step, int):
        raise TypeError("path cannot start with an index")
    value = getattr(root, step)
    if len(path) >= 2 and isinstance(path[1], int):
        idx = path[1]
        rebuilt = replace_at(value[idx], path[2:], new_node)
        value = value[:idx] + ((rebuilt,) if rebuilt is not None else ()) + value[idx + 1 :]
    else:
        value = replace_at(value, path[1:], new_node)
    return dataclasses.replace(root, **{step: value})


def remove_at(root, path: Path):
    """Delete the tuple element addressed by ``path`` (must end in an index)."""
    if not path or not isinstance(path[-1], int):
        raise TypeError("remove_at needs a path ending in a tuple index")
    return replace_at(root, path, None)


def paths_overlap(a: Path, b: Path) -> bool:
    n = min(len(a), len(b))
    return a[:n] == b[:n]


# ---------------------------------------------------------------------------
# Loop identity: ids are positional (pre-order), so they survive emit/parse
# round trips without being stored in the tree.


def loops_of(ast: Ast):
    """[(loop_id, path, For)] in pre-order; ids are "L0", "L1", ..."""
    out = []
    for path, node in walk(ast):
        if isinstance(node, For):
            out.append((f"L{len(out)}", path, node))
    return out


def loop_index(ast: Ast) -> dict:
    return {lid: (path, node) for lid, path, node in loops_of(ast)}


def find_site(ast: Ast, site: str):
    """Resolve a site name to (path, node). Sites are loop ids or function names."""
    idx = loop_index(ast)
    if site in idx:
        return idx[site]
    for i, fn in enumerate(ast.functions):
        if fn.name == site:
            return ("functions", i), fn
    raise UnknownSite(f"no loop or function named {site!r}")


def _canonical_pragmas(pragmas) -> Tuple[Pragma, ...]:
    ordered = sorted(
        pragmas,
        key=lambda p: (PRAGMA_ORDER[p.kind], p.variable or "", p.dim or 0),
    )
    return tuple(p.unplaced() for p in ordered)


def attach_pragma(ast: Ast, pragma: Pragma, site: Optional[str] = None) -> Ast:
    """Return a tree with ``pragma`` attached at ``site`` (or pragma.site)."""
    target = site or pragma.site
    if target is None:
        raise UnknownSite("pragma carries no site and none was given")
    path, node = find_site(ast, target)
    node = dataclasses.replace(node, pragmas=_canonical_pragmas(node.pragmas + (pragma,)))
    return replace_at(ast, path, node)


def detach_pragma(ast: Ast, site: str, kind: str, variable: Optional[str] = None,
                  dim: Optional[int] = None):
    """Remove matching pragmas at ``site``. Returns (ast, removed: bool).

    Detaching an absent pragma is a no-op: the original tree comes back
    with removed=False.
    """
    path, node = find_site(ast, site)
    keep, removed = [], False
    for p in node.pragmas:
        match = p.kind == kind
        if variable is not None:
            match = match and p.variable == variable
        if dim is not None:
            match = match and p.dim == dim
        if match:
            removed = True
        else:
            keep.append(p)
    if not removed:
        return ast, False
    node = dataclasses.replace(node, pragmas=tuple(keep))
    return replace_at(ast, path, node), True


def all_placed_pragmas(ast: Ast):
    """[(site, owner_node, Pragma)] across the whole tree, loops then functions."""
    out = []
    for lid, _path, loop in loops_of(ast):
        for p in loop.pragmas:
            out.append((lid, loop, p))
    for fn in ast.functions:
        for p in fn.pragmas:
            out.append((fn.name, fn, p))
    return out


def strip_pragmas(ast: Ast) -> Ast:
    """Drop every directive; the result is the un-optimized baseline design."""
    for site, _owner, p in all_placed_pragmas(ast):
        ast, _ = detach_pragma(ast, site, p.kind)
    return ast
