"""Loop and array metadata extraction.

Trip counts are computed only for constant affine bounds; anything else is
unknown (None) and downstream passes treat it as not unrollable. The
loop-carried dependence test is conservative: when an index is too messy to
reason about, the loop is assumed to carry a dependence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import nodes as N

ARITH_OPS = ("+", "-", "*", "/", "%")


# ---------------------------------------------------------------------------
# Small expression algebra


def const_value(e: Optional[N.Expr]) -> Optional[int]:
    """Fold an integer-constant expression, or None."""
    if isinstance(e, N.IntLit):
        return e.value
    if isinstance(e, N.Unary) and e.op == "-":
        v = const_value(e.operand)
        return -v if v is not None else None
    if isinstance(e, N.Binary):
        l, r = const_value(e.left), const_value(e.right)
        if l is None or r is None:
            return None
        if e.op == "+":
            return l + r
        if e.op == "-":
            return l - r
        if e.op == "*":
            return l * r
    return None


def affine_form(e: N.Expr) -> Optional[Dict[Optional[str], int]]:
    """Decompose into {var: coeff, None: constant}; None if not affine."""
    if isinstance(e, N.IntLit):
        return {None: e.value}
    if isinstance(e, N.Ident):
        return {e.name: 1, None: 0}
    if isinstance(e, N.Unary) and e.op == "-":
        inner = affine_form(e.operand)
        if inner is None:
            return None
        return {k: -v for k, v in inner.items()}
    if isinstance(e, N.Binary) and e.op in ("+", "-"):
        l, r = affine_form(e.left), affine_form(e.right)
        if l is None or r is None:
            return None
        sign = 1 if e.op == "+" else -1
        out = dict(l)
        for k, v in r.items():
            out[k] = out.get(k, 0) + sign * v
        return out
    if isinstance(e, N.Binary) and e.op == "*":
        cl, cr = const_value(e.left), const_value(e.right)
        if cl is not None:
            inner = affine_form(e.right)
        elif cr is not None:
            inner, cl = affine_form(e.left), cr
        else:
            return None
        if inner is None:
            return None
        return {k: cl * v for k, v in inner.items()}
    return None


# ---------------------------------------------------------------------------
# Metadata records


@dataclass(frozen=True)
class LoopInfo:
    id: str
    label: Optional[str]
    trip_count: Optional[int]
    depth: int
    parent: Optional[str]
    body_ops: int
    carried_dependence: bool
    index_var: Optional[str]
    # Refinements of carried_dependence: reduction_only is True when every
    # carried dependence is a plain accumulation (s += e, x[c] = x[c] + e)
    # through an associative op; acc_op is that op.
    reduction_only: bool = False
    acc_op: Optional[str] = None


@dataclass(frozen=True)
class Access:
    loop: Optional[str]  # innermost enclosing loop id, None outside loops
    dim: int  # 0-based dimension index
    expr: N.Expr
    mode: str  # "r" | "w"


@dataclass(frozen=True)
class ArrayInfo:
    name: str
    element_type: str
    dims: Tuple[Optional[int], ...]
    accesses: Tuple[Access, ...] = field(default=(), compare=False)

    @property
    def rank(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class DesignMetadata:
    loops: Tuple[LoopInfo, ...]
    arrays: Tuple[ArrayInfo, ...]
    pragma_sites: int

    def loop(self, loop_id: str) -> LoopInfo:
        return next(l for l in self.loops if l.id == loop_id)

    def array(self, name: str) -> Optional[ArrayInfo]:
        return next((a for a in self.arrays if a.name == name), None)


# ---------------------------------------------------------------------------
# Loop shape helpers


def loop_index_var(loop: N.For) -> Optional[str]:
    if isinstance(loop.init, N.VarDecl):
        return loop.init.name
    if isinstance(loop.init, N.Assign) and isinstance(loop.init.target, N.Ident):
        return loop.init.target.name
    if isinstance(loop.cond, N.Binary) and isinstance(loop.cond.left, N.Ident):
        return loop.cond.left.name
    return None


def loop_bounds(loop: N.For) -> Optional[Tuple[int, int, int]]:
    """(start, stop_exclusive, step) for constant upward loops, else None."""
    var = loop_index_var(loop)
    if var is None:
        return None
    if isinstance(loop.init, N.VarDecl):
        start = const_value(loop.init.init)
    elif isinstance(loop.init, N.Assign) and loop.init.op == "=":
        start = const_value(loop.init.value)
    else:
        return None
    if start is None:
        return None
    cond = loop.cond
    if not (isinstance(cond, N.Binary) and cond.op in ("<", "<=")
            and isinstance(cond.left, N.Ident) and cond.left.name == var):
        return None
    bound = const_value(cond.right)
    if bound is None:
        return None
    stop = bound + 1 if cond.op == "<=" else bound
    step = None
    s = loop.step
    if isinstance(s, N.Assign) and isinstance(s.target, N.Ident) and s.target.name == var:
        if s.op == "+=":
            step = const_value(s.value)
        elif s.op == "=":
            form = affine_form(s.value)
            if form is not None and form.get(var) == 1:
                step = form.get(None, 0)
    if step is None or step <= 0:
        return None
    return start, stop, step


def trip_count(loop: N.For) -> Optional[int]:
    b = loop_bounds(loop)
    if b is None:
        return None
    start, stop, step = b
    if stop <= start:
        return None
    return -(-(stop - start) // step)


def _count_arith(node) -> int:
    count = 0
    for _p, n in N.walk(node):
        if isinstance(n, N.Binary) and n.op in ARITH_OPS:
            count += 1
        elif isinstance(n, N.Unary) and n.op == "-":
            count += 1
        elif isinstance(n, N.Assign) and n.op != "=":
            count += 1
    return count


# ---------------------------------------------------------------------------
# Accesses


def _parent_path(path: N.Path) -> N.Path:
    return path[:-2] if path and isinstance(path[-1], int) else path[:-1]


def collect_accesses(ast: N.Ast):
    """Array accesses for the whole unit: [(array_name, Access, node_path)].

    One row per referenced dimension. Loop ids are the global positional ids
    (consistent with loops_of). A compound-assignment target contributes both
    a write and a read row at the statement's path.
    """
    loop_paths = {path: lid for lid, path, _n in N.loops_of(ast)}

    def innermost_loop(path):
        best_lid, best_len = None, -1
        for lp, lid in loop_paths.items():
            if path[: len(lp)] == lp and len(lp) > best_len:
                best_lid, best_len = lid, len(lp)
        return best_lid

    out = []

    def record(ref: N.ArrayRef, mode: str, path):
        lid = innermost_loop(path)
        for d, idx in enumerate(ref.indices):
            out.append((ref.name, Access(loop=lid, dim=d, expr=idx, mode=mode), path))

    for path, node in N.walk(ast):
        if isinstance(node, N.Assign) and isinstance(node.target, N.ArrayRef):
            record(node.target, "w", path)
            if node.op != "=":
                record(node.target, "r", path)
        elif isinstance(node, N.ArrayRef):
            parent = N.get_at(ast, _parent_path(path))
            if isinstance(parent, N.Assign) and parent.target is node:
                continue  # the write target, already recorded above
            record(node, "r", path)
    return out


def _group_refs(entries):
    """Group per-dimension rows back into whole references: path -> (dim exprs)."""
    grouped: Dict[tuple, list] = {}
    for path, acc in entries:
        grouped.setdefault(path, []).append(acc)
    return {path: tuple(a.expr for a in sorted(accs, key=lambda a: a.dim))
            for path, accs in grouped.items()}


# ---------------------------------------------------------------------------
# Dependence


def _is_accumulation(stmt) -> Optional[str]:
    """Return the associative op if stmt is ``x op= e`` or ``x = x op e``."""
    if not isinstance(stmt, N.Assign):
        return None
    if stmt.op in ("+=", "*="):
        return stmt.op[0]
    if stmt.op != "=":
        return None
    v = stmt.value
    if isinstance(v, N.Binary) and v.op in ("+", "*"):
        if v.left == stmt.target or v.right == stmt.target:
            return v.op
    return None


def _dim_allows_carry(w_expr, r_expr, var) -> Optional[bool]:
    """Can a write in iteration k alias a read in iteration k' > k on this dim?

    True = yes, False = provably not, None = unknown (treated as yes).
    """
    wf, rf = affine_form(w_expr), affine_form(r_expr)
    if wf is None or rf is None:
        return None
    cw, cr = wf.get(var, 0), rf.get(var, 0)
    rest_w = {k: v for k, v in wf.items() if k != var and v != 0 and k is not None}
    rest_r = {k: v for k, v in rf.items() if k != var and v != 0 and k is not None}
    const_w, const_r = wf.get(None, 0), rf.get(None, 0)
    if cw == 0 and cr == 0:
        if not rest_w and not rest_r:
            return const_w == const_r
        return True if (rest_w, const_w) == (rest_r, const_r) else None
    if cw == cr:
        if (rest_w, const_w) == (rest_r, const_r):
            return False  # alias only when k == k'
        if not rest_w and not rest_r:
            delta = const_w - const_r
            return delta % cw == 0 and delta // cw > 0
        return None
    return None


def _loop_dependence(ast: N.Ast, loop_path: N.Path, loop: N.For,
                     var: Optional[str], unit_accesses):
    """(carried, reduction_only, acc_op) for one loop."""
    body = loop.body
    inner_vars = {loop_index_var(n) for _p, n in N.walk(body) if isinstance(n, N.For)}
    inner_vars.discard(None)
    local_decls = {n.name for _p, n in N.walk(body) if isinstance(n, N.VarDecl)}

    carried = False
    all_reductions = True
    acc_op: Optional[str] = None

    # --- scalars: a scalar living outside the body, written and read inside
    # it, flows between iterations. Plain-assignment targets are not reads.
    nonread_idents = set()
    writes_by_name: Dict[str, list] = {}
    for _p, node in N.walk(body):
        if isinstance(node, N.Assign) and isinstance(node.target, N.Ident):
            if node.op == "=":
                nonread_idents.add(id(node.target))
            name = node.target.name
            if name in local_decls or name == var or name in inner_vars:
                continue
            writes_by_name.setdefault(name, []).append(node)
    read_names = set()
    for _p, node in N.walk(body):
        if isinstance(node, N.Ident) and id(node) not in nonread_idents:
            read_names.add(node.name)
    for name, writes in writes_by_name.items():
        if name not in read_names:
            continue
        carried = True
        ops = [_is_accumulation(w) for w in writes]
        if all(ops):
            acc_op = acc_op or ops[0]
        else:
            all_reductions = False

    # --- arrays: pair every write ref against every read ref of the same
    # array inside this loop's body.
    per_array: Dict[str, Dict[str, list]] = {}
    acc_paths = set()
    for name, acc, path in unit_accesses:
        if path[: len(loop_path)] != loop_path or len(path) <= len(loop_path):
            continue
        per_array.setdefault(name, {"r": [], "w": []})[acc.mode].append((path, acc))
        if acc.mode == "w":
            stmt = N.get_at(ast, path)
            if _is_accumulation(stmt):
                acc_paths.add(path)

    for name, groups in per_array.items():
        writes = _group_refs(groups["w"])
        reads = _group_refs(groups["r"])
        for wpath, wdims in writes.items():
            for rpath, rdims in reads.items():
                if len(wdims) != len(rdims):
                    continue
                verdicts = [_dim_allows_carry(wdims[d], rdims[d], var)
                            for d in range(len(wdims))]
                if any(v is False for v in verdicts):
                    continue
                carried = True
                self_acc = (wpath in acc_paths and rpath[: len(wpath)] == wpath
                            and wdims == rdims)
                if self_acc:
                    acc_op = acc_op or _is_accumulation(N.get_at(ast, wpath))
                else:
                    all_reductions = False

    return carried, carried and all_reductions, acc_op


# ---------------------------------------------------------------------------


def extract_metadata(ast: N.Ast) -> DesignMetadata:
    all_loops = N.loops_of(ast)
    path_to_id = {path: lid for lid, path, _n in all_loops}
    unit_accesses = collect_accesses(ast)

    loops: List[LoopInfo] = []
    for lid, path, loop in all_loops:
        parent_id, parent_len = None, -1
        for ppath, pid in path_to_id.items():
            if len(ppath) < len(path) and path[: len(ppath)] == ppath \
                    and len(ppath) > parent_len:
                parent_id, parent_len = pid, len(ppath)
        depth = 0
        probe = parent_id
        while probe is not None:
            depth += 1
            probe = next(l.parent for l in loops if l.id == probe)
        var = loop_index_var(loop)
        carried, reduction_only, acc_op = _loop_dependence(
            ast, path, loop, var, unit_accesses)
        loops.append(LoopInfo(
            id=lid,
            label=loop.label,
            trip_count=trip_count(loop),
            depth=depth,
            parent=parent_id,
            body_ops=_count_arith(loop.body),
            carried_dependence=carried,
            index_var=var,
            reduction_only=reduction_only,
            acc_op=acc_op,
        ))

    arrays: List[ArrayInfo] = []
    seen = set()
    for fn in ast.functions:
        declared: List[Tuple[str, str, Tuple[Optional[int], ...]]] = []
        for p in fn.params:
            if p.dims:
                declared.append((p.name, p.base_type,
                                 tuple(const_value(d) for d in p.dims)))
        for _path, node in N.walk(fn):
            if isinstance(node, N.VarDecl) and node.dims:
                declared.append((node.name, node.base_type,
                                 tuple(const_value(d) for d in node.dims)))
        for name, etype, dims in declared:
            if name in seen:
                continue
            seen.add(name)
            accs = tuple(acc for n, acc, _p in unit_accesses if n == name)
            arrays.append(ArrayInfo(name=name, element_type=etype, dims=dims,
                                    accesses=accs))

    sites = 2 * len(loops) + sum(a.rank for a in arrays) + len(ast.functions)
    return DesignMetadata(loops=tuple(loops), arrays=tuple(arrays),
                          pragma_sites=sites)
