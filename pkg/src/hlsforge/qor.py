"""Analytic QoR model (latency + DSP/FF/LUT), a cycle-level reference
scheduler used as its test oracle, and the external-tool report adapter.

Execution model shared by the closed-form estimate and the scheduler:

* Statements and fully-unrolled loops inside one region schedule as
  dataflow: ops issue as soon as operands and memory ports allow.
* A loop that is not fully unrolled is a sequential region barrier: it
  starts after everything before it in its block finished, and whatever
  follows waits for it.
* A pipelined loop issues one iteration group per cycle; the achieved
  initiation interval grows when memory ports or a loop-carried
  recurrence force it up. A pipeline pragma on a loop that still
  contains a rolled inner loop degrades to sequential execution.
* Memory ports accept one new access per cycle per port (pipelined
  BRAM); an access occupies a port only on its issue cycle.
* ``if`` executes both branches and muxes (predicated execution).

Resource accounting: unrolling replicates operator instances; a bare
pipeline shares one instance across iterations; a complete partition
turns the array into registers (FF cost = elements x width).
"""

from __future__ import annotations

import math
import os
import shlex
import subprocess
import threading
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import MalformedReport, UnknownTripCount
from .frontend import nodes as N
from .frontend.metadata import extract_metadata, loop_bounds, trip_count

# ---------------------------------------------------------------------------
# Device + cost tables


@dataclass(frozen=True)
class DeviceProfile:
    name: str
    dsp_total: int
    ff_total: int
    lut_total: int
    bram_ports_per_bank: int = 2

    def __post_init__(self):
        if min(self.dsp_total, self.ff_total, self.lut_total) <= 0:
            raise ValueError("device resource totals must be positive")


# ZCU106 totals: 252 DSP = 14.6% and 8400 LUT = 3.6% pin the denominators.
ZCU106 = DeviceProfile("zcu106", dsp_total=1728, ff_total=460800, lut_total=230400)

DEVICES = {"zcu106": ZCU106}


@dataclass(frozen=True)
class OpCost:
    latency: int
    dsp: int = 0
    ff: int = 0
    lut: int = 0


_DEFAULT_COSTS = {
    ("mul", "int"): OpCost(3, 4, 128, 64),
    ("add", "int"): OpCost(1, 0, 32, 32),
    ("mul", "float"): OpCost(4, 3, 200, 150),
    ("add", "float"): OpCost(4, 2, 300, 250),
    ("div", "int"): OpCost(16, 0, 600, 800),
    ("div", "float"): OpCost(16, 0, 600, 800),
    ("mem", "any"): OpCost(2, 0, 8, 16),
    ("cmp", "any"): OpCost(1, 0, 16, 16),
}


class OpCostTable:
    """Per scalar-op-and-type costs. Keys are (op, "int"|"float"|"any")."""

    def __init__(self, table: Optional[Dict[Tuple[str, str], OpCost]] = None):
        self.table = dict(_DEFAULT_COSTS)
        if table:
            self.table.update(table)
        for key, cost in self.table.items():
            if cost.latency < 1 or min(cost.dsp, cost.ff, cost.lut) < 0:
                raise ValueError(f"invalid cost for {key}: {cost}")

    def op(self, op: str, is_float: bool) -> OpCost:
        klass = "float" if is_float else "int"
        if op in ("+", "-"):
            return self.table[("add", klass)]
        if op == "*":
            return self.table[("mul", klass)]
        if op in ("/", "%"):
            return self.table[("div", klass)]
        if op in ("<", "<=", ">", ">=", "==", "!=", "&&", "||", "!"):
            return self.table[("cmp", "any")]
        return self.table[("add", klass)]

    @property
    def mem(self) -> OpCost:
        return self.table[("mem", "any")]

    @classmethod
    def from_config(cls, data: Dict) -> "OpCostTable":
        """Build from {"mul:int": {"latency": 3, "dsp": 4, ...}, ...}."""
        table = {}
        for key, vals in data.items():
            op, _, klass = key.partition(":")
            table[(op, klass or "any")] = OpCost(**vals)
        return cls(table)


DEFAULT_COSTS = OpCostTable()


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class LoopQoR:
    ii: Optional[int]  # achieved II, None when not pipelined
    depth: int
    parallelism: int  # effective unroll factor


@dataclass(frozen=True)
class QoRReport:
    latency_cycles: int
    dsp: int
    ff: int
    lut: int
    dsp_util: float
    ff_util: float
    lut_util: float
    per_loop: Dict[str, LoopQoR] = field(default_factory=dict, compare=False)

    def resources(self) -> Dict[str, int]:
        return {"dsp": self.dsp, "ff": self.ff, "lut": self.lut}

    def utilization(self) -> Dict[str, float]:
        return {"dsp": self.dsp_util, "ff": self.ff_util, "lut": self.lut_util}

    def within_caps(self, caps: Dict[str, float]) -> bool:
        util = self.utilization()
        return all(util[k] <= caps[k] + 1e-12 for k in caps)

    def to_dict(self) -> Dict:
        return {
            "latency_cycles": self.latency_cycles,
            "dsp": self.dsp, "ff": self.ff, "lut": self.lut,
            "dsp_util": round(self.dsp_util, 6),
            "ff_util": round(self.ff_util, 6),
            "lut_util": round(self.lut_util, 6),
        }


def _make_report(latency, dsp, ff, lut, device, per_loop=None) -> QoRReport:
    return QoRReport(
        latency_cycles=max(1, int(latency)),
        dsp=int(dsp), ff=int(ff), lut=int(lut),
        dsp_util=dsp / device.dsp_total,
        ff_util=ff / device.ff_total,
        lut_util=lut / device.lut_total,
        per_loop=per_loop or {},
    )


# ---------------------------------------------------------------------------
# Shared helpers: partitions, banks, loop shapes, value types


def partition_map(ast: N.Ast) -> Dict[str, Dict[int, Tuple[str, Optional[int]]]]:
    """array name -> {0-based dim -> (ptype, factor)} from attached pragmas."""
    out: Dict[str, Dict[int, Tuple[str, Optional[int]]]] = {}
    for _site, _owner, p in N.all_placed_pragmas(ast):
        if p.kind != "array_partition" or not p.variable:
            continue
        dim = (p.dim or 1) - 1
        out.setdefault(p.variable, {})[dim] = (p.ptype or "complete", p.factor)
    return out


def _bank_count(rank: int, parts) -> Optional[int]:
    """Total banks for an array; None means registers (no port limit)."""
    banks = 1
    for d in range(rank):
        ptype, factor = parts.get(d, (None, None))
        if ptype == "complete":
            return None
        if ptype in ("cyclic", "block") and factor:
            banks *= factor
    return banks


@dataclass
class _LoopShape:
    lid: str
    trip: Optional[int]
    factor: int  # effective unroll factor (= trip when fully unrolled)
    full: bool
    pipelined: bool
    declared_ii: Optional[int]

    @property
    def groups(self) -> int:
        trip = self.trip if self.trip is not None else 1
        return max(1, math.ceil(trip / max(1, self.factor)))


class _Analysis:
    """Shared per-design context for the estimator and the scheduler."""

    def __init__(self, ast: N.Ast, device: DeviceProfile, costs: OpCostTable):
        self.ast = ast
        self.device = device
        self.costs = costs
        self.meta = extract_metadata(ast)
        self.parts = partition_map(ast)
        self.loop_ids = {id(node): lid for lid, _p, node in N.loops_of(ast)}
        self.float_names = set()
        for fn in ast.functions:
            for p in fn.params:
                if p.base_type in N.FLOAT_TYPES:
                    self.float_names.add(p.name)
            for _path, node in N.walk(fn):
                if isinstance(node, N.VarDecl) and node.base_type in N.FLOAT_TYPES:
                    self.float_names.add(node.name)

    def is_float(self, e: N.Expr) -> bool:
        for _p, n in N.walk(e):
            if isinstance(n, N.FloatLit):
                return True
            if isinstance(n, (N.Ident, N.ArrayRef)) and n.name in self.float_names:
                return True
        return False

    def shape(self, loop: N.For) -> _LoopShape:
        trip = trip_count(loop)
        unroll = next((p for p in loop.pragmas if p.kind == "unroll"), None)
        pipe = next((p for p in loop.pragmas if p.kind == "pipeline"), None)
        factor, full = 1, False
        if unroll is not None:
            if unroll.factor is None:
                factor, full = (trip, True) if trip is not None else (1, False)
            else:
                factor = min(unroll.factor, trip) if trip is not None else unroll.factor
                full = trip is not None and factor >= trip
        return _LoopShape(lid=self.loop_ids[id(loop)], trip=trip, factor=factor,
                          full=full, pipelined=pipe is not None,
                          declared_ii=pipe.ii if pipe is not None else None)

    def rolled_loops(self, stmts) -> List[N.For]:
        """Not-fully-unrolled loops reachable without crossing another one."""
        found: List[N.For] = []

        def scan(items):
            for s in items:
                if isinstance(s, N.For):
                    if self.shape(s).full:
                        scan(list(s.body.stmts))
                    else:
                        found.append(s)
                elif isinstance(s, N.If):
                    scan(list(s.then.stmts))
                    if s.orelse:
                        scan(list(s.orelse.stmts))
                elif isinstance(s, N.Block):
                    scan(list(s.stmts))

        scan(list(stmts))
        return found

    def accesses_per_iteration(self, loop: N.For) -> Dict[str, int]:
        """Static array accesses per iteration (fully-unrolled inner loops
        multiplied by their trips, rolled inner loops excluded)."""
        counts: Dict[str, int] = {}

        def visit(stmts, mult):
            for s in stmts:
                if isinstance(s, N.For):
                    sh = self.shape(s)
                    if sh.full:
                        visit(list(s.body.stmts), mult * (sh.trip or 1))
                    continue
                if isinstance(s, N.If):
                    visit(list(s.then.stmts), mult)
                    if s.orelse:
                        visit(list(s.orelse.stmts), mult)
                    continue
                if isinstance(s, N.Block):
                    visit(list(s.stmts), mult)
                    continue
                for _p, n in N.walk(s):
                    if isinstance(n, N.ArrayRef):
                        counts[n.name] = counts.get(n.name, 0) + mult
                if isinstance(s, N.Assign) and s.op != "=" and \
                        isinstance(s.target, N.ArrayRef):
                    counts[s.target.name] = counts.get(s.target.name, 0) + mult

        visit(list(loop.body.stmts), 1)
        return counts

    def port_ii(self, loop: N.For, factor: int) -> int:
        ports = self.device.bram_ports_per_bank
        worst = 1
        for name, per_iter in self.accesses_per_iteration(loop).items():
            info = self.meta.array(name)
            if info is None:
                continue
            banks = _bank_count(info.rank, self.parts.get(name, {}))
            if banks is None:
                continue
            worst = max(worst, math.ceil(per_iter * factor / (ports * banks)))
        return worst


# ---------------------------------------------------------------------------
# Closed-form estimate


class _Estimator(_Analysis):
    def __init__(self, ast, device, costs):
        super().__init__(ast, device, costs)
        self.per_loop: Dict[str, LoopQoR] = {}

    # -- dataflow depth of expressions/statements ----------------------

    def expr_depth(self, e: N.Expr) -> int:
        if isinstance(e, (N.IntLit, N.FloatLit, N.Ident)):
            return 0
        if isinstance(e, N.ArrayRef):
            idx = max((self.expr_depth(i) for i in e.indices), default=0)
            return idx + self.costs.mem.latency
        if isinstance(e, N.Unary):
            inner = self.expr_depth(e.operand)
            if e.op in ("*", "&", "!"):
                return inner
            return inner + self.costs.op("-", self.is_float(e)).latency
        if isinstance(e, N.Binary):
            lat = self.costs.op(e.op, self.is_float(e)).latency
            return max(self.expr_depth(e.left), self.expr_depth(e.right)) + lat
        if isinstance(e, N.Call):
            args = max((self.expr_depth(a) for a in e.args), default=0)
            return args + self.costs.op("*", True).latency
        return 1

    def stmt_depth(self, s) -> int:
        mem = self.costs.mem.latency
        if isinstance(s, N.Assign):
            d = self.expr_depth(s.value)
            if s.op != "=":
                old = mem if isinstance(s.target, N.ArrayRef) else 0
                fl = self.is_float(s.value) or self.is_float(s.target)
                d = max(d, old) + self.costs.op(s.op[0], fl).latency
            if isinstance(s.target, N.ArrayRef):
                d += mem
            return d
        if isinstance(s, N.VarDecl):
            return self.expr_depth(s.init) if s.init is not None else 0
        if isinstance(s, N.ExprStmt):
            return self.expr_depth(s.expr)
        if isinstance(s, N.Return):
            return self.expr_depth(s.value) if s.value is not None else 0
        if isinstance(s, N.If):
            inner = max(self.flow(list(s.then.stmts)),
                        self.flow(list(s.orelse.stmts)) if s.orelse else 0)
            return self.expr_depth(s.cond) + \
                self.costs.op("<", False).latency + inner
        return 0

    def _reads(self, node) -> set:
        def collect(sub, into):
            for _p, n in N.walk(sub):
                if isinstance(n, (N.Ident, N.ArrayRef)):
                    into.add(n.name)

        names: set = set()
        if isinstance(node, N.Assign):
            collect(node.value, names)
            if isinstance(node.target, N.ArrayRef):
                for idx in node.target.indices:
                    collect(idx, names)
                if node.op != "=":
                    names.add(node.target.name)
            elif isinstance(node.target, N.Ident) and node.op != "=":
                names.add(node.target.name)
        elif isinstance(node, N.VarDecl):
            if node.init is not None:
                collect(node.init, names)
        else:
            collect(node, names)
        return names

    def _writes(self, node) -> set:
        out = set()
        for _p, n in N.walk(node):
            if isinstance(n, N.Assign) and isinstance(n.target, (N.Ident, N.ArrayRef)):
                out.add(n.target.name)
            elif isinstance(n, N.VarDecl):
                out.add(n.name)
        return out

    def flow(self, items: List) -> int:
        """Critical path of one dataflow region. Items are statements or
        fully-unrolled loops; name-level dependences chain them."""
        ready: Dict[str, int] = {}
        end_max = 0
        for s in items:
            if isinstance(s, N.For):
                sh = self.shape(s)
                depth = self.dissolved_depth(s) if sh.full else self.loop_latency(s)
            else:
                depth = self.stmt_depth(s)
            start = max((ready.get(n, 0) for n in self._reads(s)), default=0)
            end = start + depth
            for n in self._writes(s):
                ready[n] = max(ready.get(n, 0), end)
            end_max = max(end_max, end)
        return end_max

    def region_sequence(self, stmts) -> int:
        """Latency of a block: dataflow segments separated by rolled loops."""
        t = 0
        pending: List = []
        for s in stmts:
            if isinstance(s, N.For) and not self.shape(s).full:
                if pending:
                    t += self.flow(pending)
                    pending = []
                t += self.loop_latency(s)
            else:
                pending.append(s)
        if pending:
            t += self.flow(pending)
        return t

    def dissolved_depth(self, loop: N.For) -> int:
        """Depth of a fully-unrolled loop inside its parent dataflow region."""
        sh = self.shape(loop)
        info = self.meta.loop(sh.lid)
        trip = sh.trip or 1
        body = max(1, self.flow(list(loop.body.stmts)))
        self.per_loop.setdefault(sh.lid, LoopQoR(ii=None, depth=body,
                                                 parallelism=trip))
        if info.carried_dependence:
            if info.reduction_only and info.acc_op:
                acc = self.costs.op(info.acc_op,
                                    self._loop_is_float(loop)).latency
                return max(0, body - acc) + trip * acc
            return trip * body
        return body

    def _loop_is_float(self, loop: N.For) -> bool:
        for _p, n in N.walk(loop.body):
            if isinstance(n, N.FloatLit):
                return True
            if isinstance(n, (N.Ident, N.ArrayRef)) and n.name in self.float_names:
                return True
        return False

    def loop_latency(self, loop: N.For) -> int:
        sh = self.shape(loop)
        info = self.meta.loop(sh.lid)
        rolled_inner = self.rolled_loops(loop.body.stmts)

        if sh.pipelined and not rolled_inner:
            depth = max(1, self.flow(list(loop.body.stmts)))
            ii = max(1, sh.declared_ii or 1, self.port_ii(loop, sh.factor))
            if info.carried_dependence:
                if info.reduction_only and info.acc_op:
                    acc = self.costs.op(info.acc_op,
                                        self._loop_is_float(loop)).latency
                    ii = max(ii, acc * sh.factor)
                else:
                    ii = max(ii, depth)
            self.per_loop[sh.lid] = LoopQoR(ii=ii, depth=depth,
                                            parallelism=sh.factor)
            return depth + (sh.groups - 1) * ii

        stall = max(0, self.port_ii(loop, sh.factor) - 1)
        group_lat = max(1, self.region_sequence(loop.body.stmts) + stall)
        self.per_loop[sh.lid] = LoopQoR(ii=None, depth=group_lat,
                                        parallelism=sh.factor)
        return sh.groups * group_lat

    # -- resources ------------------------------------------------------

    def resources(self) -> Tuple[int, int, int]:
        dsp = ff = lut = 0

        def add(cost: OpCost, mult: int):
            nonlocal dsp, ff, lut
            dsp += cost.dsp * mult
            ff += cost.ff * mult
            lut += cost.lut * mult

        def expr_ops(e, mult):
            for _p, n in N.walk(e):
                if isinstance(n, N.Binary):
                    add(self.costs.op(n.op, self.is_float(n)), mult)
                elif isinstance(n, N.Unary) and n.op == "-":
                    add(self.costs.op("-", self.is_float(n)), mult)
                elif isinstance(n, N.ArrayRef):
                    add(self.costs.mem, mult)
                    # index expressions are walked as part of this subtree

        def visit(stmts, mult):
            for s in stmts:
                if isinstance(s, N.For):
                    sh = self.shape(s)
                    visit(list(s.body.stmts), mult * max(1, sh.factor))
                elif isinstance(s, N.If):
                    expr_ops(s.cond, mult)
                    visit(list(s.then.stmts), mult)
                    if s.orelse:
                        visit(list(s.orelse.stmts), mult)
                elif isinstance(s, N.Block):
                    visit(list(s.stmts), mult)
                elif isinstance(s, N.Assign):
                    expr_ops(s.value, mult)
                    if s.op != "=":
                        fl = self.is_float(s.value) or self.is_float(s.target)
                        add(self.costs.op(s.op[0], fl), mult)
                    if isinstance(s.target, N.ArrayRef):
                        add(self.costs.mem, mult)
                        for idx in s.target.indices:
                            expr_ops(idx, mult)
                elif isinstance(s, N.VarDecl) and s.init is not None:
                    expr_ops(s.init, mult)
                elif isinstance(s, N.ExprStmt):
                    expr_ops(s.expr, mult)
                elif isinstance(s, N.Return) and s.value is not None:
                    expr_ops(s.value, mult)

        for fn in self.ast.functions:
            visit(list(fn.body.stmts), 1)

        widths = dict(N.INT_WIDTHS, float=32, double=64)
        for info in self.meta.arrays:
            parts = self.parts.get(info.name, {})
            if any(p[0] == "complete" for p in parts.values()):
                elems = 1
                for d in info.dims:
                    elems *= d if d else 1
                ff += elems * widths.get(info.element_type, 32)
        return dsp, ff, lut

    def run(self) -> QoRReport:
        total = 0
        for fn in self.ast.functions:
            total += max(1, self.region_sequence(fn.body.stmts))
        dsp, ff, lut = self.resources()
        return _make_report(total, dsp, ff, lut, self.device, self.per_loop)


def estimate(ast: N.Ast, device: DeviceProfile = ZCU106,
             costs: OpCostTable = DEFAULT_COSTS) -> QoRReport:
    """Closed-form latency/resource estimate for a design with attached pragmas.

    Unknown trip counts contribute a single iteration to latency; the tuner
    never unrolls such loops, and absolute numbers for them are not claimed.
    """
    return _Estimator(ast, device, costs).run()


# ---------------------------------------------------------------------------
# Reference scheduler (oracle)


@dataclass
class ScheduleTrace:
    """Per-cycle issued memory ops: cycle -> [(kind, array, bank)]."""

    cycles: Dict[int, List[Tuple[str, str, Tuple]]] = field(default_factory=dict)
    ports_per_bank: int = 2

    def record(self, cycle: int, kind: str, array: str, bank: Tuple):
        self.cycles.setdefault(cycle, []).append((kind, array, bank))

    def max_bank_pressure(self) -> int:
        worst = 0
        for ops in self.cycles.values():
            seen: Dict[Tuple, int] = {}
            for _kind, array, bank in ops:
                key = (array, bank)
                seen[key] = seen.get(key, 0) + 1
            if seen:
                worst = max(worst, max(seen.values()))
        return worst


class _Scheduler(_Analysis):
    def __init__(self, ast, device, costs):
        super().__init__(ast, device, costs)
        self.scalar_ready: Dict[str, int] = {}
        self.elem_ready: Dict[Tuple, int] = {}
        self.port_busy: Dict[Tuple, Dict[int, int]] = {}
        self.vals: Dict[str, Optional[int]] = {}
        self.trace = ScheduleTrace(ports_per_bank=device.bram_ports_per_bank)
        self.end_max = 0

    # -- memory geometry -------------------------------------------------

    def _bank_of(self, name: str, idx_vals: List[Optional[int]]) -> Optional[Tuple]:
        info = self.meta.array(name)
        parts = self.parts.get(name, {})
        if info is None:
            return ()
        bank = []
        for d in range(info.rank):
            ptype, factor = parts.get(d, (None, None))
            v = idx_vals[d] if d < len(idx_vals) else None
            if ptype == "complete":
                return None  # registers: no port limit
            if ptype == "cyclic" and factor:
                bank.append((v % factor) if v is not None else 0)
            elif ptype == "block" and factor:
                extent = info.dims[d] or factor
                bank.append((v // max(1, math.ceil(extent / factor)))
                            if v is not None else 0)
        return tuple(bank)

    def _issue_mem(self, kind: str, name: str, bank: Optional[Tuple],
                   ready: int) -> int:
        """Find the earliest cycle >= ready with a free port; occupy it."""
        if bank is None:
            return ready  # register file
        key = (name, bank)
        busy = self.port_busy.setdefault(key, {})
        t = ready
        while busy.get(t, 0) >= self.device.bram_ports_per_bank:
            t += 1
        busy[t] = busy.get(t, 0) + 1
        self.trace.record(t, kind, name, bank)
        return t

    # -- expressions -------------------------------------------------------

    def eval_val(self, e: N.Expr) -> Optional[int]:
        if isinstance(e, N.IntLit):
            return e.value
        if isinstance(e, N.Ident):
            return self.vals.get(e.name)
        if isinstance(e, N.Unary) and e.op == "-":
            v = self.eval_val(e.operand)
            return -v if v is not None else None
        if isinstance(e, N.Binary):
            l, r = self.eval_val(e.left), self.eval_val(e.right)
            if l is None or r is None:
                return None
            try:
                return {"+": l + r, "-": l - r, "*": l * r,
                        "/": l // r if r else None,
                        "%": l % r if r else None}.get(e.op)
            except ZeroDivisionError:
                return None
        return None

    def sched_expr(self, e: N.Expr, floor: int) -> int:
        """Schedule an expression; returns the cycle its value is ready."""
        if isinstance(e, (N.IntLit, N.FloatLit)):
            return floor
        if isinstance(e, N.Ident):
            return max(floor, self.scalar_ready.get(e.name, 0))
        if isinstance(e, N.ArrayRef):
            idx_ready = floor
            idx_vals = []
            for i in e.indices:
                idx_ready = max(idx_ready, self.sched_expr(i, floor))
                idx_vals.append(self.eval_val(i))
            key = (e.name, tuple(idx_vals))
            dep = max(idx_ready, self.elem_ready.get(key, 0))
            issue = self._issue_mem("load", e.name, self._bank_of(e.name, idx_vals),
                                    dep)
            done = issue + self.costs.mem.latency
            self.end_max = max(self.end_max, done)
            return done
        if isinstance(e, N.Unary):
            inner = self.sched_expr(e.operand, floor)
            if e.op in ("*", "&", "!"):
                return inner
            return inner + self.costs.op("-", self.is_float(e)).latency
        if isinstance(e, N.Binary):
            l = self.sched_expr(e.left, floor)
            r = self.sched_expr(e.right, floor)
            done = max(l, r) + self.costs.op(e.op, self.is_float(e)).latency
            self.end_max = max(self.end_max, done)
            return done
        if isinstance(e, N.Call):
            args = max((self.sched_expr(a, floor) for a in e.args), default=floor)
            done = args + self.costs.op("*", True).latency
            self.end_max = max(self.end_max, done)
            return done
        return floor

    # -- statements ----------------------------------------------------------

    def sched_stmt(self, s, floor: int) -> int:
        if isinstance(s, N.Assign):
            v_ready = self.sched_expr(s.value, floor)
            if isinstance(s.target, N.Ident):
                name = s.target.name
                if s.op != "=":
                    old = max(floor, self.scalar_ready.get(name, 0))
                    fl = self.is_float(s.value) or self.is_float(s.target)
                    v_ready = max(v_ready, old) + self.costs.op(s.op[0], fl).latency
                    ov, nv = self.vals.get(name), self.eval_val(s.value)
                    self.vals[name] = (None if ov is None or nv is None else
                                       ov + nv if s.op == "+=" else
                                       ov - nv if s.op == "-=" else None)
                else:
                    self.vals[name] = self.eval_val(s.value)
                self.scalar_ready[name] = v_ready
                self.end_max = max(self.end_max, v_ready)
                return v_ready
            if isinstance(s.target, N.ArrayRef):
                idx_ready = floor
                idx_vals = []
                for i in s.target.indices:
                    idx_ready = max(idx_ready, self.sched_expr(i, floor))
                    idx_vals.append(self.eval_val(i))
                key = (s.target.name, tuple(idx_vals))
                bank = self._bank_of(s.target.name, idx_vals)
                if s.op != "=":
                    dep = max(idx_ready, self.elem_ready.get(key, 0))
                    issue = self._issue_mem("load", s.target.name, bank, dep)
                    old_ready = issue + self.costs.mem.latency
                    fl = self.is_float(s.value) or self.is_float(s.target)
                    v_ready = max(v_ready, old_ready) + \
                        self.costs.op(s.op[0], fl).latency
                st_dep = max(v_ready, idx_ready, self.elem_ready.get(key, 0))
                issue = self._issue_mem("store", s.target.name, bank, st_dep)
                done = issue + self.costs.mem.latency
                self.elem_ready[key] = done
                self.end_max = max(self.end_max, done)
                return done
            # pointer deref target: treat as scalar timing
            done = v_ready
            self.end_max = max(self.end_max, done)
            return done
        if isinstance(s, N.VarDecl):
            if s.init is not None:
                v_ready = self.sched_expr(s.init, floor)
                self.scalar_ready[s.name] = v_ready
                self.vals[s.name] = self.eval_val(s.init)
                self.end_max = max(self.end_max, v_ready)
                return v_ready
            return floor
        if isinstance(s, N.ExprStmt):
            return self.sched_expr(s.expr, floor)
        if isinstance(s, N.Return):
            return self.sched_expr(s.value, floor) if s.value is not None else floor
        if isinstance(s, N.If):
            c = self.sched_expr(s.cond, floor)
            c += self.costs.op("<", False).latency
            end = c
            for inner in s.then.stmts:
                end = max(end, self.sched_stmt(inner, c))
            if s.orelse:
                for inner in s.orelse.stmts:
                    end = max(end, self.sched_stmt(inner, c))
            return end
        if isinstance(s, N.Block):
            return self.region_sequence(list(s.stmts), floor)
        if isinstance(s, N.For):
            sh = self.shape(s)
            if sh.full:
                return self.exec_unrolled(s, floor)
            return self.exec_loop(s, floor)
        return floor

    # -- loops ------------------------------------------------------------

    def _iter_values(self, loop: N.For):
        b = loop_bounds(loop)
        if b is None:
            raise UnknownTripCount(
                "reference scheduling needs constant loop bounds")
        return list(range(b[0], b[1], b[2]))

    def _bind(self, loop: N.For, value: int):
        from .frontend.metadata import loop_index_var

        var = loop_index_var(loop)
        if var is not None:
            self.vals[var] = value
            self.scalar_ready[var] = 0

    def exec_unrolled(self, loop: N.For, floor: int) -> int:
        end = floor
        for v in self._iter_values(loop):
            self._bind(loop, v)
            for s in loop.body.stmts:
                end = max(end, self.sched_stmt(s, floor))
        return end

    def exec_loop(self, loop: N.For, start: int) -> int:
        sh = self.shape(loop)
        values = self._iter_values(loop)
        groups = [values[i:i + sh.factor] for i in range(0, len(values), sh.factor)]
        rolled_inner = self.rolled_loops(loop.body.stmts)

        if sh.pipelined and not rolled_inner:
            end_all = start
            for g, chunk in enumerate(groups):
                base = start + g
                for v in chunk:
                    self._bind(loop, v)
                    for s in loop.body.stmts:
                        end_all = max(end_all, self.sched_stmt(s, base))
            return max(end_all, start + len(groups))

        t = start
        prev_start = None
        for chunk in groups:
            iter_start = t if prev_start is None else max(t, prev_start + 1)
            end = iter_start
            for v in chunk:
                self._bind(loop, v)
                end = max(end, self.region_sequence(list(loop.body.stmts),
                                                    iter_start))
            prev_start = iter_start
            t = max(end, iter_start + 1)
        return t

    def region_sequence(self, stmts, start: int) -> int:
        t = start
        pending: List = []

        def flush(t0):
            end = t0
            for s in pending:
                end = max(end, self.sched_stmt(s, t0))
            pending.clear()
            return end

        for s in stmts:
            if isinstance(s, N.For) and not self.shape(s).full:
                t = flush(t)
                t = self.exec_loop(s, t)
            else:
                pending.append(s)
        return flush(t)

    def run(self) -> Tuple[int, ScheduleTrace]:
        t = 0
        for fn in self.ast.functions:
            t = self.region_sequence(list(fn.body.stmts), t)
        return max(1, t, self.end_max), self.trace


def simulate_schedule(ast: N.Ast, device: DeviceProfile = ZCU106,
                      costs: OpCostTable = DEFAULT_COSTS
                      ) -> Tuple[int, ScheduleTrace]:
    """Cycle-level list scheduling of the design; exact for the modeled machine.

    Raises UnknownTripCount when any loop bound is not a compile-time constant.
    """
    return _Scheduler(ast, device, costs).run()


# ---------------------------------------------------------------------------
# External tool adapter

_TOOL_LOCK = threading.Lock()

_DIALECTS = {}


def register_dialect(name: str, parser) -> None:
    _DIALECTS[name] = parser


def _parse_csv_report(text: str) -> Tuple[int, int, int, int]:
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 4:
            raise MalformedReport(f"expected 'latency,dsp,ff,lut', got {line!r}")
        try:
            lat, dsp, ff, lut = (int(float(p)) for p in parts[:4])
        except ValueError:
            continue  # header line
        return lat, dsp, ff, lut
    raise MalformedReport("no data row found in report")


register_dialect("csv", _parse_csv_report)


def parse_tool_report(text: str, dialect: str = "csv",
                      device: DeviceProfile = ZCU106) -> QoRReport:
    """Parse an external synthesis report into a QoRReport."""
    if dialect not in _DIALECTS:
        raise MalformedReport(f"unknown report dialect {dialect!r}")
    lat, dsp, ff, lut = _DIALECTS[dialect](text)
    return _make_report(lat, dsp, ff, lut, device)


def run_external_tool(source_path: str, device: DeviceProfile = ZCU106,
                      dialect: str = "csv",
                      cmd: Optional[str] = None) -> QoRReport:
    """Invoke the external HLS tool named by HLSFORGE_TOOL_CMD (or ``cmd``)
    on a source file and parse its report. Invocations are serialized."""
    template = cmd or os.environ.get("HLSFORGE_TOOL_CMD")
    if not template:
        raise MalformedReport("no external tool configured "
                              "(set HLSFORGE_TOOL_CMD or pass cmd=)")
    argv = [a.format(file=source_path, device=device.name)
            for a in shlex.split(template)]
    with _TOOL_LOCK:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=600)
    if proc.returncode != 0:
        raise MalformedReport(f"tool exited {proc.returncode}: {proc.stderr[:200]}")
    return parse_tool_report(proc.stdout, dialect, device)
