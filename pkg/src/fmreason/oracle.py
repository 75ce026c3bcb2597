"""Brute-force fault simulation and empirical verification.

This module is deliberately independent of the symbolic reasoning path: it
evaluates the model's concrete functions twice per sample (once with reported
values, once with intended values), classifies every wire's deviation, and
checks cause expressions against the enumerated behavior.

Boolean variables enumerate exhaustively (each wire has only four
reported/intended pairs), so Boolean verdicts are conclusive.  Real-valued
variables enumerate over a finite sample grid; sampling can refute a claim
but never prove it, so passing real-valued checks report ``UNREFUTED``.

Certain-cause checks restrict enumeration to intended-world states from which
the target deviation is reachable at all (for a commission the intended
output must be False, for an omission True); a guarantee is only meaningful
where the failure can occur, and an empty enumeration is reported as
``INCONCLUSIVE`` rather than as a pass.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .algebra import And, Expr, FALSE, Lit, Mode, TRUE, eval_expr, mode_of
from .catalogue import Premise
from .errors import OracleError, TypeCompatibilityError
from .model import (
    Component,
    Kind,
    Sign,
    SystemModel,
    ValueType,
    Variable,
    detect_loops,
    topological_components,
)

Value = Union[bool, float]
Pair = tuple[Value, Value]  # (reported, intended)


class Verdict(enum.Enum):
    CONFIRMED = "confirmed"      # exhaustive enumeration, no counterexample
    UNREFUTED = "unrefuted"      # sampled enumeration, no counterexample
    REFUTED = "refuted"          # counterexample found
    INCONCLUSIVE = "inconclusive"  # nothing to check (vacuous)

    @property
    def passed(self) -> bool:
        return self in (Verdict.CONFIRMED, Verdict.UNREFUTED)


@dataclass(frozen=True)
class VerdictReport:
    verdict: Verdict
    samples: int          # enumerated combinations
    checked: int          # samples that actually exercised the claim
    counterexample: Optional[dict[str, Pair]] = None

    def __bool__(self):
        return self.verdict.passed


@dataclass(frozen=True)
class FaultAssignment:
    """(reported, intended) value pairs for every boundary variable."""

    pairs: Mapping[str, Pair]

    def __post_init__(self):
        for name, (rep, intd) in self.pairs.items():
            mode_of(rep, intd)  # type-compatibility check

    def modes(self) -> dict[str, Mode]:
        return {name: mode_of(rep, intd) for name, (rep, intd) in self.pairs.items()}


# ---------------------------------------------------------------------------
# Concrete evaluation


def _eval_kind(comp: Component, args: Sequence[Value]) -> Value:
    kind = comp.kind
    if kind is Kind.AND:
        return bool(args[0] and args[1])
    if kind is Kind.OR:
        return bool(args[0] or args[1])
    if kind is Kind.NOT:
        return not args[0]
    if kind is Kind.ADD:
        return args[0] + args[1]
    if kind is Kind.SUB:
        return args[0] - args[1]
    if kind is Kind.AVG:
        return (args[0] + args[1]) / 2.0
    if kind is Kind.MUL:
        return args[0] * args[1]
    if kind is Kind.LIM:
        x, lo, hi = args
        return min(hi, max(lo, x))
    if kind is Kind.INV:
        if args[0] == 0:
            raise OracleError(f"component {comp.name!r}: inverse of 0")
        return 1.0 / args[0]
    if kind is Kind.ABS:
        return abs(args[0])
    if kind is Kind.GCOM:
        return args[0] > args[1]
    if kind is Kind.LCOM:
        return args[0] < args[1]
    if kind is Kind.KOON:
        return sum(1 for a in args if a) >= comp.attrs.k
    if kind is Kind.DNF:
        K = comp.attrs.K
        return any(all(args[l * K + k] for k in range(K)) for l in range(comp.attrs.L))
    if kind is Kind.CNF:
        K = comp.attrs.K
        return all(any(args[l * K + k] for k in range(K)) for l in range(comp.attrs.L))
    raise OracleError(
        f"component {comp.name!r}: {kind.value} declares behavior only; it cannot be simulated")


class _Simulator:
    """One validated, loop-free model prepared for repeated evaluation."""

    def __init__(self, model: SystemModel):
        if detect_loops(model):
            raise OracleError("simulation needs a loop-free model; break loops first")
        self.model = model
        self.order = topological_components(model)
        self.boundary = model.boundary_variables()

    def world(self, values: dict[str, Value]) -> dict[str, Value]:
        out = dict(values)
        for comp in self.order:
            out[comp.output] = _eval_kind(comp, [out[a] for a in comp.args])
        return out

    def run(self, pairs: Mapping[str, Pair]) -> dict[str, Mode]:
        missing = [v for v in self.boundary if v not in pairs]
        if missing:
            raise OracleError(f"assignment misses boundary variables: {missing}")
        reported = self.world({n: p[0] for n, p in pairs.items()})
        intended = self.world({n: p[1] for n, p in pairs.items()})
        return {name: mode_of(reported[name], intended[name]) for name in reported}


def simulate(model: SystemModel, assignment: Union[FaultAssignment, Mapping[str, Pair]],
             enforce_certain: bool = True) -> dict[str, Mode]:
    """Failure mode of every wire under one concrete fault assignment.

    ``enforce_certain=False`` permits deviated values on certain variables,
    for counterfactual probes that are not fault claims.
    """
    pairs = assignment.pairs if isinstance(assignment, FaultAssignment) else assignment
    if enforce_certain:
        for name, (rep, intd) in pairs.items():
            var = model.var_map.get(name)
            if var is not None and var.certain and rep != intd:
                raise OracleError(f"certain variable {name!r} must have reported == intended")
    return _Simulator(model).run(pairs)


# ---------------------------------------------------------------------------
# Sample grids


@dataclass(frozen=True)
class SampleGrid:
    """Finite surrogate for the real line: intended anchors and deviation
    magnitudes applied in each direction."""

    name: str
    intended: tuple[float, ...]
    deltas: tuple[float, ...]


GRID_A = SampleGrid("grid-a", (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0), (0.25, 1.0, 3.0))
GRID_B = SampleGrid("grid-b", (-3.0, -1.5, -0.7, 0.0, 0.7, 1.5, 3.0), (0.5, 1.5, 2.0))
GRID_C = SampleGrid("grid-c", (-2.5, -1.0, -0.25, 0.0, 0.25, 1.0, 2.5), (0.25, 1.0, 4.0))
SAMPLE_GRIDS = (GRID_A, GRID_B, GRID_C)

_BOOL_PAIRS: dict[Optional[Mode], tuple[Pair, ...]] = {
    Mode.MATCH: ((False, False), (True, True)),
    Mode.COMMISSION: ((True, False),),
    Mode.OMISSION: ((False, True),),
    None: ((False, False), (False, True), (True, False), (True, True)),
}


def _real_pairs(grid: SampleGrid, mode: Optional[Mode]) -> list[Pair]:
    if mode is Mode.MATCH:
        return [(v, v) for v in grid.intended]
    if mode is Mode.HIGH:
        return [(v + d, v) for v in grid.intended for d in grid.deltas]
    if mode is Mode.LOW:
        return [(v - d, v) for v in grid.intended for d in grid.deltas]
    if mode is None:
        return (_real_pairs(grid, Mode.MATCH) + _real_pairs(grid, Mode.HIGH)
                + _real_pairs(grid, Mode.LOW))
    raise TypeCompatibilityError(f"mode {mode.value!r} is not a real-valued mode")


def _sign_ok(value: float, sign: Sign) -> bool:
    if sign is Sign.POS:
        return value > 0
    if sign is Sign.NEG:
        return value < 0
    return value == 0


def _premise_filter(var: str, premises: Iterable[Premise]):
    checks = []
    for p in premises:
        if p.var != var:
            continue
        if p.claim == "sign_stable":
            s = Sign(p.value)
            checks.append(lambda rep, intd, s=s: _sign_ok(rep, s) and _sign_ok(intd, s))
        elif p.claim == "reported_sign":
            s = Sign(p.value)
            checks.append(lambda rep, intd, s=s: _sign_ok(rep, s))
        elif p.claim == "intended_nonzero":
            checks.append(lambda rep, intd: intd != 0)
    return checks


def _pair_options(var: Variable, mode: Optional[Mode], grid: SampleGrid,
                  premises: Iterable[Premise], no_zero_cross: bool) -> list[Pair]:
    if var.certain and mode not in (None, Mode.MATCH):
        return []  # a fault-free variable cannot deviate: vacuous claim
    if var.vtype is ValueType.BOOL:
        if var.certain:
            pinned = var.know.reported if var.know.reported is not None else var.know.intended
            pairs = [(pinned, pinned)] if pinned is not None else list(_BOOL_PAIRS[Mode.MATCH])
        else:
            pairs = list(_BOOL_PAIRS[mode])
        return pairs
    if var.certain:
        pinned = var.know.reported if var.know.reported is not None else var.know.intended
        pairs = [(pinned, pinned)] if pinned is not None else [(v, v) for v in grid.intended]
    else:
        pairs = _real_pairs(grid, mode)
    checks = _premise_filter(var.name, premises)
    if no_zero_cross:
        checks.append(lambda rep, intd: rep != 0 and intd != 0 and (rep > 0) == (intd > 0))
    if checks:
        pairs = [p for p in pairs if all(c(p[0], p[1]) for c in checks)]
    return pairs


def _model_needs_zero_guard(model: SystemModel) -> bool:
    return any(c.kind is Kind.INV for c in model.components)


# ---------------------------------------------------------------------------
# Kernel lowering for all-Boolean models


def _lower_bool(model: SystemModel, boundary: Sequence[str]):
    """Lower a Boolean model to binary AND/OR/NOT ops over slots; returns
    (ops list, slot index per variable) or None when not expressible."""
    slot = {name: i for i, name in enumerate(boundary)}
    ops: list[tuple[int, int, int]] = []

    def emit(op: int, a: int, b: int = 0) -> int:
        ops.append((op, a, b))
        return len(boundary) + len(ops) - 1

    def fold(op: int, slots: list[int]) -> int:
        acc = slots[0]
        for s in slots[1:]:
            acc = emit(op, acc, s)
        return acc

    for comp in topological_components(model):
        args = [slot[a] for a in comp.args]
        kind = comp.kind
        if kind is Kind.AND:
            out = fold(_kernels.OP_AND, args)
        elif kind is Kind.OR:
            out = fold(_kernels.OP_OR, args)
        elif kind is Kind.NOT:
            out = emit(_kernels.OP_NOT, args[0])
        elif kind is Kind.KOON:
            k = comp.attrs.k
            combos = [fold(_kernels.OP_AND, list(c)) for c in itertools.combinations(args, k)]
            out = fold(_kernels.OP_OR, combos)
        elif kind is Kind.DNF:
            K = comp.attrs.K
            rows = [fold(_kernels.OP_AND, args[l * K:(l + 1) * K]) for l in range(comp.attrs.L)]
            out = fold(_kernels.OP_OR, rows)
        elif kind is Kind.CNF:
            K = comp.attrs.K
            rows = [fold(_kernels.OP_OR, args[l * K:(l + 1) * K]) for l in range(comp.attrs.L)]
            out = fold(_kernels.OP_AND, rows)
        else:
            return None
        slot[comp.output] = out
    return ops, slot


def _encode_options(options: Sequence[Sequence[Pair]]):
    flat: list[int] = []
    off = [0]
    for pairs in options:
        flat.extend((int(rep) << 1) | int(intd) for rep, intd in pairs)
        off.append(len(flat))
    return (np.asarray(flat, dtype=np.int8),
            np.asarray(off, dtype=np.int32))


def _encode_terms(expr: Expr, var_slot: Mapping[str, int]):
    """Flatten a DNF expression into kernel literal arrays, or None when the
    expression is not term-shaped."""
    from .algebra import dnf_term_list

    terms = dnf_term_list(expr)
    lit_vars: list[int] = []
    lit_modes: list[int] = []
    off = [0]
    for term in terms:
        for lit in term:
            lit_vars.append(var_slot[lit.var])
            lit_modes.append(_kernels.MODE_CODE[lit.mode.value])
        off.append(len(lit_vars))
    return (np.asarray(lit_vars, dtype=np.int32),
            np.asarray(lit_modes, dtype=np.int8),
            np.asarray(off, dtype=np.int32))


def _decode_sample(lin: int, boundary: Sequence[str],
                   options: Sequence[Sequence[Pair]]) -> dict[str, Pair]:
    out = {}
    for name, pairs in zip(boundary, options):
        lin, r = divmod(lin, len(pairs))
        out[name] = pairs[r]
    return out


def _all_boolean(model: SystemModel, names: Iterable[str]) -> bool:
    return all(model.variable(n).vtype is ValueType.BOOL for n in names)


# ---------------------------------------------------------------------------
# Verification


def _as_term(cause: Union[Expr, Iterable[Lit]]) -> tuple[Lit, ...]:
    if isinstance(cause, Lit):
        return (cause,)
    if isinstance(cause, And):
        if not all(isinstance(a, Lit) for a in cause.args):
            raise OracleError("a certain-cause term must be a conjunction of literals")
        return tuple(cause.args)
    term = tuple(cause)
    if not all(isinstance(l, Lit) for l in term):
        raise OracleError("a certain-cause term must be a conjunction of literals")
    return term


def _required_intended(mode: Mode) -> Optional[bool]:
    # The intended-world output value from which this deviation departs.
    if mode is Mode.COMMISSION:
        return False
    if mode is Mode.OMISSION:
        return True
    return None


def verify_certain_cause(model: SystemModel, cause_term, target: Lit,
                         grid: SampleGrid = GRID_A,
                         premises: Iterable[Premise] = (),
                         force_python: bool = False) -> VerdictReport:
    """Check a guarantee: with the term's variables deviating as stated and
    every other boundary variable fault-free, the target deviation must follow
    in every enumerated sample (that can reach it at all)."""
    term = _as_term(cause_term)
    sim = _Simulator(model)
    boundary = sim.boundary
    term_modes = {l.var: l.mode for l in term}
    unknown = [v for v in term_modes if v not in boundary]
    if unknown:
        raise OracleError(f"cause term mentions non-boundary variables: {unknown}")
    premises = tuple(premises)
    guard = _model_needs_zero_guard(model)
    options = [
        _pair_options(model.variable(name), term_modes.get(name, Mode.MATCH),
                      grid, premises, guard)
        for name in boundary
    ]
    exhaustive = _all_boolean(model, boundary)
    required = _required_intended(target.mode)

    ops_slots = _lower_bool(model, boundary) if exhaustive and not force_python else None
    if ops_slots is not None:
        ops, slot = ops_slots
        opt_flat, opt_off = _encode_options(options)
        total, kept, bad, first_bad = _kernels.sweep_certain(
            np.asarray(ops, dtype=np.int32).reshape(len(ops), 3),
            len(boundary), opt_flat, opt_off, slot[target.var],
            _kernels.MODE_CODE[target.mode.value],
            -1 if required is None else int(required))
        counter = _decode_sample(first_bad, boundary, options) if bad else None
    else:
        total = kept = bad = 0
        counter = None
        for combo in itertools.product(*options):
            total += 1
            pairs = dict(zip(boundary, combo))
            intended_world = sim.world({n: p[1] for n, p in pairs.items()})
            if required is not None and intended_world[target.var] != required:
                continue
            kept += 1
            modes = sim.run(pairs)
            if modes[target.var] is not target.mode:
                bad += 1
                if counter is None:
                    counter = pairs
        if not options or any(len(o) == 0 for o in options):
            total = 0

    if total == 0 or kept == 0:
        return VerdictReport(Verdict.INCONCLUSIVE, total, 0)
    if bad:
        return VerdictReport(Verdict.REFUTED, total, kept, counter)
    return VerdictReport(Verdict.CONFIRMED if exhaustive else Verdict.UNREFUTED, total, kept)


def verify_minimum_conditions(model: SystemModel, expr: Expr, target: Lit,
                              grid: SampleGrid = GRID_A,
                              premises: Iterable[Premise] = (),
                              force_python: bool = False) -> VerdictReport:
    """Check completeness: every enumerated fault assignment that produces the
    target deviation must satisfy ``expr``."""
    sim = _Simulator(model)
    boundary = sim.boundary
    premises = tuple(premises)
    guard = _model_needs_zero_guard(model)
    options = [
        _pair_options(model.variable(name), None, grid, premises, guard)
        for name in boundary
    ]
    exhaustive = _all_boolean(model, boundary)

    if expr == TRUE:
        # Trivially complete; count the hits for the report.
        expr_check = None
    elif expr == FALSE:
        expr_check = FALSE
    else:
        expr_check = expr

    ops_slots = _lower_bool(model, boundary) if exhaustive and not force_python else None
    encoded = None
    if ops_slots is not None and expr_check is not None and expr_check != FALSE:
        try:
            encoded = _encode_terms(expr_check, {n: i for i, n in enumerate(boundary)})
        except (ValueError, KeyError):
            encoded = None  # not DNF-shaped or mentions non-boundary wires

    if ops_slots is not None and (expr_check is None or expr_check == FALSE or encoded is not None):
        ops, slot = ops_slots
        opt_flat, opt_off = _encode_options(options)
        if expr_check is None:
            lit_vars = np.zeros(0, dtype=np.int32)
            lit_modes = np.zeros(0, dtype=np.int8)
            term_off = np.asarray([0, 0], dtype=np.int32)  # one empty term: always true
        elif expr_check == FALSE:
            lit_vars = np.zeros(0, dtype=np.int32)
            lit_modes = np.zeros(0, dtype=np.int8)
            term_off = np.asarray([0], dtype=np.int32)  # no terms: never true
        else:
            lit_vars, lit_modes, term_off = encoded
        total, hits, escapes, first_escape = _kernels.sweep_minimum(
            np.asarray(ops, dtype=np.int32).reshape(len(ops), 3),
            len(boundary), opt_flat, opt_off, slot[target.var],
            _kernels.MODE_CODE[target.mode.value], lit_vars, lit_modes, term_off)
        counter = _decode_sample(first_escape, boundary, options) if escapes else None
    else:
        total = hits = escapes = 0
        counter = None
        for combo in itertools.product(*options):
            total += 1
            pairs = dict(zip(boundary, combo))
            modes = sim.run(pairs)
            if modes[target.var] is not target.mode:
                continue
            hits += 1
            if expr_check is None:
                continue
            satisfied = False if expr_check == FALSE else eval_expr(expr_check, modes)
            if not satisfied:
                escapes += 1
                if counter is None:
                    counter = pairs
        if not options or any(len(o) == 0 for o in options):
            total = 0

    if total == 0 or hits == 0:
        return VerdictReport(Verdict.INCONCLUSIVE, total, 0)
    if escapes:
        return VerdictReport(Verdict.REFUTED, total, hits, counter)
    return VerdictReport(Verdict.CONFIRMED if exhaustive else Verdict.UNREFUTED, total, hits)


# ---------------------------------------------------------------------------
# Failure truth tables


@dataclass(frozen=True)
class TruthTable:
    kind: Kind
    inputs: tuple[str, ...]
    output: str
    rows: tuple[tuple[tuple[Value, Value, Mode], ...], ...]
    # Each row: one triple (reported, intended, mode) per input, then the output.


def truth_table(kind: Kind, arity: Optional[int] = None, attrs=None) -> TruthTable:
    """Exhaustive failure table of one Boolean component, rows in canonical
    (reported, intended) pair order, least-significant input last."""
    from .model import Attrs, kind_arg_type

    if kind_arg_type(kind) is not ValueType.BOOL or (
            kind in (Kind.GCOM, Kind.LCOM)):
        raise OracleError(f"{kind.value} has no Boolean failure truth table")
    default_arity = {Kind.AND: 2, Kind.OR: 2, Kind.NOT: 1}
    n = arity if arity is not None else default_arity.get(kind)
    if n is None:
        n = len(attrs.signs) if attrs and attrs.signs else None
    if kind is Kind.KOON and arity is None:
        raise OracleError("KooN needs an explicit arity")
    if n is None or not 1 <= n <= 4:
        raise OracleError("truth tables support arity 1 to 4")
    names = [f"x{i}" for i in range(1, n + 1)] if n > 1 else ["x"]
    comp = Component(name="g", kind=kind, inputs=tuple(names), outputs=("y",),
                     attrs=attrs if attrs is not None else Attrs())

    pair_seq = _BOOL_PAIRS[None]
    rows = []
    for combo in itertools.product(pair_seq, repeat=n):
        rep_out = _eval_kind(comp, [p[0] for p in combo])
        int_out = _eval_kind(comp, [p[1] for p in combo])
        cells = tuple((p[0], p[1], mode_of(p[0], p[1])) for p in combo)
        cells += ((rep_out, int_out, mode_of(rep_out, int_out)),)
        rows.append(cells)
    return TruthTable(kind=kind, inputs=tuple(names), output="y", rows=tuple(rows))


def render_truth_table(table: TruthTable) -> str:
    """Fixed-width text rendering used for golden-file comparison."""
    names = list(table.inputs) + [table.output]
    headers = ["No"]
    for n in names:
        headers += [f"{n}.rep", f"{n}.int", f"{n}.fm"]
    widths = [max(len(h), 2) for h in headers]

    def fmt_cell(v) -> str:
        if isinstance(v, bool):
            return "T" if v else "F"
        if isinstance(v, Mode):
            return v.value
        return str(v)

    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for i, row in enumerate(table.rows, start=1):
        cells = [str(i)]
        for triple in row:
            cells += [fmt_cell(x) for x in triple]
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
    return "\n".join(lines) + "\n"
