"""Failure-mode algebra.

A variable's deviation from its intended value is abstracted into one of five
failure modes:

    h  -- reported value too high            (real-valued variables)
    l  -- reported value too low             (real-valued variables)
    t  -- reported True, intended False      (Boolean variables; commission)
    f  -- reported False, intended True      (Boolean variables; omission)
    m  -- reported equals intended           (no fault; either type)

Causes of failure are expressed as Boolean formulas over ``variable = mode``
literals.  This module defines the mode arithmetic (classification, direction
inversion), the expression nodes, and the rewriting operations every other
module computes with: contradiction/wildcard simplification, disjunctive
normalization, and the structural dual.

Everything here is immutable and pure; values can be shared freely across
threads and concurrent analyses.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Union

from .errors import DnfCapError, TypeCompatibilityError

DEFAULT_DNF_CAP = 100_000


class Mode(enum.Enum):
    """One failure mode of a single variable."""

    HIGH = "h"
    LOW = "l"
    COMMISSION = "t"
    OMISSION = "f"
    MATCH = "m"

    def __repr__(self):
        return f"Mode.{self.name}"

    def __str__(self):
        return self.value


#: Modes assignable to real-valued variables.
REAL_MODES = frozenset({Mode.HIGH, Mode.LOW, Mode.MATCH})
#: Modes assignable to Boolean variables.
BOOL_MODES = frozenset({Mode.COMMISSION, Mode.OMISSION, Mode.MATCH})

_INVERT = {
    Mode.HIGH: Mode.LOW,
    Mode.LOW: Mode.HIGH,
    Mode.COMMISSION: Mode.OMISSION,
    Mode.OMISSION: Mode.COMMISSION,
    Mode.MATCH: Mode.MATCH,
}

MODE_BY_LETTER = {m.value: m for m in Mode}


def invert(mode: Mode) -> Mode:
    """Flip the direction of a failure mode: h<->l, t<->f, m->m."""
    return _INVERT[mode]


def _is_bool(value) -> bool:
    return isinstance(value, bool)


def _is_real(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def mode_of(reported, intended) -> Mode:
    """Classify the deviation between a reported and an intended value.

    Both values must be of the same type (real or Boolean); raises
    TypeCompatibilityError otherwise.
    """
    if _is_bool(reported) and _is_bool(intended):
        if reported == intended:
            return Mode.MATCH
        return Mode.COMMISSION if reported else Mode.OMISSION
    if _is_real(reported) and _is_real(intended):
        if reported > intended:
            return Mode.HIGH
        if reported < intended:
            return Mode.LOW
        return Mode.MATCH
    raise TypeCompatibilityError(
        f"cannot compare values of mixed type: {reported!r} vs {intended!r}"
    )


class Direction(enum.Enum):
    """Whether a fault keeps or flips direction when it crosses a function."""

    SAME = "same"
    OPPOSITE = "opposite"

    def compose(self, other: "Direction") -> "Direction":
        # Two consecutive flips cancel out.
        if self is other:
            return Direction.SAME
        return Direction.OPPOSITE

    def apply(self, mode: Mode) -> Mode:
        return mode if self is Direction.SAME else invert(mode)


def direction_of_sign(s: float) -> Direction:
    """Direction induced by a multiplicative factor of sign ``s``.

    Negative factors flip the fault direction; zero and positive factors keep
    it.
    """
    return Direction.OPPOSITE if s < 0 else Direction.SAME


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class Lit:
    """A single ``variable = mode`` statement."""

    var: str
    mode: Mode

    def __str__(self):
        return f"{self.var}={self.mode.value}"


@dataclass(frozen=True)
class And:
    args: tuple["Expr", ...]

    def __str__(self):
        return "(" + " & ".join(str(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Or:
    args: tuple["Expr", ...]

    def __str__(self):
        return "(" + " | ".join(str(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


TRUE = Const(True)
FALSE = Const(False)

Expr = Union[Lit, And, Or, Const]


def sort_key(expr: Expr):
    """Total deterministic order over expressions (literals first)."""
    if isinstance(expr, Lit):
        return (0, expr.var, expr.mode.value)
    if isinstance(expr, Const):
        return (1, "", "t" if expr.value else "f")
    if isinstance(expr, And):
        return (2, tuple(sort_key(a) for a in expr.args))
    return (3, tuple(sort_key(a) for a in expr.args))


def _gather(parts: Iterable[Expr], cls) -> list[Expr]:
    out: list[Expr] = []
    for p in parts:
        if isinstance(p, cls):
            out.extend(p.args)
        else:
            out.append(p)
    return out


def _dedupe_sorted(parts: list[Expr]) -> tuple[Expr, ...]:
    parts = sorted(parts, key=sort_key)
    out: list[Expr] = []
    for p in parts:
        if not out or out[-1] != p:
            out.append(p)
    return tuple(out)


def conj(*parts: Expr) -> Expr:
    """Conjunction with flattening, constant folding, dedup, canonical order."""
    flat = _gather(parts, And)
    if any(p == FALSE for p in flat):
        return FALSE
    flat = [p for p in flat if p != TRUE]
    args = _dedupe_sorted(flat)
    if not args:
        return TRUE
    if len(args) == 1:
        return args[0]
    return And(args)


def disj(*parts: Expr) -> Expr:
    """Disjunction with flattening, constant folding, dedup, canonical order."""
    flat = _gather(parts, Or)
    if any(p == TRUE for p in flat):
        return TRUE
    flat = [p for p in flat if p != FALSE]
    args = _dedupe_sorted(flat)
    if not args:
        return FALSE
    if len(args) == 1:
        return args[0]
    return Or(args)


def any_mode(var: str, real: bool) -> Expr:
    """The always-true "any mode" statement, spelled out as a disjunction."""
    family = (Mode.HIGH, Mode.MATCH, Mode.LOW) if real else (Mode.COMMISSION, Mode.MATCH, Mode.OMISSION)
    return disj(*(Lit(var, m) for m in family))


def literals(expr: Expr) -> Iterator[Lit]:
    """Yield every literal occurrence (with repeats across branches)."""
    if isinstance(expr, Lit):
        yield expr
    elif isinstance(expr, (And, Or)):
        for a in expr.args:
            yield from literals(a)


def variables(expr: Expr) -> frozenset[str]:
    return frozenset(l.var for l in literals(expr))


def map_literals(expr: Expr, fn: Callable[[Lit], Expr]) -> Expr:
    """Rebuild ``expr`` with every literal replaced by ``fn(literal)``."""
    if isinstance(expr, Lit):
        return fn(expr)
    if isinstance(expr, And):
        return conj(*(map_literals(a, fn) for a in expr.args))
    if isinstance(expr, Or):
        return disj(*(map_literals(a, fn) for a in expr.args))
    return expr


def eval_expr(expr: Expr, assignment: Mapping[str, Mode]) -> bool:
    """Evaluate under an assignment mapping each variable to exactly one mode.

    ``m`` is a first-class assignable mode: a literal ``x=m`` holds iff the
    assignment maps x to m.
    """
    if isinstance(expr, Lit):
        return assignment[expr.var] == expr.mode
    if isinstance(expr, And):
        return all(eval_expr(a, assignment) for a in expr.args)
    if isinstance(expr, Or):
        return any(eval_expr(a, assignment) for a in expr.args)
    return expr.value


_WILDCARD_FAMILIES = (REAL_MODES, BOOL_MODES)


def simplify(expr: Expr, ctx=None) -> Expr:
    """Rewrite ``expr`` preserving its value under every consistent assignment.

    A consistent assignment gives each variable exactly one mode (and forces
    variables that are known fault-free to m).  Rules applied:

    * a conjunction containing two different modes of one variable is false;
    * a disjunction containing a variable's entire mode family is true;
    * constants propagate, nesting is flattened, duplicates are dropped;
    * when ``ctx`` is given, literals it can decide are replaced by constants
      (``ctx`` needs a ``literal_status(lit) -> bool | None`` method; known
      fault-free variables resolve m-literals to true and the rest to false).
    """
    if isinstance(expr, Lit):
        if ctx is not None:
            status = ctx.literal_status(expr)
            if status is not None:
                return TRUE if status else FALSE
        return expr
    if isinstance(expr, Const):
        return expr

    args = [simplify(a, ctx) for a in expr.args]
    if isinstance(expr, And):
        out = conj(*args)
        if not isinstance(out, And):
            return out
        by_var: dict[str, set[Mode]] = {}
        for a in out.args:
            if isinstance(a, Lit):
                by_var.setdefault(a.var, set()).add(a.mode)
        if any(len(modes) > 1 for modes in by_var.values()):
            return FALSE
        return out

    out = disj(*args)
    if not isinstance(out, Or):
        return out
    by_var = {}
    for a in out.args:
        if isinstance(a, Lit):
            by_var.setdefault(a.var, set()).add(a.mode)
    for modes in by_var.values():
        if any(family <= modes for family in _WILDCARD_FAMILIES):
            return TRUE
    return out


def _consistent(term: frozenset[Lit]) -> bool:
    seen: dict[str, Mode] = {}
    for lit in term:
        if seen.setdefault(lit.var, lit.mode) != lit.mode:
            return False
    return True


def _dnf_terms(expr: Expr, cap: int) -> set[frozenset[Lit]]:
    if isinstance(expr, Lit):
        return {frozenset((expr,))}
    if isinstance(expr, Const):
        return {frozenset()} if expr.value else set()
    if isinstance(expr, Or):
        terms: set[frozenset[Lit]] = set()
        for a in expr.args:
            terms |= _dnf_terms(a, cap)
            if len(terms) > cap:
                raise DnfCapError(cap, len(terms))
        return terms
    # And: distribute over the children's term sets.
    acc: set[frozenset[Lit]] = {frozenset()}
    for a in expr.args:
        child = _dnf_terms(a, cap)
        nxt: set[frozenset[Lit]] = set()
        for left, right in itertools.product(acc, child):
            merged = left | right
            if _consistent(merged):
                nxt.add(merged)
            if len(nxt) > cap:
                raise DnfCapError(cap, len(nxt))
        acc = nxt
    return acc


def _absorb(terms: set[frozenset[Lit]]) -> list[frozenset[Lit]]:
    ordered = sorted(terms, key=lambda t: (len(t), sorted((l.var, l.mode.value) for l in t)))
    kept: list[frozenset[Lit]] = []
    for t in ordered:
        if not any(k <= t for k in kept):
            kept.append(t)
    return kept


def term_sort_key(term: Iterable[Lit]):
    lits = sorted(term, key=sort_key)
    return (len(lits), tuple(sort_key(l) for l in lits))


def to_dnf(expr: Expr, cap: int = DEFAULT_DNF_CAP) -> Expr:
    """Equivalent disjunction of conjunctions of literals.

    Contradictory terms are dropped, absorbed terms removed, literals and
    terms canonically ordered.  Raises DnfCapError instead of silently
    truncating when the term count passes ``cap``.
    """
    terms = _absorb(_dnf_terms(expr, cap))
    if not terms:
        return FALSE
    if terms == [frozenset()]:
        return TRUE
    return disj(*(conj(*t) for t in sorted(terms, key=term_sort_key)))


def dnf_term_list(expr: Expr) -> list[tuple[Lit, ...]]:
    """The terms of a DNF-shaped expression as sorted literal tuples."""
    if expr == FALSE:
        return []
    if expr == TRUE:
        return [()]
    parts = expr.args if isinstance(expr, Or) else (expr,)
    out = []
    for p in parts:
        if isinstance(p, Lit):
            out.append((p,))
        elif isinstance(p, And):
            out.append(tuple(sorted(p.args, key=sort_key)))
        else:
            raise ValueError(f"not in DNF shape: {expr}")
    return sorted(out, key=term_sort_key)


def dual(expr: Expr) -> Expr:
    """Swap conjunction/disjunction and flip every literal's direction."""
    if isinstance(expr, Lit):
        return Lit(expr.var, invert(expr.mode))
    if isinstance(expr, Const):
        return FALSE if expr.value else TRUE
    if isinstance(expr, And):
        return disj(*(dual(a) for a in expr.args))
    return conj(*(dual(a) for a in expr.args))


def normalize(expr: Expr, ctx=None, cap: int = DEFAULT_DNF_CAP) -> Expr:
    """Canonical form: simplify then normalize to sorted, absorbed DNF."""
    return to_dnf(simplify(expr, ctx), cap)
