"""Per-component failure models.

For every catalogue kind and requested output failure mode this module builds
the local cause expression over the component's own argument wires, under the
active reasoning policy:

* certain causes -- conjunctions of argument faults that are guaranteed to
  produce the output failure while every other argument stays fault-free;
* minimum conditions -- the weakest expression every fault assignment that
  produces the output failure must satisfy.

Some kinds admit no certain causes (absolute value; multiplication of two
suspicious wires without sign knowledge).  Requesting certain causes there
falls back to the minimum conditions and marks the scenario ``weakened``.

Under the value-dependent policy, known signs and values sharpen the models:
a stably-signed multiplication regains direction information, and known
reported signs select a row of the value-dependent multiplication table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import (
    Expr,
    Lit,
    Mode,
    TRUE,
    conj,
    direction_of_sign,
    disj,
    invert,
    simplify,
)
from .errors import CatalogueError, UnreachableEffectError, UnsupportedEffectError
from .model import (
    CauseMode,
    Component,
    Kind,
    KnowledgeContext,
    Sign,
    ValuePolicy,
    ValueType,
    kind_output_type,
    sign_of_value,
)

_REAL_EFFECTS = frozenset({Mode.HIGH, Mode.LOW})
_BOOL_EFFECTS = frozenset({Mode.COMMISSION, Mode.OMISSION})

_SIGN_NUM = {Sign.NEG: -1.0, Sign.ZERO: 0.0, Sign.POS: 1.0}


@dataclass(frozen=True)
class Premise:
    """A value-world side condition a derived cause is contingent on."""

    var: str
    claim: str  # sign_stable | reported_sign | intended_nonzero |
    #             reported_value | intended_value | single_fault
    value: str = ""

    def __str__(self):
        if self.claim == "sign_stable":
            return f"sign({self.var}) stays {self.value}"
        if self.claim == "reported_sign":
            return f"reported {self.var} is {self.value}"
        if self.claim == "intended_nonzero":
            return f"intended {self.var} != 0"
        if self.claim == "single_fault":
            return f"at most one faulty factor (covers {self.var})"
        return f"{self.claim.replace('_', ' ')} of {self.var} is {self.value}"


@dataclass(frozen=True)
class FailureScenario:
    """{cause} kind {effect and premises}: what must have gone wrong at the
    arguments of one component, given the observed output failure."""

    kind: Kind
    effect: Lit
    cause: Expr
    premises: tuple[Premise, ...] = ()
    weakened: bool = False


def _check_effect(kind: Kind, mode: Mode) -> None:
    if kind_output_type(kind) is ValueType.BOOL:
        if mode not in _BOOL_EFFECTS:
            raise UnsupportedEffectError(
                f"{kind.value} has a Boolean output; effect mode {mode.value!r} is not applicable")
    elif mode not in _REAL_EFFECTS:
        raise UnsupportedEffectError(
            f"{kind.value} has a real output; effect mode {mode.value!r} is not applicable")


# ---------------------------------------------------------------------------
# Structural generators (usable standalone, with default argument names)


def _grid_names(L: int, K: int) -> list[str]:
    return [f"x{l}_{k}" for l in range(1, L + 1) for k in range(1, K + 1)]


def dnf_model(L: int, K: int, mode: Mode, cause_mode: CauseMode = CauseMode.CERTAIN,
              names: list[str] | None = None) -> Expr:
    """Failure model of an L-of-K-literal disjunctive normal form block.

    Certain causes mirror the block's own structure for commission and its
    dual for omission; minimum conditions are the flat same-direction
    disjunction over all literals.
    """
    _check_effect(Kind.DNF, mode)
    names = names if names is not None else _grid_names(L, K)
    if len(names) != L * K:
        raise CatalogueError(f"DNF({L},{K}) needs {L * K} argument names, got {len(names)}")
    rows = [names[l * K:(l + 1) * K] for l in range(L)]
    if cause_mode is CauseMode.MINIMUM:
        return disj(*(Lit(n, mode) for n in names))
    if mode is Mode.COMMISSION:
        return disj(*(conj(*(Lit(n, mode) for n in row)) for row in rows))
    return conj(*(disj(*(Lit(n, mode) for n in row)) for row in rows))


def cnf_model(L: int, K: int, mode: Mode, cause_mode: CauseMode = CauseMode.CERTAIN,
              names: list[str] | None = None) -> Expr:
    """Failure model of an L-clause, K-literal conjunctive normal form block."""
    _check_effect(Kind.CNF, mode)
    names = names if names is not None else _grid_names(L, K)
    if len(names) != L * K:
        raise CatalogueError(f"CNF({L},{K}) needs {L * K} argument names, got {len(names)}")
    rows = [names[l * K:(l + 1) * K] for l in range(L)]
    if cause_mode is CauseMode.MINIMUM:
        return disj(*(Lit(n, mode) for n in names))
    if mode is Mode.COMMISSION:
        return conj(*(disj(*(Lit(n, mode) for n in row)) for row in rows))
    return disj(*(conj(*(Lit(n, mode) for n in row)) for row in rows))


def koon_model(n: int, k: int, mode: Mode, cause_mode: CauseMode = CauseMode.CERTAIN,
               names: list[str] | None = None) -> Expr:
    """Failure model of a k-out-of-n voter.

    Commission at the output needs the commission of some k inputs; omission
    needs the omission of some n-k+1 inputs.
    """
    _check_effect(Kind.KOON, mode)
    if not 1 <= k <= n:
        raise CatalogueError(f"KooN needs 1 <= k <= n, got k={k}, n={n}")
    names = names if names is not None else [f"x{i}" for i in range(1, n + 1)]
    if len(names) != n:
        raise CatalogueError(f"KooN({k},{n}) needs {n} argument names, got {len(names)}")
    if cause_mode is CauseMode.MINIMUM:
        return disj(*(Lit(nm, mode) for nm in names))
    size = k if mode is Mode.COMMISSION else n - k + 1
    return disj(*(conj(*(Lit(nm, mode) for nm in combo))
                  for combo in itertools.combinations(names, size)))


def monotone_model(gradient_signs: list[Sign], mode: Mode,
                   names: list[str] | None = None) -> Expr:
    """Failure model of a function strictly monotonic in each argument.

    Each argument's fault direction follows the sign of the function's
    gradient in that argument; every single-argument fault is a certain cause,
    so certain causes and minimum conditions coincide.
    """
    if mode not in _REAL_EFFECTS:
        raise UnsupportedEffectError(
            f"monotone components have real outputs; effect mode {mode.value!r} is not applicable")
    if not gradient_signs:
        raise CatalogueError("a monotone component needs at least one argument")
    if any(s is Sign.ZERO for s in gradient_signs):
        raise CatalogueError("monotone gradient signs must be pos or neg")
    names = names if names is not None else [f"x{i}" for i in range(1, len(gradient_signs) + 1)]
    return disj(*(
        Lit(nm, direction_of_sign(_SIGN_NUM[s]).apply(mode))
        for nm, s in zip(names, gradient_signs)
    ))


def mul_certain_param(mode: Mode, param_sign: float | Sign, var: str = "x") -> Expr:
    """Multiplication by a fault-free factor of known sign.

    The input fault direction follows the factor's sign.  A zero factor pins
    the output, so a deviated output is unreachable.
    """
    if mode not in _REAL_EFFECTS:
        raise UnsupportedEffectError(
            f"Mul has a real output; effect mode {mode.value!r} is not applicable")
    s = _SIGN_NUM[param_sign] if isinstance(param_sign, Sign) else float(param_sign)
    if s == 0:
        raise UnreachableEffectError(
            "a zero fault-free factor forces the product to 0; the output cannot deviate")
    return Lit(var, direction_of_sign(s).apply(mode))


# ---------------------------------------------------------------------------
# Value-dependent multiplication of two suspicious wires.
#
# Keyed by (output mode, reported sign of arg 1, reported sign of arg 2).
# Each entry: the cause terms as ((arg index, mode), ...) tuples, plus whether
# the source row also lists intended-value-zero escapes.  Those escapes are
# carried as premises on the intended values rather than folded into the
# expression (a mode literal cannot state "intended value is zero").

_N, _Z, _P = Sign.NEG, Sign.ZERO, Sign.POS
_H, _L = Mode.HIGH, Mode.LOW

MUL_VALUE_TABLE: dict[tuple[Mode, Sign, Sign], tuple[tuple[tuple[tuple[int, Mode], ...], ...], bool]] = {
    (_L, _N, _N): ((((0, _H),), ((1, _H),), ((0, _L), (1, _L))), False),
    (_L, _N, _Z): ((((1, _H),), ((0, _L), (1, _L))), False),
    (_L, _N, _P): ((((0, _L),), ((1, _H),)), True),
    (_L, _Z, _N): ((((0, _H),), ((0, _L), (1, _L))), False),
    (_L, _Z, _Z): ((((0, _H), (1, _H)), ((0, _L), (1, _L))), False),
    (_L, _Z, _P): ((((0, _L),), ((0, _H), (1, _H))), False),
    (_L, _P, _N): ((((0, _H),), ((1, _L),)), True),
    (_L, _P, _Z): ((((1, _L),), ((0, _H), (1, _H))), False),
    (_L, _P, _P): ((((0, _L),), ((1, _L),), ((0, _H), (1, _H))), False),
    (_H, _N, _N): ((((0, _L),), ((1, _L),)), True),
    (_H, _N, _Z): ((((1, _L),), ((0, _L), (1, _H))), False),
    (_H, _N, _P): ((((0, _H),), ((1, _L),), ((0, _L), (1, _H))), False),
    (_H, _Z, _N): ((((0, _L),), ((0, _H), (1, _L))), False),
    (_H, _Z, _Z): ((((0, _H), (1, _L)), ((0, _L), (1, _H))), False),
    (_H, _Z, _P): ((((0, _H),), ((0, _L), (1, _H))), False),
    (_H, _P, _N): ((((0, _L),), ((1, _H),), ((0, _H), (1, _L))), False),
    (_H, _P, _Z): ((((1, _H),), ((0, _H), (1, _L))), False),
    (_H, _P, _P): ((((0, _H),), ((1, _H),)), True),
}


def mul_value_dependent(mode: Mode, rs1: Sign, rs2: Sign,
                        names: tuple[str, str] = ("x1", "x2")) -> tuple[Expr, bool]:
    """Table row for two suspicious factors with known reported signs.

    Returns (cause expression, has intended-zero escapes).
    """
    if mode not in _REAL_EFFECTS:
        raise UnsupportedEffectError(
            f"Mul has a real output; effect mode {mode.value!r} is not applicable")
    terms, escapes = MUL_VALUE_TABLE[(mode, rs1, rs2)]
    expr = disj(*(conj(*(Lit(names[i], m) for i, m in term)) for term in terms))
    return expr, escapes


# ---------------------------------------------------------------------------
# Value-dependent two-input gate forms (side conditions resolved against
# knowledge; an unresolved condition is dropped, which only widens the model).


def _gate_value_dependent(comp: Component, mode: Mode, ctx: KnowledgeContext):
    a1, a2 = comp.args
    if comp.kind is Kind.AND:
        cond_field, cond_value = ("reported", True) if mode is Mode.COMMISSION else ("intended", True)
    else:
        cond_field, cond_value = ("intended", False) if mode is Mode.COMMISSION else ("reported", False)
    parts: list[Expr] = []
    premises: list[Premise] = []
    for this, other in ((a1, a2), (a2, a1)):
        know = ctx.knowledge(other)
        actual = getattr(know, cond_field)
        if actual is None and ctx.is_certain(other):
            actual = ctx.pinned_value(other)
        if actual is None:
            parts.append(Lit(this, mode))  # condition unknown: keep, wider
        elif actual == cond_value:
            parts.append(Lit(this, mode))
            premises.append(Premise(other, f"{cond_field}_value", "T" if cond_value else "F"))
        # else: the side condition fails, the branch drops
    return disj(*parts), tuple(dict.fromkeys(premises))


# ---------------------------------------------------------------------------
# The dispatcher


def local_model(comp: Component, mode: Mode, ctx: KnowledgeContext) -> FailureScenario:
    """Local failure model of one component instance for one output mode.

    Literals on fault-free (certain) wires are already simplified away in the
    returned cause; the scenario records any value-world premises used and
    whether the result had to be weakened to minimum conditions.
    """
    _check_effect(comp.kind, mode)
    kind = comp.kind
    args = comp.args
    effect = Lit(comp.output, mode)
    premises: tuple[Premise, ...] = ()
    weakened = False

    if kind is Kind.NOT:
        cause = Lit(args[0], invert(mode))

    elif kind in (Kind.AND, Kind.OR):
        if ctx.causes is CauseMode.CERTAIN:
            lits = [Lit(a, mode) for a in args]
            conjunction = (kind is Kind.AND) == (mode is Mode.COMMISSION)
            cause = conj(*lits) if conjunction else disj(*lits)
        elif ctx.values is ValuePolicy.DEPENDENT:
            cause, premises = _gate_value_dependent(comp, mode, ctx)
        else:
            cause = disj(*(Lit(a, mode) for a in args))

    elif kind in (Kind.GCOM, Kind.LCOM):
        # Gcom commission: first argument too high or threshold too low;
        # every other (kind, mode) pairing mirrors one or both directions.
        up = Mode.HIGH if mode is Mode.COMMISSION else Mode.LOW
        if kind is Kind.LCOM:
            up = invert(up)
        cause = disj(Lit(args[0], up), Lit(args[1], invert(up)))
        weakened = (ctx.causes is CauseMode.CERTAIN
                    and not ctx.is_certain(args[0]) and not ctx.is_certain(args[1]))

    elif kind in (Kind.ADD, Kind.AVG):
        cause = disj(Lit(args[0], mode), Lit(args[1], mode))

    elif kind is Kind.SUB:
        cause = disj(Lit(args[0], mode), Lit(args[1], invert(mode)))

    elif kind is Kind.LIM:
        x, lo, hi = args
        if not (ctx.is_certain(lo) and ctx.is_certain(hi)):
            raise CatalogueError(
                f"component {comp.name!r}: limiter bounds must be certain variables")
        cause = Lit(x, mode)

    elif kind is Kind.INV:
        cause = Lit(args[0], invert(mode))

    elif kind is Kind.ABS:
        cause, premises, weakened = _abs_model(comp, mode, ctx)

    elif kind is Kind.MUL:
        cause, premises, weakened = _mul_model(comp, mode, ctx)

    elif kind is Kind.MONOTONE:
        cause = monotone_model(list(comp.attrs.signs), mode, names=list(args))

    elif kind is Kind.DNF:
        cause = dnf_model(comp.attrs.L, comp.attrs.K, mode, ctx.causes, names=list(args))

    elif kind is Kind.CNF:
        cause = cnf_model(comp.attrs.L, comp.attrs.K, mode, ctx.causes, names=list(args))

    elif kind is Kind.KOON:
        cause = koon_model(len(args), comp.attrs.k, mode, ctx.causes, names=list(args))

    else:  # pragma: no cover
        raise CatalogueError(f"unhandled kind {kind}")

    return FailureScenario(kind=kind, effect=effect, cause=simplify(cause, ctx),
                           premises=premises, weakened=weakened)


def _abs_model(comp: Component, mode: Mode, ctx: KnowledgeContext):
    x = comp.args[0]
    if ctx.values is ValuePolicy.DEPENDENT:
        s = ctx.sign_info(x)
        if s is not None:
            if s is Sign.ZERO:
                raise UnreachableEffectError(
                    f"{x!r} is pinned to 0, so its absolute value cannot deviate")
            cause = Lit(x, direction_of_sign(_SIGN_NUM[s]).apply(mode))
            return cause, (Premise(x, "sign_stable", s.value),), False
    # No usable sign: the deviation direction is undecidable, only the
    # minimum conditions remain.
    cause = disj(Lit(x, Mode.HIGH), Lit(x, Mode.LOW))
    return cause, (), ctx.causes is CauseMode.CERTAIN


def _mul_model(comp: Component, mode: Mode, ctx: KnowledgeContext):
    a1, a2 = comp.args
    c1, c2 = ctx.is_certain(a1), ctx.is_certain(a2)

    if c1 != c2:
        p, x = (a1, a2) if c1 else (a2, a1)
        s = ctx.sign_info(p)
        if s is Sign.ZERO:
            raise UnreachableEffectError(
                f"fault-free factor {p!r} is 0, so the product cannot deviate")
        if s is None:
            # Sign of the given factor unknown: any input deviation remains
            # possible, which says nothing.
            return disj(Lit(x, Mode.HIGH), Lit(x, Mode.MATCH), Lit(x, Mode.LOW)), (), True
        return Lit(x, direction_of_sign(_SIGN_NUM[s]).apply(mode)), (), False

    if not c1 and ctx.values is ValuePolicy.DEPENDENT:
        # Concrete reported values select a row of the value table; mere sign
        # stability is weaker knowledge and uses the direction form below.
        k1, k2 = ctx.knowledge(a1), ctx.knowledge(a2)
        rs1 = sign_of_value(k1.reported) if k1.reported is not None else None
        rs2 = sign_of_value(k2.reported) if k2.reported is not None else None
        if rs1 is not None and rs2 is not None:
            expr, escapes = mul_value_dependent(mode, rs1, rs2, names=(a1, a2))
            premises = [Premise(a1, "reported_sign", rs1.value),
                        Premise(a2, "reported_sign", rs2.value)]
            weakened = ctx.causes is CauseMode.CERTAIN
            if escapes:
                i1 = ctx.knowledge(a1).intended
                i2 = ctx.knowledge(a2).intended
                if (i1 is not None and i1 == 0) or (i2 is not None and i2 == 0):
                    return TRUE, tuple(premises), True
                for a, known in ((a1, i1), (a2, i2)):
                    if known is None:
                        premises.append(Premise(a, "intended_nonzero"))
            return expr, tuple(premises), weakened
        s1, s2 = ctx.sign_info(a1), ctx.sign_info(a2)
        if s1 is not None and s2 is not None:
            if s1 is Sign.ZERO or s2 is Sign.ZERO:
                raise UnreachableEffectError(
                    "a factor stably pinned to sign 0 forces the product to 0")
            cause = disj(Lit(a1, direction_of_sign(_SIGN_NUM[s2]).apply(mode)),
                         Lit(a2, direction_of_sign(_SIGN_NUM[s1]).apply(mode)))
            premises = (Premise(a1, "sign_stable", s1.value),
                        Premise(a2, "sign_stable", s2.value))
            return cause, premises, False

    # Value-independent two-suspicious multiplication: direction undecidable.
    cause = disj(Lit(a1, Mode.HIGH), Lit(a1, Mode.LOW),
                 Lit(a2, Mode.HIGH), Lit(a2, Mode.LOW))
    return cause, (), ctx.causes is CauseMode.CERTAIN


def mul_single_fault(mode: Mode, s1: Sign, s2: Sign,
                     names: tuple[str, str] = ("x1", "x2")) -> FailureScenario:
    """Two suspicious factors under the extra premise that at most one is
    faulty; needs both signs.  Not selected automatically (the premise is an
    analysis assumption, not wire knowledge)."""
    if mode not in _REAL_EFFECTS:
        raise UnsupportedEffectError(
            f"Mul has a real output; effect mode {mode.value!r} is not applicable")
    if s1 is Sign.ZERO or s2 is Sign.ZERO:
        raise UnreachableEffectError("a zero factor forces the product to 0")
    cause = disj(Lit(names[0], direction_of_sign(_SIGN_NUM[s2]).apply(mode)),
                 Lit(names[1], direction_of_sign(_SIGN_NUM[s1]).apply(mode)))
    return FailureScenario(
        kind=Kind.MUL, effect=Lit("y", mode), cause=cause,
        premises=(Premise(names[0], "single_fault"), Premise(names[1], "single_fault")),
    )
