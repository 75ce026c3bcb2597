"""Backward composition of local failure models.

Starting from a target output failure literal, the engine substitutes each
internal wire's local cause model through the dataflow graph until only
boundary (external input/parameter) literals remain, simplifying as it goes.
The result is a disjunctive normal form over boundary faults: the minimal
cut-set view of what can explain the observed failure.

Feedback wires are rebound first: the system is in an intended state before a
failure shows up, so a loop-carried value is fault-free at the moment the
inputs deviate.  Each feedback wire is replaced by a fresh certain variable,
whose literals then simplify to constants.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .algebra import (
    Expr,
    FALSE,
    Lit,
    Mode,
    dnf_term_list,
    map_literals,
    simplify,
    to_dnf,
)
from .catalogue import Premise, local_model
from .errors import EngineError, UnreachableEffectError
from .model import (
    Knowledge,
    KnowledgeContext,
    SystemModel,
    Variable,
    detect_loops,
)


@dataclass(frozen=True)
class LoopBinding:
    """A broken feedback wire and the fault-free stand-in that replaced it."""

    var: str
    consumer: str
    pinned: str


def break_loops(model: SystemModel) -> tuple[SystemModel, tuple[LoopBinding, ...]]:
    """Rebind every feedback wire to a fresh fault-free boundary variable.

    The consumer of each feedback edge reads the stand-in instead of the
    looped wire; downstream simplification then turns the stand-in's non-m
    literals into false and its m literals into true.
    """
    edges = detect_loops(model)
    if not edges:
        return model, ()
    taken = set(model.var_map)
    new_vars = list(model.variables)
    comps = {c.name: c for c in model.components}
    bindings = []
    for i, edge in enumerate(edges, start=1):
        pinned = f"{edge.var}__pre"
        while pinned in taken:
            pinned = f"{edge.var}__pre{i}"
            i += 1
        taken.add(pinned)
        src = model.variable(edge.var)
        new_vars.append(Variable(name=pinned, vtype=src.vtype, certain=True, know=Knowledge()))
        consumer = comps[edge.consumer]
        comps[edge.consumer] = replace(
            consumer,
            inputs=tuple(pinned if a == edge.var else a for a in consumer.inputs),
            params=tuple(pinned if a == edge.var else a for a in consumer.params),
        )
        bindings.append(LoopBinding(var=edge.var, consumer=edge.consumer, pinned=pinned))
    broken = SystemModel(
        variables=tuple(new_vars),
        components=tuple(comps[c.name] for c in model.components),
        outputs=model.outputs,
    )
    return broken, tuple(bindings)


@dataclass(frozen=True)
class TraceStep:
    component: str
    effect: Lit
    local_cause: Expr
    weakened: bool
    premises: tuple[Premise, ...]


@dataclass(frozen=True)
class AnalysisResult:
    target: Lit
    cause: Expr  # DNF over boundary literals
    causes_policy: str
    values_policy: str
    weakened: bool
    premises: tuple[Premise, ...]
    trace: tuple[TraceStep, ...]
    loop_bindings: tuple[LoopBinding, ...]
    notes: tuple[str, ...] = ()


def backward_reason(model: SystemModel, target: Lit,
                    ctx: Optional[KnowledgeContext] = None) -> AnalysisResult:
    """Derive the boundary-fault expression explaining ``target``.

    The target variable must be a declared system output; its mode must be an
    actual fault (not m) of the right type.  Internal wires whose requested
    mode turns out unreachable contribute false to the surrounding expression;
    an unreachable target itself raises.
    """
    if ctx is None:
        ctx = KnowledgeContext(model=model)
    if target.var not in model.outputs:
        raise EngineError(f"{target.var!r} is not a declared system output")
    if target.mode is Mode.MATCH:
        raise EngineError("m is not a failure; pick one of h/l/t/f")
    var = model.variable(target.var)
    if target.mode not in var.vtype.modes:
        raise EngineError(
            f"mode {target.mode.value!r} does not apply to {var.vtype.value} variable {target.var!r}")

    broken, bindings = break_loops(model)
    ctx = ctx.with_model(broken)

    memo: dict[tuple[str, Mode], Optional[Expr]] = {}
    trace: list[TraceStep] = []
    notes: list[str] = []

    def expand(lit: Lit) -> Expr:
        status = ctx.literal_status(lit)
        if status is not None:
            from .algebra import TRUE
            return TRUE if status else FALSE
        producer = broken.producer(lit.var)
        if producer is None:
            return lit
        key = (lit.var, lit.mode)
        if key in memo:
            cached = memo[key]
            if cached is None:
                raise EngineError(f"cycle through {lit.var!r} survived loop breaking")
            return cached
        memo[key] = None  # in-progress marker
        try:
            scenario = local_model(producer, lit.mode, ctx)
        except UnreachableEffectError as e:
            if lit == target:
                raise
            notes.append(f"{lit}: unreachable ({e}); branch dropped")
            memo[key] = FALSE
            return FALSE
        trace.append(TraceStep(
            component=producer.name, effect=lit, local_cause=scenario.cause,
            weakened=scenario.weakened, premises=scenario.premises,
        ))
        if any(l.mode is Mode.MATCH and not broken.is_boundary(l.var)
               for l in _literals(scenario.cause)):
            raise EngineError(
                f"local model of {producer.name!r} constrains an internal wire to m; "
                "cannot expand a no-fault condition backwards")
        expanded = simplify(map_literals(scenario.cause, expand), ctx)
        memo[key] = expanded
        return expanded

    cause = to_dnf(simplify(expand(target), ctx), cap=ctx.dnf_cap)

    boundary = set(broken.boundary_variables())
    offenders = [v for term in dnf_term_list(cause) for l in term
                 if (v := l.var) not in boundary]
    if offenders:
        raise EngineError(f"internal wires left in result: {sorted(set(offenders))}")

    seen_premises = tuple(dict.fromkeys(p for step in trace for p in step.premises))
    return AnalysisResult(
        target=target,
        cause=cause,
        causes_policy=ctx.causes.value,
        values_policy=ctx.values.value,
        weakened=any(step.weakened for step in trace),
        premises=seen_premises,
        trace=tuple(trace),
        loop_bindings=bindings,
        notes=tuple(notes),
    )


def _literals(expr: Expr):
    from .algebra import literals
    return literals(expr)


def explain(result: AnalysisResult) -> list[list[Lit]]:
    """The result's cut sets: DNF terms sorted by (size, literal order).

    An empty list means no consistent cause exists; a single empty cut set
    means the analysis could not constrain the faults at all.
    """
    return [list(term) for term in dnf_term_list(result.cause)]
