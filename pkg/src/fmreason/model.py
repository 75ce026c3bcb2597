"""Dataflow system models: variables, component instances, wiring.

A model is a directed dataflow graph.  Declared variables are typed wires
(real or Boolean); each component instance applies one catalogue function to
its input/parameter wires and drives exactly one output wire.  Variables not
driven by any component are the system boundary: the external inputs and
parameters where fault causes are searched.

The on-disk format is a UTF-8 JSON document::

    {
      "variables": [{"name": ..., "type": "real"|"bool",
                     "class": "certain"|"suspicious",
                     "known": {"sign": ..., "reported": ..., "intended": ...}}, ...],
      "components": [{"name": ..., "kind": ..., "inputs": [...],
                      "params": [...], "outputs": [...], "attrs": {...}}, ...],
      "outputs": [...]
    }
"""

from __future__ import annotations

import enum
import graphlib
import json
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .algebra import BOOL_MODES, DEFAULT_DNF_CAP, Lit, Mode, REAL_MODES, mode_of
from .errors import ModelFormatError, ModelValidationError

Value = Union[bool, float]


class ValueType(enum.Enum):
    REAL = "real"
    BOOL = "bool"

    @property
    def modes(self) -> frozenset[Mode]:
        return REAL_MODES if self is ValueType.REAL else BOOL_MODES


class Sign(enum.Enum):
    NEG = "neg"
    ZERO = "zero"
    POS = "pos"


def sign_of_value(v: float) -> Sign:
    if v > 0:
        return Sign.POS
    if v < 0:
        return Sign.NEG
    return Sign.ZERO


@dataclass(frozen=True)
class Knowledge:
    """Prior knowledge about one variable's values.

    ``sign`` asserts that the variable keeps this sign in both the reported
    and the intended world (sign stability).  ``reported``/``intended`` pin
    concrete values, as in test-injection scenarios.
    """

    sign: Optional[Sign] = None
    reported: Optional[Value] = None
    intended: Optional[Value] = None

    def empty(self) -> bool:
        return self.sign is None and self.reported is None and self.intended is None


@dataclass(frozen=True)
class Variable:
    name: str
    vtype: ValueType
    certain: bool = False
    know: Knowledge = Knowledge()


class Kind(enum.Enum):
    AND = "And"
    OR = "Or"
    NOT = "Not"
    ADD = "Add"
    SUB = "Sub"
    AVG = "Avg"
    LIM = "Lim"
    INV = "Inv"
    ABS = "Abs"
    MUL = "Mul"
    GCOM = "Gcom"
    LCOM = "Lcom"
    DNF = "DNF"
    CNF = "CNF"
    KOON = "KooN"
    MONOTONE = "Monotone"


@dataclass(frozen=True)
class Attrs:
    """Kind-specific attributes: KooN voting threshold, DNF/CNF shape,
    declared per-argument gradient signs for Monotone components."""

    k: Optional[int] = None
    L: Optional[int] = None
    K: Optional[int] = None
    signs: Optional[tuple[Sign, ...]] = None

    def empty(self) -> bool:
        return self.k is None and self.L is None and self.K is None and self.signs is None


@dataclass(frozen=True)
class Component:
    name: str
    kind: Kind
    inputs: tuple[str, ...]
    params: tuple[str, ...] = ()
    outputs: tuple[str, ...] = ()
    attrs: Attrs = Attrs()

    @property
    def args(self) -> tuple[str, ...]:
        """Formal argument wires: inputs then parameters, in declared order."""
        return self.inputs + self.params

    @property
    def output(self) -> str:
        return self.outputs[0]


# (argument type, output type) per kind; None arity means attr-driven.
_SIG: dict[Kind, tuple[ValueType, ValueType, Optional[int]]] = {
    Kind.AND: (ValueType.BOOL, ValueType.BOOL, 2),
    Kind.OR: (ValueType.BOOL, ValueType.BOOL, 2),
    Kind.NOT: (ValueType.BOOL, ValueType.BOOL, 1),
    Kind.ADD: (ValueType.REAL, ValueType.REAL, 2),
    Kind.SUB: (ValueType.REAL, ValueType.REAL, 2),
    Kind.AVG: (ValueType.REAL, ValueType.REAL, 2),
    Kind.LIM: (ValueType.REAL, ValueType.REAL, 3),
    Kind.INV: (ValueType.REAL, ValueType.REAL, 1),
    Kind.ABS: (ValueType.REAL, ValueType.REAL, 1),
    Kind.MUL: (ValueType.REAL, ValueType.REAL, 2),
    Kind.GCOM: (ValueType.REAL, ValueType.BOOL, 2),
    Kind.LCOM: (ValueType.REAL, ValueType.BOOL, 2),
    Kind.DNF: (ValueType.BOOL, ValueType.BOOL, None),
    Kind.CNF: (ValueType.BOOL, ValueType.BOOL, None),
    Kind.KOON: (ValueType.BOOL, ValueType.BOOL, None),
    Kind.MONOTONE: (ValueType.REAL, ValueType.REAL, None),
}


def kind_arg_type(kind: Kind) -> ValueType:
    return _SIG[kind][0]


def kind_output_type(kind: Kind) -> ValueType:
    return _SIG[kind][1]


@dataclass(frozen=True)
class SystemModel:
    variables: tuple[Variable, ...]
    components: tuple[Component, ...]
    outputs: tuple[str, ...]
    var_map: dict[str, Variable] = field(init=False, compare=False, repr=False)
    producer_map: dict[str, Component] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "var_map", {v.name: v for v in self.variables})
        prod: dict[str, Component] = {}
        for c in self.components:
            for out in c.outputs:
                prod.setdefault(out, c)
        object.__setattr__(self, "producer_map", prod)

    def variable(self, name: str) -> Variable:
        return self.var_map[name]

    def producer(self, name: str) -> Optional[Component]:
        return self.producer_map.get(name)

    def is_boundary(self, name: str) -> bool:
        return name not in self.producer_map

    def boundary_variables(self) -> tuple[str, ...]:
        """Consumed but never produced: the fault search space, in name order."""
        consumed = {a for c in self.components for a in c.args}
        return tuple(sorted(n for n in consumed if n not in self.producer_map))

    def component(self, name: str) -> Component:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    subject: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.subject}: {self.message}"


@dataclass(frozen=True)
class FeedbackEdge:
    """A wire that closes a cycle: ``var`` feeding component ``consumer``."""

    var: str
    consumer: str


# ---------------------------------------------------------------------------
# Parsing / serialization


def _as_value(raw, vtype: ValueType, what: str):
    if raw is None:
        return None
    if vtype is ValueType.BOOL:
        if isinstance(raw, bool):
            return raw
        raise ModelFormatError(f"{what}: expected a Boolean value, got {raw!r}")
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise ModelFormatError(f"{what}: expected a real value, got {raw!r}")


def _parse_variable(raw: dict) -> Variable:
    try:
        name = raw["name"]
        vtype = ValueType(raw["type"])
        cls = raw["class"]
    except KeyError as e:
        raise ModelFormatError(f"variable entry missing key {e}") from None
    except ValueError:
        raise ModelFormatError(f"variable {raw.get('name')!r}: unknown type {raw.get('type')!r}") from None
    if cls not in ("certain", "suspicious"):
        raise ModelFormatError(f"variable {name!r}: unknown class {cls!r}")
    know = Knowledge()
    if "known" in raw and raw["known"] is not None:
        k = raw["known"]
        sign = None
        if k.get("sign") is not None:
            try:
                sign = Sign(k["sign"])
            except ValueError:
                raise ModelFormatError(f"variable {name!r}: unknown sign {k['sign']!r}") from None
        know = Knowledge(
            sign=sign,
            reported=_as_value(k.get("reported"), vtype, f"variable {name!r} known.reported"),
            intended=_as_value(k.get("intended"), vtype, f"variable {name!r} known.intended"),
        )
    return Variable(name=name, vtype=vtype, certain=(cls == "certain"), know=know)


def _parse_attrs(raw: Optional[dict], comp: str) -> Attrs:
    if not raw:
        return Attrs()
    signs = None
    if "signs" in raw:
        try:
            signs = tuple(Sign(s) for s in raw["signs"])
        except ValueError:
            raise ModelFormatError(f"component {comp!r}: bad gradient sign in attrs.signs") from None
    for key in ("k", "L", "K"):
        if key in raw and not isinstance(raw[key], int):
            raise ModelFormatError(f"component {comp!r}: attrs.{key} must be an integer")
    return Attrs(k=raw.get("k"), L=raw.get("L"), K=raw.get("K"), signs=signs)


def _parse_component(raw: dict) -> Component:
    try:
        name = raw["name"]
        kind = Kind(raw["kind"])
    except KeyError as e:
        raise ModelFormatError(f"component entry missing key {e}") from None
    except ValueError:
        raise ModelFormatError(f"component {raw.get('name')!r}: unknown kind {raw.get('kind')!r}") from None
    return Component(
        name=name,
        kind=kind,
        inputs=tuple(raw.get("inputs", ())),
        params=tuple(raw.get("params", ())),
        outputs=tuple(raw.get("outputs", ())),
        attrs=_parse_attrs(raw.get("attrs"), name),
    )


def parse_model(text: Union[str, bytes]) -> SystemModel:
    """Parse and validate a model document; raises on any defect."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(f"syntax error at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise ModelFormatError("top level must be a JSON object")
    for key in ("variables", "components", "outputs"):
        if key not in doc:
            raise ModelFormatError(f"missing top-level key {key!r}")
        if not isinstance(doc[key], list):
            raise ModelFormatError(f"top-level key {key!r} must be a list")
    model = SystemModel(
        variables=tuple(_parse_variable(v) for v in doc["variables"]),
        components=tuple(_parse_component(c) for c in doc["components"]),
        outputs=tuple(doc["outputs"]),
    )
    diags = validate(model)
    if diags:
        raise ModelValidationError(diags)
    return model


def serialize(model: SystemModel) -> str:
    """Render a model back to its document form (inverse of parse_model)."""
    doc = {
        "variables": [],
        "components": [],
        "outputs": list(model.outputs),
    }
    for v in model.variables:
        entry = {"name": v.name, "type": v.vtype.value,
                 "class": "certain" if v.certain else "suspicious"}
        if not v.know.empty():
            known = {}
            if v.know.sign is not None:
                known["sign"] = v.know.sign.value
            if v.know.reported is not None:
                known["reported"] = v.know.reported
            if v.know.intended is not None:
                known["intended"] = v.know.intended
            entry["known"] = known
        doc["variables"].append(entry)
    for c in model.components:
        entry = {"name": c.name, "kind": c.kind.value, "inputs": list(c.inputs),
                 "params": list(c.params), "outputs": list(c.outputs)}
        if not c.attrs.empty():
            attrs = {}
            if c.attrs.k is not None:
                attrs["k"] = c.attrs.k
            if c.attrs.L is not None:
                attrs["L"] = c.attrs.L
            if c.attrs.K is not None:
                attrs["K"] = c.attrs.K
            if c.attrs.signs is not None:
                attrs["signs"] = [s.value for s in c.attrs.signs]
            entry["attrs"] = attrs
        doc["components"].append(entry)
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# Validation


def _expected_arity(comp: Component) -> Optional[int]:
    fixed = _SIG[comp.kind][2]
    if fixed is not None:
        return fixed
    if comp.kind is Kind.KOON:
        return len(comp.args)  # any n >= 1; k checked separately
    if comp.kind in (Kind.DNF, Kind.CNF):
        if comp.attrs.L is None or comp.attrs.K is None:
            return None
        return comp.attrs.L * comp.attrs.K
    if comp.kind is Kind.MONOTONE:
        return len(comp.attrs.signs) if comp.attrs.signs else None
    return None


def validate(model: SystemModel) -> list[Diagnostic]:
    """All invariant violations, one diagnostic each; empty when sound."""
    diags: list[Diagnostic] = []
    add = lambda code, subject, msg: diags.append(Diagnostic(code, subject, msg))

    seen_vars: set[str] = set()
    for v in model.variables:
        if v.name in seen_vars:
            add("duplicate-variable", v.name, "variable declared more than once")
        seen_vars.add(v.name)
        if v.vtype is ValueType.BOOL and v.know.sign is not None:
            add("bad-knowledge", v.name, "sign knowledge applies to real variables only")
        if v.certain and v.know.reported is not None and v.know.intended is not None \
                and v.know.reported != v.know.intended:
            add("bad-knowledge", v.name, "a certain variable cannot have reported != intended")

    seen_comps: set[str] = set()
    producers: dict[str, str] = {}
    for c in model.components:
        if c.name in seen_comps:
            add("duplicate-component", c.name, "component declared more than once")
        seen_comps.add(c.name)

        for ref in c.args + c.outputs:
            if ref not in model.var_map:
                add("undeclared-variable", c.name, f"references undeclared variable {ref!r}")

        if len(c.outputs) != 1:
            add("bad-output-count", c.name, f"{c.kind.value} drives exactly one output, got {len(c.outputs)}")
        for out in c.outputs:
            if out in producers:
                add("duplicate-producer", out,
                    f"driven by both {producers[out]!r} and {c.name!r}")
            producers[out] = c.name

        want = _expected_arity(c)
        if want is None:
            add("bad-attrs", c.name, f"{c.kind.value} needs its shape attributes")
        elif len(c.args) != want:
            add("arity-mismatch", c.name,
                f"{c.kind.value} takes {want} argument wire(s), got {len(c.args)}")
        if c.kind is Kind.KOON:
            k = c.attrs.k
            if k is None:
                add("bad-attrs", c.name, "KooN needs attrs.k")
            elif not 1 <= k <= len(c.args):
                add("bad-attrs", c.name, f"KooN needs 1 <= k <= n, got k={k}, n={len(c.args)}")
        if c.kind in (Kind.DNF, Kind.CNF):
            if (c.attrs.L or 0) < 1 or (c.attrs.K or 0) < 1:
                add("bad-attrs", c.name, f"{c.kind.value} needs attrs.L >= 1 and attrs.K >= 1")
        if c.kind is Kind.MONOTONE and c.attrs.signs:
            if any(s is Sign.ZERO for s in c.attrs.signs):
                add("bad-attrs", c.name, "Monotone gradient signs must be pos or neg")
        if c.kind not in (Kind.KOON, Kind.DNF, Kind.CNF, Kind.MONOTONE) and not c.attrs.empty():
            add("bad-attrs", c.name, f"{c.kind.value} takes no attributes")

        arg_t, out_t = kind_arg_type(c.kind), kind_output_type(c.kind)
        for ref in c.args:
            v = model.var_map.get(ref)
            if v is not None and v.vtype is not arg_t:
                add("type-mismatch", c.name,
                    f"wire {ref!r} is {v.vtype.value} but {c.kind.value} takes {arg_t.value}")
        for out in c.outputs:
            v = model.var_map.get(out)
            if v is not None and v.vtype is not out_t:
                add("type-mismatch", c.name,
                    f"output {out!r} is {v.vtype.value} but {c.kind.value} produces {out_t.value}")

    for out in model.outputs:
        if out not in model.var_map:
            add("undeclared-variable", out, "system output is not a declared variable")
        elif out not in producers:
            add("no-producer", out, "system output is not driven by any component")

    return diags


# ---------------------------------------------------------------------------
# Loops


def _component_graph(model: SystemModel, removed: set[tuple[str, str]]) -> dict[str, list[tuple[str, str]]]:
    """Adjacency: component -> [(successor component, via wire)], canonical order."""
    adj: dict[str, list[tuple[str, str]]] = {c.name: [] for c in model.components}
    for c in model.components:
        for a in c.args:
            prod = model.producer(a)
            if prod is not None and (a, c.name) not in removed:
                adj[prod.name].append((c.name, a))
    for name in adj:
        adj[name].sort()
    return adj


def _find_cycle(adj: dict[str, list[tuple[str, str]]]) -> Optional[list[tuple[str, str, str]]]:
    """One cycle as [(producer, consumer, wire), ...], or None if acyclic."""
    color: dict[str, int] = {}
    stack: list[tuple[str, str, str]] = []

    def visit(node: str) -> Optional[list[tuple[str, str, str]]]:
        color[node] = 1
        for succ, wire in adj[node]:
            if color.get(succ, 0) == 1:
                cycle = [(node, succ, wire)]
                for edge in reversed(stack):
                    cycle.append(edge)
                    if edge[0] == succ:
                        break
                return list(reversed(cycle))
            if color.get(succ, 0) == 0:
                stack.append((node, succ, wire))
                found = visit(succ)
                stack.pop()
                if found:
                    return found
        color[node] = 2
        return None

    for node in sorted(adj):
        if color.get(node, 0) == 0:
            found = visit(node)
            if found:
                return found
    return None


def _acyclic(model: SystemModel, removed: set[tuple[str, str]]) -> bool:
    adj = _component_graph(model, removed)
    sorter = graphlib.TopologicalSorter({n: {s for s, _ in succs} for n, succs in adj.items()})
    try:
        list(sorter.static_order())
    except graphlib.CycleError:
        return False
    return True


def detect_loops(model: SystemModel) -> tuple[FeedbackEdge, ...]:
    """A minimal, deterministic set of feedback wires whose removal makes the
    component graph acyclic.

    Within each cycle found, the wire entering the component with the
    lexicographically least name is broken (ties broken by wire name).
    """
    removed: set[tuple[str, str]] = set()
    order: list[tuple[str, str]] = []
    while True:
        cycle = _find_cycle(_component_graph(model, removed))
        if cycle is None:
            break
        _, consumer, wire = min(cycle, key=lambda e: (e[1], e[2]))
        removed.add((wire, consumer))
        order.append((wire, consumer))
    # Minimality: drop any break that later breaks made redundant.
    for edge in reversed(order):
        trial = removed - {edge}
        if _acyclic(model, trial):
            removed = trial
    return tuple(FeedbackEdge(var=w, consumer=c) for w, c in sorted(removed))


def topological_components(model: SystemModel) -> tuple[Component, ...]:
    """Components in evaluation order; raises graphlib.CycleError on loops."""
    deps: dict[str, set[str]] = {}
    for c in model.components:
        deps[c.name] = set()
        for a in c.args:
            prod = model.producer(a)
            if prod is not None:
                deps[c.name].add(prod.name)
    order = graphlib.TopologicalSorter(deps).static_order()
    by_name = {c.name: c for c in model.components}
    return tuple(by_name[n] for n in order)


# ---------------------------------------------------------------------------
# Knowledge context


class CauseMode(enum.Enum):
    """Which kind of cause expression an analysis should produce."""

    CERTAIN = "certain"
    MINIMUM = "minimum"


class ValuePolicy(enum.Enum):
    """Whether known variable values may sharpen the reasoning."""

    INDEPENDENT = "independent"
    DEPENDENT = "dependent"


@dataclass(frozen=True)
class KnowledgeContext:
    """Reasoning configuration plus the per-variable prior knowledge view."""

    model: SystemModel
    causes: CauseMode = CauseMode.CERTAIN
    values: ValuePolicy = ValuePolicy.INDEPENDENT
    dnf_cap: int = DEFAULT_DNF_CAP

    def with_model(self, model: SystemModel) -> "KnowledgeContext":
        return replace(self, model=model)

    def is_certain(self, name: str) -> bool:
        return self.model.variable(name).certain

    def knowledge(self, name: str) -> Knowledge:
        return self.model.variable(name).know

    def pinned_value(self, name: str) -> Optional[Value]:
        """The single known value of a certain variable, if any."""
        v = self.model.variable(name)
        if not v.certain:
            return None
        if v.know.reported is not None:
            return v.know.reported
        return v.know.intended

    def sign_info(self, name: str) -> Optional[Sign]:
        """Best sign knowledge for a wire: stable-sign assertion, or the sign
        of a certain variable's pinned value."""
        v = self.model.variable(name)
        if v.know.sign is not None:
            return v.know.sign
        pinned = self.pinned_value(name)
        if pinned is not None and v.vtype is ValueType.REAL:
            return sign_of_value(pinned)
        return None

    def reported_sign(self, name: str) -> Optional[Sign]:
        v = self.model.variable(name)
        if v.vtype is not ValueType.REAL:
            return None
        if v.know.reported is not None:
            return sign_of_value(v.know.reported)
        if v.certain and v.know.intended is not None:
            return sign_of_value(v.know.intended)
        return v.know.sign  # stable sign pins the reported sign too

    def literal_status(self, lit: Lit) -> Optional[bool]:
        """Decide a literal from knowledge: True/False, or None if open.

        Certain variables resolve under every policy (they cannot be faulty).
        Concrete known values resolve literal feasibility only under the
        value-dependent policy.
        """
        var = self.model.var_map.get(lit.var)
        if var is None:
            return None
        if var.certain:
            return lit.mode is Mode.MATCH
        if self.values is not ValuePolicy.DEPENDENT:
            return None
        k = var.know
        if k.reported is not None and k.intended is not None:
            return mode_of(k.reported, k.intended) is lit.mode
        if var.vtype is ValueType.BOOL:
            if k.reported is not None:
                if lit.mode is Mode.COMMISSION and k.reported is False:
                    return False
                if lit.mode is Mode.OMISSION and k.reported is True:
                    return False
            if k.intended is not None:
                if lit.mode is Mode.COMMISSION and k.intended is True:
                    return False
                if lit.mode is Mode.OMISSION and k.intended is False:
                    return False
        return None
