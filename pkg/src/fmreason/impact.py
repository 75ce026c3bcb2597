"""Failure-mode comparison and the impact of a proposed value change.

Given a baseline fault assignment and a candidate change of one variable's
reported value (the intended world stays fixed), the impact index measures
how far the output failure modes move: 1 per output for a full direction
flip, 0.5 for appearing/vanishing faults, 0 for no movement, summed over the
requested outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .algebra import Mode
from .errors import ImpactError
from .model import SystemModel, ValueType
from .oracle import FaultAssignment, Pair, Value, simulate

_REAL_FAMILY = frozenset({Mode.HIGH, Mode.MATCH, Mode.LOW})
_BOOL_FAMILY = frozenset({Mode.COMMISSION, Mode.MATCH, Mode.OMISSION})

_UP = (Mode.HIGH, Mode.COMMISSION)
_DOWN = (Mode.LOW, Mode.OMISSION)


def compare_modes(a: Mode, b: Mode) -> float:
    """Signed distance between two failure modes of one family.

    Full flips (h over l, t over f) score 1; a fault against a match scores
    0.5; equal modes score 0.  Antisymmetric: compare_modes(a, b) ==
    -compare_modes(b, a).
    """
    for family in (_REAL_FAMILY, _BOOL_FAMILY):
        if a in family and b in family:
            break
    else:
        raise ImpactError(f"cannot compare {a.value!r} with {b.value!r}: different mode families")
    if a is b:
        return 0.0
    if a in _UP and b in _DOWN:
        return 1.0
    if a in _DOWN and b in _UP:
        return -1.0
    if b is Mode.MATCH:
        return 0.5 if a in _UP else -0.5
    return -0.5 if b in _UP else 0.5


@dataclass(frozen=True)
class ImpactQuery:
    """What-if probe: rebind one variable's reported value from v to w."""

    variable: str
    from_value: Value
    to_value: Value
    outputs: Optional[tuple[str, ...]] = None


def baseline_from_model(model: SystemModel) -> FaultAssignment:
    """Build the baseline assignment from declared known values.

    Every consumed boundary variable needs enough knowledge to pin both its
    reported and intended value (for certain variables one value suffices).
    """
    pairs: dict[str, Pair] = {}
    missing = []
    for name in model.boundary_variables():
        v = model.variable(name)
        rep, intd = v.know.reported, v.know.intended
        if v.certain:
            pinned = rep if rep is not None else intd
            if pinned is None:
                missing.append(name)
                continue
            pairs[name] = (pinned, pinned)
            continue
        if rep is None or intd is None:
            missing.append(name)
            continue
        pairs[name] = (rep, intd)
    if missing:
        raise ImpactError(
            "baseline needs known reported/intended values for boundary variables: "
            + ", ".join(sorted(missing)))
    return FaultAssignment(pairs)


def impact(model: SystemModel, query: ImpactQuery,
           baseline: Union[FaultAssignment, Mapping[str, Pair]]) -> float:
    """Impact index of changing ``query.variable`` from v to w.

    Both simulations keep the baseline's intended world; only the one
    reported value moves.  Multi-output models sum the per-output distances.
    """
    pairs = dict(baseline.pairs if isinstance(baseline, FaultAssignment) else baseline)
    var = model.var_map.get(query.variable)
    if var is None:
        raise ImpactError(f"unknown variable {query.variable!r}")
    if query.variable not in pairs:
        raise ImpactError(f"{query.variable!r} is not a boundary variable of this model")
    for val, what in ((query.from_value, "from_value"), (query.to_value, "to_value")):
        if (var.vtype is ValueType.BOOL) != isinstance(val, bool):
            raise ImpactError(f"{what} {val!r} does not fit {var.vtype.value} variable {var.name!r}")

    outputs: Sequence[str] = query.outputs if query.outputs else model.outputs
    intended = pairs[query.variable][1]
    probe_v = {**pairs, query.variable: (query.from_value, intended)}
    probe_w = {**pairs, query.variable: (query.to_value, intended)}
    modes_v = simulate(model, probe_v, enforce_certain=False)
    modes_w = simulate(model, probe_w, enforce_certain=False)
    return sum(abs(compare_modes(modes_v[o], modes_w[o])) for o in outputs)
