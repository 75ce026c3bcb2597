"""Shared model builders and generators for the test suite."""

import json
import random

from fmreason import parse_model


def var(name, vtype="bool", cls="suspicious", known=None):
    entry = {"name": name, "type": vtype, "class": cls}
    if known:
        entry["known"] = known
    return entry


def comp(name, kind, inputs, params=(), outputs=(), attrs=None):
    entry = {"name": name, "kind": kind, "inputs": list(inputs),
             "params": list(params), "outputs": list(outputs)}
    if attrs:
        entry["attrs"] = attrs
    return entry


def mk_model(variables, components, outputs):
    return parse_model(json.dumps({
        "variables": variables, "components": components, "outputs": outputs}))


def gate2(kind):
    """One binary Boolean gate: y = kind(x1, x2)."""
    return mk_model(
        [var("x1"), var("x2"), var("y")],
        [comp("g", kind, ["x1", "x2"], outputs=["y"])],
        ["y"],
    )


def unary_bool(kind):
    return mk_model(
        [var("x"), var("y")],
        [comp("g", kind, ["x"], outputs=["y"])],
        ["y"],
    )


def real_block(kind, n_args, extra_vars=(), known=None, params=()):
    """One real-valued component over suspicious inputs x1..xn."""
    variables = [var(f"x{i}", "real", known=(known or {}).get(f"x{i}"))
                 for i in range(1, n_args + 1)]
    variables += list(extra_vars)
    out_type = "bool" if kind in ("Gcom", "Lcom") else "real"
    variables.append(var("y", out_type))
    inputs = [f"x{i}" for i in range(1, n_args + 1)]
    return mk_model(
        variables,
        [comp("g", kind, inputs, params=list(params), outputs=["y"])],
        ["y"],
    )


def fig1_model(x_certain=True):
    """The range-check alarm: y is True when x leaves [p1, p2]."""
    return mk_model(
        [
            var("x", "real", "certain" if x_certain else "suspicious"),
            var("p1", "real"),
            var("p2", "real"),
            var("z1"), var("z2"), var("y"),
        ],
        [
            comp("under_min", "Lcom", ["x"], params=["p1"], outputs=["z1"]),
            comp("over_max", "Gcom", ["x"], params=["p2"], outputs=["z2"]),
            comp("alarm", "Or", ["z1", "z2"], outputs=["y"]),
        ],
        ["y"],
    )


def grid_block(kind, L, K):
    names = [f"x{l}_{k}" for l in range(1, L + 1) for k in range(1, K + 1)]
    return mk_model(
        [var(n) for n in names] + [var("y")],
        [comp("g", kind, names, outputs=["y"], attrs={"L": L, "K": K})],
        ["y"],
    ), names


def koon_block(n, k):
    names = [f"x{i}" for i in range(1, n + 1)]
    return mk_model(
        [var(nm) for nm in names] + [var("y")],
        [comp("g", "KooN", names, outputs=["y"], attrs={"k": k})],
        ["y"],
    ), names


# ---------------------------------------------------------------------------
# Generators

_GATES = (("And", 2), ("Or", 2), ("Not", 1))


def _assemble(comps_spec, n_bound):
    variables = [var(f"b{j}") for j in range(1, n_bound + 1)]
    components = []
    for i, (kind, args) in enumerate(comps_spec, start=1):
        out = f"o{i}"
        variables.append(var(out))
        components.append(comp(f"c{i}", kind, list(args), outputs=[out]))
    return mk_model(variables, components, [f"o{len(comps_spec)}"])


def random_bool_model(rng: random.Random, max_comps=4, max_bound=5):
    """A random connected Boolean model; the last component's output is the
    system output."""
    n_comps = rng.randint(1, max_comps)
    comps_spec = []
    n_bound = 0
    for i in range(n_comps):
        kind, arity = _GATES[rng.randrange(len(_GATES))]
        args = []
        for _ in range(arity):
            sources = [f"b{j}" for j in range(1, n_bound + 1)]
            sources += [f"o{j}" for j in range(1, i + 1)]
            if n_bound < max_bound and (not sources or rng.random() < 0.5):
                n_bound += 1
                args.append(f"b{n_bound}")
            else:
                args.append(sources[rng.randrange(len(sources))])
        comps_spec.append((kind, tuple(args)))
    # Wire every dangling output into the final gate's region by re-targeting
    # unconsumed outputs as inputs of later components where possible.
    consumed = {a for _, args in comps_spec for a in args}
    for i in range(len(comps_spec) - 1):
        out = f"o{i+1}"
        if out not in consumed:
            k, args = comps_spec[-1]
            slot = rng.randrange(len(args))
            new_args = tuple(out if j == slot else a for j, a in enumerate(args))
            comps_spec[-1] = (k, new_args)
            consumed = {a for _, args in comps_spec for a in args}
    return _assemble(comps_spec, n_bound)


def random_bool_tree(rng: random.Random, max_comps=4):
    """A random gate tree: every wire (boundary or internal) feeds exactly
    one consumer, so branch supports are disjoint."""
    n_comps = rng.randint(1, max_comps)
    budget = n_comps - 1  # gates still to place below the root
    variables = []
    components = []
    n_bound = 0
    counter = 0

    def grow():
        nonlocal budget, n_bound, counter
        counter += 1
        my_id = counter
        kind, arity = _GATES[rng.randrange(len(_GATES))]
        args = []
        for _ in range(arity):
            if budget > 0 and rng.random() < 0.6:
                budget -= 1
                args.append(grow())
            else:
                n_bound += 1
                variables.append(var(f"b{n_bound}"))
                args.append(f"b{n_bound}")
        out = f"o{my_id}"
        variables.append(var(out))
        components.append(comp(f"c{my_id}", kind, args, outputs=[out]))
        return out

    root = grow()
    return mk_model(variables, components, [root])


def random_single_loop_model(rng: random.Random, max_chain=3):
    """A chain of gates with one feedback wire from the last output back into
    the first gate: guaranteed single loop through the whole chain."""
    n = rng.randint(1, max_chain)
    variables = []
    components = []
    n_bound = 0
    prev = None
    for i in range(1, n + 1):
        kind, arity = _GATES[rng.randrange(len(_GATES))]
        args = []
        if prev is not None:
            args.append(prev)
        while len(args) < arity:
            n_bound += 1
            variables.append(var(f"b{n_bound}"))
            args.append(f"b{n_bound}")
        out = f"o{i}"
        variables.append(var(out))
        components.append(comp(f"c{i}", kind, args, outputs=[out]))
        prev = out
    # Feed the final output back into the first component.
    first = components[0]
    slot = rng.randrange(len(first["inputs"]))
    first["inputs"][slot] = prev
    loop_var = prev
    # Any boundary var the rewiring orphaned is harmless (stays declared).
    return mk_model(variables, components, [prev]), loop_var


def enumerate_small_models(max_comps=3, max_bound=5):
    """Every canonical Boolean model: components in build order, boundary
    variables labeled in first-use order, all non-final outputs consumed,
    final output is the system output."""
    results = []

    def build(comps_spec, n_bound):
        n = len(comps_spec)
        if comps_spec:
            consumed = {a for _, args in comps_spec for a in args}
            if all(f"o{i+1}" in consumed for i in range(n - 1)):
                results.append(_assemble(list(comps_spec), n_bound))
        if n == max_comps:
            return
        for kind, arity in _GATES:
            def rec(args, nb):
                if len(args) == arity:
                    build(comps_spec + [(kind, tuple(args))], nb)
                    return
                for j in range(1, nb + 1):
                    rec(args + [f"b{j}"], nb)
                if nb < max_bound:
                    rec(args + [f"b{nb+1}"], nb + 1)
                for j in range(1, n + 1):
                    rec(args + [f"o{j}"], nb)
            rec([], n_bound)

    build([], 0)
    return results


def cut_set_strings(result_terms):
    return [[str(l) for l in term] for term in result_terms]
