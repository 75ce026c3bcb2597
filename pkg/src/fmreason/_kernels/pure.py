"""Pure-Python enumeration kernels.

Reference implementation of the hot loops behind the brute-force fault
sweeps: enumerate every combination of per-variable (reported, intended)
Boolean pairs, run a lowered two-world gate program, and tally how the output
deviation relates to a target mode / cause expression.

The compiled twin lives in ``fmreason._kernels._fast`` and must match this
module's behavior bit for bit; equivalence is property-tested.
"""

NAME = "pure"

OP_AND, OP_OR, OP_NOT, OP_CONST = 0, 1, 2, 3
MODE_M, MODE_H, MODE_L, MODE_T, MODE_F = 0, 1, 2, 3, 4

# Boolean pair code: (reported << 1) | intended.
PAIR_MODE = (MODE_M, MODE_F, MODE_T, MODE_M)


def _run(ops, n_vars, rep, intd):
    for j in range(len(ops)):
        op = ops[j][0]
        a = ops[j][1]
        b = ops[j][2]
        s = n_vars + j
        if op == OP_AND:
            rep[s] = rep[a] & rep[b]
            intd[s] = intd[a] & intd[b]
        elif op == OP_OR:
            rep[s] = rep[a] | rep[b]
            intd[s] = intd[a] | intd[b]
        elif op == OP_NOT:
            rep[s] = 1 - rep[a]
            intd[s] = 1 - intd[a]
        else:
            rep[s] = a
            intd[s] = a


def _counts(opt_off, n_vars):
    return [int(opt_off[v + 1] - opt_off[v]) for v in range(n_vars)]


def sweep_certain(ops, n_vars, opt_flat, opt_off, out_slot, target_mode, required_int):
    """Count samples whose output mode misses ``target_mode``.

    Samples whose intended-world output differs from ``required_int`` are
    skipped (pass -1 to keep all).  Returns (total, kept, bad, first_bad)
    where first_bad is the linear sample index of the first miss (-1 if none);
    variable 0 cycles fastest.
    """
    counts = _counts(opt_off, n_vars)
    total = 1
    for c in counts:
        total *= c
    if total == 0:
        return 0, 0, 0, -1
    n_slots = n_vars + len(ops)
    rep = [0] * n_slots
    intd = [0] * n_slots
    idx = [0] * n_vars
    kept = bad = 0
    first_bad = -1
    for lin in range(total):
        for v in range(n_vars):
            pair = opt_flat[opt_off[v] + idx[v]]
            rep[v] = (pair >> 1) & 1
            intd[v] = pair & 1
        _run(ops, n_vars, rep, intd)
        ri, ii = rep[out_slot], intd[out_slot]
        if required_int < 0 or ii == required_int:
            kept += 1
            out_mode = MODE_M if ri == ii else (MODE_T if ri else MODE_F)
            if out_mode != target_mode:
                bad += 1
                if first_bad < 0:
                    first_bad = lin
        for v in range(n_vars):
            idx[v] += 1
            if idx[v] < counts[v]:
                break
            idx[v] = 0
    return total, kept, bad, first_bad


def sweep_minimum(ops, n_vars, opt_flat, opt_off, out_slot, target_mode,
                  lit_vars, lit_modes, term_off):
    """Count samples that produce ``target_mode`` yet escape the expression.

    The expression is a disjunction of conjunction terms over (variable,
    mode) literals, flattened into ``lit_vars``/``lit_modes`` with term
    boundaries in ``term_off``.  Returns (total, hits, escapes, first_escape).
    """
    counts = _counts(opt_off, n_vars)
    total = 1
    for c in counts:
        total *= c
    if total == 0:
        return 0, 0, 0, -1
    n_slots = n_vars + len(ops)
    rep = [0] * n_slots
    intd = [0] * n_slots
    idx = [0] * n_vars
    pair_codes = [0] * n_vars
    n_terms = len(term_off) - 1
    hits = escapes = 0
    first_escape = -1
    for lin in range(total):
        for v in range(n_vars):
            pair = opt_flat[opt_off[v] + idx[v]]
            pair_codes[v] = pair
            rep[v] = (pair >> 1) & 1
            intd[v] = pair & 1
        _run(ops, n_vars, rep, intd)
        ri, ii = rep[out_slot], intd[out_slot]
        out_mode = MODE_M if ri == ii else (MODE_T if ri else MODE_F)
        if out_mode == target_mode:
            hits += 1
            satisfied = False
            for t in range(n_terms):
                ok = True
                for p in range(term_off[t], term_off[t + 1]):
                    if PAIR_MODE[pair_codes[lit_vars[p]]] != lit_modes[p]:
                        ok = False
                        break
                if ok:
                    satisfied = True
                    break
            if not satisfied:
                escapes += 1
                if first_escape < 0:
                    first_escape = lin
        for v in range(n_vars):
            idx[v] += 1
            if idx[v] < counts[v]:
                break
            idx[v] = 0
    return total, hits, escapes, first_escape
