# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled enumeration kernels; behavioral twin of fmreason._kernels.pure."""

import numpy as np

NAME = "compiled"

cdef enum:
    OP_AND = 0
    OP_OR = 1
    OP_NOT = 2
    OP_CONST = 3

cdef enum:
    MODE_M = 0
    MODE_H = 1
    MODE_L = 2
    MODE_T = 3
    MODE_F = 4

cdef signed char[4] PAIR_MODE
PAIR_MODE[0] = MODE_M
PAIR_MODE[1] = MODE_F
PAIR_MODE[2] = MODE_T
PAIR_MODE[3] = MODE_M


cdef inline void _run(const int[:, ::1] ops, int n_ops, int n_vars,
                      unsigned char* rep, unsigned char* intd) nogil:
    cdef int j, op, a, b, s
    for j in range(n_ops):
        op = ops[j, 0]
        a = ops[j, 1]
        b = ops[j, 2]
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
            rep[s] = <unsigned char> a
            intd[s] = <unsigned char> a


def sweep_certain(const int[:, ::1] ops, int n_vars,
                  const signed char[::1] opt_flat, const int[::1] opt_off,
                  int out_slot, int target_mode, int required_int):
    cdef int n_ops = ops.shape[0]
    cdef int n_slots = n_vars + n_ops
    cdef long total = 1
    cdef int v
    cdef long[::1] counts = np.empty(n_vars, dtype=np.int64)
    for v in range(n_vars):
        counts[v] = opt_off[v + 1] - opt_off[v]
        total *= counts[v]
    if total == 0:
        return 0, 0, 0, -1

    rep_buf = np.zeros(n_slots, dtype=np.uint8)
    int_buf = np.zeros(n_slots, dtype=np.uint8)
    idx_buf = np.zeros(n_vars, dtype=np.int64)
    cdef unsigned char[::1] rep = rep_buf
    cdef unsigned char[::1] intd = int_buf
    cdef long[::1] idx = idx_buf

    cdef long lin, kept = 0, bad = 0, first_bad = -1
    cdef int ri, ii, out_mode
    cdef signed char pair
    with nogil:
        for lin in range(total):
            for v in range(n_vars):
                pair = opt_flat[opt_off[v] + idx[v]]
                rep[v] = (pair >> 1) & 1
                intd[v] = pair & 1
            _run(ops, n_ops, n_vars, &rep[0], &intd[0])
            ri = rep[out_slot]
            ii = intd[out_slot]
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


def sweep_minimum(const int[:, ::1] ops, int n_vars,
                  const signed char[::1] opt_flat, const int[::1] opt_off,
                  int out_slot, int target_mode,
                  const int[::1] lit_vars, const signed char[::1] lit_modes,
                  const int[::1] term_off):
    cdef int n_ops = ops.shape[0]
    cdef int n_slots = n_vars + n_ops
    cdef long total = 1
    cdef int v
    cdef long[::1] counts = np.empty(n_vars, dtype=np.int64)
    for v in range(n_vars):
        counts[v] = opt_off[v + 1] - opt_off[v]
        total *= counts[v]
    if total == 0:
        return 0, 0, 0, -1

    rep_buf = np.zeros(n_slots, dtype=np.uint8)
    int_buf = np.zeros(n_slots, dtype=np.uint8)
    idx_buf = np.zeros(n_vars, dtype=np.int64)
    pair_buf = np.zeros(n_vars if n_vars else 1, dtype=np.int8)
    cdef unsigned char[::1] rep = rep_buf
    cdef unsigned char[::1] intd = int_buf
    cdef long[::1] idx = idx_buf
    cdef signed char[::1] pair_codes = pair_buf

    cdef int n_terms = term_off.shape[0] - 1
    cdef long lin, hits = 0, escapes = 0, first_escape = -1
    cdef int ri, ii, out_mode, t, p
    cdef bint ok, satisfied
    cdef signed char pair
    with nogil:
        for lin in range(total):
            for v in range(n_vars):
                pair = opt_flat[opt_off[v] + idx[v]]
                pair_codes[v] = pair
                rep[v] = (pair >> 1) & 1
                intd[v] = pair & 1
            _run(ops, n_ops, n_vars, &rep[0], &intd[0])
            ri = rep[out_slot]
            ii = intd[out_slot]
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
