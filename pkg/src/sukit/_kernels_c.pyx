# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_kernels_py``; frames of at most 64 points."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t, int64_t

cdef enum:
    OP_BOT = 0
    OP_VAR = 1
    OP_AND = 2
    OP_OR = 3
    OP_IMP = 4


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline int _ctz(uint64_t m) noexcept nogil:
    return __builtin_ctzll(m)


def refute(const uint64_t[:] succ, const uint64_t[:] pred,
           const int64_t[:] ops, const int64_t[:] arg_a, const int64_t[:] arg_b,
           const int64_t[:] levels, const uint64_t[:] choice_flat,
           const int64_t[:] choice_start, uint64_t target):
    cdef Py_ssize_t n = succ.shape[0]
    cdef Py_ssize_t nins = ops.shape[0]
    cdef Py_ssize_t k = choice_start.shape[0] - 1
    cdef uint64_t full = (<uint64_t>0xFFFFFFFFFFFFFFFF) if n == 64 else ((<uint64_t>1 << n) - 1)
    cdef Py_ssize_t i, j, t, lv
    cdef uint64_t bad, seen, low
    cdef int x
    for t in range(k):
        if choice_start[t + 1] == choice_start[t]:
            return None
    cdef uint64_t *reg = <uint64_t *> malloc(nins * sizeof(uint64_t))
    cdef int64_t *idx = <int64_t *> malloc((k + 1) * sizeof(int64_t))
    cdef uint64_t *vals = <uint64_t *> malloc((k + 1) * sizeof(uint64_t))
    # instruction order grouped by level: order[group_start[L+1] .. group_start[L+2])
    cdef int64_t *order = <int64_t *> malloc((nins + 1) * sizeof(int64_t))
    cdef int64_t *group_start = <int64_t *> malloc((k + 3) * sizeof(int64_t))
    if reg == NULL or idx == NULL or vals == NULL or order == NULL or group_start == NULL:
        free(reg); free(idx); free(vals); free(order); free(group_start)
        raise MemoryError()
    cdef Py_ssize_t pos = 0
    cdef Py_ssize_t root = nins - 1
    cdef Py_ssize_t start
    cdef object result = None
    try:
        for lv in range(-1, k):
            group_start[lv + 1] = pos
            for i in range(nins):
                if levels[i] == lv:
                    order[pos] = i
                    pos += 1
        group_start[k + 1] = pos
        for t in range(k):
            idx[t] = 0
            vals[t] = choice_flat[choice_start[t]]
        start = 0
        with nogil:
            while True:
                for pos in range(group_start[start], group_start[k + 1]):
                    i = order[pos]
                    if ops[i] == OP_VAR:
                        reg[i] = vals[arg_a[i]]
                    elif ops[i] == OP_AND:
                        reg[i] = reg[arg_a[i]] & reg[arg_b[i]]
                    elif ops[i] == OP_OR:
                        reg[i] = reg[arg_a[i]] | reg[arg_b[i]]
                    elif ops[i] == OP_IMP:
                        bad = full & reg[arg_a[i]] & ~reg[arg_b[i]]
                        seen = 0
                        while bad:
                            x = _ctz(bad)
                            seen |= pred[x]
                            bad &= bad - 1
                        reg[i] = full & ~seen
                    else:
                        reg[i] = 0
                if reg[root] & target != target:
                    break
                j = k - 1
                while j >= 0:
                    idx[j] += 1
                    if idx[j] < choice_start[j + 1] - choice_start[j]:
                        break
                    idx[j] = 0
                    j -= 1
                if j < 0:
                    break
                for t in range(j, k):
                    vals[t] = choice_flat[choice_start[t] + idx[t]]
                start = j + 1
        if reg[root] & target != target:
            result = (tuple([idx[t] for t in range(k)]), reg[root])
    finally:
        free(reg); free(idx); free(vals); free(order); free(group_start)
    return result


cdef inline bint _unites(const uint64_t[:] succ, const uint64_t[:] dup, int z,
                         int64_t *xs, int m) noexcept nogil:
    cdef uint64_t zs = succ[z]
    cdef uint64_t allowed
    cdef int i, j
    for i in range(m):
        if not (zs >> xs[i]) & 1:
            return False
    for i in range(m):
        allowed = succ[xs[i]]
        for j in range(m):
            if j != i:
                allowed |= dup[xs[j]]
        if zs & ~allowed:
            return False
    return True


def strongly_unites(const uint64_t[:] succ, const uint64_t[:] dup, int z, xs):
    cdef int m = len(xs)
    cdef int64_t buf[64]
    cdef int i
    if m > 64:
        raise ValueError("at most 64 arguments")
    for i in range(m):
        buf[i] = xs[i]
    return bool(_unites(succ, dup, z, buf, m))


def su_n_failure(const uint64_t[:] succ, const uint64_t[:] pred, const uint64_t[:] dup, int arity):
    cdef Py_ssize_t n = succ.shape[0]
    cdef int w, i, c, nb, z
    cdef int64_t below[64]
    cdef int pick[64]
    cdef int64_t xs[64]
    cdef uint64_t sw, cand, rest
    cdef bint found, done
    if arity < 1 or arity > 64:
        raise ValueError("arity must be between 1 and 64")
    for w in range(n):
        sw = succ[w]
        nb = 0
        rest = sw
        while rest:
            below[nb] = _ctz(rest)
            nb += 1
            rest &= rest - 1
        for i in range(arity):
            pick[i] = 0
        done = False
        while not done:
            cand = sw
            for i in range(arity):
                xs[i] = below[pick[i]]
                cand &= pred[xs[i]]
            found = False
            while cand:
                z = _ctz(cand)
                if _unites(succ, dup, z, xs, arity):
                    found = True
                    break
                cand &= cand - 1
            if not found:
                return w, tuple([xs[i] for i in range(arity)])
            # next nondecreasing tuple
            i = arity - 1
            while i >= 0 and pick[i] == nb - 1:
                i -= 1
            if i < 0:
                done = True
            else:
                pick[i] += 1
                for c in range(i + 1, arity):
                    pick[c] = pick[i]
    return None
