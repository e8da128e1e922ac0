"""Pure-Python kernels.  ``_kernels_c.pyx`` mirrors these line for line.

Point sets are ints used as bitmasks.  ``succ[w]`` is the successor mask of
``w`` (reflexive and transitive frames only) and ``pred[w]`` the predecessor
mask.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

OP_BOT = 0
OP_VAR = 1
OP_AND = 2
OP_OR = 3
OP_IMP = 4


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def refute(succ, pred, ops, arg_a, arg_b, levels, choices, target):
    """Search valuations in lexicographic order for one where the program fails on ``target``.

    ``ops``/``arg_a``/``arg_b`` is a straight-line program whose last
    instruction is the formula; ``levels[i]`` is the highest variable index
    instruction ``i`` depends on (-1 for constants) and ``choices[k]`` lists
    the candidate truth sets for variable ``k``.  Returns ``(indices, truth)``
    for the first refuting valuation, else ``None``.
    """
    n = len(succ)
    full = (1 << n) - 1
    k = len(choices)
    if any(len(c) == 0 for c in choices):
        return None
    by_level = [[] for _ in range(k + 1)]
    for i, lv in enumerate(levels):
        by_level[lv + 1].append(i)
    reg = [0] * len(ops)
    idx = [0] * k
    vals = [c[0] for c in choices]
    root = len(ops) - 1

    def run(first_level):
        for group in by_level[first_level + 1:]:
            for i in group:
                op = ops[i]
                if op == OP_VAR:
                    reg[i] = vals[arg_a[i]]
                elif op == OP_AND:
                    reg[i] = reg[arg_a[i]] & reg[arg_b[i]]
                elif op == OP_OR:
                    reg[i] = reg[arg_a[i]] | reg[arg_b[i]]
                elif op == OP_IMP:
                    bad = full & reg[arg_a[i]] & ~reg[arg_b[i]]
                    seen = 0
                    for x in _bits(bad):
                        seen |= pred[x]
                    reg[i] = full & ~seen
                else:
                    reg[i] = 0

    run(-1)
    while True:
        if reg[root] & target != target:
            return tuple(idx), reg[root]
        j = k - 1
        while j >= 0:
            idx[j] += 1
            if idx[j] < len(choices[j]):
                break
            idx[j] = 0
            j -= 1
        if j < 0:
            return None
        for t in range(j, k):
            vals[t] = choices[t][idx[t]]
        run(j)


def strongly_unites(succ, dup, z, xs):
    zs = succ[z]
    for x in xs:
        if not zs >> x & 1:
            return False
    m = len(xs)
    for i in range(m):
        allowed = succ[xs[i]]
        for j in range(m):
            if j != i:
                allowed |= dup[xs[j]]
        if zs & ~allowed:
            return False
    return True


def su_n_failure(succ, pred, dup, arity):
    """First ``(w, xs)`` such that no successor of ``w`` strongly unites ``xs``.

    ``xs`` ranges over nondecreasing ``arity``-tuples of successors of ``w``;
    strong union is symmetric in its arguments so this covers every tuple.
    """
    for w, sw in enumerate(succ):
        below = list(_bits(sw))
        for xs in combinations_with_replacement(below, arity):
            cand = sw
            for x in xs:
                cand &= pred[x]
            if not any(strongly_unites(succ, dup, z, xs) for z in _bits(cand)):
                return w, xs
    return None
