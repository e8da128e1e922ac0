"""Proof search for intuitionistic propositional logic and for SU.

``prove_ipc`` decides ``premises |- conclusion`` with Dyckhoff's
contraction-free calculus G4ip: the implication-left rule is split on the
shape of the antecedent of the principal implication, which makes every
backward rule application shrink the sequent, so search terminates without
loop checking.  Successful searches return a derivation tree that
``replay`` re-checks rule by rule.

``prove_su`` adds instances of the su schema as extra premises.  It is a
sound semi-decision: a proof is a proof, and a failure within bounds is only
reported as inconclusive.
"""

from __future__ import annotations

import enum
import random
from functools import lru_cache
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from sukit.frame import heyting_neg_mask, implies_mask
from sukit.formula import (
    BOT,
    And,
    Bottom,
    Formula,
    Implies,
    Or,
    Var,
    axiom,
    conj,
    instantiate,
    neg,
    parse,
    subformulas,
    to_text,
)

__all__ = [
    "Sequent",
    "Derivation",
    "Status",
    "ProofOutcome",
    "parse_sequent",
    "prove_ipc",
    "replay",
    "prove_su",
    "su_instance_universe",
    "verify_lemma_su_aa",
    "lemma_su_aa_steps",
    "verify_su_star",
    "check_structural_properties",
    "random_formula",
    "InstanceCapError",
]

SCHEMA_VARS = ("p", "q", "r", "s")
DEFAULT_INSTANCE_CAP = 10**5


@dataclass(frozen=True)
class Sequent:
    """Finitely many premises and one conclusion.  Premises form a set:
    contraction is admissible, so repeated premises change nothing."""

    premises: frozenset[Formula]
    conclusion: Formula

    def __init__(self, premises: Iterable[Formula], conclusion: Formula):
        object.__setattr__(self, "premises", frozenset(premises))
        object.__setattr__(self, "conclusion", conclusion)

    def __str__(self) -> str:
        left = ", ".join(sorted(to_text(p) for p in self.premises))
        return f"{left} |- {to_text(self.conclusion)}" if left else f"|- {to_text(self.conclusion)}"


def parse_sequent(text: str) -> Sequent:
    """``phi1, phi2 |- psi``; a bare formula is read as a sequent without premises."""
    if "|-" in text:
        left, _, right = text.partition("|-")
        premises = [parse(part) for part in _split_top_commas(left) if part.strip()]
        return Sequent(premises, parse(right))
    return Sequent((), parse(text))


def _split_top_commas(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


# ---------------------------------------------------------------------------
# G4ip


@dataclass(frozen=True)
class Derivation:
    rule: str
    sequent: Sequent
    principal: Formula | None = None
    children: tuple["Derivation", ...] = ()

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def lines(self, indent: int = 0) -> list[str]:
        head = f"{'  ' * indent}{self.rule}"
        if self.principal is not None:
            head += f" [{to_text(self.principal)}]"
        out = [f"{head}: {self.sequent}"]
        for c in self.children:
            out.extend(c.lines(indent + 1))
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines())


@lru_cache(maxsize=1 << 16)
def _key(f: Formula) -> str:
    # deterministic premise order; rendering is the costly part of a search step
    return to_text(f)


def _premises_for(rule: str, seq: Sequent, principal: Formula | None) -> list[Sequent] | None:
    """Premise sequents of ``rule`` applied backwards to ``seq``; ``None`` if it does not apply."""
    G = seq.premises
    goal = seq.conclusion
    if rule == "ax":
        return [] if goal in G else None
    if rule == "botL":
        return [] if BOT in G else None
    if rule == "andR":
        return [Sequent(G, goal.left), Sequent(G, goal.right)] if isinstance(goal, And) else None
    if rule == "impR":
        return [Sequent(G | {goal.left}, goal.right)] if isinstance(goal, Implies) else None
    if rule == "orR1":
        return [Sequent(G, goal.left)] if isinstance(goal, Or) else None
    if rule == "orR2":
        return [Sequent(G, goal.right)] if isinstance(goal, Or) else None
    if principal is None or principal not in G:
        return None
    rest = G - {principal}
    a = principal
    if rule == "andL" and isinstance(a, And):
        return [Sequent(rest | {a.left, a.right}, goal)]
    if rule == "orL" and isinstance(a, Or):
        return [Sequent(rest | {a.left}, goal), Sequent(rest | {a.right}, goal)]
    if not isinstance(a, Implies):
        return None
    ante, cons = a.left, a.right
    if rule == "impL_atom" and isinstance(ante, Var) and ante in G:
        return [Sequent(rest | {cons}, goal)]
    if rule == "impL_bot" and isinstance(ante, Bottom):
        return [Sequent(rest, goal)]
    if rule == "impL_and" and isinstance(ante, And):
        return [Sequent(rest | {Implies(ante.left, Implies(ante.right, cons))}, goal)]
    if rule == "impL_or" and isinstance(ante, Or):
        return [Sequent(rest | {Implies(ante.left, cons), Implies(ante.right, cons)}, goal)]
    if rule == "impL_imp" and isinstance(ante, Implies):
        return [Sequent(rest | {Implies(ante.right, cons)}, ante), Sequent(rest | {cons}, goal)]
    return None


class _Search:
    def __init__(self):
        self.memo: dict[Sequent, Derivation | None] = {}

    def prove(self, seq: Sequent) -> Derivation | None:
        if seq in self.memo:
            return self.memo[seq]
        result = self._prove(seq)
        self.memo[seq] = result
        return result

    def _one(self, rule: str, seq: Sequent, principal=None) -> Derivation | None:
        prem = _premises_for(rule, seq, principal)
        kids = []
        for p in prem:
            d = self.prove(p)
            if d is None:
                return None
            kids.append(d)
        return Derivation(rule, seq, principal, tuple(kids))

    def _prove(self, seq: Sequent) -> Derivation | None:
        G, goal = seq.premises, seq.conclusion
        if BOT in G:
            return Derivation("botL", seq)
        if goal in G:
            return Derivation("ax", seq)
        ordered = sorted(G, key=_key)
        # invertible left rules
        for a in ordered:
            rule = None
            if isinstance(a, And):
                rule = "andL"
            elif isinstance(a, Or):
                rule = "orL"
            elif isinstance(a, Implies):
                ante = a.left
                if isinstance(ante, Var) and ante in G:
                    rule = "impL_atom"
                elif isinstance(ante, Bottom):
                    rule = "impL_bot"
                elif isinstance(ante, And):
                    rule = "impL_and"
                elif isinstance(ante, Or):
                    rule = "impL_or"
            if rule is not None:
                return self._one(rule, seq, a)
        # invertible right rules
        if isinstance(goal, And):
            return self._one("andR", seq)
        if isinstance(goal, Implies):
            return self._one("impR", seq)
        # non-invertible choices
        if isinstance(goal, Or):
            for rule in ("orR1", "orR2"):
                d = self._one(rule, seq)
                if d is not None:
                    return d
        for a in ordered:
            if isinstance(a, Implies) and isinstance(a.left, Implies):
                d = self._one("impL_imp", seq, a)
                if d is not None:
                    return d
        return None


class Status(enum.Enum):
    PROVABLE = "provable"
    NOT_PROVABLE = "not provable"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ProofOutcome:
    status: Status
    sequent: Sequent
    certificate: Derivation | None = None
    instances: tuple[Formula, ...] = ()
    note: str = ""

    @property
    def provable(self) -> bool:
        return self.status is Status.PROVABLE

    def to_text(self) -> str:
        out = [f"{self.status.value}: {self.sequent}"]
        if self.note:
            out.append(self.note)
        for f in self.instances:
            out.append(f"su instance: {to_text(f)}")
        if self.certificate is not None:
            out.append(self.certificate.to_text())
        return "\n".join(out)


def prove_ipc(seq: Sequent | str) -> ProofOutcome:
    if isinstance(seq, str):
        seq = parse_sequent(seq)
    d = _Search().prove(seq)
    if d is None:
        return ProofOutcome(Status.NOT_PROVABLE, seq)
    return ProofOutcome(Status.PROVABLE, seq, d)


def replay(d: Derivation) -> bool:
    """Re-check every rule application of a derivation from its conclusion upward."""
    prem = _premises_for(d.rule, d.sequent, d.principal)
    if prem is None or len(prem) != len(d.children):
        return False
    for expected, child in zip(prem, d.children):
        if child.sequent != expected or not replay(child):
            return False
    return True


# ---------------------------------------------------------------------------
# SU


class InstanceCapError(RuntimeError):
    pass


def su_instance_universe(goal: Formula, depth: int) -> list[Formula]:
    """Subformulas of ``goal`` plus bottom, then ``depth`` rounds of closing under negation."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    universe = list(dict.fromkeys([*subformulas(goal), BOT]))
    for _ in range(depth):
        extra = [neg(u) for u in universe]
        universe = list(dict.fromkeys(universe + extra))
    return universe


def _su_truth(F, p: int, q: int, r: int, s: int) -> int:
    """Truth set of su under the given upsets, straight from the mask operators."""
    np_, nq = heyting_neg_mask(F, p), heyting_neg_mask(F, q)
    ante = implies_mask(F, np_, q) & implies_mask(F, nq, p)
    left = implies_mask(F, ante, r | s)
    right = implies_mask(F, p, r) | implies_mask(F, q, s)
    return implies_mask(F, left, right)


def _refutations(goal: Formula, limit: int):
    """IPC countermodels of ``goal``: one per small frame, at most ``limit``."""
    from sukit.semantics import _frames, _refute_on

    out = []
    for n in (1, 2, 3, 4):
        for F in _frames(n):
            hit = _refute_on(F, goal, None, None)
            if hit is not None:
                out.append(hit)
                if len(out) >= limit:
                    return out
        if out:
            return out
    return out


def prove_su(goal: Formula | str, depth: int = 1, instance_cap: int = DEFAULT_INSTANCE_CAP,
             max_attempts: int = 2000, refutation_limit: int = 24,
             pairs: bool = True) -> ProofOutcome:
    """Search for an IPC derivation of ``goal`` from su instances.

    Depths ``0..depth`` are tried in turn.  At each depth the candidate
    substitutions send p, q, r, s into ``su_instance_universe(goal, d)``.  A
    candidate set of instances can only entail ``goal`` if, in every model
    where ``goal`` fails at a point, some instance also fails there; the
    search uses a handful of small IPC countermodels of ``goal`` to discard
    instances that hold wherever ``goal`` fails before calling ``prove_ipc``.
    Single instances are tried first, then pairs unless ``pairs`` is false.
    """
    from sukit.semantics import truth_mask

    if isinstance(goal, str):
        goal = parse(goal)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    base = prove_ipc(Sequent((), goal))
    if base.provable:
        return base
    countermodels = _refutations(goal, refutation_limit)
    attempts = 0
    for d in range(depth + 1):
        universe = su_instance_universe(goal, d)
        total = len(universe) ** 4
        if total > instance_cap:
            raise InstanceCapError(f"{total} su instances at depth {d} exceed cap {instance_cap}")
        tables = []
        for M, w in countermodels:
            F = M.frame
            tables.append((F, 1 << w, [truth_mask(M, u) for u in universe]))
        full = (1 << len(tables)) - 1
        survivors = [
            combo for combo in product(range(len(universe)), repeat=4)
            if all(not _su_truth(F, *(masks[i] for i in combo)) & bit for F, bit, masks in tables)
        ]
        for combo in survivors:
            inst = instantiate(axiom("su"), dict(zip(SCHEMA_VARS, (universe[i] for i in combo))))
            attempts += 1
            out = prove_ipc(Sequent((inst,), goal))
            if out.provable:
                return ProofOutcome(Status.PROVABLE, Sequent((), goal), out.certificate, (inst,),
                                    f"derived from 1 su instance at depth {d}")
            if attempts >= max_attempts:
                return _inconclusive(goal, f"attempt budget {max_attempts} exhausted at depth {d}")
        if not pairs:
            continue
        fail_sets = {}
        for combo in product(range(len(universe)), repeat=4):
            vec = 0
            for j, (F, bit, masks) in enumerate(tables):
                if not _su_truth(F, *(masks[i] for i in combo)) & bit:
                    vec |= 1 << j
            if vec:
                fail_sets[combo] = vec
        partial = list(fail_sets)
        partial.sort(key=lambda c: (-bin(fail_sets[c]).count("1"), c))
        for i, c1 in enumerate(partial):
            for c2 in partial[i + 1:]:
                if fail_sets[c1] | fail_sets[c2] != full:
                    continue
                insts = tuple(
                    instantiate(axiom("su"), dict(zip(SCHEMA_VARS, (universe[k] for k in c))))
                    for c in (c1, c2)
                )
                attempts += 1
                out = prove_ipc(Sequent(insts, goal))
                if out.provable:
                    return ProofOutcome(Status.PROVABLE, Sequent((), goal), out.certificate, insts,
                                        f"derived from 2 su instances at depth {d}")
                if attempts >= max_attempts:
                    return _inconclusive(goal, f"attempt budget {max_attempts} exhausted at depth {d}")
    return _inconclusive(goal, f"no derivation found up to depth {depth}")


def _inconclusive(goal: Formula, note: str) -> ProofOutcome:
    return ProofOutcome(Status.INCONCLUSIVE, Sequent((), goal), note=note)


# ---------------------------------------------------------------------------
# su and aa over IPC

_P, _Q, _R, _S = (Var(v) for v in SCHEMA_VARS)


def _inst(name: str, p: Formula, q: Formula, r: Formula, s: Formula) -> Formula:
    return instantiate(axiom(name), {"p": p, "q": q, "r": r, "s": s})


def _aa(p, q, r, s) -> Formula:
    return instantiate(axiom("aa"), {"p": p, "q": q, "r": r, "s": s})


@dataclass(frozen=True)
class LemmaStep:
    group: str
    index: int
    description: str
    premises: tuple[Formula, ...]
    conclusion: Formula
    passed: bool

    def to_text(self) -> str:
        mark = "ok" if self.passed else "FAIL"
        prem = ", ".join(to_text(p) for p in self.premises)
        return f"[{mark}] ({self.group}{self.index}) {self.description}: {prem} |- {to_text(self.conclusion)}"


@dataclass(frozen=True)
class LemmaReport:
    steps: tuple[LemmaStep, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.steps)

    @property
    def failures(self) -> list[str]:
        return [f"{s.group}{s.index}" for s in self.steps if not s.passed]

    def group_passed(self, group: str) -> bool:
        return all(s.passed for s in self.steps if s.group == group)

    def to_text(self) -> str:
        lines = [s.to_text() for s in self.steps]
        lines.append("lemma su=aa: " + ("pass" if self.passed else "fail " + " ".join(self.failures)))
        return "\n".join(lines)


def lemma_su_aa_instances(corrupt: bool = False) -> tuple[Formula, Formula]:
    """The two aa instances used to derive su.

    The first swaps p and q; the second keeps p, q and feeds the two
    disjuncts produced by the first back in as r and s.  ``corrupt`` replaces
    p by bottom in the second instance.
    """
    negq = neg(_Q)
    first = _aa(_Q, _P, _R, _S)
    p2 = BOT if corrupt else _P
    second = _aa(p2, _Q, Implies(neg(negq), _S), Implies(Implies(negq, _P), _R))
    return first, second


def lemma_su_aa_steps() -> tuple[Formula, ...]:
    """The chain from the antecedent of su to its consequent."""
    negp, negq = neg(_P), neg(_Q)
    a = Implies(negp, _Q)
    b = Implies(negq, _P)
    left = Implies(b, _R)
    right = Implies(neg(negq), _S)
    return (
        Implies(And(a, b), Or(_R, _S)),
        Implies(a, Implies(b, Or(_R, _S))),
        Implies(a, Or(left, right)),
        Or(Implies(neg(negp), left), Implies(a, right)),
        Or(Implies(_P, _R), Implies(_Q, _S)),
    )


def verify_lemma_su_aa(corrupt: bool = False) -> LemmaReport:
    """Check su, aa_plus and aa are interderivable over IPC.

    Groups: (a) an su instance gives aa_plus, (b) an aa_plus instance gives
    aa, (c) each step of the chain follows from the previous one plus the
    aa instance used there, (d) the two aa instances give su outright.
    """
    su, aa, aa_plus = axiom("su"), axiom("aa"), axiom("aa_plus")
    first, second = lemma_su_aa_instances(corrupt)
    steps: list[LemmaStep] = []

    def check(group, index, description, premises, conclusion):
        ok = prove_ipc(Sequent(premises, conclusion)).provable
        steps.append(LemmaStep(group, index, description, tuple(premises), conclusion, ok))

    check("a", 1, "su[p:=p->q, q:=~p] gives aa_plus",
          [_inst("su", Implies(_P, _Q), neg(_P), _R, _S)], aa_plus)
    check("b", 1, "aa_plus[p:=~p] gives aa", [_inst("aa_plus", neg(_P), _Q, _R, _S)], aa)
    chain = lemma_su_aa_steps()
    cited = (None, first, second, None)
    for i in range(1, len(chain)):
        prem = [chain[i - 1]] + ([cited[i - 1]] if cited[i - 1] is not None else [])
        label = "aa instance" if cited[i - 1] is not None else "IPC"
        check("c", i, f"step {i} by {label}", prem, chain[i])
    check("d", 1, "both aa instances give su", [first, second], su)
    return LemmaReport(tuple(steps))


def verify_su_star(n: int, cap: int = 3) -> bool:
    """Paired negative implications between two conjunctions split into
    paired negative implications between their conjuncts."""
    if n < 1:
        raise ValueError("arity must be positive")
    if n > cap:
        raise InstanceCapError(f"arity {n} exceeds cap {cap}")
    phis = [Var(f"a{i}") for i in range(1, n + 1)]
    psis = [Var(f"b{i}") for i in range(1, n + 1)]
    A, B = conj(phis), conj(psis)
    premise = And(Implies(neg(A), B), Implies(neg(B), A))
    goal = conj([And(Implies(neg(x), y), Implies(neg(y), x)) for x, y in zip(phis, psis)])
    return prove_ipc(Sequent((premise,), goal)).provable


# ---------------------------------------------------------------------------
# structural properties


def random_formula(rng: random.Random, names: Sequence[str] = ("p", "q", "r"), depth: int = 3) -> Formula:
    if depth <= 0 or rng.random() < 0.25:
        return BOT if rng.random() < 0.08 else Var(rng.choice(names))
    kind = rng.randrange(4)
    if kind == 0:
        return neg(random_formula(rng, names, depth - 1))
    cls = (And, Or, Implies)[kind - 1]
    return cls(random_formula(rng, names, depth - 1), random_formula(rng, names, depth - 1))


@dataclass
class StructuralReport:
    checked: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_text(self) -> str:
        lines = [f"{k}: {v} checked" for k, v in self.checked.items()]
        lines.extend(f"violation {v}" for v in self.violations)
        lines.append("structural properties: " + ("pass" if self.passed else "fail"))
        return "\n".join(lines)


def check_structural_properties(seed: int = 0, trials: int = 100) -> StructuralReport:
    """Probe prove_ipc for the closure properties of a consequence relation."""
    rng = random.Random(seed)
    rep = StructuralReport()

    def pv(gamma, f) -> bool:
        return prove_ipc(Sequent(gamma, f)).provable

    def gen() -> Formula:
        return random_formula(rng, depth=2)

    def gamma() -> list[Formula]:
        return [gen() for _ in range(rng.randrange(3))]

    def record(name, ok, *parts):
        rep.checked[name] = rep.checked.get(name, 0) + 1
        if not ok:
            rep.violations.append(f"{name}: " + " ; ".join(to_text(p) if isinstance(p, Formula)
                                                            else ", ".join(map(to_text, p)) for p in parts))

    for _ in range(trials):
        G, a, b, c = gamma(), gen(), gen(), gen()
        record("A", pv(G + [a], a), G, a)
        record("andI", pv(G, And(a, b)) == (pv(G, a) and pv(G, b)), G, a, b)
        record("andE", pv(G + [And(a, b)], a) and pv(G + [And(a, b)], b), G, a, b)
        record("orI", pv(G + [a], Or(a, b)) and pv(G + [b], Or(a, b)), G, a, b)
        record("MP", pv([a, Implies(a, b)], b), a, b)
        record("bot", pv([BOT], a), a)
        for _ in range(2):
            G, a, b = gamma(), gen(), gen()
            record("DT", pv(G + [a], b) == pv(G, Implies(a, b)), G, a, b)
        record("PC", pv(G + [Or(a, b)], c) == (pv(G + [a], c) and pv(G + [b], c)), G, a, b, c)
        if pv(G, a) and pv(G + [a], b):
            record("Cut", pv(G, b), G, a, b)
        if pv(G, a):
            record("Mon", pv(G + [b, c], a), G, a, b, c)
        # cut and monotonicity are rarely triggered by random data; force instances
        record("Cut", not (pv(G, Or(a, neg(a))) and pv(G + [Or(a, neg(a))], b)) or pv(G, b), G, a, b)
        record("Mon", pv(G + [b], Implies(a, a)), G, a, b)
    return rep
