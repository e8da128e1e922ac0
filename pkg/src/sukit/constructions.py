"""Medvedev frames, connected products and the disjunction-property witness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from sukit.formula import Formula, Or, variables
from sukit.frame import (
    CapExceededError,
    Frame,
    NotS4Error,
    format_frame,
    is_s4,
    iter_bits,
    roots,
)
from sukit.semantics import Model, format_model, satisfies
from sukit.strong_union import satisfies_su2

__all__ = [
    "MedvedevFrame",
    "medvedev",
    "check_star_property",
    "star_failure",
    "ConnectedProduct",
    "connected_product",
    "HereditaryUnionMap",
    "identity_union_map",
    "is_hereditary_union_function",
    "is_normal",
    "DpWitness",
    "DpWitnessError",
    "dp_witness",
]

MEDVEDEV_CAP = 6


@dataclass(frozen=True)
class MedvedevFrame:
    """Nonempty subsets of ``{1..ground_size}`` under reverse inclusion.

    Point ``i`` encodes the subset whose bitmask is ``i + 1`` (bit ``j`` is
    element ``j + 1``).
    """

    ground_size: int
    frame: Frame

    def subset(self, point: int) -> frozenset[int]:
        self.frame.check_point(point)
        return frozenset(j + 1 for j in iter_bits(point + 1))

    def point(self, subset) -> int:
        m = 0
        for e in subset:
            if not 1 <= e <= self.ground_size:
                raise ValueError(f"{e} is not in the ground set")
            m |= 1 << (e - 1)
        if not m:
            raise ValueError("Medvedev frames have no point for the empty set")
        return m - 1

    def pointmap_comments(self) -> list[str]:
        out = ["pointmap point -> subset of {1.." + str(self.ground_size) + "}"]
        for p in self.frame.points:
            out.append(f"pointmap {p} = {{{','.join(map(str, sorted(self.subset(p))))}}}")
        return out

    def to_text(self, name: str | None = None) -> str:
        return format_frame(self.frame, name or f"medvedev{self.ground_size}", self.pointmap_comments())


def medvedev(k: int, cap: int = MEDVEDEV_CAP) -> MedvedevFrame:
    if k < 1:
        raise ValueError("ground set must be nonempty")
    if k > cap:
        raise CapExceededError(f"ground size {k} exceeds cap {cap}")
    size = (1 << k) - 1
    succ = []
    for i in range(size):
        a = i + 1
        row = 0
        for j in range(size):
            b = j + 1
            if a & b == b:
                row |= 1 << j
        succ.append(row)
    return MedvedevFrame(k, Frame.from_succ(succ))


def _nonempty_subsets(mask: int):
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def star_failure(k: int, cap: int = MEDVEDEV_CAP, literal: bool = False):
    """First ``(w, v, t)`` (as bitmasks over the ground set) violating the union property.

    For nonempty ``w, v`` and nonempty ``t`` inside ``w | v``: ``t`` lies in
    ``w``, or in ``v``, or ``t = w' | v'`` for some nonempty ``w'`` inside
    ``w`` and ``v'`` inside ``v``.  With ``literal=True`` the last disjunct is
    ``t = w | v`` instead, which does not hold in general.
    """
    if k < 1 or k > cap:
        raise CapExceededError(f"ground size must be between 1 and {cap}")
    full = (1 << k) - 1
    for w in range(1, full + 1):
        for v in range(1, full + 1):
            for t in _nonempty_subsets(w | v):
                if t & ~w == 0 or t & ~v == 0:
                    continue
                if literal:
                    ok = t == w | v
                else:
                    ok = any(w2 | v2 == t
                             for w2 in _nonempty_subsets(w & t)
                             for v2 in _nonempty_subsets(v & t))
                if not ok:
                    return w, v, t
    return None


def check_star_property(k: int, cap: int = MEDVEDEV_CAP) -> bool:
    return star_failure(k, cap) is None


# ---------------------------------------------------------------------------
# connected product


@dataclass(frozen=True)
class ConnectedProduct:
    """``F1 (x) F2``: ``F1``'s points, then ``F2``'s, then pairs in row-major order."""

    frame: Frame
    left: Frame
    right: Frame

    @property
    def inj1(self) -> tuple[int, ...]:
        return tuple(range(self.left.size))

    @property
    def inj2(self) -> tuple[int, ...]:
        return tuple(range(self.left.size, self.left.size + self.right.size))

    def pair(self, a: int, b: int) -> int:
        self.left.check_point(a)
        self.right.check_point(b)
        return self.left.size + self.right.size + a * self.right.size + b

    def unpair(self, p: int) -> tuple[int, int]:
        off = p - self.left.size - self.right.size
        if not 0 <= off < self.left.size * self.right.size:
            raise ValueError(f"{p} is not a pair point")
        return divmod(off, self.right.size)

    def embed1(self, mask: int) -> int:
        return mask

    def embed2(self, mask: int) -> int:
        return mask << self.left.size

    @property
    def pair_mask(self) -> int:
        n = self.left.size + self.right.size
        return ((1 << (self.left.size * self.right.size)) - 1) << n

    def pointmap_comments(self) -> list[str]:
        out = ["pointmap product point -> origin"]
        for p in self.frame.points:
            if p < self.left.size:
                out.append(f"pointmap {p} = left {p}")
            elif p < self.left.size + self.right.size:
                out.append(f"pointmap {p} = right {p - self.left.size}")
            else:
                a, b = self.unpair(p)
                out.append(f"pointmap {p} = pair {a} {b}")
        return out

    def to_text(self, name: str = "product") -> str:
        return format_frame(self.frame, name, self.pointmap_comments())


def connected_product(F1: Frame, F2: Frame) -> ConnectedProduct:
    if not (is_s4(F1) and is_s4(F2)):
        raise NotS4Error("connected product needs reflexive transitive frames")
    n1, n2 = F1.size, F2.size
    succ = list(F1.succ) + [s << n1 for s in F2.succ]
    base = n1 + n2
    for a in range(n1):
        for b in range(n2):
            row = F1.succ[a] | (F2.succ[b] << n1)
            for a2 in iter_bits(F1.succ[a]):
                for b2 in iter_bits(F2.succ[b]):
                    row |= 1 << (base + a2 * n2 + b2)
            succ.append(row)
    return ConnectedProduct(Frame.from_succ(succ), F1, F2)


# ---------------------------------------------------------------------------
# hereditary union functions


@dataclass(frozen=True)
class HereditaryUnionMap:
    base: Frame
    mapping: Mapping[tuple[int, int], int]

    @property
    def domain(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.mapping)


def identity_union_map(P: ConnectedProduct) -> HereditaryUnionMap:
    """The identity on ``W1 x W2`` viewed inside the product."""
    n1 = P.left.size
    mapping = {
        (a, n1 + b): P.pair(a, b)
        for a in range(P.left.size)
        for b in range(P.right.size)
    }
    return HereditaryUnionMap(P.frame, mapping)


def is_hereditary_union_function(h: HereditaryUnionMap) -> bool:
    F = h.base
    if not is_s4(F):
        raise NotS4Error("base frame is not reflexive and transitive")
    f = h.mapping
    for (w, v), u in f.items():
        for p in (w, v, u):
            F.check_point(p)
        # domain closed under componentwise successors
        for w2 in iter_bits(F.succ[w]):
            for v2 in iter_bits(F.succ[v]):
                if (w2, v2) not in f:
                    return False
        if not (F.sees(u, w) and F.sees(u, v)):
            return False
        reachable = F.succ[w] | F.succ[v]
        for w2 in iter_bits(F.succ[w]):
            for v2 in iter_bits(F.succ[v]):
                reachable |= 1 << f[(w2, v2)]
        if F.succ[u] & ~reachable:
            return False
    return True


def is_normal(h: HereditaryUnionMap) -> bool:
    F = h.base
    if not is_s4(F):
        raise NotS4Error("base frame is not reflexive and transitive")
    items = list(h.mapping.items())
    for (w, v), u in items:
        for (w2, v2), u2 in items:
            if F.sees(w, w2) and F.sees(v, v2) and not F.sees(u, u2):
                return False
    return True


# ---------------------------------------------------------------------------
# disjunction property


class DpWitnessError(ValueError):
    """A precondition or post-check of ``dp_witness`` failed; ``reason`` says which."""

    def __init__(self, reason: str, message: str):
        super().__init__(f"{reason}: {message}")
        self.reason = reason


@dataclass(frozen=True)
class DpWitness:
    product: ConnectedProduct
    product_model: Model
    root: int
    alpha: Formula
    beta: Formula

    @property
    def disjunction(self) -> Formula:
        return Or(self.alpha, self.beta)

    def to_text(self, name: str = "dpwitness") -> str:
        comments = [
            f"refutes {self.disjunction} at root {self.root}",
            *self.product.pointmap_comments(),
        ]
        return format_model(self.product_model, name, comments)


def dp_witness(M1: Model, r1: int, alpha: Formula, M2: Model, r2: int, beta: Formula) -> DpWitness:
    """Glue two rooted countermodels from the su2 class under a common root.

    The result is a certificate: every condition the construction relies on
    is re-checked and a failure raises ``DpWitnessError``.
    """
    for tag, M, r, f in (("first", M1, r1, alpha), ("second", M2, r2, beta)):
        if not satisfies_su2(M.frame):
            raise DpWitnessError("frame-not-su2", f"{tag} frame does not satisfy (su2)")
        M.frame.check_point(r)
        if r not in roots(M.frame):
            raise DpWitnessError("not-root", f"point {r} is not a root of the {tag} frame")
        if satisfies(M, r, f):
            raise DpWitnessError("not-refuted", f"{tag} root does not refute {f}")
    P = connected_product(M1.frame, M2.frame)
    masks = {}
    for var in sorted(set(M1.masks) | set(M2.masks)):
        masks[var] = P.embed1(M1.masks.get(var, 0)) | P.embed2(M2.masks.get(var, 0))
    M = Model.from_masks(P.frame, masks)
    root = P.pair(r1, r2)
    if not satisfies_su2(P.frame):
        raise DpWitnessError("product-not-su2", "connected product does not satisfy (su2)")
    if root not in roots(P.frame):
        raise DpWitnessError("product-root", "pair of roots is not a root of the product")
    if satisfies(M, P.inj1[r1], alpha) or satisfies(M, P.inj2[r2], beta):
        raise DpWitnessError("embedding", "truth was not preserved by the embeddings")
    if satisfies(M, root, Or(alpha, beta)):
        raise DpWitnessError("not-refuted", "product root does not refute the disjunction")
    return DpWitness(P, M, root, alpha, beta)


def shared_variables(M1: Model, alpha: Formula, M2: Model, beta: Formula) -> frozenset[str]:
    return (variables(alpha) | frozenset(M1.masks)) & (variables(beta) | frozenset(M2.masks))
