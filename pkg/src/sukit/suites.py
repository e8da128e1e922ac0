"""Exhaustive property suites over enumerated frames.

Each suite returns a ``SuiteResult`` counting the instances it checked and
listing every violation found (expected empty).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Iterable, Sequence

from sukit import kernels
from sukit.constructions import (
    connected_product,
    identity_union_map,
    is_hereditary_union_function,
    is_normal,
)
from sukit.frame import (
    Frame,
    end_of,
    ends,
    enumerate_s4_frames,
    generated_subframe,
    is_s4,
    iter_bits,
    roots,
)
from sukit.strong_union import dup_masks, su_n_failure, satisfies_su2

__all__ = [
    "SuiteResult",
    "frames_up_to",
    "check_su1",
    "check_union_of_unions",
    "check_su2_lifts",
    "check_su_equivalence",
    "check_products",
    "frame_lemma_suites",
]


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def fail(self, message: str, limit: int = 20) -> None:
        if len(self.violations) < limit:
            self.violations.append(message)
        elif len(self.violations) == limit:
            self.violations.append("further violations suppressed")

    def line(self) -> str:
        status = "pass" if self.passed else f"fail ({len(self.violations)} violations)"
        return f"{self.name}: {self.checked} checked, {status}"


def frames_up_to(max_points: int) -> list[Frame]:
    return [F for n in range(1, max_points + 1) for F in enumerate_s4_frames(n)]


def _short(F: Frame) -> str:
    return f"{F.size} points succ={list(F.succ)}"


def check_su1(frames: Iterable[Frame]) -> SuiteResult:
    """Every frame satisfies (su1)."""
    res = SuiteResult("su1 holds on every frame")
    for F in frames:
        res.checked += 1
        if su_n_failure(F, 1) is not None:
            res.fail(_short(F))
    return res


def check_union_of_unions(frames: Iterable[Frame], max_n: int = 2) -> SuiteResult:
    """If u strongly unites z, a and z strongly unites xs, then u strongly unites xs + a."""
    res = SuiteResult(f"strong union of strong unions (n <= {max_n})")
    for F in frames:
        succ, dup = F.succ, dup_masks(F)
        pts = range(F.size)

        def unites(z, xs):
            return kernels.strongly_unites(succ, dup, z, list(xs))

        pair_unions = [(u, z, a) for u, z, a in product(pts, repeat=3) if unites(u, (z, a))]
        for n in range(1, max_n + 1):
            tuples = list(combinations_with_replacement(pts, n))
            below = {z: [xs for xs in tuples if unites(z, xs)] for z in pts}
            for u, z, a in pair_unions:
                for xs in below[z]:
                    res.checked += 1
                    if not unites(u, (*xs, a)):
                        res.fail(f"{_short(F)} u={u} z={z} a={a} xs={xs}")
    return res


def check_su2_lifts(frames: Iterable[Frame], max_n: int = 4) -> SuiteResult:
    """(su2) implies (su_n) for every n up to ``max_n``."""
    res = SuiteResult(f"su2 implies su_n (n <= {max_n})")
    for F in frames:
        if not satisfies_su2(F):
            continue
        for n in range(3, max_n + 1):
            res.checked += 1
            hit = su_n_failure(F, n)
            if hit is not None:
                res.fail(f"{_short(F)} n={n} failure={hit}")
    return res


def check_su_equivalence(frames: Iterable[Frame], max_n: int = 4) -> SuiteResult:
    """(su2) holds exactly when (su_n) holds for all n up to ``max_n``."""
    res = SuiteResult(f"su2 iff su_1..su_{max_n}")
    for F in frames:
        res.checked += 1
        su2 = su_n_failure(F, 2) is None
        every = all(su_n_failure(F, n) is None for n in range(1, max_n + 1))
        if su2 != every:
            res.fail(_short(F))
    return res


def _mask_embed(mask: int, offset: int) -> int:
    return mask << offset


def check_products(frames: Sequence[Frame], max_n: int = 3) -> list[SuiteResult]:
    """Connected-product properties on every ordered pair of (su2) frames."""
    names = [
        "product is reflexive and transitive",
        "product relation restricted to components",
        "pair of roots is a root",
        "ends of the product",
        "generated subframes of component points",
        "strong union transfers between component and product",
        "identity map is a normal hereditary union function",
        "pair points strongly unite their coordinates",
        f"product satisfies su2..su{max_n}",
    ]
    out = {n: SuiteResult(n) for n in names}
    good = [F for F in frames if satisfies_su2(F)]
    for F1, F2 in product(good, repeat=2):
        P = connected_product(F1, F2)
        G = P.frame
        n1, n2 = F1.size, F2.size
        tag = f"{_short(F1)} x {_short(F2)}"
        offs = (0, n1)
        comps = (F1, F2)

        r = out[names[0]]
        r.checked += 1
        if not is_s4(G):
            r.fail(tag)

        r = out[names[1]]
        for k, Fk in enumerate(comps):
            for w in range(Fk.size):
                r.checked += 1
                if G.succ[offs[k] + w] != _mask_embed(Fk.succ[w], offs[k]):
                    r.fail(f"{tag} component {k + 1} point {w}")
        for a, b in product(range(n1), range(n2)):
            p = P.pair(a, b)
            r.checked += 1
            expect = F1.succ[a] | _mask_embed(F2.succ[b], n1)
            for a2 in iter_bits(F1.succ[a]):
                for b2 in iter_bits(F2.succ[b]):
                    expect |= 1 << P.pair(a2, b2)
            if G.succ[p] != expect:
                r.fail(f"{tag} pair {(a, b)}")
        for w in G.points:
            sees1 = G.succ[w] & ((1 << n1) - 1)
            sees2 = (G.succ[w] >> n1) & ((1 << n2) - 1)
            if sees1 and sees2:
                r.checked += 1
                if w < n1 + n2:
                    r.fail(f"{tag} component point {w} sees both sides")
                    continue
                a, b = P.unpair(w)
                if sees1 & ~F1.succ[a] or sees2 & ~F2.succ[b]:
                    r.fail(f"{tag} pair {(a, b)} sees beyond its coordinates")

        r = out[names[2]]
        for r1, r2 in product(sorted(roots(F1)), sorted(roots(F2))):
            r.checked += 1
            if P.pair(r1, r2) not in roots(G):
                r.fail(f"{tag} roots {(r1, r2)}")

        r = out[names[3]]
        r.checked += 1
        want = {offs[0] + e for e in ends(F1)} | {offs[1] + e for e in ends(F2)}
        if set(ends(G)) != want:
            r.fail(f"{tag} End")
        for k, Fk in enumerate(comps):
            for w in range(Fk.size):
                r.checked += 1
                if set(end_of(G, offs[k] + w)) != {offs[k] + e for e in end_of(Fk, w)}:
                    r.fail(f"{tag} end of component {k + 1} point {w}")
        for a, b in product(range(n1), range(n2)):
            r.checked += 1
            want = {e for e in end_of(F1, a)} | {n1 + e for e in end_of(F2, b)}
            if set(end_of(G, P.pair(a, b))) != want:
                r.fail(f"{tag} end of pair {(a, b)}")

        r = out[names[4]]
        for k, Fk in enumerate(comps):
            for w in range(Fk.size):
                r.checked += 1
                sub_g, map_g = generated_subframe(G, offs[k] + w)
                sub_k, map_k = generated_subframe(Fk, w)
                if sub_g.succ != sub_k.succ or tuple(x - offs[k] for x in map_g) != map_k:
                    r.fail(f"{tag} component {k + 1} point {w}")

        r = out[names[5]]
        dup_g = dup_masks(G)
        for k, Fk in enumerate(comps):
            dup_k = dup_masks(Fk)
            pts = range(Fk.size)
            for n in range(2, max_n + 1):
                for xs in combinations_with_replacement(pts, n):
                    for u in pts:
                        r.checked += 1
                        inside = kernels.strongly_unites(Fk.succ, dup_k, u, list(xs))
                        outside = kernels.strongly_unites(G.succ, dup_g, offs[k] + u,
                                                          [offs[k] + x for x in xs])
                        if inside != outside:
                            r.fail(f"{tag} component {k + 1} u={u} xs={xs}")

        r = out[names[6]]
        r.checked += 1
        h = identity_union_map(P)
        if not (is_hereditary_union_function(h) and is_normal(h)):
            r.fail(tag)

        r = out[names[7]]
        for (w, v), u in sorted(h.mapping.items()):
            r.checked += 1
            if not kernels.strongly_unites(G.succ, dup_g, u, [w, v]):
                r.fail(f"{tag} pair {(w, v)}")

        r = out[names[8]]
        for n in range(2, max_n + 1):
            r.checked += 1
            hit = su_n_failure(G, n)
            if hit is not None:
                r.fail(f"{tag} n={n} failure={hit}")
    return [out[n] for n in names]


def frame_lemma_suites(max_points: int = 5, max_n: int = 4) -> list[SuiteResult]:
    frames = frames_up_to(max_points)
    return [
        check_su1(frames),
        check_union_of_unions(frames, 2),
        check_su2_lifts(frames, max_n),
        check_su_equivalence(frames, max_n),
    ]
