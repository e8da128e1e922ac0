"""Finite Kripke frames and the set operators used on them.

A frame has points ``0..size-1``.  Point sets are exposed as ``frozenset``
objects; internally every set is an ``int`` bitmask (bit ``i`` = point ``i``),
and most helpers come in a ``*_mask`` flavour for the hot paths.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

__all__ = [
    "Frame",
    "PointSet",
    "NotS4Error",
    "CapExceededError",
    "FrameFormatError",
    "DEFAULT_UPSET_CAP",
    "DEFAULT_ENUM_CAP",
    "mask_of",
    "points_of",
    "r_image",
    "diamond",
    "box",
    "complement",
    "heyting_neg",
    "is_s4",
    "reflexive_transitive_closure",
    "is_upset",
    "upsets",
    "upset_masks",
    "roots",
    "ends",
    "end_of",
    "generated_subframe",
    "enumerate_s4_frames",
    "random_s4_frame",
    "chain",
    "antichain",
    "parse_frame",
    "format_frame",
    "load_frame",
]

PointSet = frozenset

DEFAULT_ENUM_CAP = 5


def _default_upset_cap() -> int:
    raw = os.environ.get("SU_KIT_CAP_UPSETS")
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"SU_KIT_CAP_UPSETS must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError("SU_KIT_CAP_UPSETS must be positive")
        return value
    return 1 << 20


DEFAULT_UPSET_CAP = _default_upset_cap()


class NotS4Error(ValueError):
    pass


class CapExceededError(RuntimeError):
    pass


class FrameFormatError(ValueError):
    pass


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def points_of(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Frame:
    """``size`` points with relation ``relation`` (a set of ordered pairs)."""

    size: int
    relation: frozenset[tuple[int, int]]
    succ: tuple[int, ...] = field(init=False, repr=False, compare=False)
    pred: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("frame size must be nonnegative")
        rel = frozenset((int(a), int(b)) for a, b in self.relation)
        succ = [0] * self.size
        pred = [0] * self.size
        for a, b in rel:
            if not (0 <= a < self.size and 0 <= b < self.size):
                raise ValueError(f"edge ({a}, {b}) out of range for {self.size} points")
            succ[a] |= 1 << b
            pred[b] |= 1 << a
        object.__setattr__(self, "relation", rel)
        object.__setattr__(self, "succ", tuple(succ))
        object.__setattr__(self, "pred", tuple(pred))

    @classmethod
    def from_succ(cls, succ: Iterable[int]) -> "Frame":
        succ = list(succ)
        rel = [(a, b) for a, m in enumerate(succ) for b in iter_bits(m)]
        return cls(len(succ), frozenset(rel))

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @property
    def points(self) -> range:
        return range(self.size)

    def sees(self, a: int, b: int) -> bool:
        return bool(self.succ[a] >> b & 1)

    def check_points(self, X: Iterable[int]) -> int:
        m = mask_of(X)
        if m >> self.size:
            bad = max(points_of(m))
            raise ValueError(f"point {bad} out of range for {self.size} points")
        for p in X:
            if p < 0:
                raise ValueError(f"point {p} out of range for {self.size} points")
        return m

    def check_point(self, w: int) -> None:
        if not (0 <= w < self.size):
            raise ValueError(f"point {w} out of range for {self.size} points")


# ---------------------------------------------------------------------------
# operators on masks


def r_image_mask(F: Frame, m: int) -> int:
    out = 0
    for x in iter_bits(m):
        out |= F.succ[x]
    return out


def diamond_mask(F: Frame, m: int) -> int:
    out = 0
    for x in iter_bits(m):
        out |= F.pred[x]
    return out


def box_mask(F: Frame, m: int) -> int:
    out = 0
    for w, s in enumerate(F.succ):
        if s & ~m == 0:
            out |= 1 << w
    return out


def heyting_neg_mask(F: Frame, m: int) -> int:
    return box_mask(F, F.full & ~m)


def implies_mask(F: Frame, a: int, b: int) -> int:
    return box_mask(F, (F.full & ~a) | b)


def upclose_mask(F: Frame, m: int) -> int:
    return r_image_mask(F, m)


def is_upset_mask(F: Frame, m: int) -> bool:
    return r_image_mask(F, m) == m


# ---------------------------------------------------------------------------
# public set-valued operators


def r_image(F: Frame, X: Iterable[int]) -> frozenset[int]:
    """Points reachable from ``X``: ``{w | some x in X has x R w}``."""
    return points_of(r_image_mask(F, F.check_points(X)))


def diamond(F: Frame, X: Iterable[int]) -> frozenset[int]:
    return points_of(diamond_mask(F, F.check_points(X)))


def box(F: Frame, X: Iterable[int]) -> frozenset[int]:
    return points_of(box_mask(F, F.check_points(X)))


def complement(F: Frame, X: Iterable[int]) -> frozenset[int]:
    return points_of(F.full & ~F.check_points(X))


def _require_s4(F: Frame) -> None:
    if not is_s4(F):
        raise NotS4Error("frame is not reflexive and transitive")


def heyting_neg(F: Frame, X: Iterable[int]) -> frozenset[int]:
    """Points none of whose successors lie in ``X``."""
    _require_s4(F)
    return points_of(heyting_neg_mask(F, F.check_points(X)))


@lru_cache(maxsize=65536)
def _is_s4_succ(succ: tuple[int, ...]) -> bool:
    for w, s in enumerate(succ):
        if not s >> w & 1:
            return False
        for v in iter_bits(s):
            if succ[v] & ~s:
                return False
    return True


def is_s4(F: Frame) -> bool:
    return _is_s4_succ(F.succ)


def reflexive_transitive_closure(F: Frame) -> Frame:
    succ = [s | (1 << w) for w, s in enumerate(F.succ)]
    # Warshall on bit rows
    for k in range(F.size):
        bk = 1 << k
        row = succ[k]
        for i in range(F.size):
            if succ[i] & bk:
                succ[i] |= row
    return Frame.from_succ(succ)


def is_upset(F: Frame, X: Iterable[int]) -> bool:
    _require_s4(F)
    return is_upset_mask(F, F.check_points(X))


def upset_masks(F: Frame, cap: int | None = None) -> list[int]:
    """All upsets of an S4 frame as bitmasks, in ascending numeric order."""
    _require_s4(F)
    return list(_upset_masks(F.succ, DEFAULT_UPSET_CAP if cap is None else cap))


@lru_cache(maxsize=4096)
def _upset_masks(succ: tuple[int, ...], cap: int) -> tuple[int, ...]:
    n = len(succ)
    pred = [0] * n
    for a, s in enumerate(succ):
        for b in iter_bits(s):
            pred[b] |= 1 << a
    out: list[int] = []

    # decide points from the highest index down so results come out ascending
    def rec(i: int, inside: int, outside: int) -> None:
        if i < 0:
            out.append(inside)
            if len(out) > cap:
                raise CapExceededError(f"more than {cap} upsets")
            return
        bit = 1 << i
        if inside & bit:
            rec(i - 1, inside, outside)
            return
        if outside & bit:
            rec(i - 1, inside, outside)
            return
        rec(i - 1, inside, outside | pred[i])
        if not succ[i] & outside:
            rec(i - 1, inside | succ[i], outside)

    rec(n - 1, 0, 0)
    out.sort()
    return tuple(out)


def upsets(F: Frame, cap: int | None = None) -> list[frozenset[int]]:
    return [points_of(m) for m in upset_masks(F, cap)]


def roots(F: Frame) -> frozenset[int]:
    _require_s4(F)
    return frozenset(w for w in F.points if F.succ[w] == F.full)


def _ends_mask(F: Frame) -> int:
    out = 0
    for w, s in enumerate(F.succ):
        if all(F.succ[v] >> w & 1 for v in iter_bits(s)):
            out |= 1 << w
    return out


def ends(F: Frame) -> frozenset[int]:
    """Maximal points: every successor sees the point back."""
    _require_s4(F)
    return points_of(_ends_mask(F))


def end_of(F: Frame, w: int) -> frozenset[int]:
    _require_s4(F)
    F.check_point(w)
    return points_of(_ends_mask(F) & F.succ[w])


def generated_subframe(F: Frame, w: int) -> tuple[Frame, tuple[int, ...]]:
    """Restriction of ``F`` to the successors of ``w``.

    Returns the subframe and its point map: new point ``i`` is old point ``map[i]``.
    """
    _require_s4(F)
    F.check_point(w)
    keep = sorted(iter_bits(F.succ[w]))
    index = {old: new for new, old in enumerate(keep)}
    rel = [(index[a], index[b]) for a, b in F.relation if a in index and b in index]
    return Frame(len(keep), frozenset(rel)), tuple(keep)


# ---------------------------------------------------------------------------
# enumeration and sampling


def enumerate_s4_frames(n: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Frame]:
    """Every reflexive transitive relation on ``n`` labeled points, exactly once."""
    if n < 1:
        raise ValueError("need at least one point")
    if n > cap:
        raise CapExceededError(f"enumeration of {n}-point frames exceeds cap {cap}")
    for succ in _preorders(n):
        yield Frame.from_succ(succ)


@lru_cache(maxsize=None)
def _preorders(n: int) -> tuple[tuple[int, ...], ...]:
    # Extend each preorder on n-1 points by a new top-index point x: choose the
    # upset U of old points x sees and the downset D of old points seeing x,
    # subject to d R u for all d in D, u in U.
    if n == 1:
        return ((1,),)
    out = []
    m = n - 1
    xbit = 1 << m
    full = (1 << m) - 1
    for succ in _preorders(m):
        ups = _upset_masks(succ, 1 << 30)
        for up in ups:
            for up_c in ups:
                down = full & ~up_c
                if any(succ[d] & up != up for d in iter_bits(down)):
                    continue
                row = [s | xbit if down >> i & 1 else s for i, s in enumerate(succ)]
                row.append(up | xbit)
                out.append(tuple(row))
    return tuple(out)


def random_s4_frame(n: int, seed: int) -> Frame:
    """Deterministic random S4 frame.

    Forward edges of a randomly labeled DAG at a random density, an occasional
    two-point cluster, then reflexive-transitive closure.
    """
    if n < 1:
        raise ValueError("need at least one point")
    rng = random.Random(seed)
    density = rng.uniform(0.1, 0.6)
    perm = list(range(n))
    rng.shuffle(perm)
    rel = {(i, i) for i in range(n)}
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < density:
                rel.add((perm[a], perm[b]))
    if n > 1 and rng.random() < 0.3:
        a, b = rng.sample(range(n), 2)
        rel.update({(a, b), (b, a)})
    return reflexive_transitive_closure(Frame(n, frozenset(rel)))


def chain(n: int) -> Frame:
    return Frame(n, frozenset((i, j) for i in range(n) for j in range(i, n)))


def antichain(n: int) -> Frame:
    return Frame(n, frozenset((i, i) for i in range(n)))


# ---------------------------------------------------------------------------
# text format


@dataclass
class KripkeText:
    name: str
    size: int
    edges: list[tuple[int, int]]
    closure: bool
    valuation: dict[str, list[int]]
    closure_upset: bool


def read_kripke_text(text: str) -> KripkeText:
    name = None
    size = None
    edges: list[tuple[int, int]] = []
    closure = False
    closure_upset = False
    valuation: dict[str, list[int]] = {}
    ended = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ended:
            raise FrameFormatError(f"line {lineno}: content after 'end'")
        parts = line.split()
        key, args = parts[0], parts[1:]

        def ints() -> list[int]:
            try:
                vals = [int(a) for a in args]
            except ValueError:
                raise FrameFormatError(f"line {lineno}: expected integers in {line!r}") from None
            return vals

        if key == "frame":
            if name is not None or len(args) != 1:
                raise FrameFormatError(f"line {lineno}: expected a single 'frame <name>' header")
            name = args[0]
        elif name is None:
            raise FrameFormatError(f"line {lineno}: file must start with 'frame <name>'")
        elif key == "points":
            vals = ints()
            if size is not None or len(vals) != 1 or vals[0] < 1:
                raise FrameFormatError(f"line {lineno}: expected one 'points <n>' with n >= 1")
            size = vals[0]
        elif key == "edge":
            vals = ints()
            if size is None or len(vals) != 2:
                raise FrameFormatError(f"line {lineno}: 'edge i j' needs a preceding 'points'")
            if not all(0 <= v < size for v in vals):
                raise FrameFormatError(f"line {lineno}: edge endpoint out of range")
            edges.append((vals[0], vals[1]))
        elif key == "closure" and not args:
            closure = True
        elif key == "closure-upset" and not args:
            closure_upset = True
        elif key == "val":
            if size is None or not args:
                raise FrameFormatError(f"line {lineno}: 'val <var> ...' needs a preceding 'points'")
            var, rest = args[0], args[1:]
            try:
                pts = [int(a) for a in rest]
            except ValueError:
                raise FrameFormatError(f"line {lineno}: expected integers in {line!r}") from None
            if not all(0 <= v < size for v in pts):
                raise FrameFormatError(f"line {lineno}: valuation point out of range")
            if var in valuation:
                raise FrameFormatError(f"line {lineno}: duplicate valuation for {var!r}")
            valuation[var] = pts
        elif key == "end" and not args:
            ended = True
        else:
            raise FrameFormatError(f"line {lineno}: unrecognised line {line!r}")
    if name is None or size is None:
        raise FrameFormatError("missing 'frame' or 'points' line")
    if not ended:
        raise FrameFormatError("missing 'end' line")
    return KripkeText(name, size, edges, closure, valuation, closure_upset)


def frame_from_text(kt: KripkeText) -> Frame:
    F = Frame(kt.size, frozenset(kt.edges))
    return reflexive_transitive_closure(F) if kt.closure else F


def parse_frame(text: str) -> tuple[str, Frame]:
    kt = read_kripke_text(text)
    if kt.valuation or kt.closure_upset:
        raise FrameFormatError("valuation lines are not allowed in a frame file")
    return kt.name, frame_from_text(kt)


def load_frame(path: str | os.PathLike) -> tuple[str, Frame]:
    with open(path, encoding="utf-8") as fh:
        return parse_frame(fh.read())


def format_frame(F: Frame, name: str = "F", comments: Iterable[str] = (), extra: Iterable[str] = ()) -> str:
    lines = [f"frame {name}"]
    lines += [f"# {c}" for c in comments]
    lines.append(f"points {F.size}")
    lines += [f"edge {a} {b}" for a, b in sorted(F.relation)]
    lines += list(extra)
    lines.append("end")
    return "\n".join(lines) + "\n"
