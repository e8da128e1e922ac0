"""Intuitionistic Kripke semantics on finite S4 frames.

Truth sets are computed two ways: ``truth_mask`` walks the formula directly,
while validity checks compile the formula to a straight-line program and hand
it to the kernel in ``sukit.kernels``, which enumerates valuations with the
subformulas that do not depend on the innermost variables hoisted out.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from sukit import kernels
from sukit.formula import And, Bottom, Formula, Implies, Or, Var, conj, variables
from sukit.frame import (
    DEFAULT_UPSET_CAP,
    Frame,
    FrameFormatError,
    NotS4Error,
    _upset_masks,
    format_frame,
    frame_from_text,
    is_s4,
    iter_bits,
    points_of,
    read_kripke_text,
    enumerate_s4_frames,
    random_s4_frame,
)

__all__ = [
    "Model",
    "SearchBounds",
    "truth_set",
    "truth_mask",
    "satisfies",
    "satisfies_all",
    "frame_validates",
    "consequence_on_frame",
    "find_countervaluation",
    "find_countermodel",
    "find_su_countermodel",
    "compile_program",
    "parse_model",
    "format_model",
    "load_model",
]


@dataclass(frozen=True)
class Model:
    """An S4 frame with a monotone valuation; unlisted variables are empty."""

    frame: Frame
    valuation: Mapping[str, frozenset[int]]
    masks: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        F = self.frame
        if not is_s4(F):
            raise NotS4Error("model frame is not reflexive and transitive")
        masks = {}
        val = {}
        for var, pts in self.valuation.items():
            m = F.check_points(pts)
            if _up(F, m) != m:
                raise ValueError(f"valuation of {var!r} is not an upset")
            masks[var] = m
            val[var] = points_of(m)
        object.__setattr__(self, "valuation", val)
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_masks(cls, frame: Frame, masks: Mapping[str, int]) -> "Model":
        return cls(frame, {v: points_of(m) for v, m in masks.items()})


def _up(F: Frame, m: int) -> int:
    out = 0
    for x in iter_bits(m):
        out |= F.succ[x]
    return out


@dataclass(frozen=True)
class SearchBounds:
    max_points: int = 4
    upset_cap: int = DEFAULT_UPSET_CAP
    seed: int = 0
    # extra randomly sampled frames above max_points; 0 keeps the search exhaustive-only
    random_frames: int = 0
    random_max_points: int = 7

    def __post_init__(self) -> None:
        if self.max_points < 1:
            raise ValueError("max_points must be at least 1")
        if self.upset_cap < 1:
            raise ValueError("upset_cap must be positive")


# ---------------------------------------------------------------------------
# direct evaluation


def truth_mask(M: Model, f: Formula) -> int:
    F = M.frame
    full = F.full
    memo: dict[Formula, int] = {}

    def ev(g: Formula) -> int:
        hit = memo.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bottom):
            out = 0
        elif isinstance(g, Var):
            out = M.masks.get(g.name, 0)
        elif isinstance(g, And):
            out = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            out = ev(g.left) | ev(g.right)
        elif isinstance(g, Implies):
            ok = (full & ~ev(g.left)) | ev(g.right)
            out = 0
            for w, s in enumerate(F.succ):
                if s & ~ok == 0:
                    out |= 1 << w
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = out
        return out

    return ev(f)


def truth_set(M: Model, f: Formula) -> frozenset[int]:
    return points_of(truth_mask(M, f))


def satisfies(M: Model, w: int, f: Formula) -> bool:
    M.frame.check_point(w)
    return bool(truth_mask(M, f) >> w & 1)


def satisfies_all(M: Model, w: int, gamma: Iterable[Formula]) -> bool:
    M.frame.check_point(w)
    return all(truth_mask(M, g) >> w & 1 for g in gamma)


# ---------------------------------------------------------------------------
# compiled evaluation


def compile_program(f: Formula, order: Sequence[str]):
    """Straight-line program for ``f`` with variables indexed by ``order``.

    Returns ``(ops, arg_a, arg_b, levels)``; shared subformulas are emitted
    once and the formula itself is the last instruction.
    """
    index = {v: i for i, v in enumerate(order)}
    ops: list[int] = []
    arg_a: list[int] = []
    arg_b: list[int] = []
    levels: list[int] = []
    slot: dict[Formula, int] = {}

    def emit(g: Formula) -> int:
        hit = slot.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Bottom):
            op, a, b, lv = kernels.OP_BOT, 0, 0, -1
        elif isinstance(g, Var):
            if g.name not in index:
                raise ValueError(f"variable {g.name!r} missing from order")
            op, a, b, lv = kernels.OP_VAR, index[g.name], 0, index[g.name]
        else:
            a = emit(g.left)
            b = emit(g.right)
            op = {And: kernels.OP_AND, Or: kernels.OP_OR, Implies: kernels.OP_IMP}[type(g)]
            lv = max(levels[a], levels[b])
        ops.append(op)
        arg_a.append(a)
        arg_b.append(b)
        levels.append(lv)
        slot[g] = len(ops) - 1
        return slot[g]

    root = emit(f)
    if root != len(ops) - 1:  # pragma: no cover - emit always finishes with the root
        raise AssertionError("root is not last")
    return ops, arg_a, arg_b, levels


def find_countervaluation(F: Frame, f: Formula, cap: int | None = None, backend: str | None = None):
    """Lexicographically least valuation (variables sorted by name, upsets ascending)
    under which some point of ``F`` refutes ``f``; returns ``(masks, truth)`` or ``None``."""
    if not is_s4(F):
        raise NotS4Error("frame is not reflexive and transitive")
    cap = DEFAULT_UPSET_CAP if cap is None else cap
    order = sorted(variables(f))
    ups = _upset_masks(F.succ, cap) if order else (0,)
    program = compile_program(f, order)
    hit = kernels.refute(F.succ, F.pred, program, [ups] * len(order), F.full, backend)
    if hit is None:
        return None
    idx, truth = hit
    return {v: ups[i] for v, i in zip(order, idx)}, truth


def _cone_roots(F: Frame) -> list[int]:
    # one point per bottom cluster; every point lies in the cone of one of them
    out = []
    seen = set()
    for w in F.points:
        s = F.succ[w]
        if s in seen:
            continue
        if all(F.succ[v] >> w & 1 for v in iter_bits(F.pred[w])):
            seen.add(s)
            out.append(w)
    return out


def _cone_upsets(F: Frame, w: int, cap: int) -> tuple[int, ...]:
    cone = sorted(iter_bits(F.succ[w]))
    index = {p: i for i, p in enumerate(cone)}
    sub = []
    for p in cone:
        row = 0
        for q in iter_bits(F.succ[p]):
            row |= 1 << index[q]
        sub.append(row)
    out = []
    for m in _upset_masks(tuple(sub), cap):
        full_mask = 0
        for i in iter_bits(m):
            full_mask |= 1 << cone[i]
        out.append(full_mask)
    return tuple(out)


def frame_validates(F: Frame, f: Formula, cap: int | None = None, backend: str | None = None) -> bool:
    """True iff every monotone valuation of ``variables(f)`` makes ``f`` true everywhere.

    Truth at a point only depends on its cone, so each bottom cluster is
    checked against the upsets of its own cone.
    """
    if not is_s4(F):
        raise NotS4Error("frame is not reflexive and transitive")
    cap = DEFAULT_UPSET_CAP if cap is None else cap
    order = sorted(variables(f))
    program = compile_program(f, order)
    for w in _cone_roots(F):
        ups = _cone_upsets(F, w, cap) if order else (0,)
        if kernels.refute(F.succ, F.pred, program, [ups] * len(order), F.succ[w], backend) is not None:
            return False
    return True


def consequence_on_frame(F: Frame, gamma: Sequence[Formula], alpha: Formula,
                         cap: int | None = None, backend: str | None = None) -> bool:
    """Local consequence on every point: premises true at y force ``alpha`` at y."""
    gamma = list(gamma)
    # truth sets are upsets, so ||/\G -> a|| = W  iff  ||/\G|| is inside ||a||
    f = Implies(conj(gamma), alpha) if gamma else alpha
    return frame_validates(F, f, cap, backend)


# ---------------------------------------------------------------------------
# countermodel search


@lru_cache(maxsize=None)
def _frames(n: int) -> tuple[Frame, ...]:
    return tuple(enumerate_s4_frames(n))


def find_countermodel(f: Formula, max_points: int = 4, frame_filter=None,
                      cap: int | None = None, backend: str | None = None):
    """First ``(Model, point)`` refuting ``f`` over all S4 frames with at most ``max_points``
    points, by frame size, then enumeration order, then valuation order."""
    if max_points < 1:
        raise ValueError("max_points must be at least 1")
    for n in range(1, max_points + 1):
        for F in _frames(n):
            if frame_filter is not None and not frame_filter(F):
                continue
            hit = _refute_on(F, f, cap, backend)
            if hit is not None:
                return hit
    return None


def _refute_on(F: Frame, f: Formula, cap, backend):
    hit = find_countervaluation(F, f, cap, backend)
    if hit is None:
        return None
    masks, truth = hit
    bad = F.full & ~truth
    point = (bad & -bad).bit_length() - 1
    return Model.from_masks(F, masks), point


def find_su_countermodel(f: Formula, bounds: SearchBounds | None = None, backend: str | None = None):
    """Refute ``f`` on a frame satisfying (su2); ``None`` means none up to the bound.

    Exhaustive over labeled frames up to ``bounds.max_points``, followed by
    ``bounds.random_frames`` seeded samples if requested.  Not finding one is
    not a validity proof.
    """
    from sukit.strong_union import satisfies_su2

    bounds = bounds or SearchBounds()
    hit = find_countermodel(f, bounds.max_points, satisfies_su2, bounds.upset_cap, backend)
    if hit is None and bounds.random_frames:
        lo = bounds.max_points + 1
        hi = max(lo, bounds.random_max_points)
        for i in range(bounds.random_frames):
            n = lo + (bounds.seed + i) % (hi - lo + 1)
            F = random_s4_frame(n, bounds.seed * 1_000_003 + i)
            if satisfies_su2(F):
                hit = _refute_on(F, f, bounds.upset_cap, backend)
                if hit is not None:
                    break
    if hit is not None:
        M, w = hit
        if not satisfies_su2(M.frame) or satisfies(M, w, f):  # pragma: no cover - post-check
            raise AssertionError("countermodel failed its post-check")
    return hit


# ---------------------------------------------------------------------------
# model file format


def parse_model(text: str) -> tuple[str, Model]:
    kt = read_kripke_text(text)
    F = frame_from_text(kt)
    if not is_s4(F):
        raise FrameFormatError("model frame is not reflexive and transitive (add 'closure')")
    val = {}
    for var, pts in kt.valuation.items():
        if not _valid_name(var):
            raise FrameFormatError(f"invalid variable name {var!r}")
        m = 0
        for p in pts:
            m |= 1 << p
        if kt.closure_upset:
            m = _up(F, m)
        elif _up(F, m) != m:
            raise FrameFormatError(f"valuation of {var!r} is not an upset (add 'closure-upset')")
        val[var] = points_of(m)
    return kt.name, Model(F, val)


def _valid_name(name: str) -> bool:
    try:
        Var(name)
    except ValueError:
        return False
    return True


def load_model(path: str | os.PathLike) -> tuple[str, Model]:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read())


def format_model(M: Model, name: str = "M", comments: Iterable[str] = ()) -> str:
    extra = [
        "val " + " ".join([var] + [str(p) for p in sorted(M.valuation[var])])
        for var in sorted(M.valuation)
    ]
    return format_frame(M.frame, name, comments, extra)
