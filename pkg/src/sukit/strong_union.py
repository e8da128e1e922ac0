"""Strong union, the (su_n) frame conditions, (Uni), and the su correspondence harness."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from sukit import kernels
from sukit.formula import axiom
from sukit.frame import Frame, NotS4Error, heyting_neg_mask, is_s4, iter_bits, points_of
from sukit.semantics import Model, frame_validates, satisfies

__all__ = [
    "strongly_unites",
    "su_n_failure",
    "satisfies_su_n",
    "satisfies_su2",
    "satisfies_su",
    "uni_failure",
    "satisfies_uni",
    "build_su_countermodel",
    "CorrespondenceReport",
    "correspondence_check",
    "report_line",
    "PreconditionError",
]


class PreconditionError(ValueError):
    pass


def _require_s4(F: Frame) -> None:
    if not is_s4(F):
        raise NotS4Error("frame is not reflexive and transitive")


@lru_cache(maxsize=65536)
def _dup_of(succ: tuple[int, ...], pred: tuple[int, ...]) -> tuple[int, ...]:
    # dup[x]: points sharing a successor with x, i.e. the diamond of r_image({x})
    out = []
    for s in succ:
        m = 0
        for y in iter_bits(s):
            m |= pred[y]
        out.append(m)
    return tuple(out)


def dup_masks(F: Frame) -> tuple[int, ...]:
    return _dup_of(F.succ, F.pred)


def strongly_unites(F: Frame, z: int, xs: Sequence[int], backend: str | None = None) -> bool:
    """``z`` sees every ``x_i``, and each successor of ``z`` is seen from ``x_i``
    or shares a successor with some other ``x_j``, for every ``i``."""
    _require_s4(F)
    xs = list(xs)
    if not xs:
        raise ValueError("need at least one point to unite")
    for p in [z, *xs]:
        F.check_point(p)
    return bool(kernels.strongly_unites(F.succ, dup_masks(F), z, xs, backend))


@lru_cache(maxsize=65536)
def _su_n_failure(succ, pred, n, backend):
    return kernels.su_n_failure(succ, pred, _dup_of(succ, pred), n, backend)


def su_n_failure(F: Frame, n: int, backend: str | None = None):
    """``(w, xs)`` with no successor of ``w`` strongly uniting ``xs``, or ``None``."""
    _require_s4(F)
    if n < 1:
        raise ValueError("n must be a positive integer")
    return _su_n_failure(F.succ, F.pred, n, backend)


def satisfies_su_n(F: Frame, n: int, backend: str | None = None) -> bool:
    return su_n_failure(F, n, backend) is None


def satisfies_su2(F: Frame, backend: str | None = None) -> bool:
    return su_n_failure(F, 2, backend) is None


def satisfies_su(F: Frame, backend: str | None = None) -> bool:
    """(su) for every arity; equivalent to (su2) on S4 frames, so only (su2) is checked."""
    return satisfies_su2(F, backend)


def uni_failure(F: Frame):
    """``(s, w, v)`` violating (Uni), or ``None``."""
    _require_s4(F)
    succ, pred = F.succ, F.pred
    dup = dup_masks(F)
    for s in F.points:
        below = list(iter_bits(succ[s]))
        for i, w in enumerate(below):
            for v in below[i:]:
                cand = succ[s] & pred[w] & pred[v]
                allowed = dup[w] | dup[v]
                if not any(succ[u] & ~allowed == 0 for u in iter_bits(cand)):
                    return s, w, v
    return None


def satisfies_uni(F: Frame) -> bool:
    return uni_failure(F) is None


def build_su_countermodel(F: Frame, w: int, x: int, y: int) -> Model:
    """Valuation refuting su at ``w`` from a failure ``(w, x, y)`` of (su2).

    p and q hold exactly above x and y; r holds at the points that do not see
    x (the box of the complement of the singleton, itself an upset), and s
    likewise for y.
    """
    _require_s4(F)
    for p in (w, x, y):
        F.check_point(p)
    if not (F.sees(w, x) and F.sees(w, y)):
        raise PreconditionError(f"{w} must see both {x} and {y}")
    dup = dup_masks(F)
    for z in iter_bits(F.succ[w]):
        if kernels.strongly_unites(F.succ, dup, z, [x, y]):
            raise PreconditionError(f"point {z} strongly unites {x} and {y}; not a failure of (su2)")
    up_x, up_y = F.succ[x], F.succ[y]
    M = Model.from_masks(F, {
        "p": up_x,
        "q": up_y,
        "r": heyting_neg_mask(F, 1 << x),
        "s": heyting_neg_mask(F, 1 << y),
    })
    if satisfies(M, w, axiom("su")):
        raise AssertionError(f"constructed valuation does not refute su at {w}")
    return M


@dataclass(frozen=True)
class CorrespondenceReport:
    validates_su: bool
    satisfies_su2: bool
    witness: tuple | None = None

    @property
    def agree(self) -> bool:
        return self.validates_su == self.satisfies_su2


def correspondence_check(F: Frame, cap: int | None = None, backend: str | None = None) -> CorrespondenceReport:
    _require_s4(F)
    failure = su_n_failure(F, 2, backend)
    valid = frame_validates(F, axiom("su"), cap, backend)
    witness = None
    if failure is not None:
        w, (x, y) = failure
        witness = (w, x, y)
    return CorrespondenceReport(valid, failure is None, witness)


def report_line(frame_id: str, F: Frame, cap: int | None = None) -> str:
    bits = {
        "su2": satisfies_su2(F),
        "su": frame_validates(F, axiom("su"), cap),
        "uni": satisfies_uni(F),
        "kp": frame_validates(F, axiom("kp"), cap),
        "sa": frame_validates(F, axiom("sa"), cap),
    }
    return frame_id + "".join(f" {k}={int(v)}" for k, v in bits.items())


def describe_points(mask: int) -> str:
    return "{" + ",".join(str(p) for p in sorted(points_of(mask))) + "}"
