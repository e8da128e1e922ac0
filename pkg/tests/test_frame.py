from itertools import product

import pytest
from hypothesis import given, strategies as st

from sukit.frame import (
    CapExceededError,
    Frame,
    FrameFormatError,
    NotS4Error,
    antichain,
    box,
    chain,
    complement,
    diamond,
    end_of,
    ends,
    enumerate_s4_frames,
    format_frame,
    generated_subframe,
    heyting_neg,
    is_s4,
    is_upset,
    parse_frame,
    r_image,
    random_s4_frame,
    reflexive_transitive_closure,
    roots,
    upset_masks,
    upsets,
)

from strategies import s4_frames


def _brute_preorders(n):
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    out = set()
    for bits in product((0, 1), repeat=len(pairs)):
        rel = {(a, a) for a in range(n)} | {pr for pr, bit in zip(pairs, bits) if bit}
        if all((a, c) in rel for a, b in rel for b2, c in rel if b == b2):
            out.add(frozenset(rel))
    return out


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29), (4, 355)])
def test_enumeration_matches_brute_force(n, count):
    frames = list(enumerate_s4_frames(n))
    assert len(frames) == count
    assert {F.relation for F in frames} == _brute_preorders(n)


@pytest.mark.slow
def test_five_point_count():
    assert sum(1 for _ in enumerate_s4_frames(5)) == 6942


def test_enumeration_cap():
    with pytest.raises(CapExceededError):
        list(enumerate_s4_frames(6))


def test_operator_examples_on_chain():
    F = chain(3)
    assert r_image(F, {1}) == {1, 2}
    assert diamond(F, {1}) == {0, 1}
    assert box(F, {1, 2}) == {1, 2}
    assert box(F, {0, 1}) == frozenset()
    assert complement(F, {0}) == {1, 2}
    assert heyting_neg(F, {2}) == frozenset()
    assert heyting_neg(antichain(3), {0}) == {1, 2}


def test_heyting_neg_needs_s4():
    F = Frame(2, frozenset({(0, 1)}))
    with pytest.raises(NotS4Error):
        heyting_neg(F, {0})


@given(s4_frames(), st.data())
def test_box_diamond_duality(F, data):
    X = data.draw(st.sets(st.integers(0, F.size - 1)))
    assert box(F, X) == complement(F, diamond(F, complement(F, X)))
    assert diamond(F, X) >= X
    assert box(F, X) <= X
    assert is_upset(F, box(F, X))
    assert is_upset(F, r_image(F, X))


@given(s4_frames())
def test_upsets_are_exactly_the_closed_sets(F):
    ups = set(upset_masks(F))
    brute = {m for m in range(F.full + 1) if all(F.succ[w] & ~m == 0 for w in range(F.size) if m >> w & 1)}
    assert ups == brute
    assert list(upset_masks(F)) == sorted(ups)


def test_upset_cap():
    with pytest.raises(CapExceededError):
        upset_masks(antichain(6), cap=10)
    assert len(upsets(antichain(3))) == 8


@given(s4_frames())
def test_closure_is_idempotent(F):
    assert is_s4(F)
    assert reflexive_transitive_closure(F) == F


def test_roots_ends_generated_subframes():
    F = chain(3)
    assert roots(F) == {0}
    assert ends(F) == {2}
    assert end_of(F, 0) == {2}
    sub, pmap = generated_subframe(F, 1)
    assert sub.size == 2 and pmap == (1, 2)
    assert sub == chain(2)
    assert roots(antichain(2)) == frozenset()


@given(st.integers(1, 7), st.integers(0, 10**6))
def test_random_frames_are_s4_and_seeded(n, seed):
    F = random_s4_frame(n, seed)
    assert F.size == n and is_s4(F)
    assert random_s4_frame(n, seed) == F


def test_frame_text_round_trip():
    F = random_s4_frame(5, 3)
    name, G = parse_frame(format_frame(F, "f5", ["a comment"]))
    assert name == "f5" and G == F


def test_frame_text_closure():
    _, F = parse_frame("frame c\n# chain\npoints 3\nedge 0 1\nedge 1 2\nclosure\nend\n")
    assert F == chain(3)


@pytest.mark.parametrize(
    "text, message",
    [
        ("points 2\nend\n", "frame"),
        ("frame a\npoints 2\nedge 0 5\nend\n", "line 3"),
        ("frame a\npoints 2\nedge 0 x\nend\n", "integers"),
        ("frame a\npoints 2\n", "end"),
        ("frame a\npoints 2\nend\nedge 0 1\n", "after"),
        ("frame a\npoints 2\nbogus\nend\n", "unrecognised"),
        ("frame a\npoints 1\nval p 0\nend\n", "valuation"),
    ],
)
def test_frame_text_errors(text, message):
    with pytest.raises(FrameFormatError, match=message):
        parse_frame(text)
