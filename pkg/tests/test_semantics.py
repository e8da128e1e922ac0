import pytest
from hypothesis import given, settings, strategies as st

from sukit import kernels
from sukit.formula import And, Implies, Or, axiom, neg, parse
from sukit.frame import FrameFormatError, NotS4Error, antichain, chain, enumerate_s4_frames, Frame, iter_bits
from sukit.semantics import (
    Model,
    SearchBounds,
    consequence_on_frame,
    find_countermodel,
    find_countervaluation,
    find_su_countermodel,
    format_model,
    frame_validates,
    parse_model,
    satisfies,
    truth_mask,
    truth_set,
)

from strategies import formulas, models

BACKENDS = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])


def test_excluded_middle_on_two_chain():
    M = Model(chain(2), {"p": frozenset({1})})
    lem = parse("p | ~p")
    assert truth_set(M, lem) == {1}
    assert not satisfies(M, 0, lem)
    assert satisfies(M, 0, neg(neg(lem)))


def test_missing_variables_are_empty():
    M = Model(chain(2), {})
    assert truth_set(M, parse("~p")) == {0, 1}


def test_model_rejects_non_upsets_and_non_s4():
    with pytest.raises(ValueError, match="upset"):
        Model(chain(2), {"p": frozenset({0})})
    with pytest.raises(NotS4Error):
        Model(Frame(2, frozenset({(0, 1)})), {})


@given(models(), formulas)
def test_truth_sets_are_upsets(M, f):
    m = truth_mask(M, f)
    F = M.frame
    assert all(F.succ[w] & ~m == 0 for w in iter_bits(m))


@given(models(), formulas, formulas)
def test_connective_clauses(M, a, b):
    ta, tb = truth_mask(M, a), truth_mask(M, b)
    assert truth_mask(M, And(a, b)) == ta & tb
    assert truth_mask(M, Or(a, b)) == ta | tb
    imp = truth_mask(M, Implies(a, b))
    for w in M.frame.points:
        expect = all(not (ta >> v & 1) or (tb >> v & 1) for v in iter_bits(M.frame.succ[w]))
        assert bool(imp >> w & 1) == expect


def _brute_validates(F, f):
    from sukit.frame import upset_masks

    names = sorted(__import__("sukit.formula", fromlist=["variables"]).variables(f))
    ups = upset_masks(F)
    import itertools

    for combo in itertools.product(ups, repeat=len(names)):
        M = Model.from_masks(F, dict(zip(names, combo)))
        if truth_mask(M, f) != F.full:
            return False, dict(zip(names, combo))
    return True, None


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6), formulas)
def test_kernel_validity_matches_direct_evaluation(backend, n, seed, f):
    frames = list(enumerate_s4_frames(n))
    F = frames[seed % len(frames)]
    valid, first = _brute_validates(F, f)
    assert frame_validates(F, f, backend=backend) == valid
    hit = find_countervaluation(F, f, backend=backend)
    assert (hit is None) == valid
    if hit is not None:
        masks, truth = hit
        assert masks == first
        assert truth == truth_mask(Model.from_masks(F, masks), f)


def test_validate_examples():
    assert frame_validates(chain(1), parse("p | ~p"))
    assert not frame_validates(chain(2), parse("p | ~p"))
    assert frame_validates(chain(2), parse("~p | ~~p"))
    fork = Frame.from_succ([0b111, 0b010, 0b100])
    assert not frame_validates(fork, parse("~p | ~~p"))
    assert frame_validates(antichain(2), parse("p | ~p"))


def test_countervaluation_is_minimal():
    masks, truth = find_countervaluation(chain(2), parse("p | ~p"))
    assert masks == {"p": 0b10}
    assert truth == 0b10


def test_consequence_on_frame():
    F = chain(3)
    assert consequence_on_frame(F, [parse("p"), parse("p -> q")], parse("q"))
    assert not consequence_on_frame(F, [parse("~~p")], parse("p"))
    assert consequence_on_frame(F, [], parse("p -> p"))


def test_find_countermodel():
    M, w = find_countermodel(parse("p | ~p"), 3)
    assert M.frame.size == 2 and not satisfies(M, w, parse("p | ~p"))
    assert find_countermodel(parse("p -> p"), 3) is None
    kp = axiom("kp")
    M, w = find_countermodel(kp, 4)
    assert not satisfies(M, w, kp)


def test_su_countermodel_search():
    assert find_su_countermodel(axiom("su")) is None
    M, w = find_su_countermodel(parse("p | ~p"), SearchBounds(max_points=2))
    assert M.frame.size == 2
    # the three-point fork satisfies (su2) and refutes weak excluded middle
    hit = find_su_countermodel(parse("~p | ~~p"), SearchBounds(max_points=3))
    assert hit is not None


def test_su_countermodel_random_phase_is_seeded():
    b = SearchBounds(max_points=1, random_frames=30, seed=5)
    a1 = find_su_countermodel(parse("~p | ~~p"), b)
    a2 = find_su_countermodel(parse("~p | ~~p"), b)
    assert a1 is not None and a1 == a2


def test_search_bounds_validation():
    with pytest.raises(ValueError):
        SearchBounds(max_points=0)


def test_model_text_round_trip():
    M = Model(chain(3), {"p": frozenset({1, 2}), "q": frozenset({2})})
    name, M2 = parse_model(format_model(M, "m"))
    assert name == "m" and M2 == M


def test_model_text_upset_handling():
    text = "frame m\npoints 2\nedge 0 1\nclosure\nval p 0\nend\n"
    with pytest.raises(FrameFormatError, match="upset"):
        parse_model(text)
    _, M = parse_model(text.replace("closure\n", "closure\nclosure-upset\n"))
    assert M.valuation["p"] == {0, 1}
    with pytest.raises(FrameFormatError, match="variable"):
        parse_model("frame m\npoints 1\nedge 0 0\nval 9x 0\nend\n")
