"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from sukit.formula import BOT, And, Implies, Or, Var
from sukit.frame import Frame, reflexive_transitive_closure

NAMES = ("p", "q", "r", "s")

atoms = st.one_of(st.just(BOT), st.sampled_from(NAMES).map(Var))

formulas = st.recursive(
    atoms,
    lambda kids: st.one_of(
        st.builds(And, kids, kids),
        st.builds(Or, kids, kids),
        st.builds(Implies, kids, kids),
    ),
    max_leaves=12,
)


@st.composite
def s4_frames(draw, max_points: int = 5):
    n = draw(st.integers(1, max_points))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * n))
    return reflexive_transitive_closure(Frame(n, frozenset(edges)))


@st.composite
def models(draw, max_points: int = 4):
    from sukit.frame import r_image_mask
    from sukit.semantics import Model

    F = draw(s4_frames(max_points))
    val = {}
    for name in NAMES[:3]:
        seed = draw(st.integers(0, F.full))
        val[name] = r_image_mask(F, seed)
    return Model.from_masks(F, val)
