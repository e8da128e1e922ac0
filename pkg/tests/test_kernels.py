import os
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from sukit import kernels
from sukit.frame import random_s4_frame, upset_masks
from sukit.semantics import compile_program
from sukit.strong_union import dup_masks
from sukit.formula import variables

from strategies import formulas

needs_ext = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")


@needs_ext
@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6), formulas)
def test_refute_parity(n, seed, f):
    F = random_s4_frame(n, seed)
    order = sorted(variables(f))
    program = compile_program(f, order)
    ups = tuple(upset_masks(F)) if order else (0,)
    args = (F.succ, F.pred, program, [ups] * len(order), F.full)
    py = kernels.refute(*args, backend="python")
    c = kernels.refute(*args, backend="cython")
    assert (py is None) == (c is None)
    if py is not None:
        assert tuple(py[0]) == tuple(c[0]) and py[1] == c[1]


@needs_ext
@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10**6), st.integers(1, 3))
def test_su_n_parity(n, seed, arity):
    F = random_s4_frame(n, seed)
    dup = dup_masks(F)
    py = kernels.su_n_failure(F.succ, F.pred, dup, arity, backend="python")
    c = kernels.su_n_failure(F.succ, F.pred, dup, arity, backend="cython")
    if py is None or c is None:
        assert py == c
    else:
        assert py[0] == c[0] and tuple(py[1]) == tuple(c[1])


@needs_ext
@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.integers(0, 10**6), st.data())
def test_strongly_unites_parity(n, seed, data):
    F = random_s4_frame(n, seed)
    z = data.draw(st.integers(0, n - 1))
    xs = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=4))
    dup = dup_masks(F)
    assert bool(kernels.strongly_unites(F.succ, dup, z, xs, "python")) == \
        bool(kernels.strongly_unites(F.succ, dup, z, xs, "cython"))


def test_pure_python_override():
    env = dict(os.environ, SUKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import sukit; print(sukit.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


def test_large_frames_fall_back():
    assert not kernels._use_c(65, None)
