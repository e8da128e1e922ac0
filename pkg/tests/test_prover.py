import pytest
from hypothesis import given, settings

from sukit.formula import BOT, Implies, Var, axiom, parse
from sukit.prover import (
    Derivation,
    InstanceCapError,
    Sequent,
    Status,
    check_structural_properties,
    parse_sequent,
    prove_ipc,
    prove_su,
    replay,
    su_instance_universe,
    verify_lemma_su_aa,
    verify_su_star,
)
from sukit.semantics import find_countermodel

from strategies import formulas

p, q = Var("p"), Var("q")


def test_spec_examples():
    assert prove_ipc(Sequent((), parse("p -> p"))).provable
    assert prove_ipc(Sequent((), parse("p | ~p"))).status is Status.NOT_PROVABLE
    assert prove_ipc(Sequent((p, Implies(p, q)), q)).provable


def test_parse_sequent():
    s = parse_sequent("p, (p -> q), q -> r |- r")
    assert s.premises == {p, Implies(p, q), parse("q -> r")}
    assert parse_sequent("|- p").premises == frozenset()
    assert parse_sequent("p -> p").conclusion == parse("p -> p")
    assert str(parse_sequent("q, p |- p")) == "p, q |- p"


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_provable_formulas_have_no_small_countermodel(f):
    out = prove_ipc(Sequent((), f))
    if out.provable:
        assert replay(out.certificate)
        assert find_countermodel(f, 3) is None


@settings(max_examples=100, deadline=None)
@given(formulas)
def test_small_countermodel_means_unprovable(f):
    if find_countermodel(f, 3) is not None:
        assert not prove_ipc(Sequent((), f)).provable


def test_certificate_text_and_replay():
    out = prove_ipc("p & q |- q & p")
    text = out.certificate.to_text()
    assert text.splitlines()[0].startswith("andL [p & q]")
    assert replay(out.certificate)


def test_replay_rejects_tampering():
    out = prove_ipc("p, p -> q |- q")
    d = out.certificate
    forged = Derivation(d.rule, Sequent((p,), q), d.principal, d.children)
    assert not replay(forged)
    wrong_child = Derivation(d.rule, d.sequent, d.principal,
                             (Derivation("ax", Sequent((p,), p)),))
    assert not replay(wrong_child)


def test_prove_su_examples():
    out = prove_su(axiom("su"), depth=0)
    assert out.provable and len(out.instances) == 1
    assert prove_su(parse("p | ~p"), depth=1).status is Status.INCONCLUSIVE
    assert prove_su(parse("p -> p")).provable
    with pytest.raises(ValueError):
        prove_su(parse("p"), depth=-1)


def test_prove_su_cap():
    with pytest.raises(InstanceCapError):
        prove_su(axiom("su"), depth=1, instance_cap=100)


def test_universe_growth():
    f = parse("p | ~p")
    u0 = su_instance_universe(f, 0)
    u1 = su_instance_universe(f, 1)
    assert BOT in u0 and set(u0) <= set(u1)
    assert parse("~(p | ~p)") in u1


@pytest.mark.parametrize("name", ["kp", "sa", "aa_plus"])
def test_su_derives_known_axioms(name):
    out = prove_su(axiom(name), depth=1)
    assert out.provable and replay(out.certificate)


def test_lemma_chain():
    report = verify_lemma_su_aa()
    assert report.passed, report.to_text()
    assert [s.group for s in report.steps] == ["a", "b", "c", "c", "c", "c", "d"]
    control = verify_lemma_su_aa(corrupt=True)
    assert not control.passed and control.failures == ["c3", "d1"]


def test_su_star():
    assert all(verify_su_star(n) for n in (1, 2, 3))
    with pytest.raises(InstanceCapError):
        verify_su_star(4)
    with pytest.raises(ValueError):
        verify_su_star(0)


def test_structural_properties():
    rep = check_structural_properties(seed=3, trials=100)
    assert rep.passed, rep.violations
    assert rep.checked["DT"] == 200 and rep.checked["PC"] == 100 and rep.checked["bot"] == 100
