"""Polyset semantics: the exact product model and the generated model."""

import pytest

from polykernel import terms as T
from polykernel.corpus import load_corpus
from polykernel.errors import ImproperFamily, NotAType
from polykernel.model import (
    EmptySet,
    FiniteSet,
    FullSet,
    GeneratedModel,
    IsChurchNumeralFamily,
    IsReflFamily,
    PiModel,
    REFL,
    family_from_spec,
    pi_model_decide,
)
from polykernel.weca import LAMBDA_ID, Eraser, ULam, UVar, Verdict, normalize


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


@pytest.fixture(scope="module")
def checker(corpus):
    return corpus.checker()


@pytest.fixture(scope="module")
def pm(checker):
    return PiModel(checker)


@pytest.fixture(scope="module")
def gm(checker):
    return GeneratedModel(checker, LAMBDA_ID)


@pytest.fixture(scope="module")
def erase(checker):
    return Eraser(checker).erase


# ---------------------------------------------------------------- product model

def test_pi_kind_sizes(pm, corpus):
    assert len(pm.interp_kind(T.STAR)) == 2
    assert len(pm.interp_kind(corpus.parse("nat -> *"))) == 2
    assert len(pm.interp_kind(corpus.parse("Πx:bot. *"))) == 1


def test_pi_emptiness_decisions(checker, corpus):
    assert pi_model_decide(checker, corpus.parse("bot")) == Verdict.NO
    for name in ("nat", "bool", "ind_nat", "ind_N", "sim_s1_s2"):
        assert pi_model_decide(checker, corpus.parse(name)) == Verdict.YES


def test_pi_vacuous_product(checker, corpus):
    # a product over an empty carrier is inhabited regardless of the body
    assert pi_model_decide(checker, corpus.parse("Πx:bot. bot")) == Verdict.YES


def test_pi_rejects_kinds(checker, corpus):
    with pytest.raises(NotAType):
        pi_model_decide(checker, corpus.parse("nat -> *"))


def test_pi_soundness_over_corpus(pm, checker, corpus):
    failures = []
    for name in corpus.entries:
        ty = corpus.type_of(name)
        if pm.is_kind_syntax(ty) or ty == T.KIND:
            continue
        if pi_model_decide(checker, ty) != Verdict.YES:
            failures.append(name)
    assert failures == []


# --------------------------------------------------------------- generated model

def test_refl_inhabits_every_nonempty_carrier(gm, corpus):
    for src in ("nat", "bool", "O ={nat} O"):
        assert gm.member(REFL, corpus.parse(src)) == Verdict.YES
    # Leibniz equalities quantify over predicates, so probing defers
    assert gm.member(REFL, corpus.parse("eq_bool true true")) == Verdict.UNKNOWN


def test_tower_membership(gm, corpus, erase):
    two = normalize(erase(corpus.church_numeral(2)), LAMBDA_ID)
    assert gm.member(two, T.Const("nat")) == Verdict.YES
    # K lands in nat (it is the erasure of zero) and in bool
    K = ULam("x", ULam("y", UVar(1)))
    assert gm.member(K, T.Const("nat")) == Verdict.YES
    assert gm.member(K, T.Const("bool")) == Verdict.YES
    # the one-argument identity is not a boolean
    I = ULam("x", UVar(0))
    assert gm.member(I, T.Const("bool")) == Verdict.NO


def test_emptiness_evidence(gm):
    assert gm.is_empty(T.Const("bot")).verdict == Verdict.YES
    ev = gm.is_empty(T.Const("bool"))
    assert ev.verdict == Verdict.NO and ev.witness == REFL


def test_identity_polysets(gm, corpus):
    eq = gm.interp_id(T.Const("nat"), corpus.parse("O"), corpus.parse("O"))
    assert eq.member(REFL) == Verdict.YES
    neq = gm.interp_id(T.Const("bool"), corpus.parse("true"), corpus.parse("false"))
    assert neq.member(REFL) == Verdict.NO


def test_sigma_membership(gm, corpus, erase):
    ty = corpus.parse("Σx:bool. x ={bool} true")
    wit = corpus.parse("<true, refl @ Σx:bool. x ={bool} true>")
    u = normalize(erase(wit), LAMBDA_ID)
    assert gm.member(u, ty) == Verdict.YES
    # the componentwise refl probe is inconclusive here, never a refutation
    assert gm.member(REFL, ty) == Verdict.UNKNOWN
    diag = corpus.parse("Σx:bool. x ={bool} x")
    assert gm.member(REFL, diag) == Verdict.YES


def test_pi_over_kind_is_deferred(gm, corpus):
    # quantification over all predicates is not settled by probing
    assert gm.member(REFL, T.Const("ind_nat")) == Verdict.UNKNOWN


def test_leibniz_validity(gm, corpus):
    assert gm.leibniz_valid(corpus.parse("O"), corpus.parse("O")) == Verdict.YES
    assert gm.leibniz_valid(corpus.parse("true"), corpus.parse("false")) == Verdict.NO


# ---------------------------------------------------------------- witness library

def test_properness():
    assert IsChurchNumeralFamily().proper()
    # the family that accepts exactly refl is improper by construction
    assert not IsReflFamily().proper()


def test_church_numeral_family(corpus, erase):
    fam = IsChurchNumeralFamily()
    two = normalize(erase(corpus.church_numeral(2)), LAMBDA_ID)
    assert fam.apply(two).member(two) != Verdict.NO
    assert fam.apply(REFL).member(REFL) == Verdict.NO


def test_family_from_spec(corpus):
    fam = family_from_spec({"family": "IsChurchNumeral"}, corpus)
    assert fam.proper()
    with pytest.raises(ImproperFamily):
        family_from_spec({"family": "NoSuchFamily"}, corpus)


def test_finite_set_contains_refl():
    s = FiniteSet(frozenset([ULam("x", UVar(0))]))
    assert s.member(REFL) == Verdict.YES
    assert EmptySet().member(REFL) == Verdict.NO
    assert FullSet().member(REFL) == Verdict.YES
