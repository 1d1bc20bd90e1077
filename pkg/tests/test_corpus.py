"""The bundled corpus: loading, computation laws, mutation plumbing."""

import time

import pytest

from polykernel import terms as T
from polykernel.corpus import load_corpus
from polykernel.errors import TypeError_, UnknownName


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


@pytest.fixture(scope="module")
def checker(corpus):
    return corpus.checker()


def test_every_entry_typechecks_on_load():
    # load_corpus checks every declaration; a fresh load stays under budget
    import polykernel.corpus as c

    c.load_corpus.cache_clear()
    t0 = time.perf_counter()
    corpus = c.load_corpus()
    assert time.perf_counter() - t0 < 5.0
    assert len(corpus.entries) > 40


def test_get_returns_body_type_flags(corpus):
    body, ty, flags = corpus.get("q_O")
    assert ty == corpus.parse("Ind O")
    assert not flags.identity


def test_get_unknown_name(corpus):
    with pytest.raises(UnknownName):
        corpus.get("zzz")


def test_church_numerals(corpus, checker):
    assert corpus.church_numeral(0) == T.Const("O")
    for n in range(4):
        checker.check([], corpus.church_numeral(n), T.Const("nat"))
    assert checker.convertible(corpus.church_numeral(3), corpus.get("church3")[0])


def test_stream_laws_with_fresh_variables(corpus, checker):
    # hd (corec α h t x) =β h x and tl (corec α h t x) =β corec α h t (t x)
    ctx_names = ["α", "h", "t", "x"]
    ctx = [
        ("α", T.STAR),
        ("h", corpus_arrow(corpus, "α -> bool", ctx_names[:1])),
        ("t", corpus_arrow(corpus, "α -> α", ctx_names[:2])),
        ("x", corpus_arrow(corpus, "α", ctx_names[:3])),
    ]
    checker.wf_context(ctx)
    hd_law_l = parse_in(corpus, "hd (corec_s α h t x)", ctx_names)
    hd_law_r = parse_in(corpus, "h x", ctx_names)
    assert checker.convertible(hd_law_l, hd_law_r)
    tl_law_l = parse_in(corpus, "tl (corec_s α h t x)", ctx_names)
    tl_law_r = parse_in(corpus, "corec_s α h t (t x)", ctx_names)
    assert checker.convertible(tl_law_l, tl_law_r)


def test_quotient_law_by_conversion(corpus, checker):
    ctx = [("x", T.Const("bool"))]
    lhs = parse_in(corpus, "fhat (cls x)", ["x"])
    rhs = parse_in(corpus, "idb x", ["x"])
    assert checker.convertible(lhs, rhs)


def test_bisimulation_ground_facts(corpus, checker):
    pairs = [
        ("hd s1", "hd s2"),
        ("hd (tl s1)", "hd (tl s2)"),
        ("tl (tl s1)", "s1"),
        ("tl (tl s2)", "s2"),
    ]
    for l, r in pairs:
        assert checker.convertible(corpus.parse(l), corpus.parse(r)), (l, r)


def test_trivial_quotient_witnesses_check(corpus, checker):
    # all four laws are inhabited by the bundled terms, by conversion alone
    for name in ("tq_sound", "tq_rec", "tq_ind", "tq_eff"):
        body, ty, _ = corpus.get(name)
        checker.check([], body, ty)


def test_relativized_naturals_compute(corpus, checker):
    # u_succ (u_succ u_O) packs the numeral 2 with its induction proof
    opened = corpus.parse("(λn:N. n nat (λx:nat. λp:Ind x. x)) (u_succ (u_succ u_O))")
    assert checker.convertible(opened, corpus.church_numeral(2))


def test_mutate_checks_replacement(corpus):
    with pytest.raises(TypeError_):
        corpus.mutate("s2", "true")
    mutant = corpus.mutate("s2", "s1")
    assert mutant.get("s2")[0] == T.Const("s1")
    # the original is untouched
    assert corpus.get("s2")[0] != T.Const("s1")


def parse_in(corpus, src, ctx_names):
    from polykernel.surface import parse_term

    return parse_term(src, list(ctx_names), set(corpus.env.names()))


def corpus_arrow(corpus, src, ctx_names):
    return parse_in(corpus, src, ctx_names)
