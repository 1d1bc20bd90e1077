"""Parser/printer round trips and substitution properties."""

import random

import pytest

from polykernel import terms as T
from polykernel.corpus import load_corpus
from polykernel.errors import ParseError
from polykernel.surface import parse_term, print_term


def corpus_names():
    return set(load_corpus().env.names())


def test_roundtrip_corpus_bodies():
    corpus = load_corpus()
    names = set(corpus.env.names())
    for name, entry in corpus.entries.items():
        if entry.body is None:
            continue
        printed = print_term(entry.body)
        assert parse_term(printed, [], names) == entry.body, name
        printed_ty = print_term(entry.ty)
        assert parse_term(printed_ty, [], names) == entry.ty, name


def test_arrow_is_right_associative():
    t = parse_term("bool -> bool -> bool", [], corpus_names())
    assert isinstance(t, T.Pi)
    assert isinstance(t.codomain, T.Pi)


def test_binder_shorthand_groups_names():
    names = corpus_names()
    a = parse_term("λx,y:bool. x", [], names)
    b = parse_term("λx:bool. λy:bool. x", [], names)
    assert a == b


def test_id_sugar():
    t = parse_term("O ={nat} O", [], corpus_names())
    assert isinstance(t, T.Id)
    assert t.ty == T.Const("nat")


def test_unbound_name_rejected():
    with pytest.raises(ParseError):
        parse_term("zzz", [], corpus_names())


def test_trailing_input_rejected():
    with pytest.raises(ParseError):
        parse_term("O )", [], corpus_names())


def test_alpha_equality_ignores_hints():
    a = T.Lam("x", T.STAR, T.Var(0, "x"))
    b = T.Lam("y", T.STAR, T.Var(0, "y"))
    assert a == b


def random_term(rng, depth=0, size=6):
    """Small closed-ish term generator for substitution properties."""
    if size <= 1 or (depth > 0 and rng.random() < 0.3):
        if depth and rng.random() < 0.7:
            return T.Var(rng.randrange(depth))
        return T.Sort("star")
    pick = rng.random()
    if pick < 0.4:
        return T.Lam("x", random_term(rng, depth, size // 2),
                     random_term(rng, depth + 1, size - 1))
    if pick < 0.7:
        return T.App(random_term(rng, depth, size // 2),
                     random_term(rng, depth, size // 2))
    return T.Pi("x", random_term(rng, depth, size // 2),
                random_term(rng, depth + 1, size - 1))


def test_shift_zero_is_identity():
    rng = random.Random(2024)
    for _ in range(300):
        t = random_term(rng, depth=3)
        assert T.shift(t, 0) == t


def test_shift_composes():
    rng = random.Random(99)
    for _ in range(300):
        t = random_term(rng, depth=3)
        assert T.shift(T.shift(t, 1), 1) == T.shift(t, 2)


def test_subst_after_shift_cancels():
    rng = random.Random(7)
    for _ in range(300):
        t = random_term(rng, depth=2)
        s = random_term(rng, depth=0)
        assert T.subst(T.shift(t, 1, 0), 0, s) == t


def test_open_body_substitutes_binder():
    # (λx. x y)[apply to z] — indices line up with the outer context
    body = T.App(T.Var(0), T.Var(1))
    assert T.open_body(body, T.Var(4)) == T.App(T.Var(4), T.Var(0))
