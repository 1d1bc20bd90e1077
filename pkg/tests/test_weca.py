"""Rewriting configurations, normalization, and erasure."""

import random

import pytest

from helpers import random_strategy_normalize, random_uterm
from polykernel import terms as T
from polykernel.corpus import load_corpus
from polykernel.errors import FuelExhausted
from polykernel.weca import (
    BETA,
    BETAETA,
    LAMBDA_C,
    LAMBDA_ID,
    ONE,
    Eraser,
    UApp,
    UConst,
    ULam,
    UVar,
    Verdict,
    config_named,
    normalize,
    print_uterm,
    step,
    uapps,
    weca_eq,
)

I = ULam("x", UVar(0))
K = ULam("x", ULam("y", UVar(1)))


@pytest.fixture(scope="module")
def corpus():
    return load_corpus()


@pytest.fixture(scope="module")
def eraser(corpus):
    return Eraser(corpus.checker())


def test_beta_step():
    assert step(UApp(I, K), BETA) == K


def test_eta_only_in_betaeta():
    t = ULam("x", UApp(UConst("c"), UVar(0)))
    assert normalize(t, BETA) == t
    assert normalize(t, BETAETA) == UConst("c")


def test_eta_respects_variable_capture():
    t = ULam("x", UApp(UVar(0), UVar(0)))
    assert step(t, BETAETA) is None


def test_c_absorption():
    t = UApp(UConst("c"), uapps(K, I, I))
    assert normalize(t, LAMBDA_C) == UConst("c")


def test_refl_absorption_and_j_iota():
    assert normalize(UApp(UConst("refl"), K), LAMBDA_ID) == UConst("refl")
    j = uapps(UConst("J"), K, I, I, UConst("refl"))
    assert normalize(j, LAMBDA_ID) == normalize(UApp(K, I), LAMBDA_ID)
    stuck = uapps(UConst("J"), K, I, I, UVar(0))
    assert step(stuck, LAMBDA_ID) is None


def test_projections():
    p = uapps(UConst("pair"), K, I)
    assert normalize(UApp(UConst("π1"), p), LAMBDA_ID) == K
    assert normalize(UApp(UConst("π2"), p), LAMBDA_ID) == I
    assert normalize(UApp(UConst("π1"), UConst("refl")), LAMBDA_ID) == UConst("refl")


def test_weca_eq_three_values():
    assert weca_eq(UApp(I, K), K, BETA) == Verdict.YES
    assert weca_eq(K, I, BETA) == Verdict.NO
    omega = ULam("x", UApp(UVar(0), UVar(0)))
    assert weca_eq(UApp(omega, omega), K, BETA, fuel=50) == Verdict.UNKNOWN


def test_one_point_algebra_identifies_everything():
    assert weca_eq(K, I, ONE) == Verdict.YES


def test_fuel_exhaustion_raises():
    omega = ULam("x", UApp(UVar(0), UVar(0)))
    with pytest.raises(FuelExhausted):
        normalize(UApp(omega, omega), BETA, fuel=25)


def test_config_lookup():
    assert config_named("betaeta") is BETAETA
    with pytest.raises(KeyError):
        config_named("zeta")


def test_erasure_drops_type_layer(corpus, eraser):
    # the polymorphic identity erases to the untyped identity
    assert normalize(eraser.erase(T.Const("id")), BETA) == I
    # type arguments vanish: id nat O erases to I O'
    t = corpus.parse("id nat O")
    nf = normalize(eraser.erase(t), BETA)
    assert nf == normalize(eraser.erase(T.Const("O")), BETA)


def test_erasure_of_extension_formers(corpus, eraser):
    body = corpus.get("sum_example")[0]
    e = eraser.erase(body)
    assert e.fn.fn == UConst("pair")
    assert e.arg == UConst("refl")
    j = eraser.erase(corpus.get("id_to_leib")[0])
    # the motive is gone but J and its four arguments remain
    assert "J" in print_uterm(j)


def test_erasure_of_open_terms_uses_observers(corpus, eraser):
    from polykernel.surface import parse_term

    ctx = [("b", T.Const("bool"))]
    t = parse_term("neg b", ["b"], set(corpus.env.names()))
    e = eraser.erase(t, ctx)
    nf = normalize(e, BETA)
    assert "b" in print_uterm(nf)


def test_postulates_stay_opaque(corpus, eraser):
    e = eraser.erase(corpus.get("uip_use")[0])
    assert "uip" in print_uterm(e)


def test_numeral_erasures(corpus, eraser):
    three = normalize(eraser.erase(corpus.church_numeral(3)), BETA)
    x, f = UVar(1), UVar(0)
    expected = ULam("x", ULam("f", UApp(f, UApp(f, UApp(f, x)))))
    assert three == expected


@pytest.mark.parametrize("config", [BETA, BETAETA, LAMBDA_C, LAMBDA_ID])
def test_confluence_smoke(config):
    # the heavyweight 1000-term-per-config run lives in the acceptance suite
    rng = random.Random(hash(config.name) & 0xFFFF)
    violations = 0
    for _ in range(150):
        t = random_uterm(rng, size=rng.randrange(3, 10),
                         constants=tuple(config.constants))
        a = random_strategy_normalize(t, config, rng)
        b = random_strategy_normalize(t, config, rng)
        if a is not None and b is not None and a != b:
            violations += 1
    assert violations == 0
