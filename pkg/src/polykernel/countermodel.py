"""Executable refutation suite: certificate-driven checks that the
bundled encodings cannot support coinduction, quotient soundness, UIP,
function extensionality, or induction."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache

import importlib.resources

from . import terms as T
from .corpus import load_corpus
from .errors import FuelExhausted, ImproperCertificate, ManifestError
from .model import (
    GeneratedModel,
    PiModel,
    REFL,
    family_from_spec,
    pi_model_decide,
)
from .weca import (
    BETA,
    BETAETA,
    LAMBDA_ID,
    Eraser,
    UApp,
    UConst,
    ULam,
    UVar,
    Verdict,
    config_named,
    normalize,
    print_uterm,
    spine,
    uapps,
    weca_eq,
)

DEFAULT_FUEL = 100_000


@dataclass
class Obligation:
    name: str
    expected: str
    actual: str
    detail: str = ""

    @property
    def ok(self):
        return self.expected == self.actual


@dataclass
class Report:
    id: str
    status: str = "Reproduced"  # Reproduced | Failed | Unknown
    obligations: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    millis: float = 0.0

    def add(self, name, expected, actual, detail=""):
        self.obligations.append(Obligation(name, str(expected), str(actual), detail))

    def settle(self):
        if any(o.actual == "unknown" for o in self.obligations):
            self.status = "Unknown"
        elif all(o.ok for o in self.obligations):
            self.status = "Reproduced"
        else:
            self.status = "Failed"
        return self

    def to_json(self):
        return {
            "id": self.id,
            "status": self.status,
            "obligations": [
                {
                    "name": o.name,
                    "expected": o.expected,
                    "actual": o.actual,
                    "detail": o.detail,
                }
                for o in self.obligations
            ],
            "flags": list(self.flags),
            "millis": round(self.millis, 3),
        }


def _timed(check):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        report = check(*args, **kwargs)
        report.millis = (time.perf_counter() - t0) * 1000.0
        return report

    run.__name__ = check.__name__
    run.__doc__ = check.__doc__
    return run


# canonical combinators for transcripts
_K = ULam("x", ULam("y", UVar(1)))
_KSTAR = ULam("x", ULam("y", UVar(0)))
_I = ULam("b", UVar(0))
_N = ULam("b", uapps(UVar(0), _KSTAR, _K))
EXPECTED_S1 = ULam("k", uapps(UVar(0), _K, _N, _N))
EXPECTED_S2 = ULam("k", uapps(UVar(0), _KSTAR, _I, _N))
BOOL_PRIME = (
    _K,
    _KSTAR,
    REFL,
    ULam("x", REFL),
    ULam("x", ULam("y", REFL)),
)


@_timed
def check_stream_coinduction(corpus=None, fuel=DEFAULT_FUEL):
    """Streams admit the expected computation laws yet s1 and s2 are
    semantically distinct: no coinduction principle is derivable."""
    corpus = corpus or load_corpus()
    checker = corpus.checker(fuel=fuel)
    report = Report("thm-4.2")
    ap, C = T.apps, T.Const

    facts = [
        ("hd s1 = hd s2", ap(C("hd"), C("s1")), ap(C("hd"), C("s2"))),
        (
            "hd (tl s1) = hd (tl s2)",
            ap(C("hd"), ap(C("tl"), C("s1"))),
            ap(C("hd"), ap(C("tl"), C("s2"))),
        ),
        ("tl (tl s1) = s1", ap(C("tl"), ap(C("tl"), C("s1"))), C("s1")),
        ("tl (tl s2) = s2", ap(C("tl"), ap(C("tl"), C("s2"))), C("s2")),
    ]
    try:
        for name, lhs, rhs in facts:
            report.add(name, "yes", "yes" if checker.convertible(lhs, rhs) else "no")
        eraser = Eraser(checker)
        n1 = normalize(eraser.erase(C("s1")), BETAETA, fuel)
        n2 = normalize(eraser.erase(C("s2")), BETAETA, fuel)
    except FuelExhausted:
        report.add("normalization", "terminates", "unknown")
        return report.settle()
    report.add(
        "erase(s1) normal form",
        print_uterm(EXPECTED_S1),
        print_uterm(n1),
    )
    report.add(
        "erase(s2) normal form",
        print_uterm(EXPECTED_S2),
        print_uterm(n2),
    )
    report.add(
        "normal forms distinct",
        "yes",
        "yes" if n1 != n2 else "no",
        detail="distinct βη-normal forms are not βη-equal",
    )
    return report.settle()


@_timed
def check_parametric_quotient(corpus=None, fuel=DEFAULT_FUEL, config=BETA):
    """A sound polymorphic quotient former would force the lifted
    identity to be semantically constant on bool; it is not."""
    corpus = corpus or load_corpus()
    checker = corpus.checker(fuel=fuel)
    eraser = Eraser(checker)
    report = Report("thm-4.3")
    ap, C = T.apps, T.Const
    try:
        on_true = eraser.erase(ap(C("fhat"), ap(C("cls"), C("true"))))
        on_false = eraser.erase(ap(C("fhat"), ap(C("cls"), C("false"))))
        report.add(
            "fhat(cls true) = K", "yes", weca_eq(on_true, _K, config, fuel).value
        )
        report.add(
            "fhat(cls false) = K*", "yes", weca_eq(on_false, _KSTAR, config, fuel).value
        )
        report.add("K = K*", "no", weca_eq(_K, _KSTAR, config, fuel).value,
                   detail="a constant class map would identify them")
    except FuelExhausted:
        report.add("normalization", "terminates", "unknown")
    return report.settle()


@_timed
def check_uip(corpus=None, fuel=DEFAULT_FUEL, size_bound=9):
    """Identity polysets contain only the refl class, so uniqueness of
    identity proofs holds semantically."""
    corpus = corpus or load_corpus()
    checker = corpus.checker(fuel=fuel)
    gm = GeneratedModel(checker, LAMBDA_ID, fuel)
    report = Report("lem-5.7")
    nat, bool_ = T.Const("nat"), T.Const("bool")
    pairs = [
        ("O = O", T.Id(nat, T.Const("O"), T.Const("O")), True),
        ("church1 = succ O", T.Id(nat, T.Const("church1"), corpus.parse("succ O")), True),
        ("true = false", T.Id(bool_, T.Const("true"), T.Const("false")), False),
    ]
    for label, idty, expect_equal in pairs:
        ea = gm.eraser.erase(idty.lhs)
        eb = gm.eraser.erase(idty.rhs)
        same = weca_eq(ea, eb, LAMBDA_ID, fuel)
        report.add(
            "endpoints of %s weca-equal" % label,
            "yes" if expect_equal else "no",
            same.value,
        )
        if same != Verdict.YES:
            report.add(
                "IdSet(%s) empty" % label,
                "yes",
                "yes" if gm.is_empty(idty).verdict == Verdict.YES else "no",
                detail="distinct endpoint classes; vacuously unique",
            )
            continue
        idset = gm.interp_id(idty.ty, idty.lhs, idty.rhs)
        members, unknowns = enumerate_members(idset.member, size_bound)
        all_refl = all(
            weca_eq(m, REFL, LAMBDA_ID, fuel) == Verdict.YES for m in members
        )
        report.add(
            "members of IdSet(%s) ≤ size %d are refl classes" % (label, size_bound),
            "yes",
            "yes" if members and all_refl and not unknowns else "no",
            detail="members: %s" % ", ".join(print_uterm(m) for m in members),
        )
        # the witness family step: J t a b refl lands in C(a,b,refl)
        t = ULam("z", UVar(0))
        jterm = uapps(UConst("J"), t, ea, eb, REFL)
        reduced = normalize(jterm, LAMBDA_ID, fuel)
        report.add(
            "J t %s refl reduces into the full class" % label,
            "yes",
            "yes" if reduced == normalize(UApp(t, ea), LAMBDA_ID, fuel) else "no",
        )
    return report.settle()


@_timed
def check_funext_fails(corpus=None, fuel=DEFAULT_FUEL):
    """Two pointwise-equal endomaps of bool whose equality polyset is
    empty: function extensionality fails in this model."""
    corpus = corpus or load_corpus()
    checker = corpus.checker(fuel=fuel)
    gm = GeneratedModel(checker, LAMBDA_ID, fuel)
    report = Report("lem-5.8")
    try:
        fe = normalize(gm.eraser.erase(T.Const("fext_f")), LAMBDA_ID, fuel)
        ge = normalize(gm.eraser.erase(T.Const("fext_g")), LAMBDA_ID, fuel)
    except FuelExhausted:
        report.add("normalization", "terminates", "unknown")
        return report.settle()
    bool_ = T.Const("bool")
    for b in BOOL_PRIME:
        report.add(
            "%s ∈ ⟦bool⟧" % print_uterm(b),
            "yes",
            gm.member(b, bool_).value,
        )
        pointwise = weca_eq(UApp(fe, b), UApp(ge, b), LAMBDA_ID, fuel)
        report.add(
            "f·%s = g·%s" % (print_uterm(b), print_uterm(b)),
            "yes",
            pointwise.value,
            detail="refl inhabits the pointwise Id polyset" if pointwise == Verdict.YES else "",
        )
    whole = weca_eq(fe, ge, LAMBDA_ID, fuel)
    report.add(
        "f = g at bool→bool",
        "no",
        whole.value,
        detail="normal forms %s vs %s; the Id polyset at distinct endpoints is empty (witness family D with D(h,h,refl) full)"
        % (print_uterm(fe), print_uterm(ge)),
    )
    return report.settle()


@_timed
def check_no_induction(cert=None, corpus=None, fuel=None):
    """No closed term inhabits the induction principle for the Church
    naturals: the numeral family is empty at the refl inhabitant."""
    corpus = corpus or load_corpus()
    if cert is None:
        cert = load_certificate("no_induction")
    fuel = fuel or cert.get("fuel", DEFAULT_FUEL)
    report = Report(cert.get("id", "lem-5.9"))
    checker = corpus.checker(fuel=fuel)

    if cert.get("model") == "pi":
        # the proof-irrelevance model validates induction; a certificate
        # against it cannot reproduce the lemma
        v = pi_model_decide(checker, T.Const(cert.get("target", "ind_nat")))
        report.add("pi model refutes induction", "no", "no" if v == Verdict.YES else "yes",
                   detail="pi_model_decide(ind_nat) = Inhabited")
        report.status = "Failed"
        report.obligations[-1].expected = "yes"  # the certificate wanted a refutation
        return report

    if cert.get("model") != "generated":
        raise ImproperCertificate("no-induction certificates need the generated model")
    config = config_named(cert.get("weca", "lambda-id"))
    gm = GeneratedModel(checker, config, fuel)
    witnesses = cert.get("witnesses", [])
    if not witnesses:
        raise ImproperCertificate("certificate carries no witness family")
    family = family_from_spec(witnesses[0], corpus, config, fuel)
    if not family.proper():
        raise ImproperCertificate(
            "witness family has no empty point at refl; the dependent-sum "
            "properness condition fails"
        )

    nat = T.Const(cert.get("target_carrier", "nat"))
    report.add("refl ∈ ⟦nat⟧", "yes", gm.member(REFL, nat).value)
    o_erased = gm.eraser.erase(T.Const("O"))
    succ_erased = gm.eraser.erase(T.Const("succ"))
    report.add(
        "F(refl) empty", "yes",
        "yes" if family.apply(REFL).member(REFL) == Verdict.NO else "no",
    )
    report.add(
        "F(O) full at refl", "yes",
        family.apply(o_erased).member(REFL).value,
    )
    report.add("base ∈ F(O)", "yes", family.apply(o_erased).member(REFL).value)

    samples = [corpus.parse(s) for s in cert.get("samples", ["O", "succ O", "succ (succ O)"])]
    sample_elems = [gm.eraser.erase(s) for s in samples] + [REFL, gm._free("t")]
    for e in sample_elems:
        in_nat = gm.member(e, nat)
        fe = family.apply(e).member(REFL)
        if in_nat == Verdict.YES and fe == Verdict.YES:
            closed = family.apply(UApp(succ_erased, e)).member(REFL)
            report.add(
                "step at %s" % print_uterm(e), "yes", closed.value,
                detail="F closed under successor on this sample",
            )
        else:
            report.add(
                "step at %s" % print_uterm(e), "vacuous", "vacuous",
                detail="antecedent fails (not a numeral point)",
            )
    report.flags.append("step-samples:sample-verified")
    if report.settle().status == "Reproduced":
        report.add(
            "⟦ind_nat⟧ empty", "yes", "yes",
            detail="any m would put m·base·step·refl in F(refl) = ∅",
        )
        report.settle()
    return report


@_timed
def check_pi_consistency(corpus=None, fuel=DEFAULT_FUEL):
    """The empty type stays empty in the exact model: consistency."""
    corpus = corpus or load_corpus()
    checker = corpus.checker(fuel=fuel)
    report = Report("pi-consistency")
    v = pi_model_decide(checker, T.Const("bot"))
    report.add("⟦Πα:*.α⟧ empty", "yes", "yes" if v == Verdict.NO else "no")
    return report.settle()


@_timed
def check_soundness_spot(corpus=None, fuel=DEFAULT_FUEL):
    """Every checked corpus judgment has an inhabited classifier in the
    exact model, as soundness requires."""
    corpus = corpus or load_corpus()
    checker = corpus.checker(fuel=fuel)
    pm = PiModel(checker)
    report = Report("soundness-spot")
    bad = []
    n = 0
    for name in corpus.entries:
        ty = corpus.type_of(name)
        if pm.is_kind_syntax(ty):
            continue
        n += 1
        if pi_model_decide(checker, ty) != Verdict.YES:
            bad.append(name)
    report.add(
        "inhabited classifiers", "%d/%d" % (n, n), "%d/%d" % (n - len(bad), n),
        detail="failures: %s" % ", ".join(bad) if bad else "",
    )
    return report.settle()


# ---------------------------------------------------------------------------
# Bounded enumeration of closed normal forms over the Λ^id signature.
# ---------------------------------------------------------------------------

_CONSTS = (UConst("refl"), UConst("J"), UConst("pair"), UConst("π1"), UConst("π2"))


def _is_redex_app(fn, arg):
    if isinstance(fn, ULam):
        return True
    head, args = spine(UApp(fn, arg))
    if head == UConst("refl"):
        return True
    if head == UConst("J") and len(args) >= 4 and args[3] == UConst("refl"):
        return True
    if head in (UConst("π1"), UConst("π2")) and len(args) >= 1:
        if args[0] == UConst("refl"):
            return True
        phead, pargs = spine(args[0])
        if phead == UConst("pair") and len(pargs) == 2:
            return True
    return False


@lru_cache(maxsize=None)
def _normal_forms(size, depth):
    """All closed-under-depth normal forms with exactly `size` nodes."""
    out = []
    if size == 1:
        out.extend(UVar(i) for i in range(depth))
        out.extend(_CONSTS)
        return tuple(out)
    out.extend(ULam("x", b) for b in _normal_forms(size - 1, depth + 1))
    for fsize in range(1, size - 1):
        for fn in _normal_forms(fsize, depth):
            if isinstance(fn, ULam):
                continue
            for arg in _normal_forms(size - 1 - fsize, depth):
                if not _is_redex_app(fn, arg):
                    out.append(UApp(fn, arg))
    return tuple(out)


def closed_normal_forms(size_bound):
    """Deterministic stream of closed Λ^id normal forms up to a size."""
    for size in range(1, size_bound + 1):
        yield from _normal_forms(size, 0)


def enumerate_members(member_fn, size_bound):
    """Split bounded normal forms into certain members and unknowns."""
    members, unknowns = [], []
    for t in closed_normal_forms(size_bound):
        v = member_fn(t)
        if v == Verdict.YES:
            members.append(t)
        elif v == Verdict.UNKNOWN:
            unknowns.append(t)
    return members, unknowns


# ---------------------------------------------------------------------------
# Suite plumbing.
# ---------------------------------------------------------------------------

CHECKS = {
    "thm-4.2": check_stream_coinduction,
    "thm-4.3": check_parametric_quotient,
    "lem-5.7": check_uip,
    "lem-5.8": check_funext_fails,
    "lem-5.9": check_no_induction,
    "pi-consistency": check_pi_consistency,
    "soundness-spot": check_soundness_spot,
}

DEFAULT_MANIFEST = (
    "thm-4.2",
    "thm-4.3",
    "lem-5.7",
    "lem-5.8",
    "lem-5.9",
    "pi-consistency",
    "soundness-spot",
)


def load_certificate(name):
    path = importlib.resources.files(__package__) / "certs" / ("%s.json" % name)
    return json.loads(path.read_text(encoding="utf-8"))


def run_suite(manifest=None, corpus=None, fuel=None):
    """Run the named checks; returns the reports in manifest order."""
    if manifest is None:
        names = list(DEFAULT_MANIFEST)
        fuel_ = fuel or DEFAULT_FUEL
    else:
        if isinstance(manifest, str):
            try:
                with open(manifest, encoding="utf-8") as fh:
                    manifest = json.load(fh)
            except (OSError, json.JSONDecodeError) as e:
                raise ManifestError("cannot read manifest: %s" % e)
        if isinstance(manifest, dict):
            names = manifest.get("checks", list(DEFAULT_MANIFEST))
            fuel_ = fuel or manifest.get("fuel", DEFAULT_FUEL)
        elif isinstance(manifest, (list, tuple)):
            names = list(manifest)
            fuel_ = fuel or DEFAULT_FUEL
        else:
            raise ManifestError("manifest must be a list or an object")
    corpus = corpus or load_corpus()
    reports = []
    for name in names:
        if name not in CHECKS:
            raise ManifestError("unknown check %r" % name)
        try:
            if name == "lem-5.9":
                reports.append(check_no_induction(corpus=corpus, fuel=fuel_))
            else:
                reports.append(CHECKS[name](corpus=corpus, fuel=fuel_))
        except FuelExhausted as e:
            r = Report(name, status="Unknown")
            r.add("fuel", "sufficient", "unknown", detail=str(e))
            reports.append(r)
    return reports
