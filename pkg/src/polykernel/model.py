"""Polyset-model semantics: exact PI-model evaluation and three-valued
membership in the refl-generated structure over the extended λ-calculus."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .errors import FuelExhausted, ImproperFamily, NotAKind, NotAType
from .typecheck import Checker
from .weca import (
    LAMBDA_ID,
    UApp,
    UConst,
    UFree,
    ULam,
    UTerm,
    UVar,
    Verdict,
    Eraser,
    normalize,
    spine,
    uapps,
    weca_eq,
)

REFL = UConst("refl")


@dataclass(frozen=True)
class PolysetStructure:
    """Which family of polysets the evaluator works in."""

    variant: str  # full | simple | generated | power | pi
    config_name: str = "beta"
    core: tuple = ()

    def __post_init__(self):
        if self.variant not in ("full", "simple", "generated", "power", "pi"):
            raise ValueError("unknown polyset structure %r" % self.variant)


PI_STRUCTURE = PolysetStructure("pi", "one")
GENERATED_REFL = PolysetStructure("generated", "lambda-id", ("refl",))


# ---------------------------------------------------------------------------
# The proof-irrelevance model: polysets over the one-point algebra.
#
# Every type denotes ∅ or {•}; every kind value is a finite tower, so
# evaluation is exact.
# ---------------------------------------------------------------------------


class PiModel:
    """Exact evaluator over the one-point carrier."""

    def __init__(self, checker: Checker):
        self.checker = checker

    # kind values: True/False for *, ("fn", v) for Πx:σ.k with ⟦σ⟧ ≠ ∅,
    # ("vacuous",) for Πx:σ.k with ⟦σ⟧ = ∅.

    def _whnf(self, t):
        return self.checker.whnf(t)

    def is_kind_syntax(self, t):
        """Kinds are exactly the Π-towers ending in *."""
        t = self._whnf(t)
        if t == T.STAR:
            return True
        if isinstance(t, T.Pi):
            return self.is_kind_syntax(t.codomain)
        return False

    def interp_kind(self, kind, rho=None):
        """All values of a kind; finite in this model."""
        rho = rho or []
        kind = self._whnf(kind)
        if kind == T.STAR:
            return [False, True]
        if isinstance(kind, T.Pi):
            if self.is_kind_syntax(kind.domain):
                raise NotAKind("type operators are not part of the language")
            if not self.interp_con(kind.domain, rho):
                return [("vacuous",)]
            return [("fn", v) for v in self.interp_kind(kind.codomain, rho + ["•"])]
        raise NotAKind("not a kind: %r" % (kind,))

    def interp_con(self, t, rho=None):
        """Value of a constructor; for types this is inhabitation."""
        rho = rho or []
        t = self._whnf(t)
        if isinstance(t, T.Var):
            return rho[len(rho) - 1 - t.index]
        if isinstance(t, T.Pi):
            if self.is_kind_syntax(t.domain):
                return all(
                    self.interp_con(t.codomain, rho + [v])
                    for v in self.interp_kind(t.domain, rho)
                )
            if not self.interp_con(t.domain, rho):
                return True  # vacuous product
            return self.interp_con(t.codomain, rho + ["•"])
        if isinstance(t, T.Sigma):
            return self.interp_con(t.domain, rho) and self.interp_con(
                t.codomain, rho + ["•"]
            )
        if isinstance(t, T.Id):
            return True  # the one-point algebra identifies all terms
        if isinstance(t, T.Lam):
            if self.is_kind_syntax(t.annot):
                raise NotAKind("type operators are not part of the language")
            if not self.interp_con(t.annot, rho):
                return ("vacuous",)
            return ("fn", self.interp_con(t.body, rho + ["•"]))
        if isinstance(t, T.App):
            fv = self.interp_con(t.fn, rho)
            if fv == ("vacuous",):
                return False  # unreachable for terms typed in a live context
            if isinstance(fv, tuple) and fv[0] == "fn":
                return fv[1]
            raise NotAType("applied a non-function value")
        raise NotAType("cannot evaluate %r in the one-point model" % (t,))


def pi_model_decide(checker, ty) -> Verdict:
    """Exact inhabitation in the proof-irrelevance model (closed types)."""
    model = PiModel(checker)
    if model.is_kind_syntax(ty):
        raise NotAType("expected a type, found a kind")
    return Verdict.YES if model.interp_con(ty) else Verdict.NO


# ---------------------------------------------------------------------------
# Symbolic polysets and the fixed witness-family library.
# ---------------------------------------------------------------------------


class PSet:
    """A polyset with three-valued membership."""

    exact = False

    def member(self, u: UTerm) -> Verdict:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


class EmptySet(PSet):
    exact = True

    def member(self, u):
        return Verdict.NO

    def describe(self):
        return "Empty"


class FullSet(PSet):
    exact = True

    def member(self, u):
        return Verdict.YES

    def describe(self):
        return "FullCarrier"


@dataclass
class FiniteSet(PSet):
    """Classes of finitely many normal forms (plus refl, which every
    non-empty generated polyset contains)."""

    forms: frozenset
    config: object = LAMBDA_ID
    fuel: int = 100_000
    exact = True

    def member(self, u):
        try:
            nf = normalize(u, self.config, self.fuel)
        except FuelExhausted:
            return Verdict.UNKNOWN
        if nf in self.forms or nf == REFL:
            return Verdict.YES
        return Verdict.NO

    def describe(self):
        return "FiniteClasses(%d forms)" % len(self.forms)


@dataclass
class HasHNFSet(PSet):
    """Power-structure polyset: terms with a head normal form."""

    config: object = LAMBDA_ID
    fuel: int = 1000

    def member(self, u):
        t = u
        for _ in range(self.fuel):
            while isinstance(t, ULam):
                t = t.body
            head, args = spine(t)
            if isinstance(head, ULam) and args:
                from .weca import uopen

                t = uapps(uopen(head.body, args[0]), *args[1:])
            else:
                return Verdict.YES
        return Verdict.UNKNOWN

    def describe(self):
        return "Pred(has-head-normal-form)"


REFL_SET = FiniteSet(frozenset([REFL]))


class Family:
    """A polyset-valued function on the carrier."""

    name = "family"

    def apply(self, u: UTerm) -> PSet:
        raise NotImplementedError

    def proper(self) -> bool:
        """Proper families (Σ-compatible) are empty everywhere once they
        are empty at refl."""
        return self.apply(REFL).member(REFL) == Verdict.NO


class IsChurchNumeralFamily(Family):
    """F(t) = full carrier if t behaves as a Church numeral, else ∅."""

    name = "IsChurchNumeral"

    def __init__(self, config=LAMBDA_ID, fuel=100_000):
        self.config = config
        self.fuel = fuel

    def holds(self, u):
        x, f = UFree("·x"), UFree("·f")
        try:
            nf = normalize(uapps(u, x, f), self.config, self.fuel)
        except FuelExhausted:
            return None
        while isinstance(nf, UApp) and nf.fn == f:
            nf = nf.arg
        return nf == x

    def apply(self, u):
        h = self.holds(u)
        if h is None:
            return EmptySet()  # conservatively empty on fuel exhaustion
        return FullSet() if h else EmptySet()


class IsReflFamily(Family):
    """F(t) = full carrier when t is a refl class, else ∅."""

    name = "IsRefl"

    def __init__(self, config=LAMBDA_ID, fuel=100_000):
        self.config = config
        self.fuel = fuel

    def apply(self, u):
        v = weca_eq(u, REFL, self.config, self.fuel)
        if v == Verdict.YES:
            return FullSet()
        if v == Verdict.NO:
            return EmptySet()
        return EmptySet()


class ConstantFamily(Family):
    def __init__(self, pset, name):
        self.pset = pset
        self.name = name

    def apply(self, u):
        return self.pset


class EqualsNormalFormOfFamily(Family):
    """F(t) = {classes of t0} if t ≈ t0 else ∅, for a fixed t0."""

    name = "EqualsNormalFormOf"

    def __init__(self, t0, config=LAMBDA_ID, fuel=100_000):
        self.t0 = t0
        self.config = config
        self.fuel = fuel

    def apply(self, u):
        v = weca_eq(u, self.t0, self.config, self.fuel)
        if v == Verdict.YES:
            try:
                return FiniteSet(frozenset([normalize(self.t0, self.config, self.fuel)]))
            except FuelExhausted:
                return EmptySet()
        return EmptySet()


def family_from_spec(spec, corpus=None, config=LAMBDA_ID, fuel=100_000):
    """Build a witness family from the closed predicate library."""
    kind = spec if isinstance(spec, str) else spec.get("family")
    if kind == "IsChurchNumeral":
        return IsChurchNumeralFamily(config, fuel)
    if kind == "IsRefl":
        return IsReflFamily(config, fuel)
    if kind == "FullSet":
        return ConstantFamily(FullSet(), "FullSet")
    if kind == "EmptySet":
        return ConstantFamily(EmptySet(), "EmptySet")
    if kind == "HasHNF":
        return ConstantFamily(HasHNFSet(config), "HasHNF")
    if kind == "FiniteSet":
        if corpus is None:
            raise ImproperFamily("FiniteSet family needs corpus terms")
        checker = corpus.checker()
        eraser = Eraser(checker)
        forms = frozenset(
            normalize(eraser.erase(corpus.parse(src)), config, fuel)
            for src in spec.get("terms", [])
        )
        return ConstantFamily(FiniteSet(forms, config, fuel), "FiniteSet")
    if kind == "EqualsNormalFormOf":
        if corpus is None:
            raise ImproperFamily("EqualsNormalFormOf family needs a corpus term")
        checker = corpus.checker()
        eraser = Eraser(checker)
        return EqualsNormalFormOfFamily(
            eraser.erase(corpus.parse(spec["term"])), config, fuel
        )
    raise ImproperFamily("unknown witness family %r" % (kind,))


# ---------------------------------------------------------------------------
# The generated structure over Λ^id: Generated({refl}).
#
# Every non-empty polyset in this structure contains refl, which makes
# emptiness checking a membership question.
# ---------------------------------------------------------------------------


@dataclass
class Evidence:
    verdict: Verdict
    reason: str
    witness: object = None
    flags: tuple = ()


class GeneratedModel:
    """Three-valued evaluator for Generated({refl}) over Λ^id."""

    def __init__(self, checker: Checker, config=LAMBDA_ID, fuel=100_000):
        self.checker = checker
        self.config = config
        self.fuel = fuel
        self.eraser = Eraser(checker)
        self._fresh = 0

    def _free(self, hint):
        self._fresh += 1
        return UFree("·%s%d" % (hint, self._fresh))

    def _nf(self, u):
        return normalize(u, self.config, self.fuel)

    def _eq(self, a, b):
        return weca_eq(a, b, self.config, self.fuel)

    # -- erasure of open endpoint terms under a membership environment --

    def _erase_open(self, t, entries):
        """Erase t where bound variables are bound to untyped values."""
        tctx = [(e["name"], e["classifier"]) for e in entries]
        u = self.eraser.erase(t, tctx)
        for e in entries:
            if e["kind"] == "term":
                u = _replace_free(u, e["name"], e["value"])
        return u

    # -- membership --

    def member(self, u, ty, entries=None, flags=None) -> Verdict:
        entries = entries or []
        flags = flags if flags is not None else []
        ty = self.checker.whnf(ty)

        if isinstance(ty, T.Pi):
            dom = self.checker.whnf(ty.domain)
            if dom == T.STAR:
                v = self._tower_member(u, ty)
                if v is not None:
                    return v
                return Verdict.UNKNOWN
            if _kind_syntax(self.checker, dom):
                return Verdict.UNKNOWN  # family quantification: certificate land
            # term-indexed product
            empty = self.is_empty(ty.domain, entries).verdict
            if empty == Verdict.YES:
                return Verdict.YES  # vacuous product
            verdicts = []
            # the core element refl is a member of every non-empty domain
            for probe, tag in self._dom_probes(ty.domain, entries):
                sub = {
                    "kind": "term",
                    "name": "x%d" % len(entries),
                    "classifier": ty.domain,
                    "value": probe,
                }
                v = self.member(
                    UApp(u, probe), ty.codomain, entries + [sub], flags
                )
                if v == Verdict.NO and tag == "core" and empty == Verdict.NO:
                    # refl really inhabits the domain, so this is a
                    # genuine counterexample
                    return Verdict.NO
                verdicts.append((v, tag))
            if all(v == Verdict.YES for v, _ in verdicts):
                flags.append("probe-complete" if empty == Verdict.NO else "probed")
                return Verdict.YES
            return Verdict.UNKNOWN

        if isinstance(ty, T.Id):
            ea = self._erase_open(ty.lhs, entries)
            eb = self._erase_open(ty.rhs, entries)
            v = self._eq(ea, eb)
            if v == Verdict.YES:
                return self._eq(u, REFL)
            if v == Verdict.NO:
                return Verdict.NO
            return Verdict.UNKNOWN

        if isinstance(ty, T.Sigma):
            try:
                nf = self._nf(u)
            except FuelExhausted:
                return Verdict.UNKNOWN
            head, args = spine(nf)
            if head == UConst("pair") and len(args) == 2:
                v1 = self.member(args[0], ty.domain, entries, flags)
                sub = {
                    "kind": "term",
                    "name": "x%d" % len(entries),
                    "classifier": ty.domain,
                    "value": args[0],
                }
                v2 = self.member(args[1], ty.codomain, entries + [sub], flags)
                return _conj(v1, v2)
            if nf == REFL:
                v1 = self.member(REFL, ty.domain, entries, flags)
                sub = {
                    "kind": "term",
                    "name": "x%d" % len(entries),
                    "classifier": ty.domain,
                    "value": REFL,
                }
                v2 = self.member(REFL, ty.codomain, entries + [sub], flags)
                v = _conj(v1, v2)
                # refl inhabits every non-empty polyset, and the pair
                # (refl, refl) is only one possible witness: a componentwise
                # failure is not a counterexample to non-emptiness.
                return v if v == Verdict.YES else Verdict.UNKNOWN
            return Verdict.UNKNOWN

        head, args = _tspine(ty)
        if isinstance(head, T.Var):
            entry = entries[len(entries) - 1 - head.index]
            if entry["kind"] == "family" and args:
                pset = entry["value"].apply(self._erase_open(args[-1], entries))
                return pset.member(u)
            if entry["kind"] == "set" and not args:
                return entry["value"].member(u)
        return Verdict.UNKNOWN

    def _dom_probes(self, dom, entries):
        """Probe elements for a term-indexed product: the core, then a
        fresh observation variable."""
        yield REFL, "core"
        yield self._free("v"), "fresh"

    # -- exact membership for Πα:*-towers (bool, nat, ⊤, ⊥, ...) --

    def _tower_member(self, u, ty):
        parsed = self._parse_tower(ty)
        if parsed is None:
            return None
        specs = parsed
        if "elem" not in [s for s in specs]:
            # the X=∅ instantiation already forces the intersection empty
            return Verdict.NO
        frees = []
        elems, fns = [], []
        for s in specs:
            if s == "elem":
                v = self._free("v")
                elems.append(v)
                frees.append(v)
            else:
                f = self._free("f")
                fns.append(f)
                frees.append(f)
        try:
            nf = self._nf(uapps(u, *frees))
        except FuelExhausted:
            return Verdict.UNKNOWN

        def in_lang(t):
            if t == REFL or t in elems:
                return True
            return isinstance(t, UApp) and t.fn in fns and in_lang(t.arg)

        return Verdict.YES if in_lang(nf) else Verdict.NO

    def _parse_tower(self, ty):
        """Recognize Πα:*. T1 → … → Tn → α with Ti ∈ {α, α→α}."""
        ty = self.checker.whnf(ty)
        if not (isinstance(ty, T.Pi) and self.checker.whnf(ty.domain) == T.STAR):
            return None
        body, d, specs = ty.codomain, 0, []
        while True:
            body = self.checker.whnf(body)
            if body == T.Var(d):
                return specs
            if not isinstance(body, T.Pi):
                return None
            dom = self.checker.whnf(body.domain)
            if dom == T.Var(d):
                specs.append("elem")
            elif (
                isinstance(dom, T.Pi)
                and self.checker.whnf(dom.domain) == T.Var(d)
                and self.checker.whnf(dom.codomain) == T.Var(d + 1)
            ):
                specs.append("fn")
            else:
                return None
            body, d = body.codomain, d + 1

    # -- derived notions --

    def interp_id(self, sigma, a, b) -> PSet:
        """The Id polyset: {refl} when the erasures agree, ∅ when not."""
        v = self._eq(self.eraser.erase(a), self.eraser.erase(b))
        if v == Verdict.YES:
            return REFL_SET
        if v == Verdict.NO:
            return EmptySet()
        return _UnknownSet()

    def is_empty(self, ty, entries=None) -> Evidence:
        """Emptiness; in this structure a polyset is non-empty iff it
        contains refl."""
        v = self.member(REFL, ty, list(entries or []))
        if v == Verdict.YES:
            return Evidence(Verdict.NO, "member witness", witness=REFL)
        if v == Verdict.NO:
            return Evidence(Verdict.YES, "refl excluded; generated sets without refl are empty")
        return Evidence(Verdict.UNKNOWN, "insufficient evidence")

    def leibniz_valid(self, t, q, ctx=None) -> Verdict:
        """Validity of the Leibniz equality t = q in this term model."""
        tctx = list(ctx or [])
        return self._eq(self.eraser.erase(t, tctx), self.eraser.erase(q, tctx))


class _UnknownSet(PSet):
    def member(self, u):
        return Verdict.UNKNOWN

    def describe(self):
        return "Unknown"


def _conj(a, b):
    if Verdict.NO in (a, b):
        return Verdict.NO
    if Verdict.UNKNOWN in (a, b):
        return Verdict.UNKNOWN
    return Verdict.YES


def _tspine(t):
    args = []
    while isinstance(t, T.App):
        args.append(t.arg)
        t = t.fn
    return t, list(reversed(args))


def _kind_syntax(checker, t):
    t = checker.whnf(t)
    if t == T.STAR:
        return True
    if isinstance(t, T.Pi):
        return _kind_syntax(checker, t.codomain)
    return False


def _replace_free(u, name, value):
    if isinstance(u, UFree) and u.name == name:
        return value
    if isinstance(u, ULam):
        return ULam(u.binder, _replace_free(u.body, name, value))
    if isinstance(u, UApp):
        return UApp(_replace_free(u.fn, name, value), _replace_free(u.arg, name, value))
    return u
