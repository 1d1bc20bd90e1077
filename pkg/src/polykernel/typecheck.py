"""Bidirectional typing for the second-order dependent kernel.

Judgments are algorithmic: ``infer`` synthesizes a classifier, ``check``
compares against one by fuel-bounded normalize-and-compare conversion.
Products of the shape (Kind, Kind) are rejected, which also pins kinds
to the telescope form  Πx1:σ1. … Πxn:σn. *.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import terms as T
from .errors import (
    ConversionFailure,
    DomainMismatch,
    DuplicateVariable,
    ExtensionDisabled,
    ForbiddenPiFormation,
    FuelExhausted,
    IllFormedClassifier,
    NotAFunction,
    NotAKind,
    NotAType,
    NotWellTyped,
    TypeError_,
    UnboundVariable,
    UnknownName,
)

DEFAULT_FUEL = 100_000


@dataclass(frozen=True)
class ExtensionFlags:
    sigma: bool = False
    identity: bool = False
    uip_postulate: bool = False
    funext_postulate: bool = False

    def __post_init__(self):
        if (self.uip_postulate or self.funext_postulate) and not self.identity:
            raise ValueError("uip/funext postulates require identity types")

    @classmethod
    def from_names(cls, names):
        names = set(names)
        known = {"sigma", "id", "identity", "uip", "funext"}
        unknown = names - known
        if unknown:
            raise ValueError("unknown extension(s): %s" % ", ".join(sorted(unknown)))
        identity = bool(names & {"id", "identity", "uip", "funext"})
        return cls(
            sigma="sigma" in names,
            identity=identity,
            uip_postulate="uip" in names,
            funext_postulate="funext" in names,
        )


NO_EXTENSIONS = ExtensionFlags()


class SortClass(enum.Enum):
    KIND_SORT = "KindSort"
    KIND_EXPR = "KindExpr"
    CONSTRUCTOR_EXPR = "ConstructorExpr"
    TERM_EXPR = "TermExpr"


@dataclass(frozen=True)
class Definition:
    name: str
    ty: T.Term
    body: T.Term | None  # None: postulate (opaque)
    flags: ExtensionFlags = NO_EXTENSIONS


class Env:
    """Ordered global definitions; later entries may use earlier ones."""

    def __init__(self):
        self._defs: dict[str, Definition] = {}

    def __contains__(self, name):
        return name in self._defs

    def names(self):
        return list(self._defs)

    def lookup(self, name) -> Definition:
        if name not in self._defs:
            raise UnknownName("no definition named %r" % name)
        return self._defs[name]

    def add(self, definition: Definition):
        if definition.name in self._defs:
            raise DuplicateVariable("duplicate global name %r" % definition.name)
        self._defs[definition.name] = definition


def uip_type() -> T.Term:
    """Πα:*. Πx,y:α. Πp,q: x={α}y. p ={x={α}y} q"""
    v = T.Var
    alpha3, alpha4 = v(3, "α"), v(4, "α")
    here = T.Id(T.Id(alpha4, v(3, "x"), v(2, "y")), v(1, "p"), v(0, "q"))
    idxy3 = T.Id(alpha3, v(2, "x"), v(1, "y"))
    idxy2 = T.Id(v(2, "α"), v(1, "x"), v(0, "y"))
    return T.Pi(
        "α",
        T.STAR,
        T.Pi(
            "x",
            v(0, "α"),
            T.Pi("y", v(1, "α"), T.Pi("p", idxy2, T.Pi("q", idxy3, here))),
        ),
    )


def funext_type() -> T.Term:
    """Πα:*. Πβ:α->*. Πf,g:(Πx:α. β x). (Πx:α. f x ={β x} g x) -> f = g"""
    v = T.Var
    pi_ab = lambda a_i, b_i, nm="x": T.Pi(
        nm, v(a_i, "α"), T.App(v(b_i + 1, "β"), v(0, nm))
    )
    pointwise = T.Pi(
        "x",
        v(3, "α"),
        T.Id(T.App(v(3, "β"), v(0, "x")), T.App(v(2, "f"), v(0, "x")), T.App(v(1, "g"), v(0, "x"))),
    )
    conclusion = T.Id(pi_ab(4, 3), v(2, "f"), v(1, "g"))
    return T.Pi(
        "α",
        T.STAR,
        T.Pi(
            "β",
            T.arrow(v(0, "α"), T.STAR),
            T.Pi(
                "f",
                pi_ab(1, 0),
                T.Pi("g", pi_ab(2, 1), T.Pi("h", pointwise, conclusion)),
            ),
        ),
    )


class Checker:
    """Typechecking session for one environment + extension flag set."""

    def __init__(self, env: Env | None = None, flags: ExtensionFlags = NO_EXTENSIONS,
                 fuel: int = DEFAULT_FUEL):
        self.env = env if env is not None else Env()
        self.flags = flags
        self.fuel = fuel
        if flags.uip_postulate and "uip" not in self.env:
            self.env.add(Definition("uip", uip_type(), None, flags))
        if flags.funext_postulate and "funext" not in self.env:
            self.env.add(Definition("funext", funext_type(), None, flags))

    # ---- reduction ----

    def _step(self, t: T.Term) -> T.Term | None:
        """One leftmost-outermost contraction, unfolding definitions."""
        if isinstance(t, T.App):
            if isinstance(t.fn, T.Lam):
                return T.open_body(t.fn.body, t.arg)
            fn = self._step(t.fn)
            if fn is not None:
                return T.App(fn, t.arg)
            arg = self._step(t.arg)
            if arg is not None:
                return T.App(t.fn, arg)
            return None
        if isinstance(t, T.Const):
            d = self.env.lookup(t.name)
            return d.body  # None for postulates: no redex
        if isinstance(t, T.Proj1):
            if isinstance(t.body, T.Pair):
                return t.body.fst
            body = self._step(t.body)
            return T.Proj1(body) if body is not None else None
        if isinstance(t, T.Proj2):
            if isinstance(t.body, T.Pair):
                return t.body.snd
            body = self._step(t.body)
            return T.Proj2(body) if body is not None else None
        if isinstance(t, T.J):
            if isinstance(t.q, T.Refl):
                return T.App(t.c, t.a)
            for name in ("motive", "c", "a", "b", "q"):
                sub = self._step(getattr(t, name))
                if sub is not None:
                    return T.J(*(sub if n == name else getattr(t, n)
                                 for n in ("motive", "c", "a", "b", "q")), hints=t.hints)
            return None
        if isinstance(t, (T.Pi, T.Sigma)):
            dom = self._step(t.domain)
            if dom is not None:
                return type(t)(t.binder, dom, t.codomain)
            cod = self._step(t.codomain)
            if cod is not None:
                return type(t)(t.binder, t.domain, cod)
            return None
        if isinstance(t, T.Lam):
            an = self._step(t.annot)
            if an is not None:
                return T.Lam(t.binder, an, t.body)
            body = self._step(t.body)
            if body is not None:
                return T.Lam(t.binder, t.annot, body)
            return None
        if isinstance(t, T.Pair):
            fst = self._step(t.fst)
            if fst is not None:
                return T.Pair(fst, t.snd, t.annot)
            snd = self._step(t.snd)
            if snd is not None:
                return T.Pair(t.fst, snd, t.annot)
            if t.annot is not None:
                an = self._step(t.annot)
                if an is not None:
                    return T.Pair(t.fst, t.snd, an)
            return None
        if isinstance(t, T.Id):
            for name in ("ty", "lhs", "rhs"):
                sub = self._step(getattr(t, name))
                if sub is not None:
                    return T.Id(*(sub if n == name else getattr(t, n)
                                  for n in ("ty", "lhs", "rhs")))
            return None
        return None  # Sort, Var, Refl

    def _head_step(self, t: T.Term) -> T.Term | None:
        if isinstance(t, T.App):
            if isinstance(t.fn, T.Lam):
                return T.open_body(t.fn.body, t.arg)
            fn = self._head_step(t.fn)
            return T.App(fn, t.arg) if fn is not None else None
        if isinstance(t, T.Const):
            return self.env.lookup(t.name).body
        if isinstance(t, T.Proj1):
            if isinstance(t.body, T.Pair):
                return t.body.fst
            body = self._head_step(t.body)
            return T.Proj1(body) if body is not None else None
        if isinstance(t, T.Proj2):
            if isinstance(t.body, T.Pair):
                return t.body.snd
            body = self._head_step(t.body)
            return T.Proj2(body) if body is not None else None
        if isinstance(t, T.J):
            if isinstance(t.q, T.Refl):
                return T.App(t.c, t.a)
            q = self._head_step(t.q)
            if q is not None:
                return T.J(t.motive, t.c, t.a, t.b, q, t.hints)
            return None
        return None

    def whnf(self, t: T.Term, fuel=None) -> T.Term:
        fuel = self.fuel if fuel is None else fuel
        for _ in range(fuel):
            r = self._head_step(t)
            if r is None:
                return t
            t = r
        raise FuelExhausted("weak head normalization ran out of fuel")

    def normalize(self, t: T.Term, fuel=None) -> T.Term:
        fuel = self.fuel if fuel is None else fuel
        for _ in range(fuel):
            t2 = self._step(t)
            if t2 is None:
                return t
            t = t2
        raise FuelExhausted("normalization ran out of fuel (%d steps)" % fuel)

    def convertible(self, lhs: T.Term, rhs: T.Term) -> bool:
        if lhs == rhs:
            return True
        return self.normalize(lhs) == self.normalize(rhs)

    # ---- contexts ----
    # A context is a list of (name, classifier) pairs, outermost first;
    # classifiers are de Bruijn terms relative to their own prefix.

    def wf_context(self, ctx):
        names = set()
        for i, (name, classifier) in enumerate(ctx):
            if name in names:
                raise DuplicateVariable("variable %r declared twice" % name)
            names.add(name)
            prefix = ctx[:i]
            s = self.infer(prefix, classifier)
            s = self.whnf(s)
            if s not in (T.STAR, T.KIND):
                raise IllFormedClassifier(
                    "classifier of %r is neither a type nor a kind" % name
                )
        return True

    def _ctx_type(self, ctx, index):
        if index >= len(ctx):
            raise UnboundVariable("variable index %d out of range" % index)
        _, classifier = ctx[len(ctx) - 1 - index]
        return T.shift(classifier, index + 1)

    def _infer_sort(self, ctx, t: T.Term) -> T.Sort:
        s = self.whnf(self.infer(ctx, t))
        if s not in (T.STAR, T.KIND):
            raise IllFormedClassifier("expected a type or a kind")
        return s

    # ---- typing ----

    def infer(self, ctx, t: T.Term) -> T.Term:
        if isinstance(t, T.Sort):
            if t.name == "star":
                return T.KIND
            raise NotWellTyped("the sort of kinds has no classifier")
        if isinstance(t, T.Var):
            return self._ctx_type(ctx, t.index)
        if isinstance(t, T.Const):
            return self.env.lookup(t.name).ty if t.name in self.env else self._missing(t)
        if isinstance(t, T.Pi):
            s1 = self._infer_sort(ctx, t.domain)
            s2 = self._infer_sort(ctx + [(self._freshname(ctx, t.binder), t.domain)], t.codomain)
            if s1 == T.KIND and s2 == T.KIND:
                raise ForbiddenPiFormation(
                    "products of a kind into a kind are not part of this system"
                )
            return s2
        if isinstance(t, T.Lam):
            self._infer_sort(ctx, t.annot)
            body_ty = self.infer(ctx + [(self._freshname(ctx, t.binder), t.annot)], t.body)
            pi = T.Pi(t.binder, t.annot, body_ty)
            self.infer(ctx, pi)  # enforces the (s1, s2) restriction
            return pi
        if isinstance(t, T.App):
            fn_ty = self.whnf(self.infer(ctx, t.fn))
            if not isinstance(fn_ty, T.Pi):
                raise NotAFunction("application head has non-product classifier")
            try:
                self.check(ctx, t.arg, fn_ty.domain)
            except ConversionFailure as e:
                raise DomainMismatch(
                    "argument does not fit the product domain: %s" % e.message
                )
            return T.open_body(fn_ty.codomain, t.arg)
        if isinstance(t, T.Sigma):
            self._require(self.flags.sigma, "sigma")
            self._check_is_type(ctx, t.domain)
            self._check_is_type(ctx + [(self._freshname(ctx, t.binder), t.domain)], t.codomain)
            return T.STAR
        if isinstance(t, T.Pair):
            self._require(self.flags.sigma, "sigma")
            if t.annot is None:
                raise NotWellTyped(
                    "unannotated pairs are only accepted in checking mode"
                )
            self._check_is_type(ctx, t.annot)
            sig = self.whnf(t.annot)
            if not isinstance(sig, T.Sigma):
                raise NotAType("pair annotation is not a Σ-type")
            self.check(ctx, t.fst, sig.domain)
            self.check(ctx, t.snd, T.open_body(sig.codomain, t.fst))
            return t.annot
        if isinstance(t, T.Proj1):
            sig = self._infer_sigma(ctx, t.body)
            return sig.domain
        if isinstance(t, T.Proj2):
            sig = self._infer_sigma(ctx, t.body)
            return T.open_body(sig.codomain, T.Proj1(t.body))
        if isinstance(t, T.Id):
            self._require(self.flags.identity, "identity")
            self._check_is_type(ctx, t.ty)
            self.check(ctx, t.lhs, t.ty)
            self.check(ctx, t.rhs, t.ty)
            return T.STAR
        if isinstance(t, T.Refl):
            self._require(self.flags.identity, "identity")
            raise NotWellTyped("refl is only accepted in checking mode")
        if isinstance(t, T.J):
            self._require(self.flags.identity, "identity")
            sigma = self.infer(ctx, t.a)
            self._check_is_type(ctx, sigma)
            self.check(ctx, t.b, sigma)
            self.check(ctx, t.q, T.Id(sigma, t.a, t.b))
            hx, hy, hp = t.hints
            motive_ctx = ctx + [
                (self._freshname(ctx, hx), sigma),
                (self._freshname(ctx, hy), T.shift(sigma, 1)),
                (self._freshname(ctx, hp), T.Id(T.shift(sigma, 2), T.Var(1, hx), T.Var(0, hy))),
            ]
            self.check(motive_ctx, t.motive, T.STAR)
            # Πz:σ. motive[x:=z, y:=z, p:=refl]; substituting y:=Var(0) merges
            # the two endpoint binders into the fresh product binder z.
            diag = T.subst(T.subst(t.motive, 0, T.REFL), 0, T.Var(0, "z"))
            c_ty = T.Pi("z", sigma, diag)
            self.check(ctx, t.c, c_ty)
            inst = T.subst(
                T.subst(T.subst(t.motive, 0, T.shift(t.q, 2)), 0, T.shift(t.b, 1)),
                0,
                t.a,
            )
            return inst
        raise NotWellTyped("unrecognized term node %r" % (t,))

    def _missing(self, t):
        raise UnknownName("no definition named %r" % t.name)

    def _infer_sigma(self, ctx, p):
        self._require(self.flags.sigma, "sigma")
        ty = self.whnf(self.infer(ctx, p))
        if not isinstance(ty, T.Sigma):
            raise NotAFunction("projection applied to a non-Σ value")
        return ty

    def _check_is_type(self, ctx, t):
        s = self._infer_sort(ctx, t)
        if s != T.STAR:
            raise NotAType("expected a type (classifier *)")

    def _require(self, enabled, name):
        if not enabled:
            raise ExtensionDisabled("the %s extension is not enabled" % name)

    def _freshname(self, ctx, hint):
        used = {n for n, _ in ctx}
        name = hint or "x"
        n = 0
        while name in used:
            n += 1
            name = "%s%d" % (hint, n)
        return name

    def check(self, ctx, t: T.Term, expected: T.Term):
        ty = self.whnf(expected)
        if isinstance(t, T.Refl):
            self._require(self.flags.identity, "identity")
            if not isinstance(ty, T.Id):
                raise ConversionFailure("refl checked against a non-identity type")
            if not self.convertible(ty.lhs, ty.rhs):
                raise ConversionFailure(
                    "refl requires convertible endpoints",
                    expected_nf=self.normalize(ty.lhs),
                    actual_nf=self.normalize(ty.rhs),
                )
            return True
        if isinstance(t, T.Pair) and t.annot is None:
            self._require(self.flags.sigma, "sigma")
            if not isinstance(ty, T.Sigma):
                raise ConversionFailure("pair checked against a non-Σ type")
            self.check(ctx, t.fst, ty.domain)
            self.check(ctx, t.snd, T.open_body(ty.codomain, t.fst))
            return True
        if isinstance(t, T.Lam) and isinstance(ty, T.Pi):
            if not self.convertible(t.annot, ty.domain):
                raise ConversionFailure(
                    "lambda annotation does not match the product domain",
                    expected_nf=self.normalize(ty.domain),
                    actual_nf=self.normalize(t.annot),
                )
            self.check(
                ctx + [(self._freshname(ctx, t.binder), t.annot)], t.body, ty.codomain
            )
            return True
        actual = self.infer(ctx, t)
        if not self.convertible(actual, expected):
            raise ConversionFailure(
                "type mismatch",
                expected_nf=self.normalize(expected),
                actual_nf=self.normalize(actual),
            )
        return True

    def classify(self, ctx, t: T.Term) -> SortClass:
        if t == T.KIND:
            return SortClass.KIND_SORT
        try:
            classifier = self.infer(ctx, t)
        except TypeError_ as e:
            raise NotWellTyped("cannot classify an ill-typed expression: %s" % e)
        if self.whnf(classifier) == T.KIND:
            return SortClass.KIND_EXPR
        s = self.whnf(self.infer(ctx, classifier))
        if s == T.KIND:
            return SortClass.CONSTRUCTOR_EXPR
        if s == T.STAR:
            return SortClass.TERM_EXPR
        raise NotWellTyped("classifier is neither a kind nor a type")

    def is_type(self, ctx, t: T.Term) -> bool:
        """Is t's classifier the sort *? (Types are constructors of kind *.)"""
        return self.whnf(self.infer(ctx, t)) == T.STAR

    def is_kind(self, ctx, t: T.Term) -> bool:
        return self.whnf(self.infer(ctx, t)) == T.KIND

    # ---- one-step reducts (for the subject-reduction property suite) ----

    def reducts(self, t: T.Term):
        """All one-step beta/proj/J reducts of t (definitions not unfolded)."""
        out = []

        def rebuild(node, field_names, i, sub):
            vals = [sub if n == field_names[i] else getattr(node, n) for n in field_names]
            return type(node)(*vals)

        def walk(node, put):
            if isinstance(node, T.App):
                if isinstance(node.fn, T.Lam):
                    put(T.open_body(node.fn.body, node.arg))
                walk(node.fn, lambda s: put(T.App(s, node.arg)))
                walk(node.arg, lambda s: put(T.App(node.fn, s)))
            elif isinstance(node, T.Proj1):
                if isinstance(node.body, T.Pair):
                    put(node.body.fst)
                walk(node.body, lambda s: put(T.Proj1(s)))
            elif isinstance(node, T.Proj2):
                if isinstance(node.body, T.Pair):
                    put(node.body.snd)
                walk(node.body, lambda s: put(T.Proj2(s)))
            elif isinstance(node, T.J):
                if isinstance(node.q, T.Refl):
                    put(T.App(node.c, node.a))
                for nm in ("motive", "c", "a", "b", "q"):
                    walk(
                        getattr(node, nm),
                        lambda s, nm=nm: put(
                            T.J(*(s if x == nm else getattr(node, x)
                                  for x in ("motive", "c", "a", "b", "q")), hints=node.hints)
                        ),
                    )
            elif isinstance(node, (T.Pi, T.Sigma)):
                walk(node.domain, lambda s: put(type(node)(node.binder, s, node.codomain)))
                walk(node.codomain, lambda s: put(type(node)(node.binder, node.domain, s)))
            elif isinstance(node, T.Lam):
                walk(node.annot, lambda s: put(T.Lam(node.binder, s, node.body)))
                walk(node.body, lambda s: put(T.Lam(node.binder, node.annot, s)))
            elif isinstance(node, T.Pair):
                walk(node.fst, lambda s: put(T.Pair(s, node.snd, node.annot)))
                walk(node.snd, lambda s: put(T.Pair(node.fst, s, node.annot)))
                if node.annot is not None:
                    walk(node.annot, lambda s: put(T.Pair(node.fst, node.snd, s)))
            elif isinstance(node, T.Id):
                for nm in ("ty", "lhs", "rhs"):
                    walk(
                        getattr(node, nm),
                        lambda s, nm=nm: put(
                            T.Id(*(s if x == nm else getattr(node, x)
                                   for x in ("ty", "lhs", "rhs")))
                        ),
                    )

        walk(t, out.append)
        return out
