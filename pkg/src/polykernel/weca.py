"""Untyped rewriting configurations and the type-erasure map into them."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from . import terms as T
from .errors import FuelExhausted, NotWellTyped

DEFAULT_FUEL = 100_000


# ---- untyped terms ----


@dataclass(frozen=True)
class UVar:
    index: int
    hint: str = "x"

    def __eq__(self, other):
        return isinstance(other, UVar) and self.index == other.index

    def __hash__(self):
        return hash(("uvar", self.index))


@dataclass(frozen=True)
class UFree:
    """An observation variable, never captured by substitution."""

    name: str


@dataclass(frozen=True)
class ULam:
    binder: str
    body: "UTerm"

    def __eq__(self, other):
        return isinstance(other, ULam) and self.body == other.body

    def __hash__(self):
        return hash(("ulam", self.body))


@dataclass(frozen=True)
class UApp:
    fn: "UTerm"
    arg: "UTerm"


@dataclass(frozen=True)
class UConst:
    name: str


UTerm = UVar | UFree | ULam | UApp | UConst


def uapps(fn, *args):
    for a in args:
        fn = UApp(fn, a)
    return fn


def ushift(t, d, cutoff=0):
    if isinstance(t, UVar):
        return UVar(t.index + d, t.hint) if t.index >= cutoff else t
    if isinstance(t, ULam):
        return ULam(t.binder, ushift(t.body, d, cutoff + 1))
    if isinstance(t, UApp):
        return UApp(ushift(t.fn, d, cutoff), ushift(t.arg, d, cutoff))
    return t


def usubst(t, j, s):
    """Substitute s for variable j, lowering the variables above j."""
    if isinstance(t, UVar):
        if t.index == j:
            return ushift(s, j)
        return UVar(t.index - 1, t.hint) if t.index > j else t
    if isinstance(t, ULam):
        return ULam(t.binder, usubst(t.body, j + 1, s))
    if isinstance(t, UApp):
        return UApp(usubst(t.fn, j, s), usubst(t.arg, j, s))
    return t


def uopen(body, arg):
    return usubst(body, 0, arg)


def ufree_indices(t, cutoff=0, acc=None):
    if acc is None:
        acc = set()
    if isinstance(t, UVar) and t.index >= cutoff:
        acc.add(t.index - cutoff)
    elif isinstance(t, ULam):
        ufree_indices(t.body, cutoff + 1, acc)
    elif isinstance(t, UApp):
        ufree_indices(t.fn, cutoff, acc)
        ufree_indices(t.arg, cutoff, acc)
    return acc


def usize(t):
    if isinstance(t, ULam):
        return 1 + usize(t.body)
    if isinstance(t, UApp):
        return 1 + usize(t.fn) + usize(t.arg)
    return 1


def spine(t):
    """Split into (head, [args]) along left-nested applications."""
    args = []
    while isinstance(t, UApp):
        args.append(t.arg)
        t = t.fn
    return t, list(reversed(args))


# ---- configurations ----


class Verdict(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class WecaConfig:
    """A weakly extensional combinatory-algebra presentation.

    `rules` selects which head contractions are available; `constants`
    is the signature of inert constant symbols.
    """

    name: str
    rules: frozenset
    constants: frozenset = frozenset()

    def has(self, rule):
        return rule in self.rules


BETA = WecaConfig("beta", frozenset({"beta"}))
BETAETA = WecaConfig("betaeta", frozenset({"beta", "eta"}))
LAMBDA_C = WecaConfig("lambda-c", frozenset({"beta", "c_absorb"}), frozenset({"c"}))
LAMBDA_ID = WecaConfig(
    "lambda-id",
    frozenset({"beta", "J_iota", "refl_absorb", "proj_beta", "proj_refl"}),
    frozenset({"refl", "J", "pair", "π1", "π2"}),
)
ONE = WecaConfig("one", frozenset())  # the degenerate one-point algebra

CONFIGS = {c.name: c for c in (BETA, BETAETA, LAMBDA_C, LAMBDA_ID, ONE)}


def config_named(name):
    if name not in CONFIGS:
        raise KeyError("unknown rewriting configuration %r" % name)
    return CONFIGS[name]


def _head_contract(t, config):
    """Apply one rule at the root, or return None."""
    if isinstance(t, UApp):
        fn, arg = t.fn, t.arg
        if config.has("beta") and isinstance(fn, ULam):
            return uopen(fn.body, arg)
        if config.has("c_absorb") and fn == UConst("c"):
            return UConst("c")
        if config.has("refl_absorb") and fn == UConst("refl"):
            return UConst("refl")
        head, args = spine(t)
        if config.has("J_iota") and head == UConst("J") and len(args) >= 4:
            if args[3] == UConst("refl"):
                return uapps(UApp(args[0], args[1]), *args[4:])
        if config.has("proj_beta") and head in (UConst("π1"), UConst("π2")):
            if args:
                phead, pargs = spine(args[0])
                if phead == UConst("pair") and len(pargs) == 2:
                    picked = pargs[0] if head == UConst("π1") else pargs[1]
                    return uapps(picked, *args[1:])
                if config.has("proj_refl") and args[0] == UConst("refl"):
                    return uapps(UConst("refl"), *args[1:])
    if isinstance(t, ULam) and config.has("eta"):
        b = t.body
        if isinstance(b, UApp) and b.arg == UVar(0) and 0 not in ufree_indices(b.fn):
            return ushift(b.fn, -1)
    return None


def step(t, config):
    """One leftmost-outermost step, or None if t is a normal form."""
    r = _head_contract(t, config)
    if r is not None:
        return r
    if isinstance(t, UApp):
        r = step(t.fn, config)
        if r is not None:
            return UApp(r, t.arg)
        r = step(t.arg, config)
        if r is not None:
            return UApp(t.fn, r)
        return None
    if isinstance(t, ULam):
        r = step(t.body, config)
        return None if r is None else ULam(t.binder, r)
    return None


def reducts(t, config):
    """All one-step reducts of t, anywhere in the term."""
    out = []
    r = _head_contract(t, config)
    if r is not None:
        out.append(r)
    if isinstance(t, UApp):
        out.extend(UApp(s, t.arg) for s in reducts(t.fn, config))
        out.extend(UApp(t.fn, s) for s in reducts(t.arg, config))
    elif isinstance(t, ULam):
        out.extend(ULam(t.binder, s) for s in reducts(t.body, config))
    return out


def normalize(t, config, fuel=DEFAULT_FUEL):
    for _ in range(fuel):
        r = step(t, config)
        if r is None:
            return t
        t = r
    raise FuelExhausted("no normal form within %d rewriting steps" % fuel)


def weca_eq(a, b, config, fuel=DEFAULT_FUEL):
    """Decide equality in the configured term model, three-valued."""
    if config is ONE or config.name == "one":
        return Verdict.YES
    try:
        na = normalize(a, config, fuel)
        nb = normalize(b, config, fuel)
    except FuelExhausted:
        return Verdict.UNKNOWN
    return Verdict.YES if na == nb else Verdict.NO


# ---- printing ----


def print_uterm(t, bound=None):
    bound = bound or []

    def fresh(hint):
        name = hint or "x"
        k = 1
        while name in bound:
            k += 1
            name = "%s%d" % (hint or "x", k)
        return name

    def go(t, prec):
        if isinstance(t, UVar):
            if t.index < len(bound):
                return bound[len(bound) - 1 - t.index]
            return "?%d" % (t.index - len(bound))
        if isinstance(t, UFree):
            return t.name
        if isinstance(t, UConst):
            return t.name
        if isinstance(t, ULam):
            name = fresh(t.binder)
            bound.append(name)
            body = go(t.body, 0)
            bound.pop()
            s = "λ%s. %s" % (name, body)
            return "(%s)" % s if prec > 0 else s
        s = "%s %s" % (go(t.fn, 1), go(t.arg, 2))
        return "(%s)" % s if prec > 1 else s

    return go(t, 0)


# ---- erasure ----

_EXT_CONST = {"pair", "π1", "π2", "refl", "J"}


class Eraser:
    """Erasure of checked terms into the untyped signature.

    Type abstractions and type arguments disappear; Σ/identity formers
    become applications of inert constants; definitions unfold except
    for postulates, which stay opaque.
    """

    def __init__(self, checker):
        self.checker = checker
        self._cache = {}

    def erase(self, t, ctx=None):
        """Erase a term well typed in ctx; context term variables become
        named observation variables."""
        tctx = list(ctx or [])
        env = []
        for i, (name, classifier) in enumerate(tctx):
            if self.checker.is_kind(tctx[:i], classifier):
                env.append(("drop", name))
            else:
                env.append(("free", name))
        return self._go(t, tctx, env)

    def _go(self, t, tctx, env):
        if isinstance(t, T.Var):
            pos = len(env) - 1 - t.index
            kind, name = env[pos]
            if kind == "drop":
                raise NotWellTyped("constructor variable in term position")
            if kind == "free":
                return UFree(name)
            depth = sum(1 for k, _ in env[pos + 1 :] if k == "bound")
            return UVar(depth, name)
        if isinstance(t, T.Const):
            return self._erase_const(t.name)
        if isinstance(t, T.Lam):
            tag = "drop" if self.checker.is_kind(tctx, t.annot) else "bound"
            name = self._fresh(tctx, t.binder)
            body = self._go(t.body, tctx + [(name, t.annot)], env + [(tag, name)])
            return body if tag == "drop" else ULam(t.binder, body)
        if isinstance(t, T.App):
            if self._is_constructor_arg(tctx, t.arg):
                return self._go(t.fn, tctx, env)
            return UApp(self._go(t.fn, tctx, env), self._go(t.arg, tctx, env))
        if isinstance(t, T.Pair):
            return uapps(
                UConst("pair"), self._go(t.fst, tctx, env), self._go(t.snd, tctx, env)
            )
        if isinstance(t, T.Proj1):
            return UApp(UConst("π1"), self._go(t.body, tctx, env))
        if isinstance(t, T.Proj2):
            return UApp(UConst("π2"), self._go(t.body, tctx, env))
        if isinstance(t, T.Refl):
            return UConst("refl")
        if isinstance(t, T.J):
            return uapps(
                UConst("J"),
                self._go(t.c, tctx, env),
                self._go(t.a, tctx, env),
                self._go(t.b, tctx, env),
                self._go(t.q, tctx, env),
            )
        raise NotWellTyped("cannot erase a type-level expression: %r" % (t,))

    def _is_constructor_arg(self, tctx, arg):
        return self.checker.is_kind(tctx, self.checker.infer(tctx, arg))

    def _erase_const(self, name):
        if name in self._cache:
            return self._cache[name]
        d = self.checker.env.lookup(name)
        e = UConst(name) if d.body is None else self._go(d.body, [], [])
        self._cache[name] = e
        return e

    def _fresh(self, tctx, hint):
        used = {n for n, _ in tctx}
        name, k = hint or "x", 1
        while name in used:
            k += 1
            name = "%s%d" % (hint or "x", k)
        return name


def erase(checker, t, ctx=None):
    """Erase a checked term to its untyped shadow."""
    return Eraser(checker).erase(t, ctx)
