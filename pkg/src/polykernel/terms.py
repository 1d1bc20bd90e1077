"""Pseudo-term AST with nameless (de Bruijn) binders.

Binder names survive only as printing hints (``compare=False``), so
structural equality of terms is exactly alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Sort(Term):
    name: str  # 'star' | 'kind'


STAR = Sort("star")
KIND = Sort("kind")


@dataclass(frozen=True)
class Var(Term):
    index: int
    hint: str = field(default="x", compare=False)


@dataclass(frozen=True)
class Const(Term):
    """Reference to a global definition or postulate."""

    name: str


@dataclass(frozen=True)
class Pi(Term):
    binder: str = field(compare=False)
    domain: Term = None
    codomain: Term = None


@dataclass(frozen=True)
class Lam(Term):
    binder: str = field(compare=False)
    annot: Term = None
    body: Term = None


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    binder: str = field(compare=False)
    domain: Term = None
    codomain: Term = None


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term
    annot: Term | None = None  # Sigma-type; None means checking-mode only


@dataclass(frozen=True)
class Proj1(Term):
    body: Term


@dataclass(frozen=True)
class Proj2(Term):
    body: Term


@dataclass(frozen=True)
class Id(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class Refl(Term):
    pass


REFL = Refl()


@dataclass(frozen=True)
class J(Term):
    """Identity eliminator with an explicit motive.

    ``motive`` lives under three extra binders (lhs, rhs, proof); the
    hints name them for printing.
    """

    motive: Term
    c: Term
    a: Term
    b: Term
    q: Term
    hints: tuple = field(default=("x", "y", "p"), compare=False)


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    """Add d to every variable index >= cutoff."""
    if isinstance(t, Var):
        return Var(t.index + d, t.hint) if t.index >= cutoff else t
    if isinstance(t, (Sort, Const, Refl)):
        return t
    if isinstance(t, App):
        return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))
    if isinstance(t, Pi):
        return Pi(t.binder, shift(t.domain, d, cutoff), shift(t.codomain, d, cutoff + 1))
    if isinstance(t, Lam):
        return Lam(t.binder, shift(t.annot, d, cutoff), shift(t.body, d, cutoff + 1))
    if isinstance(t, Sigma):
        return Sigma(t.binder, shift(t.domain, d, cutoff), shift(t.codomain, d, cutoff + 1))
    if isinstance(t, Pair):
        an = shift(t.annot, d, cutoff) if t.annot is not None else None
        return Pair(shift(t.fst, d, cutoff), shift(t.snd, d, cutoff), an)
    if isinstance(t, Proj1):
        return Proj1(shift(t.body, d, cutoff))
    if isinstance(t, Proj2):
        return Proj2(shift(t.body, d, cutoff))
    if isinstance(t, Id):
        return Id(shift(t.ty, d, cutoff), shift(t.lhs, d, cutoff), shift(t.rhs, d, cutoff))
    if isinstance(t, J):
        return J(
            shift(t.motive, d, cutoff + 3),
            shift(t.c, d, cutoff),
            shift(t.a, d, cutoff),
            shift(t.b, d, cutoff),
            shift(t.q, d, cutoff),
            t.hints,
        )
    raise AssertionError("unknown term node %r" % (t,))


def subst(t: Term, j: int, s: Term) -> Term:
    """Capture-avoiding substitution of s for variable j in t.

    Variables above j are shifted down by one (the binder for j is gone).
    """
    if isinstance(t, Var):
        if t.index == j:
            return shift(s, j)
        if t.index > j:
            return Var(t.index - 1, t.hint)
        return t
    if isinstance(t, (Sort, Const, Refl)):
        return t
    if isinstance(t, App):
        return App(subst(t.fn, j, s), subst(t.arg, j, s))
    if isinstance(t, Pi):
        return Pi(t.binder, subst(t.domain, j, s), subst(t.codomain, j + 1, s))
    if isinstance(t, Lam):
        return Lam(t.binder, subst(t.annot, j, s), subst(t.body, j + 1, s))
    if isinstance(t, Sigma):
        return Sigma(t.binder, subst(t.domain, j, s), subst(t.codomain, j + 1, s))
    if isinstance(t, Pair):
        an = subst(t.annot, j, s) if t.annot is not None else None
        return Pair(subst(t.fst, j, s), subst(t.snd, j, s), an)
    if isinstance(t, Proj1):
        return Proj1(subst(t.body, j, s))
    if isinstance(t, Proj2):
        return Proj2(subst(t.body, j, s))
    if isinstance(t, Id):
        return Id(subst(t.ty, j, s), subst(t.lhs, j, s), subst(t.rhs, j, s))
    if isinstance(t, J):
        return J(
            subst(t.motive, j + 3, s),
            subst(t.c, j, s),
            subst(t.a, j, s),
            subst(t.b, j, s),
            subst(t.q, j, s),
            t.hints,
        )
    raise AssertionError("unknown term node %r" % (t,))


def open_body(body: Term, arg: Term) -> Term:
    """Instantiate the bound variable 0 of a binder body with arg."""
    return subst(body, 0, arg)


def free_indices(t: Term, depth: int = 0, acc=None) -> set:
    """Free variable indices of t, counted relative to depth 0."""
    if acc is None:
        acc = set()
    if isinstance(t, Var):
        if t.index >= depth:
            acc.add(t.index - depth)
    elif isinstance(t, App):
        free_indices(t.fn, depth, acc)
        free_indices(t.arg, depth, acc)
    elif isinstance(t, (Pi, Sigma)):
        free_indices(t.domain, depth, acc)
        free_indices(t.codomain, depth + 1, acc)
    elif isinstance(t, Lam):
        free_indices(t.annot, depth, acc)
        free_indices(t.body, depth + 1, acc)
    elif isinstance(t, Pair):
        free_indices(t.fst, depth, acc)
        free_indices(t.snd, depth, acc)
        if t.annot is not None:
            free_indices(t.annot, depth, acc)
    elif isinstance(t, (Proj1, Proj2)):
        free_indices(t.body, depth, acc)
    elif isinstance(t, Id):
        free_indices(t.ty, depth, acc)
        free_indices(t.lhs, depth, acc)
        free_indices(t.rhs, depth, acc)
    elif isinstance(t, J):
        free_indices(t.motive, depth + 3, acc)
        for sub in (t.c, t.a, t.b, t.q):
            free_indices(sub, depth, acc)
    return acc


def uses_var(t: Term, j: int = 0) -> bool:
    return j in free_indices(t)


def alpha_eq(t: Term, u: Term) -> bool:
    """Alpha-equivalence; trivial under de Bruijn representation."""
    return t == u


def constants(t: Term, acc=None) -> set:
    """Names of all Const nodes occurring in t."""
    if acc is None:
        acc = set()
    if isinstance(t, Const):
        acc.add(t.name)
    elif isinstance(t, App):
        constants(t.fn, acc)
        constants(t.arg, acc)
    elif isinstance(t, (Pi, Sigma)):
        constants(t.domain, acc)
        constants(t.codomain, acc)
    elif isinstance(t, Lam):
        constants(t.annot, acc)
        constants(t.body, acc)
    elif isinstance(t, Pair):
        constants(t.fst, acc)
        constants(t.snd, acc)
        if t.annot is not None:
            constants(t.annot, acc)
    elif isinstance(t, (Proj1, Proj2)):
        constants(t.body, acc)
    elif isinstance(t, Id):
        constants(t.ty, acc)
        constants(t.lhs, acc)
        constants(t.rhs, acc)
    elif isinstance(t, J):
        for sub in (t.motive, t.c, t.a, t.b, t.q):
            constants(sub, acc)
    return acc


def arrow(domain: Term, codomain: Term, binder: str = "_") -> Term:
    """Non-dependent Pi; the codomain is shifted past the unused binder."""
    return Pi(binder, domain, shift(codomain, 1))


def apps(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn
