"""Bundled library of checked declarations and access helpers."""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass
from functools import lru_cache

from . import terms as T
from . import surface
from .errors import UnknownName
from .typecheck import Checker, Definition, Env, ExtensionFlags, NO_EXTENSIONS


@dataclass(frozen=True)
class CorpusEntry:
    """A named definition together with its checked type and flag set."""

    name: str
    ty: T.Term
    body: T.Term | None
    flags: ExtensionFlags


class Corpus:
    """An ordered collection of declarations sharing one environment."""

    def __init__(self):
        self.env = Env()
        self.entries: dict[str, CorpusEntry] = {}

    def load_source(self, source, name="<corpus>"):
        """Parse, check, and install every declaration in `source`."""
        pragma_names = []
        for line in source.splitlines():
            if line.startswith("#ext"):
                pragma_names.extend(line.split()[1:])
        flags = ExtensionFlags.from_names(pragma_names)
        checker = Checker(self.env, flags)  # installs postulates if enabled
        doc = surface.parse_file(source, set(self.env.names()))
        for decl in doc.declarations:
            if decl.body is None:
                checker.classify([], decl.ascription)
                definition = Definition(decl.name, decl.ascription, None, flags)
            elif decl.ascription is not None:
                checker.classify([], decl.ascription)
                checker.check([], decl.body, decl.ascription)
                definition = Definition(decl.name, decl.ascription, decl.body, flags)
            else:
                ty = checker.infer([], decl.body)
                definition = Definition(decl.name, ty, decl.body, flags)
            self.env.add(definition)
            self.entries[decl.name] = CorpusEntry(
                decl.name, definition.ty, definition.body, flags
            )
            checker = Checker(self.env, flags)
        return self

    def get(self, name):
        """Return (body, type, flags) for a named entry."""
        entry = self.entries.get(name)
        if entry is None:
            raise UnknownName(f"no corpus entry named {name!r}")
        body = entry.body if entry.body is not None else T.Const(name)
        return body, entry.ty, entry.flags

    def type_of(self, name):
        return self.get(name)[1]

    def const(self, name):
        """A constant referring to a corpus entry, after existence check."""
        self.get(name)
        return T.Const(name)

    def checker(self, flags=None, fuel=None):
        kwargs = {} if fuel is None else {"fuel": fuel}
        return Checker(self.env, flags or self._widest_flags(), **kwargs)

    def _widest_flags(self):
        return ExtensionFlags(
            sigma=True, identity=True, uip_postulate=True, funext_postulate=True
        )

    def church_numeral(self, n):
        """The Church numeral n as applications of succ to O."""
        t = T.Const("O")
        for _ in range(n):
            t = T.App(T.Const("succ"), t)
        return t

    def parse(self, source, flags=None):
        """Parse a closed term against the corpus globals."""
        return surface.parse_term(source, [], set(self.env.names()))

    def mutate(self, name, new_body):
        """A copy of the corpus with one definition body swapped out.

        The replacement is checked against the recorded type, so mutants
        stay well typed; only their computational behaviour changes.
        """
        entry = self.entries.get(name)
        if entry is None:
            raise UnknownName(f"no corpus entry named {name!r}")
        if isinstance(new_body, str):
            new_body = self.parse(new_body)
        clone = Corpus.__new__(Corpus)
        clone.env = Env()
        clone.env._defs = dict(self.env._defs)
        clone.entries = dict(self.entries)
        checker = Checker(clone.env, entry.flags)
        checker.check([], new_body, entry.ty)
        clone.env._defs[name] = Definition(name, entry.ty, new_body, entry.flags)
        clone.entries[name] = CorpusEntry(name, entry.ty, new_body, entry.flags)
        return clone


_FILE_ORDER = [
    "00_base.lp2",
    "01_prod.lp2",
    "02_streams.lp2",
    "03_quot.lp2",
    "04_trivquot.lp2",
    "05_relnat.lp2",
    "06_funext.lp2",
    "07_paramquot.lp2",
    "08_ext.lp2",
    "09_postulates.lp2",
]


def _read_bundled(filename):
    root = importlib.resources.files(__package__) / "corpus" / filename
    return root.read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def load_corpus():
    """Load and check the bundled corpus once per process."""
    corpus = Corpus()
    for filename in _FILE_ORDER:
        corpus.load_source(_read_bundled(filename), name=filename)
    return corpus
