"""Concrete syntax: lexer, parser and printer for the term language.

Files are sequences of definitions/postulates with an optional
``#ext`` pragma line. Notation accepted::

    *            the universe of types        □, KIND   the sort of kinds
    Πx:A. B      forall x:A. B                A -> B, A → B
    λx:A. b      \\x:A. b
    Σx:A. B      sig x:A. B
    <a, b>       pair (optionally <a, b @ T> with its Sigma annotation)
    fst t, snd t projections (π1/π2 accepted)
    a ={T} b     identity type
    refl         J[x y p => T](c, a, b, q)
    -- comment   #ext sigma id
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .terms import (
    App,
    Const,
    Id,
    J,
    KIND,
    Lam,
    Pair,
    Pi,
    Proj1,
    Proj2,
    REFL,
    Refl,
    STAR,
    Sigma,
    Sort,
    Term,
    Var,
    uses_var,
)

KEYWORDS = {
    "forall",
    "sig",
    "refl",
    "J",
    "KIND",
    "fst",
    "snd",
    "postulate",
}

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r]+)
    | (?P<comment>--[^\n]*)
    | (?P<nl>\n)
    | (?P<pragma>\#ext[^\n]*)
    | (?P<defeq>:=)
    | (?P<arrow>->|→)
    | (?P<darrow>=>)
    | (?P<ideq>=\{)
    | (?P<sym>[()<>\[\],.:@{}*□]|Π|λ|Σ|\\)
    | (?P<ident>[^\s()<>\[\],.:@{}*□\\#=→]+)
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(source: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError("unexpected character %r" % source[pos], span=(line, col))
        kind = m.lastgroup
        text = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(text)
        else:
            if kind == "ident" and text in KEYWORDS:
                kind = text
            tokens.append(Token(kind, text, line, col))
            col += len(text)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass
class Declaration:
    name: str
    body: Term | None  # None for postulates
    ascription: Term | None
    span: tuple


@dataclass
class DeclarationFile:
    extensions: tuple = ()
    declarations: list = field(default_factory=list)


class _Parser:
    def __init__(self, tokens, globals_=()):
        self.tokens = tokens
        self.pos = 0
        self.globals = set(globals_)
        self.bound = []  # innermost binder last
        self.depth = 0  # bracket nesting; line breaks only end apps at 0

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind, text=None):
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            raise ParseError(
                "expected %r, found %r" % (want, tok.text or "end of input"),
                span=(tok.line, tok.col),
                expected=(want,),
            )
        return self.next()

    def at_sym(self, text):
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    # ---- files ----

    def parse_file(self):
        extensions = []
        decls = []
        names = set(self.globals)
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "pragma":
                self.next()
                extensions.extend(tok.text.split()[1:])
                continue
            decl = self.parse_declaration()
            if decl.name in names:
                raise ParseError("duplicate name %r" % decl.name, span=decl.span)
            names.add(decl.name)
            self.globals.add(decl.name)
            decls.append(decl)
        return DeclarationFile(tuple(extensions), decls)

    def parse_declaration(self):
        tok = self.peek()
        if tok.kind == "postulate":
            self.next()
            name = self.expect("ident")
            self.expect("sym", ":")
            ty = self.parse_term()
            return Declaration(name.text, None, ty, (name.line, name.col))
        name = self.expect("ident")
        ascription = None
        if self.at_sym(":"):
            self.next()
            ascription = self.parse_term()
        self.expect("defeq")
        body = self.parse_term()
        return Declaration(name.text, body, ascription, (name.line, name.col))

    # ---- terms ----

    def parse_term(self):
        tok = self.peek()
        if tok.kind == "sym" and tok.text in ("Π", "λ", "Σ", "\\"):
            return self.parse_binder(self.next().text)
        if tok.kind in ("forall", "sig"):
            self.next()
            return self.parse_binder("Π" if tok.kind == "forall" else "Σ")
        return self.parse_arrow()

    def parse_binder(self, head):
        names = [self.expect("ident").text]
        while True:
            tok = self.peek()
            if tok.kind == "ident":
                names.append(self.next().text)
            elif self.at_sym(","):
                self.next()
            else:
                break
        self.expect("sym", ":")
        domain = self.parse_term()
        self.expect("sym", ".")
        for n in names:
            self.bound.append(n)
        body = self.parse_term()
        for _ in names:
            self.bound.pop()
        # innermost binder first when folding back up
        from .terms import shift

        for i, n in enumerate(reversed(names)):
            dom = shift(domain, len(names) - 1 - i)
            if head in ("Π",):
                body = Pi(n, dom, body)
            elif head in ("λ", "\\"):
                body = Lam(n, dom, body)
            else:
                body = Sigma(n, dom, body)
        return body

    def parse_arrow(self):
        lhs = self.parse_eq()
        if self.peek().kind == "arrow":
            self.next()
            rhs = self.parse_term()
            from .terms import shift

            return Pi("_", lhs, shift(rhs, 1))
        return lhs

    def parse_eq(self):
        lhs = self.parse_app()
        if self.peek().kind == "ideq":
            self.next()
            ty = self.parse_term()
            self.expect("sym", "}")
            rhs = self.parse_app()
            return Id(ty, lhs, rhs)
        return lhs

    _ATOM_STARTS = ("ident", "refl", "J", "fst", "snd", "KIND")

    def parse_app(self):
        t = self.parse_atom()
        while True:
            tok = self.peek()
            if (
                self.depth == 0
                and self.pos > 0
                and tok.line != self.tokens[self.pos - 1].line
            ):
                break
            if tok.kind in self._ATOM_STARTS or (
                tok.kind == "sym" and tok.text in ("(", "<", "*", "□", "Π", "λ", "Σ", "\\")
            ):
                # binders as arguments need parens; don't swallow them
                if tok.kind == "sym" and tok.text in ("Π", "λ", "Σ", "\\"):
                    break
                t = App(t, self.parse_atom())
            else:
                break
        return t

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "*":
            self.next()
            return STAR
        if (tok.kind == "sym" and tok.text == "□") or tok.kind == "KIND":
            self.next()
            return KIND
        if tok.kind == "refl":
            self.next()
            return REFL
        if tok.kind in ("fst", "snd"):
            self.next()
            body = self.parse_atom()
            return Proj1(body) if tok.kind == "fst" else Proj2(body)
        if tok.kind == "J":
            return self.parse_j()
        if tok.kind == "sym" and tok.text == "(":
            self.next()
            self.depth += 1
            t = self.parse_term()
            self.expect("sym", ")")
            self.depth -= 1
            return t
        if tok.kind == "sym" and tok.text == "<":
            self.next()
            self.depth += 1
            fst = self.parse_term()
            self.expect("sym", ",")
            snd = self.parse_term()
            annot = None
            if self.at_sym("@"):
                self.next()
                annot = self.parse_term()
            self.expect("sym", ">")
            self.depth -= 1
            return Pair(fst, snd, annot)
        if tok.kind == "ident":
            self.next()
            name = tok.text
            if name == "π1":
                return Proj1(self.parse_atom())
            if name == "π2":
                return Proj2(self.parse_atom())
            for depth, bound in enumerate(reversed(self.bound)):
                if bound == name:
                    return Var(depth, name)
            if name in self.globals:
                return Const(name)
            raise ParseError("unbound name %r" % name, span=(tok.line, tok.col))
        raise ParseError(
            "expected a term, found %r" % (tok.text or "end of input"),
            span=(tok.line, tok.col),
            expected=("term",),
        )

    def parse_j(self):
        self.expect("J")
        self.expect("sym", "[")
        self.depth += 1
        hints = (
            self.expect("ident").text,
            self.expect("ident").text,
            self.expect("ident").text,
        )
        self.expect("darrow")
        self.bound.extend(hints)
        motive = self.parse_term()
        del self.bound[-3:]
        self.expect("sym", "]")
        self.expect("sym", "(")
        c = self.parse_term()
        self.expect("sym", ",")
        a = self.parse_term()
        self.expect("sym", ",")
        b = self.parse_term()
        self.expect("sym", ",")
        q = self.parse_term()
        self.expect("sym", ")")
        self.depth -= 1
        return J(motive, c, a, b, q, hints)


def parse_file(source: str, globals_=()) -> DeclarationFile:
    parser = _Parser(tokenize(source), globals_)
    return parser.parse_file()


def parse_term(source: str, context_names=(), globals_=()) -> Term:
    """Parse a single term; context_names lists bindings outermost first."""
    parser = _Parser(tokenize(source), globals_)
    parser.bound = list(context_names)
    t = parser.parse_term()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError("trailing input %r" % tok.text, span=(tok.line, tok.col))
    return t


# ---- printing ----


def _fresh(hint, used):
    if hint in ("_",):
        hint = "x"
    name = hint
    n = 0
    while name in used or name in KEYWORDS:
        n += 1
        name = "%s%d" % (hint, n)
    return name


# precedence levels: 0 binder, 1 arrow, 2 eq, 3 app, 4 atom
def print_term(t: Term, context_names=(), globals_=()) -> str:
    used = set(context_names) | set(globals_)
    return _pp(t, list(context_names), used, 0)


def _pp(t, names, used, prec):
    if isinstance(t, Sort):
        return "*" if t.name == "star" else "□"
    if isinstance(t, Refl):
        return "refl"
    if isinstance(t, Var):
        if t.index < len(names):
            return names[len(names) - 1 - t.index]
        return "%s!%d" % (t.hint, t.index - len(names))
    if isinstance(t, Const):
        return t.name
    if isinstance(t, (Pi, Sigma)):
        if isinstance(t, Pi) and not uses_var(t.codomain, 0):
            from .terms import subst

            dom = _pp(t.domain, names, used, 2)
            # var 0 is unused, so substituting it away just lowers the indices
            cod = _pp(subst(t.codomain, 0, STAR), names, used, 1)
            return _paren("%s -> %s" % (dom, cod), prec, 1)
        head = "Π" if isinstance(t, Pi) else "Σ"
        name = _fresh(t.binder, used)
        dom = _pp(t.domain, names, used, 0)
        body = _pp(t.codomain, names + [name], used | {name}, 0)
        return _paren("%s%s:%s. %s" % (head, name, dom, body), prec, 0)
    if isinstance(t, Lam):
        name = _fresh(t.binder, used)
        dom = _pp(t.annot, names, used, 0)
        body = _pp(t.body, names + [name], used | {name}, 0)
        return _paren("λ%s:%s. %s" % (name, dom, body), prec, 0)
    if isinstance(t, App):
        return _paren(
            "%s %s" % (_pp(t.fn, names, used, 3), _pp(t.arg, names, used, 4)), prec, 3
        )
    if isinstance(t, Pair):
        if t.annot is None:
            return "<%s, %s>" % (_pp(t.fst, names, used, 0), _pp(t.snd, names, used, 0))
        return "<%s, %s @ %s>" % (
            _pp(t.fst, names, used, 0),
            _pp(t.snd, names, used, 0),
            _pp(t.annot, names, used, 0),
        )
    if isinstance(t, Proj1):
        return _paren("fst %s" % _pp(t.body, names, used, 4), prec, 3)
    if isinstance(t, Proj2):
        return _paren("snd %s" % _pp(t.body, names, used, 4), prec, 3)
    if isinstance(t, Id):
        return _paren(
            "%s ={%s} %s"
            % (
                _pp(t.lhs, names, used, 3),
                _pp(t.ty, names, used, 0),
                _pp(t.rhs, names, used, 3),
            ),
            prec,
            2,
        )
    if isinstance(t, J):
        h = [_fresh(x, used) for x in t.hints]
        # make the three motive binders mutually distinct
        while len(set(h)) < 3:
            h[1] = _fresh(h[1] + "'", used | {h[0]})
            h[2] = _fresh(h[2] + "'", used | {h[0], h[1]})
        motive = _pp(t.motive, names + h, used | set(h), 0)
        parts = [_pp(sub, names, used, 0) for sub in (t.c, t.a, t.b, t.q)]
        return "J[%s %s %s => %s](%s)" % (h[0], h[1], h[2], motive, ", ".join(parts))
    raise AssertionError("unknown term node %r" % (t,))


def _paren(s, prec, level):
    return "(%s)" % s if prec > level else s
