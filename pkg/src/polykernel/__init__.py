"""A kernel for second-order dependent type theory with Σ and identity
types, erasure into untyped rewriting configurations, polyset-model
evaluation, and an executable refutation suite."""

from .corpus import Corpus, load_corpus
from .errors import KernelError
from .surface import parse_file, parse_term, print_term
from .typecheck import Checker, Env, ExtensionFlags
from .weca import Eraser, Verdict, erase, normalize, weca_eq

__all__ = [
    "Checker",
    "Corpus",
    "Env",
    "Eraser",
    "ExtensionFlags",
    "KernelError",
    "Verdict",
    "erase",
    "load_corpus",
    "normalize",
    "parse_file",
    "parse_term",
    "print_term",
    "weca_eq",
]
