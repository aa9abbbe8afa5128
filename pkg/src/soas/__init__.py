"""Second-order abstract syntax: signatures, intrinsically sorted terms with
binders and metavariables, substitution, metasubstitution and equational
reasoning."""

from .concrete import parse_term, print_term
from .ctx import Renaming, Var
from .eqlog import Axiom, Theory, check_proofs, elaborate_theory
from .errors import (CheckError, ContextError, GenerationError, ProofError, SoasError,
                     SortError, SpecError, TermSyntaxError)
from .metasub import MetaMap, compose, id_metamap, metamap, msub
from .signature import Signature, Sort, dump_signature, parse_dump, parse_spec
from .term import Arg, Con, MCtx, MVar, MvarDecl, Sub, check
from .traverse import fold, ren, sub, sub1

__all__ = [
    "Arg", "Axiom", "CheckError", "Con", "ContextError", "GenerationError", "MCtx", "MVar",
    "MetaMap", "MvarDecl", "ProofError", "Renaming", "Signature", "SoasError", "Sort",
    "SortError", "SpecError", "Sub", "TermSyntaxError", "Theory", "Var", "check",
    "check_proofs", "compose", "dump_signature", "elaborate_theory", "fold", "id_metamap",
    "metamap", "msub", "parse_dump", "parse_spec", "parse_term", "print_term", "ren", "sub",
    "sub1",
]
