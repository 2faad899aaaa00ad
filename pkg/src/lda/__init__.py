"""Language design assistant workbench.

Compose a DSL from a knowledge base of language building blocks under
constraint checking and advice, then generate a working toolchain (parser,
prettyprinter, typechecker, interpreter) for the composed language, and
infer prettyprinting rules from formatted examples.
"""

from .kb import (And, ByKind, ByText, KnowledgeBase, Or, RelatedTo, kb_hash,
                 load_kb, load_kb_file, query_kb, save_kb, validate_kb)
from .session import (Decision, DesignSession, LanguageDesign, apply_decision,
                      decisions_from_json, decisions_to_json, diagnostics,
                      finalize, open_session, replay)
from .facets import parse_facet, print_facet
from .description import (LanguageDescription, compile_design, load_description,
                          load_description_file, save_description,
                          validate_description)
from .lexer import tokenize
from .earley import parse_program, parse_tokens
from .printing import format_term, render
from .typecheck import typecheck
from .interp import DEFAULT_FUEL, Store, VBool, VInt, VStr, VUnit, evaluate
from .ppbe import collect_layouts, infer_rules, uncovered_labels
from .terms import Term, equal_mod_spans

__all__ = [
    "And", "ByKind", "ByText", "KnowledgeBase", "Or", "RelatedTo", "kb_hash",
    "load_kb", "load_kb_file", "query_kb", "save_kb", "validate_kb",
    "Decision", "DesignSession", "LanguageDesign", "apply_decision",
    "decisions_from_json", "decisions_to_json", "diagnostics", "finalize",
    "open_session", "replay",
    "parse_facet", "print_facet",
    "LanguageDescription", "compile_design", "load_description",
    "load_description_file", "save_description", "validate_description",
    "tokenize", "parse_program", "parse_tokens",
    "format_term", "render",
    "typecheck",
    "DEFAULT_FUEL", "Store", "VBool", "VInt", "VStr", "VUnit", "evaluate",
    "collect_layouts", "infer_rules", "uncovered_labels",
    "Term", "equal_mod_spans",
]

__version__ = "0.1.0"
