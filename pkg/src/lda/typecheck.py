"""Syntax-directed typechecker driven by a description's typing rules.

One pass, rules selected by node label, premises solved left to right.
The typing environment is built from declarations: a Lookup premise whose
type variable is already bound acts as a declaration site (first assignment
fixes a variable's type), while an unbound Lookup requires the variable to
be declared already.  Independent errors are all reported, with node spans;
an error type "?" absorbs follow-on mismatches to avoid cascades.
"""

from dataclasses import dataclass

from . import facets
from .errors import NoRule
from .terms import component

ERROR_TYPE = "?"


@dataclass(frozen=True)
class TypeDiag:
    message: str
    span: tuple

    def to_json(self):
        return {"message": self.message,
                "span": None if self.span is None else
                        {"start": list(self.span[0]), "end": list(self.span[1])}}


@dataclass
class TypeReport:
    type: str
    errors: list

    @property
    def ok(self):
        return not self.errors

    def to_json(self):
        return {"ok": self.ok, "type": None if not self.ok else self.type,
                "errors": [e.to_json() for e in self.errors]}


def typecheck(desc, term):
    """Type of the term, plus every independent type error found."""
    if desc.typing is None:
        raise ValueError("description has no typing rules (untyped language)")
    checker = _Checker(desc)
    ty = checker.check(term)
    return TypeReport(ty, checker.errors)


class _Checker:
    def __init__(self, desc):
        self.desc = desc
        self.env = {}
        self.errors = []

    def error(self, message, span):
        self.errors.append(TypeDiag(message, span))

    def check(self, term):
        if term.is_leaf_token:
            return {"number": "int", "string": "string"}.get(term.label, ERROR_TYPE)
        rule = self.desc.typing.get(term.label)
        if rule is None:
            raise NoRule("typing", term.label)
        production = self.desc.grammar.production(term.label)
        bindings = {}
        for premise in rule.premises:
            match premise:
                case facets.TypeOf(i, ty):
                    child = component(production, term, i)
                    actual = self.check(child)
                    self._unify(ty, actual, bindings, child.span)
                case facets.Lookup(i, ty):
                    child = component(production, term, i)
                    name = child.payload
                    if name in self.env:
                        self._unify(ty, self.env[name], bindings, child.span)
                    elif ty.startswith("'") and ty in bindings:
                        self.env[name] = bindings[ty]       # declaration site
                    elif not ty.startswith("'"):
                        self.env[name] = ty
                    else:
                        self.error("variable %r used before assignment" % name, child.span)
                        bindings[ty] = ERROR_TYPE
                case facets.Eq(a, b):
                    ra = self._resolve(a, bindings)
                    rb = self._resolve(b, bindings)
                    if ERROR_TYPE not in (ra, rb) and ra != rb:
                        self.error("types %s and %s are not equal" % (ra, rb), term.span)
        return self._resolve(rule.conclusion, bindings)

    def _unify(self, ty, actual, bindings, span):
        if ty.startswith("'"):
            if ty in bindings:
                if ERROR_TYPE not in (bindings[ty], actual) and bindings[ty] != actual:
                    self.error("expected %s, found %s" % (bindings[ty], actual), span)
            else:
                bindings[ty] = actual
        elif actual != ty and actual != ERROR_TYPE:
            self.error("expected %s, found %s" % (ty, actual), span)

    def _resolve(self, ty, bindings):
        if ty.startswith("'"):
            return bindings.get(ty, ERROR_TYPE)
        return ty
