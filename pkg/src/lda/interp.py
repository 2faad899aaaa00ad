"""Big-step interpreter driven by a description's evaluation rules.

Each premise execution costs one unit of fuel, which bounds every run
including non-terminating loop descriptions.  Integers are 64-bit signed
with an explicit overflow error, so behavior is identical across platforms.
Description bugs (no rule for a label) and user-program errors (unbound
variable, fuel, builtin misuse) are distinct error kinds.
"""

from dataclasses import dataclass, field

from . import facets
from .errors import (BuiltinTypeError, FuelExhausted, IntOverflow, NoRule,
                     UnboundVariable)
from .terms import component

DEFAULT_FUEL = 1_000_000
INT_MIN = -(2 ** 63)
INT_MAX = 2 ** 63 - 1


@dataclass(frozen=True)
class VInt:
    value: int
    kind = "int"

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class VBool:
    value: bool
    kind = "bool"

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class VStr:
    value: str
    kind = "string"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class VUnit:
    kind = "unit"

    def __str__(self):
        return "unit"


@dataclass
class Store:
    vars: dict = field(default_factory=dict)
    output: list = field(default_factory=list)


def evaluate(desc, term, fuel=DEFAULT_FUEL):
    """Evaluate a term; returns (final value, store with emitted output)."""
    if fuel < 1:
        raise ValueError("fuel must be >= 1")
    machine = _Machine(desc, fuel)
    value = machine.eval_node(term)
    return value, machine.store


class _Machine:
    def __init__(self, desc, fuel):
        self.desc = desc
        self.store = Store()
        self.fuel_limit = fuel
        self.fuel = fuel

    def spend(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise FuelExhausted(self.fuel_limit)

    def eval_node(self, term):
        if term.is_leaf_token:
            return self._literal(term)
        rule = self.desc.evaluation.get(term.label)
        if rule is None:
            raise NoRule("evaluation", term.label)
        production = self.desc.grammar.production(term.label)
        bindings = {}
        self._run(rule.premises, production, term, bindings)
        if rule.conclusion == "unit":
            return VUnit()
        return bindings[rule.conclusion]

    def _run(self, premises, production, term, bindings):
        for premise in premises:
            self.spend()
            match premise:
                case facets.EvalP(target, var):
                    if target == "self":
                        bindings[var] = self.eval_node(term)
                    else:
                        bindings[var] = self.eval_node(component(production, term, target))
                case facets.LoadP(i, var):
                    child = component(production, term, i)
                    if child.payload not in self.store.vars:
                        raise UnboundVariable(child.payload, child.span)
                    bindings[var] = self.store.vars[child.payload]
                case facets.StoreP(i, var):
                    child = component(production, term, i)
                    self.store.vars[child.payload] = bindings[var]
                case facets.EmitP(var):
                    self.store.output.append(bindings[var])
                case facets.BuiltinP(op, args, var):
                    bindings[var] = _apply_builtin(op, [bindings[a] for a in args])
                case facets.IfP(var, then_ps, else_ps):
                    cond = bindings[var]
                    if not isinstance(cond, VBool):
                        raise BuiltinTypeError("if", [cond.kind])
                    branch = then_ps if cond.value else else_ps
                    self._run(branch, production, term, bindings)

    def _literal(self, term):
        if term.label == "number":
            value = int(term.payload)
            if value > INT_MAX:
                raise IntOverflow("number-literal", [term.payload])
            return VInt(value)
        if term.label == "string":
            return VStr(term.payload[1:-1])
        raise BuiltinTypeError("eval", [term.label])


def _apply_builtin(op, args):
    kinds = [a.kind for a in args]
    if op in ("add", "sub", "mul"):
        if kinds != ["int", "int"]:
            raise BuiltinTypeError(op, kinds)
        a, b = args[0].value, args[1].value
        result = {"add": a + b, "sub": a - b, "mul": a * b}[op]
        if not INT_MIN <= result <= INT_MAX:
            raise IntOverflow(op, [a, b])
        return VInt(result)
    if op == "lt":
        if kinds != ["int", "int"]:
            raise BuiltinTypeError(op, kinds)
        return VBool(args[0].value < args[1].value)
    if op == "concat":
        if kinds != ["string", "string"]:
            raise BuiltinTypeError(op, kinds)
        return VStr(args[0].value + args[1].value)
    if op == "not":
        if kinds != ["bool"]:
            raise BuiltinTypeError(op, kinds)
        return VBool(not args[0].value)
    raise BuiltinTypeError(op, kinds)
