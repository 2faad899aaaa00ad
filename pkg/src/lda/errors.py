"""Error types shared across the workbench.

Two broad families: description bugs (a language description is broken,
the language *designer* must fix it) and user-program errors (a program
written in the generated DSL is broken).  Tools report them differently,
so they are distinct classes, never folded together.
"""


class LdaError(Exception):
    """Base class; carries a stable machine-readable code plus details."""

    code = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self):
        return {"code": self.code, "message": self.message, "details": _jsonable(self.details)}


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    to_json = getattr(value, "to_json", None)
    return to_json() if callable(to_json) else str(value)


# --- document / facet text errors ---------------------------------------

class ParseError(LdaError):
    """Malformed facet sublanguage text or KB document."""

    code = "parse-error"

    def __init__(self, message, line=None, column=None, expected=None):
        super().__init__(message, line=line, column=column, expected=expected or [])
        self.line = line
        self.column = column
        self.expected = expected or []


class KbValidationError(LdaError):
    """A knowledge-base document breaks one or more invariants."""

    code = "kb-invalid"

    def __init__(self, breaches):
        super().__init__("knowledge base is invalid: %d breach(es)" % len(breaches),
                         breaches=list(breaches))
        self.breaches = list(breaches)


class UnknownRelation(LdaError):
    code = "unknown-relation"

    def __init__(self, name):
        super().__init__("unknown relation %r" % name, name=name)
        self.name = name


# --- design session errors -----------------------------------------------

class DecisionError(LdaError):
    """A decision could not be applied; session state is unchanged."""

    code = "decision-error"


class StaleSequence(DecisionError):
    code = "stale-sequence"

    def __init__(self, got, expected):
        super().__init__("decision seq %d out of order (expected %d)" % (got, expected),
                         got=got, expected=expected)
        self.got = got
        self.expected = expected


class UnknownConcept(DecisionError):
    code = "unknown-concept"

    def __init__(self, concept_id):
        super().__init__("unknown concept %r" % concept_id, concept=concept_id)
        self.concept_id = concept_id


class UnknownParamValue(DecisionError):
    code = "unknown-param-value"

    def __init__(self, concept_id, param, value):
        super().__init__("concept %r has no parameter value %s=%r" % (concept_id, param, value),
                         concept=concept_id, param=param, value=value)


class UnknownTokenSlot(DecisionError):
    code = "unknown-token-slot"

    def __init__(self, concept_id, slot):
        super().__init__("concept %r has no literal token %r to rename" % (concept_id, slot),
                         concept=concept_id, slot=slot)


class UnresolvedDesign(LdaError):
    """Finalize was attempted while violations or pending consequences remain."""

    code = "unresolved-design"

    def __init__(self, violations, pending):
        super().__init__("design cannot be finalized: %d violation(s), %d pending consequence(s)"
                         % (len(violations), len(pending)),
                         violations=violations, pending=list(pending))
        self.violations = violations
        self.pending = list(pending)


class UnknownStartSymbol(LdaError):
    code = "unknown-start-symbol"

    def __init__(self, start, known):
        super().__init__("start symbol %r is not defined by the selected concepts" % start,
                         start=start, known=sorted(known))


# --- description compilation errors ---------------------------------------

class MergeConflict(LdaError):
    """Two concepts define the same production label differently."""

    code = "merge-conflict"

    def __init__(self, label, concept_a, concept_b):
        super().__init__("production label %r defined differently by %r and %r"
                         % (label, concept_a, concept_b),
                         label=label, concepts=sorted([concept_a, concept_b]))


class HoleUnfilled(LdaError):
    code = "hole-unfilled"

    def __init__(self, nonterminal, needed_by):
        super().__init__("nonterminal %r is referenced but never defined (needed by %s)"
                         % (nonterminal, ", ".join(sorted(needed_by))),
                         nonterminal=nonterminal, needed_by=sorted(needed_by))


# --- generated-tool errors: description bugs -------------------------------

class MissingRule(LdaError):
    """Formatter asked for a box rule the description does not provide."""

    code = "missing-rule"

    def __init__(self, label):
        super().__init__("no formatting rule for production %r" % label, label=label)
        self.label = label


class NoRule(LdaError):
    """Typechecker/interpreter asked for a rule the description does not provide."""

    code = "no-rule"

    def __init__(self, kind, label):
        super().__init__("no %s rule for production %r" % (kind, label), kind=kind, label=label)
        self.label = label


# --- generated-tool errors: user-program errors ----------------------------

class LexError(LdaError):
    code = "lex-error"

    def __init__(self, line, column, char):
        super().__init__("cannot tokenize %r at %d:%d" % (char, line, column),
                         line=line, column=column, char=char)
        self.line = line
        self.column = column
        self.char = char


class ProgramSyntaxError(LdaError):
    code = "syntax-error"

    def __init__(self, line, column, expected):
        super().__init__("syntax error at %d:%d, expected one of: %s"
                         % (line, column, ", ".join(sorted(expected)) or "<nothing>"),
                         line=line, column=column, expected=sorted(expected))
        self.line = line
        self.column = column
        self.expected = sorted(expected)


class AmbiguousParse(LdaError):
    """The grammar admits two distinct trees for this input; both are attached."""

    code = "ambiguous-parse"

    def __init__(self, evidence):
        super().__init__("input is ambiguous (%d distinct parse trees found)" % len(evidence),
                         evidence=[t.to_json() for t in evidence])
        self.evidence = evidence


class EvalError(LdaError):
    code = "eval-error"


class UnboundVariable(EvalError):
    code = "unbound-variable"

    def __init__(self, name, span=None):
        super().__init__("variable %r is not bound" % name, name=name, span=span)
        self.name = name
        self.span = span


class FuelExhausted(EvalError):
    code = "fuel-exhausted"

    def __init__(self, fuel):
        super().__init__("evaluation exceeded %d premise steps" % fuel, fuel=fuel)
        self.fuel = fuel


class BuiltinTypeError(EvalError):
    code = "builtin-type-error"

    def __init__(self, op, kinds):
        super().__init__("builtin %r cannot be applied to (%s)" % (op, ", ".join(kinds)),
                         op=op, kinds=list(kinds))
        self.op = op
        self.kinds = list(kinds)


class IntOverflow(EvalError):
    code = "int-overflow"

    def __init__(self, op, operands):
        super().__init__("64-bit overflow in %r" % op, op=op, operands=[str(v) for v in operands])


class DescriptionInvalid(LdaError):
    """A compiled or loaded language description breaks its invariants."""

    code = "description-invalid"

    def __init__(self, entries):
        super().__init__("language description is invalid: %d issue(s)" % len(entries),
                         entries=list(entries))
        self.entries = list(entries)


class ExampleParseError(LdaError):
    """A formatting example failed to parse under the grammar."""

    code = "example-parse-error"

    def __init__(self, name, cause):
        super().__init__("example %r: %s" % (name, cause.message), name=name,
                         cause=cause.to_json())
        self.name = name
        self.cause = cause


class AmbiguousExample(LdaError):
    code = "ambiguous-example"

    def __init__(self, name):
        super().__init__("example %r is ambiguous under the grammar" % name, name=name)
        self.name = name


class UnrepresentableLayout(LdaError):
    """An example places a component left of its node's start column, which
    the box dialect cannot express."""

    code = "unrepresentable-layout"

    def __init__(self, name, label):
        super().__init__("example %r: layout of %r cannot be expressed as a box"
                         % (name, label), name=name, label=label)
