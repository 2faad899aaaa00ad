"""The four textual facet sublanguages: grammar, box formatting, typing, evaluation.

All four are line-oriented: one production or rule per line, blank lines and
full-line `#` comments ignored.  `$i` refers to the i-th right-hand-side
component of the production (0-based, literals included); `$self` in an
evaluation premise re-evaluates the current node.

  grammar   Assign: Stmt -> ident ":=" Expr ";"
  box       Assign = H hs=1 [$0 ":=" $2 ";"]
  typing    Assign: |- $2 : 'a, lookup $0 : 'a => unit
  eval      Assign: eval $2 -> v, store $0 <- v => unit

Every facet value has a canonical printer and parse(print(v)) == v.
"""

import re
from dataclasses import dataclass

from .boxes import parse_box, print_box
from .errors import ParseError

FACET_KINDS = ("grammar", "box", "typing", "eval")
GROUND_TYPES = ("int", "bool", "string", "unit")
BUILTIN_OPS = ("add", "sub", "mul", "lt", "concat", "not")
TOKEN_CLASSES = ("ident", "number", "string")

_LABEL_RE = re.compile(r"[A-Z][A-Za-z0-9]*$")
_NONTERM_RE = re.compile(r"[A-Z][A-Za-z0-9]*$")
_VAR_RE = re.compile(r"[a-z_][a-z0-9_]*$")
_TYVAR_RE = re.compile(r"'[a-z][a-z0-9]*$")


# --- grammar ----------------------------------------------------------------

@dataclass(frozen=True)
class NtRef:
    name: str


@dataclass(frozen=True)
class TokRef:
    class_name: str        # one of TOKEN_CLASSES


@dataclass(frozen=True)
class Lit:
    spelling: str


@dataclass(frozen=True)
class Production:
    label: str
    lhs: str
    rhs: tuple

    def value_positions(self):
        """Rhs indices that carry a value (nonterminals and ident/number/string)."""
        return [i for i, s in enumerate(self.rhs) if not isinstance(s, Lit)]

    def literal_spellings(self):
        return [s.spelling for s in self.rhs if isinstance(s, Lit)]


def parse_production(line, line_no=1):
    label, rest, col = _split_label(line, line_no, ":")
    m = re.match(r"\s*([A-Za-z0-9]+)\s*->\s*(.*)$", rest)
    if not m:
        raise ParseError("expected 'Lhs -> rhs'", line=line_no, column=col, expected=["->"])
    lhs = m.group(1)
    if not _NONTERM_RE.match(lhs):
        raise ParseError("nonterminal %r must be capitalized" % lhs, line=line_no, column=col,
                         expected=["nonterminal"])
    rhs = []
    for tok, tcol in _words(m.group(2), line_no):
        if tok.startswith('"'):
            spelling = tok[1:-1]
            if not spelling:
                raise ParseError("empty literal", line=line_no, column=tcol, expected=["text"])
            rhs.append(Lit(spelling))
        elif tok in TOKEN_CLASSES:
            rhs.append(TokRef(tok))
        elif _NONTERM_RE.match(tok):
            rhs.append(NtRef(tok))
        else:
            raise ParseError("bad grammar symbol %r" % tok, line=line_no, column=tcol,
                             expected=["nonterminal", "ident|number|string", '"literal"'])
    return Production(label, lhs, tuple(rhs))


def production_body(p):
    parts = []
    for s in p.rhs:
        match s:
            case NtRef(name):
                parts.append(name)
            case TokRef(class_name):
                parts.append(class_name)
            case Lit(spelling):
                parts.append('"%s"' % spelling)
    return "%s -> %s" % (p.lhs, " ".join(parts)) if parts else "%s ->" % p.lhs


def print_production(p):
    return "%s: %s" % (p.label, production_body(p))


# --- typing rules -----------------------------------------------------------

@dataclass(frozen=True)
class TypeOf:
    index: int
    type_term: str


@dataclass(frozen=True)
class Lookup:
    index: int
    type_term: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class TypingRule:
    label: str
    premises: tuple
    conclusion: str


def _parse_type_term(tok, line_no, col):
    if tok in GROUND_TYPES or _TYVAR_RE.match(tok):
        return tok
    raise ParseError("bad type %r" % tok, line=line_no, column=col,
                     expected=list(GROUND_TYPES) + ["'a"])


def parse_typing_rule(line, line_no=1):
    label, rest, col = _split_label(line, line_no, ":")
    premise_text, conclusion_text = _split_arrow(rest, line_no, col)
    premises = []
    for part, pcol in _split_commas(premise_text, line_no):
        m = re.match(r"\|-\s*\$(\d+)\s*:\s*(\S+)$", part)
        if m:
            premises.append(TypeOf(int(m.group(1)), _parse_type_term(m.group(2), line_no, pcol)))
            continue
        m = re.match(r"lookup\s+\$(\d+)\s*:\s*(\S+)$", part)
        if m:
            premises.append(Lookup(int(m.group(1)), _parse_type_term(m.group(2), line_no, pcol)))
            continue
        m = re.match(r"(\S+)\s*=\s*(\S+)$", part)
        if m:
            premises.append(Eq(_parse_type_term(m.group(1), line_no, pcol),
                               _parse_type_term(m.group(2), line_no, pcol)))
            continue
        raise ParseError("bad typing premise %r" % part, line=line_no, column=pcol,
                         expected=["|- $i : ty", "lookup $i : ty", "ty = ty"])
    conclusion = _parse_type_term(conclusion_text.strip(), line_no, col)
    return TypingRule(label, tuple(premises), conclusion)


def typing_rule_body(r):
    parts = []
    for p in r.premises:
        match p:
            case TypeOf(i, ty):
                parts.append("|- $%d : %s" % (i, ty))
            case Lookup(i, ty):
                parts.append("lookup $%d : %s" % (i, ty))
            case Eq(a, b):
                parts.append("%s = %s" % (a, b))
    lead = ", ".join(parts)
    return ("%s => %s" % (lead, r.conclusion)) if lead else ("=> %s" % r.conclusion)


def print_typing_rule(r):
    return "%s: %s" % (r.label, typing_rule_body(r))


# --- evaluation rules --------------------------------------------------------

@dataclass(frozen=True)
class EvalP:
    target: object         # rhs index, or "self"
    var: str


@dataclass(frozen=True)
class BuiltinP:
    op: str
    args: tuple
    var: str


@dataclass(frozen=True)
class LoadP:
    index: int
    var: str


@dataclass(frozen=True)
class StoreP:
    index: int
    var: str


@dataclass(frozen=True)
class EmitP:
    var: str


@dataclass(frozen=True)
class IfP:
    var: str
    then_premises: tuple
    else_premises: tuple


@dataclass(frozen=True)
class EvalRule:
    label: str
    premises: tuple
    conclusion: str        # a value variable, or "unit"


def _parse_var(tok, line_no, col):
    if _VAR_RE.match(tok) and tok != "unit":
        return tok
    raise ParseError("bad value variable %r" % tok, line=line_no, column=col,
                     expected=["variable"])


def _parse_eval_premise(part, line_no, col):
    m = re.match(r"eval\s+\$(\d+|self)\s*->\s*(\S+)$", part)
    if m:
        target = "self" if m.group(1) == "self" else int(m.group(1))
        return EvalP(target, _parse_var(m.group(2), line_no, col))
    m = re.match(r"load\s+\$(\d+)\s*->\s*(\S+)$", part)
    if m:
        return LoadP(int(m.group(1)), _parse_var(m.group(2), line_no, col))
    m = re.match(r"store\s+\$(\d+)\s*<-\s*(\S+)$", part)
    if m:
        return StoreP(int(m.group(1)), _parse_var(m.group(2), line_no, col))
    m = re.match(r"emit\s+(\S+)$", part)
    if m:
        return EmitP(_parse_var(m.group(1), line_no, col))
    m = re.match(r"([a-z]+)\(([^()]*)\)\s*->\s*(\S+)$", part)
    if m:
        op = m.group(1)
        if op not in BUILTIN_OPS:
            raise ParseError("unknown builtin %r" % op, line=line_no, column=col,
                             expected=list(BUILTIN_OPS))
        args = tuple(_parse_var(a.strip(), line_no, col)
                     for a in m.group(2).split(",") if a.strip())
        return BuiltinP(op, args, _parse_var(m.group(3), line_no, col))
    m = re.match(r"if\s+(\S+)\s+then\s*\[(.*?)\]\s*else\s*\[(.*)\]$", part)
    if m:
        cond = _parse_var(m.group(1), line_no, col)
        then_ps = tuple(_parse_eval_premise(p, line_no, pcol)
                        for p, pcol in _split_commas(m.group(2), line_no))
        else_ps = tuple(_parse_eval_premise(p, line_no, pcol)
                        for p, pcol in _split_commas(m.group(3), line_no))
        return IfP(cond, then_ps, else_ps)
    raise ParseError("bad eval premise %r" % part, line=line_no, column=col,
                     expected=["eval $i -> v", "load $i -> v", "store $i <- v",
                               "emit v", "op(args) -> v", "if v then [..] else [..]"])


def parse_eval_rule(line, line_no=1):
    label, rest, col = _split_label(line, line_no, ":")
    premise_text, conclusion_text = _split_arrow(rest, line_no, col)
    premises = tuple(_parse_eval_premise(p, line_no, pcol)
                     for p, pcol in _split_commas(premise_text, line_no))
    conclusion = conclusion_text.strip()
    if conclusion != "unit":
        conclusion = _parse_var(conclusion, line_no, col)
    return EvalRule(label, premises, conclusion)


def _print_eval_premise(p):
    match p:
        case EvalP(target, var):
            return "eval $%s -> %s" % (target, var)
        case LoadP(i, var):
            return "load $%d -> %s" % (i, var)
        case StoreP(i, var):
            return "store $%d <- %s" % (i, var)
        case EmitP(var):
            return "emit %s" % var
        case BuiltinP(op, args, var):
            return "%s(%s) -> %s" % (op, ", ".join(args), var)
        case IfP(var, then_ps, else_ps):
            return "if %s then [%s] else [%s]" % (
                var,
                ", ".join(_print_eval_premise(q) for q in then_ps),
                ", ".join(_print_eval_premise(q) for q in else_ps))
    raise TypeError("not an eval premise: %r" % (p,))


def eval_rule_body(r):
    lead = ", ".join(_print_eval_premise(p) for p in r.premises)
    return ("%s => %s" % (lead, r.conclusion)) if lead else ("=> %s" % r.conclusion)


def print_eval_rule(r):
    return "%s: %s" % (r.label, eval_rule_body(r))


# --- box rule lines -----------------------------------------------------------

def parse_box_rule(line, line_no=1):
    label, rest, _ = _split_label(line, line_no, "=")
    return label, parse_box(rest.strip(), line_no)


def print_box_rule(label, box):
    return "%s = %s" % (label, print_box(box))


# --- facet dispatch -------------------------------------------------------------

def parse_facet(kind, text):
    """Parse a whole facet text into a list of rules of the given kind."""
    if kind not in FACET_KINDS:
        raise ValueError("unknown facet kind %r" % kind)
    parse_line = {"grammar": parse_production, "box": parse_box_rule,
                  "typing": parse_typing_rule, "eval": parse_eval_rule}[kind]
    out = []
    for line_no, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append(parse_line(stripped, line_no))
    return out


def print_facet(kind, rules):
    """Canonical text for a list of facet rules; inverse of parse_facet."""
    if kind == "grammar":
        lines = [print_production(p) for p in rules]
    elif kind == "box":
        lines = [print_box_rule(label, box) for label, box in rules]
    elif kind == "typing":
        lines = [print_typing_rule(r) for r in rules]
    elif kind == "eval":
        lines = [print_eval_rule(r) for r in rules]
    else:
        raise ValueError("unknown facet kind %r" % kind)
    return "\n".join(lines) + ("\n" if lines else "")


# --- shared lexical helpers -------------------------------------------------------

def _split_label(line, line_no, sep):
    i = line.find(sep)
    if i < 0:
        raise ParseError("expected %r after the rule label" % sep, line=line_no, column=1,
                         expected=[sep])
    label = line[:i].strip()
    if not _LABEL_RE.match(label):
        raise ParseError("bad rule label %r" % label, line=line_no, column=1,
                         expected=["capitalized label"])
    return label, line[i + 1:], i + 2


def _split_arrow(text, line_no, col):
    i = text.find("=>")
    if i < 0:
        raise ParseError("expected '=>' before the conclusion", line=line_no, column=col,
                         expected=["=>"])
    return text[:i], text[i + 2:]


def _split_commas(text, line_no):
    """Split on top-level commas (not inside [..] or (..)); yields (part, column)."""
    parts, depth, start = [], 0, 0
    for i, c in enumerate(text):
        if c in "[(":
            depth += 1
        elif c in "])":
            depth -= 1
        elif c == "," and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    out = []
    for part, off in parts:
        stripped = part.strip()
        if stripped:
            out.append((stripped, off + 1 + (len(part) - len(part.lstrip()))))
    return out


def _words(text, line_no):
    """Split a production rhs into words and quoted literals with columns."""
    out, i, n = [], 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t":
            i += 1
            continue
        if c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated literal", line=line_no, column=i + 1,
                                 expected=['"'])
            out.append((text[i:j + 1], i + 1))
            i = j + 1
        else:
            j = i
            while j < n and text[j] not in ' \t"':
                j += 1
            out.append((text[i:j], i + 1))
            i = j
    return out
