"""Compiled language descriptions: the contract between design and toolchain.

compile_design merges the resolved facet fragments of a finalized design into
one LanguageDescription: a grammar, a total box rule set, typing rules (absent
when the `untyped` concept is selected), evaluation rules, and a provenance
map from every production label back to the concept that contributed it.

Descriptions serialize to canonical JSON (".desc.json", format "lda-desc/1");
saving is byte-deterministic, which is what the golden-file tests pin.
"""

import json
from dataclasses import dataclass

from . import boxes, facets
from .errors import (DescriptionInvalid, HoleUnfilled, MergeConflict, ParseError)
from .kb import ValidationReport

DESC_FORMAT = "lda-desc/1"
UNTYPED_CONCEPT = "untyped"     # selecting this concept drops the typing facet


@dataclass(frozen=True)
class TokenClass:
    name: str
    kind: str              # keyword | symbol | identifier | number | string
    spelling: str = None   # for keyword/symbol


@dataclass(frozen=True)
class Grammar:
    tokens: tuple
    nonterminals: frozenset
    start: str
    productions: tuple

    def production(self, label):
        for p in self.productions:
            if p.label == label:
                return p
        return None

    def by_lhs(self, nonterminal):
        return [p for p in self.productions if p.lhs == nonterminal]

    def keywords(self):
        return {t.spelling for t in self.tokens if t.kind == "keyword"}

    def literal_spellings(self):
        return {t.spelling for t in self.tokens if t.kind in ("keyword", "symbol")}

    def value_token_kinds(self):
        return {t.kind for t in self.tokens if t.kind in ("identifier", "number", "string")}


@dataclass(frozen=True)
class LanguageDescription:
    name: str
    grammar: Grammar
    formatting: dict       # label -> BoxExpr
    typing: dict           # label -> TypingRule, or None when untyped
    evaluation: dict       # label -> EvalRule
    provenance: dict       # label -> concept id


def _is_word(spelling):
    return spelling[0].isalpha() and all(c.isalnum() or c in "_-" for c in spelling)


def build_grammar(productions, start):
    """Derive token classes and the nonterminal set; every referenced
    nonterminal must be defined by some production."""
    nonterminals = {p.lhs for p in productions}
    needed_by = {}
    tokens = {}
    for p in productions:
        for s in p.rhs:
            match s:
                case facets.NtRef(name):
                    if name not in nonterminals:
                        needed_by.setdefault(name, set()).add(p.label)
                case facets.TokRef(class_name):
                    kind = {"ident": "identifier", "number": "number",
                            "string": "string"}[class_name]
                    tokens[class_name] = TokenClass(class_name, kind)
                case facets.Lit(spelling):
                    kind = "keyword" if _is_word(spelling) else "symbol"
                    tokens[spelling] = TokenClass(spelling, kind, spelling)
    for nt, labels in sorted(needed_by.items()):
        raise HoleUnfilled(nt, labels)
    return Grammar(tuple(sorted(tokens.values(), key=lambda t: t.name)),
                   frozenset(nonterminals), start, tuple(productions))


def compile_design(design):
    """Merge a finalized design's facet fragments into a LanguageDescription."""
    productions, provenance = [], {}
    formatting, typing, evaluation = {}, {}, {}

    def merge(label, value, store, cid):
        if label in store:
            if store[label] != value:
                raise MergeConflict(label, provenance[label], cid)
            return          # identical duplicate definitions collapse
        store[label] = value
        if label not in provenance:
            provenance[label] = cid

    for block in design.blocks:     # blocks arrive sorted by concept id
        for text in block.syntax:
            p = facets.parse_production(text)
            if p.label in provenance:
                existing = next(q for q in productions if q.label == p.label)
                if existing != p:
                    raise MergeConflict(p.label, provenance[p.label], block.concept_id)
                continue
            productions.append(p)
            provenance[p.label] = block.concept_id
        for text in block.formatting:
            label, box = facets.parse_box_rule(text)
            merge(label, box, formatting, block.concept_id)
        for text in block.typing:
            rule = facets.parse_typing_rule(text)
            merge(rule.label, rule, typing, block.concept_id)
        for text in block.evaluation:
            rule = facets.parse_eval_rule(text)
            merge(rule.label, rule, evaluation, block.concept_id)

    grammar = build_grammar(productions, design.start)
    desc = LanguageDescription(
        name=design.name,
        grammar=grammar,
        formatting=formatting,
        typing=None if UNTYPED_CONCEPT in design.selected_ids else typing,
        evaluation=evaluation,
        provenance=provenance)
    report = validate_description(desc)
    if not report.ok:
        raise DescriptionInvalid(report.entries)
    return desc


# --- validation ----------------------------------------------------------------

def reachable_labels(grammar):
    """Labels of productions reachable from the start symbol."""
    seen_nts, labels = set(), set()
    stack = [grammar.start]
    while stack:
        nt = stack.pop()
        if nt in seen_nts:
            continue
        seen_nts.add(nt)
        for p in grammar.by_lhs(nt):
            labels.add(p.label)
            for s in p.rhs:
                if isinstance(s, facets.NtRef):
                    stack.append(s.name)
    return labels


def _box_leaf_sequence(box):
    match box:
        case boxes.Text(t):
            return [("text", t)]
        case boxes.Ref(i):
            return [("ref", i)]
        case boxes.H(_, children) | boxes.V(_, _, children):
            return [leaf for c in children for leaf in _box_leaf_sequence(c)]
        case boxes.I(_, child):
            return _box_leaf_sequence(child)


def _rhs_leaf_sequence(production):
    out = []
    for i, s in enumerate(production.rhs):
        if isinstance(s, facets.Lit):
            out.append(("text", s.spelling))
        else:
            out.append(("ref", i))
    return out


def validate_description(desc):
    """Empty report <=> all LanguageDescription invariants hold."""
    report = ValidationReport()
    g = desc.grammar
    labels = [p.label for p in g.productions]
    if len(labels) != len(set(labels)):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        report.add("grammar", "duplicate production labels: %s" % ", ".join(dupes))
    if g.start not in g.nonterminals:
        report.add("grammar", "start symbol %r is not defined" % g.start)
    by_lhs_label = set()
    for p in g.productions:
        if (p.lhs, p.label) in by_lhs_label:
            report.add("grammar.%s" % p.label, "label repeated for lhs %s" % p.lhs)
        by_lhs_label.add((p.lhs, p.label))
        for s in p.rhs:
            if isinstance(s, facets.NtRef) and s.name not in g.nonterminals:
                report.add("grammar.%s" % p.label, "undefined nonterminal %r" % s.name)
    spellings = [t.spelling for t in g.tokens if t.spelling is not None]
    if len(spellings) != len(set(spellings)):
        report.add("grammar", "duplicate token spellings")

    for p in g.productions:
        box = desc.formatting.get(p.label)
        if box is None:
            report.add(p.label, "missing-formatting")
            continue
        want = _rhs_leaf_sequence(p)
        got = _box_leaf_sequence(box)
        if got != want:
            report.add(p.label, "box rule leaves %r do not match rhs %r" % (got, want))

    if desc.typing is not None:
        for p in g.productions:
            rule = desc.typing.get(p.label)
            if rule is None:
                report.add(p.label, "missing-typing")
                continue
            bound = set()
            for prem in rule.premises:
                match prem:
                    case facets.TypeOf(i, ty) | facets.Lookup(i, ty):
                        if not _valid_type_index(p, i, prem):
                            report.add(p.label, "premise index $%d is not typeable" % i)
                        if ty.startswith("'"):
                            bound.add(ty)
                    case facets.Eq(a, b):
                        for ty in (a, b):
                            if ty.startswith("'") and ty not in bound:
                                report.add(p.label, "Eq uses unbound type variable %s" % ty)
            if rule.conclusion.startswith("'") and rule.conclusion not in bound:
                report.add(p.label, "conclusion type %s is unbound" % rule.conclusion)

    needed = reachable_labels(g)
    for p in g.productions:
        if p.label not in needed:
            continue
        rule = desc.evaluation.get(p.label)
        if rule is None:
            report.add(p.label, "missing-evaluation")
            continue
        _check_eval_premises(p, rule.premises, set(), report, rule)

    for p in g.productions:
        if p.label not in desc.provenance:
            report.add(p.label, "no provenance recorded")
    for label in sorted(set(desc.provenance) - set(labels)):
        report.add(label, "provenance for unknown label")
    return report


def _valid_type_index(p, i, prem):
    if not 0 <= i < len(p.rhs):
        return False
    s = p.rhs[i]
    if isinstance(prem, facets.Lookup):
        return isinstance(s, facets.TokRef) and s.class_name == "ident"
    return isinstance(s, facets.NtRef) or \
        (isinstance(s, facets.TokRef) and s.class_name in ("number", "string"))


def _check_eval_premises(p, premises, defined, report, rule):
    for prem in premises:
        match prem:
            case facets.EvalP(target, var):
                if target != "self":
                    if not 0 <= target < len(p.rhs):
                        report.add(rule.label, "eval $%s out of range" % target)
                    else:
                        s = p.rhs[target]
                        ok = isinstance(s, facets.NtRef) or (
                            isinstance(s, facets.TokRef)
                            and s.class_name in ("number", "string"))
                        if not ok:
                            report.add(rule.label, "eval $%s is not evaluable" % target)
                defined.add(var)
            case facets.LoadP(i, var):
                if not _is_ident_pos(p, i):
                    report.add(rule.label, "load $%d is not an ident token" % i)
                defined.add(var)
            case facets.StoreP(i, var):
                if not _is_ident_pos(p, i):
                    report.add(rule.label, "store $%d is not an ident token" % i)
                _check_used(var, defined, report, rule)
            case facets.EmitP(var):
                _check_used(var, defined, report, rule)
            case facets.BuiltinP(_, args, var):
                for a in args:
                    _check_used(a, defined, report, rule)
                defined.add(var)
            case facets.IfP(var, then_ps, else_ps):
                _check_used(var, defined, report, rule)
                _check_eval_premises(p, then_ps, set(defined), report, rule)
                _check_eval_premises(p, else_ps, set(defined), report, rule)
    if rule.conclusion != "unit" and premises is rule.premises:
        if rule.conclusion not in defined:
            report.add(rule.label, "conclusion variable %r is never defined" % rule.conclusion)


def _check_used(var, defined, report, rule):
    if var == "_" or var not in defined:
        report.add(rule.label, "variable %r used before definition" % var)


def _is_ident_pos(p, i):
    return 0 <= i < len(p.rhs) and isinstance(p.rhs[i], facets.TokRef) \
        and p.rhs[i].class_name == "ident"


# --- serialization ---------------------------------------------------------------

def save_description(desc):
    """Canonical JSON text; byte-identical across runs for equal descriptions."""
    raw = {
        "format": DESC_FORMAT,
        "name": desc.name,
        "grammar": {
            "start": desc.grammar.start,
            "productions": [facets.print_production(p) for p in desc.grammar.productions],
        },
        "formatting": {label: boxes.print_box(b) for label, b in desc.formatting.items()},
        "typing": None if desc.typing is None else
                  {label: facets.typing_rule_body(r) for label, r in desc.typing.items()},
        "evaluation": {label: facets.eval_rule_body(r)
                       for label, r in desc.evaluation.items()},
        "provenance": dict(desc.provenance),
    }
    return json.dumps(raw, sort_keys=True, separators=(",", ":"))


def load_description(text, validate=True):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError("not valid JSON: %s" % e.msg, line=e.lineno, column=e.colno) from e
    if raw.get("format") != DESC_FORMAT:
        raise ParseError("unsupported description format %r" % raw.get("format"),
                         line=1, column=1)
    productions = [facets.parse_production(t) for t in raw["grammar"]["productions"]]
    grammar = build_grammar(productions, raw["grammar"]["start"])
    formatting = {label: boxes.parse_box(text) for label, text in raw["formatting"].items()}
    typing = None
    if raw.get("typing") is not None:
        typing = {label: facets.parse_typing_rule("%s: %s" % (label, text))
                  for label, text in raw["typing"].items()}
    evaluation = {label: facets.parse_eval_rule("%s: %s" % (label, text))
                  for label, text in raw["evaluation"].items()}
    desc = LanguageDescription(raw["name"], grammar, formatting, typing, evaluation,
                               dict(raw.get("provenance", {})))
    if validate:
        report = validate_description(desc)
        if not report.ok:
            raise DescriptionInvalid(report.entries)
    return desc


def load_description_file(path, validate=True):
    with open(path, encoding="utf-8") as f:
        return load_description(f.read(), validate=validate)
