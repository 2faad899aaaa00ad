"""Knowledge base of language concepts, relations, and advice rules.

A KB document is UTF-8 JSON with version "lda-kb/1"; canonical serialization
is sorted keys with no insignificant whitespace, so documents hash and diff
deterministically.  KnowledgeBase values are immutable after load: mutation
happens only by loading a new document.
"""

import hashlib
import json
import re
from dataclasses import dataclass, field

from . import facets
from .errors import KbValidationError, ParseError, UnknownRelation

KB_VERSION = "lda-kb/1"
CONCEPT_KINDS = ("building-block", "attribute", "runtime", "processing")
SEVERITIES = ("hint", "warning")

_ID_RE = re.compile(r"[a-z][a-z0-9-]*$")
_PARAM_REF_RE = re.compile(r"\$([a-z][a-z0-9-]*)")


@dataclass(frozen=True)
class ParameterDecl:
    name: str
    values: tuple
    default: str


@dataclass(frozen=True)
class Template:
    """One facet rule template; `when` restricts it to certain parameter values."""
    text: str
    when: tuple = ()       # tuple of (param, tuple-of-values)

    def active(self, params):
        return all(params.get(p) in vals for p, vals in self.when)


@dataclass(frozen=True)
class FacetBundle:
    syntax: tuple
    formatting: tuple
    typing: tuple
    evaluation: tuple
    holes: tuple           # nonterminals this concept references but does not define

    def templates(self):
        for kind, items in (("grammar", self.syntax), ("box", self.formatting),
                            ("typing", self.typing), ("eval", self.evaluation)):
            for t in items:
                yield kind, t


@dataclass(frozen=True)
class LanguageConcept:
    id: str
    kind: str
    description: str
    parameters: tuple = ()
    facets: FacetBundle = None

    def parameter(self, name):
        for p in self.parameters:
            if p.name == name:
                return p
        return None

    def default_params(self):
        return {p.name: p.default for p in self.parameters}


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    pairs: tuple           # tuple of ids (arity 1) or of (a, b) pairs (arity 2)


@dataclass(frozen=True)
class AdviceRule:
    id: str
    condition: dict        # {"has": id} | {"and": [...]} | {"or": [...]} | {"not": ...}
    message: str
    severity: str


@dataclass(frozen=True)
class KnowledgeBase:
    version: str
    concepts: dict         # id -> LanguageConcept
    relations: tuple
    advice: tuple
    header: str = ""

    def relation(self, name):
        for r in self.relations:
            if r.name == name:
                return r
        return None

    def requires(self):
        """Direct requires edges: id -> sorted tuple of required ids."""
        rel = self.relation("requires")
        out = {}
        if rel:
            for a, b in rel.pairs:
                out.setdefault(a, set()).add(b)
        return {a: tuple(sorted(bs)) for a, bs in out.items()}

    def conflict_pairs(self):
        """Unordered conflict pairs as a set of frozensets."""
        rel = self.relation("conflicts")
        if not rel:
            return set()
        return {frozenset(p) for p in rel.pairs}

    def building_blocks(self):
        return [c for c in self.concepts.values() if c.kind == "building-block"]

    def defined_nonterminals(self, concept_id):
        """Nonterminals the concept defines (lhs of any of its productions)."""
        return _syntax_info(self.concepts[concept_id])[0]

    def nonterminal_definers(self, nonterminal):
        """Sorted ids of concepts defining productions for the nonterminal."""
        return sorted(c.id for c in self.building_blocks()
                      if nonterminal in _syntax_info(c)[0])


def kb_hash(kb):
    """Content hash: SHA-256 of the canonical document."""
    return hashlib.sha256(save_kb(kb).encode("utf-8")).hexdigest()


# --- load / save -------------------------------------------------------------

def load_kb(document):
    """Parse and validate a KB document (JSON text).  load(save(kb)) == kb."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError("not valid JSON: %s" % e.msg, line=e.lineno, column=e.colno) from e
    if not isinstance(raw, dict):
        raise ParseError("KB document must be a JSON object", line=1, column=1)
    if raw.get("version") != KB_VERSION:
        raise ParseError("unsupported KB version %r (want %r)" % (raw.get("version"), KB_VERSION),
                         line=1, column=1)
    kb = _from_raw(raw)
    report = validate_kb(kb)
    if not report.ok:
        raise KbValidationError(report.entries)
    return kb


def load_kb_file(path):
    with open(path, encoding="utf-8") as f:
        return load_kb(f.read())


def save_kb(kb):
    """Canonical JSON: keys sorted, no insignificant whitespace."""
    return json.dumps(_to_raw(kb), sort_keys=True, separators=(",", ":"))


def _template_from_raw(item):
    if isinstance(item, str):
        return Template(item)
    when = tuple(sorted((p, tuple(vs)) for p, vs in item.get("when", {}).items()))
    return Template(item["text"], when)


def _template_to_raw(t):
    if not t.when:
        return t.text
    return {"text": t.text, "when": {p: list(vs) for p, vs in t.when}}


def _from_raw(raw):
    concepts = {}
    for cid, c in raw.get("concepts", {}).items():
        params = tuple(ParameterDecl(p["name"], tuple(p["values"]), p["default"])
                       for p in c.get("parameters", []))
        bundle = None
        if "facets" in c:
            f = c["facets"]
            bundle = FacetBundle(
                syntax=tuple(_template_from_raw(t) for t in f.get("syntax", [])),
                formatting=tuple(_template_from_raw(t) for t in f.get("formatting", [])),
                typing=tuple(_template_from_raw(t) for t in f.get("typing", [])),
                evaluation=tuple(_template_from_raw(t) for t in f.get("evaluation", [])),
                holes=tuple(f.get("holes", [])))
        concepts[cid] = LanguageConcept(cid, c.get("kind", ""), c.get("description", ""),
                                        params, bundle)
    relations = tuple(Relation(r["name"], r["arity"],
                               tuple(tuple(p) if isinstance(p, list) else p
                                     for p in r["pairs"]))
                      for r in raw.get("relations", []))
    advice = tuple(AdviceRule(a["id"], a["condition"], a["message"], a["severity"])
                   for a in raw.get("advice", []))
    return KnowledgeBase(raw["version"], concepts, relations, advice, raw.get("header", ""))


def _to_raw(kb):
    concepts = {}
    for cid, c in kb.concepts.items():
        entry = {"kind": c.kind, "description": c.description}
        if c.parameters:
            entry["parameters"] = [{"name": p.name, "values": list(p.values),
                                    "default": p.default} for p in c.parameters]
        if c.facets is not None:
            f = c.facets
            entry["facets"] = {
                "syntax": [_template_to_raw(t) for t in f.syntax],
                "formatting": [_template_to_raw(t) for t in f.formatting],
                "typing": [_template_to_raw(t) for t in f.typing],
                "evaluation": [_template_to_raw(t) for t in f.evaluation],
                "holes": list(f.holes)}
        concepts[cid] = entry
    return {
        "version": kb.version,
        "header": kb.header,
        "concepts": concepts,
        "relations": [{"name": r.name, "arity": r.arity,
                       "pairs": [list(p) if isinstance(p, tuple) else p for p in r.pairs]}
                      for r in kb.relations],
        "advice": [{"id": a.id, "condition": a.condition, "message": a.message,
                    "severity": a.severity} for a in kb.advice],
    }


# --- validation ---------------------------------------------------------------

@dataclass
class ValidationReport:
    entries: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.entries

    def add(self, path, message):
        self.entries.append({"path": path, "message": message})

    def to_json(self):
        return {"ok": self.ok, "entries": self.entries}


def _syntax_info(concept):
    """(defined nonterminals, referenced nonterminals) over all syntax templates."""
    defined, referenced = set(), set()
    if concept.facets is None:
        return defined, referenced
    for t in concept.facets.syntax:
        try:
            p = facets.parse_production(t.text)
        except ParseError:
            continue
        defined.add(p.lhs)
        referenced.add(p.lhs)
        for s in p.rhs:
            if isinstance(s, facets.NtRef):
                referenced.add(s.name)
    return defined, referenced


def validate_kb(kb):
    """Every invariant breach, each naming the offending id.  Empty report <=> valid."""
    report = ValidationReport()
    for cid, c in kb.concepts.items():
        path = "concepts.%s" % cid
        if not _ID_RE.match(cid):
            report.add(path, "id %r is not lowercase-dash form" % cid)
        if c.kind not in CONCEPT_KINDS:
            report.add(path, "unknown kind %r" % c.kind)
        if (c.facets is not None) != (c.kind == "building-block"):
            report.add(path, "facets must be present exactly when kind is building-block")
        declared = {p.name for p in c.parameters}
        for p in c.parameters:
            if p.default not in p.values:
                report.add("%s.parameters.%s" % (path, p.name),
                           "default %r not in allowed values" % p.default)
            if p.name == "self":
                report.add("%s.parameters.%s" % (path, p.name), "parameter may not be named self")
        if c.facets is None:
            continue
        for kind, t in c.facets.templates():
            for name in _PARAM_REF_RE.findall(t.text):
                if name != "self" and name not in declared:
                    report.add(path, "template references undeclared parameter $%s" % name)
            for pname, vals in t.when:
                if pname not in declared:
                    report.add(path, "template guard uses undeclared parameter %r" % pname)
                else:
                    allowed = set(c.parameter(pname).values)
                    for v in vals:
                        if v not in allowed:
                            report.add(path, "template guard value %r not allowed for %r"
                                       % (v, pname))
        for kind, t in c.facets.templates():
            try:
                {"grammar": facets.parse_production, "box": facets.parse_box_rule,
                 "typing": facets.parse_typing_rule, "eval": facets.parse_eval_rule}[kind](t.text)
            except ParseError as e:
                report.add(path, "unparseable %s template %r: %s" % (kind, t.text, e.message))
        defined, referenced = _syntax_info(c)
        for nt in sorted(referenced - defined - set(c.facets.holes)):
            report.add(path, "nonterminal %r is referenced but neither defined nor a hole" % nt)
    ids = set(kb.concepts)
    for i, r in enumerate(kb.relations):
        path = "relations.%s" % r.name
        if r.arity not in (1, 2):
            report.add(path, "arity must be 1 or 2")
        if r.name in ("requires", "conflicts") and r.arity != 2:
            report.add(path, "%s must be binary" % r.name)
        for p in r.pairs:
            members = p if isinstance(p, tuple) else (p,)
            if r.arity == 2 and len(members) != 2:
                report.add(path, "pair %r does not have 2 members" % (p,))
            for m in members:
                if m not in ids:
                    report.add(path, "references missing id %r" % m)
            if r.name in ("requires", "conflicts") and len(members) == 2 \
                    and members[0] == members[1]:
                report.add(path, "%s(%s, %s) breaks irreflexivity" % (r.name, *members))
    for a in kb.advice:
        for cid in _condition_ids(a.condition):
            if cid not in ids:
                report.add("advice.%s" % a.id, "condition references missing id %r" % cid)
        if a.severity not in SEVERITIES:
            report.add("advice.%s" % a.id, "unknown severity %r" % a.severity)
    return report


def _condition_ids(cond):
    if "has" in cond:
        yield cond["has"]
    for sub in cond.get("and", []) + cond.get("or", []):
        yield from _condition_ids(sub)
    if "not" in cond:
        yield from _condition_ids(cond["not"])


def advice_condition_holds(cond, selected):
    if "has" in cond:
        return cond["has"] in selected
    if "and" in cond:
        return all(advice_condition_holds(c, selected) for c in cond["and"])
    if "or" in cond:
        return any(advice_condition_holds(c, selected) for c in cond["or"])
    if "not" in cond:
        return not advice_condition_holds(cond["not"], selected)
    raise ValueError("bad advice condition %r" % (cond,))


# --- queries -------------------------------------------------------------------

@dataclass(frozen=True)
class ByKind:
    kind: str


@dataclass(frozen=True)
class ByText:
    substring: str


@dataclass(frozen=True)
class RelatedTo:
    id: str
    relation: str
    direction: str = "outgoing"     # or "incoming"


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


def query_kb(kb, q):
    """Ids satisfying the query, sorted lexicographically.  Pure."""
    return sorted(_eval_query(kb, q))


def _eval_query(kb, q):
    match q:
        case ByKind(kind):
            return {c.id for c in kb.concepts.values() if c.kind == kind}
        case ByText(substring):
            s = substring.lower()
            return {c.id for c in kb.concepts.values()
                    if s in c.id.lower() or s in c.description.lower()}
        case RelatedTo(cid, relname, direction):
            rel = kb.relation(relname)
            if rel is None:
                raise UnknownRelation(relname)
            if rel.arity == 1:
                # a unary relation is a subset of the identity relation
                return {cid} if cid in rel.pairs else set()
            if direction == "incoming":
                return {a for a, b in rel.pairs if b == cid}
            return {b for a, b in rel.pairs if a == cid}
        case And(left, right):
            return _eval_query(kb, left) & _eval_query(kb, right)
        case Or(left, right):
            return _eval_query(kb, left) | _eval_query(kb, right)
    raise ValueError("bad query %r" % (q,))


def query_from_json(obj):
    """Wire form used by the API and CLI."""
    if "by-kind" in obj:
        return ByKind(obj["by-kind"])
    if "by-text" in obj:
        return ByText(obj["by-text"])
    if "related-to" in obj:
        r = obj["related-to"]
        return RelatedTo(r["id"], r["relation"], r.get("direction", "outgoing"))
    if "and" in obj:
        left, right = obj["and"]
        return And(query_from_json(left), query_from_json(right))
    if "or" in obj:
        left, right = obj["or"]
        return Or(query_from_json(left), query_from_json(right))
    raise ValueError("bad query object %r" % (obj,))
