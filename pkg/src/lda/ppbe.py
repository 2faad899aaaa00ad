"""Prettyprinting by example: infer box rules from formatted programs.

The inference is the limited, predictable kind: a rule is emitted only when
every observed instance of a production agrees on line structure, gaps, and
indents, and the emitted rule is the smallest box that reproduces every
instance byte-exactly.  Disagreements are surfaced as conflicts with
witnesses instead of being generalized away, and productions that never
occur in the examples are simply absent from the output (a coverage gap,
not a guess).
"""

from dataclasses import dataclass

from . import boxes, facets
from .errors import (AmbiguousExample, AmbiguousParse, ExampleParseError, LexError,
                     ProgramSyntaxError, UnrepresentableLayout)
from .earley import parse_tokens
from .lexer import tokenize


@dataclass(frozen=True)
class Component:
    kind: str              # "lit" | "value"
    ref: int               # rhs index
    text: str              # literal spelling, None for values
    start: tuple           # (line, col) relative to the node start
    end: tuple             # (line, col) of the last character, exclusive, relative


@dataclass(frozen=True)
class LayoutObservation:
    label: str
    instance: str          # "example-name@line:col"
    components: tuple


@dataclass(frozen=True)
class InferenceConflict:
    label: str
    dimension: str         # line-structure | gap | indent
    witnesses: tuple       # ((instance, observed value), ...)

    def to_json(self):
        return {"label": self.label, "dimension": self.dimension,
                "witnesses": [{"instance": i, "observed": v} for i, v in self.witnesses]}


@dataclass
class InferenceResult:
    rules: dict            # label -> BoxExpr
    conflicts: list

    @property
    def ok(self):
        return not self.conflicts


def collect_layouts(desc, examples):
    """One observation per AST node occurrence, geometry from token spans."""
    observations = []
    for name, text in examples:
        try:
            tokens = tokenize(desc, text)
            term = parse_tokens(desc.grammar, tokens)
        except (LexError, ProgramSyntaxError) as e:
            raise ExampleParseError(name, e) from e
        except AmbiguousParse as e:
            raise AmbiguousExample(name) from e
        _walk(desc, tokens, term, name, observations)
    return observations


def _walk(desc, tokens, term, name, out):
    if term.is_leaf_token:
        return
    production = desc.grammar.production(term.label)
    node_line, node_col = tokens[term.tok_span[0]].span[0]
    instance = "%s@%d:%d" % (name, node_line, node_col)
    comps = []
    pos = term.tok_span[0]
    child_iter = iter(term.children)
    for i, symbol in enumerate(production.rhs):
        if isinstance(symbol, facets.Lit):
            tok = tokens[pos]
            first, last = tok, tok
            pos += 1
            comps.append(("lit", i, symbol.spelling, first, last))
        else:
            child = next(child_iter)
            first = tokens[child.tok_span[0]]
            last = tokens[child.tok_span[1] - 1]
            pos = child.tok_span[1]
            comps.append(("value", i, None, first, last))
            _walk(desc, tokens, child, name, out)
    built = []
    for kind, ref, text, first, last in comps:
        start = (first.line - node_line, first.col - node_col)
        end = (last.end_line - node_line, last.end_col - node_col)
        if start[1] < 0:
            raise UnrepresentableLayout(name, term.label)
        built.append(Component(kind, ref, text, start, end))
    out.append(LayoutObservation(term.label, instance, tuple(built)))


def infer_rules(observations):
    """Per production label, the unique smallest consistent box, or conflicts."""
    by_label = {}
    for ob in sorted(observations, key=lambda o: (o.label, o.instance)):
        by_label.setdefault(ob.label, []).append(ob)
    rules, conflicts = {}, []
    for label in sorted(by_label):
        instances = by_label[label]
        conflict = _find_conflict(label, instances)
        if conflict is not None:
            conflicts.append(conflict)
            continue
        rules[label] = _build_box(instances[0])
    return InferenceResult(rules, conflicts)


def _boundaries(ob):
    """Per boundary: ("gap", n) on a shared line, else ("break", blanks, indent)."""
    out = []
    for prev, nxt in zip(ob.components, ob.components[1:]):
        if nxt.start[0] == prev.end[0]:
            out.append(("gap", nxt.start[1] - prev.end[1]))
        else:
            out.append(("break", nxt.start[0] - prev.end[0] - 1, nxt.start[1]))
    return out


def _find_conflict(label, instances):
    base = _boundaries(instances[0])
    for ob in instances[1:]:
        bs = _boundaries(ob)
        for i, (a, b) in enumerate(zip(base, bs)):
            if a == b:
                continue
            if a[0] != b[0]:
                dim = "line-structure"
            elif a[0] == "gap":
                dim = "gap"
            elif a[1] != b[1]:
                dim = "line-structure"      # blank-line counts disagree
            else:
                dim = "indent"
            return InferenceConflict(label, dim, (
                (instances[0].instance, _describe(a)), (ob.instance, _describe(b))))
    return None


def _describe(boundary):
    if boundary[0] == "gap":
        return "gap %d" % boundary[1]
    return "break, %d blank line(s), indent %d" % (boundary[1], boundary[2])


def _leaf(comp):
    return boxes.Text(comp.text) if comp.kind == "lit" else boxes.Ref(comp.ref)


def _hchain(comps, gaps):
    """Smallest H structure for one line: flat when gaps agree, else a
    right-nested chain preserving exact per-gap spacing."""
    if len(comps) == 1:
        return _leaf(comps[0])
    if len(set(gaps)) == 1:
        return boxes.H(gaps[0], tuple(_leaf(c) for c in comps))
    return boxes.H(gaps[0], (_leaf(comps[0]), _hchain(comps[1:], gaps[1:])))


def _build_box(ob):
    comps = list(ob.components)
    if not comps:
        return boxes.Text("")
    bounds = _boundaries(ob)

    # split into same-line segments
    segments, current, gaps = [], [comps[0]], []
    seg_blanks, seg_indents = [], []
    for comp, boundary in zip(comps[1:], bounds):
        if boundary[0] == "gap":
            current.append(comp)
            gaps.append(boundary[1])
        else:
            segments.append((current, gaps))
            seg_blanks.append(boundary[1])          # blank lines before next segment
            seg_indents.append(boundary[2])
            current, gaps = [comp], []
    segments.append((current, gaps))

    seg_boxes = [_hchain(cs, gs) for cs, gs in segments]
    if len(segments) == 1:
        return seg_boxes[0]

    def wrapped(is_base):
        out = [seg_boxes[0]]
        for box, indent in zip(seg_boxes[1:], seg_indents):
            out.append(boxes.I(indent - is_base, box) if indent > is_base else box)
        return out

    if len(set(seg_blanks)) == 1:
        is_v = min(seg_indents)
        return boxes.V(seg_blanks[0], is_v, tuple(wrapped(is_v)))
    # blank-line counts differ between boundaries: right-nested V chain at indent 0
    return _vchain(wrapped(0), seg_blanks)


def _vchain(children, blanks):
    if len(children) == 2:
        return boxes.V(blanks[0], 0, tuple(children))
    return boxes.V(blanks[0], 0, (children[0], _vchain(children[1:], blanks[1:])))


def uncovered_labels(grammar, observations):
    """Productions the example corpus never exercised."""
    seen = {ob.label for ob in observations}
    return sorted(p.label for p in grammar.productions if p.label not in seen)
