"""Abstract-syntax terms produced by the generated parser.

A Term is labeled by a production's constructor; its children are the
value-bearing right-hand-side components in order, where ident/number/string
tokens become leaf terms (label = token class, payload = spelling) and fixed
literals are dropped (they are re-derivable from the production).
"""

from dataclasses import dataclass

from . import facets

LEAF_LABELS = ("ident", "number", "string")


@dataclass(frozen=True)
class Term:
    label: str
    children: tuple = ()
    payload: str = None
    span: tuple = None          # ((line, col), (line, col)), end exclusive
    tok_span: tuple = None      # (first token index, past-last token index)

    @property
    def is_leaf_token(self):
        return self.payload is not None

    def to_json(self):
        out = {"label": self.label}
        if self.payload is not None:
            out["payload"] = self.payload
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
        if self.span is not None:
            out["span"] = {"start": list(self.span[0]), "end": list(self.span[1])}
        return out


def term_from_json(obj):
    return Term(label=obj["label"],
                children=tuple(term_from_json(c) for c in obj.get("children", [])),
                payload=obj.get("payload"),
                span=None if "span" not in obj else
                     (tuple(obj["span"]["start"]), tuple(obj["span"]["end"])))


def equal_mod_spans(a, b):
    return (a.label == b.label and a.payload == b.payload
            and len(a.children) == len(b.children)
            and all(equal_mod_spans(x, y) for x, y in zip(a.children, b.children)))


def component(production, term, index):
    """The term's component at an rhs index: a literal spelling or a child term."""
    symbol = production.rhs[index]
    if isinstance(symbol, facets.Lit):
        return symbol.spelling
    return term.children[production.value_positions().index(index)]


def check_arity(production, term):
    return len(term.children) == len(production.value_positions())
