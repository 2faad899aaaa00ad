"""Box rendering and term formatting.

Geometry: H places each child at the column where the previous child's last
line ended, plus hs; multi-line children keep their internal relative layout.
V stacks children with vs blank lines between them; children after the first
start is columns right of the V origin.  I shifts its child right.  Output
has no trailing spaces and ends with exactly one newline.
"""

from . import boxes, facets
from .errors import MissingRule


def render(box):
    """Lay out a fully substituted box (Text leaves only) into text."""
    lines, _ = _layout(box)
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _layout(box):
    """Returns (lines, end column of the last line); no trailing strip yet."""
    match box:
        case boxes.Text(t):
            return [t], len(t)
        case boxes.H(hs, children):
            lines, end = _layout(children[0])
            for child in children[1:]:
                base = end + hs
                clines, cend = _layout(child)
                lines[-1] = lines[-1].ljust(base) + clines[0]
                lines.extend(" " * base + l for l in clines[1:])
                end = base + cend
            return lines, end
        case boxes.V(vs, is_, children):
            lines, end = [], 0
            for k, child in enumerate(children):
                clines, cend = _layout(child)
                indent = 0 if k == 0 else is_
                if k > 0:
                    lines.extend([""] * vs)
                lines.extend(" " * indent + l for l in clines)
                end = indent + cend
            return lines, end
        case boxes.I(is_, child):
            clines, cend = _layout(child)
            return [" " * is_ + l for l in clines], is_ + cend
        case boxes.Ref(i):
            raise ValueError("cannot render an unsubstituted $%d" % i)
    raise TypeError("not a box: %r" % (box,))


def format_term(desc, term):
    """Instantiate each node's box template bottom-up, then render.

    The output reparses to a term equal to the input modulo spans.
    """
    return render(term_box(desc, term))


def term_box(desc, term):
    if term.is_leaf_token:
        return boxes.Text(term.payload)
    production = desc.grammar.production(term.label)
    template = desc.formatting.get(term.label)
    if template is None or production is None:
        raise MissingRule(term.label)
    return _substitute(template, production, term, desc)


def _substitute(box, production, term, desc):
    match box:
        case boxes.Text(_):
            return box
        case boxes.Ref(i):
            symbol = production.rhs[i]
            if isinstance(symbol, facets.Lit):
                return boxes.Text(symbol.spelling)
            child = term.children[production.value_positions().index(i)]
            return term_box(desc, child)
        case boxes.H(hs, children):
            return boxes.H(hs, tuple(_substitute(c, production, term, desc)
                                     for c in children))
        case boxes.V(vs, is_, children):
            return boxes.V(vs, is_, tuple(_substitute(c, production, term, desc)
                                          for c in children))
        case boxes.I(is_, child):
            return boxes.I(is_, _substitute(child, production, term, desc))
    raise TypeError("not a box: %r" % (box,))
