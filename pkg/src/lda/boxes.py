"""Box layout terms: the formatting sublanguage.

A box is one of:
  Text("s")          literal text, no newlines
  Ref(i)             the i-th right-hand-side component of the production
  H(hs, children)    children left to right, hs spaces between them
  V(vs, is_, children)  children stacked, vs blank lines between, children
                        after the first shifted is_ columns right
  I(is_, child)      child shifted is_ >= 1 columns right

Concrete syntax (one rule per line inside a formatting facet):

  Assign = H hs=1 [$0 ":=" $2 ";"]
  Cond = V vs=0 is=0 [H hs=1 ["if" $1 "then"] I is=2 [$3] "fi"]
"""

from dataclasses import dataclass

from .errors import ParseError


@dataclass(frozen=True)
class Text:
    text: str


@dataclass(frozen=True)
class Ref:
    index: int


@dataclass(frozen=True)
class H:
    hs: int
    children: tuple


@dataclass(frozen=True)
class V:
    vs: int
    is_: int
    children: tuple


@dataclass(frozen=True)
class I:
    is_: int
    child: object


def box_size(box):
    """Node count; the cost measure used by inference and minimality checks."""
    match box:
        case Text(_) | Ref(_):
            return 1
        case H(_, children) | V(_, _, children):
            return 1 + sum(box_size(c) for c in children)
        case I(_, child):
            return 1 + box_size(child)
    raise TypeError("not a box: %r" % (box,))


def box_refs(box):
    """All Ref indices in left-to-right order."""
    match box:
        case Ref(i):
            return [i]
        case Text(_):
            return []
        case H(_, children) | V(_, _, children):
            return [i for c in children for i in box_refs(c)]
        case I(_, child):
            return box_refs(child)
    raise TypeError("not a box: %r" % (box,))


def box_texts(box):
    """All Text leaves in left-to-right order."""
    match box:
        case Text(t):
            return [t]
        case Ref(_):
            return []
        case H(_, children) | V(_, _, children):
            return [t for c in children for t in box_texts(c)]
        case I(_, child):
            return box_texts(child)
    raise TypeError("not a box: %r" % (box,))


def check_box(box):
    """Structural invariants: no newlines in Text, child counts, indent bounds."""
    match box:
        case Text(t):
            if "\n" in t:
                raise ValueError("Text contains a newline: %r" % t)
        case Ref(i):
            if i < 0:
                raise ValueError("Ref index must be >= 0")
        case H(hs, children):
            if hs < 0:
                raise ValueError("H hs must be >= 0")
            if not children:
                raise ValueError("H needs at least one child")
            for c in children:
                check_box(c)
        case V(vs, is_, children):
            if vs < 0 or is_ < 0:
                raise ValueError("V vs/is must be >= 0")
            if not children:
                raise ValueError("V needs at least one child")
            for c in children:
                check_box(c)
        case I(is_, child):
            if is_ < 1:
                raise ValueError("I is must be >= 1")
            check_box(child)
        case _:
            raise TypeError("not a box: %r" % (box,))
    return box


# --- concrete syntax -------------------------------------------------------

def _tokenize(text, line_no):
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t":
            i += 1
            continue
        col = i + 1
        if c in "[]":
            toks.append((c, c, col))
            i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string literal", line=line_no, column=col,
                                 expected=['"'])
            toks.append(("str", text[i + 1:j], col))
            i = j + 1
        elif c == "$":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError("expected a component index after $", line=line_no, column=col,
                                 expected=["digit"])
            toks.append(("ref", int(text[i + 1:j]), col))
            i = j
        elif c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if j < n and text[j] == "=":
                k = j + 1
                m = k
                while m < n and text[m].isdigit():
                    m += 1
                if m == k:
                    raise ParseError("expected a number after %s=" % word, line=line_no,
                                     column=col, expected=["digit"])
                toks.append(("opt", (word, int(text[k:m])), col))
                i = m
            else:
                toks.append(("word", word, col))
                i = j
        else:
            raise ParseError("unexpected character %r" % c, line=line_no, column=col,
                             expected=["$", '"', "H", "V", "I", "["])
    return toks


class _BoxParser:
    def __init__(self, toks, line_no, end_col=1):
        self.toks = toks
        self.pos = 0
        self.line_no = line_no
        self.end_col = end_col

    def _peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, 0)

    def _take(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def _fail(self, expected):
        kind, val, col = self._peek()
        found = "end of line" if kind is None else repr(val)
        raise ParseError("unexpected %s" % found, line=self.line_no,
                         column=col if kind is not None else self.end_col,
                         expected=expected)

    def _options(self, wanted):
        got = {}
        for name in wanted:
            kind, val, col = self._peek()
            if kind != "opt" or val[0] != name:
                self._fail(["%s=<n>" % name])
            got[name] = val[1]
            self.pos += 1
        return got

    def _children(self):
        kind, _, _ = self._take()
        if kind != "[":
            self._fail(["["])
        out = []
        while self._peek()[0] not in ("]", None):
            out.append(self.expr())
        kind, _, _ = self._take()
        if kind != "]":
            self._fail(["]"])
        if not out:
            raise ParseError("box needs at least one child", line=self.line_no,
                             column=1, expected=["box"])
        return tuple(out)

    def expr(self):
        kind, val, col = self._peek()
        if kind == "str":
            self.pos += 1
            return Text(val)
        if kind == "ref":
            self.pos += 1
            return Ref(val)
        if kind == "word":
            self.pos += 1
            if val == "H":
                opts = self._options(["hs"])
                return H(opts["hs"], self._children())
            if val == "V":
                opts = self._options(["vs", "is"])
                return V(opts["vs"], opts["is"], self._children())
            if val == "I":
                opts = self._options(["is"])
                children = self._children()
                if len(children) != 1:
                    raise ParseError("I takes exactly one child", line=self.line_no,
                                     column=col, expected=["one child"])
                return I(opts["is"], children[0])
            raise ParseError("unknown box operator %r" % val, line=self.line_no,
                             column=col, expected=["H", "V", "I"])
        self._fail(["$<i>", '"text"', "H", "V", "I"])


def parse_box(text, line_no=1):
    """Parse one box expression; raises ParseError with position on bad input."""
    parser = _BoxParser(_tokenize(text, line_no), line_no, end_col=len(text) + 1)
    box = parser.expr()
    kind, val, col = parser._peek()
    if kind is not None:
        raise ParseError("trailing input %r after box" % val, line=line_no, column=col,
                         expected=["end of line"])
    return check_box(box)


def print_box(box):
    """Canonical text form; parse_box(print_box(b)) == b."""
    match box:
        case Text(t):
            return '"%s"' % t
        case Ref(i):
            return "$%d" % i
        case H(hs, children):
            return "H hs=%d [%s]" % (hs, " ".join(print_box(c) for c in children))
        case V(vs, is_, children):
            return "V vs=%d is=%d [%s]" % (vs, is_, " ".join(print_box(c) for c in children))
        case I(is_, child):
            return "I is=%d [%s]" % (is_, print_box(child))
    raise TypeError("not a box: %r" % (box,))
