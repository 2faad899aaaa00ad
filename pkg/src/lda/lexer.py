"""Description-driven scanner.

Longest-match, leftmost scan; keywords win over identifiers at equal length.
Literal token classes are named by their spelling, so a token's class name is
what the parser matches against.  Positions are 1-based line:column with
exclusive end columns.
"""

import re
from dataclasses import dataclass

from .errors import LexError

EOF = "<eof>"

_NUMBER_RE = re.compile(r"[0-9]+")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_STRING_RE = re.compile(r'"[^"\n]*"')


@dataclass(frozen=True)
class Token:
    class_name: str
    spelling: str
    line: int
    col: int
    end_line: int
    end_col: int

    @property
    def span(self):
        return ((self.line, self.col), (self.end_line, self.end_col))


def tokenize(desc, text):
    """Scan a program into tokens ending with an EOF token."""
    grammar = desc.grammar if hasattr(desc, "grammar") else desc
    literals = sorted(grammar.literal_spellings(), key=len, reverse=True)
    keywords = grammar.keywords()
    value_kinds = grammar.value_token_kinds()

    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c in " \t\r":
            col += 1
            i += 1
            continue
        best = None       # (length, class_name, spelling)
        if "number" in value_kinds:
            m = _NUMBER_RE.match(text, i)
            if m:
                best = _longer(best, (len(m.group()), "number", m.group()))
        if "string" in value_kinds:
            m = _STRING_RE.match(text, i)
            if m:
                best = _longer(best, (len(m.group()), "string", m.group()))
        ident = _IDENT_RE.match(text, i)
        for spelling in literals:
            if text.startswith(spelling, i):
                # a keyword must not swallow the head of a longer identifier
                if spelling in keywords and ident and len(ident.group()) > len(spelling):
                    continue
                best = _longer(best, (len(spelling), spelling, spelling))
                break
        if ident and "identifier" in value_kinds:
            best = _longer(best, (len(ident.group()), "ident", ident.group()))
        if best is None:
            raise LexError(line, col, c)
        length, class_name, spelling = best
        tokens.append(Token(class_name, spelling, line, col, line, col + length))
        i += length
        col += length
    tokens.append(Token(EOF, "", line, col, line, col))
    return tokens


def _longer(best, candidate):
    """Longest match wins; on a tie the earlier candidate stands, and literals
    are offered before the identifier class, so keywords beat identifiers."""
    if best is None or candidate[0] > best[0]:
        return candidate
    return best
