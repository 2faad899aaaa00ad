"""Earley parser over a description's grammar.

Full context-free coverage including left recursion and empty productions
(empty completions are replayed at prediction time, the standard fix for
nullable symbols).  Ambiguity is an error carrying two distinct trees as
evidence, never a forest hand-off: generated DSL tools must be predictable
for their end users.
"""

from collections import deque

from . import facets
from .errors import AmbiguousParse, ProgramSyntaxError
from .lexer import EOF, tokenize
from .terms import Term, equal_mod_spans


def parse_program(desc, text):
    """Parse text from the grammar's start symbol into the unique Term."""
    tokens = tokenize(desc, text)
    return parse_tokens(desc.grammar, tokens)


def parse_tokens(grammar, tokens):
    if tokens and tokens[-1].class_name == EOF:
        tokens = tokens[:-1]
    chart = _recognize(grammar, tokens)
    trees = _Extractor(grammar, tokens, chart).trees(grammar.start, 0, len(tokens), 2)
    if len(trees) > 1:
        raise AmbiguousParse(trees[:2])
    if not trees:
        raise _syntax_error(grammar, tokens, chart)
    return trees[0]


def recognize_tokens(grammar, tokens):
    """True iff the token sequence is in the grammar's language."""
    if tokens and tokens[-1].class_name == EOF:
        tokens = tokens[:-1]
    chart = _recognize(grammar, tokens)
    return bool(chart.complete.get((grammar.start, 0, len(tokens))))


def _matches(symbol, token):
    match symbol:
        case facets.Lit(spelling):
            return token.class_name == spelling
        case facets.TokRef(class_name):
            return token.class_name == class_name
    return False


class _Chart:
    def __init__(self, n):
        self.sets = [dict() for _ in range(n + 1)]       # item -> True (ordered)
        self.waiting = [dict() for _ in range(n + 1)]    # nt -> [items]
        self.nullable_done = [set() for _ in range(n + 1)]
        self.complete = {}                               # (lhs, i, j) -> [prod index]


def _recognize(grammar, tokens):
    prods = grammar.productions
    by_lhs = {}
    for pi, p in enumerate(prods):
        by_lhs.setdefault(p.lhs, []).append(pi)
    n = len(tokens)
    chart = _Chart(n)

    def add(i, item):
        if item not in chart.sets[i]:
            chart.sets[i][item] = True
            pi, dot, origin = item
            rhs = prods[pi].rhs
            if dot < len(rhs) and isinstance(rhs[dot], facets.NtRef):
                chart.waiting[i].setdefault(rhs[dot].name, []).append(item)
            return True
        return False

    for pi in by_lhs.get(grammar.start, []):
        add(0, (pi, 0, 0))

    for i in range(n + 1):
        agenda = deque(chart.sets[i])
        while agenda:
            item = agenda.popleft()
            pi, dot, origin = item
            p = prods[pi]
            if dot < len(p.rhs):
                sym = p.rhs[dot]
                if isinstance(sym, facets.NtRef):
                    for qi in by_lhs.get(sym.name, []):
                        if add(i, (qi, 0, i)):
                            agenda.append((qi, 0, i))
                    if sym.name in chart.nullable_done[i]:
                        if add(i, (pi, dot + 1, origin)):
                            agenda.append((pi, dot + 1, origin))
                elif i < n and _matches(sym, tokens[i]):
                    add(i + 1, (pi, dot + 1, origin))
            else:
                key = (p.lhs, origin, i)
                chart.complete.setdefault(key, [])
                if pi not in chart.complete[key]:
                    chart.complete[key].append(pi)
                if origin == i:
                    chart.nullable_done[i].add(p.lhs)
                for parent in chart.waiting[origin].get(p.lhs, []):
                    qpi, qdot, qorigin = parent
                    if add(i, (qpi, qdot + 1, qorigin)):
                        agenda.append((qpi, qdot + 1, qorigin))
    return chart


def _expected_at(grammar, chart, i):
    expected = set()
    for pi, dot, _ in chart.sets[i]:
        rhs = grammar.productions[pi].rhs
        if dot < len(rhs):
            sym = rhs[dot]
            if isinstance(sym, facets.Lit):
                expected.add(sym.spelling)
            elif isinstance(sym, facets.TokRef):
                expected.add(sym.class_name)
    return expected


def _syntax_error(grammar, tokens, chart):
    # report at the last set that still held live items
    far = max((i for i in range(len(chart.sets)) if chart.sets[i]), default=0)
    if far < len(tokens):
        tok = tokens[far]
        line, col = tok.line, tok.col
    elif tokens:
        line, col = tokens[-1].end_line, tokens[-1].end_col
    else:
        line, col = 1, 1
    expected = _expected_at(grammar, chart, far)
    if far == len(tokens) and not expected:
        expected = {"<eof>"}
    return ProgramSyntaxError(line, col, expected)


class _Extractor:
    """Enumerate up to `limit` structurally distinct trees from the chart."""

    def __init__(self, grammar, tokens, chart):
        self.grammar = grammar
        self.tokens = tokens
        self.chart = chart
        self.by_start = {}
        for (lhs, i, j) in chart.complete:
            self.by_start.setdefault((lhs, i), []).append(j)
        self.memo = {}
        self.active = set()

    def trees(self, nt, i, j, limit):
        key = (nt, i, j)
        if key in self.memo:
            return self.memo[key][:limit]
        if key in self.active:      # derivation cycle: cut it off
            return []
        self.active.add(key)
        found = []
        for pi in self.chart.complete.get(key, []):
            p = self.grammar.productions[pi]
            for comps in self._splits(p, 0, i, j, limit):
                t = self._build(p, comps, i, j)
                if not any(_same_tree(t, other) for other in found):
                    found.append(t)
                if len(found) >= limit:
                    break
            if len(found) >= limit:
                break
        self.active.discard(key)
        self.memo[key] = found
        return found

    def _splits(self, p, k, pos, j, limit):
        """All ways to match rhs[k:] against tokens[pos:j]; yields component lists."""
        if k == len(p.rhs):
            if pos == j:
                yield []
            return
        sym = p.rhs[k]
        if isinstance(sym, facets.NtRef):
            for j2 in self.by_start.get((sym.name, pos), []):
                if j2 > j:
                    continue
                subs = self.trees(sym.name, pos, j2, limit)
                for sub in subs:
                    for rest in self._splits(p, k + 1, j2, j, limit):
                        yield [sub] + rest
        else:
            if pos < j and _matches(sym, self.tokens[pos]):
                for rest in self._splits(p, k + 1, pos + 1, j, limit):
                    yield [self.tokens[pos]] + rest

    def _build(self, p, comps, i, j):
        children = []
        pos = i
        for sym, comp in zip(p.rhs, comps):
            match sym:
                case facets.NtRef(_):
                    children.append(comp)
                    pos = comp.tok_span[1]
                case facets.TokRef(class_name):
                    children.append(Term(class_name, payload=comp.spelling,
                                         span=comp.span, tok_span=(pos, pos + 1)))
                    pos += 1
                case facets.Lit(_):
                    pos += 1
        if i < j:
            span = (self.tokens[i].span[0], self.tokens[j - 1].span[1])
        else:
            pos = self.tokens[i].span[0] if i < len(self.tokens) else (1, 1)
            span = (pos, pos)
        return Term(p.label, tuple(children), span=span, tok_span=(i, j))


def _same_tree(a, b):
    return equal_mod_spans(a, b)
