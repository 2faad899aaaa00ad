"""Independent oracles the tests check the real implementations against.

Each oracle deliberately uses a different algorithm than the code under test:
derivation counting is top-down recursive (the parser is Earley), the closure
oracle is a fixpoint scan (the session uses BFS), the reference renderer
paints glyphs on an absolute-coordinate grid (the renderer concatenates line
blocks), the Calc interpreter and typer are hand-written recursions on the
fixed Calc shapes, and box inference is checked against exhaustive search.
"""

import itertools

from lda import boxes, facets


# --- brute-force derivation counting (parser oracle) -------------------------

def count_derivations(grammar, classes, cap=2):
    """Number of parse trees (capped) for a sequence of token class names."""
    by_lhs = {}
    for p in grammar.productions:
        by_lhs.setdefault(p.lhs, []).append(p)
    n = len(classes)
    memo, active = {}, set()

    def sym_count(sym, i, j):
        match sym:
            case facets.NtRef(name):
                return nt_count(name, i, j)
            case facets.TokRef(class_name):
                return 1 if j == i + 1 and classes[i] == class_name else 0
            case facets.Lit(spelling):
                return 1 if j == i + 1 and classes[i] == spelling else 0

    def nt_count(nt, i, j):
        key = (nt, i, j)
        if key in memo:
            return memo[key]
        if key in active:
            return 0
        active.add(key)
        total = 0
        for p in by_lhs.get(nt, []):
            total += ways(p.rhs, 0, i, j)
            if total >= cap:
                break
        active.discard(key)
        memo[key] = min(total, cap)
        return memo[key]

    def ways(rhs, k, i, j):
        if k == len(rhs):
            return 1 if i == j else 0
        total = 0
        for m in range(i, j + 1):
            left = sym_count(rhs[k], i, m)
            if left:
                total += left * ways(rhs, k + 1, m, j)
                if total >= cap:
                    return cap
        return total

    return nt_count(grammar.start, 0, n)


def all_strings(alphabet, max_len):
    for length in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=length)


# --- requires-closure oracle (session oracle) ----------------------------------

def closure_fixpoint(kb, selected):
    """Least superset of selected closed under requires, by repeated scanning."""
    requires = kb.requires()
    closure = set(selected)
    changed = True
    while changed:
        changed = False
        for cid in list(closure):
            for req in requires.get(cid, ()):
                if req not in closure:
                    closure.add(req)
                    changed = True
    return closure


def conflict_scan(kb, selected):
    """Every conflicts pair fully inside selected, as sorted tuples."""
    out = set()
    rel = kb.relation("conflicts")
    if rel is None:
        return out
    for a, b in rel.pairs:
        if a in selected and b in selected:
            out.add(tuple(sorted((a, b))))
    return out


# --- absolute-coordinate reference renderer (render oracle) ----------------------

def paint_box(box, row=0, col=0, grid=None):
    """Paint Text glyphs on a sparse grid; returns (grid, end position)."""
    if grid is None:
        grid = {}
    match box:
        case boxes.Text(t):
            for k, ch in enumerate(t):
                grid[(row, col + k)] = ch
            return grid, (row, col + len(t))
        case boxes.H(hs, children):
            r, c = row, col
            first = True
            for child in children:
                if not first:
                    c += hs
                grid, (r, c) = paint_box(child, r, c, grid)
                first = False
            return grid, (r, c)
        case boxes.V(vs, is_, children):
            r, end = row, (row, col)
            for k, child in enumerate(children):
                c = col if k == 0 else col + is_
                grid, end = paint_box(child, r, c, grid)
                r = end[0] + 1 + vs
            return grid, end
        case boxes.I(is_, child):
            return paint_box(child, row, col + is_, grid)
    raise TypeError("not a box: %r" % (box,))


def grid_render(box):
    grid, end = paint_box(box)
    height = max([end[0]] + [r for r, _ in grid]) + 1
    lines = []
    for r in range(height):
        cols = [c for (rr, c) in grid if rr == r]
        width = max(cols) + 1 if cols else 0
        lines.append("".join(grid.get((r, c), " ") for c in range(width)).rstrip())
    return "\n".join(lines) + "\n"


# --- direct Calc interpretation and typing (toolgen oracle) -----------------------

def calc_interpret(term, env=None, out=None):
    """Hand-written interpreter for the Calc/CalcCond shapes; returns (env, out)."""
    env = {} if env is None else env
    out = [] if out is None else out

    def expr(t):
        match t.label:
            case "Num":
                return int(t.children[0].payload)
            case "Var":
                return env[t.children[0].payload]
            case "Lift" | "Paren":
                return expr(t.children[0])
            case "Add":
                return expr(t.children[0]) + expr(t.children[1])
            case "Sub":
                return expr(t.children[0]) - expr(t.children[1])
            case "Mul":
                return expr(t.children[0]) * expr(t.children[1])
            case "Lt":
                return expr(t.children[0]) < expr(t.children[1])
            case "Str":
                return t.children[0].payload[1:-1]
        raise AssertionError("oracle: unknown expression %s" % t.label)

    def stmt(t):
        match t.label:
            case "Program":
                stmt(t.children[0])
            case "Seq":
                stmt(t.children[0])
                stmt(t.children[1])
            case "Assign":
                env[t.children[0].payload] = expr(t.children[1])
            case "Print":
                out.append(expr(t.children[0]))
            case "Cond":
                if expr(t.children[0]):
                    stmt(t.children[1])
            case _:
                raise AssertionError("oracle: unknown statement %s" % t.label)

    stmt(term)
    return env, out


def calc_expr_type(term, env=None):
    """Bottom-up type computation for Calc expression shapes; '?' on error."""
    env = env or {}
    match term.label:
        case "Num":
            return "int"
        case "Str":
            return "string"
        case "Var":
            return env.get(term.children[0].payload, "?")
        case "Lift" | "Paren":
            return calc_expr_type(term.children[0], env)
        case "Add" | "Sub" | "Mul" | "Lt":
            left = calc_expr_type(term.children[0], env)
            right = calc_expr_type(term.children[1], env)
            if left == "int" and right == "int":
                return "bool" if term.label == "Lt" else "int"
            return "?"
    raise AssertionError("oracle: unknown expression %s" % term.label)


# --- exhaustive minimal-box search (ppbe oracle) ------------------------------------

def minimal_boxes(instances, max_nodes=9):
    """All minimum-size boxes reproducing every instance exactly.

    An instance is a LayoutObservation; candidates place each component once,
    in order, using only hs/vs/is values observed somewhere in the instances.
    Returns (cost, [boxes]) or (None, []) when nothing fits the budget.
    """
    comps = instances[0].components
    n = len(comps)
    gaps, blanks, indents = set(), set(), set()
    for ob in instances:
        for prev, nxt in zip(ob.components, ob.components[1:]):
            if nxt.start[0] == prev.end[0]:
                gaps.add(nxt.start[1] - prev.end[1])
            else:
                blanks.add(nxt.start[0] - prev.end[0] - 1)
                indents.add(nxt.start[1])
    indents.add(0)
    hs_pool, vs_pool = sorted(gaps), sorted(blanks)
    isv_pool = sorted(indents)
    isi_pool = sorted({v - w for v in indents for w in indents if v - w >= 1})

    def leaf(i):
        c = comps[i]
        return boxes.Text(c.text) if c.kind == "lit" else boxes.Ref(c.ref)

    memo = {}

    def gen(lo, hi):
        key = (lo, hi)
        if key in memo:
            return memo[key]
        out = []
        if hi - lo == 1:
            out.append((leaf(lo), 1))
        for parts in _compositions(lo, hi):
            if len(parts) < 2:
                continue
            for combo in itertools.product(*(gen(a, b) for a, b in parts)):
                size = 1 + sum(c for _, c in combo)
                if size > max_nodes:
                    continue
                children = tuple(b for b, _ in combo)
                for hs in hs_pool:
                    out.append((boxes.H(hs, children), size))
                for vs in vs_pool:
                    for is_ in isv_pool:
                        out.append((boxes.V(vs, is_, children), size))
        for b, c in list(out):
            if c + 1 <= max_nodes and not isinstance(b, boxes.I):
                for is_ in isi_pool:
                    out.append((boxes.I(is_, b), c + 1))
        memo[key] = out
        return out

    best_cost, best = None, []
    for candidate, cost in sorted(gen(0, n), key=lambda bc: bc[1]):
        if best_cost is not None and cost > best_cost:
            break
        if all(_faithful(candidate, ob) for ob in instances):
            best_cost = cost
            best.append(candidate)
    return best_cost, best


def _compositions(lo, hi):
    """All splits of [lo, hi) into consecutive nonempty parts."""
    if lo == hi:
        yield []
        return
    for mid in range(lo + 1, hi + 1):
        for rest in _compositions(mid, hi):
            yield [(lo, mid)] + rest


def _faithful(candidate, ob):
    """Does laying out the candidate place every component exactly where the
    observation saw it?  Components are rigid blocks sized by their spans."""
    placements = []

    def walk(box, row, col):
        match box:
            case boxes.Text(t):
                placements.append((row, col))
                return row, col + len(t)
            case boxes.Ref(_):
                comp = ob.components[len(placements)]
                placements.append((row, col))
                return (row + comp.end[0] - comp.start[0],
                        col + comp.end[1] - comp.start[1])
            case boxes.H(hs, children):
                r, c = row, col
                for k, child in enumerate(children):
                    r, c = walk(child, r, c + (hs if k else 0))
                return r, c
            case boxes.V(vs, is_, children):
                r, end = row, (row, col)
                for k, child in enumerate(children):
                    end = walk(child, r, col if k == 0 else col + is_)
                    r = end[0] + 1 + vs
                return end
            case boxes.I(is_, child):
                return walk(child, row, col + is_)

    try:
        walk(candidate, 0, 0)
    except IndexError:
        return False
    if len(placements) != len(ob.components):
        return False
    return all(tuple(got) == comp.start
               for got, comp in zip(placements, ob.components))


# --- random term generation (round-trip suite) ----------------------------------------

def min_heights(grammar):
    heights = {nt: None for nt in grammar.nonterminals}
    changed = True
    while changed:
        changed = False
        for p in grammar.productions:
            h = 0
            ok = True
            for s in p.rhs:
                if isinstance(s, facets.NtRef):
                    if heights[s.name] is None:
                        ok = False
                        break
                    h = max(h, heights[s.name])
            if ok and (heights[p.lhs] is None or h + 1 < heights[p.lhs]):
                heights[p.lhs] = h + 1
                changed = True
    return heights


def random_term(grammar, rng, depth=6, nt=None, ident_pool=None):
    """A random term of production-node depth <= depth, as the parser builds them."""
    from lda.terms import Term
    heights = min_heights(grammar)
    keywords = grammar.keywords()
    by_lhs = {}
    for p in grammar.productions:
        by_lhs.setdefault(p.lhs, []).append(p)

    def prod_height(p):
        return 1 + max((heights[s.name] for s in p.rhs
                        if isinstance(s, facets.NtRef)), default=0)

    def gen_leaf(class_name):
        if class_name == "number":
            return Term("number", payload=str(rng.randrange(0, 1000)))
        if class_name == "string":
            body = "".join(rng.choice("abcdefgh") for _ in range(rng.randrange(0, 5)))
            return Term("string", payload='"%s"' % body)
        if ident_pool:
            return Term("ident", payload=rng.choice(ident_pool))
        while True:
            name = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz")
                           for _ in range(rng.randrange(1, 6)))
            if name not in keywords:
                return Term("ident", payload=name)

    def gen(sym_nt, budget):
        options = [p for p in by_lhs[sym_nt] if prod_height(p) <= budget]
        if not options:
            options = sorted(by_lhs[sym_nt], key=prod_height)[:1]
        p = rng.choice(options)
        children = []
        for s in p.rhs:
            match s:
                case facets.NtRef(name):
                    children.append(gen(name, budget - 1))
                case facets.TokRef(class_name):
                    children.append(gen_leaf(class_name))
        return Term(p.label, tuple(children))

    start = nt or grammar.start
    return gen(start, max(depth, heights[start]))


def random_select_log(kb, rng, max_len=12):
    """A random select/accept log over the KB, always sequentially numbered."""
    from lda.session import Decision
    ids = sorted(kb.concepts)
    log = []
    for seq in range(1, rng.randrange(1, max_len + 1) + 1):
        log.append(Decision(seq, "select", rng.choice(ids)))
    return log
