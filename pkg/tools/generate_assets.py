#!/usr/bin/env python3
"""Regenerate the committed data assets: seed KB, decision-log fixtures,
golden description, formatting example corpus, and sample programs.

Everything written here is re-verified by the test suite; run this only when
the seed content itself changes.
"""

import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from lda import (compile_design, decisions_to_json, equal_mod_spans, evaluate,
                 finalize, format_term, load_kb, parse_program, replay,
                 save_description, save_kb, typecheck)
from lda.session import Decision

HEADER = (
    "Seed knowledge base. Concept and attribute names follow the published "
    "inventory of language concepts; the requires/conflicts/advice edges and "
    "all facet content are this project's own curation.")


def template(text, **when):
    if not when:
        return text
    return {"text": text, "when": {k: v for k, v in when.items()}}


def block(description, syntax, formatting, typing, evaluation, holes=(), parameters=None):
    out = {"kind": "building-block", "description": description,
           "facets": {"syntax": syntax, "formatting": formatting, "typing": typing,
                      "evaluation": evaluation, "holes": list(holes)}}
    if parameters:
        out["parameters"] = parameters
    return out


def concept(kind, description):
    return {"kind": kind, "description": description}


def seed_kb_raw():
    arith = ["arith", "arith-cmp"]
    concepts = {
        # --- building blocks -------------------------------------------------
        "program": block(
            "top-level program: a sequence of statements",
            ["Program: Prog -> Stmt"], ["Program = $0"],
            ["Program: |- $0 : unit => unit"], ["Program: eval $0 -> _ => unit"],
            holes=["Stmt"]),
        "statement": block(
            "statements as a syntactic category, with sequencing",
            ["Seq: Prog -> Prog Stmt"], ["Seq = V vs=0 is=0 [$0 $1]"],
            ["Seq: |- $0 : unit, |- $1 : unit => unit"],
            ["Seq: eval $0 -> _, eval $1 -> _ => unit"],
            holes=["Stmt"]),
        "expression": block(
            "expressions as a syntactic category, with grouping parentheses",
            ["Lift: Expr -> Prim", 'Paren: Prim -> "(" Expr ")"'],
            ["Lift = $0", 'Paren = H hs=1 ["(" $1 ")"]'],
            ["Lift: |- $0 : 'a => 'a", "Paren: |- $1 : 'a => 'a"],
            ["Lift: eval $0 -> v => v", "Paren: eval $1 -> v => v"]),
        "assignment": block(
            "assign the value of an expression to a variable",
            ['Assign: Stmt -> ident ":=" Expr ";"'],
            ['Assign = H hs=1 [$0 ":=" $2 ";"]'],
            ["Assign: |- $2 : 'a, lookup $0 : 'a => unit"],
            ["Assign: eval $2 -> v, store $0 <- v => unit"],
            holes=["Expr"]),
        "print": block(
            "output statement: emit the value of an expression",
            ['Print: Stmt -> "print" Expr ";"'],
            ['Print = H hs=1 ["print" $1 ";"]'],
            ["Print: |- $1 : 'a => unit"],
            ["Print: eval $1 -> v, emit v => unit"],
            holes=["Expr"]),
        "number-literal": block(
            "integer literal operand",
            ["Num: Prim -> number"], ["Num = $0"],
            ["Num: => int"], ["Num: eval $0 -> v => v"]),
        "variable-ref": block(
            "read a variable as an expression operand",
            ["Var: Prim -> ident"], ["Var = $0"],
            ["Var: lookup $0 : 'a => 'a"], ["Var: load $0 -> v => v"]),
        "string-literal": block(
            "string literal operand",
            ["Str: Prim -> string"], ["Str = $0"],
            ["Str: => string"], ["Str: eval $0 -> v => v"]),
        "binary-op": block(
            "infix binary operators over expressions",
            [template('Add: Expr -> Expr "+" Prim'),
             template('Sub: Expr -> Expr "-" Prim', ops=arith),
             template('Mul: Expr -> Expr "*" Prim', ops=arith),
             template('Lt: Expr -> Expr "<" Prim', ops=["arith-cmp"])],
            [template('Add = H hs=1 [$0 "+" $2]'),
             template('Sub = H hs=1 [$0 "-" $2]', ops=arith),
             template('Mul = H hs=1 [$0 "*" $2]', ops=arith),
             template('Lt = H hs=1 [$0 "<" $2]', ops=["arith-cmp"])],
            [template("Add: |- $0 : int, |- $2 : int => int"),
             template("Sub: |- $0 : int, |- $2 : int => int", ops=arith),
             template("Mul: |- $0 : int, |- $2 : int => int", ops=arith),
             template("Lt: |- $0 : int, |- $2 : int => bool", ops=["arith-cmp"])],
            [template("Add: eval $0 -> a, eval $2 -> b, add(a, b) -> c => c"),
             template("Sub: eval $0 -> a, eval $2 -> b, sub(a, b) -> c => c", ops=arith),
             template("Mul: eval $0 -> a, eval $2 -> b, mul(a, b) -> c => c", ops=arith),
             template("Lt: eval $0 -> a, eval $2 -> b, lt(a, b) -> c => c",
                      ops=["arith-cmp"])],
            holes=["Prim"],
            parameters=[{"name": "ops", "values": ["plus", "arith", "arith-cmp"],
                         "default": "plus"}]),
        "conditional": block(
            "one-armed conditional statement guarding a block",
            ['Cond: Stmt -> "if" Expr "then" Prog "fi"'],
            ['Cond = V vs=0 is=0 [H hs=1 ["if" $1 "then"] I is=2 [$3] "fi"]'],
            ["Cond: |- $1 : bool, |- $3 : unit => unit"],
            ["Cond: eval $1 -> c, if c then [eval $3 -> _] else [] => unit"],
            holes=["Expr", "Prog"]),
        "loop": block(
            "while loop re-evaluating its guard before each pass",
            ['While: Stmt -> "while" Expr "do" Prog "od"'],
            ['While = V vs=0 is=0 [H hs=1 ["while" $1 "do"] I is=2 [$3] "od"]'],
            ["While: |- $1 : bool, |- $3 : unit => unit"],
            ["While: eval $1 -> c, if c then [eval $3 -> _, eval $self -> _] else [] => unit"],
            holes=["Expr", "Prog"]),
        "goto": block(
            "unstructured jump; recognized syntactically, no runtime transfer here",
            ['Goto: Stmt -> "goto" ident ";"'],
            ['Goto = H hs=1 ["goto" $1 ";"]'],
            ["Goto: => unit"], ["Goto: => unit"]),
        # --- attributes -------------------------------------------------------
        "strong-typing": concept("attribute", "every construct is typechecked before running"),
        "untyped": concept("attribute", "no static types; the typechecker is omitted"),
        "overloading": concept("attribute", "one name, several type-distinguished meanings"),
        "polymorphism": concept("attribute", "constructs usable at many types"),
        "static-scope": concept("attribute", "names resolve in the enclosing text"),
        "dynamic-scope": concept("attribute", "names resolve along the call history"),
        "scope": concept("attribute", "region of a program where a name is visible"),
        "side-effect": concept("attribute", "evaluation may change the store"),
        "type": concept("attribute", "classification of values and operands"),
        "subtype": concept("attribute", "inclusion between types"),
        "inheritance": concept("attribute", "deriving a definition from another"),
        "block": concept("attribute", "statements group into a nested region"),
        # --- runtime ----------------------------------------------------------
        "state": concept("runtime", "the mutable store a program threads"),
        "heap": concept("runtime", "dynamically allocated storage"),
        "call-stack": concept("runtime", "activation records of active calls"),
        "stack-frame": concept("runtime", "one activation record"),
        "value": concept("runtime", "result of evaluating an expression"),
        "operand": concept("runtime", "value an operator consumes"),
        "input": concept("runtime", "data a program reads while running"),
        "output": concept("runtime", "data a program emits while running"),
        "control-flow": concept("runtime", "order in which statements run"),
        "data-flow": concept("runtime", "how values travel between parts"),
        "concurrency": concept("runtime", "several activities in progress at once"),
        "thread": concept("runtime", "one sequential activity"),
        "exception": concept("runtime", "abnormal completion of an evaluation"),
        # --- processing ---------------------------------------------------------
        "typechecking": concept("processing", "static validation of construct types"),
        "interpretation": concept("processing", "direct execution of terms"),
        "translation": concept("processing", "mapping programs to another language"),
        "transformation": concept("processing", "rewriting programs within one language"),
        "abstract-interpretation": concept("processing", "running on abstract values"),
        "data-flow-analysis": concept("processing", "static reasoning about value travel"),
        "control-flow-analysis": concept("processing", "static reasoning about run order"),
        "syntax": concept("processing", "the written shape of programs"),
    }
    relations = [
        {"name": "requires", "arity": 2, "pairs": [
            ["program", "statement"],
            ["assignment", "expression"], ["assignment", "variable-ref"],
            ["print", "expression"], ["print", "output"],
            ["binary-op", "expression"],
            ["conditional", "expression"],
            ["loop", "expression"],
            ["string-literal", "expression"],
            ["strong-typing", "typechecking"],
            ["static-scope", "scope"], ["dynamic-scope", "scope"],
            ["call-stack", "stack-frame"], ["stack-frame", "state"], ["state", "heap"],
            ["thread", "concurrency"],
            ["inheritance", "subtype"], ["subtype", "type"],
        ]},
        {"name": "conflicts", "arity": 2, "pairs": [
            ["strong-typing", "untyped"],
            ["static-scope", "dynamic-scope"],
            ["overloading", "untyped"],
            ["polymorphism", "untyped"],
        ]},
        {"name": "side-effecting", "arity": 1, "pairs": ["assignment", "print", "goto"]},
        {"name": "implementation", "arity": 2, "pairs": [
            ["state", "heap"], ["call-stack", "stack-frame"], ["loop", "control-flow"],
        ]},
    ]
    advice = [
        {"id": "structured-style-warning",
         "condition": {"has": "goto"},
         "message": "goto endangers structured control flow; prefer conditional and "
                    "loop forms.",
         "severity": "warning"},
        {"id": "untyped-drops-typechecker",
         "condition": {"has": "untyped"},
         "message": "untyped selected: the generated toolchain will omit the typechecker.",
         "severity": "hint"},
        {"id": "loop-without-conditional",
         "condition": {"and": [{"has": "loop"}, {"not": {"has": "conditional"}}]},
         "message": "loops usually pair with a conditional; consider selecting it.",
         "severity": "hint"},
        {"id": "dynamic-scope-surprises",
         "condition": {"has": "dynamic-scope"},
         "message": "dynamic scope surprises end users; static scope is the common choice.",
         "severity": "hint"},
    ]
    return {"version": "lda-kb/1", "header": HEADER, "concepts": concepts,
            "relations": relations, "advice": advice}


CALC_DECISIONS = [
    ("select", "program"),
    ("accept-consequence", "statement"),
    ("select", "assignment"),
    ("accept-consequence", "expression"),
    ("accept-consequence", "variable-ref"),
    ("select", "print"),
    ("accept-consequence", "output"),
    ("select", "number-literal"),
    ("select", "binary-op"),
    ("select", "strong-typing"),
    ("accept-consequence", "typechecking"),
    ("select", "static-scope"),
    ("accept-consequence", "scope"),
]

CALCCOND_EXTRA = [
    ("select", "conditional"),
    ("set-param", "binary-op", "ops", "arith-cmp"),
]

PPBE_EXAMPLES = {
    "assign.ex": "x := 1 ;\n",
    "print.ex": "print x ;\n",
    "add.ex": "print 1 + 2 ;\n",
    "submul.ex": "y := 8 - 2 * 3 ;\n",
    "paren.ex": "z := ( 1 + 2 ) * 3 ;\n",
    "cond.ex": "if x < 3 then\n  print x ;\nfi\n",
    "seq.ex": "x := 1 ;\nprint x ;\n",
    "nested.ex": "if x < 2 then\n  if y < 3 then\n    print x + y ;\n  fi\nfi\n",
    "mixed.ex": "a := 10 ;\nb := a - 1 ;\nprint a * b ;\n",
    "cmp.ex": "print 1 < 2 ;\n",
    "chain.ex": "x := 1 + 2 + 3 ;\n",
    "prog.ex": ("n := 5 ;\nif n < 9 then\n  n := n * 2 ;\n  print n ;\nfi\n"
                "print n ;\n"),
}

# two Assign instances whose gap vectors disagree: [1,1,1] vs [2,1,1]
PPBE_CONFLICT_EXAMPLES = {
    "one.ex": "x := 1 ;\n",
    "two.ex": "y  := 2 ;\n",
}

SAMPLE_PROGRAMS = {
    "sum.calc": "x := 2 ;\nprint x + 3 ;\n",
    "squares.calc": "n := 4 ;\nprint n + n ;\n",
}


def make_log(steps):
    out = []
    for i, step in enumerate(steps, 1):
        if step[0] == "set-param":
            out.append(Decision(i, "set-param", step[1], param=step[2], value=step[3]))
        else:
            out.append(Decision(i, step[0], step[1]))
    return out


def main():
    kb_text = save_kb(load_kb(json.dumps(seed_kb_raw())))
    for path in (ROOT / "kb" / "core.kb.json", ROOT / "src" / "lda" / "data" / "core.kb.json"):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(kb_text + "\n", encoding="utf-8")
    kb = load_kb(kb_text)
    print("seed KB: %d concepts" % len(kb.concepts))

    fixtures = ROOT / "fixtures"
    fixtures.mkdir(exist_ok=True)

    calc_log = make_log(CALC_DECISIONS)
    (fixtures / "calc.decisions.json").write_text(decisions_to_json(calc_log) + "\n",
                                                  encoding="utf-8")
    session = replay(kb, calc_log)
    assert not session.violations and not session.pending, session
    (fixtures / "calc.state-hash.txt").write_text(session.state_hash + "\n", encoding="utf-8")
    design = finalize(session, "Calc", "Prog")
    desc = compile_design(design)
    golden = ROOT / "golden"
    golden.mkdir(exist_ok=True)
    (golden / "calc.desc.json").write_text(save_description(desc) + "\n", encoding="utf-8")
    print("calc: %d blocks, %d productions"
          % (len(design.blocks), len(desc.grammar.productions)))

    cond_log = make_log(CALC_DECISIONS + CALCCOND_EXTRA)
    (fixtures / "calccond.decisions.json").write_text(decisions_to_json(cond_log) + "\n",
                                                      encoding="utf-8")
    cond_session = replay(kb, cond_log)
    assert not cond_session.violations and not cond_session.pending
    cond_desc = compile_design(finalize(cond_session, "CalcCond", "Prog"))
    (golden / "calccond.desc.json").write_text(save_description(cond_desc) + "\n",
                                               encoding="utf-8")
    print("calccond: %d productions" % len(cond_desc.grammar.productions))

    corpus = fixtures / "ppbe"
    corpus.mkdir(exist_ok=True)
    for name, text in PPBE_EXAMPLES.items():
        term = parse_program(cond_desc, text)
        formatted = format_term(cond_desc, term)
        assert formatted == text, "example %s is not in canonical form:\n%r\n%r" \
            % (name, formatted, text)
        assert equal_mod_spans(parse_program(cond_desc, formatted), term)
        (corpus / name).write_text(text, encoding="utf-8")
    print("ppbe corpus: %d examples" % len(PPBE_EXAMPLES))

    conflict_corpus = fixtures / "ppbe_conflict"
    conflict_corpus.mkdir(exist_ok=True)
    for name, text in PPBE_CONFLICT_EXAMPLES.items():
        parse_program(cond_desc, text)
        (conflict_corpus / name).write_text(text, encoding="utf-8")

    programs = fixtures / "programs"
    programs.mkdir(exist_ok=True)
    for name, text in SAMPLE_PROGRAMS.items():
        term = parse_program(desc, text)
        report = typecheck(desc, term)
        assert report.ok, report
        evaluate(desc, term)
        (programs / name).write_text(text, encoding="utf-8")
    print("sample programs: %d" % len(SAMPLE_PROGRAMS))


if __name__ == "__main__":
    main()
