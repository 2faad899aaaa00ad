"""Acceptance suite: one test per criterion, each printing a PASS line with
its runtime, each enforcing the stated budget and tolerance (exact unless
stated otherwise)."""

import json
import random
import time

import lda
from lda import (boxes, collect_layouts, compile_design, evaluate, finalize,
                 format_term, infer_rules, parse_program, replay, save_description,
                 typecheck)
from lda.cli import main as cli_main
from lda.description import build_grammar
from lda.earley import parse_tokens, recognize_tokens
from lda.errors import AmbiguousParse
from lda.facets import parse_facet
from lda.lexer import Token
from lda.terms import equal_mod_spans

from oracles import (all_strings, calc_interpret, closure_fixpoint, conflict_scan,
                     count_derivations, minimal_boxes, random_select_log, random_term)


def report(name, started, budget):
    elapsed = time.monotonic() - started
    assert elapsed < budget, "%s took %.1fs (budget %ds)" % (name, elapsed, budget)
    print("ACCEPTANCE %s: PASS (%.2fs, budget %ds)" % (name, elapsed, budget))


def test_round_trip_suite(calc_desc):
    started = time.monotonic()
    rng = random.Random(20260811)
    for i in range(500):
        term = random_term(calc_desc.grammar, rng, depth=6)
        text = format_term(calc_desc, term)
        assert equal_mod_spans(parse_program(calc_desc, text), term), \
            "round trip failed on term %d: %r" % (i, text)
    report("round-trip-suite (500 terms)", started, 10)


def _tokens(classes):
    return [Token(c, c, 1, i + 1, 1, i + 2) for i, c in enumerate(classes)]


def test_parser_oracle():
    started = time.monotonic()
    grammars = [
        build_grammar(parse_facet("grammar", 'Plus: E -> E "+" E\nLit: E -> "n"'), "E"),
        build_grammar(parse_facet("grammar", 'Empty: S ->\nWrap: S -> "(" S ")" S'), "S"),
        build_grammar(parse_facet("grammar", 'More: S -> "a" S "b"\nBase: S -> "a" "b"'),
                      "S"),
    ]
    alphabets = [["n", "+"], ["(", ")"], ["a", "b"]]
    checked = 0
    for grammar, alphabet in zip(grammars, alphabets):
        assert len(grammar.productions) <= 8
        for classes in all_strings(alphabet, 12):
            classes = list(classes)
            expected = count_derivations(grammar, classes)
            toks = _tokens(classes)
            accepted = recognize_tokens(grammar, toks)
            assert accepted == (expected >= 1), classes
            if accepted:
                try:
                    parse_tokens(grammar, toks)
                    ambiguous = False
                except AmbiguousParse as e:
                    ambiguous = True
                    assert len(e.evidence) == 2
                    assert not equal_mod_spans(*e.evidence)
                assert ambiguous == (expected >= 2), classes
            checked += 1
    report("parser-oracle (%d strings over 3 grammars)" % checked, started, 60)


def test_session_closure_oracle(seed_kb):
    started = time.monotonic()
    rng = random.Random(8128)
    for i in range(200):
        log = random_select_log(seed_kb, rng)
        session = replay(seed_kb, log)
        closed = closure_fixpoint(seed_kb, session.selected)
        assert set(session.pending) | set(session.selected) == closed, i
        got = {v.members for v in session.violations if v.kind == "conflict"}
        assert got == conflict_scan(seed_kb, session.selected), i
    report("session-closure-oracle (200 logs)", started, 5)


def test_replay_determinism(seed_kb, calc_log, repo):
    started = time.monotonic()
    first = replay(seed_kb, calc_log)
    second = replay(seed_kb, calc_log)
    assert first.state_hash == second.state_hash
    pinned = (repo / "fixtures" / "calc.state-hash.txt").read_text().strip()
    assert first.state_hash == pinned
    desc = compile_design(finalize(first, "Calc", "Prog"))
    golden = (repo / "golden" / "calc.desc.json").read_text(encoding="utf-8")
    assert save_description(desc) + "\n" == golden, "description is not byte-identical"
    report("replay-determinism", started, 60)


def test_end_to_end_calc(calc_desc):
    started = time.monotonic()
    term = parse_program(calc_desc, "x := 2 ; print x + 3 ;")
    assert typecheck(calc_desc, term).ok
    value, store = evaluate(calc_desc, term)
    _, oracle_out = calc_interpret(term)
    assert [v.value for v in store.output] == oracle_out == [5]
    report("end-to-end-calc", started, 1)


def test_ppbe_faithfulness(calccond_desc, ppbe_corpus, repo):
    started = time.monotonic()
    assert len(ppbe_corpus) == 12
    observations = collect_layouts(calccond_desc, ppbe_corpus)
    result = infer_rules(observations)
    assert result.ok

    inferred_desc = lda.description.LanguageDescription(
        calccond_desc.name, calccond_desc.grammar, result.rules,
        calccond_desc.typing, calccond_desc.evaluation, calccond_desc.provenance)
    for name, text in ppbe_corpus:
        term = parse_program(calccond_desc, text)
        assert format_term(inferred_desc, term) == text, name

    for label, box in sorted(result.rules.items()):
        instances = [o for o in observations if o.label == label]
        if len(instances[0].components) > 5:
            continue
        cost, minima = minimal_boxes(instances, max_nodes=boxes.box_size(box) + 1)
        assert cost == boxes.box_size(box), label
        assert box in minima, label

    conflict_dir = repo / "fixtures" / "ppbe_conflict"
    seeded = [(f.name, f.read_text(encoding="utf-8"))
              for f in sorted(conflict_dir.glob("*.ex"))]
    conflicted = infer_rules(collect_layouts(calccond_desc, seeded))
    [conflict] = [c for c in conflicted.conflicts if c.label == "Assign"]
    assert conflict.dimension == "gap"
    assert len(conflict.witnesses) == 2
    assert {w[0].split("@")[0] for w in conflict.witnesses} == {"one.ex", "two.ex"}
    report("ppbe-faithfulness (12 examples)", started, 30)


def test_constraint_scenarios(tmp_path, capsys, repo, monkeypatch):
    started = time.monotonic()
    monkeypatch.chdir(repo)

    def check(argv, expect_code):
        code = cli_main(argv)
        captured = capsys.readouterr()
        assert code == expect_code, (argv, captured.err)
        return captured

    log = tmp_path / "conflict.json"
    log.write_text(json.dumps([{"seq": 1, "action": "select",
                                "concept": "strong-typing"},
                               {"seq": 2, "action": "select", "concept": "untyped"}]))
    captured = check(["design", "check", str(log), "--json"], 1)
    [violation] = json.loads(captured.out)["diagnostics"]["violations"]
    assert violation["kind"] == "conflict"
    assert violation["members"] == ["strong-typing", "untyped"]

    log = tmp_path / "goto.json"
    log.write_text(json.dumps([{"seq": 1, "action": "select", "concept": "goto"}]))
    captured = check(["design", "check", str(log), "--json"], 1)
    [advice] = json.loads(captured.out)["diagnostics"]["advice"]
    assert (advice["id"], advice["severity"]) == ("structured-style-warning", "warning")

    log = tmp_path / "loop.json"
    log.write_text(json.dumps([{"seq": 1, "action": "select", "concept": "loop"}]))
    captured = check(["design", "finalize", str(log), "--name", "L", "--start", "Stmt",
                      "-o", str(tmp_path / "l.desc.json"), "--json"], 1)
    detail = json.loads(captured.err)
    assert detail["code"] == "unresolved-design"
    holes = [v for v in detail["details"]["violations"]
             if v["kind"] == "unsatisfied-hole"]
    assert any(v["members"][0] == "loop" and "expression" in v["members"]
               for v in holes)

    with capsys.disabled():
        report("constraint-scenarios", started, 60)
