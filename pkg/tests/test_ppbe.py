import random

import pytest

import lda
from lda import boxes, collect_layouts, format_term, infer_rules, parse_program
from lda.errors import ExampleParseError
from lda.ppbe import uncovered_labels

from oracles import minimal_boxes


@pytest.fixture(scope="module")
def corpus_observations(calccond_desc, ppbe_corpus):
    return collect_layouts(calccond_desc, ppbe_corpus)


def test_assign_observation_geometry(calccond_desc):
    [ob] = [o for o in collect_layouts(calccond_desc, [("a", "x := 1 ;\n")])
            if o.label == "Assign"]
    assert [c.start for c in ob.components] == [(0, 0), (0, 2), (0, 5), (0, 7)]
    gaps = [nxt.start[1] - prev.end[1]
            for prev, nxt in zip(ob.components, ob.components[1:])]
    assert gaps == [1, 1, 1]


def test_cond_fixture_observation(calccond_desc, repo):
    text = (repo / "fixtures" / "ppbe" / "cond.ex").read_text(encoding="utf-8")
    [ob] = [o for o in collect_layouts(calccond_desc, [("cond.ex", text)])
            if o.label == "Cond"]
    # independent span walk: the then-branch child sits at relative line 1, column 2
    branch = ob.components[3]
    assert branch.kind == "value" and branch.start == (1, 2)
    fi = ob.components[4]
    assert fi.text == "fi" and fi.start == (2, 0)


def test_empty_example_list(calccond_desc):
    assert collect_layouts(calccond_desc, []) == []


def test_unparsable_example_raises(calccond_desc):
    with pytest.raises(ExampleParseError) as exc:
        collect_layouts(calccond_desc, [("bad.ex", "x := ;\n")])
    assert exc.value.name == "bad.ex"


def test_inferred_rules_reproduce_corpus_byte_exactly(calccond_desc, ppbe_corpus,
                                                      corpus_observations):
    result = infer_rules(corpus_observations)
    assert result.ok
    inferred = lda.description.LanguageDescription(
        calccond_desc.name, calccond_desc.grammar, result.rules,
        calccond_desc.typing, calccond_desc.evaluation, calccond_desc.provenance)
    for name, text in ppbe_corpus:
        term = parse_program(calccond_desc, text)
        assert format_term(inferred, term) == text, name


def test_corpus_covers_every_production(calccond_desc, corpus_observations):
    assert uncovered_labels(calccond_desc.grammar, corpus_observations) == []


def test_inferred_assign_rule_is_the_unique_minimum(corpus_observations):
    result = infer_rules(corpus_observations)
    assert boxes.print_box(result.rules["Assign"]) == 'H hs=1 [$0 ":=" $2 ";"]'
    instances = [o for o in corpus_observations if o.label == "Assign"]
    cost, minima = minimal_boxes(instances, max_nodes=7)
    assert minima == [result.rules["Assign"]]


def test_inferred_cond_rule_matches_exhaustive_search(corpus_observations):
    result = infer_rules(corpus_observations)
    got = result.rules["Cond"]
    assert boxes.print_box(got) == \
        'V vs=0 is=0 [H hs=1 ["if" $1 "then"] I is=2 [$3] "fi"]'
    instances = [o for o in corpus_observations if o.label == "Cond"]
    cost, minima = minimal_boxes(instances, max_nodes=8)
    assert got in minima
    assert cost == boxes.box_size(got)


def test_all_inferred_rules_are_minimal(calccond_desc, corpus_observations):
    result = infer_rules(corpus_observations)
    for label, box in sorted(result.rules.items()):
        instances = [o for o in corpus_observations if o.label == label]
        if len(instances[0].components) > 5:
            continue
        cost, minima = minimal_boxes(instances, max_nodes=boxes.box_size(box) + 1)
        assert cost == boxes.box_size(box), label
        assert box in minima, label


def test_gap_conflict_with_witnesses(calccond_desc, repo):
    conflict_dir = repo / "fixtures" / "ppbe_conflict"
    examples = [(f.name, f.read_text(encoding="utf-8"))
                for f in sorted(conflict_dir.glob("*.ex"))]
    observations = collect_layouts(calccond_desc, examples)
    result = infer_rules(observations)
    [conflict] = [c for c in result.conflicts if c.label == "Assign"]
    assert conflict.dimension == "gap"
    assert len(conflict.witnesses) == 2
    names = {w[0].split("@")[0] for w in conflict.witnesses}
    assert names == {"one.ex", "two.ex"}
    assert conflict.witnesses[0][1] != conflict.witnesses[1][1]
    assert "Assign" not in result.rules


def test_line_structure_conflict(calccond_desc):
    flat = "if x < 1 then print x ; fi\n"
    tall = "if x < 1 then\n  print x ;\nfi\n"
    observations = collect_layouts(calccond_desc, [("flat.ex", flat), ("tall.ex", tall)])
    result = infer_rules(observations)
    [conflict] = [c for c in result.conflicts if c.label == "Cond"]
    assert conflict.dimension == "line-structure"


def test_indent_conflict(calccond_desc):
    two = "if x < 1 then\n  print x ;\nfi\n"
    four = "if x < 1 then\n    print x ;\nfi\n"
    observations = collect_layouts(calccond_desc, [("two.ex", two), ("four.ex", four)])
    result = infer_rules(observations)
    [conflict] = [c for c in result.conflicts if c.label == "Cond"]
    assert conflict.dimension == "indent"


def test_permuting_examples_changes_nothing(calccond_desc, ppbe_corpus):
    rng = random.Random(3)
    reference = infer_rules(collect_layouts(calccond_desc, ppbe_corpus))
    for _ in range(5):
        shuffled = ppbe_corpus[:]
        rng.shuffle(shuffled)
        result = infer_rules(collect_layouts(calccond_desc, shuffled))
        assert result.rules == reference.rules
        assert result.conflicts == reference.conflicts


def test_no_invented_numbers(calccond_desc, ppbe_corpus, corpus_observations):
    observed = {"hs": set(), "vs": set(), "is": set()}
    for ob in corpus_observations:
        for prev, nxt in zip(ob.components, ob.components[1:]):
            if nxt.start[0] == prev.end[0]:
                observed["hs"].add(nxt.start[1] - prev.end[1])
            else:
                observed["vs"].add(nxt.start[0] - prev.end[0] - 1)
                observed["is"].add(nxt.start[1])

    def check(box):
        match box:
            case boxes.H(hs, children):
                assert hs in observed["hs"]
                for c in children:
                    check(c)
            case boxes.V(vs, is_, children):
                assert vs in observed["vs"]
                assert is_ in observed["is"]
                for c in children:
                    check(c)
            case boxes.I(is_, child):
                assert is_ in observed["is"]
                check(child)

    result = infer_rules(collect_layouts(calccond_desc, ppbe_corpus))
    for box in result.rules.values():
        check(box)


def test_uncovered_productions_are_absent_not_guessed(calccond_desc):
    observations = collect_layouts(calccond_desc, [("a.ex", "x := 1 ;\n")])
    result = infer_rules(observations)
    assert "Cond" not in result.rules
    gaps = uncovered_labels(calccond_desc.grammar, observations)
    assert "Cond" in gaps and "Print" in gaps


def test_single_component_productions_get_bare_refs(corpus_observations):
    result = infer_rules(corpus_observations)
    assert result.rules["Num"] == boxes.Ref(0)
    assert result.rules["Lift"] == boxes.Ref(0)
    assert result.rules["Program"] == boxes.Ref(0)


def test_multiline_value_component_inside_higher_node(calccond_desc):
    # the Seq node whose second statement is a multi-line conditional
    text = "x := 1 ;\nif x < 2 then\n  print x ;\nfi\n"
    observations = collect_layouts(calccond_desc, [("t.ex", text)])
    seqs = [o for o in observations if o.label == "Seq"]
    assert len(seqs) == 1
    prev, nxt = seqs[0].components
    assert prev.end[0] == 0 and nxt.start == (1, 0) and nxt.end[0] == 3
    result = infer_rules(observations)
    assert boxes.print_box(result.rules["Seq"]) == "V vs=0 is=0 [$0 $1]"
