import pytest
from hypothesis import given, strategies as st

from lda import boxes, render
from lda.boxes import H, I, Ref, Text, V, parse_box, print_box
from lda.errors import ParseError

from oracles import grid_render


def test_parse_spec_example():
    assert parse_box('H hs=1 [ $0 ":=" $2 ";" ]') == \
        H(1, (Ref(0), Text(":="), Ref(2), Text(";")))


def test_parse_nested():
    box = parse_box('V vs=0 is=0 [H hs=1 ["if" $1 "then"] I is=2 [$3] "fi"]')
    assert box == V(0, 0, (H(1, (Text("if"), Ref(1), Text("then"))),
                           I(2, Ref(3)), Text("fi")))


def test_parse_bare_leaf():
    assert parse_box("$0") == Ref(0)
    assert parse_box('"fi"') == Text("fi")


@pytest.mark.parametrize("bad, col", [
    ('H hs=1 [', 9),
    ('H [$0]', 3),
    ('W hs=1 [$0]', 1),
    ('H hs=1 [$0] extra', 13),
    ('"unterminated', 1),
])
def test_parse_errors_carry_position(bad, col):
    with pytest.raises(ParseError) as exc:
        parse_box(bad)
    assert exc.value.column == col


def test_invariants_rejected():
    with pytest.raises(ValueError):
        boxes.check_box(Text("a\nb"))
    with pytest.raises(ValueError):
        boxes.check_box(H(1, ()))
    with pytest.raises(ValueError):
        boxes.check_box(I(0, Text("x")))


# --- render semantics, values frozen from the layout definitions ---------------

def test_render_h_spacing():
    assert render(H(1, (Text("a"), Text("b")))) == "a b\n"


def test_render_v_indents_children_after_first():
    assert render(V(0, 2, (Text("begin"), Text("x"), Text("end")))) == \
        "begin\n  x\n  end\n"


def test_render_h_with_v_child_aligns_to_placement_column():
    box = H(1, (Text("if"), V(0, 0, (Text("p"), Text("q")))))
    assert render(box) == "if p\n   q\n"


def test_render_v_blank_lines():
    assert render(V(1, 0, (Text("a"), Text("b")))) == "a\n\nb\n"


def test_render_h_continues_after_multiline_child():
    box = H(1, (V(0, 0, (Text("aaaa"), Text("b"))), Text("c")))
    assert render(box) == "aaaa\nb c\n"


def test_render_indent_box():
    assert render(I(3, Text("x"))) == "   x\n"


def test_no_trailing_spaces_and_single_newline():
    box = V(0, 0, (H(1, (Text("a"), V(0, 0, (Text("bb"), Text("c"))))), Text("d")))
    out = render(box)
    assert out.endswith("\n") and not out.endswith("\n\n")
    assert all(line == line.rstrip() for line in out.split("\n"))


# --- properties ------------------------------------------------------------------

_texts = st.text(alphabet="ab if:=;()", min_size=0, max_size=6).map(Text)
_boxes = st.recursive(
    _texts,
    lambda children: st.one_of(
        st.tuples(st.integers(0, 3), st.lists(children, min_size=1, max_size=4))
          .map(lambda t: H(t[0], tuple(t[1]))),
        st.tuples(st.integers(0, 2), st.integers(0, 3),
                  st.lists(children, min_size=1, max_size=4))
          .map(lambda t: V(t[0], t[1], tuple(t[2]))),
        st.tuples(st.integers(1, 4), children).map(lambda t: I(t[0], t[1]))),
    max_leaves=12)


@given(_boxes)
def test_render_matches_absolute_coordinate_oracle(box):
    assert render(box) == grid_render(box)


@given(_boxes)
def test_print_parse_round_trip(box):
    assert parse_box(print_box(box)) == box


@given(st.lists(st.text(alphabet="abc", min_size=1, max_size=4), min_size=1, max_size=5),
       st.integers(0, 3))
def test_h_width_is_sum_plus_gaps(words, hs):
    out = render(H(hs, tuple(Text(w) for w in words)))
    assert len(out.rstrip("\n")) == sum(len(w) for w in words) + hs * (len(words) - 1)


@given(st.lists(st.text(alphabet="abc", min_size=1, max_size=4), min_size=1, max_size=5),
       st.integers(0, 2))
def test_v_line_count_is_sum_plus_blanks(words, vs):
    out = render(V(vs, 0, tuple(Text(w) for w in words)))
    assert out.count("\n") == len(words) + vs * (len(words) - 1)
