from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fibcat.errors import ParseError
from fibcat.expr import BinOp, Expr, Pow, RatLit, SeqCall, free_vars
from fibcat.seriesdsl import (
    AlgebraicTail,
    GeometricTail,
    ParsedRegistry,
    SeriesSpec,
    builtin_registry,
    format_expr,
    parse_expression,
    parse_registry,
    parse_tail,
    serialize_record,
)


def test_parse_contract_examples():
    e = parse_expression("C(n)/5^n")
    assert isinstance(e, BinOp) and e.op == "/"
    assert isinstance(e.left, SeqCall) and isinstance(e.right, Pow)

    e = parse_expression("(-1)^n * C(2*n)")
    assert isinstance(e, BinOp) and e.op == "*"

    e = parse_expression("2*(z+8)/(4−z)^2")  # unicode minus accepted
    assert free_vars(e) == {"z"}


def test_precedence():
    assert format_expr(parse_expression("-2^2")) == "-2^2"
    assert parse_expression("-2^2") == parse_expression("-(2^2)")
    assert parse_expression("2*x^3") == parse_expression("2*(x^3)")
    assert parse_expression("2^-3") == parse_expression("2^(-3)")
    assert parse_expression("a-b-c") == parse_expression("(a-b)-c")
    assert parse_expression("a-b*c") == parse_expression("a-(b*c)")


def test_rational_literal_exponent():
    e = parse_expression("(4-z)^(5/2)")
    assert e.exponent == RatLit(Fraction(5, 2))
    e = parse_expression("x^(-1/2)")
    assert e.exponent == RatLit(Fraction(-1, 2))


def test_exponent_grammar_rejections():
    with pytest.raises(ParseError):
        parse_expression("2^sqrt(2)")
    with pytest.raises(ParseError):
        parse_expression("2^(n/2)")
    with pytest.raises(ParseError):
        parse_expression("2^pi")


def test_syntax_error_carries_location():
    with pytest.raises(ParseError) as info:
        parse_expression("C(n")
    assert info.value.line == 1
    assert ")" in info.value.expected
    with pytest.raises(ParseError):
        parse_expression("1 +")


def test_parse_tail():
    t = parse_tail("geometric ratio=9/10 from=1")
    assert t == GeometricTail(Fraction(9, 10), 1)
    t = parse_tail("algebraic ladder=-1/2,-3/2,-5/2 order=7")
    assert t == AlgebraicTail((Fraction(-1, 2), Fraction(-3, 2), Fraction(-5, 2)), 7)
    with pytest.raises(ValueError):
        parse_tail("geometric ratio=3/2 from=1")
    with pytest.raises(ValueError):
        parse_tail("algebraic ladder=-1/2,-1/2 order=3")


def test_builtin_registry_loads_clean():
    records = builtin_registry()
    assert len(records) > 120
    ids = [r.id for r in records]
    assert len(ids) == len(set(ids))


def test_s2_file_has_twenty_plus_records():
    from fibcat.seriesdsl import _REGISTRY_DIR

    parsed = parse_registry((_REGISTRY_DIR / "paper_s2.reg").read_text())
    assert not parsed.problems
    assert len(parsed.records) >= 20


def test_round_trip_all_shipped_records():
    for record in builtin_registry():
        parsed = parse_registry(serialize_record(record))
        assert not parsed.problems
        assert parsed.records == [record]


def test_builtin_contents():
    by_id = {r.id: r for r in builtin_registry()}
    euler = by_id["s5.Y.euler"]
    assert euler.rhs == parse_expression("pi^2/18")
    corrected = by_id["s2.G2t.sqrt2"]
    printed = by_id["s2.G2t.sqrt2.printed"]
    assert isinstance(corrected.lhs, SeriesSpec) and corrected.lhs.start == 0
    assert printed.lhs.start == 1 and printed.as_printed
    assert not corrected.as_printed


def test_source_tags_nonempty_and_unique():
    records = builtin_registry()
    tags = [r.paper_ref for r in records]
    assert all(tags)
    assert len(tags) == len(set(tags))


def test_series_records_declare_their_free_variables():
    for r in builtin_registry():
        names = {p[0] for p in r.params}
        if isinstance(r.lhs, SeriesSpec):
            assert free_vars(r.lhs.term) <= names | {r.lhs.index}
            assert free_vars(r.rhs) <= names
            assert r.tail is not None


def test_duplicate_id_reported_with_both_lines():
    text = """
[identity]
id = "dup"
kind = "constant"
paper = "one"
lhs = "1"
rhs = "1"

[identity]
id = "dup"
kind = "constant"
paper = "two"
lhs = "2"
rhs = "2"
"""
    parsed = parse_registry(text)
    assert len(parsed.records) == 1
    assert len(parsed.problems) == 1
    assert "line 2" in str(parsed.problems[0]) or "first defined" in str(parsed.problems[0])


def test_series_without_tail_is_rejected_but_rest_survives():
    text = """
[identity]
id = "bad.series"
kind = "series"
paper = "x"
index = "n"  start = 0
term = "C(n)/5^n"
rhs = "2"
params = ""

[identity]
id = "good"
kind = "constant"
paper = "y"
lhs = "1"
rhs = "1"
"""
    parsed = parse_registry(text)
    assert [r.id for r in parsed.records] == ["good"]
    assert any("tail" in p.message for p in parsed.problems)


def test_trailing_comment_outside_string():
    text = """
[identity]
id = "c"
kind = "constant"
paper = "tag"
lhs = "1"            # or "2"
rhs = "1"
params = ""
"""
    parsed = parse_registry(text)
    assert not parsed.problems
    assert parsed.records[0].lhs == parse_expression("1")


def test_quoted_escapes():
    text = '[identity]\nid = "e"\nkind = "constant"\npaper = "with \\"quote\\" and \\\\"\nlhs = "1"\nrhs = "1"\n'
    parsed = parse_registry(text)
    assert not parsed.problems
    assert parsed.records[0].paper_ref == 'with "quote" and \\'


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=60))
def test_expression_parser_total(text):
    try:
        result = parse_expression(text)
        assert isinstance(result, Expr)
    except ParseError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=200))
def test_registry_parser_total(text):
    parsed = parse_registry(text)
    assert isinstance(parsed, ParsedRegistry)
