"""Parser structure, declaration round-trips, and subset boundary enforcement."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from txconflict.errors import AnalyzerError, ParseError, UnsupportedConstruct
from txconflict.lexer import tokenize
from txconflict.nodes import (
    Binary,
    Block,
    Call,
    ExprStmt,
    Ident,
    Index,
    Literal,
    Member,
    Ternary,
    TupleExpr,
    Unary,
    to_source,
)
from txconflict.parser import parse

import solgen
from fixtureutil import FIXTURES, parse_fixture


def one_contract(source):
    unit = parse(source, "t.sol")
    assert len(unit.contracts) == 1
    return unit.contracts[0]


def first_expr(body_source):
    c = one_contract("contract C { uint256 x; uint256 y; uint256 z;"
                     f" function f() public {{ {body_source} }} }}")
    stmt = c.functions[0].body.statements[0]
    assert isinstance(stmt, ExprStmt)
    return stmt.expr


# -- declarations ------------------------------------------------------------

def test_example_fixture_structure(example_unit):
    assert example_unit.pragma == "^0.8.0"
    c = example_unit.contracts[0]
    assert c.name == "Example"

    variables = {v.name: v for v in c.state_variables}
    assert set(variables) == {"storageArray", "storageSize"}
    assert variables["storageArray"].type_name == "uint256[]"
    assert variables["storageArray"].visibility == "public"
    assert variables["storageSize"].type_name == "uint256"
    assert variables["storageSize"].visibility == "private"

    functions = {f.name: f for f in c.functions}
    assert set(functions) == {"addToStorage", "addToMemory"}
    assert functions["addToStorage"].visibility == "public"
    assert functions["addToStorage"].mutability == "nonpayable"
    assert functions["addToMemory"].mutability == "view"
    assert functions["addToMemory"].returns[0].type_name == "uint256[]"

    assert c.event_names() == {"StorageValueAdded"}


def test_pragma_only_unit():
    unit = parse("pragma solidity ^0.8.19;", "p.sol")
    assert unit.pragma == "^0.8.19"
    assert unit.contracts == []


def test_empty_contract():
    c = one_contract("contract Empty { }")
    assert c.state_variables == [] and c.functions == []


def test_multiple_contracts_in_one_file():
    unit = parse("contract A { } contract B { }", "t.sol")
    assert [c.name for c in unit.contracts] == ["A", "B"]


def test_function_keys_carry_arity():
    c = one_contract("""
        contract C {
            function f(uint256 a) public { }
            function f(uint256 a, uint256 b) public { }
            function g() public { }
        }
    """)
    assert [f.key for f in c.functions] == ["f/1", "f/2", "g/0"]


def test_duplicate_signatures_get_distinct_keys():
    c = one_contract("""
        contract C {
            function f(uint256 a) public { }
            function f(uint256 b) public { }
        }
    """)
    keys = [f.key for f in c.functions]
    assert len(set(keys)) == 2
    assert keys[0] == "f/1"


def test_constructor_fallback_receive_flags():
    c = one_contract("""
        contract C {
            constructor(uint256 seed) { }
            fallback() external payable { }
            receive() external payable { }
        }
    """)
    by_key = {f.key: f for f in c.functions}
    ctor = by_key["constructor/1"]
    assert ctor.is_constructor and not ctor.is_fallback and not ctor.is_receive
    assert by_key["fallback/0"].is_fallback
    assert by_key["receive/0"].is_receive
    assert by_key["receive/0"].visibility == "external"
    assert by_key["receive/0"].mutability == "payable"


def test_state_variable_forms():
    c = one_contract("""
        contract C {
            uint256 a;
            uint256 public b = 2;
            address private owner;
            uint256 constant LIMIT = 100;
            uint256 immutable seed;
            mapping ( address=>uint256 ) public balances;
            uint256[10][] grid;
        }
    """)
    v = {s.name: s for s in c.state_variables}
    assert v["a"].visibility == "internal"
    assert isinstance(v["b"].initializer, Literal)
    assert v["LIMIT"].is_constant
    assert v["seed"].is_constant  # immutable values never change post-deploy
    assert v["balances"].type_name == "mapping(address => uint256)"
    assert v["grid"].type_name == "uint256[10][]"
    assert all(s.declaring_contract == "C" for s in c.state_variables)


def test_modifier_declaration_and_invocation():
    c = one_contract("""
        contract C {
            address owner;
            modifier onlyOwner() { require(msg.sender == owner); _; }
            modifier capped(uint256 n) { require(n < 10); _; }
            function f(uint256 n) public onlyOwner capped(n) { }
        }
    """)
    assert [m.name for m in c.modifiers] == ["onlyOwner", "capped"]
    fn = c.functions[0]
    assert fn.modifiers == ["onlyOwner", "capped"]
    assert len(fn.modifier_invocations[1].args) == 1


def test_struct_and_enum_tolerated_but_inert():
    c = one_contract("""
        contract C {
            struct Point { uint256 x; uint256 y; }
            enum Phase { Open, Closed }
            uint256 n;
        }
    """)
    assert c.state_variable_names() == {"n"}
    assert c.functions == []


def test_bodiless_function_span_is_declaration_line():
    c = one_contract("contract C {\n  function f() external;\n}")
    assert c.functions[0].span == (2, 2)


def test_span_covers_declaration_through_close():
    c = parse_fixture("example.sol").contracts[0]
    for fn in c.functions:
        assert fn.span[0] == fn.line
        assert fn.span[1] >= fn.span[0]


# -- expressions -------------------------------------------------------------

def test_precedence_multiplication_binds_tighter():
    e = first_expr("x = 1 + 2 * 3;")
    assert isinstance(e, Binary) and e.op == "="
    rhs = e.right
    assert rhs.op == "+" and rhs.right.op == "*"


def test_assignment_is_right_associative():
    e = first_expr("x = y = 1;")
    assert e.op == "=" and isinstance(e.left, Ident) and e.left.name == "x"
    assert e.right.op == "=" and e.right.left.name == "y"


def test_ternary_shape():
    e = first_expr("x = y > 0 ? y : z;")
    assert isinstance(e.right, Ternary)
    assert isinstance(e.right.cond, Binary)


def test_postfix_chains():
    e = first_expr("x = a.b[0].c(1);")
    call = e.right
    assert isinstance(call, Call) and len(call.args) == 1
    assert isinstance(call.callee, Member) and call.callee.member == "c"
    assert isinstance(call.callee.base, Index)


def test_unary_forms():
    assert isinstance(first_expr("x = -y;").right, Unary)
    inc = first_expr("x++;")
    assert isinstance(inc, Unary) and not inc.prefix and inc.op == "++"
    dec = first_expr("--x;")
    assert dec.prefix and dec.op == "--"
    assert first_expr("delete x;").op == "delete"


def test_tuple_versus_grouping():
    grouped = first_expr("x = (y);")
    assert isinstance(grouped.right, Ident)
    pair = first_expr("(x, y) = (1, 2);")
    assert isinstance(pair.left, TupleExpr) and len(pair.left.items) == 2


def test_declaration_statement_lookahead():
    c = one_contract("""
        contract C {
            uint256 total;
            function f(uint256[] memory xs) public {
                uint256 n = 1;
                uint256[] memory copy = xs;
                total = n + copy.length;
            }
        }
    """)
    body = c.functions[0].body.statements
    assert body[0].name == "n" and body[0].type_name == "uint256"
    assert body[1].location == "memory"
    assert isinstance(body[2], ExprStmt)


# -- round-trips -------------------------------------------------------------

def _assert_round_trip(source, path):
    unit = parse(source, path)
    printed = to_source(unit)
    reparsed = parse(printed, path)
    reprinted = to_source(reparsed)
    assert printed == reprinted
    assert [t.text for t in tokenize(printed)] == [t.text for t in tokenize(reprinted)]


@pytest.mark.parametrize("name", ["example.sol", "erc20.sol", "vault.sol"])
def test_fixture_round_trip(name):
    _assert_round_trip((FIXTURES / name).read_text(), name)


def test_generated_round_trips():
    for seed in range(40):
        source = solgen.generate_source(random.Random(seed))
        _assert_round_trip(source, f"gen{seed}.sol")


# -- subset boundary ---------------------------------------------------------

UNSUPPORTED = [
    ("contract A is B { }", "inheritance"),
    ("import './x.sol'; contract A { }", "import"),
    ("library L { }", "library"),
    ("interface I { }", "interface"),
    ("abstract contract A { }", "abstract"),
    ("function free() pure returns (uint256) { return 1; } contract A { }", "free function"),
    ("contract A { using L for uint256; }", "using-for"),
    ("contract A { function f() public { assembly { } } }", "assembly"),
    ("contract A { function f() public { do { } while (true); } }", "do-while"),
    ("contract A { function f() public { try this.f() { } catch { } } }", "try"),
    ("contract A { function f() public { while (true) { break; } } }", "break"),
    ("contract A { function f() public { while (true) { continue; } } }", "continue"),
    ("contract A { function f() public virtual { } }", "virtual"),
    ("contract A { function f() public override { } }", "override"),
    ("contract A { uint256 public override x; }", "override variable"),
    ("contract A { function f(address p) public { p.call{value: 1}(\"\"); } }", "call options"),
]


@pytest.mark.parametrize("source,label", UNSUPPORTED, ids=[u[1] for u in UNSUPPORTED])
def test_out_of_subset_constructs_are_refused(source, label):
    with pytest.raises(UnsupportedConstruct):
        parse(source, "t.sol")


def test_unsupported_error_carries_position():
    with pytest.raises(UnsupportedConstruct) as err:
        parse("contract A {\n  using L for uint256;\n}", "t.sol")
    assert err.value.line == 2
    assert "using" in str(err.value)


def test_parse_error_reports_expected_and_found():
    with pytest.raises(ParseError) as err:
        parse("contract C { uint256 x }", "t.sol")
    message = str(err.value)
    assert "';'" in message and "'}'" in message
    assert err.value.line == 1


def test_parse_error_on_truncated_input():
    with pytest.raises(ParseError) as err:
        parse("contract C { function f() public {", "t.sol")
    assert err.value.line == 1


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=200))
def test_arbitrary_text_never_raises_unexpected_errors(source):
    try:
        parse(source, "fuzz.sol")
    except AnalyzerError:
        pass


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from([
    "contract", "function", "uint256", "x", "(", ")", "{", "}", ";", "=",
    "+", "public", "view", "mapping", "=>", "[", "]", "1", '"s"', ".",
]), max_size=40))
def test_token_soup_never_raises_unexpected_errors(words):
    try:
        parse(" ".join(words), "fuzz.sol")
    except AnalyzerError:
        pass
