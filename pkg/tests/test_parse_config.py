from fractions import Fraction as Fr

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from gradval.config import Workspace
from gradval.errors import ConfigError, ParseError
from gradval.fixtures import fixture_document
from gradval.grading import Lattice
from gradval.graded import GradedField
from gradval.parse import parse_base, parse_element


def test_base_field(K, Qx):
    assert parse_base("(1+2*i)/5", K) == (Fr(1, 5), Fr(2, 5))
    assert parse_base("i^2", K) == K.from_int(-1)
    assert parse_base("i^(-1)", K) == K.neg(K.gen())
    assert Qx.eq(parse_base("x/(x+1) + 1/(x+1)", Qx), Qx.one)


def test_graded(KB, QZ):
    u = KB.t((1,))
    assert parse_element("3*i*u^(2)", KB) == KB.monomial((Fr(0), Fr(3)), (2,))
    assert parse_element("u^(1) + u^(1)", KB) == KB.const(KB.base.from_int(2)) * u
    assert parse_element("(u^(1))^(-2)", KB) == u**-2
    assert parse_element("1/(5*u^(1))", QZ) == QZ.monomial(Fr(1, 5), (-1,))


def test_rational_degrees(Q):
    K = GradedField(Q, Lattice([(Fr(1, 2),)]))
    assert parse_element("u^(1/2)", K).degree == (Fr(1, 2),)
    with pytest.raises(ParseError):
        parse_element("u^(1/3)", K)


def test_two_dimensional(Q):
    K = GradedField(Q, Lattice.standard(2))
    assert parse_element("u^(1,-2)", K).degree == (1, -2)
    with pytest.raises(ParseError):
        parse_element("u^(1)", K)


@pytest.mark.parametrize("text,col", [
    ("u^(", 4),
    ("", 1),
    ("1 +", 4),
    ("2 $ 3", 3),
    ("j", 1),
    ("1/0", 2),
    ("u^(1/0)", 6),
])
def test_errors_and_columns(KB, text, col):
    with pytest.raises(ParseError) as exc:
        parse_element(text, KB)
    assert exc.value.column == col


def test_error_message(KB):
    with pytest.raises(ParseError, match="expected 'int', found end of input at column 4"):
        parse_element("u^(", KB)


def test_non_homogeneous_division(KB):
    with pytest.raises(ParseError):
        parse_element("1/(1+u^(1))", KB)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-4, 4))
@settings(max_examples=60, deadline=None)
def test_print_parse_round_trip(KB, a, b, d):
    x = KB.monomial((Fr(a), Fr(b)), (d,)) + KB.monomial((Fr(b), Fr(1)), (d + 1,))
    assert parse_element(str(x), KB) == x


def test_workspace_round_trip():
    ws = Workspace([fixture_document()])
    doc = ws.to_config()
    again = Workspace([doc])
    assert again.to_config() == doc
    assert Workspace([yaml.safe_load(ws.dump())]).to_config() == doc


def test_load_from_files(tmp_path):
    p = tmp_path / "extra.yaml"
    p.write_text("lattices:\n  Z3: {basis: [[3]]}\nvaluations:\n  R7: {graded: QZ3, v1: {kind: prime, generator: '7'}, psi: [['0']]}\n"
                 "graded:\n  QZ3: {field: Q, lattice: Z3}\n")
    ws = Workspace.load([p])
    assert ws.valuations["R7"].parent.gamma == Lattice([(3,)])


@pytest.mark.parametrize("doc", [
    {"bogus": {}},
    {"fields": {"Q": {"kind": "rationals"}}},
    {"graded": {"X": {"field": "nope", "lattice": "Z"}}},
    {"lattices": {"Z": {"basis": "oops"}}},
    {"lattices": {"Z": {"basis": [["a"]]}}},
    {"valuations": {"V": {"graded": "QZ"}}},
])
def test_config_errors(doc):
    with pytest.raises(ConfigError):
        Workspace([doc])


def test_duplicate_names():
    d = {"lattices": {"Z": {"basis": [[1]]}}}
    with pytest.raises(ConfigError):
        Workspace([d, d])


def test_parse_error_in_config_reports_entry():
    d = {"lattices": {"Z": {"basis": [[1]]}}, "graded": {"G": {"field": "Q", "lattice": "Z"}},
         "tables": {"T": {"graded": "G", "universe": ["u^("], "bits": [1]}}}
    with pytest.raises(ParseError, match="tables.T"):
        Workspace([d])


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        Workspace.load([tmp_path / "missing.yaml"])
