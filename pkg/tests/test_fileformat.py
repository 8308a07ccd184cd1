from __future__ import annotations

import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homlie import linalg
from homlie.algebra import NAMED_KEYS, named_example
from homlie.derivations import truncated_polynomials
from homlie.fileformat import AlgebraFile, ParseError, example_file, parse, parse_file, serialize
from homlie.reps import coadjoint, dual_rep
from homlie.scalars import variable

from randgen import random_homlie, random_rep

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.mark.parametrize("key", NAMED_KEYS)
def test_example_files_round_trip(key):
    text = serialize(example_file(key))
    assert serialize(parse(text)) == text
    g = parse(text).first("homlie").value
    assert g == named_example(key).algebra


@pytest.mark.parametrize("name,key", [("quadratic4.hl", "quadratic4"), ("dim2.hl", "dim2"),
                                      ("dim3a.hl", "dim3(a)"), ("manin_g.hl", "manin-g")])
def test_shipped_data_matches_examples(name, key):
    f = parse_file(DATA / name)
    assert serialize(f) == serialize(example_file(key))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_algebras_and_reps_round_trip(seed):
    rng = random.Random(seed)
    rep = random_rep(rng)
    f = AlgebraFile()
    f.add("homlie", "g", rep.algebra)
    f.add("representation", "v", rep, "g")
    text = serialize(f)
    back = parse(text)
    assert serialize(back) == text
    r2 = back.first("representation").value
    assert linalg.equal(r2.matrices, rep.matrices) and linalg.equal(r2.beta, rep.beta)


def test_ratfunc_values_round_trip():
    a = variable("a")
    f = example_file("dim3(a)")
    back = parse(serialize(f))
    assert back.var == "a"
    assert back.first("homlie").value.twist[2, 2] == 1 / a


def test_associative_block():
    f = AlgebraFile()
    f.add("associative", "A", truncated_polynomials(3))
    back = parse(serialize(f)).first("associative").value
    assert linalg.equal(back.mult, truncated_polynomials(3).mult)


def test_representation_sources():
    text = """format 1
field rational
begin homlie g
dim 2
c 1 2 2 = 1
phi 1 1 = 1
phi 2 1 = 1
phi 2 2 = 1
end
begin representation coad on g
from coadjoint
end
begin representation ad on g
from adjoint 0 1
end
begin representation back on g
from dual coad
end
"""
    f = parse(text)
    g = f.first("homlie").value
    assert linalg.equal(f.blocks["coad"].value.matrices, coadjoint(g).matrices)
    assert linalg.equal(f.blocks["back"].value.matrices, dual_rep(coadjoint(g)).matrices)
    assert "from coadjoint" in serialize(f)


def _error(text):
    with pytest.raises(ParseError) as err:
        parse(text)
    return err.value


def test_dangling_index_reports_position():
    err = _error("format 1\nfield rational\nbegin homlie g\ndim 2\nc 1 3 2 = 1\nend\n")
    assert err.line == 5
    assert "line 5" in str(err)


def test_other_parse_errors():
    header = "format 1\nfield rational\n"
    assert _error(header + "begin frobnicator x\nend\n").line == 3
    assert _error(header + "begin homlie g\ndim 2\nc 1 2 2 = 1/\nend\n").line == 5
    unclosed = _error(header + "begin homlie g\ndim 2\n")
    assert unclosed.line == 3 and "not closed" in unclosed.message
    assert _error(header + "begin rmatrix r\nr 1 2 = 1\nend\n").line == 3
    assert _error("format 9\nfield rational\n").line == 1
    assert _error("format 1\nfield ratfunc a\nbegin homlie g\ndim 1\nphi 1 1 = q\nend\n").line == 5


def test_comments_and_blank_lines_ignored():
    text = "format 1\n# a comment\nfield rational\n\nbegin homlie g  # inline\ndim 1\nend\n"
    assert parse(text).first("homlie").value.dim == 1


def test_rmatrix_is_sparse_and_signed():
    f = parse("format 1\nfield rational\nbegin homlie g\ndim 3\nend\n"
              "begin rmatrix r on g\nr 3 1 = 2\nend\n")
    r = f.first("rmatrix").value
    assert r.coefficient(0, 2) == -2
    assert "r 1 3 = -2" in serialize(f)


def test_random_algebra_serialization_is_canonical():
    rng = random.Random(2)
    for _ in range(10):
        g = random_homlie(rng)
        f = AlgebraFile()
        f.add("homlie", "g", g)
        once = serialize(f)
        assert serialize(parse(once)) == once
