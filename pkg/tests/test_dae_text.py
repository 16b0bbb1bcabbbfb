import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from daestruct import (
    DaeSyntaxError,
    DuplicateEntry,
    FormatError,
    IndexOutOfRange,
    NonSquare,
    SignatureMatrix,
    UndeclaredVariable,
    parse_dae,
    read_sigfile,
    signature_of,
    write_sigfile,
)
from daestruct.dae_text import BinOp, Call, Der, Pow, Var

from .conftest import E1_TRIPLES, E6_TRIPLES, example_system

EX1 = (
    "vars: x1, x2, x3\n"
    "f1 = der(x1,2) + x3 + u1(t)\n"
    "f2 = der(x2) + x3 + u2(t)\n"
    "f3 = x1^2 + x2^2 + u3(t)"
)


class TestParse:
    def test_example_1(self):
        system = parse_dae(EX1)
        assert system.vars == ("x1", "x2", "x3")
        assert system.equation_names == ("f1", "f2", "f3")
        f1 = system.equations[0].expr
        assert isinstance(f1, BinOp) and f1.op == "+"
        assert f1.left.left == Der("x1", 2)
        assert f1.right == Call("u1", (Var("t"),))
        assert system.equations[2].expr.left.left == Pow(Var("x1"), 2)

    def test_minimal(self):
        system = parse_dae("vars: x\nf = x")
        assert len(system.vars) == 1 and len(system.equations) == 1
        assert system.equations[0].expr == Var("x")

    def test_unnamed_equations_and_comments(self):
        system = parse_dae("# header\nvars: a, b  # two unknowns\na*b - 1\nder(a) + b")
        assert system.equation_names == ("f1", "f2")

    def test_undeclared_derivative(self):
        with pytest.raises(UndeclaredVariable) as info:
            parse_dae("vars: x\nf = der(y)")
        assert info.value.name == "y"

    def test_non_square(self):
        with pytest.raises(NonSquare):
            parse_dae("vars: x, y\nf = x + y")

    @pytest.mark.parametrize("text, line, col", [
        ("vars: x\nf = x +", 2, 8),
        ("vars: x\nf = der(der(x))", 2, 9),
        ("vars: x\nf = der(x, 0)", 2, 12),
        ("vars: x\nf = x $ 2", 2, 7),
        ("vars x\nf = x", 1, 6),
    ])
    def test_syntax_errors_carry_location(self, text, line, col):
        with pytest.raises(DaeSyntaxError) as info:
            parse_dae(text)
        assert (info.value.line, info.value.col) == (line, col)

    def test_equation_spanning_lines(self):
        system = parse_dae("vars: x, y\nf = x\n  + der(y, 3)\ng = y")
        assert signature_of(system) == SignatureMatrix(2, [(0, 0, 0), (0, 1, 3), (1, 1, 0)])


class TestSignatureOf:
    def test_example_1(self):
        assert signature_of(parse_dae(EX1)) == SignatureMatrix(3, E1_TRIPLES)

    def test_example_3(self):
        assert signature_of(example_system("ex3.dae")) == SignatureMatrix(6, E6_TRIPLES)

    def test_highest_order_wins(self):
        sigma = signature_of(parse_dae("vars: x\nf = x + der(x,3) + x^2"))
        assert sigma == SignatureMatrix(1, [(0, 0, 3)])

    def test_known_functions_do_not_enter(self):
        sigma = signature_of(parse_dae("vars: x, y\nf = u(t) * x + k\ng = sin(der(y, 2)) - x"))
        assert sigma == SignatureMatrix(2, [(0, 0, 0), (1, 0, 0), (1, 1, 2)])

    @given(st.permutations(["x", "der(y)", "der(x,2)", "y^3", "u(t)"]))
    def test_invariant_under_reassociation(self, terms):
        text = "vars: x, y\nf = " + " + ".join(terms) + "\ng = (" + ") * (".join(terms) + ")"
        sigma = signature_of(parse_dae(text))
        assert sigma == SignatureMatrix(2, [(0, 0, 2), (0, 1, 1), (1, 0, 2), (1, 1, 1)])


class TestSigfile:
    def test_read_example(self):
        doc = '{"n":3,"entries":[[0,0,2],[0,2,0],[1,1,1],[1,2,0],[2,0,0],[2,1,0]]}'
        assert read_sigfile(doc) == SignatureMatrix(3, E1_TRIPLES)

    def test_empty_entries_parse(self):
        sigma = read_sigfile('{"n":1,"entries":[]}')
        assert sigma.n == 1 and sigma.nnz == 0

    def test_duplicate(self):
        with pytest.raises(DuplicateEntry):
            read_sigfile('{"n":2,"entries":[[0,0,1],[0,0,2]]}')

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRange) as info:
            read_sigfile('{"n":2,"entries":[[0,0,1],[2,0,2]]}')
        assert info.value.location == "$.entries[1]"

    @pytest.mark.parametrize("doc", [
        '{"n":2}',
        '{"n":2,"entries":[[0,0]]}',
        '{"n":2,"entries":[[0,0,true]]}',
        '{"n":0,"entries":[]}',
        '{"n":2,"entries":[],"extra":1}',
        '[1,2]',
        '{"n":2,',
    ])
    def test_format_errors(self, doc):
        with pytest.raises(FormatError):
            read_sigfile(doc)

    def test_canonical_write(self, e1):
        text = write_sigfile(e1)
        assert text == '{"n": 3, "entries": [[0, 0, 2], [0, 2, 0], [1, 1, 1], [1, 2, 0], [2, 0, 0], [2, 1, 0]]}\n'
        assert write_sigfile(read_sigfile(text)) == text

    def test_unsorted_input_canonicalises(self):
        doc = json.dumps({"n": 2, "entries": [[1, 1, 0], [0, 1, 3], [0, 0, 1]]})
        assert json.loads(write_sigfile(read_sigfile(doc)))["entries"] == [[0, 0, 1], [0, 1, 3], [1, 1, 0]]

    @given(st.integers(1, 6).flatmap(lambda n: st.tuples(
        st.just(n),
        st.dictionaries(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                        st.integers(-5, 9)))))
    def test_roundtrip(self, case):
        n, entries = case
        sigma = SignatureMatrix(n, entries)
        assert read_sigfile(write_sigfile(sigma)) == sigma
