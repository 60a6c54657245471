import numpy as np
import pytest

from core.errors import DomainError
from formal import (
    AngleUnderline,
    Entry,
    FormalMonomial,
    ParseError,
    Underline,
    exponents,
    format_monomial,
    nu_counters,
    parse_lines,
    parse_monomial,
    random_monomial,
)

EXAMPLE = ("N^{α+1} E[u(G,3)] E[u(B*,4)] E[e(A,2,i1,i2) e(B,2,i3,i3) e(A,2,i2,i4)] "
           "E[e(A,1,i6,i1) e(B,1,i5,i6) au(A,7)]")


def test_parse_structure():
    P = parse_monomial(EXAMPLE)
    assert P.t0 == 1.0 and P.t_alpha == 1.0
    assert len(P.factors) == 4
    assert P.factors[0] == (Underline("G", 3),)
    assert P.factors[3][2] == AngleUnderline("A", 7)
    assert P.factors[2][1] == Entry("B", 2, 3, 3)
    assert P.n == 6


def test_example_counters_and_exponents():
    P = parse_monomial(EXAMPLE)
    assert nu_counters(P) == (5, 9, 2, 1, 2, 3)
    r = exponents(P, 0.5, 0.5)
    assert (r.b0, r.b1, r.b, r.bstar) == (6.25, 3.75, -3.5, 2.25)
    assert r.t == 1.5
    assert r.chi == 0.25
    assert r.chi_tilde == 0.0


def test_two_traces_monomial():
    P = parse_monomial("N^0 E[au(G,1) au(F*,1)]")
    for alpha, beta_exp in [(0.5, 0.5), (0.7, 0.2)]:
        r = exponents(P, alpha, beta_exp)
        assert r.bstar == pytest.approx(2 * beta_exp - 2)
        assert r.b0 == pytest.approx(2 * alpha - 2)


def test_exponent_domain():
    P = parse_monomial("N^0 E[u(G,1)]")
    with pytest.raises(DomainError):
        exponents(P, 0.3, 0.5)
    with pytest.raises(DomainError):
        exponents(P, 1.0, 0.5)


@pytest.mark.parametrize("text, t0, t_alpha", [
    ("N^-1.5 E[u(G,1)]", -1.5, 0.0),
    ("N^{2α-1} E[u(G,1)]", -1.0, 2.0),
    ("N^{alpha} E[u(G,1)]", 0.0, 1.0),
    ("N^{1 - 0.5*a} E[u(G,1)]", 1.0, -0.5),
])
def test_exponent_forms(text, t0, t_alpha):
    P = parse_monomial(text)
    assert (P.t0, P.t_alpha) == (t0, t_alpha)


def test_canonical_text_round_trip():
    P = parse_monomial("N^{ -α + 2 }  E[ e(F*,2,i1,i2)  au(G,1) ]")
    text = format_monomial(P)
    assert text == "N^{-α+2} E[e(F*,2,i1,i2) au(G,1)]"
    assert parse_monomial(text) == P


def test_random_corpus_ordering():
    rng = np.random.default_rng(3)
    for _ in range(200):
        P = random_monomial(rng)
        assert parse_monomial(format_monomial(P)) == P
        r = exponents(P, 0.6, 0.3)
        assert r.b0 >= r.b - 1e-12
        assert r.b0 >= r.bstar - 1e-12


@pytest.mark.parametrize("text, column, expected", [
    ("E[u(G,1)]", 1, "N^"),
    ("N^0 E[u(g,1)]", 9, "label"),
    ("N^0 E[u(G,0)]", 11, "positive integer"),
    ("N^0 E[e(G,1,j1,i2)]", 13, "i<INT>"),
    ("N^0 E[u(G,1)", 13, "]"),
    ("N^0 E[x(G,1)]", 7, "u("),
])
def test_parse_errors_carry_position(text, column, expected):
    with pytest.raises(ParseError) as info:
        parse_monomial(text)
    err = info.value
    assert err.line == 1
    assert err.column == column
    assert expected in err.expected


def test_restricted_labels():
    assert parse_monomial("N^0 E[u(G*,1)]", labels=["G", "G*"])
    with pytest.raises(ParseError) as info:
        parse_monomial("N^0 E[u(A,1)]", labels=["G", "G*"])
    assert info.value.expected == frozenset({"G", "G*"})


def test_parse_lines_reports_line_numbers():
    lines = ["# header", "N^0 E[u(G,1)]", "", "N^0 E[u(G,1)", "N^1 E[au(F,2)]"]
    out = parse_lines(lines)
    assert [n for n, _ in out] == [2, 4, 5]
    assert isinstance(out[0][1], FormalMonomial)
    assert isinstance(out[1][1], ParseError)
    assert out[1][1].line == 4
    assert out[1][1].to_dict()["line"] == 4
