from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SPECS
from lcsk.algebras import neveu_schwarz, virasoro
from lcsk.lcs import check_skew
from lcsk.polyring import SPoly
from lcsk.specfile import (
    AlgebraSpecFile,
    CoefficientSpec,
    SpecError,
    element_from_expr,
    parse_spec,
    render_spec,
    spec_from_algebra,
)

d, lam = SPoly.var("d"), SPoly.var("lam")
SHIPPED = sorted(SPECS.glob("*.lcs"))


def _spec(brackets: str, gens='L = "even"') -> str:
    return f'name = "t"\n[generators]\n{gens}\n[brackets]\n{brackets}\n'


def test_virasoro_entry():
    s = parse_spec(_spec('"L,L" = "(d + 2*x) L"'))
    assert s.brackets == {("L", "L"): {"L": d + 2 * lam}}
    assert s.to_algebra().same_table(virasoro())


def test_empty_brackets_give_abelian():
    assert parse_spec(_spec("")).to_algebra().is_abelian()


def test_rational_literal():
    s = parse_spec(_spec('"L,G" = "(d + 3/2*x) G"', 'L = "even"\nG = "odd"'))
    assert s.brackets[("L", "G")]["G"] == d + Fraction(3, 2) * lam


def test_precedence_and_power():
    s = parse_spec(_spec('"L,L" = "(d + x)^2 L - 2*d*x L + -x^2 L"'))
    assert s.brackets[("L", "L")]["L"] == d ** 2


def test_shipped_ns_matches_builtin():
    spec = parse_spec((SPECS / "neveu_schwarz.lcs").read_text())
    assert spec.to_algebra().same_table(neveu_schwarz())


@pytest.mark.parametrize("path", SHIPPED, ids=lambda p: p.name)
def test_shipped_round_trip(path):
    spec = parse_spec(path.read_text())
    text = render_spec(spec)
    assert parse_spec(text) == spec
    assert render_spec(parse_spec(text)) == text


@pytest.mark.parametrize("text, where, what", [
    (_spec('"L,L" = "(d + 2*x L"'), "line 5", ""),
    (_spec('"L,L" = "L (d + 2*x)"'), "line 5", "rightmost"),
    (_spec('"L,M" = "d L"'), "line 5", "unknown generator"),
    (_spec('"L,L" = "d Q"'), "line 5", ""),
    (_spec('"L,L" = "d G"', 'L = "even"\nG = "odd"'), "line 6", "parity"),
    (_spec('"L,L" = "d $ L"'), "line 5, column", "unexpected character"),
    ('name = "t"\n[generators]\nL = "weird"\n', "line 3", "parity"),
    ('name = "t"\n[nonsense]\n', "line 2", "unknown section"),
])
def test_errors_carry_location(text, where, what):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    msg = str(info.value)
    assert where in msg and what in msg


def test_parity_message_reads_well():
    with pytest.raises(SpecError, match="has an odd component on G"):
        parse_spec(_spec('"L,L" = "d G"', 'L = "even"\nG = "odd"'))


def test_element_from_expr():
    V = virasoro()
    assert element_from_expr(V, "(d + 1/2) L") == V.gen(0).scale(d + Fraction(1, 2))


def test_spec_from_algebra_reproduces_table():
    spec = spec_from_algebra(neveu_schwarz())
    again = parse_spec(render_spec(spec))
    assert again.to_algebra().same_table(neveu_schwarz())
    assert check_skew(again.to_algebra()).passed


def test_qxq_coefficients():
    A = parse_spec((SPECS / "virasoro_qxq.lcs").read_text()).coefficient_algebra()
    assert A.dim == 2 and A.unit == (1, 1)


# ---------------------------------------------------------------------------
# fuzzing: random valid spec files round-trip exactly

NAMES = ["L", "G", "H", "E", "F1", "a_2"]


@st.composite
def poly_dx(draw):
    out = SPoly.zero()
    for _ in range(draw(st.integers(0, 3))):
        c = draw(st.fractions(min_value=-9, max_value=9, max_denominator=5))
        out = out + c * d ** draw(st.integers(0, 3)) * lam ** draw(st.integers(0, 3))
    return out


@st.composite
def spec_files(draw):
    n = draw(st.integers(0, 3))
    names = draw(st.permutations(NAMES))[:n]
    pars = [draw(st.sampled_from(["even", "odd"])) for _ in names]
    par = dict(zip(names, pars))
    brackets = {}
    for a in names:
        for b in names:
            want = "odd" if par[a] != par[b] else "even"
            entry = {g: draw(poly_dx()) for g in names if par[g] == want and draw(st.booleans())}
            entry = {g: p for g, p in entry.items() if p}
            if entry:
                brackets[(a, b)] = entry
    coeffs = draw(st.one_of(st.none(), st.integers(1, 4).map(lambda N: CoefficientSpec(quotient=N))))
    bounds = draw(st.fixed_dictionaries({}, optional={"deg_d": st.integers(0, 5), "deg_l": st.integers(0, 5)}))
    name = draw(st.from_regex(r"[a-z][a-z0-9\-]{0,10}", fullmatch=True))
    return AlgebraSpecFile(name, tuple(zip(names, pars)), brackets, coeffs, bounds)


@settings(max_examples=100, deadline=None)
@given(spec_files())
def test_fuzzed_round_trip(spec):
    text = render_spec(spec)
    parsed = parse_spec(text)
    assert parsed == spec
    assert render_spec(parsed) == text
