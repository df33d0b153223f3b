"""Shared helpers: sympy conversion and hypothesis strategies."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from hypothesis import strategies as st

from lcsk.algebras import abelian, cur_sl2, neveu_schwarz, virasoro
from lcsk.polyring import DEFAULT_REGISTRY, SPoly

SPECS = Path(__file__).resolve().parent.parent / "specs"

SYMS = {v.name: sympy.Symbol(v.name) for v in (DEFAULT_REGISTRY.partial, *DEFAULT_REGISTRY.spectral)}


def to_sympy(p: SPoly):
    names = [DEFAULT_REGISTRY.partial.name] + [v.name for v in DEFAULT_REGISTRY.spectral]
    out = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for n, e in zip(names, exps):
            term *= SYMS[n] ** e
        out += term
    return sympy.expand(out)


def from_sympy(expr) -> SPoly:
    poly = sympy.Poly(sympy.expand(expr), *SYMS.values())
    out = SPoly.zero()
    for monom, c in poly.terms():
        powers = {n: e for n, e in zip(SYMS, monom) if e}
        out = out + SPoly.monomial(powers, Fraction(int(c.p), int(c.q)))
    return out


BUILTINS = {
    "virasoro": virasoro,
    "neveu-schwarz": neveu_schwarz,
    "cur-sl2": cur_sl2,
    "abelian2": lambda: abelian(2),
}


@pytest.fixture(params=sorted(BUILTINS))
def builtin_alg(request):
    return BUILTINS[request.param]()


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, names=("d", "lam", "mu"), max_terms=4, max_exp=3):
    out = SPoly.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        powers = {n: draw(st.integers(0, max_exp)) for n in names}
        out = out + SPoly.monomial(powers, draw(rationals))
    return out


@st.composite
def d_polys(draw, max_deg=3):
    return draw(polys(names=("d",), max_terms=max_deg + 1, max_exp=max_deg))


def random_d_element(alg, rng, deg=3):
    """x = sum p_i(d) e_i with small random rational coefficients."""
    d = SPoly.var("d", alg.registry)
    coeffs = {}
    for g in alg.generators:
        p = SPoly.zero(alg.registry)
        for a in range(deg + 1):
            p = p + d ** a * Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        coeffs[g] = p
    return alg.element(coeffs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
