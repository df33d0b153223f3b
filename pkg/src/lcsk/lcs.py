"""Finite-rank Lie conformal superalgebras and the lambda-bracket.

An algebra is a free Q[d]-module on named generators e_0..e_{n-1}, each even
or odd, together with structure polynomials

    [e_i _lam e_j] = sum_k S[i][j][k](d, lam) e_k .

Brackets of arbitrary elements follow from conformal sesquilinearity:

    [p(d) e_i _nu q(d) e_j] = p(-nu) q(d + nu) S[i][j](d, lam -> nu).

Every coefficient is a commuting polynomial, so skew-symmetry's
``[y _{-lam-d} x]`` is plain polynomial substitution nu -> -lam - d applied to
``[y _nu x]``; no operator ordering is involved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .linsolve import SolutionSpace, in_span, nullspace, span
from .polyring import DEFAULT_REGISTRY, SCRATCH, SPoly, VarRegistry

EVEN, ODD = 0, 1

PARTIAL = "d"
LAM = "lam"
MU = "mu"
GAM = "gam"


class AlgebraError(ValueError):
    """Raised for structurally invalid algebra data."""


def _parity_value(p) -> int:
    if p in (0, 1):
        return int(p)
    if isinstance(p, str) and p.lower() in ("even", "odd"):
        return 0 if p.lower() == "even" else 1
    raise AlgebraError(f"parity must be even/odd or 0/1, got {p!r}")


@dataclass(frozen=True, eq=False)
class LCSAlgebra:
    name: str
    generators: tuple[str, ...]
    parities: tuple[int, ...]
    structure: tuple[tuple[tuple[SPoly, ...], ...], ...]
    registry: VarRegistry = DEFAULT_REGISTRY

    @property
    def rank(self) -> int:
        return len(self.generators)

    def S(self, i: int, j: int) -> tuple[SPoly, ...]:
        return self.structure[i][j]

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise AlgebraError(f"unknown generator {name!r} in {self.name}") from None

    def gen(self, i: int | str) -> "ConformalElement":
        if isinstance(i, str):
            i = self.index(i)
        coeffs = [SPoly.zero(self.registry)] * self.rank
        coeffs[i] = SPoly.const(1, self.registry)
        return ConformalElement(self, tuple(coeffs))

    def gens(self) -> list["ConformalElement"]:
        return [self.gen(i) for i in range(self.rank)]

    def zero(self) -> "ConformalElement":
        return ConformalElement(self, (SPoly.zero(self.registry),) * self.rank)

    def element(self, coeffs: Mapping[str | int, SPoly | int | Fraction]) -> "ConformalElement":
        out = [SPoly.zero(self.registry)] * self.rank
        for k, c in coeffs.items():
            i = self.index(k) if isinstance(k, str) else k
            out[i] = out[i] + c
        return ConformalElement(self, tuple(out))

    def is_abelian(self) -> bool:
        return all(not p for row in self.structure for vec in row for p in vec)

    def same_table(self, other: "LCSAlgebra") -> bool:
        return (self.parities == other.parities and self.structure == other.structure)

    def __repr__(self) -> str:
        return f"LCSAlgebra({self.name!r}, rank={self.rank})"


def new_algebra(name: str, generators: Sequence[str], parities: Sequence,
                table: Mapping[tuple, Mapping] | None = None,
                registry: VarRegistry = DEFAULT_REGISTRY) -> LCSAlgebra:
    """Build and validate an algebra.

    ``table`` maps generator pairs (names or indices) to ``{generator: poly}``.
    Missing pairs are zero brackets.  Polynomials may only involve d and lam.
    """
    gens = tuple(generators)
    if len(set(gens)) != len(gens):
        raise AlgebraError(f"duplicate generator names in {gens}")
    par = tuple(_parity_value(p) for p in parities)
    if len(par) != len(gens):
        raise AlgebraError("one parity per generator required")
    n = len(gens)

    def idx(k):
        if isinstance(k, int):
            if not 0 <= k < n:
                raise AlgebraError(f"generator index {k} out of range")
            return k
        if k not in gens:
            raise AlgebraError(f"unknown generator {k!r}")
        return gens.index(k)

    zero = SPoly.zero(registry)
    S = [[[zero] * n for _ in range(n)] for _ in range(n)]
    allowed = {PARTIAL, LAM}
    for (a, b), entry in (table or {}).items():
        i, j = idx(a), idx(b)
        for c, poly in entry.items():
            k = idx(c)
            if not isinstance(poly, SPoly):
                poly = SPoly.const(poly, registry)
            if poly.registry is not registry:
                raise AlgebraError("structure polynomial over a foreign registry")
            extra = poly.variables() - allowed
            if extra:
                raise AlgebraError(
                    f"structure polynomial for [{gens[i]}_lam {gens[j]}] uses {sorted(extra)}; "
                    "only d and lam are allowed")
            S[i][j][k] = S[i][j][k] + poly
    for i, j, k in itertools.product(range(n), repeat=3):
        if S[i][j][k] and par[k] != (par[i] + par[j]) % 2:
            raise AlgebraError(
                f"parity violation at ({i},{j},{k}): [{gens[i]}_lam {gens[j]}] has a "
                f"{'odd' if par[k] else 'even'} component on {gens[k]}")
    structure = tuple(tuple(tuple(S[i][j]) for j in range(n)) for i in range(n))
    return LCSAlgebra(name, gens, par, structure, registry)


@dataclass(frozen=True, eq=False)
class ConformalElement:
    algebra: LCSAlgebra
    coeffs: tuple[SPoly, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.rank:
            raise AlgebraError("coefficient vector length differs from the rank")

    @property
    def parity(self) -> str:
        seen = {self.algebra.parities[i] for i, c in enumerate(self.coeffs) if c}
        if len(seen) == 2:
            return "mixed"
        return "odd" if seen == {ODD} else "even"

    @property
    def parity_bit(self) -> int:
        p = self.parity
        if p == "mixed":
            raise AlgebraError("element is not homogeneous")
        return 1 if p == "odd" else 0

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other: "ConformalElement"):
        if other.algebra is not self.algebra:
            raise AlgebraError("elements of different algebras")

    def __add__(self, other: "ConformalElement") -> "ConformalElement":
        self._check(other)
        return ConformalElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ConformalElement") -> "ConformalElement":
        self._check(other)
        return ConformalElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ConformalElement":
        return ConformalElement(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, p: SPoly | int | Fraction) -> "ConformalElement":
        """Multiply every coefficient by ``p`` (a module action when p is in d)."""
        return ConformalElement(self.algebra, tuple(a * p for a in self.coeffs))

    __rmul__ = scale

    def substitute(self, var: str, expr) -> "ConformalElement":
        return ConformalElement(self.algebra, tuple(a.substitute(var, expr) for a in self.coeffs))

    def variables(self) -> set[str]:
        out: set[str] = set()
        for c in self.coeffs:
            out |= c.variables()
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ConformalElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def render(self, names: Mapping[str, str] | None = None) -> str:
        parts = []
        for g, c in zip(self.algebra.generators, self.coeffs):
            if not c:
                continue
            s = c.render(names)
            if len(c.terms) > 1:
                s = f"({s})"
            parts.append(f"{s} {g}" if s not in ("1", "-1") else f"{s[:-1]}{g}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"<{self.render()}>"


# ---------------------------------------------------------------------------
# bracket evaluation

Table = Callable[[int, int], Sequence[SPoly]]


def fresh_scratch(*used: Iterable[str]) -> str:
    taken = set()
    for u in used:
        taken |= set(u)
    for name in SCRATCH:
        if name not in taken:
            return name
    raise RuntimeError("no free scratch variable")


def _as_poly(at, registry: VarRegistry) -> tuple[str | None, SPoly]:
    if isinstance(at, str):
        return at, SPoly.var(at, registry)
    if not isinstance(at, SPoly):
        at = SPoly.const(at, registry)
    if at.degree() == 1 and len(at.terms) == 1 and 1 in at.terms.values():
        (name,) = at.variables()
        return name, at
    return None, at


def sesqui_eval(table: Table, alg: LCSAlgebra, x: ConformalElement, y: ConformalElement,
                at) -> ConformalElement:
    """Evaluate a sesquilinear product given by ``table(i, j)`` on elements.

    ``table(i, j)`` returns the coefficient vector for the pair of generators
    as polynomials in (d, lam).  ``at`` is a spectral variable name or an
    affine polynomial; compound parameters go through a scratch variable.
    """
    if x.algebra is not alg or y.algebra is not alg:
        raise AlgebraError("elements do not belong to the algebra")
    reg = alg.registry
    name, atp = _as_poly(at, reg)
    if name is None or name in x.variables() or name in y.variables():
        nu = fresh_scratch(x.variables(), y.variables(), atp.variables())
        return sesqui_eval(table, alg, x, y, nu).substitute(nu, atp)
    if name == PARTIAL:
        raise AlgebraError("the bracket parameter must be a spectral variable")
    n = alg.rank
    zero = SPoly.zero(reg)
    left = [c.substitute(PARTIAL, -atp) if c else zero for c in x.coeffs]
    right = [c.substitute(PARTIAL, SPoly.var(PARTIAL, reg) + atp) if c else zero for c in y.coeffs]
    out = [zero] * n
    for i in range(n):
        if not left[i]:
            continue
        for j in range(n):
            if not right[j]:
                continue
            vec = table(i, j)
            if not any(vec):
                continue
            f = left[i] * right[j]
            for k, s in enumerate(vec):
                if s:
                    if name != LAM:
                        s = s.substitute(LAM, atp)
                    out[k] = out[k] + f * s
    return ConformalElement(alg, tuple(out))


def bracket(x: ConformalElement, y: ConformalElement, at=LAM) -> ConformalElement:
    """[x _at y] via the sesquilinearity substitution rule."""
    alg = x.algebra
    return sesqui_eval(alg.S, alg, x, y, at)


def bracket_termwise(x: ConformalElement, y: ConformalElement, at=LAM) -> ConformalElement:
    """Independent evaluator used as a differential oracle for :func:`bracket`.

    Splits x and y into monomial*generator terms, applies the right rule
    (multiply by d+nu once per power of d) and then the left rule (multiply
    by -nu per power of d), never substituting into d.
    """
    alg = x.algebra
    if y.algebra is not alg:
        raise AlgebraError("elements of different algebras")
    reg = alg.registry
    name, atp = _as_poly(at, reg)
    if name is None or name in x.variables() or name in y.variables():
        nu = fresh_scratch(x.variables(), y.variables(), atp.variables())
        return bracket_termwise(x, y, nu).substitute(nu, atp)
    di = reg.index(PARTIAL)
    dvar = SPoly.var(PARTIAL, reg)
    out = [SPoly.zero(reg)] * alg.rank
    for j, q in enumerate(y.coeffs):
        for qexp, qc in q.terms.items():
            b = qexp[di]
            qrest = SPoly({qexp[:di] + (0,) + qexp[di + 1:]: qc}, reg)
            for i, p in enumerate(x.coeffs):
                for pexp, pc in p.terms.items():
                    a = pexp[di]
                    prest = SPoly({pexp[:di] + (0,) + pexp[di + 1:]: pc}, reg)
                    for k, s in enumerate(alg.S(i, j)):
                        if not s:
                            continue
                        term = s.substitute(LAM, atp) if name != LAM else s
                        for _ in range(b):
                            term = (dvar + atp) * term
                        for _ in range(a):
                            term = term * (-atp)
                        out[k] = out[k] + term * qrest * prest
    return ConformalElement(alg, tuple(out))


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomReport:
    name: str
    residuals: list[tuple[str, ConformalElement]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.residuals

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "residuals": [{"context": c, "residual": r.render()} for c, r in self.residuals],
        }

    def render(self) -> str:
        head = f"{self.name}: {'PASS' if self.passed else 'FAIL'}"
        lines = [head] + [f"  {c}: {r.render()}" for c, r in self.residuals]
        return "\n".join(lines)


def sign(*bits: int) -> int:
    return -1 if sum(bits) % 2 else 1


def skew_residual(alg: LCSAlgebra, i: int, j: int) -> ConformalElement:
    reg = alg.registry
    ei, ej = alg.gen(i), alg.gen(j)
    lhs = bracket(ei, ej, LAM)
    swapped = bracket(ej, ei, MU).substitute(MU, -SPoly.var(LAM, reg) - SPoly.var(PARTIAL, reg))
    s = sign(alg.parities[i] * alg.parities[j])
    return lhs + swapped.scale(s)


def check_skew(alg: LCSAlgebra) -> AxiomReport:
    rep = AxiomReport("skew-symmetry")
    for i, j in itertools.product(range(alg.rank), repeat=2):
        r = skew_residual(alg, i, j)
        if not r.is_zero():
            rep.residuals.append((f"({alg.generators[i]},{alg.generators[j]})", r))
    return rep


def jacobi_residual(alg: LCSAlgebra, i: int, j: int, k: int) -> ConformalElement:
    reg = alg.registry
    x, y, z = alg.gen(i), alg.gen(j), alg.gen(k)
    lam_mu = SPoly.var(LAM, reg) + SPoly.var(MU, reg)
    lhs = bracket(x, bracket(y, z, MU), LAM)
    r1 = bracket(bracket(x, y, LAM), z, lam_mu)
    r2 = bracket(y, bracket(x, z, LAM), MU)
    s = sign(alg.parities[i] * alg.parities[j])
    return lhs - r1 - r2.scale(s)


def check_jacobi(alg: LCSAlgebra) -> AxiomReport:
    rep = AxiomReport("jacobi")
    g = alg.generators
    for i, j, k in itertools.product(range(alg.rank), repeat=3):
        r = jacobi_residual(alg, i, j, k)
        if not r.is_zero():
            rep.residuals.append((f"({g[i]},{g[j]},{g[k]})", r))
    return rep


def is_valid(alg: LCSAlgebra) -> bool:
    return check_skew(alg).passed and check_jacobi(alg).passed


# ---------------------------------------------------------------------------
# degree-bounded linear solves over module elements


def flatten(polys: Iterable[SPoly], tag=()) -> dict:
    """Sparse coordinate vector keyed by (tag, position, exponents)."""
    out = {}
    for pos, p in enumerate(polys):
        for exps, c in p.terms.items():
            out[(tag, pos, exps)] = c
    return out


def kernel_of(columns: Sequence[Mapping]) -> SolutionSpace:
    """Kernel of the linear map whose images of unit vectors are ``columns``."""
    rows: dict = {}
    for u, col in enumerate(columns):
        for key, c in col.items():
            rows.setdefault(key, {})[u] = c
    return nullspace([rows[k] for k in sorted(rows, key=repr)], cols=len(columns))


def element_ansatz(alg: LCSAlgebra, deg_d: int) -> list[ConformalElement]:
    """Unknown basis d^a e_i, generator-major."""
    dvar = SPoly.var(PARTIAL, alg.registry)
    return [alg.gen(i).scale(dvar ** a) for i in range(alg.rank) for a in range(deg_d + 1)]


def combine(elements: Sequence[ConformalElement], coeffs: Sequence[Fraction],
            alg: LCSAlgebra) -> ConformalElement:
    out = alg.zero()
    for c, e in zip(coeffs, elements):
        if c:
            out = out + e.scale(c)
    return out


@dataclass
class ElementSpace:
    """Solutions x = sum p_i(d) e_i with deg p_i <= deg_d."""

    kind: str
    deg_d: int
    space: SolutionSpace
    elements: list[ConformalElement]

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def note(self) -> str:
        return f"complete only for coefficient degree <= {self.deg_d}"


def centralizer(alg: LCSAlgebra, S: Sequence[ConformalElement], deg_d: int) -> ElementSpace:
    if deg_d < 0:
        raise ValueError("degree bound must be non-negative")
    unknowns = element_ansatz(alg, deg_d)
    columns = []
    for u in unknowns:
        col = {}
        for t, y in enumerate(S):
            col.update(flatten(bracket(u, y, LAM).coeffs, t))
        columns.append(col)
    space = kernel_of(columns)
    elems = [combine(unknowns, v, alg) for v in space.basis]
    return ElementSpace("centralizer", deg_d, space, elems)


def center(alg: LCSAlgebra, deg_d: int) -> ElementSpace:
    res = centralizer(alg, alg.gens(), deg_d)
    res.kind = "center"
    return res


@dataclass
class PerfectResult:
    perfect: bool
    deg_d: int
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.perfect


def derived_generators(alg: LCSAlgebra) -> list[ConformalElement]:
    """The lam-coefficients of all generator brackets (elements over Q[d])."""
    out = []
    for i, j in itertools.product(range(alg.rank), repeat=2):
        by_power: dict = {}
        for k, s in enumerate(alg.S(i, j)):
            for key, c in s.monomial_coeffs([LAM]).items():
                by_power.setdefault(key, [SPoly.zero(alg.registry)] * alg.rank)[k] = c
        for key in sorted(by_power):
            out.append(ConformalElement(alg, tuple(by_power[key])))
    return out


def is_perfect(alg: LCSAlgebra, deg_d: int) -> PerfectResult:
    """Does every generator lie in the Q[d]-span of the derived generators?

    Multipliers are limited to d-degree <= deg_d.
    """
    if deg_d < 0:
        raise ValueError("degree bound must be non-negative")
    dvar = SPoly.var(PARTIAL, alg.registry)
    spanning = [g.scale(dvar ** a) for g in derived_generators(alg) for a in range(deg_d + 1)]
    maxdeg = max([p.degree(PARTIAL) for e in spanning for p in e.coeffs if p] + [0])
    di = alg.registry.index(PARTIAL)

    def vec(e: ConformalElement) -> list[Fraction]:
        v = [Fraction(0)] * (alg.rank * (maxdeg + 1))
        for k, p in enumerate(e.coeffs):
            for exps, c in p.terms.items():
                v[k * (maxdeg + 1) + exps[di]] += c
        return v

    space = span([vec(e) for e in spanning], alg.rank * (maxdeg + 1))
    for i in range(alg.rank):
        if in_span(vec(alg.gen(i)), space) is None:
            return PerfectResult(False, deg_d, alg.generators[i])
    return PerfectResult(True, deg_d)
