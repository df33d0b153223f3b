"""Conformal linear and bilinear maps, their solvers, and structural verifiers.

Linear maps come in two conventions:

* ``partial``: entries in Q[d], alpha(d x) = d alpha(x).  The identity is a
  centroid element only under this reading, so it is the default.
* ``shifted``: entries in Q[d, lam], alpha_lam(d x) = (d + lam) alpha_lam(x).

Bilinear maps obey the same sesquilinearity as the bracket:
phi_lam(d x, y) = -lam phi_lam(x, y) and phi_lam(x, d y) = (d + lam) phi_lam(x, y).

All solvers use a degree-bounded ansatz.  Every residual is linear in the
unknown map, so a solver evaluates the residual on each elementary map, reads
off coefficients of every monomial, and takes the exact kernel.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .current import CommutativeAlgebra, tensor_current
from .lcs import (
    GAM, LAM, MU, PARTIAL, AlgebraError, ConformalElement, LCSAlgebra, bracket,
    center, flatten, is_perfect, kernel_of, sesqui_eval, sign,
)
from .linsolve import SolutionSpace, solve_combination
from .polyring import SPoly

PARTIAL_CONV = "partial"
SHIFTED_CONV = "shifted"


def _var(name: str, alg: LCSAlgebra) -> SPoly:
    return SPoly.var(name, alg.registry)


# ---------------------------------------------------------------------------
# map types


@dataclass(frozen=True, eq=False)
class LinearConfMap:
    algebra: LCSAlgebra
    matrix: tuple[tuple[SPoly, ...], ...]  # matrix[k][i]: coefficient of e_k in alpha(e_i)
    parity: int = 0
    convention: str = PARTIAL_CONV

    def __post_init__(self):
        alg = self.algebra
        if self.convention not in (PARTIAL_CONV, SHIFTED_CONV):
            raise ValueError(f"unknown convention {self.convention!r}")
        allowed = {PARTIAL} if self.convention == PARTIAL_CONV else {PARTIAL, LAM}
        for k, i in itertools.product(range(alg.rank), repeat=2):
            p = self.matrix[k][i]
            if not p:
                continue
            if alg.parities[k] != (alg.parities[i] + self.parity) % 2:
                raise AlgebraError(f"entry ({k},{i}) breaks parity {self.parity}")
            if p.variables() - allowed:
                raise AlgebraError(f"entry ({k},{i}) uses variables outside {sorted(allowed)}")

    def vector(self) -> dict:
        out = {}
        for k, row in enumerate(self.matrix):
            for i, p in enumerate(row):
                for exps, c in p.terms.items():
                    out[(k, i, exps)] = c
        return out

    def is_zero(self) -> bool:
        return not any(p for row in self.matrix for p in row)

    def render(self) -> str:
        g = self.algebra.generators
        parts = []
        for i in range(self.algebra.rank):
            img = ConformalElement(self.algebra, tuple(self.matrix[k][i] for k in range(self.algebra.rank)))
            parts.append(f"{g[i]} -> {img.render()}")
        return "; ".join(parts)


@dataclass(frozen=True, eq=False)
class BilinearConfMap:
    algebra: LCSAlgebra
    tensor: tuple[tuple[tuple[SPoly, ...], ...], ...]  # tensor[i][j][k]
    parity: int = 0

    def __post_init__(self):
        alg = self.algebra
        for i, j, k in itertools.product(range(alg.rank), repeat=3):
            p = self.tensor[i][j][k]
            if not p:
                continue
            if alg.parities[k] != (alg.parities[i] + alg.parities[j] + self.parity) % 2:
                raise AlgebraError(f"entry ({i},{j},{k}) breaks parity {self.parity}")
            if p.variables() - {PARTIAL, LAM}:
                raise AlgebraError(f"entry ({i},{j},{k}) uses variables other than d, lam")

    def table(self, i: int, j: int):
        return self.tensor[i][j]

    def vector(self) -> dict:
        out = {}
        for i, row in enumerate(self.tensor):
            for j, vec in enumerate(row):
                for k, p in enumerate(vec):
                    for exps, c in p.terms.items():
                        out[(i, j, k, exps)] = c
        return out

    def is_zero(self) -> bool:
        return not any(p for row in self.tensor for vec in row for p in vec)

    def render(self) -> str:
        g = self.algebra.generators
        parts = []
        for i, j in itertools.product(range(self.algebra.rank), repeat=2):
            img = ConformalElement(self.algebra, self.tensor[i][j])
            if not img.is_zero():
                parts.append(f"({g[i]},{g[j]}) -> {img.render()}")
        return "; ".join(parts) or "0"


def identity_map(alg: LCSAlgebra) -> LinearConfMap:
    one, zero = SPoly.const(1, alg.registry), SPoly.zero(alg.registry)
    return LinearConfMap(alg, tuple(tuple(one if k == i else zero for i in range(alg.rank))
                                    for k in range(alg.rank)))


def zero_linear(alg: LCSAlgebra, parity: int = 0, convention: str = PARTIAL_CONV) -> LinearConfMap:
    zero = SPoly.zero(alg.registry)
    return LinearConfMap(alg, tuple((zero,) * alg.rank for _ in range(alg.rank)), parity, convention)


def zero_bilinear(alg: LCSAlgebra, parity: int = 0) -> BilinearConfMap:
    zero = SPoly.zero(alg.registry)
    n = alg.rank
    return BilinearConfMap(alg, tuple(tuple((zero,) * n for _ in range(n)) for _ in range(n)), parity)


def bracket_map(alg: LCSAlgebra) -> BilinearConfMap:
    return BilinearConfMap(alg, alg.structure, 0)


def apply_linear(m: LinearConfMap, x: ConformalElement, at: str = LAM) -> ConformalElement:
    alg = m.algebra
    if x.algebra is not alg:
        raise AlgebraError("element does not belong to the map's algebra")
    zero = SPoly.zero(alg.registry)
    coeffs = x.coeffs
    atp = _var(at, alg)
    matrix = m.matrix
    if m.convention == SHIFTED_CONV:
        if at in x.variables():
            raise AlgebraError(f"element already depends on {at}")
        coeffs = tuple(c.substitute(PARTIAL, _var(PARTIAL, alg) + atp) if c else c for c in coeffs)
        if at != LAM:
            matrix = tuple(tuple(p.substitute(LAM, atp) if p else p for p in row) for row in matrix)
    out = []
    for k in range(alg.rank):
        acc = zero
        for i, c in enumerate(coeffs):
            if c and matrix[k][i]:
                acc = acc + matrix[k][i] * c
        out.append(acc)
    return ConformalElement(alg, tuple(out))


def apply_bilinear(m: BilinearConfMap, x: ConformalElement, y: ConformalElement, at=LAM) -> ConformalElement:
    return sesqui_eval(m.table, m.algebra, x, y, at)


def compose_with_bracket(alpha: LinearConfMap) -> BilinearConfMap:
    """The bilinear map (x, y) -> alpha([x _lam y])."""
    alg = alpha.algebra
    n = alg.rank
    tensor = tuple(tuple(apply_linear(alpha, ConformalElement(alg, alg.S(i, j)), LAM).coeffs
                         if alpha.convention == PARTIAL_CONV
                         else _compose_shifted(alpha, i, j)
                         for j in range(n)) for i in range(n))
    return BilinearConfMap(alg, tensor, alpha.parity)


def _compose_shifted(alpha: LinearConfMap, i: int, j: int):
    alg = alpha.algebra
    w = ConformalElement(alg, alg.S(i, j)).substitute(LAM, _var(MU, alg))
    return apply_linear(alpha, w, LAM).substitute(MU, _var(LAM, alg)).coeffs


def combine_linear(maps: Sequence[LinearConfMap], coeffs: Sequence[Fraction],
                   alg: LCSAlgebra, parity: int, convention: str) -> LinearConfMap:
    n = alg.rank
    M = [[SPoly.zero(alg.registry)] * n for _ in range(n)]
    for c, m in zip(coeffs, maps):
        if c:
            for k, i in itertools.product(range(n), repeat=2):
                if m.matrix[k][i]:
                    M[k][i] = M[k][i] + m.matrix[k][i] * c
    return LinearConfMap(alg, tuple(tuple(r) for r in M), parity, convention)


def combine_bilinear(maps: Sequence[BilinearConfMap], coeffs: Sequence[Fraction],
                     alg: LCSAlgebra, parity: int) -> BilinearConfMap:
    n = alg.rank
    T = [[[SPoly.zero(alg.registry)] * n for _ in range(n)] for _ in range(n)]
    for c, m in zip(coeffs, maps):
        if c:
            for i, j, k in itertools.product(range(n), repeat=3):
                if m.tensor[i][j][k]:
                    T[i][j][k] = T[i][j][k] + m.tensor[i][j][k] * c
    return BilinearConfMap(alg, tuple(tuple(tuple(v) for v in r) for r in T), parity)


def lift_linear(alpha: LinearConfMap, A: CommutativeAlgebra, a: Sequence,
                LA: LCSAlgebra | None = None) -> LinearConfMap:
    """e_i (x) b_t -> alpha(e_i) (x) (a b_t) on L (x) A."""
    L = alpha.algebra
    LA = LA or tensor_current(L, A)
    n, m = L.rank, A.dim
    zero = SPoly.zero(L.registry)
    M = [[zero] * (n * m) for _ in range(n * m)]
    for i, t in itertools.product(range(n), range(m)):
        abt = A.multiply(a, A.basis(t))
        for k, w in itertools.product(range(n), range(m)):
            if alpha.matrix[k][i] and abt[w]:
                M[k * m + w][i * m + t] = alpha.matrix[k][i] * abt[w]
    return LinearConfMap(LA, tuple(tuple(r) for r in M), alpha.parity, alpha.convention)


# ---------------------------------------------------------------------------
# ansatz and generic linear solve


def linear_ansatz(alg: LCSAlgebra, deg_d: int, parity: int, convention: str,
                  deg_l: int = 0) -> list[LinearConfMap]:
    n = alg.rank
    zero = SPoly.zero(alg.registry)
    lam_degs = range(deg_l + 1) if convention == SHIFTED_CONV else range(1)
    out = []
    for k, i in itertools.product(range(n), repeat=2):
        if alg.parities[k] != (alg.parities[i] + parity) % 2:
            continue
        for a, b in itertools.product(range(deg_d + 1), lam_degs):
            M = [[zero] * n for _ in range(n)]
            M[k][i] = SPoly.monomial({PARTIAL: a, LAM: b}, registry=alg.registry)
            out.append(LinearConfMap(alg, tuple(tuple(r) for r in M), parity, convention))
    return out


def bilinear_ansatz(alg: LCSAlgebra, deg_d: int, deg_l: int, parity: int) -> list[BilinearConfMap]:
    n = alg.rank
    zero = SPoly.zero(alg.registry)
    out = []
    for i, j, k in itertools.product(range(n), repeat=3):
        if alg.parities[k] != (alg.parities[i] + alg.parities[j] + parity) % 2:
            continue
        for a, b in itertools.product(range(deg_d + 1), range(deg_l + 1)):
            T = [[[zero] * n for _ in range(n)] for _ in range(n)]
            T[i][j][k] = SPoly.monomial({PARTIAL: a, LAM: b}, registry=alg.registry)
            out.append(BilinearConfMap(alg, tuple(tuple(tuple(v) for v in r) for r in T), parity))
    return out


def _columns(unknowns: Sequence, residual: Callable[[object], Iterable[tuple[object, ConformalElement]]]):
    cols = []
    for u in unknowns:
        col = {}
        for tag, el in residual(u):
            col.update(flatten(el.coeffs, tag))
        cols.append(col)
    return cols


@dataclass
class MapFamily:
    """Solution spaces of a solver, split by parity."""

    kind: str
    bounds: dict
    even: list = field(default_factory=list)
    odd: list = field(default_factory=list)
    spaces: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def maps(self) -> list:
        return self.even + self.odd

    @property
    def dimension(self) -> int:
        return len(self.even) + len(self.odd)

    def by_parity(self, parity: int) -> list:
        return self.odd if parity else self.even


# ---------------------------------------------------------------------------
# centroid


def centroid_residuals(alpha: LinearConfMap, sides: str = "both"):
    """alpha([x_mu y]) - s [x_mu alpha(y)]  and  alpha([x_mu y]) - [alpha(x)_mu y]."""
    alg = alpha.algebra
    for i, j in itertools.product(range(alg.rank), repeat=2):
        ei, ej = alg.gen(i), alg.gen(j)
        w = bracket(ei, ej, MU)
        aw = apply_linear(alpha, w, LAM)
        s = sign(alg.parities[i] * alpha.parity)
        yield ("right", i, j), aw - bracket(ei, apply_linear(alpha, ej, LAM), MU).scale(s)
        if sides == "both":
            yield ("left", i, j), aw - bracket(apply_linear(alpha, ei, LAM), ej, MU)


def solve_centroid(alg: LCSAlgebra, deg_d: int, convention: str = PARTIAL_CONV,
                   deg_l: int | None = None, sides: str = "both") -> MapFamily:
    if deg_d < 0:
        raise ValueError("degree bound must be non-negative")
    deg_l = deg_d if deg_l is None else deg_l
    fam = MapFamily("centroid", {"deg_d": deg_d, "deg_l": deg_l if convention == SHIFTED_CONV else None,
                                 "convention": convention, "sides": sides})
    for parity in (0, 1):
        unknowns = linear_ansatz(alg, deg_d, parity, convention, deg_l)
        space = kernel_of(_columns(unknowns, lambda a: centroid_residuals(a, sides)))
        fam.spaces[parity] = space
        fam.by_parity(parity).extend(
            combine_linear(unknowns, v, alg, parity, convention) for v in space.basis)
    return fam


# ---------------------------------------------------------------------------
# biderivations


def _leibniz_sign(alg: LCSAlgebra, i: int, j: int, parity: int) -> int:
    # (-1)^{(|x| + |phi|)|y|}; reduces to (-1)^{|x||y|} for even maps
    return sign((alg.parities[i] + parity) * alg.parities[j])


def bider_skew_residuals(phi: BilinearConfMap, pairs=None):
    alg = phi.algebra
    flip = -_var(LAM, alg) - _var(PARTIAL, alg)
    for i, j in pairs or itertools.product(range(alg.rank), repeat=2):
        s = sign(alg.parities[i] * alg.parities[j])
        lhs = ConformalElement(alg, phi.tensor[i][j])
        rhs = ConformalElement(alg, phi.tensor[j][i]).substitute(LAM, flip)
        yield ("skew", i, j), lhs + rhs.scale(s)


def bider_leibniz_residuals(phi: BilinearConfMap, firsts=None, inner=None):
    """phi_lam(x,[y_mu z]) - [phi_lam(x,y)_{lam+mu} z] - s [y_mu phi_lam(x,z)]."""
    alg = phi.algebra
    n = alg.rank
    lam_mu = _var(LAM, alg) + _var(MU, alg)
    inner = inner or {(j, k): bracket(alg.gen(j), alg.gen(k), MU)
                      for j, k in itertools.product(range(n), repeat=2)}
    for i in firsts if firsts is not None else range(n):
        x = alg.gen(i)
        phis = {j: apply_bilinear(phi, x, alg.gen(j), LAM) for j in range(n)}
        for j, k in itertools.product(range(n), repeat=2):
            y, z = alg.gen(j), alg.gen(k)
            lhs = apply_bilinear(phi, x, inner[(j, k)], LAM)
            r1 = bracket(phis[j], z, lam_mu)
            r2 = bracket(y, phis[k], MU)
            yield ("leibniz", i, j, k), lhs - r1 - r2.scale(_leibniz_sign(alg, i, j, phi.parity))


def bider_second_leibniz_residuals(phi: BilinearConfMap):
    """phi_{lam+mu}([x_mu y], z) - s1 [x_mu phi_lam(y,z)] + s2 [y_lam phi_mu(x,z)]."""
    alg = phi.algebra
    p = alg.parities
    lam_mu = _var(LAM, alg) + _var(MU, alg)
    for i, j, k in itertools.product(range(alg.rank), repeat=3):
        x, y, z = alg.gen(i), alg.gen(j), alg.gen(k)
        lhs = apply_bilinear(phi, bracket(x, y, MU), z, lam_mu)
        t1 = bracket(x, apply_bilinear(phi, y, z, LAM), MU)
        t2 = bracket(y, apply_bilinear(phi, x, z, MU), LAM)
        s1 = sign(p[i] * phi.parity)
        s2 = sign(p[i] * p[j] + p[j] * phi.parity)
        yield ("leibniz2", i, j, k), lhs - t1.scale(s1) + t2.scale(s2)


def _elementary_support(phi: BilinearConfMap):
    n = phi.algebra.rank
    return next((i, j) for i, j in itertools.product(range(n), repeat=2) if any(phi.tensor[i][j]))


def solve_biderivations(alg: LCSAlgebra, deg_d: int, deg_l: int) -> MapFamily:
    """Skew + first Leibniz imposed; second Leibniz checked on each solution."""
    if deg_d < 0 or deg_l < 0:
        raise ValueError("degree bounds must be non-negative")
    fam = MapFamily("biderivation", {"deg_d": deg_d, "deg_l": deg_l})
    n = alg.rank
    inner = {(j, k): bracket(alg.gen(j), alg.gen(k), MU) for j, k in itertools.product(range(n), repeat=2)}

    def residual(phi):
        i0, j0 = _elementary_support(phi)
        yield from bider_skew_residuals(phi, pairs=sorted({(i0, j0), (j0, i0)}))
        yield from bider_leibniz_residuals(phi, firsts=[i0], inner=inner)

    for parity in (0, 1):
        unknowns = bilinear_ansatz(alg, deg_d, deg_l, parity)
        space = kernel_of(_columns(unknowns, residual))
        fam.spaces[parity] = space
        fam.by_parity(parity).extend(combine_bilinear(unknowns, v, alg, parity) for v in space.basis)
    for idx, phi in enumerate(fam.maps):
        for ctx, r in bider_second_leibniz_residuals(phi):
            if not r.is_zero():
                fam.violations.append((f"basis[{idx}] {ctx}", r))
    return fam


def is_biderivation(phi: BilinearConfMap) -> bool:
    checks = itertools.chain(bider_skew_residuals(phi), bider_leibniz_residuals(phi),
                             bider_second_leibniz_residuals(phi))
    return all(r.is_zero() for _, r in checks)


# ---------------------------------------------------------------------------
# commuting maps


def _dpow(alg: LCSAlgebra, i: int, a: int) -> ConformalElement:
    return alg.gen(i).scale(_var(PARTIAL, alg) ** a)


def commuting_residuals(psi: LinearConfMap, deg: int, pairs=None):
    """[Psi(u)_{lam+mu} v] + [Psi(v)_{lam+mu} u] for u = d^a e_i, v = d^b e_j."""
    alg = psi.algebra
    lam_mu = _var(LAM, alg) + _var(MU, alg)
    terms = [(i, a) for i in range(alg.rank) for a in range(deg + 1)]
    images = {t: apply_linear(psi, _dpow(alg, *t), LAM) for t in terms}
    for s, t in pairs or itertools.combinations_with_replacement(terms, 2):
        u, v = _dpow(alg, *s), _dpow(alg, *t)
        r = bracket(images[s], v, lam_mu) + bracket(images[t], u, lam_mu)
        yield ("polarized", s, t), r


def quadratic_residual(psi: LinearConfMap, u: ConformalElement) -> ConformalElement:
    alg = psi.algebra
    return bracket(apply_linear(psi, u, LAM), u, _var(LAM, alg) + _var(MU, alg))


def random_element(alg: LCSAlgebra, deg: int, rng: random.Random, homogeneous: int | None = None,
                   coeff_range: int = 5) -> ConformalElement:
    dvar = _var(PARTIAL, alg)
    coeffs = []
    for i in range(alg.rank):
        if homogeneous is not None and alg.parities[i] != homogeneous:
            coeffs.append(SPoly.zero(alg.registry))
            continue
        p = SPoly.zero(alg.registry)
        for a in range(deg + 1):
            c = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
            p = p + dvar ** a * c
        coeffs.append(p)
    return ConformalElement(alg, tuple(coeffs))


def solve_commuting(alg: LCSAlgebra, deg_d: int, convention: str = PARTIAL_CONV,
                    deg_l: int | None = None, spot_checks: int = 20, seed: int = 0) -> MapFamily:
    """Parity-preserving maps with [Psi_lam(u)_{lam+mu} u] = 0 for all u up to degree deg_d.

    The quadratic condition is imposed through its polarization on all pairs
    (d^a e_i, d^b e_j), a, b <= deg_d, which is equivalent in characteristic 0.
    """
    if deg_d < 0:
        raise ValueError("degree bound must be non-negative")
    deg_l = deg_d if deg_l is None else deg_l
    fam = MapFamily("commuting", {"deg_d": deg_d, "deg_l": deg_l if convention == SHIFTED_CONV else None,
                                  "convention": convention})
    unknowns = linear_ansatz(alg, deg_d, 0, convention, deg_l)
    space = kernel_of(_columns(unknowns, lambda m: commuting_residuals(m, deg_d)))
    fam.spaces[0] = space
    fam.spaces[1] = SolutionSpace(0, ())
    fam.even.extend(combine_linear(unknowns, v, alg, 0, convention) for v in space.basis)
    rng = random.Random(seed)
    for idx, psi in enumerate(fam.even):
        for _ in range(spot_checks):
            u = random_element(alg, deg_d, rng)
            r = quadratic_residual(psi, u)
            if not r.is_zero():
                fam.violations.append((f"basis[{idx}] u={u.render()}", r))
    return fam


# ---------------------------------------------------------------------------
# verifiers


@dataclass
class VerifierReport:
    name: str
    status: str = "pass"  # pass | fail | not-applicable
    residuals: list = field(default_factory=list)  # (context, ConformalElement | str)
    decompositions: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "not-applicable")

    def fail(self, context: str, residual) -> None:
        self.residuals.append((context, residual))
        self.status = "fail"

    def not_applicable(self, why: str) -> "VerifierReport":
        self.status = "not-applicable"
        self.details["reason"] = why
        return self

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "residuals": [{"context": c, "residual": r.render() if hasattr(r, "render") else str(r)}
                          for c, r in self.residuals],
            "decompositions": self.decompositions,
            "details": self.details,
        }

    def render(self) -> str:
        lines = [f"{self.name}: {self.status.upper()}"]
        for k, v in self.details.items():
            lines.append(f"  {k}: {v}")
        for dec in self.decompositions:
            lines.append("  decomposition: " + ", ".join(f"{k}={v}" for k, v in dec.items()))
        for c, r in self.residuals:
            lines.append(f"  residual {c}: {r.render() if hasattr(r, 'render') else r}")
        return "\n".join(lines)


def _fmt(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def verify_swap_identity(phi: BilinearConfMap, literal: bool = False) -> VerifierReport:
    """[phi_lam(x,y)_{lam+mu} [w_gam v]] == [[x_lam y]_{lam+mu} phi_gam(w,v)].

    With ``literal=True`` the right side is [[x_mu y]_{mu+gam} phi_lam(w,v)]
    instead.  That placement of spectral parameters already fails for the
    bracket of the Virasoro algebra and is kept only for comparison.
    """
    alg = phi.algebra
    rep = VerifierReport("swap-identity" + (" (literal)" if literal else ""))
    lam, mu, gam = _var(LAM, alg), _var(MU, alg), _var(GAM, alg)
    n = alg.rank
    p = alg.parities
    for i, j, k, l in itertools.product(range(n), repeat=4):
        x, y, w, v = alg.gen(i), alg.gen(j), alg.gen(k), alg.gen(l)
        lhs = bracket(apply_bilinear(phi, x, y, LAM), bracket(w, v, GAM), lam + mu)
        if literal:
            rhs = bracket(bracket(x, y, MU), apply_bilinear(phi, w, v, LAM), mu + gam)
        else:
            rhs = bracket(bracket(x, y, LAM), apply_bilinear(phi, w, v, GAM), lam + mu)
            rhs = rhs.scale(sign(phi.parity * (p[i] + p[j])))
        r = lhs - rhs
        if not r.is_zero():
            rep.fail(f"({alg.generators[i]},{alg.generators[j]},{alg.generators[k]},{alg.generators[l]})", r)
    return rep


def _in_center_span(r: ConformalElement, cspace, deg_d: int) -> bool:
    """Every (lam, mu)-coefficient of r lies in the span of the center basis."""
    alg = r.algebra
    if cspace.dimension == 0:
        return r.is_zero()
    parts: dict = {}
    for k, p in enumerate(r.coeffs):
        for key, c in p.monomial_coeffs([LAM, MU]).items():
            parts.setdefault(key, [SPoly.zero(alg.registry)] * alg.rank)[k] = c
    cols = [flatten(e.coeffs) for e in cspace.elements]
    for coeffs in parts.values():
        if solve_combination(cols, flatten(coeffs)) is None:
            return False
    return True


def verify_centralizer_residual(phi: BilinearConfMap, center_space=None, deg_d: int = 3,
                                literal: bool = False) -> VerifierReport:
    """[phi_lam(x,y1)_{lam+mu} y2] - phi_{lam+mu}([x_lam y1], y2) must be central.

    ``literal=True`` uses [x_mu y1] in the second term; that variant is
    nonzero for the Virasoro bracket and is kept only for comparison.
    """
    alg = phi.algebra
    rep = VerifierReport("centralizer-residual" + (" (literal)" if literal else ""))
    cspace = center_space if center_space is not None else center(alg, deg_d)
    rep.details["center_dimension"] = cspace.dimension
    rep.details["deg_d"] = cspace.deg_d
    lam_mu = _var(LAM, alg) + _var(MU, alg)
    g = alg.generators
    for i, j, k in itertools.product(range(alg.rank), repeat=3):
        x, y1, y2 = alg.gen(i), alg.gen(j), alg.gen(k)
        first = bracket(apply_bilinear(phi, x, y1, LAM), y2, lam_mu)
        inner = bracket(x, y1, MU if literal else LAM)
        r = first - apply_bilinear(phi, inner, y2, lam_mu)
        if not _in_center_span(r, cspace, deg_d):
            rep.fail(f"({g[i]},{g[j]},{g[k]})", r)
    return rep


def _precondition(alg: LCSAlgebra, deg_d: int, need_perfect: bool, rep: VerifierReport):
    z = center(alg, deg_d)
    rep.details["center_dimension"] = z.dimension
    if z.dimension:
        return f"center is nonzero (contains {z.elements[0].render()}) at deg_d={deg_d}"
    if need_perfect:
        perf = is_perfect(alg, deg_d)
        rep.details["perfect"] = perf.perfect
        if not perf:
            return f"not perfect: {perf.witness} is outside the derived submodule at deg_d={deg_d}"
    return None


def verify_centroid_form(alg: LCSAlgebra, deg_d: int, deg_l: int,
                         cent: MapFamily | None = None, bider: MapFamily | None = None) -> VerifierReport:
    """Every biderivation is alpha o bracket for some centroid element alpha.

    Precomputed solver results may be passed in; they must use the same bounds.
    """
    rep = VerifierReport("centroid-form")
    rep.details.update(deg_d=deg_d, deg_l=deg_l)
    why = _precondition(alg, deg_d, True, rep)
    if why:
        return rep.not_applicable(why)
    cent = cent or solve_centroid(alg, deg_d)
    bider = bider or solve_biderivations(alg, deg_d, deg_l)
    induced = {par: [compose_with_bracket(a) for a in cent.by_parity(par)] for par in (0, 1)}
    induced_dim = 0
    for par in (0, 1):
        cols = [m.vector() for m in induced[par]]
        if cols:
            induced_dim += kernel_rank(cols)
    rep.details.update(bider_dimension=bider.dimension, centroid_dimension=cent.dimension,
                       induced_dimension=induced_dim)
    for idx, phi in enumerate(bider.maps):
        cols = [m.vector() for m in induced[phi.parity]]
        c = solve_combination(cols, phi.vector()) if cols else None
        if c is None and not phi.is_zero():
            rep.fail(f"biderivation[{idx}]", f"not of the form alpha o bracket: {phi.render()}")
            continue
        rep.decompositions.append({
            "biderivation": idx,
            "parity": phi.parity,
            "centroid_coefficients": [_fmt(x) for x in (c or [])],
            "alpha": combine_linear(cent.by_parity(phi.parity), c or [], alg, phi.parity,
                                    PARTIAL_CONV).render(),
        })
    if bider.dimension != induced_dim:
        rep.fail("dimension", f"dim BDer = {bider.dimension} but dim(Cent o bracket) = {induced_dim}")
    for ctx, r in bider.violations:
        rep.fail(f"second Leibniz {ctx}", r)
    return rep


def kernel_rank(cols: Sequence[dict]) -> int:
    return len(cols) - kernel_of(cols).dimension


def verify_current_decomposition(L: LCSAlgebra, A: CommutativeAlgebra, deg_d: int, deg_l: int,
                                 bider: MapFamily | None = None) -> VerifierReport:
    """phi(x@a, y@b) = s * sum_t alpha_t([x_lam y]) @ b_t a b, alpha_t in Cent(L)."""
    rep = VerifierReport("current-decomposition")
    rep.details.update(deg_d=deg_d, deg_l=deg_l, coefficient_algebra=A.name)
    why = _precondition(L, deg_d, False, rep)
    if why:
        return rep.not_applicable(why)
    LA = bider.maps[0].algebra if bider and bider.maps else tensor_current(L, A)
    bider = bider or solve_biderivations(LA, deg_d, deg_l)
    cent = solve_centroid(L, deg_d)
    rep.details.update(bider_dimension=bider.dimension, centroid_dimension_L=cent.dimension)
    n, m = L.rank, A.dim
    zero = SPoly.zero(L.registry)

    def column(beta: LinearConfMap, t: int, parity: int) -> dict:
        T = [[[zero] * (n * m) for _ in range(n * m)] for _ in range(n * m)]
        for i, j in itertools.product(range(n), repeat=2):
            img = apply_linear(beta, ConformalElement(L, L.S(i, j)), LAM)
            s = sign(parity * (L.parities[i] + L.parities[j]))
            for a, b in itertools.product(range(m), repeat=2):
                coeff = A.multiply(A.basis(t), A.multiply(A.basis(a), A.basis(b)))
                for k, w in itertools.product(range(n), range(m)):
                    if img.coeffs[k] and coeff[w]:
                        T[i * m + a][j * m + b][k * m + w] = img.coeffs[k] * (coeff[w] * s)
        return BilinearConfMap(LA, tuple(tuple(tuple(v) for v in r) for r in T), parity).vector()

    for idx, phi in enumerate(bider.maps):
        betas = cent.by_parity(phi.parity)
        labels = [(t, r) for t in range(m) for r in range(len(betas))]
        cols = [column(betas[r], t, phi.parity) for t, r in labels]
        c = solve_combination(cols, phi.vector()) if cols else None
        if c is None and not phi.is_zero():
            rep.fail(f"biderivation[{idx}]", f"no decomposition over Cent(L): {phi.render()}")
            continue
        c = c or []
        family = {}
        for t in range(m):
            coeffs = [c[labels.index((t, r))] for r in range(len(betas))]
            family[A.basis_names[t]] = {
                "centroid_coefficients": [_fmt(x) for x in coeffs],
                "alpha": combine_linear(betas, coeffs, L, phi.parity, PARTIAL_CONV).render(),
            }
        rep.decompositions.append({"biderivation": idx, "parity": phi.parity, "family": family})
    return rep


def verify_polarization(psi: LinearConfMap) -> VerifierReport:
    """[Psi_lam(u)_{lam+mu} v] == (-1)^{|u|(|Psi|+|v|)} [u_{-d-lam-mu} Psi_lam(v)] on generators."""
    alg = psi.algebra
    rep = VerifierReport("polarization")
    lam, mu, d = _var(LAM, alg), _var(MU, alg), _var(PARTIAL, alg)
    p = alg.parities
    for i, j in itertools.product(range(alg.rank), repeat=2):
        u, v = alg.gen(i), alg.gen(j)
        lhs = bracket(apply_linear(psi, u, LAM), v, lam + mu)
        rhs = bracket(u, apply_linear(psi, v, LAM), -d - lam - mu)
        r = lhs - rhs.scale(sign(p[i] * (psi.parity + p[j])))
        if not r.is_zero():
            rep.fail(f"({alg.generators[i]},{alg.generators[j]})", r)
    return rep


def verify_commuting_in_centroid(alg: LCSAlgebra, deg_d: int, convention: str = PARTIAL_CONV,
                                 comm: MapFamily | None = None,
                                 cent: MapFamily | None = None) -> VerifierReport:
    rep = VerifierReport("commuting-in-centroid")
    rep.details.update(deg_d=deg_d, convention=convention)
    why = _precondition(alg, deg_d, False, rep)
    if why:
        return rep.not_applicable(why)
    comm = comm or solve_commuting(alg, deg_d, convention)
    cent = cent or solve_centroid(alg, deg_d)
    rep.details.update(commuting_dimension=comm.dimension, centroid_dimension=cent.dimension)
    cols = [a.vector() for a in cent.even]
    for idx, psi in enumerate(comm.even):
        c = solve_combination(cols, psi.vector()) if cols else None
        if c is None:
            rep.fail(f"commuting[{idx}]", f"not in Cent(L): {psi.render()}")
        else:
            rep.decompositions.append({"commuting": idx, "centroid_coefficients": [_fmt(x) for x in c]})
    for ctx, r in comm.violations:
        rep.fail(f"quadratic spot check {ctx}", r)
    return rep
