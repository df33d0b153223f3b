"""Commutative coefficient algebras A and the current algebra L (x) A."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lcs import AlgebraError, LCSAlgebra
from .linsolve import RatMatrix
from .polyring import SPoly


@dataclass(frozen=True, eq=False)
class CommutativeAlgebra:
    """Finite-dimensional commutative associative unital algebra.

    ``mult[s][t][w]`` is the coefficient of b_w in b_s * b_t.
    """

    name: str
    basis_names: tuple[str, ...]
    mult: tuple[tuple[tuple[Fraction, ...], ...], ...]
    unit: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def basis(self, t: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(int(w == t)) for w in range(self.dim))

    def multiply(self, a: Sequence, b: Sequence) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        for s, x in enumerate(a):
            if not x:
                continue
            for t, y in enumerate(b):
                if not y:
                    continue
                for w, c in enumerate(self.mult[s][t]):
                    if c:
                        out[w] += x * y * c
        return tuple(out)


def new_comm_algebra(dim: int, mult, unit, name: str = "A",
                     basis_names: Sequence[str] | None = None) -> CommutativeAlgebra:
    names = tuple(basis_names) if basis_names else tuple(f"b{t}" for t in range(dim))
    if len(names) != dim:
        raise AlgebraError("basis name count differs from dimension")
    try:
        table = tuple(tuple(tuple(Fraction(c) for c in mult[s][t]) for t in range(dim))
                      for s in range(dim))
    except (IndexError, TypeError) as exc:
        raise AlgebraError(f"multiplication table does not match dimension {dim}") from exc
    if any(len(table[s][t]) != dim for s in range(dim) for t in range(dim)):
        raise AlgebraError(f"multiplication table does not match dimension {dim}")
    one = tuple(Fraction(c) for c in unit)
    if len(one) != dim:
        raise AlgebraError("unit vector length differs from dimension")
    A = CommutativeAlgebra(name, names, table, one)

    for s, t in itertools.product(range(dim), repeat=2):
        if table[s][t] != table[t][s]:
            raise AlgebraError(f"commutativity fails for ({names[s]}, {names[t]})")
    for r, s, t in itertools.product(range(dim), repeat=3):
        b = A.basis
        if A.multiply(A.multiply(b(r), b(s)), b(t)) != A.multiply(b(r), A.multiply(b(s), b(t))):
            raise AlgebraError(f"associativity fails for ({names[r]}, {names[s]}, {names[t]})")
    for t in range(dim):
        if A.multiply(one, A.basis(t)) != A.basis(t):
            raise AlgebraError(f"unit law fails on {names[t]}")
    return A


def quotient_poly_algebra(N: int) -> CommutativeAlgebra:
    """Q[t]/(t^N) on the basis 1, t, ..., t^(N-1)."""
    if N < 1:
        raise ValueError("Q[t]/(t^N) needs N >= 1")
    names = ["1"] + ["t" if a == 1 else f"t{a}" for a in range(1, N)]
    mult = [[[int(a + b == w) for w in range(N)] for b in range(N)] for a in range(N)]
    unit = [1] + [0] * (N - 1)
    return new_comm_algebra(N, mult, unit, name=f"Q[t]/(t^{N})", basis_names=names)


def product_algebra(n: int = 2) -> CommutativeAlgebra:
    """Q^n with coordinatewise product."""
    mult = [[[int(s == t == w) for w in range(n)] for t in range(n)] for s in range(n)]
    return new_comm_algebra(n, mult, [1] * n, name="x".join(["Q"] * n),
                            basis_names=[f"e{s + 1}" for s in range(n)])


def tensor_current(L: LCSAlgebra, A: CommutativeAlgebra) -> LCSAlgebra:
    """L (x) A with [(x@a) _lam (y@b)] = [x _lam y] @ ab.

    Generators are ordered L-major: (e_0@b_0, e_0@b_1, ..., e_1@b_0, ...).
    """
    n, m = L.rank, A.dim
    gens = tuple(f"{g}_{b}" for g in L.generators for b in A.basis_names)
    par = tuple(p for p in L.parities for _ in range(m))
    zero = SPoly.zero(L.registry)
    structure = []
    for i, s in itertools.product(range(n), range(m)):
        row = []
        for j, t in itertools.product(range(n), range(m)):
            vec = [zero] * (n * m)
            for k, sk in enumerate(L.S(i, j)):
                if not sk:
                    continue
                for w, c in enumerate(A.mult[s][t]):
                    if c:
                        vec[k * m + w] = sk * c
            row.append(tuple(vec))
        structure.append(tuple(row))
    return LCSAlgebra(f"{L.name}(x){A.name}", gens, par, tuple(structure), L.registry)


def current_index(L: LCSAlgebra, A: CommutativeAlgebra, i: int, t: int) -> int:
    return i * A.dim + t


def decompose(A: CommutativeAlgebra, a: Sequence) -> tuple[Fraction, ...]:
    """Coordinates delta_w(a) of a in the fixed basis."""
    if len(a) != A.dim:
        raise ValueError("vector length differs from dimension")
    return tuple(Fraction(x) for x in a)


def mult_operator(A: CommutativeAlgebra, a: Sequence) -> RatMatrix:
    """Matrix of x -> a*x; column t is the image of b_t."""
    if len(a) != A.dim:
        raise ValueError("vector length differs from dimension")
    cols = [A.multiply(a, A.basis(t)) for t in range(A.dim)]
    return RatMatrix.from_rows([[cols[t][w] for t in range(A.dim)] for w in range(A.dim)], A.dim)


def matmul(P: RatMatrix, Q: RatMatrix) -> RatMatrix:
    rows = [[sum((P.entries[i][k] * Q.entries[k][j] for k in range(P.cols)), Fraction(0))
             for j in range(Q.cols)] for i in range(P.rows)]
    return RatMatrix.from_rows(rows, Q.cols)
