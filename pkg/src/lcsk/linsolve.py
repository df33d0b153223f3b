"""Exact rational linear algebra: RREF, kernels, span membership.

Matrices are handled as lists of sparse rows (``{column: Fraction}``) because
the constraint systems produced by the solvers are wide and very sparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Row = dict[int, Fraction]


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        entries = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        return cls(len(entries), cols, entries)

    def sparse_rows(self) -> list[Row]:
        return [{j: x for j, x in enumerate(r) if x} for r in self.entries]


@dataclass(frozen=True)
class SolutionSpace:
    """A subspace of Q^ambient, stored by its RREF basis."""

    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(v) if x) for v in self.basis]


def rref_sparse(rows: Iterable[Mapping[int, Fraction]]) -> dict[int, Row]:
    """Reduce rows to RREF; returns ``{pivot column: row}`` with pivot entry 1.

    Rows are consumed in order, so the pivot of each stored row is its first
    nonzero column after reduction by all earlier rows.
    """
    pivots: dict[int, Row] = {}
    for raw in rows:
        row = {j: Fraction(x) for j, x in raw.items() if x}
        while row:
            hit = [j for j in row if j in pivots]
            if not hit:
                break
            for j in hit:
                f = row.get(j)
                if not f:
                    continue
                for k, x in pivots[j].items():
                    v = row.get(k, 0) - f * x
                    if v:
                        row[k] = v
                    else:
                        row.pop(k, None)
        if not row:
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {k: x * inv for k, x in row.items()}
        # keep earlier rows reduced in the new pivot column
        for q, prow in pivots.items():
            f = prow.get(p)
            if f:
                for k, x in row.items():
                    v = prow.get(k, 0) - f * x
                    if v:
                        prow[k] = v
                    else:
                        prow.pop(k, None)
        pivots[p] = row
    return dict(sorted(pivots.items()))


def rank(M: RatMatrix | Sequence[Mapping[int, Fraction]]) -> int:
    rows = M.sparse_rows() if isinstance(M, RatMatrix) else M
    return len(rref_sparse(rows))


def nullspace(M: RatMatrix | Sequence[Mapping[int, Fraction]], cols: int | None = None) -> SolutionSpace:
    """Exact kernel of ``M``.  For sparse-row input, ``cols`` is required."""
    if isinstance(M, RatMatrix):
        rows, cols = M.sparse_rows(), M.cols
    else:
        if cols is None:
            raise ValueError("column count required for sparse input")
        rows = M
    piv = rref_sparse(rows)
    free = [j for j in range(cols) if j not in piv]
    vectors = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for p, row in piv.items():
            x = row.get(f)
            if x:
                v[p] = -x
        vectors.append(v)
    return span(vectors, cols)


def span(vectors: Iterable[Sequence], ambient: int | None = None) -> SolutionSpace:
    """Normalized basis of the span of ``vectors``."""
    vectors = [tuple(Fraction(x) for x in v) for v in vectors]
    if ambient is None:
        ambient = len(vectors[0]) if vectors else 0
    if any(len(v) != ambient for v in vectors):
        raise ValueError("vector length does not match ambient dimension")
    piv = rref_sparse({j: x for j, x in enumerate(v) if x} for v in vectors)
    basis = []
    for row in piv.values():
        dense = [Fraction(0)] * ambient
        for k, x in row.items():
            dense[k] = x
        basis.append(tuple(dense))
    return SolutionSpace(ambient, tuple(basis))


def in_span(v: Sequence, S: SolutionSpace) -> tuple[Fraction, ...] | None:
    """Coefficients of ``v`` in the basis of ``S``, or None if ``v`` is outside."""
    if len(v) != S.ambient:
        raise ValueError("vector length does not match the space")
    v = [Fraction(x) for x in v]
    # RREF basis: the coefficient of basis_i is v at its pivot
    coeffs = tuple(v[p] for p in S.pivots())
    recon = [Fraction(0)] * S.ambient
    for c, b in zip(coeffs, S.basis):
        if c:
            for k, x in enumerate(b):
                if x:
                    recon[k] += c * x
    return coeffs if recon == v else None


def solve_combination(columns: Sequence[Mapping], target: Mapping) -> list[Fraction] | None:
    """Find c with sum_i c_i * columns[i] == target (sparse vectors over any keys).

    Columns may be dependent; the returned solution sets free unknowns to zero.
    """
    keys = sorted({k for col in columns for k in col} | set(target), key=repr)
    n = len(columns)
    rows = []
    for k in keys:
        row = {i: Fraction(col[k]) for i, col in enumerate(columns) if col.get(k)}
        t = target.get(k, 0)
        if t:
            row[n] = Fraction(t)
        if row:
            rows.append(row)
    piv = rref_sparse(rows)
    if n in piv:
        return None
    c = [Fraction(0)] * n
    for p, row in piv.items():
        c[p] = row.get(n, Fraction(0))
    return c


def matvec(M: RatMatrix, v: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in M.entries)
