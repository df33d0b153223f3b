"""Built-in algebras used as test beds."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .lcs import LAM, PARTIAL, LCSAlgebra, new_algebra
from .polyring import SPoly

d = SPoly.var(PARTIAL)
lam = SPoly.var(LAM)


def virasoro() -> LCSAlgebra:
    return new_algebra("Virasoro", ["L"], ["even"], {("L", "L"): {"L": d + 2 * lam}})


def neveu_schwarz() -> LCSAlgebra:
    half = Fraction(1, 2)
    return new_algebra("Neveu-Schwarz", ["L", "G"], ["even", "odd"], {
        ("L", "L"): {"L": d + 2 * lam},
        ("L", "G"): {"G": d + Fraction(3, 2) * lam},
        ("G", "L"): {"G": half * d + Fraction(3, 2) * lam},
        ("G", "G"): {"L": 2},
    })


def abelian(rank: int) -> LCSAlgebra:
    names = [f"e{i + 1}" for i in range(rank)] if rank != 1 else ["L"]
    return new_algebra(f"abelian{rank}", names, ["even"] * rank)


def current_lie(name: str, basis: Sequence[str], parities: Sequence,
                brackets: Mapping[tuple[str, str], Mapping[str, int | Fraction]]) -> LCSAlgebra:
    """Cur(g): [a _lam b] = [a, b] for a Lie superalgebra g given by structure constants."""
    table = {pair: {k: SPoly.const(c) for k, c in out.items()} for pair, out in brackets.items()}
    return new_algebra(name, basis, parities, table)


SL2 = {
    ("h", "e"): {"e": 2}, ("e", "h"): {"e": -2},
    ("h", "f"): {"f": -2}, ("f", "h"): {"f": 2},
    ("e", "f"): {"h": 1}, ("f", "e"): {"h": -1},
}


def cur_sl2() -> LCSAlgebra:
    return current_lie("Cur(sl2)", ["e", "h", "f"], ["even"] * 3, SL2)


def builtin(name: str) -> LCSAlgebra:
    table = {
        "virasoro": virasoro,
        "neveu-schwarz": neveu_schwarz,
        "cur-sl2": cur_sl2,
        "abelian1": lambda: abelian(1),
        "abelian2": lambda: abelian(2),
    }
    try:
        return table[name]()
    except KeyError:
        raise ValueError(f"no built-in algebra {name!r}; choose from {sorted(table)}") from None
