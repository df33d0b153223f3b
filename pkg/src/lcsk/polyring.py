"""Sparse exact polynomials over the rationals in ``d`` and spectral variables.

Every bracket coefficient lives in a commutative ring Q[d, lam, mu, ...].
Polynomials are immutable and kept in canonical form (no zero coefficients),
so equality of two values is a structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class VarId:
    name: str
    kind: str  # "partial" or "spectral"


class VarRegistry:
    """An ordered set of variable names; exactly one of them is the partial ``d``."""

    def __init__(self, partial: str, spectral: Iterable[str]):
        names = [partial, *spectral]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        self.names: tuple[str, ...] = tuple(names)
        self.vars: tuple[VarId, ...] = (VarId(partial, "partial"),) + tuple(
            VarId(n, "spectral") for n in spectral
        )
        self._index = {n: i for i, n in enumerate(names)}

    def __len__(self) -> int:
        return len(self.names)

    def __repr__(self) -> str:
        return f"VarRegistry({self.names!r})"

    def index(self, var: str | VarId) -> int:
        name = var.name if isinstance(var, VarId) else var
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"variable {name!r} is not registered in {self.names}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def partial(self) -> VarId:
        return self.vars[0]

    @property
    def spectral(self) -> tuple[VarId, ...]:
        return self.vars[1:]


# lam/mu/gam/eta are the named spectral variables; nu/rho/sig are scratch
# slots used when a bracket is evaluated at a compound parameter like lam+mu.
DEFAULT_REGISTRY = VarRegistry("d", ["lam", "mu", "gam", "eta", "nu", "rho", "sig"])
SCRATCH = ("nu", "rho", "sig")


def _frac(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


class SPoly:
    """Immutable multivariate polynomial with Fraction coefficients."""

    __slots__ = ("registry", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Scalar] | None = None,
                 registry: VarRegistry = DEFAULT_REGISTRY):
        self.registry = registry
        n = len(registry)
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exps, c in terms.items():
                if len(exps) != n or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for {registry}")
                c = _frac(c)
                if c:
                    clean[tuple(exps)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, registry: VarRegistry) -> "SPoly":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.registry = registry
        p.terms = terms
        p._hash = None
        return p

    # -- constructors --------------------------------------------------
    @classmethod
    def const(cls, c: Scalar, registry: VarRegistry = DEFAULT_REGISTRY) -> "SPoly":
        return cls({(0,) * len(registry): c}, registry)

    @classmethod
    def var(cls, name: str, registry: VarRegistry = DEFAULT_REGISTRY, power: int = 1) -> "SPoly":
        exps = [0] * len(registry)
        exps[registry.index(name)] = power
        return cls({tuple(exps): 1}, registry)

    @classmethod
    def monomial(cls, powers: Mapping[str, int], c: Scalar = 1,
                 registry: VarRegistry = DEFAULT_REGISTRY) -> "SPoly":
        exps = [0] * len(registry)
        for name, k in powers.items():
            exps[registry.index(name)] += k
        return cls({tuple(exps): c}, registry)

    @classmethod
    def zero(cls, registry: VarRegistry = DEFAULT_REGISTRY) -> "SPoly":
        return cls._raw({}, registry)

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SPoly.const(other, self.registry)
        if not isinstance(other, SPoly):
            return NotImplemented
        return self.registry is other.registry and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.registry.index(var)
        return max(e[i] for e in self.terms)

    def variables(self) -> set[str]:
        used = set()
        for exps in self.terms:
            used.update(self.registry.names[i] for i, e in enumerate(exps) if e)
        return used

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.registry), Fraction(0))

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "SPoly":
        if isinstance(other, SPoly):
            if other.registry is not self.registry:
                raise ValueError("polynomials over different variable registries")
            return other
        if isinstance(other, (int, Fraction)):
            return SPoly.const(other, self.registry)
        raise TypeError(f"cannot combine SPoly with {type(other).__name__}")

    def __add__(self, other) -> "SPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            s = out.get(exps, 0) + c
            if s:
                out[exps] = s
            else:
                out.pop(exps, None)
        return SPoly._raw(out, self.registry)

    __radd__ = __add__

    def __neg__(self) -> "SPoly":
        return SPoly._raw({e: -c for e, c in self.terms.items()}, self.registry)

    def __sub__(self, other) -> "SPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return SPoly.zero(self.registry)
            return SPoly._raw({e: c * other for e, c in self.terms.items()}, self.registry)
        other = self._coerce(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SPoly._raw({e: c for e, c in out.items() if c}, self.registry)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SPoly":
        if k < 0:
            raise ValueError("negative power")
        result = SPoly.const(1, self.registry)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- structure -----------------------------------------------------
    def substitute(self, var: str | VarId, expr: "SPoly | Scalar") -> "SPoly":
        """Replace ``var`` by an affine expression and expand."""
        expr = self._coerce(expr)
        if expr.degree() > 1:
            raise ValueError(f"substitution target must be affine, got {expr}")
        i = self.registry.index(var)
        # group terms by the power of var
        by_power: dict[int, dict] = {}
        for exps, c in self.terms.items():
            k = exps[i]
            rest = exps[:i] + (0,) + exps[i + 1:]
            by_power.setdefault(k, {})[rest] = c
        if set(by_power) <= {0}:
            return self
        result = SPoly.zero(self.registry)
        powers = [SPoly.const(1, self.registry)]
        for k in sorted(by_power):
            while len(powers) <= k:
                powers.append(powers[-1] * expr)
            result = result + SPoly._raw(by_power[k], self.registry) * powers[k]
        return result

    def monomial_coeffs(self, vars: Iterable[str | VarId]) -> dict[tuple[int, ...], "SPoly"]:
        """Split into ``{exponents over vars: coefficient free of vars}``."""
        idx = [self.registry.index(v) for v in vars]
        out: dict[tuple[int, ...], dict] = {}
        for exps, c in self.terms.items():
            key = tuple(exps[i] for i in idx)
            rest = list(exps)
            for i in idx:
                rest[i] = 0
            out.setdefault(key, {})[tuple(rest)] = c
        return {k: SPoly._raw(v, self.registry) for k, v in out.items()}

    # -- rendering -----------------------------------------------------
    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def render(self, names: Mapping[str, str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or {}
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(exps):
                if e:
                    n = names.get(self.registry.names[i], self.registry.names[i])
                    factors.append(n if e == 1 else f"{n}^{e}")
            mag = abs(c)
            if not factors:
                body = _fmt_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = _fmt_rational(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"SPoly({self.render()!r})"


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def add(p: SPoly, q: SPoly) -> SPoly:
    return p + q


def mul(p: SPoly, q: SPoly) -> SPoly:
    return p * q


def substitute(p: SPoly, v: str | VarId, e: SPoly | Scalar) -> SPoly:
    return p.substitute(v, e)


def monomial_coeffs(p: SPoly, vars: Iterable[str | VarId]) -> dict[tuple[int, ...], SPoly]:
    return p.monomial_coeffs(vars)


def D(registry: VarRegistry = DEFAULT_REGISTRY) -> SPoly:
    return SPoly.var(registry.partial.name, registry)


def V(name: str, registry: VarRegistry = DEFAULT_REGISTRY) -> SPoly:
    return SPoly.var(name, registry)


def C(c: Scalar, registry: VarRegistry = DEFAULT_REGISTRY) -> SPoly:
    return SPoly.const(c, registry)
