"""Algebra specification files.

A spec file is line oriented::

    # Neveu-Schwarz
    name = "neveu-schwarz"

    [generators]
    L = "even"
    G = "odd"

    [brackets]
    "L,L" = "(d + 2*x) L"
    "L,G" = "(d + 3/2*x) G"
    "G,L" = "(1/2*d + 3/2*x) G"
    "G,G" = "2 L"

    [coefficients]          # optional: Q[t]/(t^N) ...
    quotient = 2
                            # ... or an explicit table over named basis elements
    [bounds]                # optional
    deg_d = 3
    deg_l = 3

Bracket values use ``d`` for the derivation, ``x`` for lambda, rational
literals ``a/b``, ``+ - * ^``, parentheses and juxtaposition, with a
generator name as the rightmost factor of each term.  Omitted pairs are zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .current import CommutativeAlgebra, new_comm_algebra, quotient_poly_algebra
from .lcs import LAM, PARTIAL, AlgebraError, ConformalElement, LCSAlgebra, new_algebra
from .polyring import SPoly

RESERVED = {"d", "x"}
SECTIONS = {"generators", "brackets", "coefficients", "bounds"}
SPEC_NAMES = {LAM: "x"}


class SpecError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line, self.col = line, col
        where = f"line {line}" + (f", column {col}" if col is not None else "") + ": " if line else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# expressions

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str, line: int, col0: int):
    pos, out = 0, []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise SpecError(f"unexpected character {text[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


class _Parser:
    """Recursive descent: sum > product (``*`` or juxtaposition) > power > atom.

    Values are either polynomials (SPoly) or module values ``{name: SPoly}``.
    """

    def __init__(self, text: str, atoms: dict[str, int], line: int, col0: int, allow_vars: bool = True):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.atoms = atoms
        self.line = line
        self.allow_vars = allow_vars

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise SpecError(msg, self.line, tok[2])

    def parse(self):
        val = self.sum()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return val

    def sum(self):
        val = self.signed()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            tok = self.take()
            rhs = self.signed()
            val = _add(val, _scale(rhs, -1 if tok[1] == "-" else 1), self, tok)
        return val

    def signed(self):
        if self.peek()[0] == "op" and self.peek()[1] in "+-":
            sgn = -1 if self.take()[1] == "-" else 1
            return _scale(self.signed(), sgn)
        return self.product()

    def product(self):
        val = self.power()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
            elif not (tok[0] in ("num", "id") or (tok[0] == "op" and tok[1] == "(")):
                return val
            rhs = self.power()
            if isinstance(val, dict):
                self.error("a generator must be the rightmost factor", tok)
            val = _scale(rhs, val)

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            tok = self.take()
            exp = self.take()
            if exp[0] != "num" or "/" in exp[1]:
                self.error("exponent must be a non-negative integer", exp)
            if isinstance(base, dict):
                self.error("cannot raise a generator to a power", tok)
            base = base ** int(exp[1])
        return base

    def atom(self):
        tok = self.take()
        kind, text = tok[0], tok[1]
        if kind == "num":
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                self.error("division by zero", tok)
            return SPoly.const(Fraction(int(num), int(den.strip() or 1)))
        if kind == "id":
            if text in RESERVED:
                if not self.allow_vars:
                    self.error(f"{text!r} is not allowed here", tok)
                return SPoly.var(PARTIAL if text == "d" else LAM)
            if text not in self.atoms:
                self.error(f"unknown generator {text!r}", tok)
            return {text: SPoly.const(1)}
        if kind == "op" and text == "(":
            val = self.sum()
            if self.take()[1] != ")":
                self.error("expected ')'", self.toks[self.i - 1])
            return val
        self.error(f"unexpected {text or 'end of expression'!r}", tok)


def _scale(val, factor):
    if isinstance(factor, dict):
        raise SpecError("a generator must be the rightmost factor")
    if isinstance(val, dict):
        return {k: v * factor for k, v in val.items()}
    return val * factor


def _add(a, b, parser: _Parser, tok):
    if isinstance(a, dict) and isinstance(b, dict):
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, SPoly.zero()) + v
        return out
    if isinstance(a, dict) or isinstance(b, dict):
        scalar = b if isinstance(a, dict) else a
        if scalar:
            parser.error("cannot add a bare polynomial to a generator term", tok)
        return a if isinstance(a, dict) else b
    return a + b


def parse_module_expr(text: str, atoms, line: int = 0, col0: int = 0, allow_vars: bool = True) -> dict:
    """Parse ``"(d + 2*x) L + 2 G"`` into ``{"L": d + 2*lam, "G": 2}``."""
    atoms = {a: i for i, a in enumerate(atoms)}
    val = _Parser(text, atoms, line, col0, allow_vars).parse()
    if isinstance(val, SPoly):
        if val:
            raise SpecError("expression has no generator factor", line, col0)
        return {}
    return {k: v for k, v in val.items() if v}


def render_module(coeffs: dict[str, SPoly], order) -> str:
    parts = []
    for g in order:
        c = coeffs.get(g)
        if not c:
            continue
        s = c.render(SPEC_NAMES)
        if len(c.terms) > 1:
            s = f"({s})"
        parts.append(g if s == "1" else f"-{g}" if s == "-1" else f"{s} {g}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


# ---------------------------------------------------------------------------
# file format


@dataclass
class CoefficientSpec:
    quotient: int | None = None
    basis: tuple[str, ...] = ()
    unit: dict = field(default_factory=dict)  # basis name -> Fraction
    table: dict = field(default_factory=dict)  # (a, b) -> {basis name: Fraction}

    def build(self) -> CommutativeAlgebra:
        if self.quotient is not None:
            return quotient_poly_algebra(self.quotient)
        n = len(self.basis)
        idx = {b: i for i, b in enumerate(self.basis)}
        mult = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
        # products with a single-element unit may be omitted
        one = next(iter(self.unit)) if len(self.unit) == 1 and 1 in self.unit.values() else None
        for s, t in ((s, t) for s in range(n) for t in range(n)):
            a, b = self.basis[s], self.basis[t]
            if (a, b) in self.table:
                entry = self.table[(a, b)]
            elif (b, a) in self.table:
                entry = self.table[(b, a)]
            elif a == one:
                entry = {b: Fraction(1)}
            elif b == one:
                entry = {a: Fraction(1)}
            else:
                entry = {}
            for name, c in entry.items():
                mult[s][t][idx[name]] = c
        unit = [self.unit.get(b, Fraction(0)) for b in self.basis]
        return new_comm_algebra(n, mult, unit, name="A", basis_names=self.basis)


@dataclass
class AlgebraSpecFile:
    name: str
    generators: tuple[tuple[str, str], ...]
    brackets: dict  # (a, b) -> {generator: SPoly}, nonzero entries only
    coefficients: CoefficientSpec | None = None
    bounds: dict = field(default_factory=dict)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraSpecFile):
            return NotImplemented
        return (self.name, self.generators, _norm(self.brackets), self.coefficients, self.bounds) == \
               (other.name, other.generators, _norm(other.brackets), other.coefficients, other.bounds)

    def to_algebra(self) -> LCSAlgebra:
        names = [g for g, _ in self.generators]
        return new_algebra(self.name, names, [p for _, p in self.generators], self.brackets)

    def coefficient_algebra(self) -> CommutativeAlgebra | None:
        return self.coefficients.build() if self.coefficients else None


def _norm(brackets: dict) -> dict:
    return {k: {g: p for g, p in v.items() if p} for k, v in brackets.items() if any(v.values())}


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


_KEY = re.compile(r'\s*(?:"(?P<q>[^"]*)"|(?P<b>[A-Za-z_][A-Za-z0-9_]*))\s*=\s*')
_VAL = re.compile(r'(?:"(?P<s>[^"]*)"|(?P<n>-?\d+)|(?P<w>[A-Za-z_][A-Za-z0-9_]*))\s*$')


def _read_lines(text: str):
    """Yield (section, key, value, line, value_col) for each assignment."""
    section = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        s = line.strip()
        if s.startswith("["):
            if not s.endswith("]"):
                raise SpecError("unterminated section header", ln, line.index("[") + 1)
            section = s[1:-1].strip()
            if section not in SECTIONS:
                raise SpecError(f"unknown section [{section}]", ln, line.index("[") + 1)
            continue
        m = _KEY.match(line)
        if not m:
            raise SpecError("expected 'key = value'", ln, len(line) - len(line.lstrip()) + 1)
        key = m.group("q") if m.group("q") is not None else m.group("b")
        v = _VAL.match(line, m.end())
        if not v:
            raise SpecError("expected a quoted string, integer or word", ln, m.end() + 1)
        if v.group("s") is not None:
            value, col = v.group("s"), m.end() + 2
        elif v.group("n") is not None:
            value, col = int(v.group("n")), m.end() + 1
        else:
            value, col = v.group("w"), m.end() + 1
        yield section, key, value, ln, col


def parse_spec(text: str) -> AlgebraSpecFile:
    name = None
    gens: list[tuple[str, str]] = []
    raw_brackets = []
    coeff_lines = []
    bounds: dict = {}
    seen_keys = set()
    for section, key, value, ln, col in _read_lines(text):
        if (section, key) in seen_keys:
            raise SpecError(f"duplicate key {key!r}", ln, 1)
        seen_keys.add((section, key))
        if section is None:
            if key != "name":
                raise SpecError(f"unknown top-level key {key!r}", ln, 1)
            name = str(value)
        elif section == "generators":
            if key in RESERVED:
                raise SpecError(f"generator name {key!r} is reserved", ln, 1)
            if str(value).lower() not in ("even", "odd"):
                raise SpecError(f"parity must be even or odd, got {value!r}", ln, col)
            gens.append((key, str(value).lower()))
        elif section == "brackets":
            raw_brackets.append((key, value, ln, col))
        elif section == "coefficients":
            coeff_lines.append((key, value, ln, col))
        elif section == "bounds":
            if key not in ("deg_d", "deg_l") or not isinstance(value, int) or value < 0:
                raise SpecError(f"bad bound {key} = {value!r}", ln, col)
            bounds[key] = value
    if name is None:
        raise SpecError("missing 'name'", 1, 1)
    names = [g for g, _ in gens]
    brackets = {}
    for key, value, ln, col in raw_brackets:
        pair = [p.strip() for p in key.split(",")]
        if len(pair) != 2:
            raise SpecError(f"bracket key must be 'A,B', got {key!r}", ln, 1)
        for p in pair:
            if p not in names:
                raise SpecError(f"unknown generator {p!r} in bracket key", ln, 1)
        if not isinstance(value, str):
            raise SpecError("bracket value must be a quoted expression", ln, col)
        entry = parse_module_expr(value, names, ln, col)
        par = dict(gens)
        for g in entry:
            expect = (par[pair[0]] != par[pair[1]])
            if (par[g] == "odd") != expect:
                raise SpecError(f"parity violation: [{pair[0]}_x {pair[1]}] has an {par[g]} "
                                f"component on {g}", ln, col)
        if entry:
            brackets[tuple(pair)] = entry
    spec = AlgebraSpecFile(name, tuple(gens), brackets, _coefficients(coeff_lines), bounds)
    try:
        spec.to_algebra()
    except AlgebraError as exc:
        raise SpecError(str(exc)) from None
    if spec.coefficients:
        try:
            spec.coefficients.build()
        except AlgebraError as exc:
            raise SpecError(f"coefficient algebra: {exc}", coeff_lines[0][2]) from None
    return spec


def _coefficients(lines) -> CoefficientSpec | None:
    if not lines:
        return None
    spec = CoefficientSpec()
    kv = {k: (v, ln, col) for k, v, ln, col in lines}
    if "quotient" in kv:
        v, ln, col = kv.pop("quotient")
        if not isinstance(v, int) or v < 1:
            raise SpecError("quotient must be an integer >= 1", ln, col)
        if kv:
            raise SpecError("quotient shorthand excludes other coefficient keys", ln, 1)
        spec.quotient = v
        return spec
    if "basis" not in kv or "unit" not in kv:
        raise SpecError("coefficient table needs 'basis' and 'unit'", lines[0][2], 1)
    v, ln, col = kv.pop("basis")
    basis = tuple(b.strip() for b in str(v).split(","))
    if any(not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", b) or b in RESERVED for b in basis):
        raise SpecError("basis names must be identifiers other than d and x", ln, col)
    spec.basis = basis
    v, ln, col = kv.pop("unit")
    unit = parse_module_expr(str(v), basis, ln, col, allow_vars=False)
    spec.unit = {k: p.constant_term() for k, p in unit.items()}
    for key, (v, ln, col) in kv.items():
        pair = tuple(p.strip() for p in key.split(","))
        if len(pair) != 2 or any(p not in basis for p in pair):
            raise SpecError(f"bad product key {key!r}", ln, 1)
        entry = parse_module_expr(str(v), basis, ln, col, allow_vars=False)
        spec.table[pair] = {k: p.constant_term() for k, p in entry.items()}
    return spec


def render_spec(spec: AlgebraSpecFile) -> str:
    """Canonical text; parse_spec(render_spec(s)) == s."""
    names = [g for g, _ in spec.generators]
    out = [f'name = "{spec.name}"', "", "[generators]"]
    out += [f'{g} = "{p}"' for g, p in spec.generators]
    out += ["", "[brackets]"]
    for a in names:
        for b in names:
            entry = spec.brackets.get((a, b))
            if entry and any(entry.values()):
                out.append(f'"{a},{b}" = "{render_module(entry, names)}"')
    c = spec.coefficients
    if c:
        out += ["", "[coefficients]"]
        if c.quotient is not None:
            out.append(f"quotient = {c.quotient}")
        else:
            out.append(f'basis = "{", ".join(c.basis)}"')
            unit = {k: SPoly.const(v) for k, v in c.unit.items()}
            out.append(f'unit = "{render_module(unit, c.basis)}"')
            for (a, b), entry in sorted(c.table.items(), key=lambda kv: (c.basis.index(kv[0][0]),
                                                                         c.basis.index(kv[0][1]))):
                polys = {k: SPoly.const(v) for k, v in entry.items()}
                out.append(f'"{a},{b}" = "{render_module(polys, c.basis)}"')
    if spec.bounds:
        out += ["", "[bounds]"]
        out += [f"{k} = {spec.bounds[k]}" for k in ("deg_d", "deg_l") if k in spec.bounds]
    return "\n".join(out) + "\n"


def spec_from_algebra(alg: LCSAlgebra, bounds: dict | None = None) -> AlgebraSpecFile:
    gens = tuple((g, "odd" if p else "even") for g, p in zip(alg.generators, alg.parities))
    brackets = {}
    for i, a in enumerate(alg.generators):
        for j, b in enumerate(alg.generators):
            entry = {alg.generators[k]: p for k, p in enumerate(alg.S(i, j)) if p}
            if entry:
                brackets[(a, b)] = entry
    return AlgebraSpecFile(alg.name, gens, brackets, None, dict(bounds or {}))


def element_from_expr(alg: LCSAlgebra, text: str) -> ConformalElement:
    return alg.element(parse_module_expr(text, alg.generators))


