"""Exact multivariate polynomials over Q and prime fields.

Polynomials are immutable.  Terms are kept as a tuple of ``(exponents, coeff)``
pairs sorted leading-first under the ring's monomial order, so the leading
term is always ``terms[0]``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

import sympy

__all__ = [
    "FieldSpec",
    "MonomialOrder",
    "GREVLEX",
    "LEX",
    "Cmp",
    "compare",
    "PolyRing",
    "Polynomial",
    "RingMismatch",
    "ParseError",
]

MAX_CHARACTERISTIC = 2**63


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    def __init__(self, message, column=None):
        super().__init__(message if column is None else f"{message} (column {column})")
        self.column = column


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: Q when ``characteristic == 0``, else F_p."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p < 0:
            raise ValueError(f"negative characteristic {p}")
        if p:
            if p >= MAX_CHARACTERISTIC:
                raise ValueError(f"characteristic {p} exceeds 2^63")
            if not sympy.isprime(p):
                raise ValueError(f"characteristic {p} is not prime")

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime-field"

    def __call__(self, c):
        """Coerce an int or Fraction into canonical field representation."""
        p = self.characteristic
        if p == 0:
            return Fraction(c)
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, p) % p
        return int(c) % p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        return 1 / Fraction(a) if p == 0 else pow(a, -1, p)

    def __str__(self):
        return "QQ" if self.characteristic == 0 else f"F({self.characteristic})"


class MonomialOrder:
    """A term order on exponent vectors.

    ``key(e)`` is a sort key where *smaller keys are larger monomials*, so
    ``sorted(monos, key=order.key)`` lists monomials leading-first and
    ``heapq`` pops the leading monomial.
    """

    def __init__(self, kind: str):
        if kind not in ("grevlex", "lex"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        if kind == "grevlex":
            self.key = lru_cache(maxsize=None)(_grevlex_key)
        else:
            self.key = lru_cache(maxsize=None)(_lex_key)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and other.kind == self.kind

    def __hash__(self):
        return hash(self.kind)

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})"

    def position_over_term(self) -> "PositionOverTerm":
        return PositionOverTerm(self)


def _grevlex_key(e):
    return (-sum(e),) + e[::-1]


def _lex_key(e):
    return tuple(-x for x in e)


class PositionOverTerm:
    """Module order: lower position index wins, ties broken by the inner order."""

    def __init__(self, inner: MonomialOrder):
        self.inner = inner
        self.kind = f"position-over-term({inner.kind})"

    def key(self, term):
        pos, e = term
        return (pos,) + self.inner.key(e)


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def compare(m1, m2, order: MonomialOrder = GREVLEX) -> Cmp:
    m1, m2 = tuple(m1), tuple(m2)
    if len(m1) != len(m2):
        raise ValueError("exponent vectors of different length")
    k1, k2 = order.key(m1), order.key(m2)
    if k1 == k2:
        return Cmp.EQUAL
    return Cmp.GREATER if k1 < k2 else Cmp.LESS


@dataclass(frozen=True)
class PolyRing:
    """k[x_1..x_n], optionally modulo one homogeneous hypersurface relation.

    The relation is stored as raw terms; arithmetic never reduces by it.
    Gröbner computations adjoin it (see :mod:`genlocoh.groebner`).
    """

    variables: tuple
    field: FieldSpec = FieldSpec(0)
    order: MonomialOrder = dc_field(default=GREVLEX)
    hypersurface_terms: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for v in self.variables:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def ambient(self) -> "PolyRing":
        if self.hypersurface_terms is None:
            return self
        return PolyRing(self.variables, self.field, self.order)

    @property
    def relation(self) -> "Polynomial | None":
        if self.hypersurface_terms is None:
            return None
        return Polynomial(self, dict(self.hypersurface_terms))

    @property
    def dim(self) -> int:
        """Krull dimension of the ring."""
        return self.nvars - (self.hypersurface_terms is not None)

    def quotient(self, f: "Polynomial") -> "PolyRing":
        """k[x]/(f) for a homogeneous f of degree >= 2."""
        if self.hypersurface_terms is not None:
            raise ValueError("ring already has a hypersurface relation")
        if f.ring.variables != self.variables or f.ring.field != self.field:
            raise RingMismatch("relation from another ring")
        if not f.is_homogeneous() or f.degree() < 2:
            raise ValueError("hypersurface must be homogeneous of degree >= 2")
        return PolyRing(self.variables, self.field, self.order, f.terms)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, self.field, order, self.hypersurface_terms)

    def with_field(self, fld: FieldSpec) -> "PolyRing":
        hyp = None
        if self.hypersurface_terms is not None:
            hyp = tuple((e, fld(c if fld.characteristic else _as_fraction(c)))
                        for e, c in self.hypersurface_terms)
        return PolyRing(self.variables, fld, self.order, hyp)

    # constructors -----------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def gens(self) -> list:
        return [self.var(i) for i in range(self.nvars)]

    def var(self, i) -> "Polynomial":
        if isinstance(i, str):
            i = self.variables.index(i)
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def monomial(self, exps, coeff=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): coeff})

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __str__(self):
        s = f"{self.field}[{','.join(self.variables)}]"
        if self.hypersurface_terms is not None:
            s += f"/({self.relation})"
        return s


def _as_fraction(c):
    return Fraction(c)


class Polynomial:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping | Iterable = ()):
        fld = ring.field
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        n = ring.nvars
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent vector {e} has wrong length for {ring}")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            acc[e] = acc.get(e, 0) + fld(c)
        key = ring.order.key
        self.ring = ring
        self.terms = tuple(sorted(((e, fld(c)) for e, c in acc.items() if fld(c)),
                                  key=lambda t: key(t[0])))
        self._hash = None

    @classmethod
    def _raw(cls, ring, sorted_terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = sorted_terms
        p._hash = None
        return p

    # basic queries ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def as_dict(self) -> dict:
        return dict(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def leading_term(self, order: MonomialOrder | None = None):
        """Return ``(exponents, coefficient)`` of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        if order is None or order == self.ring.order:
            return self.terms[0]
        return min(self.terms, key=lambda t: order.key(t[0]))

    def leading_monomial(self, order=None):
        return self.leading_term(order)[0]

    def coefficient(self, exps):
        return dict(self.terms).get(tuple(exps), self.ring.field(0))

    def variables_used(self) -> set:
        return {i for e, _ in self.terms for i, x in enumerate(e) if x}

    # arithmetic -------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Polynomial):
            return self.ring.const(other)
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        other = self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return Polynomial(self.ring, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, tuple((e, self.ring.field(-c)) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return Polynomial(self.ring, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c):
        c = self.ring.field(c)
        return Polynomial(self.ring, {e: c * a for e, a in self.terms})

    def monic(self):
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.terms[0][1]))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, self.terms))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


# text format -------------------------------------------------------------

def _coeff_text(c, p):
    if p and c > p // 2:
        c = c - p
    return str(c)


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    p = f.ring.field.characteristic
    names = f.ring.variables
    out = []
    for idx, (e, c) in enumerate(f.terms):
        text = _coeff_text(c, p)
        neg = text.startswith("-")
        mag = text[1:] if neg else text
        factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
        if mag == "1" and factors:
            body = "*".join(factors)
        else:
            body = "*".join([mag] + factors)
        if idx == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse ``3*x^2*y - y^3`` style text.  Whitespace is insignificant."""
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos + 1)
        kind = m.lastindex
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    if not tokens:
        raise ParseError("empty polynomial", 1)
    acc: dict = {}
    n = ring.nvars
    i = 0

    def expect_number():
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != 1 or "/" in tokens[i][1]:
            col = tokens[i][2] if i < len(tokens) else len(text) + 1
            raise ParseError("expected an integer exponent", col)
        i += 1
        return int(tokens[i - 1][1])

    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == 5:
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise ParseError("dangling sign", len(text))
        coeff = Fraction(sign)
        exps = [0] * n
        need_factor = True
        while need_factor:
            if i >= len(tokens):
                raise ParseError("expected a factor", len(text) + 1)
            kind, val, col = tokens[i]
            if kind == 1:
                coeff *= Fraction(val)
                i += 1
            elif kind == 2:
                if val not in ring.variables:
                    raise ParseError(f"unknown variable {val!r}", col)
                i += 1
                k = 1
                if i < len(tokens) and tokens[i][0] == 3:
                    i += 1
                    k = expect_number()
                exps[ring.variables.index(val)] += k
            else:
                raise ParseError(f"unexpected {val!r}", col)
            if i < len(tokens) and tokens[i][0] == 4:
                i += 1
            else:
                need_factor = False
        if i < len(tokens) and tokens[i][0] != 5:
            raise ParseError(f"unexpected {tokens[i][1]!r}", tokens[i][2])
        e = tuple(exps)
        acc[e] = acc.get(e, 0) + coeff
    fld = ring.field
    if fld.characteristic:
        for c in acc.values():
            if c.denominator % fld.characteristic == 0:
                raise ParseError("denominator divisible by the characteristic")
    return Polynomial(ring, acc)
