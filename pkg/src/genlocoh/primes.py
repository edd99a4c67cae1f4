"""Dimension, minimal primes, associated primes and support tests.

Minimal primes are exact for monomial ideals.  Other ideals are split along
factors of Gröbner basis elements (variables and linear forms) until every
branch is a certified prime: an ideal whose reduced basis consists of linear
forms plus at most one irreducible binary form in the remaining variables.
Anything else is reported as incomplete instead of guessed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_degree, gf_eval, gf_factor_sqf, gf_gcd, gf_pow_mod, gf_strip, gf_sub,
)

from .groebner import IdealBasis, poly_from_vec, vec_from_poly
from .homalg import PresentedModule, annihilator, dim_of_gb, ext
from .poly import Polynomial, PolyRing

__all__ = [
    "PrimeIdeal",
    "AssReport",
    "dim_of_ideal",
    "minimal_primes",
    "monomial_minimal_primes",
    "associated_primes",
    "supp_contains",
    "ideal_sum",
]

MONOMIAL = "monomial-prime"
VARS_PLUS_IRREDUCIBLE = "variables-plus-irreducible"
DECLARED = "declared"

# bound on p * degree for exhaustive searches over F_p
SEARCH_BUDGET = 10**4


@dataclass(frozen=True, eq=False)
class PrimeIdeal:
    basis: IdealBasis
    height: int
    certificate: str

    @property
    def ring(self) -> PolyRing:
        return self.basis.ring

    @property
    def key(self):
        gb = self.basis.gb()
        return tuple(sorted(tuple(sorted(g.vec.items())) for g in gb.elems))

    def __eq__(self, other):
        return isinstance(other, PrimeIdeal) and self.ring == other.ring and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return str(self.basis) if self.basis.generators else "(0)"

    __repr__ = __str__

    def contains(self, f: Polynomial) -> bool:
        return not self.basis.gb().reduce(vec_from_poly(f), full=False)

    def contains_ideal(self, I: IdealBasis) -> bool:
        return all(self.contains(g) for g in I.generators)


@dataclass(frozen=True)
class AssReport:
    primes: tuple
    complete: bool = True

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def as_set(self) -> frozenset:
        return frozenset(self.primes)


def ideal_sum(I: IdealBasis, J) -> IdealBasis:
    if isinstance(J, PrimeIdeal):
        J = J.basis
    gens = list(J.generators) if isinstance(J, IdealBasis) else list(J)
    return IdealBasis(I.ring, tuple(I.generators) + tuple(gens))


def dim_of_ideal(I: IdealBasis) -> int:
    """dim R/I by maximal independent sets of the initial ideal; -1 for (1)."""
    return dim_of_gb(I.gb(), I.ring.nvars)


def _height(ring: PolyRing, gb) -> int:
    return ring.dim - dim_of_gb(gb, ring.nvars)


def _gb_polys(I: IdealBasis) -> list:
    """Reduced Gröbner basis elements as polynomials, excluding multiples of the relation."""
    ring = I.ring
    out = []
    rel = ring.relation
    for g in I.gb().elems:
        f = poly_from_vec(ring, g.vec)
        if rel is not None and _exact_divide(f, rel) is not None:
            continue
        out.append(f)
    return out


def _make_prime(I: IdealBasis, cert: str) -> PrimeIdeal:
    ring = I.ring
    polys = _gb_polys(I)
    polys.sort(key=lambda f: ring.order.key(f.terms[0][0]))
    basis = IdealBasis(ring, tuple(polys), True, ring.order.kind, I.gb())
    return PrimeIdeal(basis, _height(ring, I.gb()), cert)


# --------------------------------------------------------------------------
# monomial ideals


def _supports(monos) -> list:
    sets = {frozenset(i for i, x in enumerate(e) if x) for e in monos}
    return [s for s in sets if not any(t < s for t in sets)]


def _minimal_covers(edges: list, n: int) -> list:
    covers = set()

    def grow(chosen: frozenset, remaining: list):
        todo = [e for e in remaining if not (e & chosen)]
        if not todo:
            covers.add(chosen)
            return
        e = min(todo, key=len)
        for v in sorted(e):
            grow(chosen | {v}, todo)

    grow(frozenset(), edges)
    return sorted((c for c in covers if not any(d < c for d in covers)),
                  key=lambda c: (len(c), sorted(c)))


def monomial_minimal_primes(ring: PolyRing, monomials) -> list:
    """Variable subsets generating the minimal primes of a monomial ideal."""
    monos = [tuple(m) for m in monomials]
    if any(not any(m) for m in monos):
        return []
    return _minimal_covers(_supports(monos), ring.nvars)


def _variable_prime(ring: PolyRing, subset) -> PrimeIdeal:
    gens = tuple(ring.var(i) for i in sorted(subset))
    I = IdealBasis(ring, gens)
    return _make_prime(I, MONOMIAL)


# --------------------------------------------------------------------------
# factoring helpers (variables and linear forms only)


def _exact_divide(f: Polynomial, g: Polynomial):
    """Quotient f / g if g divides f exactly, else None."""
    ring = f.ring
    p = ring.field.characteristic
    lt_e, lt_c = g.terms[0]
    inv = ring.field.inv(lt_c)
    rem = dict(f.terms)
    quo = {}
    key = ring.order.key
    while rem:
        e = min(rem, key=key)
        c = rem[e]
        if any(a < b for a, b in zip(e, lt_e)):
            return None
        s = tuple(a - b for a, b in zip(e, lt_e))
        q = c * inv
        if p:
            q %= p
        quo[s] = q
        for ge, gc in g.terms:
            t = tuple(a + b for a, b in zip(ge, s))
            v = rem.get(t, 0) - q * gc
            if p:
                v %= p
            if v:
                rem[t] = v
            else:
                rem.pop(t, None)
    return Polynomial(ring, quo)


def _univariate_roots(coeffs, p: int):
    """Roots in the base field of ``sum coeffs[k] t^k``; None if out of budget."""
    while coeffs and not coeffs[-1]:
        coeffs = coeffs[:-1]
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if p:
        if p * deg > SEARCH_BUDGET:
            return _roots_by_gcd(coeffs, p)
        roots = []
        for t in range(p):
            acc = 0
            for c in reversed(coeffs):
                acc = (acc * t + c) % p
            if acc == 0:
                roots.append(t)
        return roots
    # rational root theorem on the integer-cleared polynomial
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in coeffs]
    roots = set()
    k = 0
    while ints[k] == 0:
        k += 1
    if k:
        roots.add(Fraction(0))
    ints = ints[k:]
    a0, an = abs(ints[0]), abs(ints[-1])
    if len(ints) == 1:
        return sorted(roots)

    def divisors(m):
        return [d for d in range(1, m + 1) if m % d == 0]

    if a0 > 10**6 or an > 10**6:
        return None
    for num in divisors(a0):
        for den_ in divisors(an):
            for sgn in (1, -1):
                r = Fraction(sgn * num, den_)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * r + c
                if acc == 0:
                    roots.add(r)
    return sorted(roots)


def _roots_by_gcd(coeffs, p: int):
    """Roots mod p read off from gcd(f, t^p - t), which splits into linear factors."""
    f = gf_strip([c % p for c in reversed(coeffs)])
    t = [1, 0]
    h = gf_gcd(f, gf_sub(gf_pow_mod(t, p, f, p, ZZ), t, p, ZZ), p, ZZ)
    n = gf_degree(h)
    if n <= 0:
        return []
    _, factors = gf_factor_sqf(h, p, ZZ)
    roots = sorted(int((-fac[1]) % p) for fac in factors)
    if len(roots) != n or any(gf_eval(f, r, p, ZZ) for r in roots):
        return None
    return roots


def _binary_restriction(f: Polynomial, k: int, i: int):
    """Coefficients of f(x_k = t, x_i = 1, others = 0) in t."""
    coeffs: dict = {}
    for e, c in f.terms:
        if any(x for j, x in enumerate(e) if j not in (k, i)):
            continue
        coeffs[e[k]] = coeffs.get(e[k], 0) + c
    if not coeffs:
        return None
    top = max(coeffs)
    return [coeffs.get(d, 0) for d in range(top + 1)]


def _linear_factor(f: Polynomial):
    """A variable or linear form dividing f properly, ``(factor, cofactor)``.

    Returns ``None`` when no such factor exists and ``False`` when the search
    is out of budget (factor status unknown).
    """
    ring = f.ring
    fld = ring.field
    p = fld.characteristic
    if f.degree() < 2:
        return None
    n = ring.nvars
    for i in range(n):
        if all(e[i] for e, _ in f.terms):
            x = ring.var(i)
            return x, _exact_divide(f, x)
    if not f.is_homogeneous():
        return False
    used = sorted(f.variables_used())
    unknown = False
    for k in used:
        cand_lists = []
        ok = True
        for i in used:
            if i <= k:
                continue
            coeffs = _binary_restriction(f, k, i)
            if coeffs is None:
                ok = False
                break
            roots = _univariate_roots(coeffs, p)
            if roots is None:
                ok = False
                break
            # x_k + c x_i vanishes at x_k = t, x_i = 1 iff t = -c
            cand_lists.append((i, sorted({fld(-r) for r in roots}, key=str)))
        if not ok:
            unknown = True
            continue
        for choice in product(*[c for _, c in cand_lists]):
            terms = {tuple(1 if j == k else 0 for j in range(n)): 1}
            for (i, _), c in zip(cand_lists, choice):
                if c:
                    terms[tuple(1 if j == i else 0 for j in range(n))] = c
            lin = Polynomial(ring, terms)
            q = _exact_divide(f, lin)
            if q is not None:
                return lin, q
    return False if unknown else None


def _irreducible_binary_form(g: Polynomial):
    """True/False for a binary form in two variables, None if uncertifiable."""
    used = sorted(g.variables_used())
    if len(used) != 2 or not g.is_homogeneous():
        return None
    u, v = used
    deg = g.degree()
    if deg == 1:
        return True
    coeffs = _binary_restriction(g, u, v)
    if coeffs is None or len(coeffs) - 1 != deg:
        return False  # v divides g
    if deg > 3:
        return None
    roots = _univariate_roots(coeffs, g.ring.field.characteristic)
    if roots is None:
        return None
    return not roots


def _certify_prime(I: IdealBasis):
    """Certificate name if the reduced basis has a recognised prime shape, else None."""
    polys = _gb_polys(I)
    if not polys:
        return MONOMIAL
    linear = [f for f in polys if f.degree() == 1]
    other = [f for f in polys if f.degree() != 1]
    if not other:
        if all(len(f.terms) == 1 for f in linear):
            return MONOMIAL
        return VARS_PLUS_IRREDUCIBLE
    if len(other) > 1:
        return None
    g = other[0]
    lead_vars = {next(i for i, x in enumerate(f.terms[0][0]) if x) for f in linear}
    if g.variables_used() & lead_vars:
        return None
    if _irreducible_binary_form(g):
        return VARS_PLUS_IRREDUCIBLE
    return None


# --------------------------------------------------------------------------
# minimal primes


def _is_monomial_ideal(I: IdealBasis) -> bool:
    if I.ring.hypersurface_terms is not None:
        return False
    return all(len(g.vec) == 1 for g in I.gb().elems)


def _with(I: IdealBasis, f: Polynomial) -> IdealBasis:
    return IdealBasis(I.ring, tuple(_gb_polys(I)) + (f,))


def _split(I: IdealBasis, out: list) -> bool:
    """Collect prime components of V(I) into ``out``; return completeness."""
    if I.is_unit():
        return True
    if _is_monomial_ideal(I):
        monos = [g.lm for g in I.gb().elems]
        for S in monomial_minimal_primes(I.ring, monos):
            out.append(_variable_prime(I.ring, S))
        return True
    cert = _certify_prime(I)
    if cert is not None:
        out.append(_make_prime(I, cert))
        return True
    polys = sorted(_gb_polys(I), key=lambda f: (f.degree(), len(f.terms)))
    for g in polys:
        fac = _linear_factor(g)
        if not fac:
            continue
        lin, co = fac
        if co.is_constant():
            continue
        if _is_power_of(co, lin):
            return _split(_with(I, lin), out)
        left = _split(_with(I, lin), out)
        right = _split(_with(I, co), out)
        return left and right
    return False


def _is_power_of(f: Polynomial, lin: Polynomial) -> bool:
    cur = f
    while not cur.is_constant():
        cur = _exact_divide(cur, lin)
        if cur is None:
            return False
    return True


def _minimize(primes: list) -> list:
    uniq = []
    for P in primes:
        if P not in uniq:
            uniq.append(P)
    keep = []
    for P in uniq:
        if any(Q is not P and P.contains_ideal(Q.basis) and not Q.contains_ideal(P.basis)
               for Q in uniq):
            continue
        keep.append(P)
    return sorted(keep, key=lambda P: (P.height, str(P)))


def minimal_primes(I: IdealBasis) -> AssReport:
    if I.is_unit():
        return AssReport((), True)
    found: list = []
    complete = _split(I, found)
    return AssReport(tuple(_minimize(found)), complete)


# --------------------------------------------------------------------------
# associated primes and support


def _ambient_module(M: PresentedModule) -> PresentedModule:
    ring = M.ring
    if ring.hypersurface_terms is None:
        return M
    amb = ring.ambient
    from .groebner import relation_vectors

    return PresentedModule(amb, M.degrees, list(M.relations) + relation_vectors(ring, M.rank))


def _to_ring(P: PrimeIdeal, ring: PolyRing) -> PrimeIdeal:
    if P.ring == ring:
        return P
    gens = tuple(Polynomial(ring, f.terms) for f in P.basis.generators)
    I = IdealBasis(ring, gens)
    return _make_prime(I, P.certificate)


def associated_primes(M: PresentedModule) -> AssReport:
    """Ass M: codim-c minimal primes of Ann Ext^c(M, S) for c = 0..n.

    Over a hypersurface ring R = S/(f) the computation runs over S (Ass_R M
    and Ass_S M correspond) and heights are reported in R.
    """
    if "ass" in M._cache:
        return M._cache["ass"]
    ring = M.ring
    if M.is_zero():
        rep = AssReport((), True)
        M._cache["ass"] = rep
        return rep
    Ms = _ambient_module(M.minimal_presentation())
    amb = Ms.ring
    S = PresentedModule.free(amb)
    found = []
    complete = True
    for c in range(amb.nvars + 1):
        E = ext(c, Ms, S)
        if E.is_zero():
            continue
        J = annihilator(E)
        rep = minimal_primes(J)
        complete = complete and rep.complete
        for P in rep.primes:
            if P.height == c:
                found.append(_to_ring(P, ring))
    uniq = []
    for P in found:
        if P not in uniq:
            uniq.append(P)
    rep = AssReport(tuple(sorted(uniq, key=lambda P: (P.height, str(P)))), complete)
    M._cache["ass"] = rep
    return rep


def supp_contains(N: PresentedModule, P: PrimeIdeal) -> bool:
    """P in Supp N, i.e. Ann N ⊆ P."""
    if N.is_zero():
        return False
    return P.contains_ideal(annihilator(N))
