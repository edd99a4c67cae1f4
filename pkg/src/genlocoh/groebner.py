"""Buchberger's algorithm for ideals and graded submodules of free modules.

Internally a module element is a ``dict`` mapping ``(position, exponents)`` to a
nonzero coefficient; ideals are the rank-one case.  Module orders are
position-over-term over the ring's monomial order.  Over a hypersurface ring
``k[x]/(f)`` every computation adjoins ``f * e_i`` for each free basis vector,
so normal forms automatically reduce modulo ``f``.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from operator import add, sub

from .poly import Polynomial, PolyRing, RingMismatch

__all__ = [
    "IdealBasis",
    "VectorElement",
    "SubmoduleBasis",
    "NotGroebner",
    "SaturationDiverged",
    "buchberger",
    "normal_form",
    "syzygies",
    "ideal_power",
    "colon",
    "saturation",
    "colon_and_saturation",
    "intersect_ideals",
    "ideal_contains",
    "s_pairs_reduce_to_zero",
    "GB",
    "groebner_basis",
    "kernel",
]

SATURATION_CAP = 64


class NotGroebner(ValueError):
    pass


class SaturationDiverged(RuntimeError):
    pass


# --------------------------------------------------------------------------
# vector helpers


def vec_from_poly(f: Polynomial, pos: int = 0) -> dict:
    return {(pos, e): c for e, c in f.terms}


def poly_from_vec(ring: PolyRing, v: dict, pos: int = 0) -> Polynomial:
    return Polynomial(ring, {e: c for (q, e), c in v.items() if q == pos})


def vec_components(ring: PolyRing, v: dict, rank: int) -> list:
    parts = [dict() for _ in range(rank)]
    for (q, e), c in v.items():
        parts[q][e] = c
    return [Polynomial(ring, p) for p in parts]


def vec_add(u: dict, v: dict, p: int) -> dict:
    out = dict(u)
    for t, c in v.items():
        s = out.get(t, 0) + c
        if p:
            s %= p
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def vec_scale(v: dict, c, p: int) -> dict:
    if not c:
        return {}
    if p:
        return {t: a * c % p for t, a in v.items()}
    return {t: a * c for t, a in v.items()}


def vec_mul_poly(terms, v: dict, p: int) -> dict:
    """Multiply vector ``v`` by the polynomial given as ``(exps, coeff)`` pairs."""
    out: dict = {}
    for e, c in terms:
        for (q, f), a in v.items():
            t = (q, tuple(map(add, e, f)))
            s = out.get(t, 0) + c * a
            if p:
                s %= p
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return out


def vec_shift_pos(v: dict, offset: int) -> dict:
    return {(q + offset, e): c for (q, e), c in v.items()}


def vec_degree(v: dict, twists) -> int:
    """Degree of a homogeneous vector (max over terms for inhomogeneous input)."""
    return max(sum(e) + twists[q] for (q, e) in v)


def relation_vectors(ring: PolyRing, rank: int) -> list:
    """``f * e_i`` for the hypersurface relation ``f``; empty for polynomial rings."""
    if ring.hypersurface_terms is None:
        return []
    return [{(i, e): c for e, c in ring.hypersurface_terms} for i in range(rank)]


# --------------------------------------------------------------------------
# core engine


class _Elem:
    __slots__ = ("pos", "lm", "vec", "tail", "sugar", "mask")

    def __init__(self, pos, lm, vec, tail, sugar):
        self.pos = pos
        self.lm = lm
        self.vec = vec
        self.tail = tail
        self.sugar = sugar
        self.mask = _mask(lm)


def _mask(e):
    m = 0
    for i, x in enumerate(e):
        if x:
            m |= 1 << i
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Pair:
    __slots__ = ("i", "j", "pos", "lcm", "sugar", "alive")

    def __init__(self, i, j, pos, lcm, sugar):
        self.i, self.j, self.pos, self.lcm, self.sugar = i, j, pos, lcm, sugar
        self.alive = True


class GB:
    """A reduced Gröbner basis of a submodule of a graded free module.

    ``minimal`` lists the indices of the input generators that survived
    reduction when processed in increasing degree; for homogeneous input these
    form a minimal generating set of the submodule (relation vectors excluded).
    """

    def __init__(self, ring, rank, twists, p):
        self.ring = ring
        self.rank = rank
        self.twists = tuple(twists)
        self.p = p
        okey = ring.order.key
        self._okey = okey
        self.elems: list = []
        self.by_pos: dict = {}
        self.minimal: list = []
        self._tkey = lambda t: (t[0],) + okey(t[1])

    # -- reduction ---------------------------------------------------
    def _reducer(self, pos, e, emask=None):
        cands = self.by_pos.get(pos)
        if not cands:
            return None
        if emask is None:
            emask = _mask(e)
        for g in cands:
            if g.mask & ~emask:
                continue
            if _divides(g.lm, e):
                return g
        return None

    def reduce(self, vec: dict, full: bool = True) -> dict:
        """Normal form of ``vec``; with ``full=False`` only the top is reduced."""
        p = self.p
        tkey = self._tkey
        dst = dict(vec)
        heap = [(tkey(t), t) for t in dst]
        heapq.heapify(heap)
        rem = {}
        while heap:
            _, t = heapq.heappop(heap)
            c = dst.get(t)
            if c is None:
                continue
            pos, e = t
            g = self._reducer(pos, e)
            if g is None:
                if not full:
                    return dst
                rem[t] = c
                del dst[t]
                continue
            del dst[t]
            shift = tuple(map(sub, e, g.lm))
            for (gp, ge), ga in g.tail:
                nt = (gp, tuple(map(add, ge, shift)))
                old = dst.get(nt)
                if old is None:
                    v = -c * ga
                    if p:
                        v %= p
                    dst[nt] = v
                    heapq.heappush(heap, (tkey(nt), nt))
                else:
                    v = old - c * ga
                    if p:
                        v %= p
                    if v:
                        dst[nt] = v
                    else:
                        del dst[nt]
        return rem

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec, full=False)

    def lead(self, vec: dict):
        return min(vec, key=self._tkey)

    def leading_monomials(self) -> dict:
        """position -> list of leading exponent vectors."""
        return {q: [g.lm for g in gs] for q, gs in self.by_pos.items()}

    def vectors(self) -> list:
        return [g.vec for g in self.elems]

    # -- construction ------------------------------------------------
    def _make(self, vec, sugar):
        t = min(vec, key=self._tkey)
        c = vec[t]
        if c != 1:
            inv = pow(c, -1, self.p) if self.p else 1 / c
            vec = vec_scale(vec, inv, self.p)
        items = sorted(vec.items(), key=lambda it: self._tkey(it[0]))
        return _Elem(t[0], t[1], vec, items[1:], sugar)

    def _index(self, elems):
        self.elems = elems
        self.by_pos = {}
        for g in elems:
            self.by_pos.setdefault(g.pos, []).append(g)
        for gs in self.by_pos.values():
            gs.sort(key=lambda g: (sum(g.lm), self._okey(g.lm)))


def groebner_basis(ring: PolyRing, gens, rank: int, twists=None,
                   relations: list | None = None) -> GB:
    """Run Buchberger on module vectors.

    ``relations`` are processed before ordinary generators of the same degree
    and never counted among the minimal generators.  Pass ``None`` to use the
    ring's hypersurface relation vectors.
    """
    p = ring.field.characteristic
    if twists is None:
        twists = (0,) * rank
    twists = tuple(twists)
    if relations is None:
        relations = relation_vectors(ring, rank)
    ideal_case = rank == 1
    gb = GB(ring, rank, twists, p)
    okey = ring.order.key

    work = []  # heap of (sugar, kind, tiebreak, payload)
    inputs = list(relations) + [g for g in gens]
    nrel = len(relations)
    for idx, v in enumerate(inputs):
        if v:
            kind = 1 if idx < nrel else 2
            heapq.heappush(work, (vec_degree(v, twists), kind, idx, idx))

    G: list = []
    active: list = []
    live_pairs: list = []
    by_pos_all: dict = {}
    counter = 0

    def update(hi):
        nonlocal counter, live_pairs
        h = G[hi]
        cands = []
        for i in range(len(G) - 1):
            if active[i] and G[i].pos == h.pos:
                cands.append((i, _lcm(G[i].lm, h.lm)))
        coprime = set()
        if ideal_case:
            for i, L in cands:
                if not (G[i].mask & h.mask):
                    coprime.add(i)
        D = []
        C = list(cands)
        while C:
            i, L = C.pop()
            if i in coprime:
                D.append((i, L))
                continue
            if any(_divides(L2, L) for _, L2 in C) or any(_divides(L2, L) for _, L2 in D):
                continue
            D.append((i, L))
        kept = []
        for pr in live_pairs:
            if not pr.alive:
                continue
            if pr.pos == h.pos and _divides(h.lm, pr.lcm):
                if _lcm(G[pr.i].lm, h.lm) != pr.lcm and _lcm(G[pr.j].lm, h.lm) != pr.lcm:
                    pr.alive = False
                    continue
            kept.append(pr)
        live_pairs = kept
        for i, L in D:
            if i in coprime:
                continue
            g = G[i]
            dl = sum(L)
            sugar = max(g.sugar - sum(g.lm), h.sugar - sum(h.lm)) + dl
            pr = _Pair(i, hi, h.pos, L, sugar)
            live_pairs.append(pr)
            counter += 1
            heapq.heappush(work, (sugar, 0, (okey(L), counter), pr))
        for i in range(len(G) - 1):
            if active[i] and G[i].pos == h.pos and _divides(h.lm, G[i].lm):
                active[i] = False

    def add_elem(vec, sugar):
        g = gb._make(vec, sugar)
        G.append(g)
        active.append(True)
        by_pos_all.setdefault(g.pos, []).append(g)
        gb.by_pos = by_pos_all
        update(len(G) - 1)

    gb.by_pos = by_pos_all
    minimal = []
    while work:
        sugar, kind, _, payload = heapq.heappop(work)
        if kind == 0:
            pr = payload
            if not pr.alive:
                continue
            pr.alive = False
            gi, gj = G[pr.i], G[pr.j]
            si = tuple(map(sub, pr.lcm, gi.lm))
            sj = tuple(map(sub, pr.lcm, gj.lm))
            s = vec_mul_poly([(si, 1)], gi.vec, p)
            s = vec_add(s, vec_mul_poly([(sj, -1 if not p else p - 1)], gj.vec, p), p)
            h = gb.reduce(s, full=False)
            if h:
                add_elem(h, sugar)
        else:
            idx = payload
            h = gb.reduce(inputs[idx], full=False)
            if h:
                if kind == 2:
                    minimal.append(idx - nrel)
                add_elem(h, sugar)

    # interreduce the active elements into a reduced basis
    final = [G[i] for i in range(len(G)) if active[i]]
    gb._index(final)
    reduced = []
    for g in final:
        others = [x for x in final if x is not g]
        sub_gb = GB(ring, rank, twists, p)
        sub_gb._index(others)
        tail = sub_gb.reduce(dict(g.tail), full=True)
        tail[(g.pos, g.lm)] = 1
        reduced.append(gb._make(tail, g.sugar))
    gb._index(reduced)
    gb.minimal = minimal
    return gb


def kernel(ring: PolyRing, columns: list, rank: int, twists, col_degrees):
    """Kernel of the map ``R^m -> R^rank`` whose images of basis vectors are ``columns``.

    Returns ``(syzygy_vectors, augmented_gb)``; the augmented basis can lift
    elements of the image back through the map (see :func:`lift`).
    """
    m = len(columns)
    aug = []
    zero = (0,) * ring.nvars
    for k, col in enumerate(columns):
        v = dict(col)
        v[(rank + k, zero)] = 1
        aug.append(v)
    tw = tuple(twists) + tuple(col_degrees)
    rels = relation_vectors(ring, rank)
    gb = groebner_basis(ring, aug, rank + m, tw, relations=rels)
    syz = []
    for g in gb.elems:
        if g.pos >= rank:
            syz.append(vec_shift_pos(g.vec, -rank))
    return syz, gb


def lift(aug_gb: GB, rank: int, w: dict):
    """Solve ``A u = w`` using the augmented basis from :func:`kernel`.

    Returns ``u`` (as a vector on the source basis) or ``None`` when ``w`` is
    not in the image.
    """
    r = aug_gb.reduce(w, full=True)
    if any(q < rank for (q, _) in r):
        return None
    p = aug_gb.p
    return {(q - rank, e): ((-c) % p if p else -c) for (q, e), c in r.items()}


# --------------------------------------------------------------------------
# public typed surface


@dataclass(frozen=True)
class IdealBasis:
    ring: PolyRing
    generators: tuple
    is_groebner: bool = False
    order: str | None = None
    _gb: GB | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.ring != self.ring:
                raise RingMismatch("generator from another ring")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, ring, gens):
        gens = [ring.parse(g) if isinstance(g, str) else g for g in gens]
        return cls(ring, tuple(gens))

    def gb(self) -> GB:
        if self._gb is None:
            g = groebner_basis(self.ring, [vec_from_poly(f) for f in self.generators if f], 1)
            object.__setattr__(self, "_gb", g)
        return self._gb

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_unit(self) -> bool:
        zero = (0,) * self.ring.nvars
        return any(g.lm == zero for g in self.gb().elems)

    def is_monomial(self) -> bool:
        return all(len(f.terms) == 1 for f in self.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@dataclass(frozen=True)
class VectorElement:
    components: tuple
    twists: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "twists", tuple(self.twists))
        if len(self.components) != len(self.twists):
            raise ValueError("components and twists differ in length")

    @property
    def rank(self):
        return len(self.components)

    def to_vec(self) -> dict:
        out = {}
        for q, f in enumerate(self.components):
            out.update(vec_from_poly(f, q))
        return out

    def is_homogeneous(self) -> bool:
        degs = {sum(e) + self.twists[q] for q, f in enumerate(self.components)
                for e, _ in f.terms}
        return len(degs) <= 1

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.components) + ")"


@dataclass(frozen=True)
class SubmoduleBasis:
    ring: PolyRing
    twists: tuple
    generators: tuple
    is_groebner: bool = False
    _gb: GB | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(self.twists))
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.twists != self.twists:
                raise ValueError("generators live in different free modules")

    @property
    def rank(self):
        return len(self.twists)

    def gb(self) -> GB:
        if self._gb is None:
            g = groebner_basis(self.ring, [v.to_vec() for v in self.generators],
                               self.rank, self.twists)
            object.__setattr__(self, "_gb", g)
        return self._gb


def _not_in_relation(ring, vec, rank):
    if ring.hypersurface_terms is None:
        return True
    rel = groebner_basis(ring.ambient, [], rank, relations=relation_vectors(ring, rank))
    return bool(rel.reduce(vec))


def _check_rings(items):
    rings = {x.ring for x in items}
    if len(rings) > 1:
        raise RingMismatch("mixed ring contexts")


def buchberger(basis, order=None):
    """Return the reduced Gröbner basis of an ideal or submodule, flagged as such."""
    if isinstance(basis, IdealBasis):
        ring = basis.ring if order is None else basis.ring.with_order(order)
        if not basis.generators:
            raise ValueError("empty generator list")
        _check_rings([basis] + list(basis.generators))
        gens = [Polynomial(ring, f.terms) for f in basis.generators]
        gb = groebner_basis(ring, [vec_from_poly(f) for f in gens if f], 1)
        polys = [poly_from_vec(ring, g.vec) for g in gb.elems
                 if _not_in_relation(ring, g.vec, 1)]
        polys.sort(key=lambda f: ring.order.key(f.terms[0][0]))
        return IdealBasis(ring, tuple(polys), True, ring.order.kind, gb)
    if isinstance(basis, SubmoduleBasis):
        ring = basis.ring if order is None else basis.ring.with_order(order)
        if not basis.generators:
            raise ValueError("empty generator list")
        gb = groebner_basis(ring, [v.to_vec() for v in basis.generators], basis.rank,
                            basis.twists)
        vecs = [VectorElement(vec_components(ring, g.vec, basis.rank), basis.twists)
                for g in gb.elems if _not_in_relation(ring, g.vec, basis.rank)]
        return SubmoduleBasis(ring, basis.twists, tuple(vecs), True, gb)
    raise TypeError(f"cannot compute a Gröbner basis of {type(basis).__name__}")


def normal_form(f, gb):
    """Fully reduced remainder of ``f`` modulo a Gröbner basis."""
    if not gb.is_groebner:
        raise NotGroebner("normal_form needs a Gröbner basis")
    if isinstance(f, Polynomial):
        if f.ring != gb.ring:
            raise RingMismatch("polynomial and basis live in different rings")
        return poly_from_vec(gb.ring, gb.gb().reduce(vec_from_poly(f)))
    if isinstance(f, VectorElement):
        r = gb.gb().reduce(f.to_vec())
        return VectorElement(vec_components(gb.ring, r, gb.rank), gb.twists)
    raise TypeError(type(f).__name__)


def syzygies(gb) -> SubmoduleBasis:
    """Generators of the module of relations among the generators of ``gb``."""
    if not gb.is_groebner:
        raise NotGroebner("syzygies needs a Gröbner basis")
    ring = gb.ring
    if isinstance(gb, IdealBasis):
        cols = [vec_from_poly(f) for f in gb.generators]
        rank, twists = 1, (0,)
    else:
        cols = [v.to_vec() for v in gb.generators]
        rank, twists = gb.rank, gb.twists
    degs = [vec_degree(c, twists) for c in cols]
    syz, _ = kernel(ring, cols, rank, twists, degs)
    m = len(cols)
    out = [VectorElement(vec_components(ring, s, m), degs) for s in syz
           if _not_in_relation(ring, s, m)]
    return SubmoduleBasis(ring, tuple(degs), tuple(out), False)


def ideal_power(a: IdealBasis, n: int) -> IdealBasis:
    """All ``n``-fold products of the generators of ``a`` (duplicates removed)."""
    if n < 1:
        raise ValueError("ideal power needs n >= 1")
    gens = [g for g in a.generators if g]
    prods = {a.ring.one()}
    for _ in range(n):
        prods = {f * g for f in prods for g in gens}
    out = sorted(prods, key=lambda f: a.ring.order.key(f.terms[0][0]) if f else ())
    return IdealBasis(a.ring, tuple(f for f in out if f))


def ideal_contains(ideal: IdealBasis, f: Polynomial) -> bool:
    return not ideal.gb().reduce(vec_from_poly(f), full=False)


def _from_gb_polys(ring, gb: GB):
    polys = [poly_from_vec(ring, g.vec) for g in gb.elems if _not_in_relation(ring, g.vec, 1)]
    polys.sort(key=lambda f: ring.order.key(f.terms[0][0]))
    return IdealBasis(ring, tuple(polys), True, ring.order.kind, gb)


def _colon_ideal(ideal: IdealBasis, f: Polynomial) -> IdealBasis:
    """(I : f) as the kernel of R -> R/I, r |-> r f."""
    ring = ideal.ring
    cols = [vec_from_poly(f)] + [vec_from_poly(g) for g in ideal.generators if g]
    degs = [max(sum(e) for e in (t[1] for t in c)) for c in cols]
    syz, _ = kernel(ring, cols, 1, (0,), degs)
    firsts = [poly_from_vec(ring, s, 0) for s in syz]
    firsts = [g for g in firsts if g]
    if not firsts:
        return IdealBasis(ring, (), True, ring.order.kind,
                          groebner_basis(ring, [], 1))
    gb = groebner_basis(ring, [vec_from_poly(g) for g in firsts], 1)
    return _from_gb_polys(ring, gb)


def _colon_module(sub: SubmoduleBasis, f: Polynomial) -> SubmoduleBasis:
    """(U : f) = {v : f v in U} inside the ambient free module."""
    ring = sub.ring
    r = sub.rank
    fv = vec_from_poly(f)
    # kernel of R^r (+) R^m -> F, (v, w) |-> f v - sum w_k u_k
    cols = []
    for q in range(r):
        cols.append(vec_mul_poly(f.terms, {(q, (0,) * ring.nvars): 1}, ring.field.characteristic))
    gens = [g.to_vec() for g in sub.generators]
    cols += gens
    fd = sum(f.terms[0][0])
    degs = [sub.twists[q] + fd for q in range(r)] + [vec_degree(g, sub.twists) for g in gens]
    syz, _ = kernel(ring, cols, r, sub.twists, degs)
    del fv
    vecs = []
    for s in syz:
        v = {(q, e): c for (q, e), c in s.items() if q < r}
        if v:
            vecs.append(v)
    tw = tuple(t for t in sub.twists)
    gb = groebner_basis(ring, vecs, r, tw)
    out = [VectorElement(vec_components(ring, g.vec, r), tw) for g in gb.elems
           if _not_in_relation(ring, g.vec, r)]
    return SubmoduleBasis(ring, tw, tuple(out), True, gb)


def colon(I, f: Polynomial):
    if not f:
        raise ValueError("colon by the zero polynomial")
    if isinstance(I, IdealBasis):
        return _colon_ideal(I, f)
    return _colon_module(I, f)


def _same(I, J) -> bool:
    a, b = I.gb(), J.gb()
    return all(b.contains(v) for v in a.vectors()) and all(a.contains(v) for v in b.vectors())


def saturation(I, f: Polynomial, cap: int = SATURATION_CAP):
    """(I : f^inf) by iterated colon, erroring after ``cap`` rounds."""
    cur = I
    for _ in range(cap):
        nxt = colon(cur, f)
        if _same(nxt, cur):
            return nxt
        cur = nxt
    raise SaturationDiverged(f"saturation did not stabilise within {cap} colons")


def colon_and_saturation(I, f: Polynomial):
    return colon(I, f), saturation(I, f)


def intersect_ideals(I: IdealBasis, J: IdealBasis) -> IdealBasis:
    """I ∩ J via the kernel of R -> R/I (+) R/J."""
    ring = I.ring
    n = ring.nvars
    one = (0,) * n
    cols = [{(0, one): 1, (1, one): 1}]
    cols += [vec_from_poly(g, 0) for g in I.generators if g]
    cols += [vec_from_poly(g, 1) for g in J.generators if g]
    degs = [0] + [vec_degree(c, (0, 0)) for c in cols[1:]]
    syz, _ = kernel(ring, cols, 2, (0, 0), degs)
    firsts = [poly_from_vec(ring, s, 0) for s in syz]
    gb = groebner_basis(ring, [vec_from_poly(g) for g in firsts if g], 1)
    return _from_gb_polys(ring, gb)


def s_pairs_reduce_to_zero(gb: GB) -> bool:
    """Exhaustive Buchberger criterion check on a computed basis."""
    p = gb.p
    elems = gb.elems
    rels = relation_vectors(gb.ring, gb.rank)
    for v in rels:
        if gb.reduce(v):
            return False
    for a in range(len(elems)):
        for b in range(a + 1, len(elems)):
            gi, gj = elems[a], elems[b]
            if gi.pos != gj.pos:
                continue
            L = _lcm(gi.lm, gj.lm)
            s = vec_mul_poly([(tuple(map(sub, L, gi.lm)), 1)], gi.vec, p)
            s = vec_add(s, vec_mul_poly([(tuple(map(sub, L, gj.lm)), -1 if not p else p - 1)],
                                        gj.vec, p), p)
            if gb.reduce(s):
                return False
    return True
