"""Graded homological algebra over k[x] and graded hypersurface rings.

Modules are cokernels of graded maps between graded free modules.  A free
module is recorded by the degrees of its basis vectors ("twists"): the basis
vector of ``R(-a)`` has twist ``a``.  Matrices are kept column-wise as sparse
vectors (see :mod:`genlocoh.groebner`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from itertools import combinations_with_replacement
from typing import Sequence

from . import groebner as gbm
from .groebner import (
    GB,
    IdealBasis,
    groebner_basis,
    intersect_ideals,
    kernel,
    poly_from_vec,
    relation_vectors,
    vec_add,
    vec_degree,
    vec_from_poly,
    vec_mul_poly,
    vec_scale,
)
from .poly import Polynomial, PolyRing

__all__ = [
    "GradedFreeModule",
    "GradedMap",
    "PresentedModule",
    "Complex",
    "HilbertSeries",
    "ResolutionTooShort",
    "ZeroModuleError",
    "minimal_free_resolution",
    "pd",
    "ext",
    "hom_module",
    "tensor",
    "direct_sum",
    "quotient_by_ideal",
    "annihilator",
    "hilbert_series",
    "hilbert_function",
    "depth",
    "bass_number",
    "krull_dim",
    "dim_of_gb",
    "residue_field",
    "degree_window",
]

INFINITE = math.inf
DEFAULT_SLACK = 2


class ResolutionTooShort(ValueError):
    pass


class ZeroModuleError(ValueError):
    pass


@dataclass(frozen=True)
class GradedFreeModule:
    twists: tuple

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)


@dataclass(frozen=True, eq=False)
class GradedMap:
    """A map ``source -> target``; ``columns[k]`` is the image of source basis vector ``k``."""

    ring: PolyRing
    source: GradedFreeModule
    target: GradedFreeModule
    columns: tuple

    @classmethod
    def from_matrix(cls, ring, rows, source_twists, target_twists):
        """Build from a row-major matrix of polynomials (or strings)."""
        nrows, ncols = len(target_twists), len(source_twists)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ValueError("matrix shape does not match twists")
        cols = []
        for k in range(ncols):
            v = {}
            for t in range(nrows):
                f = rows[t][k]
                if isinstance(f, str):
                    f = ring.parse(f)
                v.update(vec_from_poly(f, t))
            cols.append(v)
        m = cls(ring, GradedFreeModule(source_twists), GradedFreeModule(target_twists),
                tuple(cols))
        m.check_homogeneous()
        return m

    @property
    def matrix(self) -> list:
        rows = [[dict() for _ in self.columns] for _ in range(self.target.rank)]
        for k, col in enumerate(self.columns):
            for (t, e), c in col.items():
                rows[t][k][e] = c
        return [[Polynomial(self.ring, d) for d in r] for r in rows]

    def check_homogeneous(self):
        tt, st = self.target.twists, self.source.twists
        for k, col in enumerate(self.columns):
            for (t, e) in col:
                if sum(e) + tt[t] != st[k]:
                    raise ValueError(f"entry ({t},{k}) is not homogeneous of degree "
                                     f"{st[k] - tt[t]}")

    def is_zero(self) -> bool:
        return not any(self.columns)

    def compose(self, other: "GradedMap") -> "GradedMap":
        """``self o other``."""
        cols = tuple(apply_matrix(self.columns, c, self.ring.field.characteristic)
                     for c in other.columns)
        return GradedMap(self.ring, other.source, self.target, cols)

    def has_unit_entry(self) -> bool:
        return any(not any(e) for col in self.columns for (_, e) in col)


def apply_matrix(columns, v: dict, p: int) -> dict:
    """Image of the vector ``v`` (on the source basis) under the column matrix."""
    out: dict = {}
    for (k, e), c in v.items():
        col = columns[k]
        if not col:
            continue
        out = vec_add(out, vec_mul_poly([(e, c)], col, p), p)
    return out


class PresentedModule:
    """coker(relations : R^m -> R^r) with generators in degrees ``degrees``."""

    def __init__(self, ring: PolyRing, degrees: Sequence[int], relations=()):
        self.ring = ring
        self.degrees = tuple(degrees)
        self.relations = tuple(dict(r) for r in relations if r)
        for r in self.relations:
            for (q, _) in r:
                if q >= len(self.degrees):
                    raise ValueError("relation outside the generator range")
        self._cache: dict = {}

    # constructors -----------------------------------------------------
    @classmethod
    def free(cls, ring, degrees=(0,)):
        return cls(ring, degrees, ())

    @classmethod
    def cyclic(cls, ring, generators, degree=0):
        """R/I (shifted so its generator sits in ``degree``)."""
        gens = [ring.parse(g) if isinstance(g, str) else g for g in generators]
        for g in gens:
            if not g.is_homogeneous():
                raise ValueError(f"{g} is not homogeneous")
        return cls(ring, (degree,), [vec_from_poly(g) for g in gens if g])

    @classmethod
    def zero(cls, ring):
        return cls(ring, (), ())

    @classmethod
    def from_map(cls, presentation: GradedMap):
        return cls(presentation.ring, presentation.target.twists, presentation.columns)

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def presentation(self) -> GradedMap:
        degs = tuple(vec_degree(r, self.degrees) for r in self.relations)
        return GradedMap(self.ring, GradedFreeModule(degs), GradedFreeModule(self.degrees),
                         self.relations)

    def relation_degrees(self) -> tuple:
        return tuple(vec_degree(r, self.degrees) for r in self.relations)

    def check_homogeneous(self):
        for r in self.relations:
            if len({sum(e) + self.degrees[q] for (q, e) in r}) > 1:
                raise ValueError("inhomogeneous relation")

    def shift(self, k: int) -> "PresentedModule":
        """M(k): generator degrees drop by ``k``."""
        return PresentedModule(self.ring, [d - k for d in self.degrees], self.relations)

    # cached structure --------------------------------------------------
    def gb(self) -> GB:
        """Gröbner basis of the relation submodule (hypersurface relation adjoined)."""
        if "gb" not in self._cache:
            self._cache["gb"] = groebner_basis(self.ring, list(self.relations), self.rank,
                                               self.degrees)
        return self._cache["gb"]

    def minimal_presentation(self) -> "PresentedModule":
        """Prune unit entries so that generators are minimal."""
        if "minpres" not in self._cache:
            m = _prune(self)
            m._cache["minpres"] = m
            self._cache["minpres"] = m
        return self._cache["minpres"]

    def is_zero(self) -> bool:
        return self.minimal_presentation().rank == 0

    def normal_form(self, v: dict) -> dict:
        return self.gb().reduce(v)

    def __repr__(self):
        return f"PresentedModule(rank={self.rank}, degrees={self.degrees}, " \
               f"relations={len(self.relations)})"


def _prune(M: PresentedModule) -> PresentedModule:
    p = M.ring.field.characteristic
    rels = [dict(r) for r in M.relations]
    alive = list(range(M.rank))
    zero = (0,) * M.ring.nvars
    while True:
        hit = None
        for ci, col in enumerate(rels):
            for (q, e), c in col.items():
                if e == zero:
                    hit = (ci, q, c)
                    break
            if hit:
                break
        if hit is None:
            break
        ci, q, c = hit
        piv = rels.pop(ci)
        inv = pow(c, -1, p) if p else 1 / c
        # e_q = -inv * (piv - c e_q): substitute into every other column
        rest = {t: a for t, a in piv.items() if t[0] != q}
        sub = vec_scale(rest, (-inv) % p if p else -inv, p)
        new = []
        for col in rels:
            part = {t: a for t, a in col.items() if t[0] == q}
            keep = {t: a for t, a in col.items() if t[0] != q}
            for (qq, e), a in part.items():
                keep = vec_add(keep, vec_mul_poly([(e, a)], sub, p), p)
            if keep:
                new.append(keep)
        rels = new
        alive.remove(q)
    index = {q: i for i, q in enumerate(alive)}
    degs = [M.degrees[q] for q in alive]
    rels = [{(index[q], e): c for (q, e), c in col.items()} for col in rels]
    return PresentedModule(M.ring, degs, rels)


# --------------------------------------------------------------------------
# resolutions


@dataclass(eq=False)
class Complex:
    """Free resolution ``F_0 <- F_1 <- ...``; ``maps[i-1]`` is ``d_i : F_i -> F_{i-1}``.

    ``continues`` is set when the resolution was truncated at ``max_length``
    while further syzygies exist.  ``lifts[i-1]`` holds the augmented Gröbner
    basis of ``d_i`` used to lift elements of its image.
    """

    ring: PolyRing
    f0: GradedFreeModule
    maps: list
    continues: bool = False
    lifts: list = field(default_factory=list, repr=False)

    @property
    def length(self) -> int:
        return len(self.maps)

    def module(self, i: int) -> GradedFreeModule:
        if i == 0:
            return self.f0
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1].source
        return GradedFreeModule(())

    def differential(self, i: int) -> GradedMap:
        """``d_i : F_i -> F_{i-1}``, zero outside the computed range."""
        if 1 <= i <= len(self.maps):
            return self.maps[i - 1]
        return GradedMap(self.ring, self.module(i), self.module(i - 1),
                         tuple({} for _ in range(self.module(i).rank)))

    def betti(self) -> list:
        return [self.module(i).rank for i in range(self.length + 1)]

    def lift(self, i: int, w: dict):
        """Some ``u`` in F_i with ``d_i(u) = w``."""
        if w == {}:
            return {}
        u = gbm.lift(self.lifts[i - 1], self.module(i - 1).rank, w)
        if u is None:
            raise ValueError("element is not in the image of the differential")
        return u


def _min_generators(ring, vecs, rank, twists):
    if not vecs:
        return []
    g = groebner_basis(ring, vecs, rank, twists)
    return [vecs[i] for i in g.minimal]


def _reduce_mod_relation(ring, vecs, rank):
    if ring.hypersurface_terms is None:
        return vecs
    rel = groebner_basis(ring, [], rank, relations=relation_vectors(ring, rank))
    return [r for r in (rel.reduce(v) for v in vecs) if r]


def minimal_free_resolution(M: PresentedModule, max_length: int) -> Complex:
    if max_length < 0:
        raise ValueError("max_length must be >= 0")
    key = ("res",)
    cached = M._cache.get(key)
    if cached is not None and (cached.length >= max_length or not cached.continues):
        if cached.length <= max_length:
            return cached
        return Complex(cached.ring, cached.f0, cached.maps[:max_length], True,
                       cached.lifts[:max_length])
    Mm = M.minimal_presentation()
    ring = M.ring
    f0 = GradedFreeModule(Mm.degrees)
    cols = _reduce_mod_relation(ring, _min_generators(ring, list(Mm.relations), Mm.rank,
                                                      Mm.degrees), Mm.rank)
    maps, lifts = [], []
    twists = Mm.degrees
    continues = False
    while cols:
        if len(maps) == max_length:
            continues = True
            break
        degs = tuple(vec_degree(c, twists) for c in cols)
        maps.append(GradedMap(ring, GradedFreeModule(degs), GradedFreeModule(twists),
                              tuple(cols)))
        syz, aug = kernel(ring, cols, len(twists), twists, degs)
        lifts.append(aug)
        nxt = _min_generators(ring, syz, len(degs), degs)
        cols = _reduce_mod_relation(ring, nxt, len(degs))
        twists = degs
    res = Complex(ring, f0, maps, continues, lifts)
    M._cache[key] = res
    return res


def pd(M: PresentedModule):
    """Projective dimension; ``math.inf`` when the resolution does not stop.

    Over k[x_1..x_n] the resolution stops within n steps.  Over a hypersurface
    ring R a finite pd is at most depth R = dim R, so a nonzero free module at
    step dim R + 2 certifies pd = infinity.
    """
    if M.is_zero():
        return 0
    ring = M.ring
    if ring.hypersurface_terms is None:
        return minimal_free_resolution(M, ring.nvars + 1).length
    res = minimal_free_resolution(M, ring.dim + 2)
    if res.continues or res.length > ring.dim + 1:
        return INFINITE
    return res.length


# --------------------------------------------------------------------------
# Hom complexes and Ext


def _hom_free_into(N: PresentedModule, twists):
    """Hom(F, N) for F free with ``twists``: the free cover and its relations.

    Position ``k*s + t`` carries generator ``t`` of N in the summand for basis
    vector ``k`` of F, with degree ``deg_t(N) - twists[k]``.
    """
    s = N.rank
    cover = tuple(b - a for a in twists for b in N.degrees)
    rels = []
    for k in range(len(twists)):
        for r in N.relations:
            rels.append({(k * s + q, e): c for (q, e), c in r.items()})
    return cover, rels


def _dual_map_columns(d: GradedMap, s: int, p: int):
    """Columns of Hom(d, N): image of each cover basis vector ``(k, t)`` of Hom(F_{i-1}, N).

    ``d : F_i -> F_{i-1}``; the induced map goes Hom(F_{i-1}, N) -> Hom(F_i, N)
    and sends the vector with value ``e_t`` at ``k`` to ``l |-> d_{kl} e_t``.
    """
    r_src = d.target.rank
    cols = [dict() for _ in range(r_src * s)]
    for l, col in enumerate(d.columns):
        for (k, e), c in col.items():
            for t in range(s):
                cols[k * s + t][(l * s + t, e)] = c
    return cols


def hom_cohomology(F: Complex, i: int, N: PresentedModule) -> PresentedModule:
    """H^i(Hom(F, N)) as a presented module."""
    ring = N.ring
    p = ring.field.characteristic
    N = N.minimal_presentation()
    s = N.rank
    Fi = F.module(i)
    if s == 0 or Fi.rank == 0:
        return PresentedModule.zero(ring)
    cover_i, rel_i = _hom_free_into(N, Fi.twists)
    cover_n, rel_n = _hom_free_into(N, F.module(i + 1).twists)
    # cycles: v with delta(v) in relations of Hom(F_{i+1}, N)
    delta = _dual_map_columns(F.differential(i + 1), s, p) if F.module(i + 1).rank else \
        [dict() for _ in range(len(cover_i))]
    ncov = len(cover_i)
    if F.module(i + 1).rank:
        cols = delta + rel_n
        degs = list(cover_i) + [vec_degree(r, cover_n) for r in rel_n]
        syz, _ = kernel(ring, cols, len(cover_n), cover_n, degs)
        cycles = []
        for z in syz:
            v = {(q, e): c for (q, e), c in z.items() if q < ncov}
            if v:
                cycles.append(v)
    else:
        zero = (0,) * ring.nvars
        cycles = [{(q, zero): 1} for q in range(ncov)]
    # boundaries
    bounds = list(rel_i)
    if i >= 1 and F.module(i - 1).rank:
        bounds += [c for c in _dual_map_columns(F.differential(i), s, p) if c]
    bounds += relation_vectors(ring, ncov)
    g = groebner_basis(ring, cycles, ncov, cover_i, relations=bounds)
    gens = [cycles[j] for j in g.minimal]
    if not gens:
        return PresentedModule.zero(ring)
    gdeg = [vec_degree(v, cover_i) for v in gens]
    bdeg = [vec_degree(v, cover_i) for v in bounds]
    syz, _ = kernel(ring, gens + bounds, ncov, cover_i, gdeg + bdeg)
    ng = len(gens)
    rels = []
    for z in syz:
        v = {(q, e): c for (q, e), c in z.items() if q < ng}
        if v:
            rels.append(v)
    out = PresentedModule(ring, gdeg, rels)
    out._cache["cycle_reps"] = gens
    return out.minimal_presentation() if _has_units(out) else out


def _has_units(M):
    zero = (0,) * M.ring.nvars
    return any(e == zero for r in M.relations for (_, e) in r)


def ext(i: int, M: PresentedModule, N: PresentedModule, resolution: Complex | None = None):
    """Ext^i(M, N) as the i-th cohomology of Hom(F_., N), F_. resolving M."""
    if i < 0:
        raise ValueError("negative Ext index")
    F = resolution if resolution is not None else minimal_free_resolution(M, i + 1)
    if F.continues and F.length < i + 1:
        raise ResolutionTooShort(f"need a resolution of length {i + 1}, have {F.length}")
    return hom_cohomology(F, i, N)


def hom_module(N: PresentedModule, M: PresentedModule) -> PresentedModule:
    """Hom(N, M) as the kernel of Hom(G_0, M) -> Hom(G_1, M)."""
    Nm = N.minimal_presentation()
    ring = N.ring
    degs = tuple(Nm.relation_degrees())
    F = Complex(ring, GradedFreeModule(Nm.degrees),
                [GradedMap(ring, GradedFreeModule(degs), GradedFreeModule(Nm.degrees),
                           Nm.relations)] if Nm.relations else [])
    return hom_cohomology(F, 0, M)


def direct_sum(*mods: PresentedModule) -> PresentedModule:
    if not mods:
        raise ValueError("empty direct sum")
    ring = mods[0].ring
    degs, rels, off = [], [], 0
    for m in mods:
        degs += m.degrees
        rels += [{(q + off, e): c for (q, e), c in r.items()} for r in m.relations]
        off += m.rank
    return PresentedModule(ring, degs, rels)


def tensor(M: PresentedModule, N: PresentedModule) -> PresentedModule:
    """M ⊗ N with generators e_i ⊗ f_j at position ``i * rank(N) + j``."""
    ring = M.ring
    s = N.rank
    degs = [a + b for a in M.degrees for b in N.degrees]
    rels = []
    for r in M.relations:
        for j in range(s):
            rels.append({(q * s + j, e): c for (q, e), c in r.items()})
    for i in range(M.rank):
        for r in N.relations:
            rels.append({(i * s + q, e): c for (q, e), c in r.items()})
    return PresentedModule(ring, degs, rels)


def quotient_by_ideal(M: PresentedModule, a) -> PresentedModule:
    """M / aM."""
    gens = list(a.generators) if isinstance(a, IdealBasis) else list(a)
    rels = list(M.relations)
    for q in range(M.rank):
        for g in gens:
            if g:
                rels.append(vec_from_poly(g, q))
    return PresentedModule(M.ring, M.degrees, rels)


@lru_cache(maxsize=None)
def residue_field(ring: PolyRing) -> PresentedModule:
    return PresentedModule.cyclic(ring, ring.gens())


# --------------------------------------------------------------------------
# annihilators and dimension


def _submodule_colon_generator(M: PresentedModule, q: int) -> IdealBasis:
    """(U : e_q) = {r : r e_q in U} with U the relation module."""
    ring = M.ring
    zero = (0,) * ring.nvars
    cols = [{(q, zero): 1}] + list(M.relations)
    degs = [M.degrees[q]] + list(M.relation_degrees())
    syz, _ = kernel(ring, cols, M.rank, M.degrees, degs)
    firsts = [poly_from_vec(ring, z, 0) for z in syz]
    firsts = [f for f in firsts if f]
    return IdealBasis(ring, tuple(firsts))


def annihilator(M: PresentedModule) -> IdealBasis:
    """Ann M as the intersection of the colons (U : e_q) over generators."""
    if "ann" in M._cache:
        return M._cache["ann"]
    Mm = M.minimal_presentation()
    ring = M.ring
    if Mm.rank == 0:
        out = IdealBasis(ring, (ring.one(),))
    else:
        parts = [_submodule_colon_generator(Mm, q) for q in range(Mm.rank)]
        out = reduce(intersect_ideals, parts)
        out = gbm.buchberger(out) if out.generators else IdealBasis(ring, (), True)
    M._cache["ann"] = out
    return out


def dim_of_gb(gb: GB, nvars: int) -> int:
    """dim R/I from the leading monomials: largest independent variable set.

    Returns -1 for the unit ideal.
    """
    lms = [g.lm for g in gb.elems if g.pos == 0]
    zero = (0,) * nvars
    if zero in lms:
        return -1
    supports = [frozenset(i for i, x in enumerate(e) if x) for e in lms]
    best = 0
    # search subsets from largest size down
    from itertools import combinations

    for size in range(nvars, -1, -1):
        for S in combinations(range(nvars), size):
            Sset = set(S)
            if all(not s <= Sset for s in supports):
                return size
    return best


def krull_dim(M: PresentedModule) -> int:
    """dim M = dim R/Ann M; -1 for the zero module."""
    return dim_of_gb(annihilator(M).gb(), M.ring.nvars)


# --------------------------------------------------------------------------
# Hilbert functions and series


def _monomials_of_degree(n: int, d: int):
    if d < 0:
        return
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for v in combo:
            e[v] += 1
        yield tuple(e)


def standard_monomials(M: PresentedModule, j: int) -> list:
    """Basis of M_j as ``(position, exponents)`` pairs not in the leading module."""
    gb = M.gb()
    lms = gb.leading_monomials()
    n = M.ring.nvars
    out = []
    for q, dq in enumerate(M.degrees):
        cands = lms.get(q, [])
        for e in _monomials_of_degree(n, j - dq):
            if not any(all(a <= b for a, b in zip(l, e)) for l in cands):
                out.append((q, e))
    return out


def hilbert_function(M: PresentedModule, j: int) -> int:
    """dim_k M_j, counted from standard monomials."""
    return len(standard_monomials(M, j))


@dataclass(frozen=True)
class HilbertSeries:
    """numerator(t) / (1 - t)^nvars with a Laurent numerator ``{degree: coeff}``."""

    numerator: tuple
    nvars: int

    @classmethod
    def from_dict(cls, num: dict, nvars: int):
        return cls(tuple(sorted((d, c) for d, c in num.items() if c)), nvars)

    def coefficient(self, j: int) -> int:
        n = self.nvars
        total = 0
        for d, c in self.numerator:
            k = j - d
            if k < 0:
                continue
            total += c * (math.comb(k + n - 1, n - 1) if n else int(k == 0))
        return total

    def reduced(self):
        """Cancel common factors (1 - t); returns ``(numerator dict, power)``."""
        num = dict(self.numerator)
        power = self.nvars
        while power and num:
            lo = min(num)
            hi = max(num)
            # synthetic division by (1 - t)
            if sum(num.values()) != 0:
                break
            q = {}
            acc = 0
            for d in range(lo, hi):
                acc += num.get(d, 0)
                if acc:
                    q[d] = acc
            num = q
            power -= 1
        return num, power

    def dimension(self) -> int:
        num, power = self.reduced()
        return power if num else -1

    def total_length(self) -> int:
        num, power = self.reduced()
        if power:
            raise ValueError("module is not of finite length")
        return sum(num.values())


def _resolution_over_ambient(M: PresentedModule) -> Complex:
    ring = M.ring
    amb = ring.ambient
    rels = list(M.relations) + relation_vectors(ring, M.rank)
    Ms = PresentedModule(amb, M.degrees, rels)
    return minimal_free_resolution(Ms, amb.nvars + 1)


def hilbert_series(M: PresentedModule, resolution: Complex | None = None) -> HilbertSeries:
    """Alternating twist sums of a free resolution over the polynomial ring."""
    F = resolution if resolution is not None else _resolution_over_ambient(M)
    if F.continues:
        raise ResolutionTooShort("Hilbert series needs a finite resolution")
    num: dict = {}
    for i in range(F.length + 1):
        for a in F.module(i).twists:
            num[a] = num.get(a, 0) + (-1) ** i
    return HilbertSeries.from_dict(num, F.ring.nvars)


def finite_length(M: PresentedModule) -> int:
    """dim_k M for a module of finite length."""
    return hilbert_series(M).total_length()


def bass_number(i: int, M: PresentedModule) -> int:
    """dim_k Ext^i(k, M), summed over all degrees."""
    k = residue_field(M.ring)
    E = ext(i, k, M)
    if E.is_zero():
        return 0
    return finite_length(E)


def depth(M: PresentedModule) -> int:
    if M.is_zero():
        raise ZeroModuleError("depth of the zero module")
    for i in range(M.ring.dim + 1):
        if bass_number(i, M):
            return i
    raise AssertionError("no nonzero Bass number up to dim R")


def degree_window(M: PresentedModule, slack: int = DEFAULT_SLACK):
    """Degree range ``[min twist - slack, max twist + slack]`` or ``None`` for 0."""
    Mm = M.minimal_presentation()
    if Mm.rank == 0:
        return None
    return min(Mm.degrees) - slack, max(Mm.degrees) + slack
