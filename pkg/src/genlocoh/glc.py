"""Vanishing of the top generalized local cohomology module H^d_a(M, N).

Two independent routes are provided:

* :func:`predict_top_vanishing` decides ``H^d_a(M,N) = 0`` from associated
  primes: it vanishes iff ``dim R/(a + p) > 0`` for every ``p`` in
  ``Ass M ∩ Supp N``.
* :func:`oracle_colimit` computes the direct system ``Ext^i(M/a^n M, N)``
  degree by degree, together with the maps induced by ``M/a^{n+1}M -> M/a^nM``,
  and reads off whether classes survive.

Completion.  The criterion is stated over the completion at the maximal
ideal.  For the standard graded rings used here every prime ``p`` of ``R``
extends to a prime of the completion and ``dim R^/(a + p)R^ = dim R/(a + p)``,
because the associated graded ring of a standard graded domain at its
irrelevant ideal is the domain itself.  All conditions are therefore
evaluated over ``R``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from . import linalg
from .groebner import IdealBasis, ideal_contains, ideal_power
from .homalg import (
    DEFAULT_SLACK,
    Complex,
    PresentedModule,
    ZeroModuleError,
    apply_matrix,
    depth,
    ext,
    hom_module,
    krull_dim,
    minimal_free_resolution,
    pd,
    quotient_by_ideal,
    standard_monomials,
    tensor,
)
from .poly import PolyRing
from .primes import (
    PrimeIdeal,
    associated_primes,
    dim_of_ideal,
    ideal_sum,
    supp_contains,
)

__all__ = [
    "Instance",
    "InfiniteProjectiveDimension",
    "OracleError",
    "VanishingVerdict",
    "AttachedPrimes",
    "BoundsReport",
    "OracleTrace",
    "VanishingReport",
    "DirectSystem",
    "predict_top_vanishing",
    "top_attached_primes",
    "bounds",
    "ara_upper_bound",
    "oracle_colimit",
    "cross_validate",
]

VANISHES = "vanishes"
NONVANISHES = "nonvanishes"
UNKNOWN = "unknown"

ZERO = "zero"
NONZERO = "nonzero"
INCONCLUSIVE = "inconclusive"

DEFAULT_NMAX = 6
DEFAULT_WINDOW = 2


class InfiniteProjectiveDimension(ValueError):
    pass


class OracleError(ValueError):
    pass


@dataclass(eq=False)
class Instance:
    """The data ``(R, a, M, N)``; ``d`` is the Krull dimension of ``R``."""

    ring: PolyRing
    a: IdealBasis
    M: PresentedModule
    N: PresentedModule
    name: str = ""

    def __post_init__(self):
        for g in self.a.generators:
            if not g.is_homogeneous():
                raise ValueError(f"ideal generator {g} is not homogeneous")
            if g and g.is_constant():
                raise ValueError("the ideal must be proper and homogeneous")
        self.M.check_homogeneous()
        self.N.check_homogeneous()
        if self.ring.hypersurface_terms is not None:
            if pd(self.M) == math.inf:
                raise InfiniteProjectiveDimension(
                    "M has infinite projective dimension over the hypersurface ring")

    @property
    def d(self) -> int:
        return self.ring.dim

    def is_maximal_ideal(self) -> bool:
        m = IdealBasis(self.ring, tuple(self.ring.gens()))
        return all(ideal_contains(self.a, x) for x in self.ring.gens()) and \
            all(ideal_contains(m, g) for g in self.a.generators)


# --------------------------------------------------------------------------
# predictor and attached primes


@dataclass(frozen=True)
class VanishingVerdict:
    value: str
    witnesses: tuple = ()
    complete: bool = True

    def __post_init__(self):
        if self.value == NONVANISHES and not self.witnesses:
            raise ValueError("a nonvanishing verdict needs witnesses")


def _relevant_primes(inst: Instance):
    ass = associated_primes(inst.M)
    survivors = [p for p in ass.primes if supp_contains(inst.N, p)]
    return ass, survivors


def _dim_with(inst: Instance, p: PrimeIdeal) -> int:
    return dim_of_ideal(ideal_sum(inst.a, p))


def predict_top_vanishing(inst: Instance) -> VanishingVerdict:
    """H^d_a(M,N) = 0 iff dim R/(a+p) > 0 for all p in Ass M ∩ Supp N."""
    if inst.N.is_zero():
        return VanishingVerdict(VANISHES, (), True)
    ass, survivors = _relevant_primes(inst)
    if not ass.complete:
        return VanishingVerdict(UNKNOWN, (), False)
    witnesses = tuple(p for p in survivors if _dim_with(inst, p) == 0)
    if witnesses:
        return VanishingVerdict(NONVANISHES, witnesses, True)
    return VanishingVerdict(VANISHES, (), True)


@dataclass(frozen=True)
class AttachedPrimes:
    """Attached primes of H^d_a(M,N) plus the Hom-side cross-check."""

    primes: tuple
    ass_cap_supp: tuple
    hom_ass: tuple
    identity_holds: bool
    complete: bool


def top_attached_primes(inst: Instance) -> AttachedPrimes:
    ass, survivors = _relevant_primes(inst)
    if inst.N.is_zero():
        survivors = []
    attached = tuple(p for p in survivors if _dim_with(inst, p) == 0)
    H = hom_module(inst.N, inst.M)
    hom_rep = associated_primes(H)
    complete = ass.complete and hom_rep.complete
    same = set(hom_rep.primes) == set(survivors)
    return AttachedPrimes(attached, tuple(survivors), tuple(hom_rep.primes), same, complete)


# --------------------------------------------------------------------------
# bounds


@dataclass(frozen=True)
class BoundsReport:
    pdM: float
    dimTensor: int
    gradeT: float
    araUpper: int
    depthN: int
    d: int

    @property
    def vanishing_above(self) -> float:
        """H^i_a(M,N) = 0 for all i above this index."""
        return min(self.pdM + self.dimTensor, self.araUpper + self.pdM, self.d)

    def consistent(self) -> bool:
        if self.gradeT == math.inf:
            return True
        return self.gradeT <= self.vanishing_above


def ara_upper_bound(a: IdealBasis) -> int:
    """Number of generators left after discarding those in the ideal of the others."""
    gens = [g for g in a.generators if g]
    gens.sort(key=lambda f: f.degree())
    i = len(gens) - 1
    while i >= 0:
        others = gens[:i] + gens[i + 1:]
        if others and ideal_contains(IdealBasis(a.ring, tuple(others)), gens[i]):
            gens = others
        i -= 1
    return len(gens)


def grade_of(inst: Instance) -> float:
    """least i with Ext^i(M/aM, N) != 0; ``math.inf`` if Supp(M/aM) ∩ Supp N is empty."""
    L = quotient_by_ideal(inst.M.minimal_presentation(), inst.a)
    if L.is_zero() or inst.N.is_zero():
        return math.inf
    from .homalg import annihilator

    both = ideal_sum(annihilator(L), annihilator(inst.N))
    if both.is_unit():
        return math.inf
    F = minimal_free_resolution(L, inst.d + 1)
    for i in range(inst.d + 1):
        if not ext(i, L, inst.N, resolution=F).is_zero():
            return i
    raise AssertionError("grade exceeds the ring dimension")


def bounds(inst: Instance) -> BoundsReport:
    if inst.M.is_zero() or inst.N.is_zero():
        raise ZeroModuleError("bounds need nonzero M and N")
    return BoundsReport(
        pdM=pd(inst.M),
        dimTensor=krull_dim(tensor(inst.M, inst.N)),
        gradeT=grade_of(inst),
        araUpper=ara_upper_bound(inst.a),
        depthN=depth(inst.N),
        d=inst.d,
    )


# --------------------------------------------------------------------------
# the direct system Ext^i(M/a^n M, N)


class _GradedHom:
    """Degree-j pieces of Hom(F, N) in the standard-monomial basis of N."""

    def __init__(self, N: PresentedModule):
        self.N = N.minimal_presentation()
        self.p = N.ring.field.characteristic
        self._basis: dict = {}
        self._nf: dict = {}

    def basis_N(self, t):
        b = self._basis.get(t)
        if b is None:
            mons = standard_monomials(self.N, t)
            b = (mons, {m: i for i, m in enumerate(mons)})
            self._basis[t] = b
        return b

    def hom_basis(self, twists, j):
        """List of (k, offset, size) blocks: summand N_{j + a_k} for basis k."""
        blocks, off = [], 0
        for k, a in enumerate(twists):
            size = len(self.basis_N(j + a)[0])
            blocks.append((k, off, size))
            off += size
        return blocks, off

    def _normal_form(self, q, e):
        key = (q, e)
        v = self._nf.get(key)
        if v is None:
            v = self.N.gb().reduce({(q, e): 1})
            self._nf[key] = v
        return v

    def induced(self, columns, src_twists, tgt_twists, j):
        """Matrix of Hom(F, N)_j -> Hom(F', N)_j, psi |-> psi o phi.

        ``columns[l]`` is phi(e'_l) in F; F has ``src_twists``, F' has ``tgt_twists``.
        """
        p = self.p
        src_blocks, ncols = self.hom_basis(src_twists, j)
        tgt_blocks, nrows = self.hom_basis(tgt_twists, j)
        mat = linalg.zeros((nrows, ncols), p)
        if not nrows or not ncols:
            return mat
        for l, col in enumerate(columns):
            _, roff, rsize = tgt_blocks[l]
            if not rsize or not col:
                continue
            _, tindex = self.basis_N(j + tgt_twists[l])
            for (k, mu), c in col.items():
                _, coff, csize = src_blocks[k]
                if not csize:
                    continue
                mons, _ = self.basis_N(j + src_twists[k])
                for ci, (q, e) in enumerate(mons):
                    nf = self._normal_form(q, tuple(a + b for a, b in zip(mu, e)))
                    for t, a in nf.items():
                        r = roff + tindex[t]
                        v = mat[r, coff + ci] + c * a
                        mat[r, coff + ci] = v % p if p else v
        return mat


class DirectSystem:
    """Resolutions and comparison maps for the modules ``M/a^n M``."""

    def __init__(self, inst: Instance):
        self.inst = inst
        self.M0 = inst.M.minimal_presentation()
        self._levels: dict = {}
        self._chain: dict = {}
        self.hom = _GradedHom(inst.N)
        self._ext_modules: dict = {}

    def level(self, n: int) -> PresentedModule:
        if n < 1:
            raise ValueError("levels start at n = 1")
        L = self._levels.get(n)
        if L is None:
            L = quotient_by_ideal(self.M0, ideal_power(self.inst.a, n)).minimal_presentation()
            if L.degrees != self.M0.degrees:
                raise OracleError("level presentation lost a generator of M")
            self._levels[n] = L
        return L

    def resolution(self, n: int, length: int) -> Complex:
        return minimal_free_resolution(self.level(n), length)

    def chain_map(self, n: int, i: int, length: int) -> list:
        """Columns of the comparison map F^{(n+1)}_i -> F^{(n)}_i."""
        key = (n, i)
        if key in self._chain:
            return self._chain[key]
        src = self.resolution(n + 1, length)
        tgt = self.resolution(n, length)
        p = self.inst.ring.field.characteristic
        if i == 0:
            zero = (0,) * self.inst.ring.nvars
            cols = [{(k, zero): 1} for k in range(src.module(0).rank)]
        else:
            prev = self.chain_map(n, i - 1, length)
            cols = []
            for col in src.differential(i).columns:
                w = apply_matrix(prev, col, p)
                cols.append(tgt.lift(i, w) if w else {})
        self._chain[key] = cols
        return cols

    def ext_module(self, n: int, i: int) -> PresentedModule:
        key = (n, i)
        if key not in self._ext_modules:
            F = self.resolution(n, i + 1)
            self._ext_modules[key] = ext(i, self.level(n), self.inst.N, resolution=F)
        return self._ext_modules[key]


@dataclass
class OracleTrace:
    i: int
    n_max: int
    window: int
    degrees: tuple
    dims: dict  # n -> {j: dim Ext^i(M/a^nM, N)_j}
    images: dict  # (n, m) -> {j: rank of the composite Ext_n -> Ext_m in degree j}
    stable_dims: dict  # j -> certified dimension of the colimit in degree j, or None
    verdict: str
    generator_degrees: dict = field(default_factory=dict)

    def stable_image(self, n: int) -> dict:
        return self.images[(n, self.n_max)]


def _ext_piece(system: DirectSystem, n: int, i: int, j: int, length: int):
    """(Z_j, B_j) for Ext^i(M/a^nM, N)_j inside Hom(F_i, N)_j."""
    F = system.resolution(n, length)
    p = system.inst.ring.field.characteristic
    hom = system.hom
    Fi = F.module(i)
    _, dim_i = hom.hom_basis(Fi.twists, j)
    nxt = F.module(i + 1)
    if nxt.rank:
        delta = hom.induced(F.differential(i + 1).columns, Fi.twists, nxt.twists, j)
        Z = linalg.nullspace(delta, p)
    else:
        Z = linalg.zeros((dim_i, dim_i), p)
        for r in range(dim_i):
            Z[r, r] = 1
    if i >= 1 and F.module(i - 1).rank:
        prv = F.module(i - 1)
        B = hom.induced(F.differential(i).columns, prv.twists, Fi.twists, j)
    else:
        B = linalg.zeros((dim_i, 0), p)
    return Z, B


def oracle_colimit(inst: Instance, i: int, n_max: int = DEFAULT_NMAX,
                   window: int = DEFAULT_WINDOW, slack: int = DEFAULT_SLACK,
                   system: DirectSystem | None = None) -> OracleTrace:
    """Brute-force evaluation of the direct limit of Ext^i(M/a^nM, N).

    Source levels ``n <= n_max - window`` are assessed.  The verdict is
    ``zero`` when every class of every assessed level dies by level
    ``n_max``; ``nonzero`` when some class survives to ``n_max`` with image
    rank constant over the last ``window`` transitions; otherwise
    ``inconclusive``.  Degrees scanned: the generator degrees of the Ext
    modules of the assessed levels, widened by ``slack``.
    """
    if i < 0:
        raise ValueError("negative cohomological index")
    if window < 1 or n_max < window + 1:
        raise OracleError("need n_max >= window + 1 and window >= 1")
    if system is None:
        system = DirectSystem(inst)
    p = inst.ring.field.characteristic
    length = i + 1
    last = n_max - window  # last assessed source level

    gen_degs = {}
    lo, hi = None, None
    for n in range(1, last + 1):
        E = system.ext_module(n, i)
        gen_degs[n] = tuple(E.degrees)
        if E.degrees:
            a, b = min(E.degrees) - slack, max(E.degrees) + slack
            lo = a if lo is None else min(lo, a)
            hi = b if hi is None else max(hi, b)
    degrees = tuple(range(lo, hi + 1)) if lo is not None else ()

    dims = {n: {} for n in range(1, n_max + 1)}
    images = {}
    reps = {}
    pieces = {}
    for n in range(1, n_max + 1):
        for j in degrees:
            Z, B = _ext_piece(system, n, i, j, length)
            pieces[(n, j)] = B
            Q = linalg.complement_basis(B, Z, p)
            dims[n][j] = Q.shape[1]
            reps[(n, j)] = Q
    chain_cache = {}
    for n in range(1, n_max):
        if degrees:
            system.resolution(n, length)
            system.resolution(n + 1, length)
            for j in degrees:
                cols = system.chain_map(n, i, length)
                F_src = system.resolution(n, length).module(i)
                F_tgt = system.resolution(n + 1, length).module(i)
                chain_cache[(n, j)] = system.hom.induced(cols, F_src.twists, F_tgt.twists, j)

    for n in range(1, n_max):
        for j in degrees:
            V = reps[(n, j)]
            for m in range(n + 1, n_max + 1):
                V = linalg.matmul(chain_cache[(m - 1, j)], V, p)
                r = linalg.relative_rank(pieces[(m, j)], V, p) if V.shape[1] else 0
                images.setdefault((n, m), {})[j] = r
        for j in degrees:
            images.setdefault((n, n), {})[j] = dims[n][j]
    for j in degrees:
        images.setdefault((n_max, n_max), {})[j] = dims[n_max][j]

    verdict = _verdict(images, gen_degs, degrees, last, n_max, window)
    stable = _stable_dims(images, gen_degs, degrees, last, n_max, window)
    return OracleTrace(i, n_max, window, degrees, dims, images, stable, verdict, gen_degs)


def _survives_stably(images, n, j, n_max, window) -> bool:
    seq = [images[(n, m)][j] for m in range(n, n_max + 1)]
    if min(seq) == 0:
        return False
    tail = [images[(n, m)][j] for m in range(n_max - window, n_max + 1)]
    return len(set(tail)) == 1


def _verdict(images, gen_degs, degrees, last, n_max, window) -> str:
    if not degrees:
        return ZERO
    if all(images[(n, n_max)][j] == 0 for n in range(1, last + 1) for j in degrees):
        return ZERO
    for n in range(1, last + 1):
        for j in degrees:
            if _survives_stably(images, n, j, n_max, window):
                return NONZERO
    return INCONCLUSIVE


def _stable_dims(images, gen_degs, degrees, last, n_max, window) -> dict:
    """Colimit dimension per degree where the finite data certify it, else None."""
    out = {}
    run = list(range(max(1, last - window + 1), last + 1))
    floor = [min(gen_degs[n]) for n in run if gen_degs[n]]
    lowest = min(floor) if floor else None
    for j in degrees:
        vals = [images[(n, n_max)][j] for n in run]
        settled = all(len({images[(n, m)][j] for m in range(n_max - window, n_max + 1)}) == 1
                      for n in run)
        if len(run) < window or len(set(vals)) != 1 or not settled:
            out[j] = None
        elif lowest is not None and j < lowest:
            out[j] = None
        else:
            out[j] = vals[-1]
    return out


# --------------------------------------------------------------------------
# cross validation


@dataclass
class VanishingReport:
    name: str
    predictor: VanishingVerdict
    oracle: OracleTrace | None
    bounds: BoundsReport | None
    attached: AttachedPrimes | None
    agreement: str  # "agree" | "disagree" | "n/a"
    n_max: int
    window: int
    duration: float = 0.0
    errors: list = field(default_factory=list)

    @property
    def hard_failure(self) -> bool:
        return self.agreement == "disagree"


def _agreement(pred: VanishingVerdict, trace: OracleTrace | None) -> str:
    if trace is None or pred.value == UNKNOWN or trace.verdict == INCONCLUSIVE:
        return "n/a"
    oracle_says = VANISHES if trace.verdict == ZERO else NONVANISHES
    return "agree" if oracle_says == pred.value else "disagree"


def cross_validate(inst: Instance, n_max: int = DEFAULT_NMAX, window: int = DEFAULT_WINDOW,
                   slack: int = DEFAULT_SLACK, system: DirectSystem | None = None
                   ) -> VanishingReport:
    start = time.perf_counter()
    pred = predict_top_vanishing(inst)
    errors = []
    trace = oracle_colimit(inst, inst.d, n_max, window, slack, system=system)
    try:
        bnd = bounds(inst)
    except ZeroModuleError as exc:
        bnd = None
        errors.append(str(exc))
    att = top_attached_primes(inst)
    report = VanishingReport(inst.name, pred, trace, bnd, att, _agreement(pred, trace),
                             n_max, window)
    report.errors = errors
    report.duration = time.perf_counter() - start
    return report
