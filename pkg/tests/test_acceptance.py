"""Acceptance criteria, one test per criterion.

Each test emits a single ``[criterion k] PASS|FAIL ...`` line; the lines are
repeated in the terminal summary.  Run with ``pytest tests/test_acceptance.py``
or ``python tests/test_acceptance.py``.
"""
import subprocess
import sys
import time
from pathlib import Path

import pytest

from genlocoh.cli import corpus_dir
from genlocoh.fileformat import load_instance
from genlocoh.glc import (
    NONVANISHES, NONZERO, ZERO, DirectSystem, Instance, bounds, cross_validate, oracle_colimit,
    predict_top_vanishing, top_attached_primes,
)
from genlocoh.groebner import IdealBasis, s_pairs_reduce_to_zero
from genlocoh.homalg import (
    PresentedModule, depth, direct_sum, ext, hilbert_function, hilbert_series, krull_dim,
    minimal_free_resolution, pd, residue_field, standard_monomials, tensor,
)
from genlocoh.poly import FieldSpec, PolyRing

from conftest import ACCEPTANCE_LINES, composite_is_zero

HERE = Path(__file__).parent


def report(k, ok, detail):
    line = f"[criterion {k}] {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return line


def names(primes):
    return {str(p) for p in primes}


# --------------------------------------------------------------------------
# corpus evaluation shared by criteria 3-6 and 8


class CorpusRun:
    def __init__(self):
        self.files = sorted(Path(corpus_dir()).glob("*.inst"))
        self.rows = []
        start = time.perf_counter()
        for f in self.files:
            inst = load_instance(f)
            ds = DirectSystem(inst)
            rep = cross_validate(inst, system=ds)
            verdicts = None
            if not inst.N.is_zero():
                verdicts = [rep.oracle.verdict if i == inst.d else
                            oracle_colimit(inst, i, system=ds).verdict
                            for i in range(inst.d + 2)]
            self.rows.append((f.stem, inst, ds, rep, verdicts))
        self.seconds = time.perf_counter() - start


@pytest.fixture(scope="module")
def corpus():
    return CorpusRun()


# --------------------------------------------------------------------------


@pytest.mark.parametrize("char", [101, 0])
def test_criterion_1_example_nonvanishing(char):
    start = time.perf_counter()
    R = PolyRing(("x", "y"), FieldSpec(char))
    M = PresentedModule.cyclic(R, ["x"])
    N = PresentedModule.cyclic(R, ["x"])
    inst = Instance(R, IdealBasis.of(R, ["x", "y"]), M, N)
    att = top_attached_primes(inst)
    pred = predict_top_vanishing(inst)
    b = bounds(inst)
    trace = oracle_colimit(inst, 2, n_max=6)
    elapsed = time.perf_counter() - start
    ok = (names(att.primes) == {"(x)"} and att.identity_holds
          and pred.value == NONVANISHES and names(pred.witnesses) == {"(x)"}
          and max(b.pdM, krull_dim(N)) == 1 == inst.d - 1
          and trace.verdict == NONZERO and elapsed < 10)
    report(1, ok, f"field={R.field} Att={sorted(names(att.primes))} predictor={pred.value} "
                  f"max(pdM,dimN)={max(b.pdM, krull_dim(N))} oracle(i=2)={trace.verdict} "
                  f"time={elapsed:.2f}s (<10s)")
    assert ok


def test_criterion_2_non_cohen_macaulay_sum():
    start = time.perf_counter()
    R = PolyRing(("x", "y"), FieldSpec(32003))
    k = residue_field(R)
    M = direct_sum(PresentedModule.cyclic(R, ["x"]), k)
    N = PresentedModule.free(R)
    inst = Instance(R, IdealBasis.of(R, ["x", "y"]), M, N)
    ell = pd(M) + krull_dim(tensor(M, N))
    top = oracle_colimit(inst, 2).verdict
    above = oracle_colimit(inst, 3).verdict
    elapsed = time.perf_counter() - start
    ok = (depth(M) == 0 and krull_dim(M) == 1 and ell == 3 > inst.d
          and above == ZERO and top == NONZERO and elapsed < 20)
    report(2, ok, f"depth M={depth(M)} dim M={krull_dim(M)} l={ell} oracle(i=3)={above} "
                  f"oracle(i=2)={top} time={elapsed:.2f}s (<20s)")
    assert ok


def test_criterion_3_predictor_oracle_agreement(corpus):
    polynomial = [r for r in corpus.rows if r[1].ring.hypersurface_terms is None]
    rings = {r[1].ring.variables for r in polynomial}
    definite = [r for r in corpus.rows if r[3].agreement != "n/a"]
    disagree = [r[0] for r in corpus.rows if r[3].agreement == "disagree"]
    ok = (len(polynomial) >= 30 and rings == {("x", "y"), ("x", "y", "z")}
          and not disagree and len(definite) == len(corpus.rows)
          and corpus.seconds < 600)
    report(3, ok, f"instances={len(corpus.rows)} (polynomial-ring {len(polynomial)}) "
                  f"definite={len(definite)} agree={len(definite) - len(disagree)} "
                  f"disagree={disagree or 0} time={corpus.seconds:.1f}s (<600s)")
    assert ok


def test_criterion_4_bounds_suite(corpus):
    violations, checked = [], 0
    for name, inst, _, rep, verdicts in corpus.rows:
        if verdicts is None:
            continue  # N = 0: bounds are undefined
        b = rep.bounds
        cap = b.vanishing_above
        checked += 1
        for i, v in enumerate(verdicts):
            if i < b.gradeT and v != ZERO:
                violations.append((name, i, "below grade", v))
            if i == b.gradeT and b.gradeT <= inst.d and v != NONZERO:
                violations.append((name, i, "at grade", v))
            if cap < i <= inst.d + 1 and v != ZERO:
                violations.append((name, i, "above bound", v))
        if not b.consistent():
            violations.append((name, None, "gradeT exceeds bound", b))
    ok = not violations and checked >= 30
    report(4, ok, f"instances checked={checked} indices 0..d+1 violations={len(violations)}"
                  + (f" {violations[:3]}" if violations else ""))
    assert ok


def test_criterion_5_depth_floor(corpus):
    rows = [r for r in corpus.rows if r[4] is not None and r[1].is_maximal_ideal()]
    bad = []
    for name, inst, _, rep, verdicts in rows:
        first = next((i for i, v in enumerate(verdicts) if v == NONZERO), None)
        if first != rep.bounds.depthN:
            bad.append((name, first, rep.bounds.depthN))
    ok = len(rows) >= 10 and not bad
    report(5, ok, f"instances with a=m: {len(rows)} (>=10) mismatches={bad or 0}")
    assert ok


def test_criterion_6_hom_identity(corpus):
    complete = [r for r in corpus.rows if r[3].attached.complete]
    bad = [r[0] for r in complete if not r[3].attached.identity_holds]
    ok = len(complete) == len(corpus.rows) and not bad
    report(6, ok, f"complete instances={len(complete)}/{len(corpus.rows)} "
                  f"violations={bad or 0}")
    assert ok


def test_criterion_7_graded_dual_calibration():
    R = PolyRing(("x", "y"), FieldSpec(32003))
    F = PresentedModule.free(R)
    trace = oracle_colimit(Instance(R, IdealBasis.of(R, ["x", "y"]), F, F), 2)
    certified = {j: v for j, v in trace.stable_dims.items() if v is not None}
    expected = {j: hilbert_function(F, -j - 2) for j in certified}
    head = [trace.stable_dims.get(j) for j in (-2, -3, -4)]
    ok = certified == expected and head == [1, 2, 3] and trace.verdict == NONZERO
    report(7, ok, f"dims at j=-2,-3,-4: {head}; certified degrees "
                  f"{sorted(certified)} all equal dim R_(-j-2): {certified == expected}")
    assert ok


def _property_suite_seconds():
    files = [str(HERE / f) for f in ("test_poly.py", "test_groebner.py", "test_homalg.py",
                                      "test_primes.py", "test_glc.py")]
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           *files], capture_output=True, text=True, cwd=HERE.parent)
    return proc.returncode, time.perf_counter() - start


def test_criterion_8_infrastructure(corpus):
    problems = []
    gbs = resolutions = 0
    for name, inst, ds, _, _ in corpus.rows:
        ring = inst.ring
        modules = [inst.M, inst.N] + [ds.level(n) for n in sorted(ds._levels)]
        for g in [inst.a.gb()] + [m.gb() for m in modules]:
            gbs += 1
            if not s_pairs_reduce_to_zero(g):
                problems.append((name, "S-pair"))
        for m in modules:
            if m.is_zero():
                continue
            F = minimal_free_resolution(m, ring.dim + 2)
            resolutions += 1
            for g in F.lifts:
                gbs += 1
                if not s_pairs_reduce_to_zero(g):
                    problems.append((name, "S-pair in resolution"))
            if not composite_is_zero(F):
                problems.append((name, "d^2 != 0"))
            H = hilbert_series(m) if ring.hypersurface_terms is not None else \
                hilbert_series(m, resolution=F)
            if any(H.coefficient(j) != len(standard_monomials(m, j)) for j in range(-3, 8)):
                problems.append((name, "Hilbert telescoping"))
            if ring.hypersurface_terms is None and depth(m) + pd(m) != ring.nvars:
                problems.append((name, "Auslander-Buchsbaum"))
    R = PolyRing(("x", "y"), FieldSpec(32003))
    E = ext(2, residue_field(R), PresentedModule.free(R))
    ext_dim = hilbert_series(E).total_length()
    if ext_dim != 1:
        problems.append(("Ext^2(k,R)", ext_dim))
    code, seconds = _property_suite_seconds()
    ok = not problems and code == 0 and seconds < 300
    report(8, ok, f"GBs checked={gbs} resolutions={resolutions} problems={problems or 0} "
                  f"dim Ext^2(k,R)={ext_dim} property suite exit={code} "
                  f"time={seconds:.1f}s (<300s)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
