import pytest
from hypothesis import settings

from genlocoh.groebner import IdealBasis, groebner_basis, relation_vectors
from genlocoh.homalg import PresentedModule, apply_matrix
from genlocoh.poly import FieldSpec, PolyRing

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make_ring(names="x,y", p=32003):
    return PolyRing(tuple(names.split(",")), FieldSpec(p))


def cyclic(R, *gens):
    return PresentedModule.cyclic(R, list(gens))


def ideal(R, *gens):
    return IdealBasis.of(R, list(gens))


@pytest.fixture
def R2():
    return make_ring("x,y")


@pytest.fixture
def R3():
    return make_ring("x,y,z")


@pytest.fixture
def Q2():
    return make_ring("x,y", 0)


def composite_is_zero(F):
    """d_{i-1} d_i = 0 for every i, modulo the hypersurface relation if there is one."""
    p = F.ring.field.characteristic
    for i in range(2, F.length + 1):
        d_prev, d = F.differential(i - 1), F.differential(i)
        rank = d_prev.target.rank
        rel = None
        if F.ring.hypersurface_terms is not None:
            rel = groebner_basis(F.ring, [], rank, relations=relation_vectors(F.ring, rank))
        for col in d.columns:
            img = apply_matrix(d_prev.columns, col, p)
            if rel is not None:
                img = rel.reduce(img)
            if img:
                return False
    return True
