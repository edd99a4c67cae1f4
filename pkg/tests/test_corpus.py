import re
from pathlib import Path

import pytest

from genlocoh.cli import corpus_dir
from genlocoh.fileformat import parse_instance
from genlocoh.glc import predict_top_vanishing

CORPUS = sorted(Path(corpus_dir()).glob("*.inst"))


def verdict(text, field):
    inst = parse_instance(re.sub(r"field = \S+", f"field = {field}", text))
    v = predict_top_vanishing(inst)
    return v.value, sorted(str(p) for p in v.witnesses)


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_predictor_is_stable_under_change_of_field(path):
    text = path.read_text()
    ref = verdict(text, "F(32003)")
    assert verdict(text, "F(101)") == ref
    assert verdict(text, "QQ") == ref


def test_corpus_covers_the_required_shapes():
    insts = [parse_instance(p.read_text(), p.stem) for p in CORPUS]
    rings = {i.ring.variables for i in insts if i.ring.hypersurface_terms is None}
    assert rings == {("x", "y"), ("x", "y", "z")}
    assert sum(i.is_maximal_ideal() for i in insts) >= 10
    assert any(len(i.a.generators) == 1 for i in insts)
    assert any(i.M.rank > 1 for i in insts) and any(i.N.rank > 1 for i in insts)
