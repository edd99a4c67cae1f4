"""Line-oriented instance files.

::

    # comment
    [ring]
    vars = x, y, z
    field = F(32003)          # or QQ
    hypersurface = x*y - z^2  # optional

    [ideal]
    generators = x, y

    [M]
    quotient = x*y, x*z       # R/I; ``quotient = 0`` is R itself

    [N]
    directsum = x | x, y      # R/(x) + R/(x,y)

An explicit presentation lists generator degrees and one relation per line::

    [M]
    degrees = 0, 1
    relation = y, -1
    relation = x^2, 0

A module section with no keys is the zero module.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .glc import Instance
from .groebner import IdealBasis, vec_add, vec_from_poly, vec_shift_pos
from .homalg import PresentedModule, direct_sum
from .poly import GREVLEX, FieldSpec, MonomialOrder, ParseError, PolyRing, parse_polynomial

SECTIONS = ("ring", "ideal", "M", "N")


class InstanceParseError(ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class ModuleSpec:
    """How a module was written: ``quotient``, ``directsum``, ``matrix`` or ``zero``."""

    kind: str
    summands: tuple = ()  # tuple of generator-text tuples
    degrees: tuple = ()
    relations: tuple = ()  # tuple of entry-text tuples


@dataclass(frozen=True)
class InstanceFile:
    variables: tuple
    field: str
    hypersurface: str | None
    ideal: tuple
    M: ModuleSpec
    N: ModuleSpec
    name: str = field(default="", compare=False)


# --------------------------------------------------------------------------
# reading


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    col: int  # column where the value starts (1-based)


def _scan(text: str) -> dict:
    sections: dict = {}
    current = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.strip()
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise InstanceParseError("unterminated section header", ln, len(body) + 1)
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise InstanceParseError(f"unknown section [{name}]", ln, body.index("[") + 1)
            if name in sections:
                raise InstanceParseError(f"duplicate section [{name}]", ln, 1)
            sections[name] = []
            current = name
            continue
        if current is None:
            raise InstanceParseError("key outside of any section", ln, 1)
        if "=" not in body:
            raise InstanceParseError("expected 'key = value'", ln, len(body) + 1)
        key, value = body.split("=", 1)
        start = len(key) + 2 + (len(value) - len(value.lstrip()))
        sections[current].append(_Entry(key.strip(), value.strip(), ln, start))
    for name in SECTIONS:
        if name not in sections:
            raise InstanceParseError(f"missing section [{name}]")
    return sections


def _split(entry: _Entry, sep: str = ","):
    """Split a value on ``sep``; yield (piece, column)."""
    out = []
    col = entry.col
    for piece in entry.value.split(sep):
        lead = len(piece) - len(piece.lstrip())
        out.append((piece.strip(), col + lead))
        col += len(piece) + 1
    return out


def _poly(ring, text, line, col):
    try:
        f = parse_polynomial(text, ring)
    except ParseError as exc:
        c = col + (exc.column - 1 if exc.column else 0)
        raise InstanceParseError(str(exc).split(" (column")[0], line, c) from None
    if not f.is_homogeneous():
        raise InstanceParseError(f"'{text}' is not homogeneous", line, col)
    return f


def _single(entries, key, section, required=True):
    found = [e for e in entries if e.key == key]
    if len(found) > 1:
        raise InstanceParseError(f"duplicate key '{key}' in [{section}]", found[1].line, 1)
    if not found:
        if required:
            raise InstanceParseError(f"missing key '{key}' in [{section}]")
        return None
    return found[0]


def _check_keys(entries, allowed, section):
    for e in entries:
        if e.key not in allowed:
            raise InstanceParseError(f"unknown key '{e.key}' in [{section}]", e.line, 1)


def _read_ring(entries, order):
    _check_keys(entries, ("vars", "field", "hypersurface"), "ring")
    v = _single(entries, "vars", "ring")
    names = []
    for name, col in _split(v):
        if not name.isidentifier():
            raise InstanceParseError(f"bad variable name '{name}'", v.line, col)
        if name in names:
            raise InstanceParseError(f"repeated variable '{name}'", v.line, col)
        names.append(name)
    f = _single(entries, "field", "ring")
    text = f.value.replace(" ", "")
    if text in ("QQ", "Q"):
        char = 0
    elif text.startswith("F(") and text.endswith(")") and text[2:-1].isdigit():
        char = int(text[2:-1])
    else:
        raise InstanceParseError(f"field must be QQ or F(p), got '{f.value}'", f.line, f.col)
    try:
        fld = FieldSpec(char)
    except ValueError as exc:
        raise InstanceParseError(str(exc), f.line, f.col) from None
    ring = PolyRing(tuple(names), fld, order)
    h = _single(entries, "hypersurface", "ring", required=False)
    hyp_text = None
    if h is not None:
        g = _poly(ring, h.value, h.line, h.col)
        try:
            ring = ring.quotient(g)
        except ValueError as exc:
            raise InstanceParseError(str(exc), h.line, h.col) from None
        hyp_text = h.value
    return ring, tuple(names), str(fld), hyp_text


def _gens(ring, entry, sep=","):
    polys, texts = [], []
    for piece, col in _split(entry, sep):
        if not piece:
            raise InstanceParseError("empty polynomial", entry.line, col)
        f = _poly(ring, piece, entry.line, col)
        polys.append(f)
        texts.append(piece)
    return polys, tuple(texts)


def _cyclic(ring, polys):
    return PresentedModule(ring, (0,), [vec_from_poly(g) for g in polys if g])


def _read_module(ring, entries, section):
    _check_keys(entries, ("quotient", "directsum", "degrees", "relation"), section)
    if not entries:
        return PresentedModule.zero(ring), ModuleSpec("zero")
    keys = {e.key for e in entries}
    if "quotient" in keys:
        if len(entries) > 1:
            raise InstanceParseError(f"'quotient' stands alone in [{section}]", entries[1].line, 1)
        polys, texts = _gens(ring, entries[0])
        return _cyclic(ring, polys), ModuleSpec("quotient", (texts,))
    if "directsum" in keys:
        if len(entries) > 1:
            raise InstanceParseError(f"'directsum' stands alone in [{section}]", entries[1].line, 1)
        e = entries[0]
        mods, summands = [], []
        for piece, col in _split(e, "|"):
            sub = _Entry(e.key, piece, e.line, col)
            polys, texts = _gens(ring, sub)
            mods.append(_cyclic(ring, polys))
            summands.append(texts)
        return direct_sum(*mods), ModuleSpec("directsum", tuple(summands))
    d = _single(entries, "degrees", section)
    degrees = []
    for piece, col in _split(d):
        try:
            degrees.append(int(piece))
        except ValueError:
            raise InstanceParseError(f"bad degree '{piece}'", d.line, col) from None
    p = ring.field.characteristic
    rels, rel_texts = [], []
    for e in entries:
        if e.key != "relation":
            continue
        polys, texts = _gens(ring, e)
        if len(polys) != len(degrees):
            raise InstanceParseError(
                f"relation has {len(polys)} entries, expected {len(degrees)}", e.line, e.col)
        vec = {}
        for q, g in enumerate(polys):
            vec = vec_add(vec, vec_shift_pos(vec_from_poly(g), q), p)
        if len({sum(m) + degrees[q] for (q, m) in vec}) > 1:
            raise InstanceParseError("relation is not homogeneous for the given degrees",
                                     e.line, e.col)
        rels.append(vec)
        rel_texts.append(texts)
    return PresentedModule(ring, degrees, rels), ModuleSpec(
        "matrix", degrees=tuple(degrees), relations=tuple(rel_texts))


def read_instance(text: str, name: str = "", order: MonomialOrder = GREVLEX):
    """Parse instance text; return ``(Instance, InstanceFile)``."""
    sections = _scan(text)
    ring, names, fld, hyp = _read_ring(sections["ring"], order)
    _check_keys(sections["ideal"], ("generators",), "ideal")
    g = _single(sections["ideal"], "generators", "ideal")
    polys, ideal_texts = _gens(ring, g)
    for f, (_, col) in zip(polys, _split(g)):
        if f.is_constant():
            raise InstanceParseError("the ideal must be proper: constant generator", g.line, col)
    M, mspec = _read_module(ring, sections["M"], "M")
    N, nspec = _read_module(ring, sections["N"], "N")
    a = IdealBasis(ring, tuple(polys))
    inst = Instance(ring, a, M, N, name=name)
    return inst, InstanceFile(names, fld, hyp, ideal_texts, mspec, nspec, name)


def parse_instance(text: str, name: str = "", order: MonomialOrder = GREVLEX) -> Instance:
    return read_instance(text, name, order)[0]


def load_instance(path, order: MonomialOrder = GREVLEX) -> Instance:
    from pathlib import Path

    path = Path(path)
    return parse_instance(path.read_text(encoding="utf-8"), path.stem, order)


# --------------------------------------------------------------------------
# writing


def _module_lines(spec: ModuleSpec) -> list:
    if spec.kind == "zero":
        return []
    if spec.kind == "quotient":
        return ["quotient = " + ", ".join(spec.summands[0])]
    if spec.kind == "directsum":
        return ["directsum = " + " | ".join(", ".join(s) for s in spec.summands)]
    lines = ["degrees = " + ", ".join(str(d) for d in spec.degrees)]
    lines += ["relation = " + ", ".join(r) for r in spec.relations]
    return lines


def format_instance(f: InstanceFile) -> str:
    lines = ["[ring]", "vars = " + ", ".join(f.variables), "field = " + f.field]
    if f.hypersurface is not None:
        lines.append("hypersurface = " + f.hypersurface)
    lines += ["", "[ideal]", "generators = " + ", ".join(f.ideal), "", "[M]"]
    lines += _module_lines(f.M)
    lines += ["", "[N]"]
    lines += _module_lines(f.N)
    return "\n".join(lines) + "\n"
