"""Line-oriented text formats for the three input families.

Every file starts with a ``<family> v1`` header. Blank lines and ``#``
comments are ignored. Floats are written with ``repr`` so parsing the
output gives back the same numbers; weights are ``p/q`` fractions.

    penny v1            chordal v1          jordan v1
    disk <id> <x> <y>   n <count>           region <id> disk <cx> <cy> <r>
    arc <u> <v>         weight <v> <p/q>    region <id> poly <x1> <y1> ...
    biarc <u> <v>       arc <u> <v>         weight <id> <p/q>
                        biarc <u> <v>       arc / biarc

The chordal ``n`` record is optional; without it the vertex count is one
more than the largest id on an arc or weight line.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .errors import FormatError, SepspaceError

FAMILIES = ("penny", "chordal", "jordan")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _arc_lines(arcs) -> list[str]:
    arcs = set(arcs)
    out = []
    for u, v in sorted(arcs):
        if (v, u) in arcs:
            if u < v:
                out.append(f"biarc {u} {v}")
        else:
            out.append(f"arc {u} {v}")
    return out


def _weight_lines(weights, n: int) -> list[str]:
    if not weights:
        return []
    uniform = Fraction(1, n) if n else None
    if all(Fraction(weights[v]) == uniform for v in range(n)):
        return []
    return [f"weight {v} {Fraction(weights[v])}" for v in range(n)]


def sniff(text: str) -> str:
    for no, tok in _lines(text):
        if len(tok) == 2 and tok[0] in FAMILIES and tok[1] == "v1":
            return tok[0]
        raise FormatError(f"line {no}: expected a '<family> v1' header, got {' '.join(tok)!r}")
    raise FormatError("empty input")


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"line {no}: expected an integer, got {tok!r}") from None


def _float(tok: str, no: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"line {no}: expected a number, got {tok!r}") from None


def _frac(tok: str, no: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"line {no}: expected a fraction p/q, got {tok!r}") from None


def _body(text: str, family: str):
    got = sniff(text)
    if got != family:
        raise FormatError(f"expected a {family} file, got {got}")
    it = _lines(text)
    next(it)
    return it


def _arity(tok, no, want: int):
    if len(tok) != want:
        raise FormatError(f"line {no}: '{tok[0]}' takes {want - 1} values")


def _read_arc(tok, no, arcs: list) -> bool:
    if tok[0] not in ("arc", "biarc"):
        return False
    _arity(tok, no, 3)
    u, v = _int(tok[1], no), _int(tok[2], no)
    arcs.append((u, v))
    if tok[0] == "biarc":
        arcs.append((v, u))
    return True


def _dense(items: dict, what: str) -> list:
    if sorted(items) != list(range(len(items))):
        raise FormatError(f"{what} ids must be 0..n-1 without gaps")
    return [items[i] for i in range(len(items))]


def _validated(build, *args):
    try:
        return build(*args)
    except FormatError:
        raise
    except SepspaceError as exc:
        raise FormatError(f"invalid instance: {exc}") from exc


# -- penny ---------------------------------------------------------------------------

def dump_penny(ds) -> str:
    lines = ["penny v1", f"# {ds.n} unit disks, {len(ds.arcs)} arcs"]
    lines += [f"disk {i} {x!r} {y!r}" for i, (x, y) in enumerate(ds.centers)]
    lines += _arc_lines(ds.arcs)
    return "\n".join(lines) + "\n"


def load_penny(text: str):
    from .penny.disks import DiskSet

    centers: dict[int, tuple] = {}
    arcs: list = []
    for no, tok in _body(text, "penny"):
        if tok[0] == "disk":
            _arity(tok, no, 4)
            centers[_int(tok[1], no)] = (_float(tok[2], no), _float(tok[3], no))
        elif not _read_arc(tok, no, arcs):
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    return _validated(DiskSet, _dense(centers, "disk"), arcs)


# -- chordal -------------------------------------------------------------------------

def dump_chordal(inst) -> str:
    g = inst.g
    lines = ["chordal v1", f"n {g.n}"]
    lines += _weight_lines(inst.w, g.n)
    lines += _arc_lines(g.arcs)
    return "\n".join(lines) + "\n"


def load_chordal(text: str):
    from .chordal import ChordalInstance
    from .graph import DirectedGraph

    n = None
    weights: dict = {}
    arcs: list = []
    for no, tok in _body(text, "chordal"):
        if tok[0] == "n":
            _arity(tok, no, 2)
            n = _int(tok[1], no)
        elif tok[0] == "weight":
            _arity(tok, no, 3)
            weights[_int(tok[1], no)] = _frac(tok[2], no)
        elif not _read_arc(tok, no, arcs):
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    if n is None:
        n = 1 + max([x for a in arcs for x in a] + list(weights), default=-1)
    if weights and sorted(weights) != list(range(n)):
        raise FormatError("weights must be given for every vertex or none")
    return _validated(lambda: ChordalInstance(DirectedGraph(n, arcs), weights))


# -- jordan --------------------------------------------------------------------------

def dump_jordan(rs) -> str:
    lines = ["jordan v1", f"# {rs.n} regions, {rs.m} crossing points"]
    for i, shape in enumerate(rs.shapes):
        lines.append(" ".join(["region", str(i)] + shape.to_tokens()))
    lines += _weight_lines(rs.weights, rs.n)
    lines += _arc_lines(rs.arcs)
    return "\n".join(lines) + "\n"


def load_jordan(text: str):
    from .geometry import Disk, Polygon
    from .jordan import RegionSet

    shapes: dict = {}
    weights: dict = {}
    arcs: list = []
    for no, tok in _body(text, "jordan"):
        if tok[0] == "region":
            if len(tok) < 3 or tok[2] not in ("disk", "poly"):
                raise FormatError(f"line {no}: expected 'region <id> disk|poly ...'")
            rid = _int(tok[1], no)
            coords = [_float(x, no) for x in tok[3:]]
            if tok[2] == "disk":
                if len(coords) != 3:
                    raise FormatError(f"line {no}: a disk takes 3 values")
                shapes[rid] = _validated(Disk, *coords)
            else:
                if len(coords) < 6 or len(coords) % 2:
                    raise FormatError(f"line {no}: a polygon needs at least 3 coordinate pairs")
                shapes[rid] = _validated(Polygon, tuple(zip(coords[::2], coords[1::2])))
        elif tok[0] == "weight":
            _arity(tok, no, 3)
            weights[_int(tok[1], no)] = _frac(tok[2], no)
        elif not _read_arc(tok, no, arcs):
            raise FormatError(f"line {no}: unknown record {tok[0]!r}")
    return _validated(RegionSet, _dense(shapes, "region"), weights, arcs)


# -- dispatch ------------------------------------------------------------------------

def dumps(obj) -> str:
    from .chordal import ChordalInstance
    from .jordan import RegionSet
    from .penny.disks import DiskSet

    if isinstance(obj, DiskSet):
        return dump_penny(obj)
    if isinstance(obj, ChordalInstance):
        return dump_chordal(obj)
    if isinstance(obj, RegionSet):
        return dump_jordan(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def loads(text: str):
    """Parse any of the three formats; returns (family, instance)."""
    family = sniff(text)
    return family, {"penny": load_penny, "chordal": load_chordal, "jordan": load_jordan}[family](text)


def load(path) -> tuple[str, object]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def save(obj, path) -> None:
    Path(path).write_text(dumps(obj))
