"""Line-oriented text format for algebras, representations and related data.

A file starts with ``format 1`` and a field line (``field rational`` or
``field ratfunc <var>``), followed by named blocks::

    begin homlie g
    dim 2
    c 1 2 2 = 1          # [e1, e2] = 1*e2
    phi 1 1 = 1          # coefficient of e1 in phi(e1)
    phi 2 1 = 1
    phi 2 2 = 1
    end

Indices are 1-based; unlisted entries are zero.  Block kinds and their lines:

``homlie`` / ``dual-algebra``  ``dim n``, ``c i j k = s``, ``phi i j = s`` (identity twist when absent)
``associative``                ``dim n``, ``m i j k = s``
``representation``             ``dim d``, ``rho i a b = s``, ``beta a b = s``; or a single
                               ``from coadjoint`` / ``from adjoint <s> <k>`` / ``from dual <rep> [<s>]``
``bilinear-form``              ``b i j = s``
``rmatrix``                    ``r i j = s`` (coefficient of e_i ∧ e_j)
``linear-map``                 ``dim rows cols``, ``map i j = s`` (coefficient of e_i in f(e_j))

Every block other than ``homlie`` and ``associative`` names its parent with
``on <name>``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any

from . import linalg
from .algebra import HomLieAlgebra, SingularTwist
from .derivations import AssociativeAlgebra
from .multilinear import MultiVector
from .reps import Representation, adjoint_rep, coadjoint, dual_rep
from .scalars import ScalarParseError, canonical, format_scalar, parse_scalar

__all__ = [
    "ParseError",
    "Block",
    "AlgebraFile",
    "BLOCK_KINDS",
    "parse",
    "parse_file",
    "serialize",
    "example_file",
]

BLOCK_KINDS = ("homlie", "associative", "representation", "bilinear-form", "rmatrix", "dual-algebra", "linear-map")
_NEEDS_PARENT = {"representation", "bilinear-form", "rmatrix", "dual-algebra", "linear-map"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass
class Block:
    kind: str
    name: str
    parent: str | None
    value: Any
    source: str = ""  # "from ..." directive for derived representations


@dataclass
class AlgebraFile:
    var: str | None = None
    blocks: dict[str, Block] = field(default_factory=dict)
    version: int = 1

    def add(self, kind: str, name: str, value, parent: str | None = None, source: str = "") -> Block:
        if kind not in BLOCK_KINDS:
            raise ValueError(f"unknown block kind {kind!r}")
        if name in self.blocks:
            raise ValueError(f"duplicate block name {name!r}")
        block = Block(kind, name, parent, value, source)
        self.blocks[name] = block
        return block

    def of_kind(self, kind: str, parent: str | None = None) -> list[Block]:
        return [b for b in self.blocks.values()
                if b.kind == kind and (parent is None or b.parent == parent)]

    def first(self, kind: str, parent: str | None = None) -> Block | None:
        found = self.of_kind(kind, parent)
        return found[0] if found else None


# -- parsing -----------------------------------------------------------------

_ENTRY = re.compile(r"^(\S+)((?:\s+\S+)*?)\s*=\s*(.+)$")


@dataclass
class _RawBlock:
    kind: str
    name: str
    parent: str | None
    line: int
    entries: list = field(default_factory=list)   # (key, indices, scalar, line, col)
    dims: tuple | None = None
    dim_line: int = 0
    source: tuple | None = None


def parse(text: str) -> AlgebraFile:
    out = AlgebraFile()
    raw: list[_RawBlock] = []
    current: _RawBlock | None = None
    saw_format = saw_field = False
    for lineno, original in enumerate(text.splitlines(), start=1):
        line = original.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        words = line.split()
        col = indent + 1
        if not saw_format:
            if words != ["format", "1"]:
                raise ParseError("expected 'format 1' as the first statement", lineno, col)
            saw_format = True
            continue
        if not saw_field:
            if words == ["field", "rational"]:
                out.var = None
            elif len(words) == 3 and words[:2] == ["field", "ratfunc"] and words[2].isidentifier():
                out.var = words[2]
            else:
                raise ParseError("expected 'field rational' or 'field ratfunc <var>'", lineno, col)
            saw_field = True
            continue
        if current is None:
            if words[0] != "begin":
                raise ParseError(f"expected 'begin', found {words[0]!r}", lineno, col)
            current = _begin(words, lineno, original, out, raw)
            continue
        if words == ["end"]:
            raw.append(current)
            current = None
            continue
        _block_line(current, words, line, lineno, original, out.var)
    if current is not None:
        raise ParseError(f"block {current.name!r} is not closed", current.line, 1)
    if not saw_field:
        raise ParseError("missing format/field preamble", 1, 1)
    for rb in raw:
        _materialize(rb, out)
    return out


def _col_of(original: str, token: str, start: int = 0) -> int:
    pos = original.find(token, start)
    return pos + 1 if pos >= 0 else 1


def _begin(words, lineno, original, out: AlgebraFile, raw) -> _RawBlock:
    if len(words) not in (3, 5) or (len(words) == 5 and words[3] != "on"):
        raise ParseError("expected 'begin <kind> <name> [on <parent>]'", lineno, _col_of(original, "begin"))
    kind, name = words[1], words[2]
    if kind not in BLOCK_KINDS:
        raise ParseError(f"unknown block type {kind!r}", lineno, _col_of(original, kind))
    if name in {r.name for r in raw}:
        raise ParseError(f"duplicate block name {name!r}", lineno, _col_of(original, name, len("begin")))
    parent = words[4] if len(words) == 5 else None
    if kind in _NEEDS_PARENT and parent is None:
        raise ParseError(f"a {kind} block needs 'on <parent>'", lineno, len(original.rstrip()) + 1)
    if parent is not None and parent not in {r.name for r in raw}:
        raise ParseError(f"unknown parent block {parent!r}", lineno, original.rfind(parent) + 1)
    return _RawBlock(kind, name, parent, lineno)


_DIM_ARITY = {"linear-map": 2}
_ENTRY_KEYS = {
    "homlie": {"c": 3, "phi": 2},
    "dual-algebra": {"c": 3, "phi": 2},
    "associative": {"m": 3},
    "representation": {"rho": 3, "beta": 2},
    "bilinear-form": {"b": 2},
    "rmatrix": {"r": 2},
    "linear-map": {"map": 2},
}


def _block_line(rb: _RawBlock, words, line, lineno, original, var):
    col = len(line) - len(line.lstrip()) + 1
    if words[0] == "dim":
        if rb.kind in ("bilinear-form", "rmatrix"):
            raise ParseError(f"{rb.kind} blocks take their dimension from the parent", lineno, col)
        arity = _DIM_ARITY.get(rb.kind, 1)
        if rb.dims is not None:
            raise ParseError("dimension declared twice", lineno, col)
        if len(words) != 1 + arity or not all(w.isdigit() for w in words[1:]):
            raise ParseError(f"expected 'dim' followed by {arity} integer(s)", lineno, col)
        rb.dims = tuple(int(w) for w in words[1:])
        rb.dim_line = lineno
        return
    if words[0] == "from":
        if rb.kind != "representation":
            raise ParseError("'from' is only allowed in representation blocks", lineno, col)
        rb.source = (words[1:], lineno, col)
        return
    m = _ENTRY.match(line.strip())
    if not m:
        raise ParseError(f"cannot read line {line.strip()!r}", lineno, col)
    key = m.group(1)
    allowed = _ENTRY_KEYS[rb.kind]
    if key not in allowed:
        raise ParseError(f"unexpected entry {key!r} in a {rb.kind} block", lineno, col)
    idx_words = m.group(2).split()
    if len(idx_words) != allowed[key]:
        raise ParseError(f"'{key}' takes {allowed[key]} indices", lineno, col)
    indices = []
    search = original.find(key) + len(key)
    for w in idx_words:
        c = original.find(w, search) + 1
        search = c + len(w) - 1
        if not w.isdigit() or int(w) < 1:
            raise ParseError(f"index {w!r} is not a positive integer", lineno, c)
        indices.append((int(w) - 1, c))
    expr = m.group(3)
    expr_col = original.rfind(expr) + 1
    try:
        value = parse_scalar(expr, var)
    except ScalarParseError as exc:
        raise ParseError(f"bad scalar: {exc}", lineno, expr_col + max(exc.column - 1, 0)) from exc
    rb.entries.append((key, indices, value, lineno, col))


def _dimension(rb: _RawBlock) -> int:
    if rb.dims is None:
        raise ParseError(f"block {rb.name!r} is missing its 'dim' line", rb.line, 1)
    return rb.dims[0]


def _check_range(indices, bounds, lineno):
    for (i, c), bound in zip(indices, bounds):
        if i >= bound:
            raise ParseError(f"index {i + 1} exceeds dimension {bound}", lineno, c)


def _parent_dim(rb: _RawBlock, out: AlgebraFile) -> int:
    parent = out.blocks[rb.parent]
    value = parent.value
    if isinstance(value, (HomLieAlgebra, AssociativeAlgebra)):
        return value.dim
    if isinstance(value, Representation):
        return value.dim
    raise ParseError(f"block {rb.name!r} cannot attach to a {parent.kind} block", rb.line, 1)


def _materialize(rb: _RawBlock, out: AlgebraFile) -> None:
    try:
        value, source = _build(rb, out)
    except (SingularTwist, linalg.SingularMatrix) as exc:
        raise ParseError(str(exc), rb.line, 1) from exc
    out.add(rb.kind, rb.name, value, rb.parent, source)


def _build(rb: _RawBlock, out: AlgebraFile):
    kind = rb.kind
    if kind in ("homlie", "dual-algebra"):
        n = _dimension(rb)
        if kind == "dual-algebra" and n != _parent_dim(rb, out):
            raise ParseError("dual algebra dimension differs from its parent", rb.dim_line, 1)
        s = linalg.zeros(n, n, n)
        phi = None
        seen: dict = {}
        for key, idx, val, ln, col in rb.entries:
            _check_range(idx, (n,) * len(idx), ln)
            ii = tuple(i for i, _ in idx)
            if key == "c":
                i, j, k = ii
                if i == j:
                    if val != 0:
                        raise ParseError(f"[e{i + 1},e{i + 1}] must vanish", ln, col)
                    continue
                a, b, sign = (i, j, 1) if i < j else (j, i, -1)
                prev = seen.get((a, b, k))
                if prev is not None and prev != sign * val:
                    raise ParseError(f"conflicting entries for c {i + 1} {j + 1} {k + 1}", ln, col)
                seen[(a, b, k)] = sign * val
                s[a, b, k] = sign * val
                s[b, a, k] = -sign * val
            else:
                if phi is None:
                    phi = linalg.zeros(n, n)
                phi[ii] = val
        twist = linalg.identity(n) if phi is None else phi
        return HomLieAlgebra(s, twist, rb.name), ""
    if kind == "associative":
        n = _dimension(rb)
        m = linalg.zeros(n, n, n)
        for _, idx, val, ln, _c in rb.entries:
            _check_range(idx, (n, n, n), ln)
            m[tuple(i for i, _ in idx)] = val
        return AssociativeAlgebra(m, rb.name), ""
    if kind == "representation":
        parent = out.blocks[rb.parent].value
        if not isinstance(parent, HomLieAlgebra):
            raise ParseError("a representation must be on a homlie block", rb.line, 1)
        if rb.source is not None:
            return _derived_rep(rb, parent, out)
        d = _dimension(rb)
        n = parent.dim
        mats = linalg.zeros(n, d, d)
        beta = None
        for key, idx, val, ln, _c in rb.entries:
            if key == "rho":
                _check_range(idx, (n, d, d), ln)
                mats[tuple(i for i, _ in idx)] = val
            else:
                _check_range(idx, (d, d), ln)
                if beta is None:
                    beta = linalg.zeros(d, d)
                beta[tuple(i for i, _ in idx)] = val
        return Representation(parent, mats, linalg.identity(d) if beta is None else beta, rb.name), ""
    if kind == "bilinear-form":
        n = _parent_dim(rb, out)
        b = linalg.zeros(n, n)
        for _, idx, val, ln, _c in rb.entries:
            _check_range(idx, (n, n), ln)
            b[tuple(i for i, _ in idx)] = val
        return b, ""
    if kind == "rmatrix":
        n = _parent_dim(rb, out)
        terms: dict = {}
        for _, idx, val, ln, col in rb.entries:
            _check_range(idx, (n, n), ln)
            (i, _), (j, _) = idx
            if i == j:
                if val != 0:
                    raise ParseError("r entries need distinct indices", ln, col)
                continue
            key, v = ((i, j), val) if i < j else ((j, i), -val)
            terms[key] = terms.get(key, 0) + v
        return MultiVector(n, 2, terms), ""
    # linear-map
    if rb.dims is None:
        raise ParseError(f"block {rb.name!r} is missing its 'dim' line", rb.line, 1)
    rows, cols = rb.dims
    f = linalg.zeros(rows, cols)
    for _, idx, val, ln, _c in rb.entries:
        _check_range(idx, (rows, cols), ln)
        f[tuple(i for i, _ in idx)] = val
    return f, ""


def _derived_rep(rb: _RawBlock, g: HomLieAlgebra, out: AlgebraFile):
    words, ln, col = rb.source
    if rb.entries or rb.dims is not None:
        raise ParseError("a derived representation takes no explicit entries", ln, col)
    if words == ["coadjoint"]:
        rep = coadjoint(g)
    elif len(words) == 3 and words[0] == "adjoint" and _is_int(words[1]) and words[2].isdigit():
        rep = adjoint_rep(g, int(words[1]), int(words[2]))
    elif len(words) in (2, 3) and words[0] == "dual" and (len(words) == 2 or _is_int(words[2])):
        src = out.blocks.get(words[1])
        if src is None or src.kind != "representation":
            raise ParseError(f"unknown representation {words[1]!r}", ln, col)
        rep = dual_rep(src.value, int(words[2]) if len(words) == 3 else 1)
    else:
        raise ParseError("expected 'from coadjoint', 'from adjoint <s> <k>' or 'from dual <rep> [<s>]'", ln, col)
    return Representation(g, rep.matrices, rep.beta, rb.name), " ".join(words)


def _is_int(w: str) -> bool:
    return re.fullmatch(r"-?\d+", w) is not None


def parse_file(path) -> AlgebraFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# -- serialization -------------------------------------------------------------

def _fmt(x) -> str:
    return format_scalar(canonical(x))


def serialize(f: AlgebraFile) -> str:
    lines = ["format 1", f"field ratfunc {f.var}" if f.var else "field rational"]
    for b in f.blocks.values():
        head = f"begin {b.kind} {b.name}" + (f" on {b.parent}" if b.parent else "")
        lines.append("")
        lines.append(head)
        lines.extend(_body(b))
        lines.append("end")
    return "\n".join(lines) + "\n"


def _body(b: Block) -> list[str]:
    v = b.value
    out: list[str] = []
    if b.kind in ("homlie", "dual-algebra"):
        n = v.dim
        out.append(f"dim {n}")
        for i, j in combinations(range(n), 2):
            for k in range(n):
                if v.structure[i, j, k] != 0:
                    out.append(f"c {i + 1} {j + 1} {k + 1} = {_fmt(v.structure[i, j, k])}")
        for i, j in product(range(n), repeat=2):
            if v.twist[i, j] != 0:
                out.append(f"phi {i + 1} {j + 1} = {_fmt(v.twist[i, j])}")
    elif b.kind == "associative":
        out.append(f"dim {v.dim}")
        for idx in product(range(v.dim), repeat=3):
            if v.mult[idx] != 0:
                out.append("m " + " ".join(str(i + 1) for i in idx) + f" = {_fmt(v.mult[idx])}")
    elif b.kind == "representation":
        if b.source:
            out.append(f"from {b.source}")
            return out
        out.append(f"dim {v.dim}")
        for idx in product(range(v.algebra.dim), range(v.dim), range(v.dim)):
            if v.matrices[idx] != 0:
                out.append("rho " + " ".join(str(i + 1) for i in idx) + f" = {_fmt(v.matrices[idx])}")
        for a, c in product(range(v.dim), repeat=2):
            if v.beta[a, c] != 0:
                out.append(f"beta {a + 1} {c + 1} = {_fmt(v.beta[a, c])}")
    elif b.kind == "bilinear-form":
        for i, j in product(range(v.shape[0]), repeat=2):
            if v[i, j] != 0:
                out.append(f"b {i + 1} {j + 1} = {_fmt(v[i, j])}")
    elif b.kind == "rmatrix":
        for (i, j), c in v.terms.items():
            out.append(f"r {i + 1} {j + 1} = {_fmt(c)}")
    else:
        rows, cols = v.shape
        out.append(f"dim {rows} {cols}")
        for i, j in product(range(rows), range(cols)):
            if v[i, j] != 0:
                out.append(f"map {i + 1} {j + 1} = {_fmt(v[i, j])}")
    return out


def example_file(key: str) -> AlgebraFile:
    """File form of a named example together with its attached data."""
    from .algebra import named_example

    ex = named_example(key)
    g = ex.algebra
    var = "a" if key.startswith("dim3") else None
    f = AlgebraFile(var=var)
    name = "g"
    f.add("homlie", name, HomLieAlgebra(g.structure, g.twist, name))
    extras = ex.extras
    if "B" in extras:
        f.add("bilinear-form", "B", extras["B"], name)
        n = g.dim
        for label, idx in zip(("first", "second"), extras["split"]):
            m = linalg.zeros(n, len(idx))
            for c, i in enumerate(idx):
                m[i, c] = 1
            f.add("linear-map", label, m, name)
    if "r" in extras:
        f.add("rmatrix", "r", extras["r"], name)
    if "dual" in extras:
        d = extras["dual"]
        f.add("dual-algebra", "gdual", HomLieAlgebra(d.structure, d.twist, "gdual"), name)
    if "T" in extras:
        rep = coadjoint(g)
        f.add("representation", "coad", Representation(g, rep.matrices, rep.beta, "coad"), name, "coadjoint")
        f.add("linear-map", "T", extras["T"], "coad")
    return f
