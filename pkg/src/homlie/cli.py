"""Command line entry point for the homlie package.

Every command prints a JSON certificate on standard output (or writes it to
``--cert``); diagnostics and the human-readable summary go to standard error.
Exit status is 0 when every check passes, 1 when a check fails and 2 when the
input cannot be read.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

from . import __version__, linalg
from .algebra import HomLieAlgebra, check_hom_lie
from .bialgebra import (HomLieBialgebra, ManinTriple, NonstandardPairing, QuadraticHomLie, TwistMismatch,
                        check_bialgebra, check_manin_triple, check_quadratic, double, split)
from .cohomology import is_one_cocycle_derivation
from .derivations import (AssociativeAlgebra, ClosureFailure, NotEndomorphism, SingularSigma, check_associative,
                          compute_derivations, derivation_homlie)
from .fileformat import AlgebraFile, Block, ParseError, parse, serialize
from .multilinear import DimensionMismatch, MultiVector, wedge_basis
from .report import Check, CheckReport
from .reps import Representation, check_representation, dual_rep, semidirect
from .scalars import PoleAtValue, ScalarParseError, parse_scalar
from .yangbaxter import (OOperator, RMatrix, all_r_valid, check_conr, check_o_operator, coboundary_delta,
                         dualize_delta, search_chybe, triangular_bialgebra)

CHECK_TARGETS = ("homlie", "rep", "quadratic", "manin", "bialgebra", "ooperator")
BUILD_TARGETS = ("double", "split", "dual-rep", "semidirect", "derivation-algebra", "delta")


class InputError(ValueError):
    """The file parsed but does not contain what the command needs."""


@dataclass
class Certificate:
    command: str
    input_sha256: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def absorb(self, report: CheckReport, prefix: str = "") -> bool:
        for c in report.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.witness))
        self.notes.extend(prefix + n for n in report.notes)
        return report.passed

    def add(self, name: str, passed: bool, witness: str = "") -> bool:
        self.checks.append(Check(name, bool(passed), "" if passed else witness))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "input_sha256": self.input_sha256,
            "passed": self.passed,
            "checks": [{"name": c.name, "passed": c.passed, "witness": c.witness} for c in self.checks],
            "notes": self.notes,
            "outputs": self.outputs,
            "version": __version__,
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


# -- block lookup ----------------------------------------------------------------

def _need(f: AlgebraFile, kind: str, parent: str | None = None) -> Block:
    block = f.first(kind, parent)
    if block is None:
        where = f" on {parent!r}" if parent else ""
        raise InputError(f"the input has no {kind} block{where}")
    return block


def _algebra_blocks(f: AlgebraFile) -> list[Block]:
    return f.of_kind("homlie") + f.of_kind("dual-algebra")


def _manin_from_file(f: AlgebraFile) -> tuple[Block, ManinTriple]:
    form = _need(f, "bilinear-form")
    ambient = f.blocks[form.parent]
    if ambient.kind != "homlie":
        raise InputError("the bilinear form must sit on a homlie block")
    maps = f.of_kind("linear-map", ambient.name)
    if len(maps) < 2:
        raise InputError(f"a Manin triple needs two linear-map blocks on {ambient.name!r}")
    for m in maps[:2]:
        if m.value.shape[0] != ambient.value.dim:
            raise InputError(f"subspace {m.name!r} does not live in {ambient.name!r}")
    return ambient, ManinTriple(QuadraticHomLie(ambient.value, form.value), maps[0].value, maps[1].value)


def _bialgebra_from_file(f: AlgebraFile) -> HomLieBialgebra:
    dual = _need(f, "dual-algebra")
    g = f.blocks[dual.parent]
    if g.kind != "homlie":
        raise InputError("the dual algebra must sit on a homlie block")
    return HomLieBialgebra(g.value, dual.value)


# -- check ---------------------------------------------------------------------------

def _run_check(args, f: AlgebraFile, cert: Certificate) -> None:
    what = args.what
    if what == "homlie":
        blocks = _algebra_blocks(f)
        if not blocks:
            raise InputError("the input has no homlie block")
        for b in blocks:
            cert.absorb(check_hom_lie(b.value), f"{b.name}:")
    elif what == "rep":
        blocks = f.of_kind("representation")
        if not blocks:
            raise InputError("the input has no representation block")
        for b in blocks:
            cert.absorb(check_representation(b.value), f"{b.name}:")
    elif what == "quadratic":
        blocks = f.of_kind("bilinear-form")
        if not blocks:
            raise InputError("the input has no bilinear-form block")
        for b in blocks:
            cert.absorb(check_quadratic(QuadraticHomLie(f.blocks[b.parent].value, b.value)), f"{b.name}:")
    elif what == "manin":
        _, triple = _manin_from_file(f)
        cert.absorb(check_manin_triple(triple))
    elif what == "bialgebra":
        bi = _bialgebra_from_file(f)
        try:
            cert.absorb(check_bialgebra(bi))
        except TwistMismatch as exc:
            cert.add("twist-duality", False, str(exc))
    elif what == "ooperator":
        maps = [b for b in f.of_kind("linear-map") if f.blocks[b.parent].kind == "representation"]
        if not maps:
            raise InputError("an O-operator needs a linear-map block on a representation")
        for b in maps:
            rep = f.blocks[b.parent].value
            cert.absorb(check_representation(rep), f"{b.parent}:")
            cert.absorb(check_o_operator(OOperator(rep, b.value)), f"{b.name}:")


# -- build ---------------------------------------------------------------------------

def _subspace(n: int, offset: int, k: int):
    m = linalg.zeros(n, k)
    for i in range(k):
        m[offset + i, i] = 1
    return m


def _run_build(args, f: AlgebraFile, cert: Certificate) -> AlgebraFile | None:
    what = args.what
    out = AlgebraFile(var=f.var)
    if what == "double":
        bi = _bialgebra_from_file(f)
        try:
            ok = cert.absorb(check_bialgebra(bi), "input:")
        except TwistMismatch as exc:
            ok = cert.add("input:twist-duality", False, str(exc))
        if not ok:
            return None
        triple = double(bi, verify=False)
        amb = triple.ambient.algebra
        n = bi.g.dim
        out.add("homlie", "double", HomLieAlgebra(amb.structure, amb.twist, "double"))
        out.add("bilinear-form", "pairing", triple.ambient.form, "double")
        out.add("linear-map", "g", _subspace(2 * n, 0, n), "double")
        out.add("linear-map", "gdual", _subspace(2 * n, n, n), "double")
        cert.absorb(check_manin_triple(triple), "output:")
    elif what == "split":
        _, triple = _manin_from_file(f)
        if not cert.absorb(check_manin_triple(triple), "input:"):
            return None
        try:
            bi = split(triple)
        except NonstandardPairing as exc:
            cert.add("pairing", False, str(exc))
            return None
        out.add("homlie", "g", HomLieAlgebra(bi.g.structure, bi.g.twist, "g"))
        out.add("dual-algebra", "gdual", HomLieAlgebra(bi.dual.structure, bi.dual.twist, "gdual"), "g")
        cert.absorb(check_bialgebra(bi), "output:")
    elif what == "dual-rep":
        reps = f.of_kind("representation")
        if not reps:
            raise InputError("the input has no representation block")
        parents = {}
        for b in reps:
            if not cert.absorb(check_representation(b.value), f"input:{b.name}:"):
                return None
        for b in reps:
            if b.parent not in parents:
                parents[b.parent] = out.add("homlie", b.parent, f.blocks[b.parent].value)
            d = dual_rep(b.value, args.s)
            name = f"{b.name}_dual"
            out.add("representation", name, Representation(d.algebra, d.matrices, d.beta, name), b.parent)
            cert.absorb(check_representation(d), f"output:{name}:")
    elif what == "semidirect":
        rb = _need(f, "representation")
        if not cert.absorb(check_representation(rb.value), "input:"):
            return None
        h = semidirect(rb.value.algebra, rb.value, verify=False)
        out.add("homlie", "semidirect", HomLieAlgebra(h.structure, h.twist, "semidirect"))
        cert.absorb(check_hom_lie(h), "output:")
    elif what == "derivation-algebra":
        ab = _need(f, "associative")
        A: AssociativeAlgebra = ab.value
        if not cert.absorb(check_associative(A), "input:"):
            return None
        maps = f.of_kind("linear-map", ab.name)
        sigma = maps[0].value if maps else linalg.identity(A.dim)
        tau = maps[1].value if len(maps) > 1 else sigma
        try:
            space = compute_derivations(A, sigma, tau)
        except NotEndomorphism as exc:
            cert.add("endomorphism", False, str(exc))
            return None
        cert.notes.append(f"derivation space has dimension {space.dim}")
        try:
            h = derivation_homlie(space, args.m, args.l)
        except (SingularSigma, ClosureFailure, ValueError) as exc:
            cert.add("derivation-algebra", False, str(exc))
            return None
        out.add("homlie", "der", HomLieAlgebra(h.structure, h.twist, "der"))
        cert.absorb(check_hom_lie(h), "output:")
    elif what == "delta":
        rb = _need(f, "rmatrix")
        g = f.blocks[rb.parent].value
        if not isinstance(g, HomLieAlgebra):
            raise InputError("the r-matrix must sit on a homlie block")
        rm = RMatrix(g, rb.value)
        if not cert.add("twist-compatibility", check_conr(g, rm), "r-sharp does not intertwine the twists"):
            return None
        delta = coboundary_delta(g, rm)
        pairs = wedge_basis(g.dim, 2)
        for k in range(g.dim):
            terms = {pairs[row]: delta[row, k] for row in range(len(pairs))}
            cert.notes.append(f"Delta(e{k + 1}) = {MultiVector(g.dim, 2, terms)!r}"
                              if any(c != 0 for c in terms.values()) else f"Delta(e{k + 1}) = 0")
        out.add("homlie", rb.parent, g)
        out.add("rmatrix", rb.name, rb.value, rb.parent)
        out.add("dual-algebra", "delta", dualize_delta(g, delta, "delta"), rb.parent)
        cert.absorb(is_one_cocycle_derivation(g, delta), "output:")
    return out


# -- search ----------------------------------------------------------------------------

def _parse_support(text: str | None, n: int) -> list[tuple[int, int]]:
    if text is None:
        return list(permutations(range(n), 2))
    pairs = []
    for chunk in filter(None, (c.strip() for c in text.split(";"))):
        parts = [p.strip() for p in chunk.strip("()").split(",")]
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InputError(f"cannot read support pair {chunk!r}; use 'i,j;k,l'")
        i, j = (int(p) - 1 for p in parts)
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise InputError(f"support pair ({i + 1},{j + 1}) is out of range")
        pairs.append((i, j))
    return pairs


def _parse_grid(text: str, var: str | None) -> list:
    try:
        return [parse_scalar(p, var) for p in (s.strip() for s in text.split(",")) if p]
    except ScalarParseError as exc:
        raise InputError(f"bad grid value: {exc}") from exc


def _run_search(args, f: AlgebraFile, cert: Certificate) -> list[tuple[str, AlgebraFile]]:
    gb = _need(f, "homlie")
    g: HomLieAlgebra = gb.value
    if not cert.absorb(check_hom_lie(g), "input:"):
        return []
    support = _parse_support(args.support, g.dim)
    grid = _parse_grid(args.grid, f.var)
    if all_r_valid(g):
        cert.notes.append("all r valid: wedge^3 of a space of dimension <= 2 is zero")
    solutions = search_chybe(g, support, grid)
    cert.notes.append(f"{len(solutions)} solution(s) among {len(grid) ** len(support)} candidate(s)")
    files = []
    for idx, rm in enumerate(solutions, start=1):
        sol = AlgebraFile(var=f.var)
        sol.add("homlie", gb.name, g)
        sol.add("rmatrix", "r", rm.r, gb.name)
        bi = triangular_bialgebra(g, rm)
        sol.add("dual-algebra", "induced", HomLieAlgebra(bi.dual.structure, bi.dual.twist, "induced"), gb.name)
        cert.absorb(check_bialgebra(bi), f"solution {idx}:")
        files.append((f"solution_{idx:03d}.hl", sol))
    return files


# -- substitute ------------------------------------------------------------------------

def substitute_text(f: AlgebraFile, var: str, value) -> str:
    """Evaluate every scalar of ``f`` at ``var = value`` and return the rational file text."""
    if f.var != var:
        raise InputError(f"the file's field variable is {f.var!r}, not {var!r}")
    lines = serialize(f).splitlines()
    out = []
    block = ""
    for line in lines:
        if line.startswith("field "):
            out.append("field rational")
            continue
        if line.startswith("begin "):
            block = line.split()[2]
        if "=" in line:
            lhs, rhs = (s.strip() for s in line.split("=", 1))
            scalar = parse_scalar(rhs, var)
            try:
                evaluated = scalar.evaluate(value) if hasattr(scalar, "evaluate") else scalar
            except PoleAtValue as exc:
                raise PoleAtValue(f"block {block!r}, entry '{lhs}': {exc}") from exc
            out.append(f"{lhs} = {evaluated}")
        else:
            out.append(line)
    return "\n".join(out) + "\n"


def _run_substitute(args, f: AlgebraFile, cert: Certificate) -> AlgebraFile | None:
    value = parse_scalar(args.value)
    text = substitute_text(f, args.var, value)
    try:
        result = parse(text)
    except ParseError as exc:
        cert.add("structure", False, exc.message)
        return None
    for b in _algebra_blocks(result):
        cert.absorb(check_hom_lie(b.value), f"{b.name}:")
    for b in result.of_kind("representation"):
        cert.absorb(check_representation(b.value), f"{b.name}:")
    return result


# -- entry point -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homlie", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"homlie {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("path", help="input file")
        p.add_argument("--cert", help="also write the certificate to this file")

    p = sub.add_parser("check", help="verify the axioms of the objects in a file")
    common(p)
    p.add_argument("--what", choices=CHECK_TARGETS, required=True)
    p.add_argument("--out", help="write the certificate here instead of standard output")

    p = sub.add_parser("build", help="construct a derived object and write it as a new file")
    common(p)
    p.add_argument("--what", choices=BUILD_TARGETS, required=True)
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--s", type=int, default=1, help="power of the twist in dual-rep")
    p.add_argument("--m", type=int, default=1, help="derivation twist exponent")
    p.add_argument("--l", type=int, default=1, help="conjugation exponent of the derivation bracket")

    p = sub.add_parser("search", help="grid search for r-matrices solving the Hom-Yang-Baxter equation")
    common(p)
    p.add_argument("--support", help="1-based pairs 'i,j;k,l' (default: every ordered pair)")
    p.add_argument("--grid", default="-1,0,1", help="comma-separated coefficient values")
    p.add_argument("--out", help="directory for the solution files")

    p = sub.add_parser("substitute", help="evaluate the field variable at a rational value")
    common(p)
    p.add_argument("--var", required=True)
    p.add_argument("--value", required=True)
    p.add_argument("--out", required=True)
    return parser


def _emit(cert: Certificate, args, to_stdout: bool = True) -> None:
    text = cert.to_json()
    if args.cert:
        Path(args.cert).write_text(text, encoding="utf-8")
    if to_stdout:
        sys.stdout.write(text)
    for c in cert.checks:
        print(c.line(), file=sys.stderr)
    for n in cert.notes:
        print(f"note: {n}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = Path(args.path).read_bytes()
    except OSError as exc:
        print(f"homlie: cannot read {args.path}: {exc.strerror}", file=sys.stderr)
        return 2
    cert = Certificate(f"{args.command} {getattr(args, 'what', '')}".strip(), hashlib.sha256(raw).hexdigest())
    try:
        f = parse(raw.decode("utf-8"))
        if args.command == "check":
            _run_check(args, f, cert)
            if args.out:
                Path(args.out).write_text(cert.to_json(), encoding="utf-8")
            _emit(cert, args, to_stdout=not args.out)
        elif args.command == "build":
            result = _run_build(args, f, cert)
            if result is not None and cert.passed:
                Path(args.out).write_text(serialize(result), encoding="utf-8")
                cert.outputs.append(Path(args.out).name)
            _emit(cert, args)
        elif args.command == "search":
            files = _run_search(args, f, cert)
            if args.out:
                outdir = Path(args.out)
                outdir.mkdir(parents=True, exist_ok=True)
                for name, sol in files:
                    (outdir / name).write_text(serialize(sol), encoding="utf-8")
            cert.outputs.extend(name for name, _ in files)
            _emit(cert, args)
        else:
            result = _run_substitute(args, f, cert)
            if result is not None:
                Path(args.out).write_text(serialize(result), encoding="utf-8")
                cert.outputs.append(Path(args.out).name)
            _emit(cert, args)
    except ParseError as exc:
        print(f"{args.path}: {exc}", file=sys.stderr)
        return 2
    except (InputError, DimensionMismatch, UnicodeDecodeError, ScalarParseError) as exc:
        print(f"homlie: {exc}", file=sys.stderr)
        return 2
    except PoleAtValue as exc:
        print(f"homlie: pole: {exc}", file=sys.stderr)
        return 1
    return 0 if cert.passed else 1


if __name__ == "__main__":
    sys.exit(main())
