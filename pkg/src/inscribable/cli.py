"""Command line: ``inscribable gen|analyze|zonotope|restrict|localize|profile``.

Exit codes: 0 completed (whatever the mathematical verdict), 2 input error,
3 region cap exceeded under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field

from .arrangement import (
    DEFAULT_CAP,
    Arrangement,
    NotEssential,
    ParallelPair,
    ParseError,
    RegionCapExceeded,
    ZeroNormal,
    format_arrangement,
    is_simplicial,
    load_arrangement,
    localize,
    ordered_codim2_flats,
    parse_arrangement,
    region_upper_bound,
    restrict,
)
from .catalog import NAMES, UnknownName, catalog_entry
from .exactalg import FieldError
from .inscribe import (
    InvalidProfile,
    NotRank2,
    analyze,
    profile_conditions,
    profile_verdict,
    reduced_profile,
    z_in_cone_sample,
)
from .qform import DegenerateForm, NotSymmetric, QForm, format_qform, load_qform
from .zonotope import (
    VirtualNotRenderable,
    Zonotope,
    belt_midpoint_check,
    export_mesh,
    parse_zonotope,
    two_faces,
    verify_inscribed,
)

CAP_ENV = "INSCRIBABLE_CAP"

INPUT_ERRORS = (
    ParseError,
    FieldError,
    OSError,
    ZeroNormal,
    ParallelPair,
    NotEssential,
    NotSymmetric,
    DegenerateForm,
    UnknownName,
    NotRank2,
    InvalidProfile,
    VirtualNotRenderable,
)


class InputError(ValueError):
    pass


class CapError(RuntimeError):
    pass


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{CAP_ENV} must be an integer, got {raw!r}") from None


def _verdict(b: bool) -> str:
    return "true" if b else "false"


# --- analysis document ---------------------------------------------------------


@dataclass
class AnalysisDocument:
    field: str
    dim: int
    n: int
    rank: int
    simplicial: str  # true | false | skipped
    simplicial_witness: list[int] | None
    flats: list[list[int]]
    inscribe: dict
    zonotope: dict | None = None
    timing_seconds: float = 0.0
    notes: list[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, data: dict) -> AnalysisDocument:
        return cls(**data)


def _zonotope_block(Z: Zonotope, cap: int, belts: bool) -> dict:
    F = Z.field
    ok2, faces = two_faces(Z)
    block = {
        "lambda": [F.format(x) for x in Z.lam],
        "degenerate": Z.degenerate,
        "two_faces": _verdict(ok2),
        "failing_flats": [[i + 1 for i in f.flat.indices] for f in faces if not f.inscribed],
    }
    v = verify_inscribed(Z, cap)
    block["inscribed"] = _verdict(v.inscribed)
    block["radius2"] = None if v.radius2 is None else F.format(v.radius2)
    block["radius"] = None if v.radius2 is None else math.sqrt(abs(float(v.radius2)))
    block["failure"] = v.failure
    if belts:
        block["belts"] = []
        for i in range(Z.base.n):
            b = belt_midpoint_check(Z, i, cap)
            block["belts"].append(
                {"normal": i + 1, "passed": _verdict(b.passed), "midpoints": b.midpoints, "failure": b.failure}
            )
    return block


def build_document(A: Arrangement, Q: QForm | None, cap: int, strict: bool = False, verify_sample: bool = False) -> AnalysisDocument:
    t0 = time.perf_counter()
    notes = []
    flats = ordered_codim2_flats(A)
    report = analyze(A, Q)
    simp, witness = "skipped", None
    if region_upper_bound(A.n, A.dim) <= cap or strict:
        try:
            ok, w = is_simplicial(A, cap)
            simp = _verdict(ok)
            witness = None if w is None else list(w)
        except RegionCapExceeded as e:
            if strict:
                raise CapError(str(e)) from None
            notes.append(f"simpliciality skipped: {e}")
    else:
        notes.append(f"simpliciality skipped: region bound exceeds the cap of {cap}")
    zblock = None
    if verify_sample and report.zincone_sample is not None:
        Z = Zonotope.build(A, report.zincone_sample, Q)
        try:
            zblock = _zonotope_block(Z, cap, belts=False)
        except RegionCapExceeded as e:
            if strict:
                raise CapError(str(e)) from None
            notes.append(f"zonotope verification skipped: {e}")
    return AnalysisDocument(
        field=A.field.describe(),
        dim=A.dim,
        n=A.n,
        rank=A.dim,
        simplicial=simp,
        simplicial_witness=witness,
        flats=[[i + 1 for i in f.indices] for f in flats],
        inscribe=report.to_json(),
        zonotope=zblock,
        timing_seconds=round(time.perf_counter() - t0, 6),
        notes=notes,
    )


def format_document(doc: AnalysisDocument) -> str:
    ins = doc.inscribe
    lines = [
        f"arrangement: {doc.field}, dim {doc.dim}, {doc.n} hyperplanes",
        f"codimension-2 flats: {len(doc.flats)}",
    ]
    lines += ["  (" + ", ".join(map(str, f)) + ")" for f in doc.flats]
    lines.append(f"zinspc_dim: {ins['zinspc_dim']}")
    for v in ins["zinspc_basis"]:
        lines.append("  [" + ", ".join(v) + "]")
    sample = ins["zincone_sample"]
    lines.append(f"zincone: {ins['zincone_verdict']}")
    if sample is not None:
        lines.append("  sample: [" + ", ".join(sample) + "]")
    lines.append(f"virtually_inscribable: {ins['virtually_inscribable']}")
    bad = [r["flat"] for r in ins["per_flat"] if r["verdict"] != "true"]
    if bad:
        lines.append("  nonzero pfaffians at: " + "; ".join(map(str, bad)))
    simp = doc.simplicial
    if doc.simplicial_witness:
        simp += f" (witness {doc.simplicial_witness})"
    lines.append(f"simplicial: {simp}")
    if doc.zonotope:
        z = doc.zonotope
        lines.append(f"zonotope: inscribed {z['inscribed']}, radius^2 {z['radius2']}, two_faces {z['two_faces']}")
    lines += [f"note: {n}" for n in doc.notes]
    lines.append(f"time: {doc.timing_seconds:.3f}s")
    return "\n".join(lines)


# --- commands -----------------------------------------------------------------


def _read_arrangement(path: str) -> Arrangement:
    if path == "-":
        return parse_arrangement(sys.stdin.read())
    return load_arrangement(path)


def _read_qform(path: str | None, A: Arrangement) -> QForm | None:
    if path is None:
        return None
    Q = load_qform(path, A.field)
    if Q.dim != A.dim:
        raise InputError(f"form has dimension {Q.dim}, arrangement {A.dim}")
    return Q


def _write(text: str, path: str | None):
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_GEN_POSITIONAL = {
    "A": ["n"],
    "B": ["n"],
    "D": ["n", "s"],
    "I2": ["k"],
    "R": ["k", "height"],
    "Rodd": ["k", "height"],
    "A3_10_1": ["t"],
}


def cmd_gen(args) -> int:
    params = {}
    names = _GEN_POSITIONAL.get(args.name, [])
    if len(args.values) > len(names):
        raise InputError(f"{args.name} takes at most {len(names)} positional parameters")
    params.update(zip(names, args.values))
    for kv in args.param:
        k, sep, v = kv.partition("=")
        if not sep:
            raise InputError(f"--param expects key=value, got {kv!r}")
        params[k] = v
    try:
        e = catalog_entry(args.name, **params)
    except KeyError as ex:
        if isinstance(ex, UnknownName):
            raise
        raise InputError(f"{args.name} needs parameter {ex}") from None
    comments = [f"{args.name} {' '.join(f'{k}={v}' for k, v in params.items())}".strip()]
    if e.notes:
        comments.append(e.notes)
    if e.zinspc_dim is not None:
        comments.append(f"expected zinspc_dim {e.zinspc_dim}")
    _write(format_arrangement(e.arrangement, comments), args.output)
    Q = e.extra.get("published_qform", e.qform)
    if args.qform_out:
        _write(format_qform(Q), args.qform_out)
    return 0


def cmd_analyze(args) -> int:
    A = _read_arrangement(args.file)
    Q = _read_qform(args.qform, A)
    doc = build_document(A, Q, args.cap, args.strict, args.verify_sample)
    if args.json:
        print(json.dumps(doc.to_json(), indent=2))
    else:
        print(format_document(doc))
    return 0


def _parse_lambda(text: str, A: Arrangement, Q):
    if text == "auto":
        lam = z_in_cone_sample(A, Q)
        if lam is None:
            raise InputError("--lambda auto: no strictly positive inscribed lambda exists")
        return lam
    parts = [p for p in text.replace(",", " ").split()]
    if len(parts) != A.n:
        raise InputError(f"--lambda needs {A.n} values, got {len(parts)}")
    return [A.field.parse(p) for p in parts]


def cmd_zonotope(args) -> int:
    with open(args.file) as fh:
        text = fh.read()
    first = next((l.split("#", 1)[0].strip() for l in text.splitlines() if l.split("#", 1)[0].strip()), "")
    if first.startswith("arrangement"):
        Z = parse_zonotope(text, os.path.dirname(os.path.abspath(args.file)))
        if args.qform:
            Z = Zonotope.build(Z.base, Z.lam, _read_qform(args.qform, Z.base))
        if args.lam:
            Z = Zonotope.build(Z.base, _parse_lambda(args.lam, Z.base, Z.qform), Z.qform)
    else:
        A = parse_arrangement(text)
        Q = _read_qform(args.qform, A)
        if not args.lam:
            raise InputError("--lambda is required with an arrangement file")
        Z = Zonotope.build(A, _parse_lambda(args.lam, A, Q), Q)
    try:
        block = _zonotope_block(Z, args.cap, belts=args.verify)
        if args.export_obj:
            mesh = export_mesh(Z, args.cap)
            _write(mesh.to_obj(), args.export_obj)
            block["mesh"] = {
                "vertices": len(mesh.vertices),
                "faces": len(mesh.faces),
                "euler": mesh.euler_characteristic(),
            }
    except RegionCapExceeded as e:
        if args.strict:
            raise CapError(str(e)) from None
        ok2, _ = two_faces(Z)
        block = {"two_faces": _verdict(ok2), "inscribed": "skipped", "note": str(e)}
    if args.json:
        print(json.dumps(block, indent=2))
    else:
        for k, v in block.items():
            if k == "belts":
                for b in v:
                    print(f"belt {b['normal']}: {b['passed']} ({b['midpoints']} midpoints)")
            else:
                print(f"{k}: {v}")
    return 0


def _label_comments(D, offset_note: str) -> list[str]:
    F = D.arrangement.field
    out = [offset_note, "label map (new <- old*factor):"]
    for k, members in enumerate(D.label_map):
        src = ", ".join(f"{j + 1}*{F.format(f)}" for j, f in members)
        out.append(f"  {k + 1} <- {src}")
    return out


def _check_index(i: int, A: Arrangement) -> int:
    if not 1 <= i <= A.n:
        raise InputError(f"hyperplane index {i} is out of range 1..{A.n}")
    return i - 1


def cmd_restrict(args) -> int:
    A = _read_arrangement(args.file)
    Q = _read_qform(args.qform, A)
    i = _check_index(args.index, A)
    D = restrict(A, i, Q)
    comments = _label_comments(D, f"restriction to hyperplane {args.index}")
    _write(format_arrangement(D.arrangement, comments), args.output)
    if args.qform_out:
        _write(format_qform(D.qform), args.qform_out)
    return 0


def cmd_localize(args) -> int:
    A = _read_arrangement(args.file)
    Q = _read_qform(args.qform, A)
    try:
        idx = [int(t) for t in args.indices.replace(",", " ").split()]
    except ValueError:
        raise InputError(f"bad index list {args.indices!r}") from None
    if not idx:
        raise InputError("localize needs at least one index")
    chosen = [_check_index(i, A) for i in idx]
    D = localize(A, chosen, Q)
    comments = _label_comments(D, f"localization at hyperplanes {sorted(set(idx))}")
    _write(format_arrangement(D.arrangement, comments), args.output)
    if args.qform_out:
        _write(format_qform(D.qform), args.qform_out)
    return 0


def cmd_profile(args) -> int:
    A = _read_arrangement(args.file)
    p = reduced_profile(A)
    verdict = profile_verdict(p, args.tol)
    eq, strict = profile_conditions(p.angles)
    doc = {
        "profile": list(p.angles),
        "verdict": verdict,
        "min_strict_margin": min(strict) if strict else None,
    }
    if eq:
        doc["equality_margin"] = eq[0]
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print("profile: (" + ", ".join(f"{b:.12g}" for b in p.angles) + ")")
        print(f"inscribable: {verdict}")
        if eq:
            print(f"equality margin: {eq[0]:.3g}")
        if strict:
            print(f"smallest strict margin: {min(strict):.3g}")
    return 0


# --- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="inscribable", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def cap_opts(sp):
        sp.add_argument("--cap", type=int, default=None, help=f"region cap (default ${CAP_ENV} or {DEFAULT_CAP})")
        sp.add_argument("--strict", action="store_true", help="exit 3 when the cap is exceeded")

    g = sub.add_parser("gen", help="write a catalog arrangement")
    g.add_argument("name", help="one of " + ", ".join(NAMES))
    g.add_argument("values", nargs="*", help="positional parameters, e.g. 'D 4 2'")
    g.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    g.add_argument("-o", "--output")
    g.add_argument("--qform-out", help="also write the entry's bilinear form")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="inscribability report")
    a.add_argument("file")
    a.add_argument("--qform")
    a.add_argument("--json", action="store_true")
    a.add_argument("--verify-sample", action="store_true", help="verify the zonotope of the positive sample")
    cap_opts(a)
    a.set_defaults(func=cmd_analyze)

    z = sub.add_parser("zonotope", help="build and verify a zonotope")
    z.add_argument("file", help="arrangement file or zonotope spec file")
    z.add_argument("--lambda", dest="lam", help="'c1,...,cn' or 'auto'")
    z.add_argument("--qform")
    z.add_argument("--verify", action="store_true", help="also run the belt midpoint checks")
    z.add_argument("--export-obj", metavar="OUT")
    z.add_argument("--json", action="store_true")
    cap_opts(z)
    z.set_defaults(func=cmd_zonotope)

    r = sub.add_parser("restrict", help="restrict to one hyperplane")
    r.add_argument("file")
    r.add_argument("index", type=int, help="1-based hyperplane label")
    r.add_argument("--qform")
    r.add_argument("-o", "--output")
    r.add_argument("--qform-out")
    r.set_defaults(func=cmd_restrict)

    loc = sub.add_parser("localize", help="localize at the intersection of hyperplanes")
    loc.add_argument("file")
    loc.add_argument("indices", help="1-based labels, comma separated")
    loc.add_argument("--qform")
    loc.add_argument("-o", "--output")
    loc.add_argument("--qform-out")
    loc.set_defaults(func=cmd_localize)

    pr = sub.add_parser("profile", help="reduced profile of a line arrangement")
    pr.add_argument("file")
    pr.add_argument("--tol", type=float, default=1e-9)
    pr.add_argument("--json", action="store_true")
    pr.set_defaults(func=cmd_profile)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "cap", "absent") is None:
            args.cap = default_cap()
        return args.func(args)
    except CapError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (InputError, *INPUT_ERRORS) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
