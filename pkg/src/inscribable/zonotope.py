"""Zonotopes ``Z = sum lambda_i [-z_i, z_i]`` and independent inscription checks.

``lambda`` may have any signs (virtual zonotopes); only mesh export insists on
a genuine polytope.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arrangement import (
    DEFAULT_CAP,
    Arrangement,
    DerivedArrangement,
    OrderedFlat,
    ParseError,
    load_arrangement,
    ordered_codim2_flats,
    parse_scalar_row,
    rays,
    restrict,
    sign_matrix,
    tope_graph,
)
from .exactalg import Scalar
from .inscribe import gram_matrix, skew_gram
from .qform import QForm, load_qform


class VirtualNotRenderable(ValueError):
    pass


@dataclass(frozen=True)
class Zonotope:
    base: Arrangement
    lam: tuple[Scalar, ...]
    qform: QForm

    @classmethod
    def build(cls, A: Arrangement, lam: Sequence, Q: QForm | None = None) -> Zonotope:
        if len(lam) != A.n:
            raise ValueError(f"lambda has {len(lam)} entries, arrangement has {A.n} hyperplanes")
        Q = Q or QForm.identity(A.dim, A.field)
        if Q.dim != A.dim:
            raise ValueError("form and arrangement dimensions differ")
        return cls(A, tuple(A.field.coerce(x) for x in lam), Q)

    @property
    def field(self):
        return self.base.field

    @property
    def degenerate(self) -> bool:
        return any(self.field.is_zero(x) for x in self.lam)

    def point(self, signs: Sequence[int]) -> list[Scalar]:
        F = self.field
        v = [F.zero()] * self.base.dim
        for s, l, z in zip(signs, self.lam, self.base.normals):
            if s == 0:
                continue
            c = l if s > 0 else -l
            v = [a + c * b for a, b in zip(v, z)]
        return v


def vertices(Z: Zonotope, cap: int = DEFAULT_CAP) -> dict[tuple, list[Scalar]]:
    """One point per tope, in tope order.  Points coincide only if some
    lambda_i vanishes (see :attr:`Zonotope.degenerate`)."""
    g = tope_graph(Z.base, cap)
    return {t: Z.point(t) for t in g.topes}


def _same(F, a, b) -> bool:
    if F.exact:
        return a == b
    return abs(a - b) <= F.tolerance * max(1.0, abs(a), abs(b))


def _vanishes(F, x, scale) -> bool:
    if F.exact:
        return F.is_zero(x)
    return abs(x) <= F.tolerance * max(1.0, abs(scale or 0))


@dataclass(frozen=True)
class InscriptionVerdict:
    inscribed: bool
    radius2: Scalar | None
    failure: str | None = None
    degenerate: bool = False


def verify_inscribed(Z: Zonotope, cap: int = DEFAULT_CAP) -> InscriptionVerdict:
    """Check equal squared Q-norms of all vertices and Q-orthogonality of every
    edge midpoint to its edge direction."""
    F = Z.field
    g = tope_graph(Z.base, cap)
    Q = Z.qform
    r2 = None
    for t in g.topes:
        v = Z.point(t)
        n2 = Q.inner(v, v)
        if r2 is None:
            r2 = n2
        elif not _same(F, n2, r2):
            return InscriptionVerdict(False, None, f"vertex {_fmt_signs(t)} has squared norm {F.format(n2)}, expected {F.format(r2)}", Z.degenerate)
    G = gram_matrix(Z.base, Q)
    zero = F.zero()
    for e in g.edges:
        j = e[1]
        if F.is_zero(Z.lam[j]):
            continue  # a collapsed edge; the zonotope lives on the support
        tau = g.covector(e)
        s = zero
        for i, ti in enumerate(tau):
            if ti:
                term = Z.lam[i] * G[j][i]
                s = s + term if ti > 0 else s - term
        if not _vanishes(F, s, r2):
            return InscriptionVerdict(False, None, f"edge {_fmt_signs(tau)} midpoint is not orthogonal to normal {j + 1}", Z.degenerate)
    return InscriptionVerdict(True, r2, None, Z.degenerate)


def _fmt_signs(t) -> str:
    return "".join("+" if s > 0 else ("-" if s < 0 else "0") for s in t)


@dataclass(frozen=True)
class TwoFace:
    flat: OrderedFlat
    lam: tuple[Scalar, ...]
    # the all-plus tope of the flat's localization, always a tope after sign normalization
    representative: tuple[int, ...]
    residual: tuple[Scalar, ...]
    inscribed: bool


def two_faces(Z: Zonotope, flats=None) -> tuple[bool, list[TwoFace]]:
    """Per-flat certificate: ``R_L lambda_L = 0`` for every codimension-2 flat.

    Where some ``lambda_i`` vanish only the rows of the support are required.
    """
    F = Z.field
    flats = flats if flats is not None else ordered_codim2_flats(Z.base)
    G = gram_matrix(Z.base, Z.qform)
    out = []
    zero = F.zero()
    for flat in flats:
        R = skew_gram(Z.base, flat, G=G)
        lam_L = tuple(Z.lam[i] for i in flat.indices)
        res = tuple(sum((a * b for a, b in zip(row, lam_L)), zero) for row in R)
        # rows of generators with lambda = 0 belong to no face of the support
        ok = all(F.is_zero(x) for x, l in zip(res, lam_L) if not F.is_zero(l))
        out.append(TwoFace(flat, lam_L, (1,) * len(flat), res, ok))
    return all(f.inscribed for f in out), out


@dataclass(frozen=True)
class Projection:
    zonotope: Zonotope
    derived: DerivedArrangement
    verdict: InscriptionVerdict
    expected_radius2: Scalar | None  # radius^2 - lambda_i^2 <z_i, z_i>_Q when Z is inscribed
    consistent: bool | None


def project(Z: Zonotope, i: int, cap: int = DEFAULT_CAP, source: InscriptionVerdict | None = None) -> Projection:
    """Q-orthogonal projection of ``Z`` along ``z_i`` onto ``H_i``.

    Images of parallel generators are merged, their lengths added with the
    proportionality factors recorded in the label map.
    """
    F = Z.field
    D = restrict(Z.base, i, Z.qform)
    lam = []
    for members in D.label_map:
        total = F.zero()
        for j, f in members:
            total = total + Z.lam[j] * abs(f)
        lam.append(total)
    P = Zonotope(D.arrangement, tuple(lam), D.qform)
    verdict = verify_inscribed(P, cap)
    source = source or verify_inscribed(Z, cap)
    expected = consistent = None
    if source.inscribed:
        zi = Z.base.normals[i]
        expected = source.radius2 - Z.lam[i] * Z.lam[i] * Z.qform.inner(zi, zi)
        consistent = verdict.inscribed and _same(F, verdict.radius2, expected)
    return Projection(P, D, verdict, expected, consistent)


@dataclass(frozen=True)
class BeltVerdict:
    passed: bool
    radius2: Scalar | None
    midpoints: int
    failure: str | None = None


def belt_midpoint_check(Z: Zonotope, i: int, cap: int = DEFAULT_CAP) -> BeltVerdict:
    """Midpoints of the edges parallel to ``z_i`` are Q-orthogonal to ``z_i``
    and share one squared Q-norm."""
    F = Z.field
    g = tope_graph(Z.base, cap)
    Q = Z.qform
    zi = Z.base.normals[i]
    if F.is_zero(Z.lam[i]):
        return BeltVerdict(True, None, 0)  # no belt in direction z_i
    r2 = None
    count = 0
    for e in g.edges:
        if e[1] != i:
            continue
        tau = g.covector(e)
        c = Z.point(tau)
        count += 1
        ip = Q.inner(c, zi)
        if not _vanishes(F, ip, r2):
            return BeltVerdict(False, None, count, f"midpoint of edge {_fmt_signs(tau)} is not orthogonal to normal {i + 1}")
        n2 = Q.inner(c, c)
        if r2 is None:
            r2 = n2
        elif not _same(F, n2, r2):
            return BeltVerdict(False, None, count, f"midpoint of edge {_fmt_signs(tau)} has squared norm {F.format(n2)}, expected {F.format(r2)}")
    return BeltVerdict(True, r2, count)


# --- mesh export ------------------------------------------------------------


@dataclass(frozen=True)
class Mesh:
    vertices: list[tuple[float, float, float]]
    faces: list[list[int]]  # 0-based, counterclockwise seen from outside

    def edge_count(self) -> int:
        return len({frozenset((f[k], f[(k + 1) % len(f)])) for f in self.faces for k in range(len(f))})

    def euler_characteristic(self) -> int:
        return len(self.vertices) - self.edge_count() + len(self.faces)

    def to_obj(self) -> str:
        lines = ["v " + " ".join(f"{x:.12g}" for x in v) for v in self.vertices]
        lines += ["f " + " ".join(str(k + 1) for k in f) for f in self.faces]
        return "\n".join(lines) + "\n"


def export_mesh(Z: Zonotope, cap: int = DEFAULT_CAP) -> Mesh:
    """Boundary of a three-dimensional zonotope, one polygon per 2-face."""
    A = Z.base
    if A.dim != 3:
        raise ValueError("mesh export needs a rank-3 arrangement")
    if any(Z.field.sign(x) <= 0 for x in Z.lam):
        raise VirtualNotRenderable("mesh export needs every lambda_i > 0")
    g = tope_graph(A, cap)
    pts = [tuple(float(x) for x in Z.point(t)) for t in g.topes]
    T = np.array(g.topes, dtype=np.int8)
    R = rays(A, cap)
    S = sign_matrix(A, R)
    faces = []
    for r, srow in zip(R, S):
        for sgn in (1, -1):
            # topes whose closed cone contains the outer normal sgn*r
            members = np.nonzero(((T * (sgn * srow)) >= 0).all(axis=1))[0]
            normal = np.array([sgn * float(x) for x in r])
            normal /= np.linalg.norm(normal)
            k = int(np.argmin(np.abs(normal)))
            u = np.cross(normal, np.eye(3)[k])
            u /= np.linalg.norm(u)
            w = np.cross(normal, u)
            P = np.array([pts[m] for m in members])
            c = P.mean(axis=0)
            ang = [math.atan2(float((p - c) @ w), float((p - c) @ u)) for p in P]
            order = [int(members[t]) for t in np.argsort(ang, kind="stable")]
            faces.append(order)
    return Mesh(pts, faces)


# --- zonotope spec files ----------------------------------------------------


def parse_zonotope(text: str, base_dir: str = ".") -> Zonotope:
    """``arrangement <path>``, optional ``qform <path>``, then ``lambda ...``."""
    arr_path = q_path = lam_line = None
    for num, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        key, _, rest = s.partition(" ")
        rest = rest.strip()
        if key == "arrangement":
            arr_path = rest
        elif key == "qform":
            q_path = rest
        elif key == "lambda":
            lam_line = (num, rest)
        else:
            raise ParseError(f"unknown key {key!r}", num)
    if arr_path is None or lam_line is None:
        raise ParseError("zonotope file needs 'arrangement' and 'lambda' lines")
    A = load_arrangement(os.path.join(base_dir, arr_path))
    Q = load_qform(os.path.join(base_dir, q_path), A.field) if q_path else None
    lam = parse_scalar_row(A.field, lam_line[0], lam_line[1], A.n)
    return Zonotope.build(A, lam, Q)


def load_zonotope(path) -> Zonotope:
    with open(path) as fh:
        return parse_zonotope(fh.read(), os.path.dirname(os.path.abspath(path)))
