"""Which zonotopes with a given normal fan are inscribed in a quadric.

A zonotope ``Z = sum lambda_i [-z_i, z_i]`` is inscribed in ``<x,x>_Q = r^2``
iff each of its 2-faces is, and a 2-face belonging to the flat with cyclically
ordered normals ``z_1..z_k`` is inscribed iff ``R lambda_L = 0`` where ``R``
is the skew matrix of the pairwise inner products ``<z_s, z_t>_Q`` (s < t).
Everything here is linear algebra on those matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .arrangement import (
    DEFAULT_CAP,
    Arrangement,
    OrderedFlat,
    ordered_codim2_flats,
    tope_graph,
)
from .exactalg import FieldSpec, RowReducer, Scalar, kernel_basis, pfaffian, rank
from .exactalg.lp import relaxed_cone_mass, strict_interior_point_lp
from .qform import DegenerateForm, NotSymmetric, QForm

__all__ = [
    "DegenerateForm",
    "EdgeMatrix",
    "FlatReport",
    "InscribeReport",
    "InvalidAngles",
    "InvalidProfile",
    "NotSymmetric",
    "Profile",
    "QForm",
    "analyze",
    "edge_matrix",
    "edge_matrix_kernel",
    "face_angle_profile",
    "gram_matrix",
    "profile_conditions",
    "profile_inscribable",
    "profile_verdict",
    "reduced_profile",
    "skew_gram",
    "symmetrize_face_angles",
    "virtually_inscribable",
    "z_in_cone",
    "z_in_cone_sample",
    "z_in_space",
]

TRUE, FALSE, INCONCLUSIVE = "true", "false", "inconclusive"

# relaxation of the closed-cone test in float mode, in units of the tolerance
BOUNDARY_SLACK = 10


def _verdict(b: bool) -> str:
    return TRUE if b else FALSE


def gram_matrix(A: Arrangement, Q: QForm | None = None) -> list[list[Scalar]]:
    Q = Q or QForm.identity(A.dim, A.field)
    if Q.dim != A.dim:
        raise ValueError(f"form has dimension {Q.dim}, arrangement {A.dim}")
    return Q.gram(A.normals)


def skew_gram(A: Arrangement, flat: OrderedFlat, Q: QForm | None = None, G=None) -> list[list[Scalar]]:
    G = G if G is not None else gram_matrix(A, Q)
    idx = flat.indices
    k = len(idx)
    zero = A.field.zero()
    R = [[zero] * k for _ in range(k)]
    for s in range(k):
        for t in range(s + 1, k):
            g = G[idx[s]][idx[t]]
            R[s][t] = g
            R[t][s] = -g
    return R


def _stacked_rows(A: Arrangement, flats, G):
    for flat in flats:
        R = skew_gram(A, flat, G=G)
        for row in R:
            yield {flat.indices[t]: v for t, v in enumerate(row)}


@dataclass(frozen=True)
class ZInSpace:
    dim: int
    basis: list[list[Scalar]]
    flats: list[OrderedFlat]


def z_in_space(A: Arrangement, Q: QForm | None = None, flats=None) -> ZInSpace:
    """Kernel of the per-flat skew-Gram systems stacked into one n-column matrix.

    Basis vectors carry a 1 in their own free column and 0 in the others.
    """
    flats = flats if flats is not None else ordered_codim2_flats(A)
    G = gram_matrix(A, Q)
    F = A.field
    if F.exact:
        red = RowReducer(A.n, F)
        for row in _stacked_rows(A, flats, G):
            red.add(row)
        basis = red.kernel_basis()
    else:
        zero = F.zero()
        dense = []
        for row in _stacked_rows(A, flats, G):
            r = [zero] * A.n
            for c, v in row.items():
                r[c] = v
            dense.append(r)
        basis = kernel_basis(dense, F, A.n)
    return ZInSpace(len(basis), basis, flats)


@dataclass(frozen=True)
class ZInCone:
    sample: list[Scalar] | None
    margin: Scalar  # max over kernel lambda with max|lambda_i| <= 1 of min lambda_i
    verdict: str


def z_in_cone(A: Arrangement, Q: QForm | None = None, space: ZInSpace | None = None) -> ZInCone:
    space = space or z_in_space(A, Q)
    F = A.field
    if not space.basis:
        return ZInCone(None, F.zero(), FALSE)
    B = [[v[i] for v in space.basis] for i in range(A.n)]
    res = strict_interior_point_lp(B, F)
    if res.mu is None:
        lam = None
    else:
        zero = F.zero()
        lam = [sum((b * m for b, m in zip(row, res.mu)), zero) for row in B]
    if F.exact:
        verdict = _verdict(lam is not None)
    elif res.epsilon > F.tolerance:
        verdict = TRUE
    else:
        lam = None
        # rounding hides margins below tolerance; a nonzero point of the
        # slightly relaxed closed cone means we sit on the boundary
        mass = relaxed_cone_mass(B, BOUNDARY_SLACK * F.tolerance, F)
        verdict = INCONCLUSIVE if mass >= 0.5 else FALSE
    return ZInCone(lam, res.epsilon, verdict)


def z_in_cone_sample(A: Arrangement, Q: QForm | None = None) -> list[Scalar] | None:
    """A strictly positive lambda whose zonotope is inscribed, or None."""
    return z_in_cone(A, Q).sample


@dataclass(frozen=True)
class FlatReport:
    flat: OrderedFlat
    pfaffian: Scalar
    kernel_dim: int
    verdict: str  # pfaffian vanishes


def _pf_verdict(F: FieldSpec, pf) -> str:
    return _verdict(F.is_zero(pf))


def virtually_inscribable(A: Arrangement, Q: QForm | None = None, flats=None) -> tuple[bool, list[FlatReport]]:
    """Whether every lambda gives an inscribed virtual zonotope, i.e. all
    per-flat Pfaffians vanish.  Odd flats contribute a zero Pfaffian."""
    flats = flats if flats is not None else ordered_codim2_flats(A)
    G = gram_matrix(A, Q)
    F = A.field
    out = []
    for flat in flats:
        R = skew_gram(A, flat, G=G)
        pf = pfaffian(R, F)
        kd = len(flat) - rank(R, F)
        out.append(FlatReport(flat, pf, kd, _pf_verdict(F, pf)))
    return all(r.verdict == TRUE for r in out), out


# --- edge matrix oracle -----------------------------------------------------


@dataclass(frozen=True)
class EdgeMatrix:
    covectors: list[tuple[int, ...]]  # one per tope-graph edge, 0 at the crossed hyperplane
    crossed: list[int]
    rows: list[list[Scalar]]


def edge_matrix(A: Arrangement, Q: QForm | None = None, cap: int = DEFAULT_CAP) -> EdgeMatrix:
    """Rows ``T[tau][i] = tau_i <z_j, z_i>_Q`` over edges ``tau`` crossing ``H_j``."""
    g = tope_graph(A, cap)
    G = gram_matrix(A, Q)
    zero = A.field.zero()
    covs, crossed, rows = [], [], []
    for e in g.edges:
        tau = g.covector(e)
        j = e[1]
        covs.append(tau)
        crossed.append(j)
        rows.append([G[j][i] if s > 0 else (-G[j][i] if s < 0 else zero) for i, s in enumerate(tau)])
    return EdgeMatrix(covs, crossed, rows)


def edge_matrix_kernel(A: Arrangement, Q: QForm | None = None, cap: int = DEFAULT_CAP) -> list[list[Scalar]]:
    T = edge_matrix(A, Q, cap)
    F = A.field
    if F.exact:
        red = RowReducer(A.n, F)
        for row in T.rows:
            red.add(dict(enumerate(row)))
        return red.kernel_basis()
    return kernel_basis(T.rows, F, A.n)


# --- report -----------------------------------------------------------------


@dataclass(frozen=True)
class InscribeReport:
    field: FieldSpec
    zinspc_dim: int
    zinspc_basis: list[list[Scalar]]
    zincone_sample: list[Scalar] | None
    zincone_margin: Scalar
    zincone_verdict: str
    virtually_inscribable: str
    per_flat: list[FlatReport]

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "zinspc_dim": self.zinspc_dim,
            "zinspc_basis": [[fmt(x) for x in v] for v in self.zinspc_basis],
            "zincone_sample": None
            if self.zincone_sample is None
            else [fmt(x) for x in self.zincone_sample],
            "zincone_margin": fmt(self.zincone_margin),
            "zincone_verdict": self.zincone_verdict,
            "virtually_inscribable": self.virtually_inscribable,
            "per_flat": [
                {
                    "flat": [i + 1 for i in r.flat.indices],
                    "pfaffian": fmt(r.pfaffian),
                    "kernel_dim": r.kernel_dim,
                    "verdict": r.verdict,
                }
                for r in self.per_flat
            ],
        }


def analyze(A: Arrangement, Q: QForm | None = None) -> InscribeReport:
    flats = ordered_codim2_flats(A)
    space = z_in_space(A, Q, flats)
    cone = z_in_cone(A, Q, space)
    virt, per_flat = virtually_inscribable(A, Q, flats)
    return InscribeReport(
        A.field,
        space.dim,
        space.basis,
        cone.sample,
        cone.margin,
        cone.verdict,
        _verdict(virt),
        per_flat,
    )


# --- rank two ---------------------------------------------------------------


class InvalidProfile(ValueError):
    pass


class InvalidAngles(ValueError):
    pass


class NotRank2(ValueError):
    pass


PROFILE_TOL = 1e-9


@dataclass(frozen=True)
class Profile:
    """Angles of consecutive regions of a line arrangement, summing to pi."""

    angles: tuple[float, ...]

    def __post_init__(self):
        validate_profile(self.angles)

    @property
    def n(self) -> int:
        return len(self.angles)


def validate_profile(beta: Sequence[float], tol: float = PROFILE_TOL) -> None:
    if len(beta) < 2:
        raise InvalidProfile("a profile needs at least two angles")
    if any(not (0 < b < math.pi) for b in beta):
        raise InvalidProfile("profile angles must lie in (0, pi)")
    if abs(sum(beta) - math.pi) > tol:
        raise InvalidProfile(f"profile sums to {sum(beta)!r}, not pi")


def reduced_profile(A: Arrangement) -> Profile:
    """Counterclockwise angular gaps between consecutive normals among
    ``+-z_1..+-z_n``, starting from ``z_1``."""
    if A.dim != 2:
        raise NotRank2(f"arrangement has rank {A.dim}")
    base = [math.atan2(float(z[1]), float(z[0])) for z in A.normals]
    theta0 = base[0]
    ang = []
    for t in base:
        for s in (t, t + math.pi):
            ang.append((s - theta0) % (2 * math.pi))
    ang.sort()
    # the first entry is z_1 itself (angle 0), the (n+1)-th is -z_1 (angle pi)
    n = A.n
    beta = [ang[k + 1] - ang[k] for k in range(n - 1)] + [math.pi - ang[n - 1]]
    return Profile(tuple(beta))


def profile_conditions(beta: Sequence[float]) -> tuple[list[float], list[float]]:
    """``(equalities, strict)``: residuals that must vanish and values that
    must be positive for a line arrangement with this profile to carry an
    inscribed zonogon."""
    n = len(beta)
    half = math.pi / 2
    if n % 2:
        strict = [
            sum((-1) ** t * beta[(j + t) % n] for t in range(n)) for j in range(n)
        ]
        return [], strict
    m = n // 2
    eq = [sum(beta[0:n:2]) - half]
    strict = []
    for j in range(n):
        for h in range(m):
            s = sum(beta[(2 * i + j) % n] for i in range(1, h + 1))
            s += sum(beta[(2 * i + 1 + j) % n] for i in range(h + 1, m))
            strict.append(half - s)
    return eq, strict


def _as_angles(p) -> tuple[float, ...]:
    return p.angles if isinstance(p, Profile) else tuple(float(b) for b in p)


def profile_verdict(p, tol: float = PROFILE_TOL) -> str:
    beta = _as_angles(p)
    validate_profile(beta)
    eq, strict = profile_conditions(beta)
    if any(abs(r) > tol for r in eq) or any(v < -tol for v in strict):
        return FALSE
    if any(v <= tol for v in strict):
        return INCONCLUSIVE
    return TRUE


def profile_inscribable(p, tol: float = PROFILE_TOL) -> bool:
    return profile_verdict(p, tol) == TRUE


def face_angle_profile(alpha: Sequence[float]) -> tuple[float, ...]:
    """Means of cyclically consecutive face angles, one per vertex.

    Face angles are the oriented central angles between consecutive vertices
    of a polygon inscribed in a circle about the origin.
    """
    k = len(alpha)
    return tuple(0.5 * (alpha[i] + alpha[(i + 1) % k]) for i in range(k))


def symmetrize_face_angles(alpha: Sequence[float], tol: float = PROFILE_TOL) -> list[float]:
    """Face angles of the centrally symmetric inscribed (virtual) zonogon with
    the same profile: each angle is replaced by its mean with the opposite one."""
    k = len(alpha)
    if k < 4 or k % 2:
        raise InvalidAngles("need an even number (at least 4) of face angles")
    if any(not (-math.pi < a <= math.pi) for a in alpha):
        raise InvalidAngles("face angles must lie in (-pi, pi]")
    if abs(sum(alpha) - 2 * math.pi) > tol:
        raise InvalidAngles(f"face angles sum to {sum(alpha)!r}, not 2*pi")
    n = k // 2
    half = [0.5 * (alpha[i] + alpha[n + i]) for i in range(n)]
    return half + half
