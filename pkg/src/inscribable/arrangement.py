"""Essential linear hyperplane arrangements.

Normals are stored sign-normalized (all in one open halfspace).  Labels are
0-based in the Python API; file formats and reports add 1.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exactalg import FieldSpec, Scalar, kernel_basis, rank, rref
from .exactalg.fields import FieldError
from .qform import DegenerateForm, QForm

DEFAULT_CAP = 100_000


class ZeroNormal(ValueError):
    def __init__(self, index: int):
        super().__init__(f"normal {index + 1} is zero")
        self.index = index


class ParallelPair(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__(f"normals {i + 1} and {j + 1} are parallel")
        self.i, self.j = i, j


class NotEssential(ValueError):
    def __init__(self, rank_: int, dim: int):
        super().__init__(
            f"normals span a {rank_}-dimensional space in dimension {dim}; essentialize first"
        )
        self.rank, self.dim = rank_, dim


class RegionCapExceeded(RuntimeError):
    def __init__(self, cap: int, what: str = "regions"):
        super().__init__(f"more than {cap} {what}; raise the region cap to continue")
        self.cap = cap


@dataclass(frozen=True)
class Arrangement:
    field: FieldSpec
    dim: int
    normals: tuple[tuple[Scalar, ...], ...]
    flipped: tuple[bool, ...] = ()  # True where the input normal was negated

    @property
    def n(self) -> int:
        return len(self.normals)

    def __repr__(self):
        return f"Arrangement({self.field.describe()}, dim={self.dim}, n={self.n})"


@dataclass(frozen=True)
class OrderedFlat:
    indices: tuple[int, ...]
    plane_basis: tuple[tuple[Scalar, ...], tuple[Scalar, ...]]

    def __len__(self):
        return len(self.indices)


Tope = tuple  # sign vector of +1/-1 ints


@dataclass(frozen=True)
class TopeGraph:
    topes: tuple[Tope, ...]  # sorted lexicographically
    # (tope index, j) for every edge, listed once from the side with sigma_j = +1
    edges: tuple[tuple[int, int], ...]
    degree: tuple[int, ...]

    def covector(self, edge: tuple[int, int]) -> tuple[int, ...]:
        t, j = edge
        s = list(self.topes[t])
        s[j] = 0
        return tuple(s)


@dataclass(frozen=True)
class DerivedArrangement:
    """Result of restriction or localization.

    ``label_map[k]`` lists ``(old_label, factor)`` with
    ``image(old normal) = factor * new normal k``.
    """

    arrangement: Arrangement
    qform: QForm
    label_map: tuple[tuple[tuple[int, Scalar], ...], ...]


# --- construction -----------------------------------------------------------


def _generic_functional(field: FieldSpec, normals) -> list[Scalar]:
    d = len(normals[0])
    k = 0
    while True:
        eps = Fraction(1, 2**k)
        c = [field.coerce(eps**p) for p in range(d)]
        if all(not field.is_zero(sum((a * b for a, b in zip(c, z)), field.zero())) for z in normals):
            return c
        k += 1


def _direction_key(field: FieldSpec, v: Sequence[Scalar]):
    """Hashable key shared exactly by parallel vectors (exact fields)."""
    lead = next(x for x in v if not field.is_zero(x))
    return tuple(x / lead for x in v)


def _parallel(field: FieldSpec, u, v) -> bool:
    d = len(u)
    # rank of (u, v) < 2, judged on a scale-aware tolerance in float mode
    if field.exact:
        return all(u[a] * v[b] == u[b] * v[a] for a in range(d) for b in range(a + 1, d))
    nu = math.sqrt(sum(x * x for x in u))
    nv = math.sqrt(sum(x * x for x in v))
    tol = field.tolerance * nu * nv
    return all(abs(u[a] * v[b] - u[b] * v[a]) <= tol for a in range(d) for b in range(a + 1, d))


def _find_parallel(field: FieldSpec, normals) -> tuple[int, int] | None:
    if field.exact:
        seen: dict = {}
        for i, z in enumerate(normals):
            key = _direction_key(field, z)
            if key in seen:
                return seen[key], i
            seen[key] = i
        return None
    for i in range(len(normals)):
        for j in range(i + 1, len(normals)):
            if _parallel(field, normals[i], normals[j]):
                return i, j
    return None


def new_arrangement(field: FieldSpec, normals: Iterable[Sequence], normalize: bool = True) -> Arrangement:
    rows = [tuple(field.coerce(x) for x in z) for z in normals]
    if not rows:
        raise ValueError("an arrangement needs at least one hyperplane")
    d = len(rows[0])
    if any(len(z) != d for z in rows):
        raise ValueError("normals have different lengths")
    for i, z in enumerate(rows):
        if all(field.is_zero(x) for x in z):
            raise ZeroNormal(i)
    pair = _find_parallel(field, rows)
    if pair:
        raise ParallelPair(*pair)
    r = rank(rows, field)
    if r != d:
        raise NotEssential(r, d)
    flipped = [False] * len(rows)
    if normalize:
        c = _generic_functional(field, rows)
        for i, z in enumerate(rows):
            if field.sign(sum((a * b for a, b in zip(c, z)), field.zero())) < 0:
                rows[i] = tuple(-x for x in z)
                flipped[i] = True
    return Arrangement(field, d, tuple(rows), tuple(flipped))


def essentialize(field: FieldSpec, normals: Sequence[Sequence]) -> tuple[Arrangement, list[list[Scalar]]]:
    """Rewrite normals in coordinates of a basis of their span.

    The basis is the first independent subset in label order; it is returned
    alongside the arrangement.
    """
    rows = [[field.coerce(x) for x in z] for z in normals]
    basis = _greedy_basis(field, rows)
    coords = [_coordinates(field, basis, z) for z in rows]
    return new_arrangement(field, coords), basis


def _greedy_basis(field: FieldSpec, vectors) -> list[list[Scalar]]:
    basis: list[list[Scalar]] = []
    for v in vectors:
        if rank(basis + [list(v)], field) > len(basis):
            basis.append(list(v))
    return basis


def _coordinates(field: FieldSpec, basis, v) -> list[Scalar] | None:
    """Coefficients of ``v`` in ``basis`` (independent vectors), or None."""
    r = len(basis)
    d = len(v)
    aug = [[basis[t][a] for t in range(r)] + [v[a]] for a in range(d)]
    R, piv = rref(aug, field, r + 1)
    if r in piv:
        return None
    out = [field.zero()] * r
    for row, p in zip(R, piv):
        out[p] = row[r]
    return out


# --- file format ------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


def _content_lines(text: str):
    for num, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield num, s


def _expect(lines, keyword: str):
    try:
        num, s = next(lines)
    except StopIteration:
        raise ParseError(f"missing '{keyword}' line") from None
    parts = s.split(None, 1)
    if parts[0] != keyword or len(parts) < 2:
        raise ParseError(f"expected '{keyword} ...'", num)
    return num, parts[1]


def _parse_int(num: int, text: str, what: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ParseError(f"bad {what} {text!r}", num) from None
    if v < 1:
        raise ParseError(f"{what} must be positive", num)
    return v


def parse_scalar_row(field: FieldSpec, num: int, text: str, width: int) -> list[Scalar]:
    toks = text.split()
    if len(toks) != width:
        raise ParseError(f"expected {width} scalars, found {len(toks)}", num)
    try:
        return [field.parse(t) for t in toks]
    except FieldError as e:
        raise ParseError(str(e), num) from None


def parse_arrangement(text: str) -> Arrangement:
    lines = _content_lines(text)
    num, desc = _expect(lines, "field")
    try:
        field = FieldSpec.from_description(desc)
    except (FieldError, ValueError) as e:
        raise ParseError(str(e), num) from None
    num, s = _expect(lines, "dim")
    d = _parse_int(num, s, "dim")
    num, s = _expect(lines, "n")
    n = _parse_int(num, s, "n")
    rows = []
    for _ in range(n):
        try:
            num, s = next(lines)
        except StopIteration:
            raise ParseError(f"expected {n} normals, found {len(rows)}") from None
        rows.append(parse_scalar_row(field, num, s, d))
    extra = next(lines, None)
    if extra:
        raise ParseError("unexpected content after the normals", extra[0])
    return new_arrangement(field, rows)


def format_arrangement(A: Arrangement, comments: Sequence[str] = ()) -> str:
    out = [f"# {c}" for c in comments]
    out += [f"field {A.field.describe()}", f"dim {A.dim}", f"n {A.n}"]
    out += [" ".join(A.field.format(x) for x in z) for z in A.normals]
    return "\n".join(out) + "\n"


def load_arrangement(path) -> Arrangement:
    with open(path) as fh:
        return parse_arrangement(fh.read())


# --- codimension-2 flats ----------------------------------------------------


def _cross_sign(field: FieldSpec, p, q) -> int:
    return field.sign(p[0] * q[1] - p[1] * q[0])


def _integer_direction(z) -> tuple[int, ...]:
    den = 1
    for x in z:
        den = den * x.denominator // math.gcd(den, x.denominator)
    v = [int(x * den) for x in z]
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return tuple(x // g for x in v)


def _plane_key(F: FieldSpec, u, v):
    """Normalized Pluecker coordinates: equal exactly for pairs spanning one plane."""
    d = len(u)
    p = [u[a] * v[b] - u[b] * v[a] for a in range(d) for b in range(a + 1, d)]
    if F.kind == "rational":
        g = 0
        for x in p:
            g = math.gcd(g, x)
        lead = next(x for x in p if x)
        g = g if lead > 0 else -g
        return tuple(x // g for x in p)
    lead = next(x for x in p if not F.is_zero(x))
    return tuple(x / lead for x in p)


def _exact_flat_members(A: Arrangement) -> list[list[int]]:
    F = A.field
    Z = [_integer_direction(z) for z in A.normals] if F.kind == "rational" else A.normals
    groups: dict = {}
    for i in range(A.n):
        for j in range(i + 1, A.n):
            key = _plane_key(F, Z[i], Z[j])
            g = groups.get(key)
            if g is None:
                groups[key] = [i, j]
            elif j not in g:
                # pairs are visited with i ascending, so i is already present
                g.append(j)
    return list(groups.values())


def _float_flat_members(A: Arrangement) -> list[list[int]]:
    F = A.field
    Z = A.normals
    n, d = A.n, A.dim
    done = [[False] * n for _ in range(n)]
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if done[i][j]:
                continue
            zi, zj = Z[i], Z[j]
            # the best-conditioned coordinate pair for Cramer's rule
            D, p, q = 0.0, 0, 1
            for a in range(d):
                for b in range(a + 1, d):
                    det = zi[a] * zj[b] - zi[b] * zj[a]
                    if abs(det) > abs(D):
                        D, p, q = det, a, b
            members = []
            for k in range(n):
                zk = Z[k]
                a_ = (zk[p] * zj[q] - zk[q] * zj[p]) / D
                b_ = (zi[p] * zk[q] - zi[q] * zk[p]) / D
                scale = 1.0 + abs(a_) + abs(b_)
                if all(abs(zk[r] - a_ * zi[r] - b_ * zj[r]) <= F.tolerance * scale for r in range(d)):
                    members.append(k)
            for s in members:
                for t in members:
                    done[s][t] = True
            out.append(members)
    return out


def _plane_coordinates(F: FieldSpec, zi, zj, zk):
    """Coordinates of zk in the basis (zi, zj), both scaled by the same nonzero
    2x2 minor, so orientation comparisons stay exact."""
    d = len(zi)
    best = None
    for a in range(d):
        for b in range(a + 1, d):
            det = zi[a] * zj[b] - zi[b] * zj[a]
            if not F.is_zero(det) and (best is None or (not F.exact and abs(det) > abs(best[0]))):
                best = (det, a, b)
                if F.exact:
                    break
        if best is not None and F.exact:
            break
    D, p, q = best
    return (zk[p] * zj[q] - zk[q] * zj[p]) * D, (zi[p] * zk[q] - zi[q] * zk[p]) * D


def ordered_codim2_flats(A: Arrangement) -> list[OrderedFlat]:
    """All codimension-2 flats with their normals in cyclic order.

    Every unordered pair of labels lies in exactly one flat.  The order lists
    the normals counterclockwise or clockwise in the plane they span; of the
    two, the one whose first label is smaller than its last is returned (so
    size-2 flats are increasing).  Flats are sorted by their smallest label,
    then by the remaining labels.
    """
    F = A.field
    Z = A.normals
    groups = _exact_flat_members(A) if F.exact else _float_flat_members(A)
    flats = []
    for members in groups:
        members = sorted(members)
        zi, zj = Z[members[0]], Z[members[1]]
        coords = {k: _plane_coordinates(F, zi, zj, Z[k]) for k in members}
        # all members lie in one open half-plane, so the cross sign is a total order
        order = sorted(
            members,
            key=cmp_to_key(lambda s, t: -_cross_sign(F, coords[s], coords[t]) if s != t else 0),
        )
        if order[0] > order[-1]:
            order.reverse()
        flats.append(OrderedFlat(tuple(order), (zi, zj)))
    flats.sort(key=lambda f: (min(f.indices), sorted(f.indices)))
    return flats


# --- flats of every rank, rays, topes --------------------------------------


def _span_reducer(field: FieldSpec, rows):
    R, piv = rref(rows, field)

    def contains(v) -> bool:
        w = list(v)
        for row, p in zip(R, piv):
            f = w[p]
            if not field.is_zero(f):
                w = [x - f * y for x, y in zip(w, row)]
        return all(field.is_zero(x) for x in w)

    return contains


def flats_by_rank(A: Arrangement, max_rank: int, cap: int | None = None) -> list[list[frozenset]]:
    """Flats as closed label sets, ``out[k]`` holding those of rank ``k``.

    Rank 0 is the empty set.  Raises :class:`RegionCapExceeded` once the
    total count passes ``cap`` (each flat contributes at least one region).
    """
    F = A.field
    Z = A.normals
    n = A.n
    out: list[list[frozenset]] = [[frozenset()]]
    total = 1
    if max_rank >= 1:
        out.append([frozenset([i]) for i in range(n)])
        total += n
    for k in range(1, max_rank):
        nxt: dict[frozenset, None] = {}
        for flat in out[k]:
            base = [list(Z[i]) for i in sorted(flat)]
            covered = set(flat)
            for j in range(n):
                if j in covered:
                    continue
                contains = _span_reducer(F, base + [list(Z[j])])
                G = frozenset(l for l in range(n) if l in flat or l == j or contains(Z[l]))
                covered |= G
                if G not in nxt:
                    nxt[G] = None
                    total += 1
                    if cap is not None and total > cap:
                        raise RegionCapExceeded(cap, "flats (hence regions)")
        out.append(sorted(nxt, key=sorted))
    return out


def region_upper_bound(n: int, d: int) -> int:
    """Maximum number of regions of n central hyperplanes in dimension d."""
    return 2 * sum(math.comb(n - 1, k) for k in range(d))


def rays(A: Arrangement, cap: int | None = None) -> list[list[Scalar]]:
    """One direction per one-dimensional flat; the opposite ray is implicit."""
    out = []
    for flat in flats_by_rank(A, A.dim - 1, cap)[A.dim - 1]:
        rows = [list(A.normals[i]) for i in sorted(flat)]
        K = kernel_basis(rows, A.field, A.dim)
        out.append(K[0])
    return out


def sign_matrix(A: Arrangement, vectors) -> np.ndarray:
    F = A.field
    zero = F.zero()
    return np.array(
        [[F.sign(sum((a * b for a, b in zip(z, v)), zero)) for z in A.normals] for v in vectors],
        dtype=np.int8,
    ).reshape(len(vectors), A.n)


def _is_tope(S: np.ndarray, sigma: np.ndarray) -> bool:
    M = S * sigma
    comp = (M >= 0).all(axis=1)
    if not comp.any():
        return False
    return bool((M[comp] > 0).any(axis=0).all())


@lru_cache(maxsize=64)
def tope_graph(A: Arrangement, cap: int = DEFAULT_CAP) -> TopeGraph:
    """Topes and their adjacency by breadth-first search over single flips.

    A sign vector is a tope iff every coordinate is strict on some ray of the
    arrangement lying in its closed cone.
    """
    R = rays(A, cap)
    S = sign_matrix(A, R)
    S = np.concatenate([S, -S])
    n = A.n
    start = tuple([1] * n)
    index = {start: 0}
    order = [start]
    adj: dict[Tope, list[int]] = {start: []}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        arr = np.array(s, dtype=np.int8)
        for j in range(n):
            t = list(s)
            t[j] = -t[j]
            t = tuple(t)
            if t in index:
                adj[s].append(j)
                continue
            arr[j] = -arr[j]
            ok = _is_tope(S, arr)
            arr[j] = -arr[j]
            if ok:
                adj[s].append(j)
                index[t] = len(order)
                order.append(t)
                adj[t] = []
                if len(order) > cap:
                    raise RegionCapExceeded(cap)
                queue.append(t)
    topes_sorted = tuple(sorted(order))
    pos = {t: k for k, t in enumerate(topes_sorted)}
    edges = tuple(
        sorted((pos[t], j) for t in topes_sorted for j in adj[t] if t[j] == 1)
    )
    degree = tuple(len(adj[t]) for t in topes_sorted)
    return TopeGraph(topes_sorted, edges, degree)


def topes(A: Arrangement, cap: int = DEFAULT_CAP) -> list[Tope]:
    return list(tope_graph(A, cap).topes)


def is_simplicial(A: Arrangement, cap: int = DEFAULT_CAP) -> tuple[bool, Tope | None]:
    """``(True, None)`` or ``(False, witness)`` with a tope of degree != dim."""
    g = tope_graph(A, cap)
    for t, deg in zip(g.topes, g.degree):
        if deg != A.dim:
            return False, t
    return True, None


# --- derived arrangements ---------------------------------------------------


def restrict(A: Arrangement, i: int, Q: QForm | None = None) -> DerivedArrangement:
    """Project every other normal Q-orthogonally into ``H_i = z_i^perp``.

    Coordinates on ``H_i`` are those of the free columns of the equation
    ``(Q z_i)^T x = 0``.  Parallel images are merged; the label map records
    the proportionality factors.
    """
    F = A.field
    Q = Q or QForm.identity(A.dim, F)
    zi = A.normals[i]
    w = Q.apply(zi)
    nii = sum((a * b for a, b in zip(zi, w)), F.zero())
    if F.is_zero(nii):
        raise DegenerateForm(f"normal {i + 1} is Q-isotropic")
    W = kernel_basis([w], F, A.dim)
    pivot = next(c for c in range(A.dim) if not F.is_zero(w[c]))
    free = [c for c in range(A.dim) if c != pivot]
    groups: list[tuple[list[Scalar], list[tuple[int, Scalar]]]] = []
    for j, zj in enumerate(A.normals):
        if j == i:
            continue
        c = Q.inner(zj, zi) / nii
        proj = [a - c * b for a, b in zip(zj, zi)]
        y = [proj[col] for col in free]
        for rep, members in groups:
            if _parallel(F, rep, y):
                k = next(t for t in range(len(y)) if not F.is_zero(rep[t]))
                members.append((j, y[k] / rep[k]))
                break
        else:
            groups.append((y, [(j, F.one())]))
    B = new_arrangement(F, [g[0] for g in groups])
    label_map = []
    for (rep, members), flip in zip(groups, B.flipped):
        label_map.append(tuple((j, -f if flip else f) for j, f in members))
    return DerivedArrangement(B, Q.pullback(W), tuple(label_map))


def localize(A: Arrangement, indices: Iterable[int], Q: QForm | None = None) -> DerivedArrangement:
    """The hyperplanes containing ``L = intersection of the chosen ones``,
    written in a basis of ``L^perp`` (the first independent chosen normals)."""
    F = A.field
    chosen = sorted(set(indices))
    if not chosen:
        raise ValueError("localize needs at least one hyperplane")
    Q = Q or QForm.identity(A.dim, F)
    basis = _greedy_basis(F, [A.normals[k] for k in chosen])
    members, coords = [], []
    for k, z in enumerate(A.normals):
        y = _coordinates(F, basis, z)
        if y is not None:
            members.append(k)
            coords.append(y)
    B = new_arrangement(F, coords)
    label_map = tuple(
        ((k, -F.one() if flip else F.one()),) for k, flip in zip(members, B.flipped)
    )
    return DerivedArrangement(B, Q.pullback(basis), label_map)


def product(A1: Arrangement, A2: Arrangement) -> Arrangement:
    if A1.field != A2.field:
        raise ValueError("product needs arrangements over the same field")
    zero = A1.field.zero()
    rows = [tuple(z) + (zero,) * A2.dim for z in A1.normals]
    rows += [(zero,) * A1.dim + tuple(z) for z in A2.normals]
    return new_arrangement(A1.field, rows)
