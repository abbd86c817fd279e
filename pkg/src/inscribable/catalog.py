"""Named arrangements: reflection arrangements, the D_{n,s} family, the
published rank-3 arrangement with ten planes, and the two infinite families of
rank-3 simplicial arrangements."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .arrangement import Arrangement, localize, new_arrangement
from .exactalg import FieldSpec, QuadraticNumber
from .qform import QForm


class UnknownName(KeyError):
    pass


def _unit(d: int, i: int, scale=1) -> list:
    v = [0] * d
    v[i] = scale
    return v


# --- reflection families -----------------------------------------------------


def gen_A(n: int) -> Arrangement:
    """``e_i - e_j`` for ``i < j <= n`` and ``e_i`` (standing in for
    ``e_i - e_{n+1}``), in lexicographic order of ``(i, j)``."""
    if n < 2:
        raise ValueError("A_n needs n >= 2")
    rows = []
    for i in range(n):
        for j in range(i + 1, n + 1):
            v = _unit(n, i)
            if j < n:
                v[j] = -1
            rows.append(v)
    return new_arrangement(FieldSpec.rational(), rows)


def a_form(a) -> QForm:
    """``diag(a_1..a_n) + a_{n+1} J`` on the coordinates of :func:`gen_A`.

    With all ``a_i = 1`` this is the metric of the root system pulled back to
    those coordinates.
    """
    n = len(a) - 1
    F = FieldSpec.rational()
    rows = [[Fraction(a[n]) + (Fraction(a[i]) if i == j else 0) for j in range(n)] for i in range(n)]
    return QForm.from_rows(rows, F)


def gen_D(n: int, s: int) -> Arrangement:
    """All ``e_i - e_j``, then all ``e_i + e_j`` (``i < j``), then ``e_1..e_s``."""
    if n < 2 or not 0 <= s <= n:
        raise ValueError("D_{n,s} needs n >= 2 and 0 <= s <= n")
    rows = []
    for sign in (-1, 1):
        for i, j in itertools.combinations(range(n), 2):
            v = _unit(n, i)
            v[j] = sign
            rows.append(v)
    rows += [_unit(n, k) for k in range(s)]
    return new_arrangement(FieldSpec.rational(), rows)


def gen_I2(k: int) -> Arrangement:
    """``k`` lines with normals at angles ``j pi / k``."""
    if k < 2:
        raise ValueError("I2(k) needs k >= 2")
    if k == 2:
        return new_arrangement(FieldSpec.rational(), [[1, 0], [0, 1]])
    if k == 4:
        return new_arrangement(FieldSpec.rational(), [[1, 0], [1, 1], [0, 1], [-1, 1]])
    if k in (3, 6):
        F = FieldSpec.quadratic(3)
        h = Fraction(1, 2)
        c = QuadraticNumber(0, h, 3)  # sqrt(3)/2
        if k == 3:
            rows = [[1, 0], [h, c], [-h, c]]
        else:
            rows = [[1, 0], [c, h], [h, c], [0, 1], [-h, c], [-c, h]]
        return new_arrangement(F, rows)
    rows = [[math.cos(j * math.pi / k), math.sin(j * math.pi / k)] for j in range(k)]
    return new_arrangement(FieldSpec.float(), rows)


# --- sporadic ----------------------------------------------------------------


def _golden() -> QuadraticNumber:
    return QuadraticNumber(Fraction(1, 2), Fraction(1, 2), 5)


def _h3_roots() -> list[list]:
    tau = _golden()
    inv = tau - 1
    h = Fraction(1, 2)
    rows = [_unit(3, i) for i in range(3)]
    base = [h, h * tau, h * inv]
    for shift in range(3):  # cyclic shifts are the even permutations of three entries
        for s1, s2 in itertools.product((1, -1), repeat=2):
            v = [base[0], s1 * base[1], s2 * base[2]]
            rows.append(v[-shift:] + v[:-shift] if shift else v)
    return rows


def _f4_roots() -> list[list]:
    rows = [_unit(4, i) for i in range(4)]
    for sign in (-1, 1):
        for i, j in itertools.combinations(range(4), 2):
            v = _unit(4, i)
            v[j] = sign
            rows.append(v)
    h = Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=3):
        rows.append([h] + [h * s for s in signs])
    return rows


def _e8_roots() -> list[list]:
    rows = []
    for sign in (-1, 1):
        for i, j in itertools.combinations(range(8), 2):
            v = _unit(8, i)
            v[j] = sign
            rows.append(v)
    h = Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=7):
        if signs.count(-1) % 2 == 0:  # the eighth entry is +1/2
            rows.append([h] + [h * s for s in signs])
    return rows


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _e_sub(orthogonal_to: list[list]):
    E8 = gen_sporadic("E8")
    keep = [i for i, z in enumerate(E8.normals) if all(_dot(z, w) == 0 for w in orthogonal_to)]
    return localize(E8, keep)


_E7_PERP = [[Fraction(1, 2)] * 8]
_E6_PERP = [[Fraction(1, 2)] * 8, [1, 1, 0, 0, 0, 0, 0, 0]]


def a3_10_1_normals() -> list[list]:
    tau = _golden()
    cols = [
        (2 * tau + 1, 2 * tau, tau),
        (2 * tau + 2, 2 * tau + 1, tau + 1),
        (1, 1, 1),
        (tau + 1, tau + 1, tau),
        (2 * tau, 2 * tau, tau),
        (tau + 1, tau + 1, 1),
        (1, 1, 0),
        (0, 1, 0),
        (1, 0, 0),
        (tau + 1, tau, tau),
    ]
    return [list(c) for c in cols]


def a3_10_1_qform(t=10) -> QForm:
    """The one-parameter family of forms making every 2-face condition of the
    ten-plane arrangement solvable; ``t`` is the (3,3) entry."""
    tau = _golden()
    s = Fraction(t) / 10
    rows = [
        [(-2 * tau + 1) * s, (tau + 2) * s, (-tau - 2) * s],
        [(tau + 2) * s, (-2 * tau + 1) * s, (tau - 3) * s],
        [(-tau - 2) * s, (tau - 3) * s, 10 * s],
    ]
    return QForm.from_rows(rows, FieldSpec.quadratic(5))


SPORADIC = ("H3", "F4", "E6", "E7", "E8", "A3_10_1")


def gen_sporadic(name: str) -> Arrangement:
    if name == "H3":
        return new_arrangement(FieldSpec.quadratic(5), _h3_roots())
    if name == "F4":
        return new_arrangement(FieldSpec.rational(), _f4_roots())
    if name == "E8":
        return new_arrangement(FieldSpec.rational(), _e8_roots())
    if name == "E7":
        return _e_sub(_E7_PERP).arrangement
    if name == "E6":
        return _e_sub(_E6_PERP).arrangement
    if name == "A3_10_1":
        return new_arrangement(FieldSpec.quadratic(5), a3_10_1_normals())
    raise UnknownName(name)


# --- infinite families ---------------------------------------------------------


def gen_infinite_family(kind: str, k: int, height: float = 1.0, tolerance: float = 1e-9) -> Arrangement:
    """Float realizations of the two infinite families of simplicial
    arrangements of rank 3.

    ``kind="even"``: the ``k`` mirrors of a regular ``k``-gon,
    ``(cos(pi j/k), sin(pi j/k), 0)``, followed by its ``k`` edge lines
    ``(-sin(2 pi j/k), cos(2 pi j/k), height)``; ``2k`` planes, ``k >= 3``.
    ``kind="odd"``: the even family for ``2k`` plus the line at infinity
    ``(0, 0, 1)``; ``4k + 1`` planes, ``k >= 2``.
    """
    if kind == "odd":
        if k < 2:
            raise ValueError("the odd family needs k >= 2")
        rows = _polygon_rows(2 * k, height) + [[0.0, 0.0, 1.0]]
    elif kind == "even":
        if k < 3:
            raise ValueError("the even family needs k >= 3")
        rows = _polygon_rows(k, height)
    else:
        raise ValueError(f"unknown family {kind!r}; use 'even' or 'odd'")
    return new_arrangement(FieldSpec.float(tolerance), rows)


def _polygon_rows(k: int, height: float) -> list[list[float]]:
    mirrors = [[math.cos(math.pi * j / k), math.sin(math.pi * j / k), 0.0] for j in range(k)]
    edges = [
        [-math.sin(2 * math.pi * j / k), math.cos(2 * math.pi * j / k), float(height)]
        for j in range(k)
    ]
    return mirrors + edges


# --- entries -----------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    params: dict
    arrangement: Arrangement
    qform: QForm  # the form under which expected values are stated
    n: int
    rank: int
    zinspc_dim: int | None = None  # expected, where known
    notes: str = ""
    extra: dict = dc_field(default_factory=dict)


def _entry(name, params, A, Q=None, n=None, rank=None, dim=None, notes=""):
    Q = Q or QForm.identity(A.dim, A.field)
    e = CatalogEntry(name, params, A, Q, n, rank, dim, notes)
    if A.n != n or A.dim != rank:
        raise AssertionError(f"{name}{params}: built n={A.n}, rank={A.dim}; declared n={n}, rank={rank}")
    return e


def catalog_entry(name: str, **params) -> CatalogEntry:
    """Build a named entry with its metadata.

    Names: ``A`` (n), ``B`` (n), ``D`` (n, s; s defaults to 0), ``I2`` (k),
    ``H3``, ``F4``, ``E6``, ``E7``, ``E8``, ``A3_10_1`` (optional t for the
    published form), ``R`` (k, height) and ``Rodd`` (k, height).
    """
    p = {k: v for k, v in params.items()}
    if name == "A":
        n = int(p["n"])
        return _entry(
            name, p, gen_A(n), a_form([1] * (n + 1)), math.comb(n + 1, 2), n, 1,
            "form: diag(1..1) + J, the root metric in these coordinates",
        )
    if name in ("B", "D"):
        n = int(p["n"])
        s = n if name == "B" else int(p.get("s", 0))
        dim = 2 if s == n else (1 if s == 0 and n >= 4 else None)
        return _entry(name, p, gen_D(n, s), None, n * (n - 1) + s, n, dim)
    if name == "I2":
        k = int(p["k"])
        return _entry(
            name, p, gen_I2(k), None, k, 2, None,
            "the published table entry 'k mod 2' disagrees with direct computation for even k",
        )
    if name in ("H3", "F4", "E8"):
        A = gen_sporadic(name)
        meta = {"H3": (15, 3, 1), "F4": (24, 4, 2), "E8": (120, 8, 1)}[name]
        return _entry(name, p, A, None, *meta)
    if name in ("E6", "E7"):
        D = _e_sub(_E6_PERP if name == "E6" else _E7_PERP)
        meta = {"E6": (36, 6, 1), "E7": (63, 7, 1)}[name]
        return _entry(name, p, D.arrangement, D.qform, *meta, "form: Gram matrix of the basis of the E8 sublattice")
    if name == "A3_10_1":
        A = gen_sporadic(name)
        e = _entry(name, p, A, None, 10, 3, None)
        e.extra["published_qform"] = a3_10_1_qform(p.get("t", 10))
        return e
    if name in ("R", "Rodd"):
        k = int(p["k"])
        h = float(p.get("height", 1.0))
        kind = "even" if name == "R" else "odd"
        n = 2 * k if kind == "even" else 4 * k + 1
        return _entry(name, p, gen_infinite_family(kind, k, h), None, n, 3, None)
    raise UnknownName(name)


NAMES = ("A", "B", "D", "I2", "H3", "F4", "E6", "E7", "E8", "A3_10_1", "R", "Rodd")
