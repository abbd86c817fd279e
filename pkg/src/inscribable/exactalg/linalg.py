"""Dense linear algebra over a :class:`FieldSpec`.

Matrices are plain row lists.  Exact fields eliminate without rounding; the
float field uses partial pivoting and treats pivots with ``|p| <= tolerance``
as zero.
"""

from __future__ import annotations

from typing import Sequence

from .fields import FieldSpec, Scalar

Matrix = Sequence[Sequence[Scalar]]
Vector = Sequence[Scalar]


class NotSkewSymmetric(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def shape(M: Matrix, cols: int | None = None) -> tuple[int, int]:
    rows = len(M)
    if rows == 0:
        return 0, (cols or 0)
    width = len(M[0])
    if any(len(r) != width for r in M):
        raise DimensionMismatch("ragged matrix")
    return rows, width


def identity(n: int, field: FieldSpec) -> list[list[Scalar]]:
    zero, one = field.zero(), field.one()
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def transpose(M: Matrix) -> list[list[Scalar]]:
    return [list(col) for col in zip(*M)]


def mat_vec(M: Matrix, v: Vector, field: FieldSpec) -> list[Scalar]:
    zero = field.zero()
    return [sum((a * b for a, b in zip(row, v)), zero) for row in M]


def mat_mul(A: Matrix, B: Matrix, field: FieldSpec) -> list[list[Scalar]]:
    zero = field.zero()
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), zero) for col in Bt] for row in A]


def dot(u: Vector, v: Vector, field: FieldSpec) -> Scalar:
    return sum((a * b for a, b in zip(u, v)), field.zero())


def rref(M: Matrix, field: FieldSpec, cols: int | None = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows, every pivot
    entry is 1 and pivot columns are zero elsewhere.
    """
    nrows, ncols = shape(M, cols)
    A = [[field.coerce(x) for x in row] for row in M]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        if field.exact:
            p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        else:
            p = max(range(r, nrows), key=lambda i: abs(A[i][c]))
            if abs(A[p][c]) <= field.tolerance:
                p = None
        if p is None:
            if not field.exact:
                for i in range(r, nrows):
                    A[i][c] = 0.0
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(nrows):
            if i != r:
                f = A[i][c]
                if field.is_zero(f):
                    continue
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(M: Matrix, field: FieldSpec) -> int:
    return len(rref(M, field)[1])


def kernel_from_rref(R: Matrix, pivots: Sequence[int], ncols: int, field: FieldSpec):
    zero, one = field.zero(), field.one()
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def kernel_basis(M: Matrix, field: FieldSpec, cols: int | None = None) -> list[list[Scalar]]:
    """Basis of the null space of ``M``.

    One vector per free column (increasing), carrying a 1 in that column and
    zeros in the other free columns.  ``cols`` fixes the width of an empty
    matrix.
    """
    _, ncols = shape(M, cols)
    R, pivots = rref(M, field, ncols)
    return kernel_from_rref(R, pivots, ncols, field)


def determinant(M: Matrix, field: FieldSpec) -> Scalar:
    """Determinant by fraction-free (Bareiss) elimination."""
    n, m = shape(M)
    if n != m:
        raise DimensionMismatch("determinant of a non-square matrix")
    if n == 0:
        return field.one()
    A = [[field.coerce(x) for x in row] for row in M]
    sign = 1
    prev = field.one()
    for k in range(n - 1):
        if field.exact:
            p = next((i for i in range(k, n) if A[i][k] != 0), None)
        else:
            p = max(range(k, n), key=lambda i: abs(A[i][k]))
            if abs(A[p][k]) <= field.tolerance:
                p = None
        if p is None:
            return field.zero()
        if p != k:
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev
        prev = A[k][k]
    return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]


def check_skew(S: Matrix, field: FieldSpec) -> None:
    n, m = shape(S)
    if n != m:
        raise NotSkewSymmetric("matrix is not square")
    for i in range(n):
        for j in range(i, n):
            if not field.is_zero(S[i][j] + S[j][i]):
                raise NotSkewSymmetric(f"entries ({i},{j}) and ({j},{i}) are not opposite")


def pfaffian(S: Matrix, field: FieldSpec) -> Scalar:
    """Pfaffian by skew-symmetric elimination (congruence with unit determinant).

    Agrees with the row expansion
    ``pf(S) = sum_j (-1)^j S[0][j] pf(S minus rows/cols 0, j)`` (see
    :func:`pfaffian_expansion`), in O(n^3) instead of O(n!!).
    """
    check_skew(S, field)
    n = len(S)
    if n % 2:
        return field.zero()
    A = [[field.coerce(x) for x in row] for row in S]
    result = field.one()
    for k in range(0, n, 2):
        if field.exact:
            p = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
        else:
            p = max(range(k + 1, n), key=lambda j: abs(A[k][j]))
            if abs(A[k][p]) <= field.tolerance:
                p = None
        if p is None:
            return field.zero()
        if p != k + 1:
            A[k + 1], A[p] = A[p], A[k + 1]
            for row in A:
                row[k + 1], row[p] = row[p], row[k + 1]
            result = -result
        piv = A[k][k + 1]
        result = result * piv
        for i in range(k + 2, n):
            # clear A[k][i] with column/row k+1, then A[k+1][i] with column/row k
            f = A[k][i] / piv
            if f != 0:
                for row in A:
                    row[i] = row[i] - f * row[k + 1]
                A[i] = [x - f * y for x, y in zip(A[i], A[k + 1])]
            g = A[k + 1][i] / A[k + 1][k]
            if g != 0:
                for row in A:
                    row[i] = row[i] - g * row[k]
                A[i] = [x - g * y for x, y in zip(A[i], A[k])]
    return result


def pfaffian_expansion(S: Matrix, field: FieldSpec) -> Scalar:
    """Pfaffian straight from the recursive row expansion (exponential time)."""
    check_skew(S, field)
    n = len(S)

    def rec(idx: tuple[int, ...]) -> Scalar:
        if not idx:
            return field.one()
        if len(idx) % 2:
            return field.zero()
        first, rest = idx[0], idx[1:]
        total = field.zero()
        for pos, j in enumerate(rest):
            a = field.coerce(S[first][j])
            if field.is_zero(a):
                continue
            term = a * rec(rest[:pos] + rest[pos + 1 :])
            total = total + term if pos % 2 == 0 else total - term
        return total

    return rec(tuple(range(n)))


class RowReducer:
    """Incrementally accumulate sparse rows and keep an echelon basis.

    Rows are dicts ``column -> value``.  Each stored basis row is kept reduced
    against every other pivot column, so inserting a row costs one pass over
    its entries.  Exact fields only.
    """

    def __init__(self, ncols: int, field: FieldSpec):
        if not field.exact:
            raise ValueError("RowReducer is exact-only")
        self.ncols = ncols
        self.field = field
        self.rows: dict[int, dict[int, Scalar]] = {}
        self._seen: set = set()

    def add(self, row: dict[int, Scalar]) -> bool:
        row = {c: v for c, v in row.items() if v != 0}
        if not row:
            return False
        lead = min(row)
        scale = row[lead]
        key = tuple(sorted((c, v / scale) for c, v in row.items()))
        if key in self._seen:
            return False
        self._seen.add(key)
        for c in [c for c in row if c in self.rows]:
            f = row.get(c)
            if not f:
                continue
            for cc, vv in self.rows[c].items():
                nv = row.get(cc, 0) - f * vv
                if nv == 0:
                    row.pop(cc, None)
                else:
                    row[cc] = nv
        row = {c: v for c, v in row.items() if v != 0}
        if not row:
            return False
        piv = min(row)
        pv = row[piv]
        row = {c: v / pv for c, v in row.items()}
        for r in self.rows.values():
            f = r.get(piv)
            if f:
                for cc, vv in row.items():
                    nv = r.get(cc, 0) - f * vv
                    if nv == 0:
                        r.pop(cc, None)
                    else:
                        r[cc] = nv
        self.rows[piv] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def dense_rows(self) -> list[list[Scalar]]:
        zero = self.field.zero()
        out = []
        for piv in sorted(self.rows):
            r = [zero] * self.ncols
            for c, v in self.rows[piv].items():
                r[c] = self.field.coerce(v)
            out.append(r)
        return out

    def kernel_basis(self) -> list[list[Scalar]]:
        return kernel_basis(self.dense_rows(), self.field, self.ncols)
