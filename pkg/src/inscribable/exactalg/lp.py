"""Strict feasibility of ``B mu > 0`` via a small primal simplex (Bland's rule)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .fields import FieldSpec, Scalar


@dataclass(frozen=True)
class StrictLPResult:
    mu: list[Scalar] | None
    # optimum of max eps s.t. eps <= B mu <= 1, eps <= 1: the best normalized margin
    epsilon: Scalar


def _simplex(rows, rhs, cost, field: FieldSpec) -> tuple[Scalar, list[Scalar]]:
    """``max cost.x`` over ``rows x <= rhs, x >= 0`` with ``rhs >= 0``, so the
    all-slack basis is feasible.  Returns the optimum and ``x``."""
    m = len(rows)
    nx = len(cost)
    nv = nx + m
    zero, one = field.zero(), field.one()
    A = []
    for i, r in enumerate(rows):
        row = [field.coerce(x) for x in r] + [zero] * m
        row[nx + i] = one
        A.append(row)
    b = [field.coerce(x) for x in rhs]
    basis = [nx + i for i in range(m)]
    red = [field.coerce(x) for x in cost] + [zero] * m
    value = zero

    while True:
        enter = next((j for j in range(nv) if field.sign(red[j]) > 0), None)
        if enter is None:
            break
        leave = best = None
        for i in range(m):
            a = A[i][enter]
            if field.sign(a) <= 0:
                continue
            ratio = b[i] / a
            if (
                best is None
                or field.sign(ratio - best) < 0
                or (field.sign(ratio - best) == 0 and basis[i] < basis[leave])
            ):
                best, leave = ratio, i
        if leave is None:
            raise RuntimeError("unbounded linear program")
        piv = A[leave][enter]
        A[leave] = [x / piv for x in A[leave]]
        b[leave] = b[leave] / piv
        for i in range(m):
            if i != leave:
                f = A[i][enter]
                if not field.is_zero(f):
                    A[i] = [x - f * y for x, y in zip(A[i], A[leave])]
                    b[i] = b[i] - f * b[leave]
        f = red[enter]
        red = [x - f * y for x, y in zip(red, A[leave])]
        value = value + f * b[leave]
        basis[leave] = enter

    x = [zero] * nv
    for i, j in enumerate(basis):
        x[j] = b[i]
    return value, x[:nx]


def _split(B, field):
    """Rows of ``B`` acting on ``(mu+, mu-)`` and their negatives."""
    k = len(B[0])
    pos = [[field.coerce(B[i][j]) for j in range(k)] for i in range(len(B))]
    return [r + [-x for x in r] for r in pos], k


def _solve(B: Sequence[Sequence[Scalar]], field: FieldSpec) -> StrictLPResult:
    zero, one = field.zero(), field.one()
    split, k = _split(B, field)
    # variables (mu+, mu-, eps); rows eps - B mu <= 0, B mu <= 1, eps <= 1
    rows = [[-x for x in r] + [one] for r in split]
    rows += [r + [zero] for r in split]
    rows.append([zero] * (2 * k) + [one])
    rhs = [zero] * len(B) + [one] * len(B) + [one]
    value, x = _simplex(rows, rhs, [zero] * (2 * k) + [one], field)
    mu = [x[j] - x[k + j] for j in range(k)]
    if field.sign(value) > 0:
        return StrictLPResult(mu, value)
    return StrictLPResult(None, value)


def strict_interior_point_lp(B: Sequence[Sequence[Scalar]], field: FieldSpec, cols: int | None = None) -> StrictLPResult:
    k = len(B[0]) if B else (cols or 0)
    if not B:
        return StrictLPResult([field.zero()] * k, field.one())
    return _solve(B, field)


def strict_interior_point(
    B: Sequence[Sequence[Scalar]], field: FieldSpec, cols: int | None = None
) -> list[Scalar] | None:
    """Some ``mu`` with every coordinate of ``B mu`` strictly positive, or ``None``.

    Solves ``max eps`` subject to ``eps <= B mu <= 1`` coordinatewise, which
    is positive exactly when a strictly positive ``B mu`` exists.  With an
    empty ``B`` every ``mu`` qualifies and the zero vector is returned.
    """
    return strict_interior_point_lp(B, field, cols).mu


def relaxed_cone_mass(B: Sequence[Sequence[Scalar]], slack: Scalar, field: FieldSpec) -> Scalar:
    """``max sum(B mu)`` subject to ``-slack <= B mu <= 1``.

    At least 1 when the closed cone ``B mu >= 0`` has a nonzero point; of
    order ``n * slack / delta`` when every nonzero ``B mu`` has a coordinate
    below ``-delta`` after scaling to max-norm 1.
    """
    if not B:
        return field.zero()
    split, k = _split(B, field)
    rows = [[-x for x in r] for r in split] + split
    rhs = [field.coerce(slack)] * len(B) + [field.one()] * len(B)
    cost = [sum((r[j] for r in split), field.zero()) for j in range(2 * k)]
    value, _ = _simplex(rows, rhs, cost, field)
    return value
