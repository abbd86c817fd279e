"""Symmetric bilinear forms ``<x, y>_Q = x^T Q y``."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exactalg import FieldSpec, Scalar, determinant


class DegenerateForm(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


@dataclass(frozen=True)
class QForm:
    field: FieldSpec
    matrix: tuple[tuple[Scalar, ...], ...]
    is_identity: bool = dc_field(default=False, compare=False)

    def __post_init__(self):
        d = len(self.matrix)
        if any(len(r) != d for r in self.matrix):
            raise ValueError("form matrix must be square")
        for i in range(d):
            for j in range(i + 1, d):
                if not self.field.is_zero(self.matrix[i][j] - self.matrix[j][i]):
                    raise NotSymmetric(f"Q[{i}][{j}] != Q[{j}][{i}]")
        if self.field.is_zero(determinant(self.matrix, self.field)):
            raise DegenerateForm("bilinear form is singular")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: FieldSpec) -> QForm:
        m = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        d = len(m)
        ident = all(
            field.sign(m[i][j] - (1 if i == j else 0)) == 0 for i in range(d) for j in range(d)
        )
        return cls(field, m, ident)

    @classmethod
    def identity(cls, dim: int, field: FieldSpec) -> QForm:
        zero, one = field.zero(), field.one()
        m = tuple(tuple(one if i == j else zero for j in range(dim)) for i in range(dim))
        return cls(field, m, True)

    @classmethod
    def diagonal(cls, entries: Sequence, field: FieldSpec) -> QForm:
        d = len(entries)
        zero = field.zero()
        rows = [[field.coerce(entries[i]) if i == j else zero for j in range(d)] for i in range(d)]
        return cls.from_rows(rows, field)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def apply(self, y: Sequence[Scalar]) -> list[Scalar]:
        if self.is_identity:
            return list(y)
        zero = self.field.zero()
        return [sum((q * b for q, b in zip(row, y)), zero) for row in self.matrix]

    def inner(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
        Qy = self.apply(y)
        return sum((a * b for a, b in zip(x, Qy)), self.field.zero())

    def gram(self, vectors: Sequence[Sequence[Scalar]]) -> list[list[Scalar]]:
        Qv = [self.apply(v) for v in vectors]
        zero = self.field.zero()
        n = len(vectors)
        G = [[zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                g = sum((a * b for a, b in zip(vectors[i], Qv[j])), zero)
                G[i][j] = G[j][i] = g
        return G

    def pullback(self, basis: Sequence[Sequence[Scalar]]) -> QForm:
        """The form restricted to ``span(basis)`` in basis coordinates."""
        return QForm.from_rows(self.gram(basis), self.field)

    def leading_minors(self) -> list[Scalar]:
        d = self.dim
        return [determinant([r[:k] for r in self.matrix[:k]], self.field) for k in range(1, d + 1)]

    def is_positive_definite(self) -> bool:
        # Sylvester's criterion
        return all(self.field.sign(m) > 0 for m in self.leading_minors())


def parse_qform(text: str, field: FieldSpec) -> QForm:
    """``qform``, ``dim <d>``, then ``d`` rows of ``d`` scalars."""
    from .arrangement import ParseError, parse_scalar_row

    lines = [
        (num, raw.split("#", 1)[0].strip())
        for num, raw in enumerate(text.splitlines(), 1)
        if raw.split("#", 1)[0].strip()
    ]
    if not lines or lines[0][1] != "qform":
        raise ParseError("expected 'qform' header", lines[0][0] if lines else None)
    if len(lines) < 2 or not lines[1][1].startswith("dim"):
        raise ParseError("expected 'dim <d>'", lines[1][0] if len(lines) > 1 else None)
    try:
        d = int(lines[1][1].split()[1])
    except (IndexError, ValueError):
        raise ParseError("bad dim line", lines[1][0]) from None
    body = lines[2:]
    if len(body) != d:
        raise ParseError(f"expected {d} rows, found {len(body)}")
    rows = [parse_scalar_row(field, num, s, d) for num, s in body]
    try:
        return QForm.from_rows(rows, field)
    except (NotSymmetric, DegenerateForm) as e:
        raise ParseError(str(e)) from None


def load_qform(path, field: FieldSpec) -> QForm:
    with open(path) as fh:
        return parse_qform(fh.read(), field)


def format_qform(Q: QForm) -> str:
    out = ["qform", f"dim {Q.dim}"]
    out += [" ".join(Q.field.format(x) for x in row) for row in Q.matrix]
    return "\n".join(out) + "\n"
