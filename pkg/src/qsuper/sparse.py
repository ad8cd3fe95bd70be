"""Sparse matrices over exact scalars (FieldScalar or Fraction), row-dict storage."""
from __future__ import annotations

from typing import Callable, Iterable

from .scalars import ONE, ZERO


class SMat:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: dict | None = None):
        self.rows, self.cols = rows, cols
        self.data: dict[int, dict[int, object]] = {}
        if data:
            for (i, j), v in data.items():
                self.set(i, j, v)

    @classmethod
    def identity(cls, n: int, one=ONE) -> "SMat":
        m = cls(n, n)
        for i in range(n):
            m.data[i] = {i: one}
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SMat":
        return cls(rows, cols)

    @classmethod
    def from_dense(cls, a: list) -> "SMat":
        rows = len(a)
        cols = len(a[0]) if rows else 0
        m = cls(rows, cols)
        for i, r in enumerate(a):
            for j, v in enumerate(r):
                if v != 0:
                    m.data.setdefault(i, {})[j] = v
        return m

    @classmethod
    def diagonal(cls, values: Iterable) -> "SMat":
        values = list(values)
        m = cls(len(values), len(values))
        for i, v in enumerate(values):
            if v != 0:
                m.data[i] = {i: v}
        return m

    def get(self, i: int, j: int, zero=ZERO):
        return self.data.get(i, {}).get(j, zero)

    def set(self, i: int, j: int, v):
        if v == 0:
            row = self.data.get(i)
            if row is not None:
                row.pop(j, None)
                if not row:
                    del self.data[i]
        else:
            self.data.setdefault(i, {})[j] = v

    def add_to(self, i: int, j: int, v):
        if v == 0:
            return
        row = self.data.setdefault(i, {})
        cur = row.get(j)
        new = v if cur is None else cur + v
        if new == 0:
            row.pop(j, None)
            if not row:
                del self.data[i]
        else:
            row[j] = new

    def items(self):
        for i, row in self.data.items():
            for j, v in row.items():
                yield (i, j), v

    def nnz(self) -> int:
        return sum(len(r) for r in self.data.values())

    def is_zero(self) -> bool:
        return not self.data

    def __matmul__(self, other: "SMat") -> "SMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = SMat(self.rows, other.cols)
        for i, row in self.data.items():
            acc: dict = {}
            for k, a in row.items():
                orow = other.data.get(k)
                if not orow:
                    continue
                for j, b in orow.items():
                    cur = acc.get(j)
                    acc[j] = a * b if cur is None else cur + a * b
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                out.data[i] = acc
        return out

    def __add__(self, other: "SMat") -> "SMat":
        out = self.copy()
        for (i, j), v in other.items():
            out.add_to(i, j, v)
        return out

    def __neg__(self):
        return self.map(lambda v: -v)

    def __sub__(self, other: "SMat") -> "SMat":
        return self + (-other)

    def scale(self, c) -> "SMat":
        return self.map(lambda v: c * v)

    def map(self, fn: Callable) -> "SMat":
        out = SMat(self.rows, self.cols)
        for (i, j), v in self.items():
            w = fn(v)
            if w != 0:
                out.data.setdefault(i, {})[j] = w
        return out

    def copy(self) -> "SMat":
        out = SMat(self.rows, self.cols)
        out.data = {i: dict(r) for i, r in self.data.items()}
        return out

    def transpose(self) -> "SMat":
        out = SMat(self.cols, self.rows)
        for (i, j), v in self.items():
            out.data.setdefault(j, {})[i] = v
        return out

    def kron(self, other: "SMat") -> "SMat":
        out = SMat(self.rows * other.rows, self.cols * other.cols)
        for (i, j), a in self.items():
            for (k, l), b in other.items():
                out.data.setdefault(i * other.rows + k, {})[j * other.cols + l] = a * b
        return out

    def dense(self, zero=ZERO) -> list:
        return [[self.get(i, j, zero) for j in range(self.cols)] for i in range(self.rows)]

    def submatrix(self, rows: list, cols: list) -> "SMat":
        cidx = {c: k for k, c in enumerate(cols)}
        out = SMat(len(rows), len(cols))
        for a, r in enumerate(rows):
            for c, v in self.data.get(r, {}).items():
                k = cidx.get(c)
                if k is not None:
                    out.data.setdefault(a, {})[k] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, SMat):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and (self - other).is_zero()

    def __repr__(self):
        return f"SMat({self.rows}x{self.cols}, nnz={self.nnz()})"
