"""Immutable integer matrices with arbitrary-precision entries.

Entries are stored in a numpy ``dtype=object`` array so every entry stays a
Python ``int``; products go through numpy's object dot, which uses Python
arithmetic and therefore never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np


def _empty(rows: int, cols: int) -> np.ndarray:
    data = np.empty((rows, cols), dtype=object)
    data.fill(0)
    return data


@dataclass(frozen=True, eq=False)
class IntMatrix:
    """A rows × cols integer matrix. Hashable and compared by value."""

    data: np.ndarray
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ValueError(f"IntMatrix needs a 2-d array, got shape {self.data.shape}")
        self.data.flags.writeable = False
        object.__setattr__(self, "_key", (self.data.shape, tuple(self.data.flat)))

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        """Build from nested rows; ``cols`` is needed when there are no rows."""
        n_rows = len(rows)
        if cols is None:
            if n_rows == 0:
                raise ValueError("Column count is required for a matrix without rows")
            cols = len(rows[0])
        data = _empty(n_rows, cols)
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise ValueError(f"Row {i} has {len(row)} entries, expected {cols}")
            for j, value in enumerate(row):
                data[i, j] = int(value)
        return cls(data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(_empty(rows, cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        data = _empty(n, n)
        for i in range(n):
            data[i, i] = 1
        return cls(data)

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = _empty(rows, cols)
        for i, value in enumerate(values):
            data[i, i] = int(value)
        return cls(data)

    @classmethod
    def column(cls, values: Sequence[int]) -> "IntMatrix":
        return cls.from_rows([[v] for v in values], cols=1)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        data = _empty(rows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != rows:
                raise ValueError(f"Column {j} has {len(col)} entries, expected {rows}")
            for i, value in enumerate(col):
                data[i, j] = int(value)
        return cls(data)

    @classmethod
    def hstack(cls, blocks: Sequence["IntMatrix"], rows: int) -> "IntMatrix":
        for block in blocks:
            if block.rows != rows:
                raise ValueError(f"hstack block has {block.rows} rows, expected {rows}")
        cols = sum(b.cols for b in blocks)
        data = _empty(rows, cols)
        offset = 0
        for block in blocks:
            data[:, offset : offset + block.cols] = block.data
            offset += block.cols
        return cls(data)

    @classmethod
    def vstack(cls, blocks: Sequence["IntMatrix"], cols: int) -> "IntMatrix":
        for block in blocks:
            if block.cols != cols:
                raise ValueError(f"vstack block has {block.cols} columns, expected {cols}")
        rows = sum(b.rows for b in blocks)
        data = _empty(rows, cols)
        offset = 0
        for block in blocks:
            data[offset : offset + block.rows, :] = block.data
            offset += block.rows
        return cls(data)

    @classmethod
    def block_diagonal(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        data = _empty(rows, cols)
        r = c = 0
        for block in blocks:
            data[r : r + block.rows, c : c + block.cols] = block.data
            r += block.rows
            c += block.cols
        return cls(data)

    # shape and access

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[int, ...]:
        """Entries in row-major order."""
        return self._key[1]

    def __getitem__(self, index: tuple[int, int]) -> int:
        return self.data[index]

    def to_rows(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def column_values(self, j: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.data[:, j])

    def iter_columns(self) -> Iterator[tuple[int, ...]]:
        for j in range(self.cols):
            yield self.column_values(j)

    def select_rows(self, indices: Iterable[int]) -> "IntMatrix":
        indices = list(indices)
        data = _empty(len(indices), self.cols)
        for k, i in enumerate(indices):
            data[k, :] = self.data[i, :]
        return IntMatrix(data)

    def select_cols(self, indices: Iterable[int]) -> "IntMatrix":
        indices = list(indices)
        data = _empty(self.rows, len(indices))
        for k, j in enumerate(indices):
            data[:, k] = self.data[:, j]
        return IntMatrix(data)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self == IntMatrix.identity(self.rows) if self.rows == self.cols else False

    # arithmetic

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.data.T.copy())

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0 or self.rows == 0 or other.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix(np.dot(self.data, other.data))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.data + other.data)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Cannot subtract {other.shape} from {self.shape}")
        return IntMatrix(self.data - other.data)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(-self.data)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.data * int(k))

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        """Multiply a column vector."""
        if len(vector) != self.cols:
            raise ValueError(f"Vector of length {len(vector)} does not fit {self.shape}")
        rows = self.to_rows()
        return tuple(sum(a * b for a, b in zip(row, vector)) for row in rows)

    # value semantics

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r}, shape={self.shape})"
