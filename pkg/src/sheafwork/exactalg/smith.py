"""Smith normal form and the integer lattice routines built on it.

Lattices are given by generator matrices whose columns span a subgroup of
Z^n. All routines are exact; the heavy lifting works on lists of Python
ints and converts back to ``IntMatrix`` at the boundary.
"""

from __future__ import annotations

import logging
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

from sheafwork.exactalg.matrix import IntMatrix

logger = logging.getLogger(__name__)


class SmithForm(NamedTuple):
    """U·M·V = S with U, V unimodular and S diagonal, s_1 | s_2 | …"""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _identity_rows(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _min_pivot(a: list[list[int]], t: int) -> Optional[tuple[int, int]]:
    best = None
    best_abs = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            v = row[j]
            if v and (best is None or abs(v) < best_abs):
                best, best_abs = (i, j), abs(v)
    return best


def _swap_rows(a: list[list[int]], i: int, k: int) -> None:
    if i != k:
        a[i], a[k] = a[k], a[i]


def _swap_cols(a: list[list[int]], j: int, k: int) -> None:
    if j != k:
        for row in a:
            row[j], row[k] = row[k], row[j]


def _add_row(a: list[list[int]], target: int, source: int, q: int) -> None:
    """row[target] += q * row[source]"""
    a[target] = [x + q * y for x, y in zip(a[target], a[source])]


def _add_col(a: list[list[int]], target: int, source: int, q: int) -> None:
    """col[target] += q * col[source]"""
    for row in a:
        row[target] += q * row[source]


def _smith_lists(a: list[list[int]], m: int, n: int):
    u = _identity_rows(m)
    v = _identity_rows(n)
    t = 0
    while t < min(m, n):
        pivot = _min_pivot(a, t)
        if pivot is None:
            break
        while True:
            i, j = pivot
            _swap_rows(a, t, i)
            _swap_rows(u, t, i)
            _swap_cols(a, t, j)
            _swap_cols(v, t, j)
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    _add_row(a, i, t, -q)
                    _add_row(u, i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    _add_col(a, j, t, -q)
                    _add_col(v, j, t, -q)
                if a[t][j]:
                    clean = False
            if clean:
                offender = next(
                    (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % p),
                    None,
                )
                if offender is None:
                    break
                # pull the non-divisible row into row t; the next pass leaves a smaller remainder
                _add_row(a, t, offender, 1)
                _add_row(u, t, offender, 1)
            pivot = _min_pivot(a, t)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


@lru_cache(maxsize=8192)
def smith_normal_form(matrix: IntMatrix) -> SmithForm:
    """Smith normal form with unimodular transforms.

    Pivots are the minimal-absolute-value nonzero entry of the remaining
    block, ties going to the lowest (row, col). Deterministic for a fixed input.
    """
    m, n = matrix.shape
    u, s, v = _smith_lists(matrix.to_rows(), m, n)
    return SmithForm(
        U=IntMatrix.from_rows(u, cols=m),
        S=IntMatrix.from_rows(s, cols=n),
        V=IntMatrix.from_rows(v, cols=n),
    )


def invariant_factors(matrix: IntMatrix, width: int) -> tuple[int, ...]:
    """Diagonal of the Smith form padded with zeros to ``width`` entries."""
    diagonal = smith_normal_form(matrix).diagonal
    return tuple(diagonal[:width]) + (0,) * max(0, width - len(diagonal))


def unimodular_inverse(matrix: IntMatrix) -> IntMatrix:
    """Inverse of a unimodular matrix: from U·M·V = I follows M⁻¹ = V·U."""
    if matrix.rows != matrix.cols:
        raise ValueError(f"Only square matrices are invertible, got {matrix.shape}")
    form = smith_normal_form(matrix)
    if form.S != IntMatrix.identity(matrix.rows):
        raise ValueError("Matrix is not unimodular")
    return form.V @ form.U


def kernel_basis(matrix: IntMatrix) -> IntMatrix:
    """Columns form a basis of {x ∈ Z^cols : M x = 0}."""
    form = smith_normal_form(matrix)
    return form.V.select_cols(range(form.rank, matrix.cols))


def solve(matrix: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """An integer solution of M x = b, or None when none exists."""
    if len(b) != matrix.rows:
        raise ValueError(f"Right-hand side of length {len(b)} does not fit {matrix.shape}")
    form = smith_normal_form(matrix)
    c = form.U.apply(b)
    rank = form.rank
    y = [0] * matrix.cols
    for i in range(rank):
        s = form.S[i, i]
        if c[i] % s:
            return None
        y[i] = c[i] // s
    if any(c[i] for i in range(rank, matrix.rows)):
        return None
    return form.V.apply(y)


def lattice_basis(generators: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice spanned by the columns.

    Integer row echelon form of the transposed generators; zero rows are
    dropped and leading entries made positive.
    """
    n = generators.rows
    rows = [list(col) for col in generators.iter_columns()]
    basis: list[list[int]] = []
    lead = 0
    while rows and lead < n:
        live = [r for r in rows if r[lead]]
        rest = [r for r in rows if not r[lead]]
        if not live:
            lead += 1
            continue
        while len(live) > 1:
            live.sort(key=lambda r: (abs(r[lead]), r))
            head = live[0]
            reduced = [head]
            for r in live[1:]:
                q = r[lead] // head[lead]
                r = [x - q * y for x, y in zip(r, head)]
                if r[lead]:
                    reduced.append(r)
                elif any(r):
                    rest.append(r)
            live = reduced
        head = live[0]
        if head[lead] < 0:
            head = [-x for x in head]
        basis.append(head)
        rows = [r for r in rest if any(r)]
        lead += 1
    return IntMatrix.from_columns(basis, rows=n)


def contains(lattice: IntMatrix, vector: Sequence[int]) -> bool:
    return solve(lattice, vector) is not None


def contains_all(lattice: IntMatrix, vectors: IntMatrix) -> bool:
    return all(contains(lattice, col) for col in vectors.iter_columns())


def lattice_sum(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return lattice_basis(IntMatrix.hstack([a, b], rows=a.rows))


def intersect(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Basis of the intersection of the lattices spanned by the columns of a and b."""
    kernel = kernel_basis(IntMatrix.hstack([a, -b], rows=a.rows))
    return lattice_basis(a @ kernel.select_rows(range(a.cols)))


def preimage_lattice(matrix: IntMatrix, lattice: IntMatrix) -> IntMatrix:
    """Basis of {x : M x ∈ L} where L is spanned by the columns of ``lattice``."""
    kernel = kernel_basis(IntMatrix.hstack([matrix, -lattice], rows=matrix.rows))
    return lattice_basis(kernel.select_rows(range(matrix.cols)))
