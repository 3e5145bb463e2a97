"""Shared fixtures: corpus objects and seeded random generators."""

import numpy as np
import pytest

from sheafwork.exactalg import FpGroup, GroupHom, IntMatrix
from sheafwork.exactalg.smith import kernel_basis
from sheafwork.spectral import DoubleComplex
from sheafwork.workspace import corpus


@pytest.fixture
def pseudocircle():
    return corpus.space("pseudocircle")


@pytest.fixture
def sierpinski():
    return corpus.space("sierpinski")


@pytest.fixture
def sphere6():
    return corpus.space("sphere6")


def _matrix(array) -> IntMatrix:
    rows, cols = array.shape
    return IntMatrix.from_rows([[int(x) for x in row] for row in array], cols=cols)


def _random_complex(rng, ranks):
    """Free complex Z^r0 → Z^r1 → Z^r2 with random differentials."""
    d1 = rng.integers(-2, 3, size=(ranks[2], ranks[1]))
    kernel = kernel_basis(_matrix(d1))
    coefficients = rng.integers(-2, 3, size=(kernel.cols, ranks[0]))
    if kernel.cols:
        d0 = np.array(kernel.to_rows(), dtype=np.int64) @ coefficients
    else:
        d0 = np.zeros((ranks[1], ranks[0]), dtype=np.int64)
    return [d0, d1]


def random_double_complex(seed: int) -> DoubleComplex:
    """Tensor product of two random free complexes of length three.

    δ = d_A ⊗ 1 and d = 1 ⊗ d_B commute, so the result is a valid
    first-quadrant double complex on a 3 × 3 grid.
    """
    rng = np.random.default_rng(seed)
    a = [int(x) for x in rng.integers(1, 3, size=3)]
    b = [int(x) for x in rng.integers(1, 3, size=3)]
    dA = _random_complex(rng, a)
    dB = _random_complex(rng, b)
    cells = {(p, q): FpGroup.free(a[p] * b[q]) for p in range(3) for q in range(3)}
    horizontal, vertical = {}, {}
    for p in range(2):
        for q in range(3):
            matrix = np.kron(dA[p], np.eye(b[q], dtype=np.int64))
            horizontal[(p, q)] = GroupHom(cells[(p, q)], cells[(p + 1, q)], _matrix(matrix))
    for p in range(3):
        for q in range(2):
            matrix = np.kron(np.eye(a[p], dtype=np.int64), dB[q])
            vertical[(p, q)] = GroupHom(cells[(p, q)], cells[(p, q + 1)], _matrix(matrix))
    return DoubleComplex(
        pmax=2, qmax=2, cells=cells, vertical=vertical, horizontal=horizontal, name=f"random{seed}"
    )


@pytest.fixture
def make_double():
    return random_double_complex


@pytest.fixture
def random_matrix():
    def build(seed: int, rows: int, cols: int, low: int = -6, high: int = 7) -> IntMatrix:
        rng = np.random.default_rng(seed)
        return _matrix(rng.integers(low, high, size=(rows, cols)))

    return build


@pytest.fixture
def isolated_config(tmp_path, monkeypatch):
    """No user config file and no cap from the environment."""
    monkeypatch.setenv("SHEAFWORK_CONFIG_DIR", str(tmp_path / "config"))
    monkeypatch.delenv("SHEAFWORK_MAX_OPENS", raising=False)
    return tmp_path / "config"


@pytest.fixture
def random_unimodular():
    """Product of random elementary row operations: determinant ±1."""

    def build(seed: int, n: int, steps: int = 12) -> IntMatrix:
        rng = np.random.default_rng(seed)
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for _ in range(steps if n > 1 else 1):
            kind = int(rng.integers(0, 3))
            i, j = (int(x) for x in rng.choice(n, size=2, replace=n < 2))
            if kind == 0 and i != j:
                factor = int(rng.integers(-3, 4))
                rows[i] = [a + factor * b for a, b in zip(rows[i], rows[j])]
            elif kind == 1:
                rows[i], rows[j] = rows[j], rows[i]
            else:
                rows[i] = [-a for a in rows[i]]
        return IntMatrix.from_rows(rows, cols=n)

    return build


def assemble_double_complex(pmax, qmax, nodes, arrows, name="assembled", rng=None):
    """Double complex spanned by cyclic nodes and single-entry arrows.

    ``nodes`` lists ((p, q), order) with order 0 for Z; ``arrows`` lists
    (i, j, k) meaning node i ↦ k · node j. With ``rng`` every cell gets a
    random unimodular change of generators.
    """
    members = {}
    for index, (cell, _order) in enumerate(nodes):
        members.setdefault(cell, []).append(index)
    position = {i: (cell, slot) for cell, ids in members.items() for slot, i in enumerate(ids)}

    change = {}
    for cell, ids in members.items():
        n = len(ids)
        P = [[int(i == j) for j in range(n)] for i in range(n)]
        P_inv = [row[:] for row in P]
        for _ in range(4 * n if rng is not None and n > 1 else 0):
            i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
            f = int(rng.integers(-2, 3))
            P[i] = [a + f * b for a, b in zip(P[i], P[j])]
            for row in P_inv:
                row[j] -= f * row[i]
        change[cell] = (IntMatrix.from_rows(P, cols=n), IntMatrix.from_rows(P_inv, cols=n))

    cells = {}
    for cell, ids in members.items():
        n = len(ids)
        relations = [[nodes[i][1] * int(s == slot) for s in range(n)] for slot, i in enumerate(ids)]
        relations = [row for row in relations if any(row)]
        R = IntMatrix.from_rows(relations, cols=n)
        cells[cell] = FpGroup(n, R @ change[cell][0].T)

    entries = {}
    for i, j, k in arrows:
        (source, a), (target, b) = position[i], position[j]
        entries.setdefault((source, target), {})[(b, a)] = k

    vertical, horizontal = {}, {}
    for (source, target), values in entries.items():
        width, height = len(members[source]), len(members[target])
        rows = [[values.get((b, a), 0) for a in range(width)] for b in range(height)]
        matrix = change[target][0] @ IntMatrix.from_rows(rows, cols=width) @ change[source][1]
        hom = GroupHom(cells[source], cells[target], matrix)
        step = (target[0] - source[0], target[1] - source[1])
        (horizontal if step == (1, 0) else vertical)[source] = hom
    return DoubleComplex(
        pmax=pmax, qmax=qmax, cells=cells, vertical=vertical, horizontal=horizontal, name=name
    )


ORDERS = (0, 0, 0, 2, 3, 4, 6)
MULTIPLIERS = (1, 1, -1, 2, 3)


def _arrow_scalar(rng, source_order, target_order):
    """A multiplier that makes Z/m → Z/m' well defined."""
    k = int(rng.choice(MULTIPLIERS))
    if target_order == 0:
        return k if source_order == 0 else 0
    if (k * source_order) % target_order:
        k *= target_order
    return k


def zigzag_double_complex(seed: int) -> DoubleComplex:
    """Random sum of zigzags, commuting squares and single cells.

    Bounds are at most 4 × 4 and each cell has at most three generators.
    Zigzags alternate forward and backward arrows, so every composite of two
    arrows vanishes; long ones carry differentials past the first page.
    """
    rng = np.random.default_rng(seed)
    pmax, qmax = (int(x) for x in rng.integers(1, 4, size=2))
    nodes, arrows, load = [], [], {}

    def add(cell, order):
        p, q = cell
        if not (0 <= p <= pmax and 0 <= q <= qmax) or load.get(cell, 0) >= 3:
            return None
        load[cell] = load.get(cell, 0) + 1
        nodes.append((cell, order))
        return len(nodes) - 1

    def link(i, j):
        arrows.append((i, j, _arrow_scalar(rng, nodes[i][1], nodes[j][1])))

    for _ in range(int(rng.integers(2, 6))):
        kind = int(rng.integers(0, 3))
        start = (int(rng.integers(0, pmax + 1)), int(rng.integers(0, qmax + 1)))
        if kind == 0:
            forward, back = ((1, 0), (0, -1)) if rng.integers(0, 2) else ((0, 1), (-1, 0))
            previous = add(start, int(rng.choice(ORDERS)))
            cell = start
            for k in range(1, int(rng.integers(2, 7))):
                if previous is None:
                    break
                step = forward if k % 2 else back
                cell = (cell[0] + step[0], cell[1] + step[1])
                current = add(cell, int(rng.choice(ORDERS)))
                if current is None:
                    break
                if k % 2:
                    link(previous, current)
                else:
                    link(current, previous)
                previous = current
        elif kind == 1:
            p, q = start
            if p + 1 > pmax or q + 1 > qmax:
                continue
            corners = [(p, q), (p + 1, q), (p, q + 1), (p + 1, q + 1)]
            if any(load.get(c, 0) >= 3 for c in corners):
                continue
            a, b = (int(x) for x in rng.choice(MULTIPLIERS, size=2))
            i, j, k, m = (add(c, 0) for c in corners)
            arrows += [(i, j, a), (i, k, b), (j, m, b), (k, m, a)]
        else:
            add(start, int(rng.choice(ORDERS)))
    return assemble_double_complex(pmax, qmax, nodes, arrows, name=f"zigzag{seed}", rng=rng)


@pytest.fixture
def make_zigzag():
    return zigzag_double_complex


@pytest.fixture
def assemble_double():
    return assemble_double_complex
