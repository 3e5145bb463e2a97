"""The bundled example corpus.

Names resolve relative to a space where needed: ``constZ`` on the
pseudocircle, ``skyscraper:c``, ``C1:constZ`` (the degree-1 Godement
sheaf of constZ), ``single_constZ``, ``godement_constZ``. ``ENTRIES``
lists the runnable examples behind ``sheafwork corpus run``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Optional

from sheafwork.core.errors import AmbientMismatch, UnknownName
from sheafwork.exactalg import FpGroup, GroupHom, IntMatrix
from sheafwork.finspace import FiniteSpace, build_space
from sheafwork.godement import Resolution, godement_resolution
from sheafwork.sheaves import (
    PresheafTable,
    Sheaf,
    SheafHom,
    constant_functions_presheaf,
    constant_sheaf,
    direct_sum_sheaves,
    global_only_presheaf,
    skyscraper,
    zero_presheaf,
    zero_sheaf,
)
from sheafwork.spectral import DoubleComplex, SheafComplex, single_sheaf_complex

# spaces

_SPACES: dict[str, tuple[list[str], list[tuple[str, str]]]] = {
    "point": (["x"], []),
    "sierpinski": (["a", "b"], [("a", "b")]),
    "discrete2": (["x", "y"], []),
    "pseudocircle": (
        ["a", "b", "c", "d"],
        [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
    ),
    "sphere6": (
        ["a", "b", "c", "d", "e", "f"],
        [
            ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"),
            ("c", "e"), ("c", "f"), ("d", "e"), ("d", "f"),
        ],
    ),
}

SPACE_NAMES = tuple(_SPACES)
SHEAF_NAMES = ("constZ", "constZ2", "zero", "skyscraper:<point>", "C<k>:<sheaf>")
PRESHEAF_NAMES = ("zero", "constant_functions", "global_only")
DOUBLE_NAMES = ("one_row", "one_row_torsion", "square_exact", "square_zero", "extension_problem")
RESOLUTION_NAMES = ("sierpinski_flasque", "pseudocircle_skyscrapers", "pseudocircle_nonacyclic")

_GODEMENT_TERM = re.compile(r"^C(\d+):(.+)$")


@lru_cache(maxsize=None)
def space(name: str) -> FiniteSpace:
    if name not in _SPACES:
        raise UnknownName(f"No corpus space named '{name}'", name=name, known=list(SPACE_NAMES))
    points, leq = _SPACES[name]
    return build_space(points, leq, name=name)


@lru_cache(maxsize=None)
def sheaf(X: FiniteSpace, name: str) -> Sheaf:
    """A named corpus sheaf on X."""
    Z = FpGroup.free(1)
    if name == "constZ":
        return constant_sheaf(X, Z, name="constZ")
    if name == "constZ2":
        return constant_sheaf(X, FpGroup.cyclic(2), name="constZ2")
    if name == "zero":
        return zero_sheaf(X)
    if name.startswith("skyscraper:"):
        point = name.split(":", 1)[1]
        X.check_point(point)
        return skyscraper(X, point, Z)
    match = _GODEMENT_TERM.match(name)
    if match:
        k, base = int(match.group(1)), match.group(2)
        return godement_resolution(sheaf(X, base), max(0, k - 1)).terms[k]
    raise UnknownName(f"No corpus sheaf named '{name}'", name=name, known=list(SHEAF_NAMES))


def presheaf(X: FiniteSpace, name: str, cap: int) -> PresheafTable:
    Z = FpGroup.free(1)
    if name == "zero":
        return zero_presheaf(X, cap)
    if name == "constant_functions":
        return constant_functions_presheaf(X, Z, cap)
    if name == "global_only":
        return global_only_presheaf(X, Z, cap)
    raise UnknownName(f"No corpus presheaf named '{name}'", name=name, known=list(PRESHEAF_NAMES))


def closed_points(X: FiniteSpace) -> list[str]:
    return [p for p in X.points if X.closure(p) == frozenset({p})]


# hand-built resolutions


def _column(n: int, value: int = 1) -> IntMatrix:
    return IntMatrix.from_rows([[value] for _ in range(n)], cols=1)


def sierpinski_flasque() -> Resolution:
    """0 → Z → skyscraper(a) ⊕ skyscraper(b) → skyscraper(b) → 0.

    b is the closed point; skyscraper(a) is supported on all of X.
    """
    X = space("sierpinski")
    F = sheaf(X, "constZ")
    Z = FpGroup.free(1)
    L0 = direct_sum_sheaves([skyscraper(X, "a", Z), skyscraper(X, "b", Z)], name="sky(a)+sky(b)")
    L1 = skyscraper(X, "b", Z)
    augmentation = SheafHom(
        F,
        L0,
        {p: GroupHom(F.stalk(p), L0.stalk(p), _column(L0.stalk(p).generators)) for p in X.points},
    )
    d0 = SheafHom(
        L0,
        L1,
        {
            "a": GroupHom.zero(L0.stalk("a"), L1.stalk("a")),
            "b": GroupHom(L0.stalk("b"), L1.stalk("b"), IntMatrix.from_rows([[-1, 1]])),
        },
    )
    return Resolution.build(F, augmentation, [d0], complete=True)


def pseudocircle_skyscrapers() -> Resolution:
    """0 → Z → ⊕_p skyscraper(p) → skyscraper(c)² ⊕ skyscraper(d)² → 0."""
    X = space("pseudocircle")
    Z = FpGroup.free(1)
    F = sheaf(X, "constZ")
    L0 = direct_sum_sheaves([skyscraper(X, p, Z) for p in X.points], name="sum sky(p)")
    L1 = direct_sum_sheaves(
        [skyscraper(X, p, Z) for p in ("c", "c", "d", "d")], name="sky(c)^2+sky(d)^2"
    )
    augmentation = SheafHom(
        F,
        L0,
        {p: GroupHom(F.stalk(p), L0.stalk(p), _column(L0.stalk(p).generators)) for p in X.points},
    )
    # at c and d the stalk of L0 has coordinates (a, b, top point)
    differences = IntMatrix.from_rows([[-1, 0, 1], [0, -1, 1]])
    d0 = SheafHom(
        L0,
        L1,
        {
            p: (
                GroupHom(L0.stalk(p), L1.stalk(p), differences)
                if p in ("c", "d")
                else GroupHom.zero(L0.stalk(p), L1.stalk(p))
            )
            for p in X.points
        },
    )
    return Resolution.build(F, augmentation, [d0], complete=True)


def pseudocircle_nonacyclic() -> Resolution:
    """0 → Z → Z → 0: exact, but its only term has H¹ = Z."""
    X = space("pseudocircle")
    F = sheaf(X, "constZ")
    return Resolution.build(F, SheafHom.identity(F), [], complete=True)


_RESOLUTIONS: dict[str, tuple[str, Callable[[], Resolution]]] = {
    "sierpinski_flasque": ("sierpinski", sierpinski_flasque),
    "pseudocircle_skyscrapers": ("pseudocircle", pseudocircle_skyscrapers),
    "pseudocircle_nonacyclic": ("pseudocircle", pseudocircle_nonacyclic),
}

GODEMENT_COMPLEX_DEGREE = 2


@lru_cache(maxsize=None)
def sheaf_complex(X: FiniteSpace, name: str) -> tuple[SheafComplex, Optional[Resolution]]:
    """A named complex on X, with its resolution structure when it has one."""
    if name in _RESOLUTIONS:
        home, build = _RESOLUTIONS[name]
        if space(home) != X:
            raise AmbientMismatch(f"Corpus resolution '{name}' lives on '{home}'")
        R = build()
        return SheafComplex(R.terms, R.differentials, name=name), R
    if name == "zero_complex":
        return single_sheaf_complex(zero_sheaf(X)), None
    if name.startswith("single_"):
        return single_sheaf_complex(sheaf(X, name[len("single_"):])), None
    if name.startswith("godement_"):
        base = sheaf(X, name[len("godement_"):])
        R = godement_resolution(base, GODEMENT_COMPLEX_DEGREE)
        return SheafComplex(R.terms, R.differentials, name=name), R
    raise UnknownName(f"No corpus complex named '{name}'", name=name)


# double complexes


def _hom(source: FpGroup, target: FpGroup, rows: list[list[int]]) -> GroupHom:
    return GroupHom(source, target, IntMatrix.from_rows(rows, cols=source.generators))


@lru_cache(maxsize=None)
def double_complex(name: str) -> DoubleComplex:
    Z = FpGroup.free(1)
    if name == "one_row":
        Z2 = FpGroup.free(2)
        return DoubleComplex(
            pmax=2,
            qmax=0,
            cells={(0, 0): Z, (1, 0): Z2, (2, 0): Z},
            horizontal={(0, 0): _hom(Z, Z2, [[1], [1]]), (1, 0): _hom(Z2, Z, [[0, 0]])},
            name=name,
        )
    if name == "one_row_torsion":
        return DoubleComplex(
            pmax=1, qmax=0, cells={(0, 0): Z, (1, 0): Z},
            horizontal={(0, 0): _hom(Z, Z, [[2]])}, name=name,
        )
    if name in ("square_exact", "square_zero"):
        cells = {(p, q): Z for p in range(2) for q in range(2)}
        vertical = {}
        if name == "square_exact":
            vertical = {(0, 0): _hom(Z, Z, [[1]]), (1, 0): _hom(Z, Z, [[1]])}
        return DoubleComplex(pmax=1, qmax=1, cells=cells, vertical=vertical, name=name)
    if name == "extension_problem":
        # H^1 = Z/4 while the q-filtration has graded pieces Z/2, Z/2
        Z2 = FpGroup.cyclic(2)
        return DoubleComplex(
            pmax=1,
            qmax=1,
            cells={(0, 0): Z, (1, 0): Z, (0, 1): Z2},
            vertical={(0, 0): _hom(Z, Z2, [[1]])},
            horizontal={(0, 0): _hom(Z, Z, [[2]])},
            name=name,
        )
    raise UnknownName(f"No corpus double complex named '{name}'", name=name, known=list(DOUBLE_NAMES))


def resolver(kind: str, name: str, X: Optional[FiniteSpace]) -> Any:
    """Name lookup for workspace documents."""
    if kind == "space":
        return space(name)
    if kind == "sheaf":
        return sheaf(X, name)
    raise UnknownName(f"Cannot look up a {kind} by name", name=name)


# runnable entries


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    command: str
    args: dict = field(default_factory=dict)
    description: str = ""


def _entries() -> list[CorpusEntry]:
    entries = [
        CorpusEntry("circle", "cohomology", {"space": "pseudocircle", "sheaf": "constZ", "max_degree": 2},
                    "constant Z on the pseudocircle: (Z, Z, 0)"),
        CorpusEntry("sphere", "cohomology", {"space": "sphere6", "sheaf": "constZ", "max_degree": 3},
                    "constant Z on the 6-point sphere: (Z, 0, Z, 0)"),
        CorpusEntry("sierpinski", "cohomology", {"space": "sierpinski", "sheaf": "constZ", "max_degree": 1},
                    "constant Z on Sierpinski space: (Z, 0)"),
    ]
    for X in SPACE_NAMES:
        names = ["constZ", "constZ2", "zero"] + [f"skyscraper:{p}" for p in _SPACES[X][0]]
        for F in names:
            entries.append(
                CorpusEntry(f"h0/{X}/{F}", "cohomology", {"space": X, "sheaf": F, "max_degree": 1},
                            "H^0 equals global sections; oracle agrees")
            )
    for X in SPACE_NAMES:
        for k in range(1 if X == "sphere6" else 2):
            entries.append(
                CorpusEntry(f"flasque/{X}/C{k}:constZ", "flasque",
                            {"space": X, "sheaf": f"C{k}:constZ", "max_degree": 3},
                            "Godement sheaves are flasque and acyclic")
            )
        for p in closed_points(space(X)):
            entries.append(
                CorpusEntry(f"flasque/{X}/skyscraper:{p}", "flasque",
                            {"space": X, "sheaf": f"skyscraper:{p}", "max_degree": 3},
                            "skyscrapers at closed points are flasque and acyclic")
            )
    entries.append(
        CorpusEntry("flasque/pseudocircle/constZ", "flasque",
                    {"space": "pseudocircle", "sheaf": "constZ", "max_degree": 3},
                    "constant Z on the pseudocircle is not flasque")
    )
    for X in ("sierpinski", "pseudocircle", "sphere6"):
        entries.append(
            CorpusEntry(f"hyper/{X}/single_constZ", "hyper",
                        {"space": X, "complex": "single_constZ", "max_degree": 2},
                        "hypercohomology of a single sheaf is its cohomology")
        )
    entries.append(
        CorpusEntry("hyper/pseudocircle/godement_constZ", "hyper",
                    {"space": "pseudocircle", "complex": "godement_constZ", "max_degree": 2},
                    "hypercohomology of the truncated Godement complex")
    )
    entries.append(
        CorpusEntry("hyper/pseudocircle/zero_complex", "hyper",
                    {"space": "pseudocircle", "complex": "zero_complex", "max_degree": 2},
                    "the zero complex")
    )
    for K in DOUBLE_NAMES:
        for axis in ("p", "q"):
            entries.append(
                CorpusEntry(f"ss/{K}/{axis}", "ss", {"complex": K, "axis": axis},
                            "pages, convergence and extension flags")
            )
    for X in ("sierpinski", "pseudocircle"):
        entries.append(
            CorpusEntry(f"acyclic/{X}/godement_constZ", "acyclic-check",
                        {"space": X, "complex": "godement_constZ", "max_degree": 1},
                        "the Godement resolution is acyclic")
        )
    for name, (X, _) in _RESOLUTIONS.items():
        entries.append(
            CorpusEntry(f"acyclic/{X}/{name}", "acyclic-check",
                        {"space": X, "complex": name, "max_degree": 2},
                        "hand-built resolution")
        )
    entries += [
        CorpusEntry("resolve/pseudocircle/constZ", "resolve",
                    {"space": "pseudocircle", "sheaf": "constZ", "max_degree": 2},
                    "left exactness of sections; the cokernel is H^1"),
        CorpusEntry("check/sierpinski/constZ", "check", {"space": "sierpinski", "sheaf": "constZ"},
                    "sheaf axioms hold"),
        CorpusEntry("check/pseudocircle/constZ", "check", {"space": "pseudocircle", "sheaf": "constZ"},
                    "sheaf axioms hold"),
        CorpusEntry("check/discrete2/constant_functions", "check",
                    {"space": "discrete2", "presheaf": "constant_functions"},
                    "constant functions: uniqueness holds, gluing fails"),
    ]
    return entries


ENTRIES: tuple[CorpusEntry, ...] = tuple(_entries())


def entry(name: str) -> CorpusEntry:
    for e in ENTRIES:
        if e.name == name:
            return e
    raise UnknownName(f"No corpus entry named '{name}'", name=name)


def export_items() -> list[tuple[str, Any]]:
    """(file stem, object) for every exportable corpus member."""
    items: list[tuple[str, Any]] = [(f"space_{n}", space(n)) for n in SPACE_NAMES]
    for n in ("pseudocircle", "sierpinski"):
        items.append((f"sheaf_{n}_constZ", sheaf(space(n), "constZ")))
    items.append(("sheaf_pseudocircle_skyscraper_c", sheaf(space("pseudocircle"), "skyscraper:c")))
    for name, (home, _) in _RESOLUTIONS.items():
        items.append((f"resolution_{name}", sheaf_complex(space(home), name)[1]))
    for name in DOUBLE_NAMES:
        items.append((f"double_{name}", double_complex(name)))
    return items
