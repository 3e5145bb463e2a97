"""
Command pipeline for sheafwork.

Each ``run_*`` function resolves its inputs (workspace files or corpus
names), enforces the configured caps, runs the computation and returns a
``Report``. The CLI and ``corpus run`` are thin layers over these.
"""

import hashlib
import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from sheafwork.core.errors import (
    AmbientMismatch,
    CapExceeded,
    NotAResolution,
    SchemaError,
    UnknownName,
)
from sheafwork.core.report import Report, describe_groups, grid_table, group_dict, group_list
from sheafwork.finspace import FiniteSpace
from sheafwork.godement import (
    flasque_failures,
    godement_resolution,
    lim_higher_oracle,
    sheaf_cohomology,
)
from sheafwork.godement.resolution import Resolution
from sheafwork.sheaves import (
    PresheafTable,
    Sheaf,
    check_sheaf_axioms,
    minimal_open_cover,
    sections_left_exactness,
    sheafify,
    table_of_sheaf,
)
from sheafwork.spectral import (
    Axis,
    DoubleComplex,
    SheafComplex,
    SpectralPages,
    acyclic_resolution_check,
    cohomology_sheaves,
    hypercohomology,
    iterated_cohomology,
    spectral_sequence,
    stabilization_bound,
)
from sheafwork.utils.config import DEFAULT_CONFIG
from sheafwork.workspace import corpus
from sheafwork.workspace.loader import WorkspaceFile, digest, load_workspace

logger = logging.getLogger(__name__)


# input resolution


def _is_path(ref: str) -> bool:
    return ref.endswith(".json") or "/" in ref or Path(ref).is_file()


def _load_file(ref: str, kinds: tuple[str, ...]) -> WorkspaceFile:
    path = Path(ref)
    if not path.is_file():
        raise UnknownName(f"No such workspace file: {ref}", name=ref)
    loaded = load_workspace(path, corpus.resolver)
    if loaded.kind not in kinds:
        raise SchemaError(f"Expected a {' or '.join(kinds)} file, got kind '{loaded.kind}'", path="$.kind")
    return loaded


def resolve_space(ref: str) -> FiniteSpace:
    if _is_path(ref):
        return _load_file(ref, ("space",)).value
    return corpus.space(ref)


def resolve_sheaf(ref: str, X: Optional[FiniteSpace]) -> Sheaf:
    if _is_path(ref):
        F = _load_file(ref, ("sheaf",)).value
        if X is not None and F.space != X:
            raise AmbientMismatch(f"Sheaf file lives on '{F.space.name}', not on '{X.name}'")
        return F
    if X is None:
        raise SchemaError("A corpus sheaf name needs --space", path="--space")
    return corpus.sheaf(X, ref)


def resolve_complex(
    ref: str, X: Optional[FiniteSpace]
) -> tuple[SheafComplex, Optional[Resolution], str]:
    """(complex, resolution or None, digest)."""
    if _is_path(ref):
        loaded = _load_file(ref, ("sheaf_complex",))
        if X is not None and loaded.value.space != X:
            raise AmbientMismatch(f"Complex file lives on '{loaded.value.space.name}', not on '{X.name}'")
        return loaded.value, loaded.resolution, loaded.digest
    if X is None:
        raise SchemaError("A corpus complex name needs --space", path="--space")
    L, R = corpus.sheaf_complex(X, ref)
    return L, R, digest(R if R is not None else L)


def resolve_double(ref: str) -> DoubleComplex:
    if _is_path(ref):
        return _load_file(ref, ("double_complex",)).value
    return corpus.double_complex(ref)


# caps


def _config(config: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    return {**DEFAULT_CONFIG, **(config or {})}


def _check_space(X: FiniteSpace, config: Dict[str, Any]) -> None:
    if len(X.points) > config["max_points"]:
        raise CapExceeded(
            f"Space '{X.name}' has {len(X.points)} points, more than the cap of {config['max_points']}",
            cap="max_points",
            value=len(X.points),
        )


def _check_degree(k: int, config: Dict[str, Any]) -> None:
    if k < 0:
        raise SchemaError("Degree must be non-negative", path="--max-degree")
    if k > config["max_degree"]:
        raise CapExceeded(
            f"Degree {k} is above the cap of {config['max_degree']}", cap="max_degree", value=k
        )


def _check_pages(r: int, config: Dict[str, Any]) -> None:
    if r > config["max_pages"]:
        raise CapExceeded(f"{r} pages is above the cap of {config['max_pages']}", cap="max_pages", value=r)


def _timed(report: Report, started: float) -> Report:
    report.timing["seconds"] = round(time.perf_counter() - started, 6)
    return report


def _space_and_sheaf(space: Optional[str], sheaf: str, config: Dict[str, Any], report: Report):
    X = resolve_space(space) if space else None
    F = resolve_sheaf(sheaf, X)
    X = F.space
    _check_space(X, config)
    report.add_input("space", space or X.name, digest(X))
    report.add_input("sheaf", sheaf, digest(F))
    return X, F


# commands


def run_check(
    space: str,
    sheaf: Optional[str] = None,
    presheaf: Optional[str] = None,
    config: Optional[Dict[str, Any]] = None,
) -> Report:
    """Validate a space and a sheaf (or a named presheaf) and check both sheaf
    axioms over every open with its minimal-open cover."""
    config = _config(config)
    started = time.perf_counter()
    report = Report(command="check")
    cap = config["max_opens"]
    if (sheaf is None) == (presheaf is None):
        raise SchemaError("Give exactly one of --sheaf and --presheaf", path="--sheaf")

    if sheaf is not None:
        X, F = _space_and_sheaf(space, sheaf, config, report)
        P: PresheafTable = table_of_sheaf(F, cap)
    else:
        if space is None:
            raise SchemaError("A corpus presheaf name needs --space", path="--space")
        X = resolve_space(space)
        _check_space(X, config)
        report.add_input("space", space, digest(X))
        P = corpus.presheaf(X, presheaf, cap)
        report.add_input("presheaf", presheaf, hashlib.sha256(presheaf.encode("utf-8")).hexdigest())

    axioms = [
        check_sheaf_axioms(P, U, minimal_open_cover(X, U)) for U in P.opens if len(U) > 0
    ]
    report.results["space"] = {
        "points": len(X.points),
        "opens": len(P.opens),
        "height": X.height,
    }
    report.results["axioms"] = [a.to_dict() for a in axioms if not (a.uniqueness and a.gluing)]
    report.verdicts["uniqueness"] = all(a.uniqueness for a in axioms)
    report.verdicts["gluing"] = all(a.gluing for a in axioms)
    if presheaf is not None:
        plus = sheafify(P)
        report.results["sheafification"] = {
            p: group_dict(plus.sheaf.stalk(p)) for p in X.points
        }
        report.results["unit_is_isomorphism"] = plus.unit_is_isomorphism()
    return _timed(report, started)


def run_cohomology(
    space: Optional[str], sheaf: str, max_degree: int = 2, config: Optional[Dict[str, Any]] = None
) -> Report:
    """H^k(X, F) through the Godement resolution, cross-checked by the chain oracle."""
    config = _config(config)
    started = time.perf_counter()
    _check_degree(max_degree, config)
    report = Report(command="cohomology")
    X, F = _space_and_sheaf(space, sheaf, config, report)

    H = sheaf_cohomology(F, max_degree)
    oracle = lim_higher_oracle(F, max_degree)
    gamma = F.global_sections().group
    report.results["cohomology"] = group_list(H)
    report.results["oracle"] = group_list(oracle)
    report.results["global_sections"] = group_dict(gamma)
    report.results["height"] = X.height
    report.verdicts["oracle_agreement"] = [h.invariants for h in H] == [o.invariants for o in oracle]
    report.verdicts["h0_equals_sections"] = H[0].invariants == gamma.invariants
    logger.info(f"H*({F.name}) = {describe_groups(H)}")
    return _timed(report, started)


def run_flasque(
    space: Optional[str], sheaf: str, max_degree: int = 3, config: Optional[Dict[str, Any]] = None
) -> Report:
    """Flasqueness by full open enumeration, plus vanishing of H^1 … H^k."""
    config = _config(config)
    started = time.perf_counter()
    _check_degree(max_degree, config)
    report = Report(command="flasque")
    X, F = _space_and_sheaf(space, sheaf, config, report)

    failures = flasque_failures(F, config["max_opens"])
    H = sheaf_cohomology(F, max_degree)
    report.results["failing_opens"] = [U.label() for U in failures]
    report.results["cohomology"] = group_list(H)
    report.verdicts["flasque"] = not failures
    report.verdicts["acyclic"] = all(h.is_trivial for h in H[1:])
    return _timed(report, started)


def _page_tables(pages: SpectralPages, label: str, through: Optional[int] = None) -> Dict[str, Any]:
    tables = {}
    last = pages.bound if through is None else min(through, pages.bound)
    for r in range(last + 1):
        tables[f"{label} E{r}"] = grid_table(pages.pages[r], pages.pmax, pages.qmax)
    tables[f"{label} Einf"] = grid_table(pages.einf, pages.pmax, pages.qmax)
    tables[f"{label} Gr H"] = grid_table(pages.graded_total, pages.pmax, pages.qmax)
    return tables


def _pages_results(pages: SpectralPages) -> Dict[str, Any]:
    return {
        "bound": pages.bound,
        "degenerates_at": pages.degenerates_at(),
        "extension_flags": list(pages.extension_flags),
        "einf": {f"{p},{q}": group_dict(g) for (p, q), g in sorted(pages.einf.items())},
    }


def run_hyper(
    space: Optional[str],
    complex: str,
    max_degree: int = 2,
    pages: Optional[int] = None,
    config: Optional[Dict[str, Any]] = None,
) -> Report:
    """Hypercohomology of a complex of sheaves with both page tables."""
    config = _config(config)
    started = time.perf_counter()
    _check_degree(max_degree, config)
    report = Report(command="hyper")
    X = resolve_space(space) if space else None
    L, _, complex_digest = resolve_complex(complex, X)
    X = L.space
    _check_space(X, config)
    report.add_input("space", space or X.name, digest(X))
    report.add_input("complex", complex, complex_digest)
    if pages is not None:
        _check_pages(pages, config)

    hyper = hypercohomology(X, L, max_degree, rmax=pages, check_exact_functor=True)
    _check_pages(hyper.pages_by_p.rmax, config)
    report.results["hypercohomology"] = group_list(hyper.groups)
    report.results["flags"] = dict(hyper.flags)
    report.results["by_p"] = _pages_results(hyper.pages_by_p)
    report.results["by_q"] = _pages_results(hyper.pages_by_q)
    if len(L.terms) == 1:
        H = sheaf_cohomology(L.terms[0], max_degree)
        report.results["sheaf_cohomology"] = group_list(H)
        report.verdicts["matches_sheaf_cohomology"] = [h.invariants for h in H] == [
            g.invariants for g in hyper.groups
        ]
    for label, run in (("by_p", hyper.pages_by_p), ("by_q", hyper.pages_by_q)):
        report.verdicts[f"convergence_{label}"] = run.checks["convergence"]
        report.verdicts[f"recurrence_{label}"] = run.checks["recurrence"]
    report.verdicts["e1_matches_cohomology_sheaves"] = bool(hyper.flags["e1_matches_cohomology_sheaves"])
    report.tables.update(_page_tables(hyper.pages_by_p, "by_p", through=2))
    report.tables.update(_page_tables(hyper.pages_by_q, "by_q", through=2))
    return _timed(report, started)


def run_ss(
    complex: str,
    axis: str = "p",
    pages: Optional[int] = None,
    config: Optional[Dict[str, Any]] = None,
) -> Report:
    """Spectral sequence of a double complex along one filtration."""
    config = _config(config)
    started = time.perf_counter()
    report = Report(command="ss")
    K = resolve_double(complex)
    report.add_input("complex", complex, digest(K))
    axis = Axis(axis)
    rmax = stabilization_bound(K) if pages is None else pages
    _check_pages(rmax, config)

    run = spectral_sequence(K, axis, rmax)
    iterated = iterated_cohomology(K, axis)
    report.results["axis"] = axis.value
    report.results["total_cohomology"] = group_list(run.total_cohomology)
    report.results.update(_pages_results(run))
    report.results["graded_total"] = {
        f"{p},{q}": group_dict(g) for (p, q), g in sorted(run.graded_total.items())
    }
    report.verdicts.update(run.checks)
    report.verdicts["e2_matches_iterated"] = all(
        run.pages[2][cell].invariants == iterated[cell].invariants for cell in K.grid()
    )
    report.tables.update(_page_tables(run, f"axis {axis.value}"))
    return _timed(report, started)


def run_resolve(
    space: Optional[str], sheaf: str, max_degree: int = 2, config: Optional[Dict[str, Any]] = None
) -> Report:
    """Summary of the Godement resolution, its exactness and the first step's
    left-exactness on global sections."""
    config = _config(config)
    started = time.perf_counter()
    _check_degree(max_degree, config)
    report = Report(command="resolve")
    X, F = _space_and_sheaf(space, sheaf, config, report)

    R = godement_resolution(F, max_degree)
    cap = config["max_opens"]
    report.results["terms"] = [
        {
            "name": L.name,
            "stalks": {p: group_dict(L.stalk(p)) for p in X.points},
            "global_sections": group_dict(L.global_sections().group),
            "flasque": not flasque_failures(L, cap),
        }
        for L in R.terms
    ]
    report.results["quotients"] = [
        {p: group_dict(step.quotient.stalk(p)) for p in X.points} for step in R.steps
    ]
    complex_ = SheafComplex(R.terms, R.differentials, name=f"C({F.name})")
    H = cohomology_sheaves(complex_)
    first = R.steps[0]
    left = sections_left_exactness(first.unit, first.projection, X.whole)
    H1 = sheaf_cohomology(F, max(1, max_degree))[1]
    report.results["left_exactness"] = left.to_dict()
    report.results["h1"] = group_dict(H1)

    report.verdicts["exact"] = R.exactness().exact
    report.verdicts["terms_flasque"] = all(t["flasque"] for t in report.results["terms"])
    report.verdicts["cohomology_sheaves_resolve"] = all(
        H[0].stalk(p).invariants == F.stalk(p).invariants for p in X.points
    )
    report.verdicts["cohomology_sheaves_vanish"] = all(
        h.is_zero() for h in H[1 : R.reliable_degree + 1]
    )
    report.verdicts["sections_left_exact"] = left.left_exact
    report.verdicts["cokernel_is_h1"] = left.cokernel.invariants == H1.invariants
    return _timed(report, started)


def run_acyclic_check(
    space: Optional[str], complex: str, max_degree: int = 2, config: Optional[Dict[str, Any]] = None
) -> Report:
    """Compare H^k(X, F) with the cohomology of global sections of a resolution."""
    config = _config(config)
    started = time.perf_counter()
    _check_degree(max_degree, config)
    report = Report(command="acyclic-check")
    X = resolve_space(space) if space else None
    L, R, complex_digest = resolve_complex(complex, X)
    if R is None:
        raise NotAResolution(f"Complex '{complex}' has no base sheaf and augmentation")
    X = L.space
    _check_space(X, config)
    report.add_input("space", space or X.name, digest(X))
    report.add_input("complex", complex, complex_digest)

    result = acyclic_resolution_check(R.base, R, max_degree)
    data = result.to_dict()
    report.results["base"] = R.base.name
    for key in (
        "offenders",
        "terms",
        "resolution_cohomology",
        "sheaf_cohomology",
        "unverified_degrees",
    ):
        report.results[key] = data[key]
    report.results["degeneration"] = data.get("degeneration", {})
    report.verdicts["acyclic"] = result.acyclic
    report.verdicts["isomorphic"] = result.isomorphic
    report.verdicts["verdict"] = result.verdict
    if result.offenders:
        worst = result.offenders[0]
        report.results["not_acyclic"] = {"term": worst.index, "name": worst.name, "degree": worst.first_failure}
    return _timed(report, started)


COMMANDS: Dict[str, Callable[..., Report]] = {
    "check": run_check,
    "cohomology": run_cohomology,
    "flasque": run_flasque,
    "hyper": run_hyper,
    "ss": run_ss,
    "resolve": run_resolve,
    "acyclic-check": run_acyclic_check,
}


def run_command(command: str, args: Dict[str, Any], config: Optional[Dict[str, Any]] = None) -> Report:
    if command not in COMMANDS:
        raise UnknownName(f"Unknown command '{command}'", name=command)
    return COMMANDS[command](**args, config=config)
