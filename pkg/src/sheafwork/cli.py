"""
sheafwork CLI interface.

Every command loads its inputs (corpus names or canonical workspace files),
runs the computation and prints a report: rich tables by default, or
sorted JSON with ``--format json``. Exit codes: 0 when the computation ran
(even if a verdict is false), 2 for malformed or inconsistent input, 3 when
a size cap was exceeded.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

import typer
from rich.console import Console

from sheafwork import __version__
from sheafwork.core.errors import SheafworkError
from sheafwork.core.pipeline import run_command
from sheafwork.core.report import print_error, print_report
from sheafwork.spectral import Axis
from sheafwork.utils.config import get_config
from sheafwork.utils.logging import configure_logging, log_exception

console = Console()

app = typer.Typer(
    name="sheafwork",
    help="sheafwork: exact sheaf cohomology and spectral sequences over finite spaces.",
    no_args_is_help=True,
)

from sheafwork.workspace.cli import app as corpus_app  # noqa: E402

app.add_typer(corpus_app, name="corpus", help="List, run and export the bundled examples")


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


def _version(value: bool) -> None:
    if value:
        console.print(f"sheafwork {__version__}")
        raise typer.Exit()


@app.callback()
def main_callback(
    version: bool = typer.Option(
        False, "--version", callback=_version, is_eager=True, help="Show the version and exit"
    ),
):
    """
    sheafwork: derived functor cohomology over finite T0 spaces, computed exactly.
    Try `sheafwork corpus list` to see the bundled examples.
    """
    pass


# Shared options
SPACE = typer.Option(None, "--space", "-X", help="Corpus space name or workspace file")
SHEAF = typer.Option(..., "--sheaf", "-F", help="Corpus sheaf name or workspace file")
COMPLEX = typer.Option(..., "--complex", "-K", help="Corpus complex name or workspace file")
FORMAT = typer.Option(None, "--format", help="Output format (default from config: text)")
CONFIG = typer.Option(None, "--config", help="YAML configuration file")
MAX_OPENS = typer.Option(None, "--max-opens", help="Refuse spaces with more opens than this")
VERBOSE = typer.Option(False, "--verbose", "-v", help="Enable debug logging")


def _execute(
    command: str,
    args: Dict[str, Any],
    fmt: Optional[OutputFormat],
    config_file: Optional[Path],
    max_opens: Optional[int],
    verbose: bool,
) -> None:
    logger = configure_logging(verbose=verbose)
    chosen = fmt.value if fmt else "text"
    try:
        config = get_config(
            config_file, overrides={"max_opens": max_opens, "format": fmt.value if fmt else None}
        )
        chosen = config["format"]
        report = run_command(command, args, config)
    except SheafworkError as e:
        if verbose:
            log_exception(logger, e, context=command)
        print_error(e, chosen)
        raise typer.Exit(code=e.exit_code)
    print_report(report, chosen, console)


@app.command("check")
def check(
    space: str = typer.Option(..., "--space", "-X", help="Corpus space name or workspace file"),
    sheaf: Optional[str] = typer.Option(None, "--sheaf", "-F", help="Sheaf to validate"),
    presheaf: Optional[str] = typer.Option(
        None, "--presheaf", help="Named presheaf (zero, constant_functions, global_only)"
    ),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Validate a space and a sheaf, and test both sheaf axioms on every open."""
    _execute(
        "check",
        {"space": space, "sheaf": sheaf, "presheaf": presheaf},
        fmt, config_file, max_opens, verbose,
    )


@app.command("cohomology")
def cohomology(
    space: Optional[str] = SPACE,
    sheaf: str = SHEAF,
    max_degree: int = typer.Option(2, "--max-degree", "-k", help="Highest degree to compute"),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Sheaf cohomology H^0 … H^k via the Godement resolution, checked against the oracle."""
    _execute(
        "cohomology",
        {"space": space, "sheaf": sheaf, "max_degree": max_degree},
        fmt, config_file, max_opens, verbose,
    )


@app.command("flasque")
def flasque(
    space: Optional[str] = SPACE,
    sheaf: str = SHEAF,
    max_degree: int = typer.Option(3, "--max-degree", "-k", help="Check vanishing up to this degree"),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Decide flasqueness and check that higher cohomology vanishes."""
    _execute(
        "flasque",
        {"space": space, "sheaf": sheaf, "max_degree": max_degree},
        fmt, config_file, max_opens, verbose,
    )


@app.command("hyper")
def hyper(
    space: Optional[str] = SPACE,
    complex_ref: str = COMPLEX,
    max_degree: int = typer.Option(2, "--max-degree", "-k", help="Highest total degree"),
    pages: Optional[int] = typer.Option(None, "--pages", help="Last page to compute"),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Hypercohomology of a complex of sheaves with both spectral sequences."""
    _execute(
        "hyper",
        {"space": space, "complex": complex_ref, "max_degree": max_degree, "pages": pages},
        fmt, config_file, max_opens, verbose,
    )


@app.command("ss")
def spectral_sequence(
    complex_ref: str = typer.Option(
        ..., "--complex", "-K", help="Corpus double complex name or workspace file"
    ),
    axis: Axis = typer.Option(Axis.BY_P, "--axis", help="Filtration: p (columns) or q (rows)"),
    pages: Optional[int] = typer.Option(None, "--pages", help="Last page to compute"),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Pages, differentials, convergence and extension flags of a double complex."""
    _execute(
        "ss",
        {"complex": complex_ref, "axis": axis.value, "pages": pages},
        fmt, config_file, max_opens, verbose,
    )


@app.command("resolve")
def resolve(
    space: Optional[str] = SPACE,
    sheaf: str = SHEAF,
    max_degree: int = typer.Option(2, "--max-degree", "-k", help="Length of the resolution"),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Summarise the Godement resolution and the left-exactness of global sections."""
    _execute(
        "resolve",
        {"space": space, "sheaf": sheaf, "max_degree": max_degree},
        fmt, config_file, max_opens, verbose,
    )


@app.command("acyclic-check")
def acyclic_check(
    space: Optional[str] = SPACE,
    complex_ref: str = typer.Option(
        ..., "--complex", "-K", help="Corpus resolution name or workspace file"
    ),
    max_degree: int = typer.Option(2, "--max-degree", "-k", help="Highest degree to compare"),
    fmt: Optional[OutputFormat] = FORMAT,
    config_file: Optional[Path] = CONFIG,
    max_opens: Optional[int] = MAX_OPENS,
    verbose: bool = VERBOSE,
):
    """Check that a resolution is acyclic and computes the sheaf's cohomology."""
    _execute(
        "acyclic-check",
        {"space": space, "complex": complex_ref, "max_degree": max_degree},
        fmt, config_file, max_opens, verbose,
    )


if __name__ == "__main__":
    app()
