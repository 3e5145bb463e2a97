"""
CLI commands for the bundled example corpus.
"""

from pathlib import Path
from typing import List, Optional

import typer
from rich import box
from rich.console import Console
from rich.table import Table
from tqdm import tqdm

from sheafwork.core.errors import SheafworkError
from sheafwork.core.pipeline import run_command
from sheafwork.core.report import print_error
from sheafwork.utils.config import get_config
from sheafwork.utils.json_io import save_jsonl
from sheafwork.utils.logging import configure_logging
from sheafwork.utils.paths import ensure_path
from sheafwork.workspace.corpus import ENTRIES, entry, export_items
from sheafwork.workspace.loader import dump_workspace

app = typer.Typer(help="Run and export the bundled example corpus", no_args_is_help=True)
console = Console()


@app.command("list")
def list_entries():
    """List the corpus entries and what each one demonstrates."""
    table = Table(title="sheafwork corpus", box=box.SIMPLE_HEAVY)
    table.add_column("entry", style="cyan")
    table.add_column("command")
    table.add_column("description")
    for e in ENTRIES:
        table.add_row(e.name, e.command, e.description)
    console.print(table)


@app.command("run")
def run_entries(
    names: Optional[List[str]] = typer.Argument(None, help="Entries to run (default: all)"),
    output: Optional[Path] = typer.Option(
        None, "--output", "-o", help="Write one report per line to this JSON Lines file"
    ),
    config_file: Optional[Path] = typer.Option(None, "--config", help="YAML configuration file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Enable debug logging"),
):
    """
    Run corpus entries through the same pipeline as the individual commands.

    Entries that fail with an input or cap error are recorded and the run
    continues; the exit code is that of the first failure.
    """
    configure_logging(verbose=verbose)
    try:
        config = get_config(config_file)
        selected = [entry(n) for n in names] if names else list(ENTRIES)
    except SheafworkError as e:
        print_error(e)
        raise typer.Exit(code=e.exit_code)

    records = []
    failures: list[tuple[str, SheafworkError]] = []
    summary = Table(box=box.SIMPLE)
    summary.add_column("entry", style="cyan")
    summary.add_column("verdicts")
    summary.add_column("seconds", justify="right")

    for e in tqdm(selected, desc="corpus", unit="entry"):
        try:
            report = run_command(e.command, e.args, config)
        except SheafworkError as err:
            failures.append((e.name, err))
            records.append({"entry": e.name, "error": err.to_dict()})
            summary.add_row(e.name, f"[red]{err.code}[/red]", "-")
            continue
        records.append({"entry": e.name, **report.to_dict()})
        passed = sum(report.verdicts.values())
        colour = "green" if report.ok else "yellow"
        summary.add_row(
            e.name,
            f"[{colour}]{passed}/{len(report.verdicts)}[/{colour}]",
            f"{report.timing.get('seconds', 0.0):.3f}",
        )

    console.print(summary)
    if output:
        save_jsonl(records, output)
        console.print(f"Wrote {len(records)} reports to [green]{output}[/green]")

    if failures:
        name, err = failures[0]
        console.print(f"[red]{len(failures)} entries failed[/red]; first: {name}")
        raise typer.Exit(code=err.exit_code)


@app.command("export")
def export_files(
    directory: Path = typer.Argument(..., help="Directory to write canonical files into"),
):
    """Write every exportable corpus member as a canonical workspace file."""
    ensure_path(directory)
    items = export_items()
    for stem, value in items:
        (directory / f"{stem}.json").write_text(dump_workspace(value), encoding="utf-8")
    console.print(f"Exported {len(items)} files to [green]{directory}[/green]")
