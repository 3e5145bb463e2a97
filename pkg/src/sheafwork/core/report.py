"""Command reports.

A report has a comparable section (command, input digests, results,
verdicts, tables) that is identical across runs on the same input, and a
timing section that is not. JSON output sorts keys; text output is
rendered with rich.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Sequence

import typer
from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from sheafwork.core.errors import SheafworkError
from sheafwork.exactalg import FpGroup, GroupInvariants
from sheafwork.utils.json_io import dump_json
from sheafwork.utils.logging import get_console

REPORT_SCHEMA = 1


def group_dict(group: FpGroup) -> Dict[str, Any]:
    return group.invariants.to_dict()


def group_list(groups: Iterable[FpGroup]) -> list:
    return [group_dict(g) for g in groups]


def describe_groups(groups: Iterable[FpGroup]) -> str:
    return "(" + ", ".join(g.describe() for g in groups) + ")"


def grid_table(cells: Dict, pmax: int, qmax: int) -> Dict[str, Any]:
    """Cells (p, q) → group as a table with q rising upwards."""
    trivial = FpGroup.trivial()
    return {
        "columns": ["q\\p"] + [str(p) for p in range(pmax + 1)],
        "rows": [
            [str(q)] + [cells.get((p, q), trivial).describe() for p in range(pmax + 1)]
            for q in reversed(range(qmax + 1))
        ],
    }


def _is_group(value: Any) -> bool:
    return isinstance(value, dict) and set(value) == {"rank", "torsion"}


def _text(value: Any) -> str:
    if _is_group(value):
        return GroupInvariants(value["rank"], tuple(value["torsion"])).describe()
    if isinstance(value, list) and value and all(_is_group(v) for v in value):
        return "(" + ", ".join(_text(v) for v in value) + ")"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_text(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_text(v)}" for k, v in value.items()) + "}"
    return str(value)


def _flatten(prefix: str, value: Any) -> Iterable[tuple[str, str]]:
    if isinstance(value, dict) and not _is_group(value) and value:
        for key, item in value.items():
            yield from _flatten(f"{prefix}.{key}" if prefix else str(key), item)
    else:
        yield prefix, _text(value)


@dataclass
class Report:
    command: str
    inputs: Dict[str, Dict[str, str]] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    verdicts: Dict[str, bool] = field(default_factory=dict)
    tables: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    def add_input(self, role: str, name: str, digest: str) -> None:
        self.inputs[role] = {"name": name, "sha256": digest}

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def comparable(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "verdicts": self.verdicts,
            "tables": self.tables,
        }

    def to_dict(self, include_timing: bool = True) -> Dict[str, Any]:
        data = self.comparable()
        if include_timing:
            data["timing"] = self.timing
        return data

    def to_json(self, include_timing: bool = True) -> str:
        return dump_json(self.to_dict(include_timing), pretty=True)

    def render(self, console: Console) -> None:
        """Text rendering for the terminal."""
        summary = Table.grid(padding=(0, 2))
        summary.add_column(style="bold")
        summary.add_column()
        for role, ref in self.inputs.items():
            summary.add_row(role, f"{ref['name']}  [dim]{ref['sha256'][:12]}[/dim]")
        for key, text in _flatten("", self.results):
            summary.add_row(key, text)
        console.print(Panel(summary, title=f"sheafwork {self.command}", expand=False))

        for name, table in self.tables.items():
            console.print(_rich_table(name, table["columns"], table["rows"]))

        if self.verdicts:
            verdicts = Table(box=box.SIMPLE, show_header=False)
            verdicts.add_column("check")
            verdicts.add_column("verdict")
            for name, value in self.verdicts.items():
                mark = "[green]true[/green]" if value else "[red]false[/red]"
                verdicts.add_row(name, mark)
            console.print(verdicts)
        if "seconds" in self.timing:
            console.print(f"[dim]{self.timing['seconds']:.3f}s[/dim]")


def _rich_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[str]]) -> Table:
    table = Table(title=title, box=box.SIMPLE_HEAVY)
    for column in columns:
        table.add_column(column, justify="center")
    for row in rows:
        table.add_row(*row)
    return table


def print_report(report: Report, fmt: str = "text", console: Optional[Console] = None) -> None:
    """Reports go to stdout; JSON is written verbatim so it stays parseable."""
    if fmt == "json":
        typer.echo(report.to_json(), nl=False)
        return
    report.render(console or Console())


def print_error(error: SheafworkError, fmt: str = "text") -> None:
    if fmt == "json":
        typer.echo(dump_json({"error": error.to_dict()}, pretty=True), nl=False)
        return
    get_console().print(f"[bold red]Error ({error.code}):[/bold red] {error.message}", markup=True)
