"""Canonical workspace files and the bundled example corpus."""

from sheafwork.workspace import corpus
from sheafwork.workspace.loader import (
    FORMAT_VERSION,
    KINDS,
    WorkspaceFile,
    digest,
    dump_workspace,
    from_payload,
    load_workspace,
    parse_workspace,
    to_payload,
)

__all__ = [
    "FORMAT_VERSION",
    "KINDS",
    "WorkspaceFile",
    "corpus",
    "digest",
    "dump_workspace",
    "from_payload",
    "load_workspace",
    "parse_workspace",
    "to_payload",
]
