"""Shared errors, reports and the command pipeline."""
