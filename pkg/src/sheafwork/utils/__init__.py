"""Shared utility functions for sheafwork."""
