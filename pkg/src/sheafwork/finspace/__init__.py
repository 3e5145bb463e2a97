"""Finite T0 spaces via the specialization order."""

from sheafwork.finspace.space import DEFAULT_OPENS_CAP, Chain, FiniteSpace, OpenSet, build_space

__all__ = ["DEFAULT_OPENS_CAP", "Chain", "FiniteSpace", "OpenSet", "build_space"]
