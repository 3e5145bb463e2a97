"""Finite T0 spaces stored as their specialization order.

Convention: p ⪯ q means U_p ⊆ U_q, where U_p is the minimal open
neighbourhood of p. Open sets are the down-closed subsets, and
U_p = {q : q ⪯ p}. The order is kept as a networkx DAG with an edge
p → q for every declared p ⪯ q (p ≠ q).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx

from sheafwork.core.errors import NotAntisymmetric, NotOpen, SchemaError, TooManyOpens, UnknownPoint

logger = logging.getLogger(__name__)

DEFAULT_OPENS_CAP = 4096


class _Overflow(Exception):
    pass


@dataclass(frozen=True)
class OpenSet:
    """A down-closed subset of a space. Compared by members only."""

    space: "FiniteSpace" = field(compare=False, repr=False)
    members: frozenset[str]

    @property
    def points(self) -> tuple[str, ...]:
        """Members in the space's point order."""
        return tuple(p for p in self.space.points if p in self.members)

    def __contains__(self, point: str) -> bool:
        return point in self.members

    def __iter__(self) -> Iterator[str]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.members)

    def issubset(self, other: "OpenSet") -> bool:
        return self.members <= other.members

    def label(self) -> str:
        return "{" + ",".join(self.points) + "}"


Chain = tuple[str, ...]


class FiniteSpace:
    """A finite T0 space; build with ``build_space``."""

    def __init__(self, name: str, points: Sequence[str], graph: nx.DiGraph):
        self.name = name
        self.points: tuple[str, ...] = tuple(points)
        self._index = {p: i for i, p in enumerate(self.points)}
        self._graph = graph
        closure = nx.transitive_closure_dag(graph)
        self._below = {
            p: frozenset(closure.predecessors(p)) | {p} for p in self.points
        }
        self._above = {
            p: frozenset(closure.successors(p)) | {p} for p in self.points
        }
        reduction = nx.transitive_reduction(graph)
        self._covers = tuple(
            sorted(reduction.edges(), key=lambda e: (self._index[e[1]], self._index[e[0]]))
        )

    def __repr__(self) -> str:
        return f"FiniteSpace(name={self.name!r}, points={list(self.points)!r})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.points == other.points and self._below == other._below

    def __hash__(self) -> int:
        return hash((self.points, tuple(self._below[p] for p in self.points)))

    # order

    def check_point(self, p: str) -> str:
        if p not in self._index:
            raise UnknownPoint(p, self.name)
        return p

    def index(self, p: str) -> int:
        return self._index[self.check_point(p)]

    def leq(self, p: str, q: str) -> bool:
        """p ⪯ q, i.e. U_p ⊆ U_q."""
        return self.check_point(p) in self._below[self.check_point(q)]

    def below(self, p: str) -> frozenset[str]:
        return self._below[self.check_point(p)]

    def closure(self, p: str) -> frozenset[str]:
        """Closure of {p}: all q with p ⪯ q."""
        return self._above[self.check_point(p)]

    @property
    def covering_pairs(self) -> tuple[tuple[str, str], ...]:
        """Pairs (q, p) with q ⋖ p, ordered by p then q."""
        return self._covers

    def comparable_pairs(self) -> list[tuple[str, str]]:
        """Pairs (q, p) with q ≺ p, ordered by p then q."""
        return [
            (q, p)
            for p in self.points
            for q in self.points
            if q != p and q in self._below[p]
        ]

    def strictly_between(self, q: str, p: str) -> list[str]:
        """Points m with q ≺ m ≺ p, in point order."""
        return [
            m for m in self.points
            if m not in (q, p) and m in self._below[p] and q in self._below[m]
        ]

    @cached_property
    def height(self) -> int:
        """Length of the longest strict chain."""
        return nx.dag_longest_path_length(self._graph) if self.points else 0

    # opens

    def minimal_open(self, p: str) -> OpenSet:
        return OpenSet(self, self._below[self.check_point(p)])

    def is_open(self, members: Iterable[str]) -> bool:
        members = frozenset(members)
        for p in members:
            self.check_point(p)
        return all(self._below[p] <= members for p in members)

    def open_set(self, members: Iterable[str]) -> OpenSet:
        members = frozenset(members)
        if not self.is_open(members):
            raise NotOpen(
                f"{sorted(members, key=self._index.get)} is not down-closed in '{self.name}'",
                members=sorted(members, key=self._index.get),
            )
        return OpenSet(self, members)

    @property
    def whole(self) -> OpenSet:
        return OpenSet(self, frozenset(self.points))

    @property
    def empty(self) -> OpenSet:
        return OpenSet(self, frozenset())

    def _topological_order(self) -> list[str]:
        return list(nx.lexicographical_topological_sort(self._graph, key=self._index.get))

    def _walk_opens(self, order: list[str], visit) -> None:
        current: set[str] = set()

        def extend(i: int) -> None:
            if i == len(order):
                visit(current)
                return
            p = order[i]
            extend(i + 1)
            if self._below[p] - {p} <= current:
                current.add(p)
                extend(i + 1)
                current.discard(p)

        extend(0)

    def count_opens(self, limit: int | None = None) -> int:
        """Number of open sets, or limit + 1 once the count passes ``limit``."""
        count = 0

        def visit(_members) -> None:
            nonlocal count
            count += 1
            if limit is not None and count > limit:
                raise _Overflow

        try:
            self._walk_opens(self._topological_order(), visit)
        except _Overflow:
            pass
        return count

    def enumerate_opens(self, cap: int = DEFAULT_OPENS_CAP) -> list[OpenSet]:
        """All open sets, ordered by size then by sorted member indices."""
        found: list[frozenset[str]] = []

        def visit(members) -> None:
            found.append(frozenset(members))
            if len(found) > cap:
                raise _Overflow

        try:
            self._walk_opens(self._topological_order(), visit)
        except _Overflow:
            raise TooManyOpens(len(found), cap, exact=False)
        found.sort(key=lambda m: (len(m), sorted(self._index[p] for p in m)))
        logger.debug(f"Space '{self.name}' has {len(found)} open sets")
        return [OpenSet(self, m) for m in found]

    # chains

    def chains(self, k: int) -> list[Chain]:
        """Strict chains p_0 ≺ … ≺ p_k in lexicographic point order."""
        if k < 0:
            return []
        result: list[Chain] = []

        def grow(chain: list[str]) -> None:
            if len(chain) == k + 1:
                result.append(tuple(chain))
                return
            last = chain[-1]
            for q in self.points:
                if q != last and q in self._above[last]:
                    chain.append(q)
                    grow(chain)
                    chain.pop()

        for p in self.points:
            grow([p])
        return result


def build_space(
    points: Sequence[str], leq_pairs: Iterable[Sequence[str]], name: str = "space"
) -> FiniteSpace:
    """Build a finite T0 space from generating pairs (p, q) meaning p ⪯ q."""
    points = [str(p) for p in points]
    if len(set(points)) != len(points):
        raise SchemaError(f"Space '{name}' declares a point twice", path="$.points")
    graph = nx.DiGraph()
    graph.add_nodes_from(points)
    known = set(points)
    for pair in leq_pairs:
        p, q = pair
        for point in (p, q):
            if point not in known:
                raise UnknownPoint(point, name)
        if p != q:
            graph.add_edge(p, q)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _ in nx.find_cycle(graph)]
        raise NotAntisymmetric(
            f"Order on '{name}' is not antisymmetric (space is not T0): cycle {' ⪯ '.join(cycle + cycle[:1])}",
            cycle=cycle,
        )
    space = FiniteSpace(name, points, graph)
    logger.debug(f"Built space '{name}' with {len(points)} points, height {space.height}")
    return space
