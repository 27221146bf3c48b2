"""The rooted trees T_i and the doubled trees 2T_i.

Edges of T_i are numbered in heap order: edge 1 is the root edge, and the
two edges below edge ``k`` are ``2k`` and ``2k + 1``. Vertex 0 is the root
and vertex ``k`` is the lower end of edge ``k``. Arrays indexed by edge use
position ``k - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .graphs import Graph


@dataclass(frozen=True)
class RootedTree:
    depth: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("tree depth must be >= 1")

    @property
    def num_edges(self) -> int:
        return 2**self.depth - 1

    @property
    def first_leaf_edge(self) -> int:
        return 2 ** (self.depth - 1)

    def is_leaf_edge(self, k: int) -> bool:
        return k >= self.first_leaf_edge

    @staticmethod
    def upper(k: int) -> int:
        return k // 2 if k > 1 else 0

    @cached_property
    def interior(self) -> tuple[int, ...]:
        """Root plus the degree-3 vertices."""
        return (0,) + tuple(range(1, self.first_leaf_edge))

    @cached_property
    def graph(self) -> Graph:
        # edge id k - 1 is heap edge k
        return Graph(self.num_edges + 1, [(self.upper(k), k) for k in range(1, self.num_edges + 1)])


def double_tree(depth: int) -> tuple[Graph, int]:
    """2T_depth as a graph, with the id of its central edge.

    Vertices 0 and 1 are the ends of the central edge (edge id 0); each has
    two copies of T_{depth-1} hanging below it.
    """
    if depth < 2:
        raise ValueError("2T_i needs i >= 2")
    edges = [(0, 1)]
    nxt = 2
    frontier = [(0, depth - 1), (0, depth - 1), (1, depth - 1), (1, depth - 1)]
    while frontier:
        parent, d = frontier.pop(0)
        child = nxt
        nxt += 1
        edges.append((parent, child))
        if d > 1:
            frontier.append((child, d - 1))
            frontier.append((child, d - 1))
    return Graph(nxt, edges), 0
