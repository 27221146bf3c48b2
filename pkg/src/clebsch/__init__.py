"""Wonderful labelings of cubic graphs and maps to the projective cube PQ4.

Modules: :mod:`graphs` (graphs, cuts, girth, generators), :mod:`labeling`
(four-tuples of edge sets), :mod:`menus` (worst-menu antichains and the
computer check), :mod:`optimizer` (local improvement to a wonderful
labeling), :mod:`equivalences` (certificate forms and conversions) and
:mod:`cli`.
"""

from .graphs import Graph, girth, load_graph, read_graph
from .labeling import DEFAULT_COST, CostTable, Labeling
from .optimizer import solve

__version__ = "0.1.0"
