"""Four-tuples of edge sets stored edge-wise as 4-bit labels.

Coordinate ``i`` (1..4) of a label is bit ``i - 1`` of the mask, so the
symmetric difference of labels is xor and the weight is the popcount.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graphs import Graph, GraphFormatError, is_cut

FULL = 0b1111
POPCOUNT = np.array([bin(x).count("1") for x in range(16)], dtype=np.int64)


def mask_of(coords: Iterable[int]) -> int:
    """{1, 3} -> 0b0101."""
    m = 0
    for i in coords:
        if not 1 <= i <= 4:
            raise ValueError(f"coordinate {i} outside 1..4")
        m |= 1 << (i - 1)
    return m


def coords_of(mask: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(4) if mask >> i & 1)


def fmt_mask(mask: int) -> str:
    return "{" + ",".join(str(i) for i in sorted(coords_of(mask))) + "}"


@dataclass(frozen=True)
class CostTable:
    """Edge cost by weight: ``a[w]`` for w = 0..4.

    The default (0, 1, 10, 40, 1000) is the only table for which the
    optimizer's termination guarantee is claimed. ``strict=False`` admits
    tables with a(1) = 0 for experiments.
    """

    a: tuple[int, ...] = (0, 1, 10, 40, 1000)
    strict: bool = field(default=True, compare=False)

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        object.__setattr__(self, "a", a)
        if len(a) != 5:
            raise ValueError("cost table needs 5 entries a(0)..a(4)")
        if a[0] != 0:
            raise ValueError("a(0) must be 0")
        if self.strict:
            if any(a[i] >= a[i + 1] for i in range(4)):
                raise ValueError("cost table must be strictly increasing")
        elif any(a[i] > a[i + 1] for i in range(4)):
            raise ValueError("cost table must be non-decreasing")

    def __call__(self, w: int) -> int:
        return self.a[w]

    @property
    def is_default(self) -> bool:
        return self.a == DEFAULT_COST.a

    def array(self) -> np.ndarray:
        return np.array(self.a, dtype=np.int64)

    def by_mask(self) -> np.ndarray:
        """Cost of each of the 16 labels."""
        return np.array(self.a, dtype=np.int64)[POPCOUNT]

    @classmethod
    def parse(cls, text: str, strict: bool = True) -> "CostTable":
        return cls(tuple(int(x) for x in text.split(",")), strict=strict)

    def __str__(self):
        return ",".join(map(str, self.a))


DEFAULT_COST = CostTable()


class Labeling:
    """A label (4-bit mask) per edge of ``graph``."""

    __slots__ = ("graph", "masks")

    def __init__(self, graph: Graph, masks):
        masks = np.array(masks, dtype=np.uint8)
        if masks.shape != (graph.m,):
            raise ValueError(f"need {graph.m} labels, got {masks.shape}")
        if masks.size and masks.max() > FULL:
            raise ValueError("label masks must be < 16")
        self.graph = graph
        self.masks = masks

    @classmethod
    def full(cls, G: Graph) -> "Labeling":
        return cls(G, np.full(G.m, FULL, dtype=np.uint8))

    @classmethod
    def empty(cls, G: Graph) -> "Labeling":
        return cls(G, np.zeros(G.m, dtype=np.uint8))

    @classmethod
    def from_sets(cls, G: Graph, sets: Sequence[Iterable[int]]) -> "Labeling":
        if len(sets) != 4:
            raise ValueError("a labeling has exactly four edge sets")
        masks = np.zeros(G.m, dtype=np.uint8)
        for i, X in enumerate(sets):
            for e in X:
                masks[e] |= 1 << i
        return cls(G, masks)

    @classmethod
    def from_sides(cls, G: Graph, sides: Sequence[Iterable[int]]) -> "Labeling":
        """Cut complement labeling with X_i = E minus delta(U_i)."""
        vm = np.zeros(G.n, dtype=np.uint8)
        for i, U in enumerate(sides):
            for v in U:
                vm[v] |= 1 << i
        return cls(G, _complement_masks(G, vm))

    def sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(np.flatnonzero(self.masks >> i & 1).tolist()) for i in range(4))

    def copy(self) -> "Labeling":
        return Labeling(self.graph, self.masks.copy())

    def __eq__(self, other):
        return isinstance(other, Labeling) and self.graph == other.graph and np.array_equal(self.masks, other.masks)

    def __repr__(self):
        return f"Labeling({self.graph!r}, cost={cost(self)})"


def _complement_masks(G: Graph, vertex_masks: np.ndarray) -> np.ndarray:
    if G.m == 0:
        return np.zeros(0, dtype=np.uint8)
    ends = np.asarray(G.edges, dtype=np.int64)
    return (FULL ^ (vertex_masks[ends[:, 0]] ^ vertex_masks[ends[:, 1]])).astype(np.uint8)


def weight(X: Labeling, e: int) -> int:
    return int(POPCOUNT[X.masks[e]])


def cost_edge(X: Labeling, e: int, a: CostTable = DEFAULT_COST) -> int:
    return a(weight(X, e))


def cost(X: Labeling, a: CostTable = DEFAULT_COST) -> int:
    return int(a.by_mask()[X.masks].sum())


def delta(X: Labeling, Y: Labeling) -> Labeling:
    if X.graph != Y.graph:
        raise ValueError("labelings live on different graphs")
    return Labeling(X.graph, X.masks ^ Y.masks)


def is_wonderful(X: Labeling) -> bool:
    return bool((POPCOUNT[X.masks] <= 1).all())


@dataclass(frozen=True)
class LabelingCheck:
    """Result of a cut / cut-complement recognition.

    ``sides`` holds the witnesses U_1..U_4 on success; otherwise
    ``coordinate`` is the first failing coordinate and ``odd_cycle`` its
    refutation.
    """

    ok: bool
    sides: tuple[frozenset[int], ...] = ()
    coordinate: int = 0
    odd_cycle: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


def _check(X: Labeling, complement: bool) -> LabelingCheck:
    sides = []
    for i in range(4):
        coord = (X.masks >> i & 1).astype(bool)
        res = is_cut(X.graph, ~coord if complement else coord)
        if not res.ok:
            return LabelingCheck(False, coordinate=i + 1, odd_cycle=res.odd_cycle)
        sides.append(res.side)
    return LabelingCheck(True, tuple(sides))


def is_cut_labeling(X: Labeling) -> LabelingCheck:
    return _check(X, complement=False)


def is_cut_complement_labeling(X: Labeling) -> LabelingCheck:
    return _check(X, complement=True)


def _perm_table(pi: Mapping[int, int] | Sequence[int]) -> np.ndarray:
    if not isinstance(pi, Mapping):
        pi = {i + 1: int(p) for i, p in enumerate(pi)}
    if sorted(pi) != [1, 2, 3, 4] or sorted(pi.values()) != [1, 2, 3, 4]:
        raise ValueError(f"not a permutation of 1..4: {pi}")
    table = np.zeros(16, dtype=np.uint8)
    for m in range(16):
        table[m] = mask_of(pi[i] for i in coords_of(m))
    return table


def permute_mask(mask: int, pi) -> int:
    return int(_perm_table(pi)[mask])


def permute_coordinates(X: Labeling, pi) -> Labeling:
    """Rename coordinate i to pi(i) in every label.

    ``pi`` is a mapping {1..4} -> {1..4} or the sequence (pi(1), .., pi(4)).
    """
    return Labeling(X.graph, _perm_table(pi)[X.masks])


def residual(X: Labeling) -> frozenset[int]:
    """Edges carrying the empty label."""
    return frozenset(np.flatnonzero(X.masks == 0).tolist())


# --------------------------------------------------------------------------
# file format: "u v mask" per edge, optional "U<i>: v ..." witness lines


def dump_labeling(X: Labeling, sides: Sequence[Iterable[int]] | None = None) -> str:
    out = [f"{u} {v} {int(m)}" for (u, v), m in zip(X.graph.edges, X.masks)]
    if sides is not None:
        for i, U in enumerate(sides, 1):
            out.append(f"U{i}: " + " ".join(map(str, sorted(U))))
    return "\n".join(out) + "\n"


def load_labeling(G: Graph, text: str) -> tuple[Labeling, list[frozenset[int]] | None]:
    masks = np.zeros(G.m, dtype=np.uint8)
    given = np.zeros(G.m, dtype=bool)
    sides: dict[int, frozenset[int]] = {}
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if not ln or ln.startswith("#"):
            continue
        if ln.startswith("U"):
            idx, sides[idx] = _parse_side_line(ln, no, G.n)
            continue
        parts = ln.split()
        if len(parts) != 3:
            raise GraphFormatError("expected 'u v mask'", no)
        try:
            u, v, m = map(int, parts)
        except ValueError:
            raise GraphFormatError("labeling fields must be integers", no) from None
        if not 0 <= m <= FULL:
            raise GraphFormatError(f"mask {m} outside 0..15", no)
        try:
            e = G.edge_id(u, v)
        except KeyError:
            raise GraphFormatError(f"({u}, {v}) is not an edge of the graph", no) from None
        if given[e]:
            raise GraphFormatError(f"edge ({u}, {v}) labeled twice", no)
        given[e] = True
        masks[e] = m
    if not given.all():
        e = int(np.flatnonzero(~given)[0])
        raise GraphFormatError(f"edge {G.edges[e]} has no label")
    witness = [sides[i] for i in sorted(sides)] if sides else None
    return Labeling(G, masks), witness


def _parse_side_line(ln: str, no: int, n: int) -> tuple[int, frozenset[int]]:
    head, _, rest = ln.partition(":")
    try:
        idx = int(head[1:])
        verts = frozenset(int(x) for x in rest.split())
    except ValueError:
        raise GraphFormatError("expected 'U<i>: v v ...'", no) from None
    if any(not 0 <= v < n for v in verts):
        raise GraphFormatError("vertex out of range in vertex set", no)
    return idx, verts

