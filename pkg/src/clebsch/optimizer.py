"""Local improvement of cut complement labelings towards a wonderful one.

Start from (E, E, E, E) and repeatedly remove a bad edge (weight > 1) by
xoring in a cut labeling supported near it:

* weight >= 3: switch a subset of coordinates at one endpoint;
* weight 2: an internal swap on the depth-9 doubled tree around the edge,
  found by exact menu DP on the three subtrees meeting at an endpoint.

Every step lowers the cost by at least 1, so at most a(4)*|E| steps run.
Each vertex carries a 4-bit mask recording its side in U_1..U_4, where
X_i = E minus delta(U_i); the label of uv is always ~(mask[u] ^ mask[v]).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from .graphs import Graph, is_cycle, shortest_cycle
from .labeling import (
    DEFAULT_COST,
    FULL,
    POPCOUNT,
    CostTable,
    Labeling,
    _complement_masks,
    cost,
    fmt_mask,
    is_cut_complement_labeling,
    permute_mask,
)
from .menus import _tree_dp, swap_memberships

TREE_DEPTH = 9


class StuckError(RuntimeError):
    """No improving local swap exists around an edge."""

    def __init__(self, edge: int, reason: str, cycle: list[int] | None = None):
        super().__init__(f"edge {edge}: {reason}")
        self.edge = edge
        self.reason = reason
        self.cycle = cycle


@dataclass
class Repair:
    """A cut labeling Y = (delta(Z_1), .., delta(Z_4)) found around ``edge``.

    ``vertex_masks[v]`` is the set of i with v in Z_i; ``edge_changes[e]``
    the mask xored into the label of e. ``delta`` is cost(X ^ Y) - cost(X).
    """

    edge: int
    kind: str
    center: int
    switch: int
    delta: int
    vertex_masks: dict[int, int]
    edge_changes: dict[int, int]
    depth: int = 0

    def as_labeling(self, G: Graph) -> Labeling:
        masks = np.zeros(G.m, dtype=np.uint8)
        for e, ch in self.edge_changes.items():
            masks[e] = ch
        return Labeling(G, masks)


def initial_labeling(G: Graph) -> Labeling:
    return Labeling.full(G)


# --------------------------------------------------------------------------
# weight >= 3


def fix_heavy_edge(G: Graph, X: Labeling, e: int, a: CostTable = DEFAULT_COST) -> Repair:
    """Best single-vertex switch at an endpoint of a heavy edge.

    All 15 nonempty switch sets at both endpoints are scored; the strictly
    best improvement wins, ties going to the smaller mask, then to the
    smaller endpoint.
    """
    if POPCOUNT[X.masks[e]] < 3:
        raise ValueError(f"edge {e} has weight < 3")
    c = a.by_mask()
    best = None
    for x in sorted(G.edges[e]):
        inc = [f for _, f in G.adjacency[x]]
        if len(inc) > 3:
            raise ValueError(f"vertex {x} has degree > 3")
        labels = X.masks[inc].astype(np.int64)
        before = int(c[labels].sum())
        for I in range(1, 16):
            d = int(c[labels ^ I].sum()) - before
            if best is None or (d, I) < (best[0], best[1]):
                best = (d, I, x, inc)
    d, I, x, inc = best
    if d >= 0:
        raise StuckError(e, "no improving switch at a heavy edge (cost table?)")
    return Repair(e, "heavy", x, I, d, {x: I}, {f: I for f in inc}, 1)


def star_switch(A: int, B: int, C: int, a: CostTable = DEFAULT_COST) -> tuple[int, int]:
    """Best switch at the centre of a star with labels A, B, C: (delta, mask)."""
    c = a.by_mask()
    before = c[A] + c[B] + c[C]
    return min((int(c[A ^ I] + c[B ^ I] + c[C ^ I] - before), I) for I in range(1, 16))


# --------------------------------------------------------------------------
# embedding the doubled tree


@nb.njit(cache=True)
def _extract(indptr, nbr, eid, center, central, depth, owner_t, owner_k, touched):
    """Lay out the three trees meeting at ``center`` in heap order.

    Tree 0 is T_depth whose root edge is ``central``; trees 1 and 2 are the
    T_(depth-1) on the other two edges at ``center``. Fills ``edges`` and
    ``lower`` (3 x 2^depth). Status: 0 ok, 1 two occurrences of one vertex
    where at least one is interior (returns both), 2 interior vertex whose
    degree is not 3.
    """
    size = 1 << depth
    edges = np.full((3, size), -1, dtype=np.int64)
    lower = np.full((3, size), -1, dtype=np.int64)
    info = np.full(5, -1, dtype=np.int64)
    ntouched = 0
    if indptr[center + 1] - indptr[center] != 3:
        info[0] = 2
        info[1] = center
        return edges, lower, info, ntouched
    owner_t[center] = 3
    owner_k[center] = 0
    touched[ntouched] = center
    ntouched += 1
    j = 1
    for p in range(indptr[center], indptr[center + 1]):
        if eid[p] == central:
            edges[0, 1] = eid[p]
            lower[0, 1] = nbr[p]
        else:
            edges[j, 1] = eid[p]
            lower[j, 1] = nbr[p]
            j += 1
    # level by level so the first collision is a shortest one
    for level in range(1, depth + 1):
        for t in range(3):
            d = depth if t == 0 else depth - 1
            if level > d:
                continue
            first_leaf = 1 << (d - 1)
            for k in range(1 << (level - 1), 1 << level):
                x = lower[t, k]
                leaf = k >= first_leaf
                if owner_t[x] >= 0:
                    ot = owner_t[x]
                    ok_ = owner_k[x]
                    o_leaf = ot < 3 and ok_ >= (1 << ((depth if ot == 0 else depth - 1) - 1))
                    if not (leaf and o_leaf):
                        info[0] = 1
                        info[1] = ot
                        info[2] = ok_
                        info[3] = t
                        info[4] = k
                        return edges, lower, info, ntouched
                    continue
                owner_t[x] = t
                owner_k[x] = k
                touched[ntouched] = x
                ntouched += 1
                if leaf:
                    continue
                if indptr[x + 1] - indptr[x] != 3:
                    info[0] = 2
                    info[1] = x
                    return edges, lower, info, ntouched
                c = 2 * k
                for p in range(indptr[x], indptr[x + 1]):
                    if eid[p] != edges[t, k]:
                        edges[t, c] = eid[p]
                        lower[t, c] = nbr[p]
                        c += 1
    info[0] = 0
    return edges, lower, info, ntouched


@dataclass
class TreeEmbedding:
    """Three heap-ordered trees meeting at ``center``.

    ``edges[t][k]`` / ``lower[t][k]`` give the graph edge and lower vertex of
    heap edge k of tree t (index 0 unused). Tree 0 is T_depth and contains
    the central edge as its root edge; trees 1 and 2 are T_(depth-1).
    """

    center: int
    central_edge: int
    depth: int
    edges: np.ndarray
    lower: np.ndarray

    def tree_depth(self, t: int) -> int:
        return self.depth if t == 0 else self.depth - 1

    def interior(self) -> list[int]:
        out = [self.center]
        for t in range(3):
            out += self.lower[t, 1 : 2 ** (self.tree_depth(t) - 1)].tolist()
        return out

    def tree_edges(self) -> list[int]:
        out = []
        for t in range(3):
            out += self.edges[t, 1 : 2 ** self.tree_depth(t)].tolist()
        return out


class EmbeddingError(RuntimeError):
    def __init__(self, message: str, cycle: list[int] | None = None, vertex: int | None = None):
        super().__init__(message)
        self.cycle = cycle
        self.vertex = vertex


class _Scratch:
    """Per-graph work arrays reused across extractions."""

    def __init__(self, n: int):
        self.owner_t = np.full(n, -1, dtype=np.int64)
        self.owner_k = np.full(n, -1, dtype=np.int64)
        self.touched = np.empty(n, dtype=np.int64)


def _embed(G: Graph, center: int, e: int, depth: int, scratch: _Scratch | None = None) -> TreeEmbedding:
    scratch = scratch or _Scratch(G.n)
    indptr, nbr, eid = G.csr()
    edges, lower, info, nt = _extract(indptr, nbr, eid, center, e, depth, scratch.owner_t, scratch.owner_k, scratch.touched)
    touched = scratch.touched[:nt]
    scratch.owner_t[touched] = -1
    scratch.owner_k[touched] = -1
    status = int(info[0])
    if status == 2:
        raise EmbeddingError(f"interior vertex {int(info[1])} does not have degree 3", vertex=int(info[1]))
    if status == 1:
        cycle = _collision_cycle(G, center, lower, (int(info[1]), int(info[2])), (int(info[3]), int(info[4])))
        raise EmbeddingError(f"tree around edge {e} folds onto a cycle of length {len(cycle)}", cycle=cycle)
    return TreeEmbedding(center, e, depth, edges, lower)


def _collision_cycle(G: Graph, center: int, lower: np.ndarray, occ1, occ2) -> list[int]:
    def chain(occ):
        t, k = occ
        if t == 3:
            return [(3, 0)]
        out = []
        while k >= 1:
            out.append((t, k))
            k //= 2
        return [(3, 0)] + out[::-1]

    def vert(o):
        return center if o[0] == 3 else int(lower[o[0], o[1]])

    c1, c2 = chain(occ1), chain(occ2)
    i = 0
    while i < min(len(c1), len(c2)) and c1[i] == c2[i]:
        i += 1
    a = [vert(o) for o in c1[i - 1 :]]
    b = [vert(o) for o in c2[i:-1]]
    cycle = a + b[::-1]
    if is_cycle(G, cycle):
        return cycle
    # not expected with level-order detection; fall back to a search nearby
    return shortest_cycle(G, near=set(cycle)) or cycle


def extract_2T9(G: Graph, e: int, depth: int = TREE_DEPTH, center: int | None = None) -> TreeEmbedding:
    """Embed 2T_depth with central edge ``e``, viewed from one endpoint.

    Raises :class:`EmbeddingError` carrying a short cycle when two interior
    vertices (or an interior vertex and a leaf) coincide, which needs
    girth <= 2*depth - 2.
    """
    if center is None:
        center = G.edges[e][0]
    elif center not in G.edges[e]:
        raise ValueError(f"{center} is not an end of edge {e}")
    return _embed(G, center, e, depth)


# --------------------------------------------------------------------------
# weight 2


def _normalizer(label: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # permutation taking the two coordinates of ``label`` to 1, 2
    ins = sorted(i + 1 for i in range(4) if label >> i & 1)
    outs = sorted(i + 1 for i in range(4) if not label >> i & 1)
    pi = {c: j + 1 for j, c in enumerate(ins + outs)}
    fwd = tuple(pi[i] for i in range(1, 5))
    inv = {v: k for k, v in pi.items()}
    back = tuple(inv[i] for i in range(1, 5))
    return fwd, back


def _perm_lut(pi) -> np.ndarray:
    return np.array([permute_mask(m, pi) for m in range(16)], dtype=np.int64)


def _best_swap(emb: TreeEmbedding, masks: np.ndarray, cost_by_mask: np.ndarray, lut: np.ndarray):
    menus = []
    choices = []
    for t in range(3):
        d = emb.tree_depth(t)
        labels = lut[masks[emb.edges[t, 1 : 2**d]]]
        choice = np.zeros((2**d - 1, 16), dtype=np.int8)
        menus.append(_tree_dp(labels, cost_by_mask, d, choice))
        choices.append(choice)
    total = menus[0] + menus[1] + menus[2]
    S = int(np.argmin(total))
    return int(total[S]), S, menus, choices


def fix_weight2_edge(
    G: Graph,
    X: Labeling,
    e: int,
    a: CostTable = DEFAULT_COST,
    depth: int = TREE_DEPTH,
    scratch: _Scratch | None = None,
) -> Repair:
    """Cheapest internal swap on the doubled tree around a weight-2 edge.

    The labels are renamed so that ``e`` carries {1, 2}; at each endpoint
    the menus of the three subtrees meeting there are computed exactly and
    the S minimising their sum is taken. Raises :class:`StuckError` when no
    swap has negative total and :class:`EmbeddingError` when the tree does
    not embed.
    """
    label = int(X.masks[e])
    if POPCOUNT[label] != 2:
        raise ValueError(f"edge {e} does not have weight 2")
    fwd, back = _normalizer(label)
    lut, unlut = _perm_lut(fwd), _perm_lut(back)
    c = a.by_mask()
    scratch = scratch or _Scratch(G.n)
    best = None
    for center in sorted(G.edges[e]):
        emb = _embed(G, center, e, depth, scratch)
        total, S, menus, choices = _best_swap(emb, X.masks, c, lut)
        if best is None or total < best[0]:
            best = (total, S, emb, choices)
    total, S, emb, choices = best
    if total >= 0:
        raise StuckError(e, f"no negative internal swap on 2T{depth}")
    vertex_masks = {emb.center: int(unlut[S])}
    edge_changes = {}
    for t in range(3):
        d = emb.tree_depth(t)
        z = swap_memberships(d, choices[t], S)
        for k in range(1, 2**d):
            ch = int(z[k // 2 if k > 1 else 0] ^ z[k])
            if ch:
                edge_changes[int(emb.edges[t, k])] = int(unlut[ch])
            if z[k]:
                vertex_masks[int(emb.lower[t, k])] = int(unlut[z[k]])
    return Repair(e, "weight2", emb.center, int(unlut[S]), total, vertex_masks, edge_changes, depth)


# --------------------------------------------------------------------------
# the main loop


class Worklist:
    """Bad edges, heavy ones (weight >= 3) served before weight-2 ones.

    Within a class the lowest edge id comes first. Heaps use lazy deletion.
    """

    def __init__(self, weights: np.ndarray):
        self.level = np.zeros(len(weights), dtype=np.int8)
        self._heaps: tuple[list[int], list[int]] = ([], [])
        self._count = 0
        for e in np.flatnonzero(weights > 1).tolist():
            self.update(e, int(weights[e]))

    @staticmethod
    def _level(w: int) -> int:
        return 0 if w <= 1 else (1 if w == 2 else 2)

    def update(self, e: int, w: int) -> None:
        lvl = self._level(w)
        old = int(self.level[e])
        if lvl == old:
            return
        self._count += (lvl > 0) - (old > 0)
        self.level[e] = lvl
        if lvl:
            heapq.heappush(self._heaps[lvl - 1], e)

    def pick(self) -> int | None:
        for lvl in (2, 1):
            heap = self._heaps[lvl - 1]
            while heap:
                e = heap[0]
                if self.level[e] == lvl:
                    return e
                heapq.heappop(heap)
        return None

    def __len__(self):
        return self._count

    def __contains__(self, e):
        return bool(self.level[e])

    def members(self) -> set[int]:
        return set(np.flatnonzero(self.level).tolist())


@dataclass
class Step:
    index: int
    edge: int
    kind: str
    center: int
    switch: int
    delta: int
    cost: int
    depth: int

    def line(self) -> str:
        return f"{self.index} {self.edge} {self.kind} {self.center} {fmt_mask(self.switch)} {self.delta} {self.cost} {self.depth}"


@dataclass
class SolveReport:
    labeling: Labeling
    vertex_masks: np.ndarray
    outcome: str  # "wonderful", "stuck" or "budget"
    iterations: int
    trace: list[int]
    steps: list[Step] = field(default_factory=list)
    stuck_edge: int | None = None
    reason: str = ""
    cycle: list[int] | None = None

    @property
    def wonderful(self) -> bool:
        return self.outcome == "wonderful"

    def sides(self) -> tuple[frozenset[int], ...]:
        """U_1..U_4 with X_i = E minus delta(U_i)."""
        return tuple(frozenset(np.flatnonzero(self.vertex_masks >> i & 1).tolist()) for i in range(4))

    def trace_text(self) -> str:
        head = "# step edge kind center switch delta cost depth\n"
        body = "".join(s.line() + "\n" for s in self.steps)
        return head + f"# initial cost {self.trace[0]}\n" + body + f"# outcome {self.outcome}\n"


def solve(
    G: Graph,
    a: CostTable = DEFAULT_COST,
    initial: Labeling | None = None,
    max_iters: int | None = None,
    depth: int = TREE_DEPTH,
    adaptive: bool = False,
    check_steps: bool = False,
) -> SolveReport:
    """Drive a cut complement labeling of a cubic graph to a wonderful one.

    With ``adaptive`` a weight-2 edge whose depth-``depth`` tree does not
    embed is retried on shallower trees; without it (and on failure) the
    run stops with outcome "stuck" and the short cycle found.
    ``check_steps`` re-verifies the cut complement property after every
    step (slow).
    """
    if not G.is_cubic():
        raise ValueError("solve needs a cubic graph; pad subcubic graphs with cubic_completion")
    if initial is None:
        X = initial_labeling(G)
        vmask = np.zeros(G.n, dtype=np.uint8)
    else:
        X = initial.copy()
        chk = is_cut_complement_labeling(X)
        if not chk:
            raise ValueError(f"initial labeling is not a cut complement labeling (coordinate {chk.coordinate})")
        vmask = np.zeros(G.n, dtype=np.uint8)
        for i, U in enumerate(chk.sides):
            for v in U:
                vmask[v] |= 1 << i
    limit = a(4) * G.m if max_iters is None else max_iters
    cost_now = cost(X, a)
    trace = [cost_now]
    steps: list[Step] = []
    wl = Worklist(POPCOUNT[X.masks])
    scratch = _Scratch(G.n)
    c = a.by_mask()
    it = 0
    outcome, stuck_edge, reason, cycle = "budget", None, "", None
    while True:
        e = wl.pick()
        if e is None:
            outcome = "wonderful"
            break
        if it >= limit:
            break
        w = int(POPCOUNT[X.masks[e]])
        try:
            if w >= 3:
                rep = fix_heavy_edge(G, X, e, a)
            else:
                rep = _fix_weight2_adaptive(G, X, e, a, depth, adaptive, scratch)
        except StuckError as err:
            outcome, stuck_edge, reason, cycle = "stuck", e, err.reason, err.cycle
            break
        changed = np.fromiter(rep.edge_changes, dtype=np.int64, count=len(rep.edge_changes))
        before = int(c[X.masks[changed]].sum())
        X.masks[changed] ^= np.fromiter(rep.edge_changes.values(), dtype=np.uint8, count=len(changed))
        after = int(c[X.masks[changed]].sum())
        if after - before != rep.delta or rep.delta >= 0:
            raise AssertionError(f"step {it}: predicted change {rep.delta}, actual {after - before}")
        for v, z in rep.vertex_masks.items():
            vmask[v] ^= z
        for f in changed.tolist():
            wl.update(f, int(POPCOUNT[X.masks[f]]))
        cost_now += rep.delta
        it += 1
        trace.append(cost_now)
        steps.append(Step(it, e, rep.kind, rep.center, rep.switch, rep.delta, cost_now, rep.depth))
        if check_steps:
            _check_state(X, vmask, wl)
    return SolveReport(X, vmask, outcome, it, trace, steps, stuck_edge, reason, cycle)


def _fix_weight2_adaptive(G, X, e, a, depth, adaptive, scratch) -> Repair:
    try:
        return fix_weight2_edge(G, X, e, a, depth, scratch)
    except EmbeddingError as err:
        if not adaptive:
            raise StuckError(e, str(err), err.cycle) from None
        first = err
    for d in range(depth - 1, 1, -1):
        try:
            return fix_weight2_edge(G, X, e, a, d, scratch)
        except EmbeddingError:
            continue
        except StuckError:
            break
    raise StuckError(e, f"{first}; no improving swap on shallower trees", first.cycle)


def _check_state(X: Labeling, vmask: np.ndarray, wl: Worklist) -> None:
    G = X.graph
    if not np.array_equal(X.masks, _complement_masks(G, vmask)):
        raise AssertionError("labels drifted from the tracked sides")
    if not is_cut_complement_labeling(X):
        raise AssertionError("labeling is no longer a cut complement labeling")
    if wl.members() != set(np.flatnonzero(POPCOUNT[X.masks] > 1).tolist()):
        raise AssertionError("worklist out of sync")


def edge_distance(G: Graph, e: int, f: int) -> float:
    """Number of edges on a shortest path joining an end of e to an end of f, plus 1 (0 if e == f)."""
    if e == f:
        return 0
    src = set(G.edges[e])
    dst = set(G.edges[f])
    if src & dst:
        return 1
    seen = {v: 0 for v in src}
    frontier = list(src)
    while frontier:
        nxt = []
        for u in frontier:
            for w, _ in G.adjacency[u]:
                if w not in seen:
                    seen[w] = seen[u] + 1
                    if w in dst:
                        return seen[w] + 1
                    nxt.append(w)
        frontier = nxt
    return math.inf
