"""Simple undirected graphs with dense integer vertex and edge ids.

Edge ids are the positions in ``Graph.edges`` and never change, so edge sets
and labelings of the same graph can be compared and xor-ed directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numba as nb
import numpy as np

INF = math.inf


class GraphFormatError(ValueError):
    """Malformed graph text; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class Graph:
    """Immutable simple graph.

    ``edges[e] = (u, v)`` with ``u < v``. ``names`` optionally carries an
    integer name per vertex (binary vectors for the cube-like graphs).
    """

    __slots__ = ("n", "edges", "names", "_adj", "_csr", "_index")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], names: Sequence[int] | None = None):
        if n < 0:
            raise ValueError("negative vertex count")
        norm = []
        seen = set()
        for i, (u, v) in enumerate(edges):
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {i} ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"edge {i} is a loop at {u}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            norm.append((u, v))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(norm)
        self.names = tuple(names) if names is not None else None
        if self.names is not None and len(self.names) != n:
            raise ValueError("names must have one entry per vertex")
        self._adj = None
        self._csr = None
        self._index = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    @property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per vertex, the ``(neighbour, edge id)`` pairs in edge-id order."""
        if self._adj is None:
            adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
            for e, (u, v) in enumerate(self.edges):
                adj[u].append((v, e))
                adj[v].append((u, e))
            self._adj = tuple(tuple(a) for a in adj)
        return self._adj

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbours, edge ids)`` arrays for the compiled kernels."""
        if self._csr is None:
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            deg = np.fromiter((len(a) for a in self.adjacency), dtype=np.int64, count=self.n)
            indptr[1:] = np.cumsum(deg)
            nbr = np.empty(2 * self.m, dtype=np.int64)
            eid = np.empty(2 * self.m, dtype=np.int64)
            k = 0
            for a in self.adjacency:
                for w, e in a:
                    nbr[k] = w
                    eid[k] = e
                    k += 1
            self._csr = (indptr, nbr, eid)
        return self._csr

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def is_cubic(self) -> bool:
        return all(len(a) == 3 for a in self.adjacency)

    def edge_id(self, u: int, v: int) -> int:
        if self._index is None:
            self._index = {uv: e for e, uv in enumerate(self.edges)}
        key = (u, v) if u < v else (v, u)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"no edge ({u}, {v})") from None

    def has_edge(self, u: int, v: int) -> bool:
        try:
            self.edge_id(u, v)
        except KeyError:
            return False
        return True

    def neighbors(self, v: int) -> list[int]:
        return [w for w, _ in self.adjacency[v]]

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                u = stack.pop()
                for w, _ in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


# --------------------------------------------------------------------------
# text formats


def load_graph(text: str) -> Graph:
    """Parse an edge list ("n m" then m lines "u v") or a graph6 string."""
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    body = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not body:
        raise GraphFormatError("empty graph text")
    first_no, first = body[0]
    if len(body) == 1 and len(first.split()) == 1 and not first.isdigit():
        return _load_graph6(first, first_no)
    head = first.split()
    if len(head) != 2:
        raise GraphFormatError("expected header 'n m'", first_no)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise GraphFormatError("header values must be integers", first_no) from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative counts in header", first_no)
    rows = body[1:]
    if len(rows) != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(rows)}", first_no)
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for no, ln in rows:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphFormatError("expected 'u v'", no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError("vertex ids must be integers", no) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"vertex out of range 0..{n - 1}", no)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key} (first on line {seen[key]})", no)
        seen[key] = no
        edges.append((u, v))
    return Graph(n, edges)


def _load_graph6(s: str, line: int) -> Graph:
    import networkx as nx

    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    try:
        H = nx.from_graph6_bytes(s.encode("ascii"))
    except Exception as exc:  # networkx raises a mix of types here
        raise GraphFormatError(f"bad graph6 string: {exc}", line) from None
    return Graph(H.number_of_nodes(), sorted(tuple(sorted(e)) for e in H.edges()))


def read_graph(path) -> Graph:
    with open(path) as fh:
        return load_graph(fh.read())


def dump_edge_list(G: Graph) -> str:
    out = [f"{G.n} {G.m}"]
    out += [f"{u} {v}" for u, v in G.edges]
    return "\n".join(out) + "\n"


def write_graph(G: Graph, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_edge_list(G))


def to_dot(G: Graph, name: str = "G") -> str:
    body = "".join(f"  {u} -- {v};\n" for u, v in G.edges)
    return f"graph {name} {{\n{body}}}\n"


# --------------------------------------------------------------------------
# small constructors


def build_cycle(n: int) -> Graph:
    """C_n on vertices 0..n-1; edge i joins i and i+1 (mod n)."""
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def petersen() -> Graph:
    """Outer 5-cycle 0..4, spokes i -- i+5, inner pentagram on 5..9."""
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def build_Hn(n: int) -> Graph:
    """Binary n-vectors, adjacent iff they agree in exactly one coordinate.

    Vertex ``x`` is the integer whose bit ``i`` holds coordinate ``i + 1``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    full = (1 << n) - 1
    edges = []
    for x in range(1 << n):
        for i in range(n):
            y = x ^ full ^ (1 << i)
            if x < y:
                edges.append((x, y))
    return Graph(1 << n, edges, names=range(1 << n))


def build_PQ(dim: int) -> Graph:
    """Projective cube PQ_dim as the even-weight component of H_{dim+1}.

    Vertices are numbered by increasing even-weight (dim+1)-bit vector;
    ``names[i]`` is that vector.
    """
    if dim < 2 or dim % 2:
        raise ValueError("projective cube dimension must be even and >= 2")
    n = dim + 1
    full = (1 << n) - 1
    names = [x for x in range(1 << n) if bin(x).count("1") % 2 == 0]
    index = {x: i for i, x in enumerate(names)}
    edges = []
    for x in names:
        for i in range(n):
            y = x ^ full ^ (1 << i)
            if x < y:
                edges.append((index[x], index[y]))
    return Graph(len(names), edges, names=names)


def moore_bound(g: int) -> int:
    """Fewest vertices a cubic graph of girth ``g`` can have."""
    if g < 3:
        return 4
    if g % 2:
        d = (g - 1) // 2
        return 1 + 3 * (2**d - 1)
    d = g // 2
    return 2 * (2**d - 1)


# --------------------------------------------------------------------------
# girth


@nb.njit(cache=True)
def _girth_kernel(n, indptr, nbr, eid):
    best = 1 << 40
    dist = np.full(n, -1, dtype=np.int64)
    pedge = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        head = 0
        tail = 1
        queue[0] = s
        dist[s] = 0
        while head < tail:
            u = queue[head]
            head += 1
            if 2 * dist[u] + 1 >= best:
                break
            for k in range(indptr[u], indptr[u + 1]):
                w = nbr[k]
                e = eid[k]
                if e == pedge[u]:
                    continue
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    pedge[w] = e
                    queue[tail] = w
                    tail += 1
                else:
                    c = dist[u] + dist[w] + 1
                    if c < best:
                        best = c
        for j in range(tail):
            dist[queue[j]] = -1
            pedge[queue[j]] = -1
    return best


def girth(G: Graph) -> float | int:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    if G.m == 0:
        return INF
    indptr, nbr, eid = G.csr()
    best = int(_girth_kernel(G.n, indptr, nbr, eid))
    return INF if best >= 1 << 40 else best


def shortest_cycle(G: Graph, near: Iterable[int] | None = None, limit: int | None = None) -> list[int] | None:
    """Vertices of a shortest cycle (through one of ``near`` if given)."""
    roots = range(G.n) if near is None else near
    best: list[int] | None = None
    for s in roots:
        cyc = _shortest_cycle_through(G, s, limit if best is None else len(best) - 1)
        if cyc is not None and (best is None or len(cyc) < len(best)):
            best = cyc
    return best


def _shortest_cycle_through(G: Graph, s: int, limit: int | None) -> list[int] | None:
    # BFS with a branch tag per vertex; two branches meeting close a cycle through s
    adj = G.adjacency
    dist = {s: 0}
    parent = {s: -1}
    branch = {s: -1}
    frontier = [s]
    best = None
    best_len = limit + 1 if limit is not None else None
    while frontier:
        nxt = []
        for u in frontier:
            if best_len is not None and 2 * dist[u] + 1 >= best_len:
                nxt = []
                break
            for w, _ in adj[u]:
                if w == parent[u]:
                    continue
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    branch[w] = w if u == s else branch[u]
                    nxt.append(w)
                elif branch[w] != branch[u] or w == s:
                    length = dist[u] + dist[w] + 1
                    if best_len is None or length < best_len:
                        best_len = length
                        best = (u, w)
        frontier = nxt
    if best is None:
        return None
    u, w = best

    def up(x):
        p = []
        while x != -1:
            p.append(x)
            x = parent[x]
        return p

    pu, pw = up(u), up(w)
    return pu[::-1] + pw[:-1]


def is_cycle(G: Graph, cycle: Sequence[int]) -> bool:
    """True iff ``cycle`` lists the distinct vertices of a cycle of ``G``."""
    k = len(cycle)
    if k < 3 or len(set(cycle)) != k:
        return False
    return all(G.has_edge(cycle[i], cycle[(i + 1) % k]) for i in range(k))


# --------------------------------------------------------------------------
# cuts


def _vertex_mask(G: Graph, U) -> np.ndarray:
    if isinstance(U, np.ndarray) and U.dtype == bool:
        if U.shape != (G.n,):
            raise ValueError("vertex mask has wrong length")
        return U
    mask = np.zeros(G.n, dtype=bool)
    for v in U:
        if not 0 <= v < G.n:
            raise ValueError(f"vertex {v} out of range")
        mask[v] = True
    return mask


def _edge_mask(G: Graph, S) -> np.ndarray:
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.shape != (G.m,):
            raise ValueError("edge mask has wrong length")
        return S
    mask = np.zeros(G.m, dtype=bool)
    for e in S:
        if not 0 <= e < G.m:
            raise ValueError(f"edge {e} out of range")
        mask[e] = True
    return mask


def cut_of(G: Graph, U) -> frozenset[int]:
    """delta(U): the edges with exactly one end in ``U``."""
    side = _vertex_mask(G, U)
    if G.m == 0:
        return frozenset()
    ends = np.asarray(G.edges, dtype=np.int64)
    return frozenset(np.flatnonzero(side[ends[:, 0]] != side[ends[:, 1]]).tolist())


@dataclass(frozen=True)
class CutCheck:
    """Outcome of :func:`is_cut`.

    On success ``side`` is a vertex set U with delta(U) = S. On failure
    ``odd_cycle`` lists the edge ids of a cycle containing an odd number of
    edges of S, which no cut can do.
    """

    ok: bool
    side: frozenset[int] = field(default_factory=frozenset)
    odd_cycle: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


@nb.njit(cache=True)
def _parity_kernel(n, indptr, nbr, eid, flip, side, parent_edge, parent):
    # returns (-1, -1) or the edge id / vertex where parity conflicts
    queue = np.empty(n, dtype=np.int64)
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        head = 0
        tail = 1
        queue[0] = s
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                w = nbr[k]
                e = eid[k]
                want = side[u] ^ (1 if flip[e] else 0)
                if side[w] < 0:
                    side[w] = want
                    parent[w] = u
                    parent_edge[w] = e
                    queue[tail] = w
                    tail += 1
                elif side[w] != want:
                    return e, u
    return -1, -1


def is_cut(G: Graph, S) -> CutCheck:
    """Decide whether ``S`` is a cut by parity propagation.

    Edges of S flip the side, the others keep it; S is a cut iff every
    component can be 2-coloured consistently.
    """
    flip = _edge_mask(G, S)
    side = np.full(G.n, -1, dtype=np.int64)
    parent = np.full(G.n, -1, dtype=np.int64)
    parent_edge = np.full(G.n, -1, dtype=np.int64)
    if G.n:
        indptr, nbr, eid = G.csr()
        bad, u = _parity_kernel(G.n, indptr, nbr, eid, flip, side, parent_edge, parent)
    else:
        bad = -1
    if bad < 0:
        return CutCheck(True, frozenset(np.flatnonzero(side == 1).tolist()))
    a, b = G.edges[bad]
    return CutCheck(False, odd_cycle=_tree_cycle(parent, parent_edge, a, b, bad))


def _tree_cycle(parent, parent_edge, a, b, closing_edge) -> tuple[int, ...]:
    def up(x):
        path = [x]
        while parent[x] >= 0:
            x = int(parent[x])
            path.append(x)
        return path

    pa, pb = up(a), up(b)
    on_b = {v: i for i, v in enumerate(pb)}
    i = next(i for i, v in enumerate(pa) if v in on_b)
    j = on_b[pa[i]]
    cyc = [int(parent_edge[v]) for v in pa[:i]] + [int(parent_edge[v]) for v in pb[:j]]
    return tuple(cyc + [int(closing_edge)])


def is_cut_complement(G: Graph, C) -> CutCheck:
    """Like :func:`is_cut` for E(G) minus ``C``."""
    return is_cut(G, ~_edge_mask(G, C))


def complement_of(G: Graph, S) -> frozenset[int]:
    mask = _edge_mask(G, S)
    return frozenset(np.flatnonzero(~mask).tolist())


# --------------------------------------------------------------------------
# reduction to cubic graphs


def cubic_completion(G: Graph, H: Graph) -> Graph:
    """Pad a subcubic graph to a cubic one containing it.

    One copy of G per vertex of H (copy c occupies vertices c*n .. c*n+n-1);
    each edge of H joins a deficient vertex of one copy to a deficient vertex
    of the other, lowest free slot first. H must be r-regular where r is the
    total degree deficiency of G.
    """
    if G.max_degree() > 3:
        raise ValueError("input graph has a vertex of degree > 3")
    slots = [v for v in range(G.n) for _ in range(3 - G.degree(v))]
    r = len(slots)
    bad = [x for x in range(H.n) if H.degree(x) != r]
    if bad:
        raise ValueError(f"auxiliary graph must be {r}-regular; vertex {bad[0]} has degree {H.degree(bad[0])}")
    if r == 0 and H.n == 1:
        return G
    used = [0] * H.n
    n = G.n
    edges = [(c * n + u, c * n + v) for c in range(H.n) for u, v in G.edges]
    for x, y in H.edges:
        if used[x] >= r or used[y] >= r:
            raise RuntimeError("ran out of deficient slots")
        edges.append((x * n + slots[used[x]], y * n + slots[used[y]]))
        used[x] += 1
        used[y] += 1
    out = Graph(H.n * n, edges)
    if not out.is_cubic():
        raise RuntimeError("completion is not cubic")
    return out


# --------------------------------------------------------------------------
# random high-girth cubic graphs


class InfeasibleError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    def __init__(self, message: str, girth_reached: float, attempts: int):
        super().__init__(message)
        self.girth_reached = girth_reached
        self.attempts = attempts


@nb.njit(cache=True)
def _random_cubic(n, max_tries):
    # pairing model, restarted until the result is simple
    adj = np.empty((n, 3), dtype=np.int64)
    pts = np.empty(3 * n, dtype=np.int64)
    for _ in range(max_tries):
        for i in range(3 * n):
            pts[i] = i // 3
        np.random.shuffle(pts)
        ok = True
        fill = np.zeros(n, dtype=np.int64)
        for i in range(0, 3 * n, 2):
            u = pts[i]
            v = pts[i + 1]
            if u == v:
                ok = False
                break
            for j in range(fill[u]):
                if adj[u, j] == v:
                    ok = False
            if not ok:
                break
            adj[u, fill[u]] = v
            fill[u] += 1
            adj[v, fill[v]] = u
            fill[v] += 1
        if ok:
            return adj, True
    return adj, False


@nb.njit(cache=True)
def _cycle_through(adj, s, limit, dist, branch, queue):
    # shortest cycle through s of length <= limit; returns (length, neighbour of s on it)
    n3 = adj.shape[1]
    best = limit + 1
    best_nb = -1
    head = 0
    tail = 1
    queue[0] = s
    dist[s] = 0
    branch[s] = -1
    while head < tail:
        u = queue[head]
        head += 1
        if 2 * dist[u] + 1 >= best:
            break
        for j in range(n3):
            w = adj[u, j]
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                branch[w] = w if u == s else branch[u]
                queue[tail] = w
                tail += 1
            elif w == s:
                if dist[u] >= 2:
                    c = dist[u] + 1
                    if c < best:
                        best = c
                        best_nb = branch[u]
            elif branch[w] != branch[u] and u != s:
                c = dist[u] + dist[w] + 1
                if c < best:
                    best = c
                    best_nb = branch[u]
    for j in range(tail):
        dist[queue[j]] = -1
    return best, best_nb


@nb.njit(cache=True)
def _edge_cycle(adj, x, y, limit, dist, queue, mark, queue2):
    # 1 + dist(x, y) avoiding the edge xy, capped at limit + 1 (meet in the middle)
    cap = limit + 1
    r1 = (limit - 1) // 2
    r2 = limit - 1 - r1
    head = 0
    tail = 1
    queue[0] = x
    dist[x] = 0
    while head < tail:
        u = queue[head]
        head += 1
        if dist[u] >= r1:
            continue
        for j in range(3):
            w = adj[u, j]
            if u == x and w == y:
                continue
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1
    best = cap
    h2 = 0
    t2 = 1
    queue2[0] = y
    mark[y] = 0
    while h2 < t2:
        u = queue2[h2]
        h2 += 1
        if dist[u] >= 0:
            c = dist[u] + mark[u] + 1
            if c < best:
                best = c
        if mark[u] >= r2:
            continue
        for j in range(3):
            w = adj[u, j]
            if u == y and w == x:
                continue
            if mark[w] < 0:
                mark[w] = mark[u] + 1
                queue2[t2] = w
                t2 += 1
    for j in range(tail):
        dist[queue[j]] = -1
    for j in range(t2):
        mark[queue2[j]] = -1
    return best


@nb.njit(cache=True)
def _replace(adj, u, old, new):
    for j in range(3):
        if adj[u, j] == old:
            adj[u, j] = new
            return


@nb.njit(cache=True)
def _adjacent(adj, u, v):
    return adj[u, 0] == v or adj[u, 1] == v or adj[u, 2] == v


@nb.njit(cache=True)
def _mark_ball(adj, centre, radius, dirty, stack, top, dist, queue):
    head = 0
    tail = 1
    queue[0] = centre
    dist[centre] = 0
    while head < tail:
        u = queue[head]
        head += 1
        if not dirty[u]:
            dirty[u] = True
            stack[top] = u
            top += 1
        if dist[u] >= radius:
            continue
        for j in range(3):
            w = adj[u, j]
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue[tail] = w
                tail += 1
    for j in range(tail):
        dist[queue[j]] = -1
    return top


@nb.njit(cache=True)
def _girth_swaps(adj, g, budget, strict_tries):
    """Destroy cycles shorter than g by 2-swaps.

    A swap replaces edges xy, uv by xu, yv. It is accepted when neither new
    edge lies on a cycle shorter than g, or, after ``strict_tries`` failed
    attempts, when the shorter of the new edges' cycles is at least as long
    as the cycle being destroyed (so the girth never drops).
    Returns (attempts used, success flag).
    """
    n = adj.shape[0]
    dist = np.full(n, -1, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    branch = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    queue2 = np.empty(n, dtype=np.int64)
    dirty = np.ones(n, dtype=np.bool_)
    stack = np.empty(n, dtype=np.int64)
    for i in range(n):
        stack[i] = n - 1 - i
    top = n
    attempts = 0
    radius = g // 2
    while top > 0:
        x = stack[top - 1]
        top -= 1
        dirty[x] = False
        while True:
            length, y = _cycle_through(adj, x, g - 1, dist, branch, queue)
            if y < 0:
                break
            failures = 0
            done = False
            while not done:
                if attempts >= budget:
                    return attempts, False
                attempts += 1
                u = np.random.randint(n)
                v = adj[u, np.random.randint(3)]
                if np.random.randint(2) == 1:
                    u, v = v, u
                if u == x or u == y or v == x or v == y:
                    continue
                if _adjacent(adj, x, u) or _adjacent(adj, y, v):
                    continue
                _replace(adj, x, y, u)
                _replace(adj, y, x, v)
                _replace(adj, u, v, x)
                _replace(adj, v, u, y)
                c1 = _edge_cycle(adj, x, u, g - 1, dist, queue, mark, queue2)
                c2 = _edge_cycle(adj, y, v, g - 1, dist, queue, mark, queue2)
                worst = min(c1, c2)
                if worst >= g:
                    done = True
                elif failures >= strict_tries and worst >= length:
                    done = True
                    for c in (x, y, u, v):
                        top = _mark_ball(adj, c, radius, dirty, stack, top, dist, queue)
                else:
                    failures += 1
                    _replace(adj, x, u, y)
                    _replace(adj, y, v, x)
                    _replace(adj, u, x, v)
                    _replace(adj, v, y, u)
    return attempts, True


@nb.njit(cache=True)
def _seed(seed):
    np.random.seed(seed)


def gen_high_girth_cubic(n: int, g: int, seed: int = 0, budget: int = 10**7, strict_tries: int = 50) -> Graph:
    """Random cubic graph on ``n`` vertices with girth at least ``g``.

    Starts from a random simple cubic graph and removes short cycles by
    girth-monotone 2-swaps. Deterministic for fixed arguments. Raises
    :class:`BudgetExhausted` once ``budget`` swap attempts have been spent.
    """
    if n % 2:
        raise InfeasibleError("a cubic graph needs an even number of vertices")
    if n < moore_bound(g):
        raise InfeasibleError(f"n={n} is below the Moore bound {moore_bound(g)} for girth {g}")
    _seed(seed)
    adj, ok = _random_cubic(n, 10000)
    if not ok:
        raise BudgetExhausted("could not sample a simple cubic graph", 0, 0)
    attempts, ok = _girth_swaps(adj, g, budget, strict_tries)
    edges = sorted({(min(u, int(w)), max(u, int(w))) for u in range(n) for w in adj[u]})
    G = Graph(n, edges)
    if not ok:
        raise BudgetExhausted(f"swap budget {budget} exhausted at girth {girth(G)}", girth(G), int(attempts))
    if girth(G) < g:  # the swap loop claims success; double-check independently
        raise RuntimeError("generator produced a graph below the target girth")
    return G
