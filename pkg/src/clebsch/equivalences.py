"""Certificates for "G maps to PQ_2k" and the conversions between them.

Four interchangeable forms, for a graph G and k >= 1:

1. ``packing``: 2k pairwise disjoint cut complements E - delta(U_i);
2. ``cover``: 2k + 1 pairwise disjoint cut complements with union E;
3. ``hom``: a homomorphism G -> PQ_2k;
4. ``cutcont``: a cut-continuous map E(G) -> E(C_{2k+1}).

PQ_2k is realised as the even-weight component of H_{2k+1} (see
:func:`graphs.build_PQ`); vertex vectors use bit i for coordinate i + 1.
Conversions never mutate their input and return ``(certificate, transcript)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graphs import Graph, GraphFormatError, build_cycle, build_Hn, build_PQ, cut_of, is_cut
from .labeling import Labeling, _parse_side_line, is_cut_complement_labeling, is_wonderful

FORMS = ("packing", "cover", "hom", "cutcont")


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    ok: bool
    message: str = "ok"
    witness: tuple = ()

    def __bool__(self):
        return self.ok


# --------------------------------------------------------------------------
# certificate types


@dataclass(frozen=True)
class Packing:
    """Vertex sets U_1..U_j whose complements E - delta(U_i) are the packing.

    j = 2k is form 1 and j = 2k + 1 is form 2.
    """

    graph: Graph
    k: int
    sides: tuple[frozenset[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(frozenset(U) for U in self.sides))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if len(self.sides) not in (2 * self.k, 2 * self.k + 1):
            raise ValueError(f"a packing for k={self.k} has {2 * self.k} or {2 * self.k + 1} sets, got {len(self.sides)}")

    @property
    def form(self) -> str:
        return "cover" if len(self.sides) == 2 * self.k + 1 else "packing"

    def complements(self) -> list[frozenset[int]]:
        E = frozenset(range(self.graph.m))
        return [E - cut_of(self.graph, U) for U in self.sides]

    def truncated(self) -> "Packing":
        """The first 2k sets (form 1)."""
        return Packing(self.graph, self.k, self.sides[: 2 * self.k])


@dataclass(frozen=True)
class Homomorphism:
    source: Graph
    target: Graph
    vmap: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vmap", tuple(int(x) for x in self.vmap))
        if len(self.vmap) != self.source.n:
            raise ValueError("vertex map must be total on the source")

    def induced(self) -> "CutContinuousMap":
        """f#(uv) = f(u)f(v); only defined when f is a homomorphism."""
        emap = []
        for u, v in self.source.edges:
            emap.append(self.target.edge_id(self.vmap[u], self.vmap[v]))
        return CutContinuousMap(self.source, self.target, tuple(emap))


@dataclass(frozen=True)
class CutContinuousMap:
    source: Graph
    target: Graph
    emap: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "emap", tuple(int(x) for x in self.emap))
        if len(self.emap) != self.source.m:
            raise ValueError("edge map must be total on the source")
        if any(not 0 <= f < self.target.m for f in self.emap):
            raise ValueError("edge map leaves the target edge set")

    def then(self, other: "CutContinuousMap") -> "CutContinuousMap":
        """Composition: first self, then other."""
        if other.source != self.target:
            raise ValueError("maps do not compose")
        return CutContinuousMap(self.source, other.target, tuple(other.emap[f] for f in self.emap))


def identity_hom(G: Graph) -> Homomorphism:
    return Homomorphism(G, G, tuple(range(G.n)))


def identity_map(G: Graph) -> CutContinuousMap:
    return CutContinuousMap(G, G, tuple(range(G.m)))


# --------------------------------------------------------------------------
# verifiers


def verify_packing(P: Packing) -> Verdict:
    G = P.graph
    if any(not 0 <= v < G.n for U in P.sides for v in U):
        return Verdict(False, "vertex set leaves the graph")
    owner = np.full(G.m, -1, dtype=np.int64)
    for i, S in enumerate(P.complements()):
        for e in S:
            if owner[e] >= 0:
                return Verdict(False, f"edge {G.edges[e]} lies in complements {owner[e] + 1} and {i + 1}", (e,))
            owner[e] = i
    if P.form == "cover" and (owner < 0).any():
        e = int(np.flatnonzero(owner < 0)[0])
        return Verdict(False, f"edge {G.edges[e]} is in no complement", (e,))
    return Verdict(True)


def verify_homomorphism(f: Homomorphism) -> Verdict:
    H = f.target
    for v, x in enumerate(f.vmap):
        if not 0 <= x < H.n:
            return Verdict(False, f"image of {v} is not a target vertex", (v,))
    for e, (u, v) in enumerate(f.source.edges):
        if not H.has_edge(f.vmap[u], f.vmap[v]):
            return Verdict(False, f"edge ({u}, {v}) maps to non-edge ({f.vmap[u]}, {f.vmap[v]})", (u, v))
    return Verdict(True)


def _preimage_mask(g: CutContinuousMap, cut: Iterable[int]) -> np.ndarray:
    inside = np.zeros(g.target.m, dtype=bool)
    inside[list(cut)] = True
    return inside[np.asarray(g.emap, dtype=np.int64)] if g.source.m else np.zeros(0, dtype=bool)


def verify_cut_continuous(g: CutContinuousMap) -> Verdict:
    """Check the preimage of each vertex star delta_H({v}).

    Stars generate the cut space and preimages commute with symmetric
    difference, so this covers every cut of the target.
    """
    for v in range(g.target.n):
        star = [f for _, f in g.target.adjacency[v]]
        res = is_cut(g.source, _preimage_mask(g, star))
        if not res.ok:
            return Verdict(False, f"preimage of the star at {v} is not a cut", (v,) + tuple(res.odd_cycle))
    return Verdict(True)


def verify_cut_continuous_bruteforce(g: CutContinuousMap) -> Verdict:
    """Same check over all 2^|V(H)| cuts of the target."""
    H = g.target
    for bits in range(1 << H.n):
        U = [v for v in range(H.n) if bits >> v & 1]
        if not is_cut(g.source, _preimage_mask(g, cut_of(H, U))).ok:
            return Verdict(False, f"preimage of delta({U}) is not a cut", tuple(U))
    return Verdict(True)


def verify(cert) -> Verdict:
    if isinstance(cert, Packing):
        return verify_packing(cert)
    if isinstance(cert, Homomorphism):
        return verify_homomorphism(cert)
    if isinstance(cert, CutContinuousMap):
        return verify_cut_continuous(cert)
    raise TypeError(f"not a certificate: {type(cert).__name__}")


def _require(cert, what: str) -> None:
    res = verify(cert)
    if not res:
        raise CertificateError(f"input {what} is invalid: {res.message}")


# --------------------------------------------------------------------------
# conversions


def conv_1_to_2(P: Packing) -> tuple[Packing, list[str]]:
    """Append U_{2k+1} = symmetric difference of U_1..U_2k."""
    if P.form != "packing":
        raise CertificateError("expected 2k sets")
    _require(P, "packing")
    last: set[int] = set()
    for U in P.sides:
        last ^= U
    out = Packing(P.graph, P.k, P.sides + (frozenset(last),))
    res = verify_packing(out)
    log = [f"packing -> cover: U{2 * P.k + 1} = xor of U1..U{2 * P.k} ({len(last)} vertices)", f"cover check: {res.message}"]
    if not res:
        raise AssertionError(res.message)
    return out, log


@lru_cache(maxsize=None)
def _pq_index(k: int) -> tuple[Graph, dict[int, int]]:
    PQ = build_PQ(2 * k)
    return PQ, {x: i for i, x in enumerate(PQ.names)}


def canonical_vector(x: int, k: int) -> int:
    """Representative of x in the even-weight component."""
    full = (1 << (2 * k + 1)) - 1
    return x ^ full if bin(x).count("1") % 2 else x


def conv_2_to_3(P: Packing) -> tuple[Homomorphism, list[str]]:
    """x^v_i = [v in U_i], moved to the even component."""
    if P.form != "cover":
        raise CertificateError("expected 2k+1 sets")
    _require(P, "cover")
    PQ, index = _pq_index(P.k)
    vec = np.zeros(P.graph.n, dtype=np.int64)
    for i, U in enumerate(P.sides):
        vec[list(U)] |= 1 << i
    flipped = 0
    vmap = []
    for x in vec.tolist():
        y = canonical_vector(x, P.k)
        flipped += y != x
        vmap.append(index[y])
    f = Homomorphism(P.graph, PQ, tuple(vmap))
    res = verify_homomorphism(f)
    log = [f"cover -> hom: vectors in H{2 * P.k + 1}, {flipped} odd-weight images complemented", f"hom check: {res.message}"]
    if not res:
        raise CertificateError(f"adjacency violation: {res.message}")
    return f, log


def agreement_coordinate(x: int, y: int, bits: int) -> int:
    """The unique coordinate (1-based) where x and y agree, else 0."""
    same = ~(x ^ y) & ((1 << bits) - 1)
    if same == 0 or same & (same - 1):
        return 0
    return same.bit_length()


def conv_3_to_4(f: Homomorphism) -> tuple[CutContinuousMap, list[str]]:
    """uv -> e_i where f(u), f(v) agree exactly in coordinate i.

    e_i is edge i - 1 of :func:`graphs.build_cycle`.
    """
    k = _pq_order(f.target)
    _require(f, "homomorphism")
    names = f.target.names
    emap = []
    for u, v in f.source.edges:
        i = agreement_coordinate(names[f.vmap[u]], names[f.vmap[v]], 2 * k + 1)
        emap.append(i - 1)
    g = CutContinuousMap(f.source, build_cycle(2 * k + 1), tuple(emap))
    res = verify_cut_continuous(g)
    log = [f"hom -> cutcont: edges sent to C{2 * k + 1} by agreement coordinate", f"cutcont check: {res.message}"]
    if not res:
        raise AssertionError(res.message)
    return g, log


def _pq_order(H: Graph) -> int:
    for k in range(1, 8):
        if H.n == 4**k:
            if H == _pq_index(k)[0]:
                return k
            break
    raise CertificateError("homomorphism target is not a canonical PQ_2k")


def conv_4_to_1(g: CutContinuousMap) -> tuple[Packing, list[str]]:
    """Preimages of the cycle edges; returns all 2k + 1 (a cover).

    Use :meth:`Packing.truncated` for form 1.
    """
    q = g.target.n
    if q % 2 == 0 or g.target != build_cycle(q):
        raise CertificateError("cut-continuous target must be an odd cycle C_{2k+1}")
    _require(g, "cut-continuous map")
    emap = np.asarray(g.emap, dtype=np.int64)
    sides = []
    for i in range(q):
        res = is_cut(g.source, emap != i)
        if not res.ok:
            raise AssertionError("preimage is not a cut complement")
        sides.append(res.side)
    P = Packing(g.source, (q - 1) // 2, tuple(sides))
    res = verify_packing(P)
    log = [f"cutcont -> cover: preimages of the {q} cycle edges", f"cover check: {res.message}"]
    if not res:
        raise AssertionError(res.message)
    return P, log


_STEPS = {"packing": "cover", "cover": "hom", "hom": "cutcont", "cutcont": "packing"}


def form_of(cert) -> str:
    if isinstance(cert, Packing):
        return cert.form
    if isinstance(cert, Homomorphism):
        return "hom"
    if isinstance(cert, CutContinuousMap):
        return "cutcont"
    raise TypeError(f"not a certificate: {type(cert).__name__}")


def convert(cert, to: str) -> tuple[object, list[str]]:
    """Walk the cycle packing -> cover -> hom -> cutcont -> packing until ``to``."""
    if to not in FORMS:
        raise ValueError(f"unknown form {to!r}")
    _require(cert, form_of(cert))
    log = [f"start: {form_of(cert)} ok"]
    while form_of(cert) != to:
        cur = form_of(cert)
        if cur == "packing":
            cert, more = conv_1_to_2(cert)
        elif cur == "cover":
            cert, more = conv_2_to_3(cert)
        elif cur == "hom":
            cert, more = conv_3_to_4(cert)
        else:
            cert, more = conv_4_to_1(cert)
            if to == "packing":
                cert = cert.truncated()
                more.append(f"kept U1..U{2 * cert.k}: {verify_packing(cert).message}")
        log += more
    return cert, log


# --------------------------------------------------------------------------
# bridges and structure


def packing_from_labeling(X: Labeling, sides: Sequence[Iterable[int]] | None = None) -> Packing:
    """The four classes of a wonderful cut complement labeling (k = 2)."""
    if not is_wonderful(X):
        raise CertificateError("labeling is not wonderful")
    if sides is None:
        chk = is_cut_complement_labeling(X)
        if not chk:
            raise CertificateError(f"coordinate {chk.coordinate} is not a cut complement")
        sides = chk.sides
    P = Packing(X.graph, 2, tuple(frozenset(U) for U in sides))
    if [frozenset(S) for S in P.complements()] != list(X.sets()):
        raise CertificateError("vertex sets do not match the labeling")
    return P


def packing_from_edge_sets(G: Graph, sets: Sequence[Iterable[int]], k: int) -> Packing:
    """Recover witnesses U_i for given cut complements."""
    sides = []
    for i, S in enumerate(sets, 1):
        mask = np.ones(G.m, dtype=bool)
        mask[list(S)] = False
        res = is_cut(G, mask)
        if not res.ok:
            raise CertificateError(f"set {i} is not a cut complement")
        sides.append(res.side)
    return Packing(G, k, tuple(sides))


@dataclass(frozen=True)
class PQIsoReport:
    k: int
    ok: bool
    vertices: int
    edges: int
    complement_swaps: bool


def check_pq_iso(k: int) -> PQIsoReport:
    """Compare H^e_{2k+1} with Q_{2k+1} modulo antipodes, built separately.

    The bijection sends an antipodal class to its even member; complementation
    is also checked to carry H^e onto H^o.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = 2 * k + 1
    full = (1 << n) - 1
    # quotient: classes keyed by min(x, ~x); adjacent when some members differ in one bit
    reps = sorted({min(x, x ^ full) for x in range(1 << n)})
    rid = {r: i for i, r in enumerate(reps)}
    qedges = set()
    for x in range(1 << n):
        for b in range(n):
            y = x ^ (1 << b)
            a, c = rid[min(x, x ^ full)], rid[min(y, y ^ full)]
            if a != c:
                qedges.add((min(a, c), max(a, c)))
    PQ = build_PQ(2 * k)
    pos = {x: i for i, x in enumerate(PQ.names)}
    phi = [pos[r if bin(r).count("1") % 2 == 0 else r ^ full] for r in reps]
    ok = len(set(phi)) == len(reps) == PQ.n
    image = {tuple(sorted((phi[a], phi[c]))) for a, c in qedges}
    ok = ok and image == set(PQ.edges)
    H = build_Hn(n)
    swap = all(H.has_edge(u ^ full, v ^ full) for u, v in H.edges)
    swap = swap and all(bin(x).count("1") % 2 != bin(x ^ full).count("1") % 2 for x in range(1 << n))
    return PQIsoReport(k, bool(ok and swap), len(reps), len(qedges), swap)


def is_isomorphic_bruteforce(G: Graph, H: Graph) -> bool:
    """Tiny graphs only."""
    if (G.n, G.m) != (H.n, H.m):
        return False
    target = set(H.edges)
    for p in itertools.permutations(range(H.n)):
        if all(tuple(sorted((p[u], p[v]))) in target for u, v in G.edges):
            return True
    return False


def petersen_cover() -> Packing:
    """Five disjoint cut complements of the Petersen graph covering E.

    One vertex set and its images under the 5-fold rotation; see
    :func:`find_rotation_cover` for how it was found.
    """
    from .graphs import petersen

    return Packing(petersen(), 2, tuple(_rotate_set(PETERSEN_SIDE, r) for r in range(5)))


# found by find_rotation_cover(); frozen
PETERSEN_SIDE = frozenset({2, 4, 5, 6})


def _rotate_set(U: Iterable[int], r: int) -> frozenset[int]:
    return frozenset((v + r) % 5 if v < 5 else 5 + (v - 5 + r) % 5 for v in U)


def find_rotation_cover() -> list[frozenset[int]]:
    """All U such that U and its rotations give a Petersen cover."""
    from .graphs import petersen

    G = petersen()
    found = []
    for bits in range(1 << G.n):
        U = frozenset(v for v in range(G.n) if bits >> v & 1)
        P = Packing(G, 2, tuple(_rotate_set(U, r) for r in range(5)))
        if verify_packing(P):
            found.append(U)
    return found


# --------------------------------------------------------------------------
# file formats


def dump_certificate(cert) -> str:
    if isinstance(cert, Packing):
        head = f"# {cert.form} k={cert.k}\n"
        return head + "".join(f"U{i}: " + " ".join(map(str, sorted(U))) + "\n" for i, U in enumerate(cert.sides, 1))
    if isinstance(cert, Homomorphism):
        k = _pq_order(cert.target)
        bits = 2 * k + 1
        names = cert.target.names
        return f"# hom k={k}\n" + "".join(f"{v} {_bitstring(names[x], bits)}\n" for v, x in enumerate(cert.vmap))
    if isinstance(cert, CutContinuousMap):
        out = [f"cycle {cert.target.n}"]
        out += [f"{u} {v} {i + 1}" for (u, v), i in zip(cert.source.edges, cert.emap)]
        return "\n".join(out) + "\n"
    raise TypeError(f"not a certificate: {type(cert).__name__}")


def _bitstring(x: int, bits: int) -> str:
    # coordinate 1 first
    return "".join("1" if x >> i & 1 else "0" for i in range(bits))


def _parse_bits(s: str, no: int) -> int:
    if not s or set(s) - {"0", "1"}:
        raise GraphFormatError(f"bad bit vector {s!r}", no)
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


_HOM_LINE = re.compile(r"\d+\s+[01]+")


def _content(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        ln = raw.strip()
        if ln and not ln.startswith("#"):
            yield no, ln


def load_certificate(G: Graph, form: str, text: str):
    if form in ("packing", "cover"):
        sides = {}
        for no, ln in _content(text):
            if _HOM_LINE.fullmatch(ln):
                continue  # map section of a combined certificate
            if not ln.startswith("U"):
                raise GraphFormatError("expected 'U<i>: v v ...'", no)
            idx, sides[idx] = _parse_side_line(ln, no, G.n)
        if sorted(sides) != list(range(1, len(sides) + 1)):
            raise GraphFormatError("vertex sets must be numbered U1..Uj")
        j = len(sides)
        odd = form == "cover"
        if j < 2 or j % 2 != odd:
            raise GraphFormatError(f"a {form} needs an {'odd' if odd else 'even'} number (>= 2) of sets, got {j}")
        return Packing(G, j // 2, tuple(sides[i] for i in range(1, j + 1)))
    if form == "hom":
        vec: dict[int, int] = {}
        width = None
        for no, ln in _content(text):
            if ln.startswith("U"):
                continue  # vertex-set section of a combined certificate
            parts = ln.split()
            if len(parts) != 2:
                raise GraphFormatError("expected 'v bitvector'", no)
            try:
                v = int(parts[0])
            except ValueError:
                raise GraphFormatError("vertex must be an integer", no) from None
            if not 0 <= v < G.n or v in vec:
                raise GraphFormatError(f"bad or repeated vertex {v}", no)
            if width is None:
                width = len(parts[1])
                if width % 2 == 0 or width < 3:
                    raise GraphFormatError("bit vectors need odd length 2k+1 >= 3", no)
            elif len(parts[1]) != width:
                raise GraphFormatError("bit vectors of different lengths", no)
            vec[v] = _parse_bits(parts[1], no)
        if len(vec) != G.n:
            raise GraphFormatError(f"map covers {len(vec)} of {G.n} vertices")
        k = (width - 1) // 2 if width else 1
        PQ, index = _pq_index(k)
        return Homomorphism(G, PQ, tuple(index[canonical_vector(vec[v], k)] for v in range(G.n)))
    if form == "cutcont":
        lines = list(_content(text))
        if not lines or not lines[0][1].startswith("cycle"):
            raise GraphFormatError("expected 'cycle n' header")
        try:
            q = int(lines[0][1].split()[1])
        except (IndexError, ValueError):
            raise GraphFormatError("expected 'cycle n' header", lines[0][0]) from None
        if q < 3:
            raise GraphFormatError("cycle length must be >= 3", lines[0][0])
        emap = [-1] * G.m
        for no, ln in lines[1:]:
            try:
                u, v, i = map(int, ln.split())
            except ValueError:
                raise GraphFormatError("expected 'u v i'", no) from None
            if not 1 <= i <= q:
                raise GraphFormatError(f"cycle edge {i} outside 1..{q}", no)
            try:
                e = G.edge_id(u, v)
            except KeyError:
                raise GraphFormatError(f"({u}, {v}) is not an edge", no) from None
            emap[e] = i - 1
        if -1 in emap:
            raise GraphFormatError(f"edge {G.edges[emap.index(-1)]} is not mapped")
        return CutContinuousMap(G, build_cycle(q), tuple(emap))
    raise ValueError(f"unknown form {form!r}")
