"""Menus of labeled rooted trees and the antichains of worst menus.

A menu is a length-16 int64 vector indexed by the 4-bit mask of a subset
S of {1,2,3,4}; entry S is the cheapest cost change of an internal swap
whose root membership pattern is S. The machinery here rebuilds the sets
W_1..W_d of maximal menus level by level and checks that every triple
(W'_d1, W_d2, W_d2) admits a strictly negative combined swap.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numba as nb
import numpy as np

from .labeling import DEFAULT_COST, POPCOUNT, CostTable, fmt_mask

ROOT_LABEL = 0b0011  # {1, 2}
LABELS_LE2 = np.array([m for m in range(16) if POPCOUNT[m] <= 2], dtype=np.int64)
DEFAULT_CAPACITY = 20000

_XOR = np.bitwise_xor.outer(np.arange(16), np.arange(16))

OK = 0
CAPACITY = 1
BOUND = 2


class CapacityExceeded(RuntimeError):
    pass


class Comparison(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    INCOMPARABLE = 2


# --------------------------------------------------------------------------
# single menus


def base_menu(R: int, a: CostTable = DEFAULT_COST) -> np.ndarray:
    """Menu of T_1 whose edge carries label R: M(S) = a(|R^S|) - a(|R|)."""
    c = a.by_mask()
    return c[R ^ np.arange(16)] - c[R]


def parent_menu(M, N, R: int, a: CostTable = DEFAULT_COST) -> np.ndarray:
    """min over Q of M(Q) + N(Q) + a(|R^S^Q|) - a(|R|), for every S."""
    c = a.by_mask()
    children = np.asarray(M, dtype=np.int64) + np.asarray(N, dtype=np.int64)
    # rows S, columns Q
    return (children[None, :] + c[R ^ _XOR]).min(axis=1) - c[R]


@nb.njit(cache=True)
def _tree_dp(labels, cost_by_mask, depth, choice):
    """Bottom-up menus for a heap-ordered T_depth.

    ``choice[k - 1, S]`` receives the membership Q of the lower end of edge k
    that attains the minimum when its upper end has membership S (always 0
    for leaf edges). Returns the root menu.
    """
    ne = (1 << depth) - 1
    first_leaf = 1 << (depth - 1)
    menus = np.empty((ne + 1, 16), dtype=np.int64)
    for k in range(ne, 0, -1):
        R = labels[k - 1]
        base = cost_by_mask[R]
        if k >= first_leaf:
            for s in range(16):
                menus[k, s] = cost_by_mask[R ^ s] - base
                choice[k - 1, s] = 0
        else:
            for s in range(16):
                best = 1 << 60
                arg = 0
                for q in range(16):
                    v = menus[2 * k, q] + menus[2 * k + 1, q] + cost_by_mask[R ^ s ^ q]
                    if v < best:
                        best = v
                        arg = q
                menus[k, s] = best - base
                choice[k - 1, s] = arg
    return menus[1].copy()


def menu_of_tree(depth: int, labels: Sequence[int], a: CostTable = DEFAULT_COST, with_choices: bool = False):
    """Menu of a labeling of T_depth given in heap order (see :mod:`trees`)."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (2**depth - 1,):
        raise ValueError(f"T_{depth} has {2**depth - 1} edges, got {labels.shape}")
    choice = np.zeros((labels.size, 16), dtype=np.int8)
    menu = _tree_dp(labels, a.by_mask(), depth, choice)
    return (menu, choice) if with_choices else menu


def swap_memberships(depth: int, choice: np.ndarray, S: int) -> np.ndarray:
    """Backtrack ``choice`` into the membership mask of every tree vertex.

    Index 0 is the root (membership S); index k the lower end of edge k.
    Leaves never move.
    """
    ne = 2**depth - 1
    first_leaf = 2 ** (depth - 1)
    z = np.zeros(ne + 1, dtype=np.int64)
    z[0] = S
    for k in range(1, first_leaf):
        z[k] = choice[k - 1, z[k // 2 if k > 1 else 0]]
    return z


def menu_cmp(M1, M2) -> Comparison:
    M1 = np.asarray(M1)
    M2 = np.asarray(M2)
    le = bool((M1 <= M2).all())
    ge = bool((M1 >= M2).all())
    if le and ge:
        return Comparison.EQUAL
    if le:
        return Comparison.LESS
    if ge:
        return Comparison.GREATER
    return Comparison.INCOMPARABLE


# --------------------------------------------------------------------------
# antichains


@dataclass(frozen=True)
class MenuSet:
    """An antichain of menus, rows sorted lexicographically."""

    menus: np.ndarray
    depth: int = 0
    mode: str = "full"
    cost: CostTable = DEFAULT_COST
    root_label: int = ROOT_LABEL

    def __len__(self):
        return self.menus.shape[0]

    def __iter__(self):
        return iter(self.menus)

    def __eq__(self, other):
        return isinstance(other, MenuSet) and np.array_equal(self.menus, other.menus)

    @property
    def name(self) -> str:
        return f"W'{self.depth}" if self.mode == "root" else f"W{self.depth}"


def canonical(menus: np.ndarray) -> np.ndarray:
    menus = np.asarray(menus, dtype=np.int64).reshape(-1, 16)
    if menus.shape[0] == 0:
        return menus.copy()
    order = np.lexsort(menus.T[::-1])
    return np.ascontiguousarray(menus[order])


@nb.njit(cache=True)
def _insert(W, n, M):
    """Insert M into the antichain W[:n]; returns the new size.

    Dominated members are overwritten by the current last row, as in the
    reference implementation.
    """
    for j in range(n):
        ok = True
        for s in range(16):
            if M[s] > W[j, s]:
                ok = False
                break
        if ok:
            return n
    j = 0
    while j < n:
        ok = True
        for s in range(16):
            if W[j, s] > M[s]:
                ok = False
                break
        if ok:
            n -= 1
            for s in range(16):
                W[j, s] = W[n, s]
        else:
            j += 1
    for s in range(16):
        W[n, s] = M[s]
    return n + 1


@nb.njit(cache=True)
def _insert_rows(rows, cap):
    W = np.empty((cap + 1, 16), dtype=np.int64)
    n = 0
    for i in range(rows.shape[0]):
        n = _insert(W, n, rows[i])
        if n > cap:
            return W[:n].copy(), CAPACITY
    return W[:n].copy(), OK


def maximal(menus, capacity: int = DEFAULT_CAPACITY) -> np.ndarray:
    """Maximal elements of a collection of menus, canonically ordered."""
    rows = np.ascontiguousarray(np.asarray(menus, dtype=np.int64).reshape(-1, 16))
    W, status = _insert_rows(rows, capacity)
    if status == CAPACITY:
        raise CapacityExceeded(f"antichain exceeds capacity {capacity}")
    return canonical(W)


def antichain_insert(W: MenuSet, M, capacity: int = DEFAULT_CAPACITY) -> MenuSet:
    rows = np.array(W.menus, dtype=np.int64).reshape(-1, 16)
    buf = np.empty((rows.shape[0] + 1, 16), dtype=np.int64)
    buf[: rows.shape[0]] = rows
    n = _insert(buf, rows.shape[0], np.asarray(M, dtype=np.int64))
    if n > capacity:
        raise CapacityExceeded(f"antichain exceeds capacity {capacity}")
    return MenuSet(canonical(buf[:n]), W.depth, W.mode, W.cost, W.root_label)


def prune_nonneg(W: MenuSet) -> MenuSet:
    """Drop the menus with M(empty) < 0."""
    keep = W.menus[:, 0] >= 0
    return MenuSet(W.menus[keep], W.depth, W.mode, W.cost, W.root_label)


# --------------------------------------------------------------------------
# level-by-level construction


@nb.njit(cache=True)
def _update(prev, labels, cost_by_mask, cap, prune, bound, lo, hi):
    m = prev.shape[0]
    W = np.empty((cap + 1, 16), dtype=np.int64)
    n = 0
    ch = np.empty(16, dtype=np.int64)
    P = np.empty(16, dtype=np.int64)
    for x in range(lo, hi):
        for y in range(x, m):
            for q in range(16):
                ch[q] = prev[x, q] + prev[y, q]
            for r in labels:
                base = cost_by_mask[r]
                for s in range(16):
                    best = 1 << 60
                    for q in range(16):
                        v = ch[q] + cost_by_mask[r ^ s ^ q]
                        if v < best:
                            best = v
                    P[s] = best - base
                if prune and P[0] < 0:
                    continue
                for s in range(16):
                    if P[s] > bound or P[s] < -bound:
                        return W[:n].copy(), BOUND
                n = _insert(W, n, P)
                if n > cap:
                    return W[:n].copy(), CAPACITY
    return W[:n].copy(), OK


def _update_chunk(args):
    prev, labels, cost_by_mask, cap, prune, bound, lo, hi = args
    return _update(prev, labels, cost_by_mask, cap, prune, bound, lo, hi)


def _split(m: int, parts: int) -> list[tuple[int, int]]:
    # row x pairs with m - x partners; cut into ranges of roughly equal work
    if parts <= 1 or m < 2 * parts:
        return [(0, m)]
    work = np.cumsum(np.arange(m, 0, -1))
    cuts = [0] + [int(np.searchsorted(work, work[-1] * i / parts)) + 1 for i in range(1, parts)] + [m]
    cuts = sorted(set(min(c, m) for c in cuts))
    return [(a, b) for a, b in zip(cuts, cuts[1:]) if a < b]


def _value_bound(depth: int, a: CostTable) -> int:
    return 2 ** (depth - 1) * a(4)


def level_one(a: CostTable = DEFAULT_COST, mode: str = "full") -> MenuSet:
    labels = LABELS_LE2 if mode == "full" else np.array([ROOT_LABEL])
    rows = np.array([base_menu(int(R), a) for R in labels])
    return MenuSet(maximal(rows), 1, mode, a)


def next_level(
    prev: MenuSet,
    mode: str = "full",
    capacity: int = DEFAULT_CAPACITY,
    prune: bool = False,
    jobs: int = 1,
    pool: ProcessPoolExecutor | None = None,
) -> MenuSet:
    """W_{i+1} (``mode="full"``) or W'_{i+1} (``mode="root"``) from W_i."""
    if mode not in ("full", "root"):
        raise ValueError(f"unknown mode {mode!r}")
    a = prev.cost
    depth = prev.depth + 1
    labels = LABELS_LE2 if mode == "full" else np.array([ROOT_LABEL], dtype=np.int64)
    args = (np.ascontiguousarray(prev.menus), labels, a.by_mask(), capacity, prune, _value_bound(depth, a))
    chunks = _split(len(prev), jobs)
    if len(chunks) == 1 or pool is None:
        results = [_update_chunk(args + ch) for ch in chunks]
    else:
        results = list(pool.map(_update_chunk, [args + ch for ch in chunks]))
    for _, status in results:
        if status == CAPACITY:
            name = f"W{depth}" if mode == "full" else f"W'{depth}"
            raise CapacityExceeded(f"{name} exceeds capacity {capacity}")
        if status == BOUND:
            raise AssertionError(f"menu value outside +-{_value_bound(depth, a)} at depth {depth}")
    if len(results) == 1:
        menus = canonical(results[0][0])
    else:
        menus = maximal(np.concatenate([r[0] for r in results]), capacity)
    return MenuSet(menus, depth, mode, a)


def compute_W(
    depth: int,
    mode: str = "full",
    a: CostTable = DEFAULT_COST,
    capacity: int = DEFAULT_CAPACITY,
    prune: bool = False,
    jobs: int = 1,
) -> MenuSet:
    """W_depth, or W'_depth (root edge labeled {1,2}) when ``mode="root"``."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if depth == 1:
        return level_one(a, mode)
    levels = compute_levels(depth - 1, a, capacity, prune, jobs)
    with _pool(jobs) as pool:
        return next_level(levels[-1], mode, capacity, prune, jobs, pool)


def compute_levels(
    depth: int,
    a: CostTable = DEFAULT_COST,
    capacity: int = DEFAULT_CAPACITY,
    prune: bool = False,
    jobs: int = 1,
    progress: Callable[[MenuSet, float], None] | None = None,
) -> list[MenuSet]:
    """[W_1, ..., W_depth]."""
    out = [level_one(a)]
    if progress:
        progress(out[0], 0.0)
    with _pool(jobs) as pool:
        while len(out) < depth:
            t = time.perf_counter()
            out.append(next_level(out[-1], "full", capacity, prune, jobs, pool))
            if progress:
                progress(out[-1], time.perf_counter() - t)
    return out


class _NoPool:
    def __enter__(self):
        return None

    def __exit__(self, *exc):
        return False


def _pool(jobs: int):
    return ProcessPoolExecutor(jobs) if jobs > 1 else _NoPool()


# --------------------------------------------------------------------------
# the triple test


@nb.njit(cache=True)
def _final_chunk(W1, W, lo, hi, counts):
    """Scan W1[lo:hi] x W x W for a triple with no negative entry.

    Returns the indices of the first bad triple, or (-1, -1, -1). ``counts``
    accumulates which S served as witness; the S order is a move-to-front
    list reset for every row of W1 so results do not depend on chunking.
    """
    m = W.shape[0]
    T = np.empty(16, dtype=np.int64)
    order = np.empty(16, dtype=np.int64)
    for a in range(lo, hi):
        for s in range(16):
            order[s] = s
        for b in range(m):
            for s in range(16):
                T[s] = -(W1[a, s] + W[b, s])
            for c in range(b, m):
                found = False
                for k in range(16):
                    s = order[k]
                    if W[c, s] < T[s]:
                        found = True
                        counts[s] += 1
                        if k > 0:
                            order[k] = order[0]
                            order[0] = s
                        break
                if not found:
                    return a, b, c
    return -1, -1, -1


def _final_job(args):
    W1, W, lo, hi = args
    counts = np.zeros(16, dtype=np.int64)
    bad = _final_chunk(W1, W, lo, hi, counts)
    return bad, counts


@dataclass
class FinalTestResult:
    ok: bool
    counterexample: tuple[np.ndarray, np.ndarray, np.ndarray] | None = None
    witness_counts: np.ndarray = field(default_factory=lambda: np.zeros(16, dtype=np.int64))

    def __bool__(self):
        return self.ok


def final_test(Wp: MenuSet, W: MenuSet, jobs: int = 1) -> FinalTestResult:
    """Check that every (W1, W2, W3) in Wp x W x W has some S with W1+W2+W3 < 0.

    W2 and W3 are symmetric, so only pairs with index W2 <= W3 are scanned.
    """
    W1 = np.ascontiguousarray(Wp.menus)
    W2 = np.ascontiguousarray(W.menus)
    n = W1.shape[0]
    if jobs > 1 and n > 1:
        step = -(-n // (4 * jobs))
        tasks = [(W1, W2, lo, min(lo + step, n)) for lo in range(0, n, step)]
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_final_job, tasks))
    else:
        results = [_final_job((W1, W2, 0, n))]
    counts = np.sum([r[1] for r in results], axis=0) if results else np.zeros(16, dtype=np.int64)
    for (a, b, c), _ in results:
        if a >= 0:
            return FinalTestResult(False, (W1[a].copy(), W2[b].copy(), W2[c].copy()), counts)
    return FinalTestResult(True, None, counts)


# --------------------------------------------------------------------------
# the whole claim


@dataclass
class ClaimReport:
    d1: int
    d2: int
    cost: CostTable
    prune: bool
    sizes: dict[str, int]
    max_abs: dict[str, int]
    verdict: bool
    counterexample: tuple | None
    witness_counts: np.ndarray
    seconds: float
    level_seconds: dict[str, float]

    def lines(self) -> list[str]:
        out = [f"d1: {self.d1}", f"d2: {self.d2}", f"cost: {self.cost}", f"prune: {'on' if self.prune else 'off'}"]
        for name, size in self.sizes.items():
            out.append(f"size {name}: {size}")
        for name, v in self.max_abs.items():
            out.append(f"max_abs {name}: {v}")
        for s in range(16):
            out.append(f"witness S={fmt_mask(s)}: {int(self.witness_counts[s])}")
        if self.counterexample is not None:
            for tag, M in zip(("W1", "W2", "W3"), self.counterexample):
                out.append(f"counterexample {tag}: " + " ".join(map(str, M)))
        out.append(f"verdict: {'OK' if self.verdict else 'COUNTEREXAMPLE'}")
        return out

    def timing_lines(self) -> list[str]:
        out = [f"time {k}: {v:.1f}s" for k, v in self.level_seconds.items()]
        out.append(f"wall_time: {self.seconds:.1f}s")
        return out


def verify_claim(
    d1: int = 9,
    d2: int = 8,
    a: CostTable = DEFAULT_COST,
    prune: bool = False,
    jobs: int = 1,
    capacity: int = DEFAULT_CAPACITY,
    dump_dir: str | os.PathLike | None = None,
    log: Callable[[str], None] | None = None,
) -> ClaimReport:
    """Build W_1..W_max(d1-1, d2) and W'_d1, then run the triple test."""
    if d1 < 2 or d2 < 1:
        raise ValueError("need d1 >= 2 and d2 >= 1")
    t0 = time.perf_counter()
    timings: dict[str, float] = {}
    if dump_dir is not None:
        Path(dump_dir).mkdir(parents=True, exist_ok=True)

    def progress(W: MenuSet, secs: float):
        timings[W.name] = secs
        if log:
            log(f"{W.name}: {len(W)} menus ({secs:.1f}s)")
        if dump_dir is not None:
            fname = W.name.replace("'", "p") + ".txt"
            dump_menuset(W, Path(dump_dir) / fname)

    levels = compute_levels(max(d1 - 1, d2), a, capacity, prune, jobs, progress)
    t = time.perf_counter()
    with _pool(jobs) as pool:
        Wp = next_level(levels[d1 - 2], "root", capacity, prune, jobs, pool)
    progress(Wp, time.perf_counter() - t)
    W = levels[d2 - 1]
    t = time.perf_counter()
    res = final_test(Wp, W, jobs)
    timings["final_test"] = time.perf_counter() - t
    if log:
        log(f"final test: {'OK' if res.ok else 'counterexample'} ({timings['final_test']:.1f}s)")
    sizes = {L.name: len(L) for L in levels}
    sizes[Wp.name] = len(Wp)
    max_abs = {L.name: int(np.abs(L.menus).max()) if len(L) else 0 for L in levels + [Wp]}
    return ClaimReport(
        d1, d2, a, prune, sizes, max_abs, res.ok, res.counterexample, res.witness_counts,
        time.perf_counter() - t0, timings,
    )


# --------------------------------------------------------------------------
# dump format: header line, then one menu per line (16 ints, mask order)


def dump_menuset(W: MenuSet, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_menuset(W))


def format_menuset(W: MenuSet) -> str:
    head = f"# depth={W.depth} mode={W.mode} cost={W.cost} count={len(W)}\n"
    return head + "".join(" ".join(map(str, row)) + "\n" for row in W.menus)


def load_menuset(path) -> MenuSet:
    with open(path) as fh:
        head = fh.readline()
        meta = dict(kv.split("=", 1) for kv in head.lstrip("#").split())
        rows = np.loadtxt(fh, dtype=np.int64, ndmin=2).reshape(-1, 16)
    if rows.shape[0] != int(meta["count"]):
        raise ValueError(f"{path}: header count {meta['count']} but {rows.shape[0]} menus")
    a = CostTable.parse(meta["cost"], strict=False)
    return MenuSet(canonical(rows), int(meta["depth"]), meta["mode"], a)
