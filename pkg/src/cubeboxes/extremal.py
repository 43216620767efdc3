"""Exact search for the largest family of codimension-k boxes in {0,1}^n
with distinct prop sets and pairwise disjoint members.

The problem is a maximum clique search on the compatibility graph whose
vertices are all codimension-k boxes and whose edges join boxes that are
disjoint and have different prop sets.  Branch and bound follows the usual
greedy-colouring scheme on bitset adjacency.

Determinism: the tree is split into independent subtasks (one per second
vertex when the first box is pinned by symmetry, one per first vertex
otherwise).  Subtasks never share an incumbent, so each one's trace depends
only on its own inputs; results are merged in subtask order.  A node budget
is spent in that same order, which makes ``best_size``, ``status``, the
witness and ``nodes_explored`` identical for any worker count.  Only the
wall-clock limit is inherently nondeterministic.
"""

from __future__ import annotations

import logging
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

from .boxcore import Box, BoxFamily, serialize_family, verify_family

log = logging.getLogger(__name__)

MAX_CANDIDATES = 20_000

WITNESS_FOUND = "witness-found"
MAXIMUM_PROVED = "maximum-proved"
TARGET_REFUTED = "target-refuted"
BUDGET_EXHAUSTED = "budget-exhausted"


def family_bound(k: int, n: int) -> int | None:
    return 2**k - 2 if 3 <= k < n else None


def enumerate_candidates(k: int, n: int) -> list[Box]:
    """All boxes with ``|prop| = k``: prop sets in colex order, then value masks ascending."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    count = comb(n, k) * 2**k
    if count > MAX_CANDIDATES:
        raise ValueError(f"{count} candidates exceed the guard of {MAX_CANDIDATES}")
    out = []
    # colex order on k-subsets is increasing mask order; Gosper's hack walks it
    fixed = (1 << k) - 1
    limit = 1 << n
    while fixed < limit:
        sub = 0
        while True:
            out.append(Box(n, fixed, sub))
            sub = (sub - fixed) & fixed
            if sub == 0:
                break
        low = fixed & -fixed
        ripple = fixed + low
        fixed = (((ripple ^ fixed) >> 2) // low) | ripple
    return out


def compatibility_graph(cands: list[Box]) -> tuple[list[int], list[int]]:
    """Bitset adjacency plus one bitset per prop class."""
    n = cands[0].n if cands else 0
    by_value = [[0, 0] for _ in range(n)]
    classes: dict[int, int] = {}
    for idx, b in enumerate(cands):
        bit = 1 << idx
        classes[b.fixed] = classes.get(b.fixed, 0) | bit
        for c in range(n):
            if b.fixed >> c & 1:
                by_value[c][b.values >> c & 1] |= bit
    adj = []
    for b in cands:
        nbrs = 0
        for c in range(n):
            if b.fixed >> c & 1:
                nbrs |= by_value[c][1 - (b.values >> c & 1)]
        adj.append(nbrs & ~classes[b.fixed])
    return adj, list(classes.values())


@dataclass
class SearchProblem:
    k: int
    n: int
    target: int | None = None  # None: prove the maximum
    node_limit: int | None = None
    time_limit: float | None = None
    symmetry_breaking: bool = True
    jobs: int = 1

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")

    @property
    def mode(self) -> str:
        return "prove-maximum" if self.target is None else "find-witness"


@dataclass
class SearchResult:
    best_family: BoxFamily
    best_size: int
    status: str
    nodes_explored: int
    upper_bound_used: int | None
    problem: SearchProblem = field(repr=False)


@dataclass
class _SubResult:
    nodes: int
    trace: list[tuple[int, tuple[int, ...]]]  # (node count at improvement, clique)
    finished: bool
    hit_stop: bool

    def truncated(self, budget: int | None) -> "_SubResult":
        if budget is None or self.nodes <= budget:
            return self
        trace = [t for t in self.trace if t[0] <= budget]
        return _SubResult(budget, trace, False, False)


class _Abort(Exception):
    pass


class _Stop(Exception):
    pass


class _Subsearch:
    def __init__(self, adj, classes, floor, stop_at, node_limit, deadline, cancel=None,
                 index=0):
        self.adj = adj
        self.classes = classes
        self.best = floor  # only strictly larger cliques are recorded
        self.stop_at = stop_at
        self.node_limit = node_limit
        self.deadline = deadline
        self.cancel = cancel
        self.index = index
        self.nodes = 0
        self.trace: list[tuple[int, tuple[int, ...]]] = []

    def run(self, clique: list[int], cand: int) -> _SubResult:
        finished = hit = False
        try:
            self._record(clique)
            if cand:
                self._expand(clique, cand)
            finished = True
        except _Stop:
            finished = hit = True
        except _Abort:
            pass
        return _SubResult(self.nodes, self.trace, finished, hit)

    def _record(self, clique):
        if len(clique) > self.best:
            self.best = len(clique)
            self.trace.append((self.nodes, tuple(sorted(clique))))
            if self.stop_at is not None and self.best >= self.stop_at:
                raise _Stop

    def _tick(self):
        if self.node_limit is not None and self.nodes >= self.node_limit:
            raise _Abort
        self.nodes += 1
        if self.nodes & 1023 == 0:
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Abort
            if self.cancel is not None and self.cancel.value < self.index:
                raise _Abort

    def _expand(self, clique, cand):
        self._tick()
        size = len(clique)
        classes_left = sum(1 for c in self.classes if c & cand)
        if size + classes_left <= self.best:
            return
        adj = self.adj
        order, colours = [], []
        uncoloured = cand
        colour = 0
        while uncoloured:
            colour += 1
            q = uncoloured
            while q:
                low = q & -q
                v = low.bit_length() - 1
                uncoloured &= ~low
                q &= ~low & ~adj[v]
                order.append(v)
                colours.append(colour)
        for i in range(len(order) - 1, -1, -1):
            if size + colours[i] <= self.best:
                return
            v = order[i]
            clique.append(v)
            sub = cand & adj[v]
            if sub:
                self._expand(clique, sub)
            else:
                self._record(clique)
            clique.pop()
            cand &= ~(1 << v)


# worker-process state, installed by _init_worker
_W: dict = {}


def _init_worker(adj, classes, cancel):
    _W.update(adj=adj, classes=classes, cancel=cancel)


def _run_subtask(args):
    index, clique, cand, floor, stop_at, node_limit, deadline = args
    s = _Subsearch(_W["adj"], _W["classes"], floor, stop_at, node_limit, deadline,
                   _W.get("cancel"), index)
    return s.run(list(clique), cand)


def _greedy(adj: list[int], start: int = 0) -> tuple[int, ...]:
    clique = [start]
    cand = adj[start]
    while cand:
        v = (cand & -cand).bit_length() - 1
        clique.append(v)
        cand &= adj[v]
    return tuple(clique)


def _subtasks(adj: list[int], symmetry: bool):
    """Independent pieces covering every clique (besides the greedy seed)."""
    def above(v):
        return ~((2 << v) - 1)

    if symmetry:
        # all codimension-k boxes are equivalent under coordinate permutations
        # and bit flips, so some optimum contains candidate 0
        first = adj[0]
        w = first
        while w:
            v = (w & -w).bit_length() - 1
            w &= w - 1
            yield (0, v), first & adj[v] & above(v)
    else:
        for u in range(len(adj)):
            yield (u,), adj[u] & above(u)


def search(p: SearchProblem) -> SearchResult:
    cands = enumerate_candidates(p.k, p.n)
    adj, classes = compatibility_graph(cands)
    bound = family_bound(p.k, p.n)
    stop_at = None
    if p.target is not None:
        stop_at = p.target if bound is None else min(p.target, bound)
    deadline = None if p.time_limit is None else time.monotonic() + p.time_limit

    best = _greedy(adj)
    status = None
    if stop_at is not None and len(best) >= stop_at:
        status = WITNESS_FOUND if len(best) >= p.target else TARGET_REFUTED
    # in witness mode only cliques reaching stop_at matter
    floor = len(best) if stop_at is None else max(len(best), stop_at - 1)
    tasks = [(i, clique, cand, floor, stop_at, p.node_limit, deadline)
             for i, (clique, cand) in enumerate(_subtasks(adj, p.symmetry_breaking))]

    used = 0
    for res in ([] if status else _results(tasks, adj, classes, p)):
        remaining = None if p.node_limit is None else p.node_limit - used
        res = res.truncated(remaining)
        used += res.nodes
        if res.trace:
            found = res.trace[-1][1]
            if len(found) > len(best) or (len(found) == len(best) and found < best):
                best = found
        if res.hit_stop:
            status = WITNESS_FOUND if len(best) >= p.target else TARGET_REFUTED
            break
        if not res.finished:
            status = BUDGET_EXHAUSTED
            break
    if status is None:
        status = MAXIMUM_PROVED if p.target is None else TARGET_REFUTED

    fam = BoxFamily(p.n, p.k, tuple(cands[i] for i in best))
    assert verify_family(fam).ok, "search produced an invalid family"
    log.info("search k=%d n=%d: size %d, %s, %d nodes", p.k, p.n, len(best), status, used)
    return SearchResult(fam, len(best), status, used, bound, p)


def _results(tasks, adj, classes, p: SearchProblem):
    """Subtask results in task order; stops early once the caller breaks."""
    if p.jobs <= 1 or len(tasks) <= 1:
        _init_worker(adj, classes, None)
        used = 0
        for t in tasks:
            limit = None if p.node_limit is None else p.node_limit - used
            res = _run_subtask(t[:5] + (limit, t[6]))
            used += res.nodes
            yield res
        return
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    cancel = ctx.Value("i", len(tasks))
    with ProcessPoolExecutor(p.jobs, mp_context=ctx, initializer=_init_worker,
                             initargs=(adj, classes, cancel)) as pool:
        futures = [pool.submit(_run_subtask, t) for t in tasks]
        try:
            for i, fut in enumerate(futures):
                res = fut.result()
                if res.hit_stop or not res.finished:
                    # later subtasks cannot change the outcome
                    cancel.value = i
                yield res
        finally:
            cancel.value = -1
            for fut in futures:
                fut.cancel()


def certify(f: BoxFamily, claim: int) -> bool:
    """Independent re-check of a witness: verified and at least ``claim`` boxes."""
    return verify_family(f).ok and len(f) >= claim


def serialize_result(r: SearchResult) -> str:
    head = [f"# n={r.best_family.n} k={r.best_family.k}",
            f"# status={r.status}",
            f"# size={r.best_size}",
            f"# nodes={r.nodes_explored}"]
    return "\n".join(head) + "\n" + serialize_family(r.best_family)
