"""Greedy graph contraction estimating the max significant-node count per subgraph size.

One invocation handles one significance level alpha.  Adjacent fully-significant
nodes are contracted into supernodes first; the top-ratio supernode then
repeatedly absorbs a neighbor chosen among three merge options, recording
(size, significant-count) frontiers after each significance-adding merge.

Implementation notes, load-bearing for the n*log(n) runtime target:
  - supernode adjacency is kept in per-supernode Python sets, merged by
    rewiring the smaller boundary side;
  - non-significant supernodes never grow (every merge involves the
    significant root), so their sizes are static;
  - supernode degrees never increase (adjacency only consolidates), so merge
    option 3 can be served from lazily revalidated max-degree structures;
  - once a single supernode holds all remaining significance, no further
    frontier records are possible and the merge loop stops early
    (output-equivalent to running the contraction to a single supernode).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .graph import Graph

TRACE = None  # optional dict for perf instrumentation


@dataclass
class FrontierTable:
    """Best significant-node counts discovered per subgraph size, ratio-dominance filtered.

    sizes are strictly increasing and counts/sizes strictly decreasing; member
    sets (original-node ids of each recorded subgraph) are kept only when the
    search ran with record_sets=True.
    """

    alpha: float
    sizes: np.ndarray
    counts: np.ndarray
    members: Optional[list]

    def __len__(self) -> int:
        return len(self.sizes)


def greedy_merge(g: Graph, p: Optional[np.ndarray], alpha: float,
                 record_sets: bool = False,
                 node_sizes: Optional[np.ndarray] = None,
                 node_sig_counts: Optional[np.ndarray] = None) -> FrontierTable:
    """Run the single-alpha greedy merge and return the filtered frontier.

    With node_sizes/node_sig_counts the input nodes carry aggregated
    (size, significant-count) weights, as produced by tree compression;
    otherwise every node has size 1 and significance 1{p <= alpha}.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    n = g.node_count
    if node_sizes is not None or node_sig_counts is not None:
        if node_sizes is None or node_sig_counts is None:
            raise ValueError("node_sizes and node_sig_counts must be given together")
        base_n = np.asarray(node_sizes, dtype=np.int64)
        base_a = np.asarray(node_sig_counts, dtype=np.int64)
        if base_n.shape != (n,) or base_a.shape != (n,):
            raise ValueError("aggregate arrays must have one entry per node")
        if (base_a > base_n).any() or (base_n < 1).any() or (base_a < 0).any():
            raise ValueError("invalid aggregate counts")
    else:
        if p is None:
            raise ValueError("p-values required without aggregate counts")
        p = np.asarray(p, dtype=float)
        if p.shape != (n,):
            raise ValueError("p-value vector length must equal node count")
        base_n = np.ones(n, dtype=np.int64)
        base_a = (p <= alpha).astype(np.int64)

    state = _MergeState(g, base_n, base_a, record_sets)
    state.run()
    kept = state.filtered_records()
    members_out = None
    if record_sets:
        members_out = _reconstruct_members(kept, state.members_init, state.journal)
    sizes = np.asarray([r[0] for r in kept], dtype=np.int64)
    counts = np.asarray([r[1] for r in kept], dtype=np.int64)
    return FrontierTable(alpha=alpha, sizes=sizes, counts=counts, members=members_out)


class _MergeState:
    """Mutable contraction state for one greedy_merge invocation."""

    def __init__(self, g: Graph, base_n: np.ndarray, base_a: np.ndarray,
                 record_sets: bool):
        self.record_sets = record_sets
        n = g.node_count
        self.n = n

        # contract adjacent fully-significant nodes (BFS over components)
        full_sig = (base_a == base_n) & (base_a > 0)
        rep = np.arange(n, dtype=np.int64)
        if full_sig.any():
            seen = np.zeros(n, dtype=bool)
            for start in range(n):
                if not full_sig[start] or seen[start]:
                    continue
                seen[start] = True
                comp = [start]
                frontier = [start]
                while frontier:
                    nxt = []
                    for u in frontier:
                        for v in g.neighbors(u):
                            v = int(v)
                            if full_sig[v] and not seen[v]:
                                seen[v] = True
                                comp.append(v)
                                nxt.append(v)
                    frontier = nxt
                r = min(comp)
                for u in comp:
                    rep[u] = r

        alive = np.zeros(n, dtype=bool)
        alive[np.unique(rep)] = True
        self.alive = alive
        self.sn = np.zeros(n, dtype=np.int64)
        self.sa = np.zeros(n, dtype=np.int64)
        self.smin = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
        np.add.at(self.sn, rep, base_n)
        np.add.at(self.sa, rep, base_a)
        np.minimum.at(self.smin, rep, np.arange(n, dtype=np.int64))

        # supernode adjacency, split by whether the neighbor holds significance
        self.nbr_sig: list = [None] * n
        self.nbr_ns: list = [None] * n
        self.cache_sig: list = [None] * n   # append-only id lists mirroring the sets
        self.cache_ns: list = [None] * n
        for i in np.flatnonzero(alive):
            self.nbr_sig[i] = set()
            self.nbr_ns[i] = set()
        e = g.edges()
        if e.size:
            ru = rep[e[:, 0]]
            rv = rep[e[:, 1]]
            mask = ru != rv
            a = np.concatenate([ru[mask], rv[mask]])
            b = np.concatenate([rv[mask], ru[mask]])
            enc = np.unique(a * np.int64(n) + b)
            if len(enc):
                xs = (enc // n).astype(np.int64)
                ys = (enc % n).astype(np.int64)
                y_sig = self.sa[ys] > 0
                bounds = np.flatnonzero(np.diff(xs)) + 1
                starts = np.concatenate([[0], bounds])
                ends = np.concatenate([bounds, [len(xs)]])
                for s0, e0 in zip(starts, ends):
                    x = int(xs[s0])
                    seg = ys[s0:e0]
                    sig_part = seg[y_sig[s0:e0]]
                    ns_part = seg[~y_sig[s0:e0]]
                    self.nbr_sig[x] = set(sig_part.tolist())
                    self.nbr_ns[x] = set(ns_part.tolist())
        self.deg = np.zeros(n, dtype=np.int64)
        self.sigdeg = np.zeros(n, dtype=np.int64)
        for i in np.flatnonzero(alive):
            i = int(i)
            self.sigdeg[i] = len(self.nbr_sig[i])
            self.deg[i] = self.sigdeg[i] + len(self.nbr_ns[i])
            self.cache_sig[i] = list(self.nbr_sig[i])
            self.cache_ns[i] = list(self.nbr_ns[i])

        self.version = np.zeros(n, dtype=np.int64)
        self.retired = np.zeros(n, dtype=bool)
        self.active_sig = int((self.sa[alive] > 0).sum())

        if record_sets:
            self.members_init: dict[int, list[int]] = \
                {int(r): [] for r in np.flatnonzero(alive)}
            for u in range(n):
                self.members_init[int(rep[u])].append(u)
            self.journal: list[tuple[int, int]] = []
        else:
            self.members_init = {}
            self.journal = []

        ids = np.flatnonzero(alive).astype(np.int64)
        ratio = self.sa[ids] / self.sn[ids]
        self.heap = list(zip((-ratio).tolist(), (-self.sn[ids]).tolist(),
                             self.smin[ids].tolist(), ids.tolist(),
                             [0] * len(ids)))
        heapq.heapify(self.heap)

        # records: (size, sig_count, journal_pos, supernode_id, order)
        self.records: list[tuple[int, int, int, int, int]] = []
        top = ids[np.lexsort((self.smin[ids], -self.sn[ids], -ratio))[0]]
        self.records.append((int(self.sn[top]), int(self.sa[top]), 0, int(top), 0))
        self.order_counter = 1

        # candidate state for merge options 2/3 over the current root's
        # non-significant neighbors (rebuilt on root change, incrementally
        # maintained while the root persists)
        self.cur_root = -1
        self.ids2 = np.empty(0, dtype=np.int64)
        self.ptr2 = 0
        self.over2: list[tuple] = []
        self.ids3 = np.empty(0, dtype=np.int64)
        self.deg3 = np.empty(0, dtype=np.int64)
        self.ptr3 = 0
        self.over3: list[tuple] = []

    # ----- candidate structures ------------------------------------------

    def _live_cache(self, cache_list: list, idx: int) -> np.ndarray:
        lst = cache_list[idx]
        if not lst:
            return np.empty(0, dtype=np.int64)
        ids = np.fromiter(lst, dtype=np.int64, count=len(lst))
        live = self.alive[ids]
        if not live.all():
            ids = ids[live]
            cache_list[idx] = ids.tolist()
        return ids

    def _rebuild_candidates(self, root: int) -> None:
        ids = self._live_cache(self.cache_ns, root)
        if TRACE is not None:
            TRACE["switches"] += 1
            TRACE["switch_scan"] += len(ids)
        dsnap = self.deg[ids]
        order = np.lexsort((self.smin[ids], -dsnap))
        self.ids3 = ids[order]
        self.deg3 = dsnap[order]
        self.ptr3 = 0
        self.over3 = []
        q = ids[self.sigdeg[ids] >= 2]
        order2 = np.lexsort((self.smin[q], self.sn[q]))
        self.ids2 = q[order2]
        self.ptr2 = 0
        self.over2 = []

    def _peek_option2(self, root_ns: set) -> Optional[tuple[int, int, int]]:
        """Smallest (size, min-id) non-significant neighbor with another significant
        neighbor besides the root; returns (size, min_id, id) or None."""
        alive, sigdeg, sn, smin = self.alive, self.sigdeg, self.sn, self.smin
        akey = None
        while self.ptr2 < len(self.ids2):
            w = int(self.ids2[self.ptr2])
            if alive[w] and w in root_ns and sigdeg[w] >= 2:
                akey = (int(sn[w]), int(smin[w]), w)
                break
            self.ptr2 += 1
        hkey = None
        while self.over2:
            snw, m, w = self.over2[0]
            if alive[w] and w in root_ns and sigdeg[w] >= 2:
                hkey = (snw, m, w)
                break
            heapq.heappop(self.over2)
        if akey is None:
            return hkey
        if hkey is None:
            return akey
        return min(akey, hkey)

    def _peek_option3(self, root_ns: set) -> Optional[tuple[int, int, int]]:
        """Highest-degree non-significant neighbor; returns (degree, min_id, id) or None.

        Degrees never increase, so stale entries only overstate a degree and
        are re-queued with the current value.
        """
        alive, deg, smin = self.alive, self.deg, self.smin
        akey = None
        while self.ptr3 < len(self.ids3):
            w = int(self.ids3[self.ptr3])
            if not alive[w] or w not in root_ns:
                self.ptr3 += 1
                continue
            d = int(deg[w])
            if d == int(self.deg3[self.ptr3]):
                akey = (-d, int(smin[w]), w)
                break
            heapq.heappush(self.over3, (-d, int(smin[w]), w))
            self.ptr3 += 1
        hkey = None
        while self.over3:
            negd, m, w = self.over3[0]
            if not alive[w] or w not in root_ns:
                heapq.heappop(self.over3)
                continue
            d = int(deg[w])
            if -negd == d:
                hkey = (negd, m, w)
                break
            heapq.heappop(self.over3)
            heapq.heappush(self.over3, (-d, m, w))
        if akey is None:
            pick = hkey
        elif hkey is None:
            pick = akey
        else:
            pick = min(akey, hkey)
        if pick is None:
            return None
        return (-pick[0], pick[1], pick[2])

    def _best_sig_neighbor(self, root: int, a_root: int, b_root: int):
        """Merge option 1: neighbor holding significance with the best post-merge
        ratio (ties: larger significant count, then lower min member id)."""
        s = self.nbr_sig[root]
        if not s:
            return None
        ids = self._live_cache(self.cache_sig, root)
        if TRACE is not None:
            TRACE["scan_sig"] += len(ids)
        num = a_root + self.sa[ids]
        den = b_root + self.sn[ids]
        r = num / den
        cand = np.flatnonzero(r == r.max())
        best = None
        for j in cand:
            w = int(ids[j])
            nj, dj = int(num[j]), int(den[j])
            if best is None:
                best = (nj, dj, int(self.sa[w]), int(self.smin[w]), w)
                continue
            cmp = nj * best[1] - best[0] * dj
            if cmp > 0 or (cmp == 0 and
                           (int(self.sa[w]), -int(self.smin[w])) > (best[2], -best[3])):
                best = (nj, dj, int(self.sa[w]), int(self.smin[w]), w)
        return best

    # ----- main loop -------------------------------------------------------

    def _pop_root(self) -> Optional[int]:
        heap, alive, retired, version = self.heap, self.alive, self.retired, self.version
        while heap:
            entry = heapq.heappop(heap)
            i, ver = entry[3], entry[4]
            if alive[i] and not retired[i] and ver == version[i]:
                return i
        return None

    def run(self) -> None:
        sn, sa, smin = self.sn, self.sa, self.smin
        nbr_sig, nbr_ns = self.nbr_sig, self.nbr_ns
        cache_sig, cache_ns = self.cache_sig, self.cache_ns
        deg, sigdeg, alive = self.deg, self.sigdeg, self.alive

        while self.active_sig > 1:
            root = self._pop_root()
            if root is None:
                break
            rs = nbr_sig[root]
            rn = nbr_ns[root]
            if not rs and not rn:
                self.retired[root] = True
                if sa[root] > 0:
                    self.active_sig -= 1
                continue
            if root != self.cur_root:
                self._rebuild_candidates(root)
                self.cur_root = root
            if TRACE is not None:
                TRACE["iters"] += 1
            a_root = int(sa[root])
            b_root = int(sn[root])

            c1 = self._best_sig_neighbor(root, a_root, b_root)
            c2 = self._peek_option2(rn)
            c3 = self._peek_option3(rn)

            # highest post-merge ratio wins; priority 1 > 2 > 3 on exact ties
            choice = None
            best_num = best_den = None
            if c1 is not None:
                choice, best_num, best_den = 1, c1[0], c1[1]
            if c2 is not None:
                num, den = a_root, b_root + c2[0]
                if choice is None or num * best_den > best_num * den:
                    choice, best_num, best_den = 2, num, den
            if c3 is not None:
                num, den = a_root, b_root + int(sn[c3[2]])
                if choice is None or num * best_den > best_num * den:
                    choice, best_num, best_den = 3, num, den

            w = {1: c1[4] if c1 else None, 2: c2[2] if c2 else None,
                 3: c3[2] if c3 else None}[choice]
            merged_n = b_root + int(sn[w])
            merged_a = a_root + int(sa[w])

            # keep the id of the side with the larger boundary when both hold
            # significance; the merged supernode is always significant
            w_sig = sa[w] > 0
            if w_sig and deg[w] > deg[root]:
                winner, loser = int(w), int(root)
            else:
                winner, loser = int(root), int(w)

            loser_sig = sa[loser] > 0
            win_sig_set = nbr_sig[winner]
            win_ns_set = nbr_ns[winner]
            at_root = winner == self.cur_root
            for x in nbr_sig[loser]:
                if x == winner:
                    continue
                xs = nbr_sig[x]
                if loser_sig:
                    xs.discard(loser)
                    sigdeg[x] -= 1
                else:
                    nbr_ns[x].discard(loser)
                deg[x] -= 1
                if winner not in xs:
                    xs.add(winner)
                    cache_sig[x].append(winner)
                    sigdeg[x] += 1
                    deg[x] += 1
                if x not in win_sig_set:
                    win_sig_set.add(x)
                    cache_sig[winner].append(x)
                    sigdeg[winner] += 1
                    deg[winner] += 1
            for x in nbr_ns[loser]:
                if x == winner:
                    continue
                xs = nbr_sig[x]
                if loser_sig:
                    xs.discard(loser)
                    sigdeg[x] -= 1
                else:
                    nbr_ns[x].discard(loser)
                deg[x] -= 1
                if winner not in xs:
                    xs.add(winner)
                    cache_sig[x].append(winner)
                    sigdeg[x] += 1
                    deg[x] += 1
                    # x gained a significant neighbor: may now qualify for option 2
                    if at_root and x in win_ns_set and sigdeg[x] >= 2:
                        heapq.heappush(self.over2, (int(sn[x]), int(smin[x]), x))
                if x not in win_ns_set:
                    win_ns_set.add(x)
                    cache_ns[winner].append(x)
                    deg[winner] += 1
                    if at_root:
                        if sigdeg[x] >= 2:
                            heapq.heappush(self.over2, (int(sn[x]), int(smin[x]), x))
                        heapq.heappush(self.over3, (-int(deg[x]), int(smin[x]), x))
            if loser_sig:
                win_sig_set.discard(loser)
                sigdeg[winner] -= 1
            else:
                win_ns_set.discard(loser)
            deg[winner] -= 1
            nbr_sig[loser] = None
            nbr_ns[loser] = None
            cache_sig[loser] = None
            cache_ns[loser] = None

            if w_sig:
                self.active_sig -= 1
            sn[winner] = merged_n
            sa[winner] = merged_a
            smin[winner] = min(int(smin[root]), int(smin[w]))
            alive[loser] = False
            self.version[winner] += 1
            heapq.heappush(self.heap, (-(sa[winner] / sn[winner]), -int(sn[winner]),
                                       int(smin[winner]), winner, int(self.version[winner])))
            if self.record_sets:
                self.journal.append((winner, loser))
            if winner != self.cur_root:
                # merged supernode adopted the absorbed side's id; rebuild next time
                self.cur_root = -1

            if choice == 1:
                self.records.append((merged_n, merged_a, len(self.journal),
                                     winner, self.order_counter))
                self.order_counter += 1

    def filtered_records(self) -> list[tuple[int, int, int, int, int]]:
        """Dedupe to the best count per size, then keep only strictly
        ratio-improving entries scanning sizes from largest to smallest."""
        best_per_n: dict[int, tuple[int, int, int, int, int]] = {}
        for rec in self.records:
            cur = best_per_n.get(rec[0])
            if cur is None or rec[1] > cur[1]:
                best_per_n[rec[0]] = rec
        by_size_desc = sorted(best_per_n.values(), key=lambda r: -r[0])
        kept = [by_size_desc[0]]
        prev_count, prev_size = by_size_desc[0][1], by_size_desc[0][0]
        for rec in by_size_desc[1:]:
            if rec[1] * prev_size > prev_count * rec[0]:
                kept.append(rec)
                prev_count, prev_size = rec[1], rec[0]
        kept.sort(key=lambda r: r[0])
        return kept


def _reconstruct_members(kept, members_init, journal):
    """Replay the merge journal once, snapshotting member sets for surviving records."""
    members = {k: list(v) for k, v in members_init.items()}
    out_by_order = {}
    ptr = 0
    for rec in sorted(kept, key=lambda r: r[2]):
        size, count, jpos, sup_id, order = rec
        while ptr < jpos:
            winner, loser = journal[ptr]
            members[winner].extend(members.pop(loser))
            ptr += 1
        out_by_order[order] = frozenset(members[sup_id])
    return [out_by_order[r[4]] for r in kept]


def frontier_interpolate(f: FrontierTable, n_max: int) -> np.ndarray:
    """Dense max-count estimates for sizes 1..n_max by linear interpolation.

    Constant extrapolation beyond the recorded range; values clipped to [0, N].
    Index i holds the estimate for subgraph size i+1.
    """
    if len(f) == 0:
        raise ValueError("empty frontier")
    xs = np.arange(1, n_max + 1, dtype=float)
    out = np.interp(xs, f.sizes.astype(float), f.counts.astype(float))
    return np.clip(out, 0.0, xs)
