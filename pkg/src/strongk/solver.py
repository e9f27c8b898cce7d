"""Exact strong subgraph k-arc-connectivity with packing certificates.

Arc sets are handled as integer bitmasks; bit ``arc_index(n, u, v)`` stands for
arc ``(u, v)``, so masks of different digraphs on the same vertex count are
comparable and bit order equals lexicographic arc order.

The exact solver packs inclusion-minimal S-strong arc sets ("candidates").
Any packing shrinks part by part to minimal candidates, so the maximum over
candidate packings is the maximum over all packings.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .digraph import (
    Arc,
    Digraph,
    arc_index,
    arc_mask,
    as_vertex_set,
    from_arc_mask,
    is_strong,
    strong_components,
)

DEFAULT_CANDIDATE_CAP = 50_000
DEFAULT_ORACLE_THRESHOLD = 14

# below this order, candidates are filtered from a cached list for K↔_n
_UNIVERSE_ORDER = 4


class CapExceeded(RuntimeError):
    """The instance is too large for exhaustive treatment under the configured caps."""


@dataclass(frozen=True)
class Packing:
    S: tuple[int, ...]
    parts: tuple[frozenset[Arc], ...]

    def __len__(self):
        return len(self.parts)


@dataclass(frozen=True)
class LambdaResult:
    value: int
    witness_S: tuple[int, ...]
    certificate: Packing


@lru_cache(maxsize=None)
def _tables(n: int):
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    tails = tuple(u for u, _ in pairs)
    heads = tuple(v for _, v in pairs)
    out_masks = [0] * n
    in_masks = [0] * n
    for i, (u, v) in enumerate(pairs):
        out_masks[u] |= 1 << i
        in_masks[v] |= 1 << i
    return tuple(pairs), tails, heads, tuple(out_masks), tuple(in_masks)


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _reach_both(n: int, mask: int, start: int) -> tuple[int, int]:
    """Vertex masks reachable from / reaching ``start`` using arcs of ``mask``."""
    _, tails, heads, _, _ = _tables(n)
    succ = [0] * n
    pred = [0] * n
    m = mask
    while m:
        low = m & -m
        i = low.bit_length() - 1
        succ[tails[i]] |= 1 << heads[i]
        pred[heads[i]] |= 1 << tails[i]
        m ^= low
    result = []
    for adj in (succ, pred):
        seen = frontier = 1 << start
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~seen
            seen |= frontier
        result.append(seen)
    return result[0], result[1]


def _forward_reach(n: int, mask: int, start: int) -> int:
    _, tails, heads, _, _ = _tables(n)
    succ = [0] * n
    m = mask
    while m:
        low = m & -m
        i = low.bit_length() - 1
        succ[tails[i]] |= 1 << heads[i]
        m ^= low
    seen = frontier = 1 << start
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= succ[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def _vertex_mask(S: Iterable[int]) -> int:
    out = 0
    for v in S:
        out |= 1 << v
    return out


def _holds_S(n: int, mask: int, S: Sequence[int], smask: int) -> bool:
    """True iff the arcs of ``mask`` put every vertex of S in one strong component.

    Equivalently, ``mask`` contains an S-strong arc set (the arcs inside that
    component).
    """
    fwd, bwd = _reach_both(n, mask, S[0])
    return smask & fwd & bwd == smask


def _mask_to_arcs(n: int, mask: int) -> frozenset[Arc]:
    pairs = _tables(n)[0]
    return frozenset(pairs[i] for i in _bits(mask))


def _arcs_to_mask(n: int, arcs: Iterable[Arc]) -> int:
    mask = 0
    for u, v in arcs:
        mask |= 1 << arc_index(n, u, v)
    return mask


def _candidate_key(mask: int) -> tuple[int, list[int]]:
    return bin(mask).count("1"), list(_bits(mask))


def _enumerate_minimal(n: int, dmask: int, S: tuple[int, ...], cap: int) -> list[int]:
    """Minimal S-strong arc sets inside ``dmask``, grown from S[0] by ears.

    A minimal S-strong set is minimally strong, so it has an ear decomposition
    starting at S[0] without single-arc ears; and no proper prefix of that
    decomposition covers S.  Growing by nontrivial ears and stopping once S is
    covered therefore reaches every minimal set.  Leaves that are not minimal
    are discarded.
    """
    _, tails, heads, out_masks, _ = _tables(n)
    smask = _vertex_mask(S)
    if not _holds_S(n, dmask, S, smask):
        return []
    out_arcs = [[(i, heads[i]) for i in _bits(out_masks[v] & dmask)] for v in range(n)]
    found: set[int] = set()
    seen: set[int] = set()

    def is_minimal(mask: int) -> bool:
        for i in _bits(mask):
            if _holds_S(n, mask & ~(1 << i), S, smask):
                return False
        return True

    def ears(vmask: int):
        # paths a -> w1 -> ... -> wr -> b, r >= 1, w's new, a and b old
        for a in _bits(vmask):
            stack = [(a, 0, 0)]
            while stack:
                v, arcs, new = stack.pop()
                for i, w in out_arcs[v]:
                    bit = 1 << w
                    if new and vmask & bit:
                        yield arcs | (1 << i), new
                    elif not (vmask | new) & bit:
                        stack.append((w, arcs | (1 << i), new | bit))

    stack = [(0, 1 << S[0])]
    while stack:
        inc, vmask = stack.pop()
        for arcs, new in ears(vmask):
            nxt = inc | arcs
            if nxt in seen:
                continue
            seen.add(nxt)
            covered = vmask | new
            if covered & smask == smask:
                if is_minimal(nxt):
                    found.add(nxt)
                    if len(found) > cap:
                        raise CapExceeded(
                            f"more than {cap} minimal S-strong arc sets; raise the candidate cap"
                        )
            else:
                stack.append((nxt, covered))
    return sorted(found, key=_candidate_key)


@lru_cache(maxsize=None)
def _universe_candidates(n: int, S: tuple[int, ...]) -> tuple[int, ...]:
    full = (1 << (n * (n - 1))) - 1
    return tuple(_enumerate_minimal(n, full, S, cap=10**9))


def _candidate_masks(D: Digraph, S: tuple[int, ...], cap: int) -> list[int]:
    dmask = arc_mask(D)
    if D.n <= _UNIVERSE_ORDER:
        found = [c for c in _universe_candidates(D.n, S) if c & ~dmask == 0]
        if len(found) > cap:
            raise CapExceeded(f"more than {cap} minimal S-strong arc sets; raise the candidate cap")
        return found
    return _enumerate_minimal(D.n, dmask, S, cap)


def minimal_candidates(
    D: Digraph, S: Iterable[int], cap: int = DEFAULT_CANDIDATE_CAP
) -> list[frozenset[Arc]]:
    """All inclusion-minimal arc sets whose digraph is strong and spans S.

    Sorted by size, then lexicographically by sorted arc list.
    """
    S = as_vertex_set(S, D.n)
    return [_mask_to_arcs(D.n, c) for c in _candidate_masks(D, S, cap)]


def _pack(
    n: int,
    dmask: int,
    S: tuple[int, ...],
    candidates: list[int],
    stop_at: int | None = None,
) -> list[int]:
    """Maximum set of pairwise disjoint candidates (or the first ``stop_at`` found)."""
    if not candidates:
        return []
    _, _, _, out_masks, in_masks = _tables(n)
    s_out = [out_masks[s] & dmask for s in S]
    s_in = [in_masks[s] & dmask for s in S]
    by_arc: dict[int, list[int]] = {}
    for c in candidates:
        for i in _bits(c):
            by_arc.setdefault(i, []).append(c)
    used = 0
    for c in candidates:
        used |= c
    limit = stop_at

    best: list[int] = []
    chosen: list[int] = []

    def bound(free: int) -> int:
        b = min(bin(free & m).count("1") for m in s_out)
        return min(b, min(bin(free & m).count("1") for m in s_in))

    def search(free: int) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
            if limit is not None and len(best) >= limit:
                return True
        if len(chosen) + bound(free) <= len(best):
            return False
        # branch on the lowest free out-arc of the terminal with fewest free out-arcs
        pick = min(s_out, key=lambda m: (bin(free & m).count("1"), (free & m) & -(free & m)))
        avail = free & pick
        low = avail & -avail
        a = low.bit_length() - 1
        for c in by_arc.get(a, ()):
            if c & free == c:
                chosen.append(c)
                if search(free & ~c):
                    return True
                chosen.pop()
        return search(free & ~low)

    search(dmask & used)
    return best


def _packing(n: int, S: tuple[int, ...], masks: Iterable[int]) -> Packing:
    return Packing(S, tuple(_mask_to_arcs(n, m) for m in masks))


def lambda_S_exact(
    D: Digraph, S: Iterable[int], cap: int = DEFAULT_CANDIDATE_CAP
) -> LambdaResult:
    S = as_vertex_set(S, D.n)
    cands = _candidate_masks(D, S, cap)
    parts = _pack(D.n, arc_mask(D), S, cands)
    return LambdaResult(len(parts), S, _packing(D.n, S, parts))


def decide_lambda_S(
    D: Digraph, S: Iterable[int], ell: int, cap: int = DEFAULT_CANDIDATE_CAP
) -> tuple[bool, Packing | None]:
    """Is ``λ_S(D) >= ell``?  On YES, an ``ell``-part certificate is returned."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    S = as_vertex_set(S, D.n)
    cands = _candidate_masks(D, S, cap)
    parts = _pack(D.n, arc_mask(D), S, cands, stop_at=ell)
    if len(parts) >= ell:
        return True, _packing(D.n, S, parts[:ell])
    return False, None


def lambda_k_exact(D: Digraph, k: int, cap: int = DEFAULT_CANDIDATE_CAP) -> LambdaResult:
    """Minimum of λ_S over all k-subsets; ties go to the lexicographically first S."""
    if not 2 <= k <= D.n:
        raise ValueError(f"k must satisfy 2 <= k <= n = {D.n}, got {k}")
    dmask = arc_mask(D)
    best: tuple[int, tuple[int, ...], list[int]] | None = None
    for S in itertools.combinations(range(D.n), k):
        cands = _candidate_masks(D, S, cap)
        if best is None:
            parts = _pack(D.n, dmask, S, cands)
            best = (len(parts), S, parts)
        else:
            # only a strictly smaller value can replace the current witness
            parts = _pack(D.n, dmask, S, cands, stop_at=best[0])
            if len(parts) < best[0]:
                best = (len(parts), S, parts)
        if best[0] == 0:
            break
    value, S, parts = best
    return LambdaResult(value, S, _packing(D.n, S, parts))


@lru_cache(maxsize=1 << 16)
def lambda_k_value(D: Digraph, k: int) -> int:
    """Cached ``lambda_k_exact(D, k).value``."""
    return lambda_k_exact(D, k).value


def lambda_k_at_least(
    D: Digraph, k: int, ell: int, cap: int = DEFAULT_CANDIDATE_CAP
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide ``λ_k(D) >= ell``; on NO, return the first k-set with ``λ_S < ell``.

    A certificate found for one terminal set is tried on later sets before
    searching again; it is re-checked with :func:`verify_packing` each time.
    """
    known: list[Packing] = []
    for S in itertools.combinations(range(D.n), k):
        reused = False
        for cert in known:
            if verify_packing(D, Packing(S, cert.parts)):
                reused = True
                break
        if reused:
            continue
        ok, cert = decide_lambda_S(D, S, ell, cap)
        if not ok:
            return False, S
        known.append(cert)
    return True, None


def verify_packing(D: Digraph, packing: Packing) -> bool:
    """Check disjointness, membership in D, and that each part is strong and spans S."""
    S = packing.S
    if len(set(S)) < 2 or any(not 0 <= s < D.n for s in S):
        return False
    seen: set[Arc] = set()
    for part in packing.parts:
        part = frozenset(part)
        if not part or not part <= D.arcs or part & seen:
            return False
        seen |= part
        verts = sorted({v for a in part for v in a})
        if not set(S) <= set(verts):
            return False
        relabel = {v: i for i, v in enumerate(verts)}
        sub = Digraph(len(verts), frozenset((relabel[u], relabel[v]) for u, v in part))
        if not is_strong(sub):
            return False
    return True


@lru_cache(maxsize=1 << 20)
def _oracle_holds(n: int, S: tuple[int, ...], mask: int) -> bool:
    # Tarjan on the explicit digraph, not the bitmask reachability used above
    target = set(S)
    return any(target <= comp for comp in strong_components(from_arc_mask(n, mask)))


@lru_cache(maxsize=1 << 20)
def _oracle_best(n: int, S: tuple[int, ...], mask: int) -> int:
    # mask holds S; split off the part containing the lowest arc, every
    # other arc going to the remaining parts
    low = mask & -mask
    rest = mask ^ low
    best = 1
    sub = rest
    while True:
        part = low | sub
        other = mask & ~part
        if other and _oracle_holds(n, S, part) and _oracle_holds(n, S, other):
            best = max(best, 1 + _oracle_best(n, S, other))
        if sub == 0:
            break
        sub = (sub - 1) & rest
    return best


def oracle_lambda_S(
    D: Digraph, S: Iterable[int], threshold: int = DEFAULT_ORACLE_THRESHOLD
) -> int:
    """Brute-force λ_S by exhaustive assignment of arcs to parts.

    Independent of the candidate machinery: every arc is assigned to some
    part (a superset of an S-strong arc set is S-strong, so unused arcs can
    join any part) and each assignment's parts are validated directly.
    """
    S = as_vertex_set(S, D.n)
    if D.m > threshold:
        raise CapExceeded(f"oracle limited to {threshold} arcs, digraph has {D.m}")
    mask = _arcs_to_mask(D.n, D.arcs)
    if not mask or not _oracle_holds(D.n, S, mask):
        return 0
    return _oracle_best(D.n, S, mask)
