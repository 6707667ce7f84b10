"""Brute-force ground truth for small instances.

Longest monochromatic paths use a subset dynamic program: ``dp[mask]`` is the
bitmask of vertices at which some path with vertex set ``mask`` can end.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .coloring import GeometricColoring, matchings, reordering, to_total_graph
from .errors import PreconditionError
from .graphmodel import Color, SimpleForest, TotalColoredGraph

__all__ = [
    "DEFAULT_PATH_CAP",
    "DEFAULT_FAITHFUL_CAP",
    "GG_EXHAUSTIVE_CAP",
    "longest_mono_path",
    "longest_mono_path_naive",
    "gg_bound",
    "gg_verify",
    "GGReport",
    "optimal_simple_forest",
    "faithfulness_check",
    "FaithfulnessReport",
]

DEFAULT_PATH_CAP = 20
DEFAULT_FAITHFUL_CAP = 18
GG_EXHAUSTIVE_CAP = 7


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def _adjacency_masks(G: TotalColoredGraph, color: Color) -> list[int]:
    hit = G.edge_matrix == Color(color)
    weights = 1 << np.arange(G.n, dtype=np.int64)
    return [int((row * weights).sum()) for row in hit.astype(np.int64)]


def _path_dp(adj: list[int], starts: int) -> np.ndarray:
    """``dp[mask]``: endpoints of paths on ``mask`` beginning in ``starts``."""
    n = len(adj)
    size = 1 << n
    dtype = np.int32 if n < 31 else np.int64
    dp = np.zeros(size, dtype=dtype)
    for v in range(n):
        if starts >> v & 1:
            dp[1 << v] = 1 << v
    masks = np.arange(size, dtype=np.int64)
    layers = _popcount(masks)
    for layer in range(1, n):
        sel = masks[(layers == layer) & (dp != 0)]
        if not sel.size:
            break
        ends = dp[sel]
        for v in range(n):
            src = sel[(ends >> v & 1).astype(bool)]
            if not src.size:
                continue
            nb = adj[v]
            w = nb
            while w:
                low = w & -w
                b = low.bit_length() - 1
                w ^= low
                tgt = src[(src >> b & 1) == 0] | low
                dp[tgt] |= low
    return dp


def _witness(adj: list[int], dp: np.ndarray, mask: int) -> list[int]:
    """Rebuild one path with vertex set ``mask`` from the table."""
    end = int(dp[mask])
    v = (end & -end).bit_length() - 1
    path = [v]
    while mask & (mask - 1):
        prev_mask = mask ^ (1 << v)
        cand = int(dp[prev_mask]) & adj[v]
        u = (cand & -cand).bit_length() - 1
        path.append(u)
        mask, v = prev_mask, u
    return [x + 1 for x in reversed(path)]


def longest_mono_path(
    G: TotalColoredGraph, color: Color, cap: int = DEFAULT_PATH_CAP
) -> tuple[int, tuple[int, ...]]:
    """Number of vertices of a longest path using only ``color`` edges, with a witness.

    Vertex colours are ignored.  A single vertex counts as a path, so the
    answer is at least 1 on a nonempty graph.
    """
    n = G.n
    if n > cap:
        raise PreconditionError(f"n = {n} exceeds the cap {cap}")
    if n == 0:
        return 0, ()
    adj = _adjacency_masks(G, color)
    dp = _path_dp(adj, (1 << n) - 1)
    masks = np.flatnonzero(dp)
    sizes = _popcount(masks)
    best = int(masks[np.argmax(sizes)])
    path = _witness(adj, dp, best)
    return len(path), tuple(path)


def longest_mono_path_naive(G: TotalColoredGraph, color: Color, cap: int = 10) -> int:
    """Depth-first enumeration of all paths; only for cross-checking."""
    n = G.n
    if n > cap:
        raise PreconditionError(f"n = {n} exceeds the cap {cap}")
    adj = [[u for u in range(1, n + 1) if G.edge_color(v, u) is Color(color)] for v in range(1, n + 1)]
    best = 1 if n else 0

    def walk(v: int, seen: set[int]) -> None:
        nonlocal best
        best = max(best, len(seen))
        for u in adj[v - 1]:
            if u not in seen:
                seen.add(u)
                walk(u, seen)
                seen.remove(u)

    for v in range(1, n + 1):
        walk(v, {v})
    return best


# -- Gerencser-Gyarfas ---------------------------------------------------------------


def gg_bound(n: int) -> int:
    """``ceil((2n + 1) / 3)``."""
    return -(-(2 * n + 1) // 3)


@dataclass(frozen=True)
class GGReport:
    check: str
    n: int
    mode: str
    colorings: int
    bound: int
    min_longest: int
    holds: bool
    seed: int | None = None
    extremal_red_edges: list[list[int]] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _pairs(n: int) -> list[tuple[int, int]]:
    return list(itertools.combinations(range(n), 2))


def _batch_longest(n: int, bits: np.ndarray) -> np.ndarray:
    """Longest monochromatic path for each row of edge bits (1 = red)."""
    pairs = _pairs(n)
    m = bits.shape[0]
    out = np.ones(m, dtype=np.int64)
    full = (1 << n) - 1
    for color_bit in (1, 0):
        adj = np.zeros((m, n), dtype=np.int64)
        for e, (u, v) in enumerate(pairs):
            on = (bits[:, e] == color_bit).astype(np.int64)
            adj[:, u] |= on << v
            adj[:, v] |= on << u
        dp = np.zeros((m, 1 << n), dtype=np.int64)
        for v in range(n):
            dp[:, 1 << v] = 1 << v
        for mask in range(1, 1 << n):
            ends = dp[:, mask]
            if not ends.any():
                continue
            for v in range(n):
                if not mask >> v & 1:
                    continue
                has_v = (ends >> v & 1).astype(bool)
                if not has_v.any():
                    continue
                free = adj[:, v] & ~mask & full
                for w in range(n):
                    if mask >> w & 1:
                        continue
                    ok = has_v & (free >> w & 1).astype(bool)
                    dp[ok, mask | 1 << w] |= 1 << w
        sizes = np.array([bin(k).count("1") for k in range(1 << n)], dtype=np.int64)
        longest = np.where(dp != 0, sizes[None, :], 0).max(axis=1)
        out = np.maximum(out, longest)
    return out


def gg_verify(
    n: int,
    mode: str = "exhaustive",
    *,
    samples: int = 1000,
    seed: int | None = None,
    chunk: int = 1 << 14,
) -> GGReport:
    """Check that every 2-edge-colouring of ``K_n`` has a monochromatic path on
    ``ceil((2n+1)/3)`` vertices and report the smallest longest path seen.

    ``mode`` is ``"exhaustive"`` (``n <= 7``) or ``"sampled"``; sampling
    draws uniform colourings from a Philox generator keyed by ``seed``.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    e = n * (n - 1) // 2
    if mode == "exhaustive":
        if n > GG_EXHAUSTIVE_CAP:
            raise PreconditionError(f"exhaustive mode is limited to n <= {GG_EXHAUSTIVE_CAP}")
        total = 1 << e

        def batches() -> Iterator[np.ndarray]:
            for lo in range(0, total, chunk):
                ids = np.arange(lo, min(total, lo + chunk), dtype=np.int64)
                yield (ids[:, None] >> np.arange(e, dtype=np.int64)) & 1

    elif mode == "sampled":
        if seed is None:
            raise PreconditionError("sampled mode needs a seed")
        if n > DEFAULT_PATH_CAP:
            raise PreconditionError(f"sampled mode is limited to n <= {DEFAULT_PATH_CAP}")
        total = samples
        rng = np.random.Generator(np.random.Philox(seed))

        def batches() -> Iterator[np.ndarray]:
            step = max(1, min(chunk, (1 << 22) >> n))
            for lo in range(0, total, step):
                yield rng.integers(0, 2, size=(min(step, total - lo), e), dtype=np.int64)

    else:
        raise PreconditionError(f"unknown mode {mode!r}")

    best = None
    witness: np.ndarray | None = None
    for bits in batches():
        longest = _batch_longest(n, bits) if e else np.ones(len(bits), dtype=np.int64)
        i = int(np.argmin(longest))
        if best is None or longest[i] < best:
            best = int(longest[i])
            witness = bits[i]
    assert best is not None and witness is not None
    pairs = _pairs(n)
    red = [[u + 1, v + 1] for (u, v), b in zip(pairs, witness.tolist()) if b]
    bound = gg_bound(n)
    return GGReport(
        "gerencser-gyarfas", n, mode, total, bound, best, best >= bound,
        seed if mode == "sampled" else None, red,
    )


# -- simple forests ------------------------------------------------------------------


def optimal_simple_forest(G: TotalColoredGraph, color: Color, t: int) -> tuple[int, SimpleForest]:
    """Largest ``|V(F) & [t]|`` over simple forests ``F`` of ``color``.

    Every vertex of the colour can be taken, so the optimum adds a maximum
    matching between the other vertices of ``[t]`` and the vertices of the
    colour, along edges of the colour.
    """
    color = Color(color)
    if not 0 <= t <= G.n:
        raise PreconditionError(f"t = {t} outside [0, {G.n}]")
    vc = G.vertex_colors
    own = np.flatnonzero(vc == color) + 1
    other = np.flatnonzero((vc != color)[:t]) + 1
    pairs: list[tuple[int, int]] = []
    if own.size and other.size:
        sub = G.edge_matrix[np.ix_(other - 1, own - 1)] == color
        match = maximum_bipartite_matching(csr_matrix(sub.astype(np.int8)), perm_type="column")
        pairs = [(int(other[i]), int(own[j])) for i, j in enumerate(match.tolist()) if j >= 0]
    matched = {w for _, w in pairs}
    isolated = frozenset(int(v) for v in own if int(v) not in matched)
    F = SimpleForest(color, frozenset(pairs), isolated)
    return F.coverage(t), F


# -- faithfulness ----------------------------------------------------------------------


@dataclass(frozen=True)
class FaithfulnessReport:
    """Comparison of every monochromatic path against the canonical matching.

    A violation is a path ``P`` of colour ``c`` and a ``k`` with
    ``|V(P) & f([k])| > |V(M_c) & f([k])|``.
    """

    check: str
    q: str
    n: int
    extendable_only: bool
    paths_checked: dict[str, int]
    violations: int
    first_violation: dict | None = None

    @property
    def holds(self) -> bool:
        return self.violations == 0

    def to_json(self) -> str:
        d = asdict(self)
        d["holds"] = self.holds
        return json.dumps(d, sort_keys=True)


def faithfulness_check(
    C: GeometricColoring,
    cap: int = DEFAULT_FAITHFUL_CAP,
    *,
    n: int | None = None,
    extendable_only: bool = True,
) -> FaithfulnessReport:
    """Enumerate the paths of both colours inside the first ``n`` vertices.

    Counts of ``M_c`` use the pairs it has in the full colouring, including
    partners beyond the prefix.  With ``extendable_only`` only paths with at
    least one endpoint of their own colour are compared: those are the
    finite pieces of infinite paths of that colour (orient the path towards
    that endpoint; then every vertex of the other colour has a successor).
    """
    n = C.n if n is None else n
    if not 1 <= n <= C.n:
        raise PreconditionError(f"n = {n} outside [1, {C.n}]")
    if n > cap:
        raise PreconditionError(f"n = {n} exceeds the cap {cap}")
    G = to_total_graph(C).restrict(n)
    f = reordering(C)
    cover = dict(zip((Color.RED, Color.BLUE), matchings(C)))
    # bitmask of f([k]) restricted to [n], for k = 1..|C|
    fk = np.zeros(C.n + 1, dtype=np.int64)
    acc = 0
    for k in range(1, C.n + 1):
        v = int(f.fwd[k])
        if v <= n:
            acc |= 1 << (v - 1)
        fk[k] = acc
    checked = {}
    violations = 0
    first = None
    for color in (Color.RED, Color.BLUE):
        adj = _adjacency_masks(G, color)
        own = sum(1 << (v - 1) for v in range(1, n + 1) if G.vertex_color(v) is color)
        starts = own if extendable_only else (1 << n) - 1
        dp = _path_dp(adj, starts)
        sets = np.flatnonzero(dp).astype(np.int64)
        checked[color.letter] = int(sets.size)
        inf_cov = cover[color].infinite_cover
        m_count = np.cumsum([0] + [int(inf_cov[int(f.fwd[k])]) for k in range(1, C.n + 1)])
        for k in range(1, C.n + 1):
            counts = _popcount(sets & fk[k])
            bad = counts > m_count[k]
            nbad = int(bad.sum())
            if nbad:
                violations += nbad
                if first is None:
                    mask = int(sets[np.argmax(bad)])
                    path = _witness(adj, dp, mask)
                    first = {
                        "color": color.letter,
                        "k": k,
                        "path": path,
                        "path_count": int(counts[np.argmax(bad)]),
                        "matching_count": int(m_count[k]),
                    }
    return FaithfulnessReport("faithfulness", C.label(), n, extendable_only, checked, violations, first)
