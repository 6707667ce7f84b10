"""Dense monochromatic simple forests from the blue-degree sequence.

Everything here works on the bipartite graph between red and blue vertices;
edges inside a colour class are ignored.  For a red vertex ``v``, ``d_b(v)``
counts its blue edges to blue vertices, and the sorted values form the
degree sequence ``a_1 <= ... <= a_|R|``.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ClaimGapError, FormatError, InvariantViolation, PreconditionError
from .graphmodel import (
    Color,
    SimpleForest,
    TotalColoredGraph,
    density_at,
    validate_simple_forest,
)
from .quadratic import QuadraticValue
from . import sequences as seq

__all__ = [
    "BipartiteReduction",
    "KonigCertificate",
    "DegreeSequence",
    "ForestCertificate",
    "OscillationWitness",
    "ForestOutcome",
    "PipelineResult",
    "hopcroft_karp",
    "konig",
    "degree_sequence",
    "extract_blue_forest",
    "extract_red_forest",
    "extract_forest",
    "oscillation_or_forest",
    "simple_forest_pipeline",
    "format_certificate",
    "parse_certificate",
    "write_certificate",
    "read_certificate",
    "verify_certificate",
    "TARGET_DENSITY",
]

TARGET_DENSITY = QuadraticValue(Fraction(12, 17), Fraction(2, 17))


# -- bipartite graphs and Koenig ----------------------------------------------------


@dataclass(frozen=True)
class BipartiteReduction:
    """Edges between two vertex lists, with the colour of each present edge.

    ``colors[i, j]`` holds the code of the edge ``left[i] -- right[j]`` (0 when
    absent).
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    colors: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        c = np.asarray(self.colors, dtype=np.int8)
        if c.shape != (len(self.left), len(self.right)):
            raise PreconditionError(f"colour matrix has shape {c.shape}")
        if set(self.left) & set(self.right):
            raise PreconditionError("the two sides overlap")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "colors", c)

    @classmethod
    def from_graph(
        cls,
        G: TotalColoredGraph,
        left: Iterable[int] | None = None,
        right: Iterable[int] | None = None,
    ) -> BipartiteReduction:
        """Red vertices against blue vertices, or any two disjoint vertex sets."""
        L = tuple(G.red if left is None else sorted(left))
        R = tuple(G.blue if right is None else sorted(right))
        sub = G.edge_matrix[np.ix_(np.array(L, dtype=np.intp) - 1, np.array(R, dtype=np.intp) - 1)]
        return cls(L, R, sub)

    @classmethod
    def from_edges(
        cls,
        left: Sequence[int],
        right: Sequence[int],
        edges: Iterable[tuple[int, int, Color]],
    ) -> BipartiteReduction:
        li = {v: i for i, v in enumerate(left)}
        ri = {v: i for i, v in enumerate(right)}
        mat = np.zeros((len(left), len(right)), dtype=np.int8)
        for u, v, c in edges:
            if u in li and v in ri:
                mat[li[u], ri[v]] = Color(c)
            elif v in li and u in ri:
                mat[li[v], ri[u]] = Color(c)
            else:
                raise PreconditionError(f"edge {u}-{v} does not cross the bipartition")
        return cls(tuple(left), tuple(right), mat)

    def adjacency(self, color: Color) -> list[list[int]]:
        """Right-side indices joined to each left index by ``color`` edges."""
        hit = self.colors == Color(color)
        return [np.flatnonzero(row).tolist() for row in hit]

    def edges(self, color: Color) -> list[tuple[int, int]]:
        us, vs = np.nonzero(self.colors == Color(color))
        return [(self.left[u], self.right[v]) for u, v in zip(us.tolist(), vs.tolist())]


def hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> tuple[list[int], list[int]]:
    """Maximum matching; returns ``(match_left, match_right)`` with -1 for free."""
    n_left = len(adj)
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    inf = n_left + n_right + 1
    while True:
        dist = [inf] * n_left
        q = deque(i for i in range(n_left) if match_l[i] == -1)
        for i in q:
            dist[i] = 0
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    q.append(w)
        if not found:
            return match_l, match_r
        ptr = [0] * n_left
        for root in range(n_left):
            if match_l[root] != -1:
                continue
            # iterative DFS along the layered graph
            stack = [root]
            while stack:
                u = stack[-1]
                advanced = False
                while ptr[u] < len(adj[u]):
                    v = adj[u][ptr[u]]
                    ptr[u] += 1
                    w = match_r[v]
                    if w == -1:
                        # augment along the stack
                        for x in reversed(stack):
                            nxt = match_l[x]
                            match_l[x] = v
                            match_r[v] = x
                            v = nxt
                        stack = []
                        advanced = True
                        break
                    if dist[w] == dist[u] + 1:
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[u] = inf
                    stack.pop()


@dataclass(frozen=True)
class KonigCertificate:
    """A maximum matching and a minimum vertex cover of one colour class."""

    color: Color
    matching: tuple[tuple[int, int], ...]
    cover: frozenset[int]

    def check(self, B: BipartiteReduction) -> None:
        used: set[int] = set()
        col = {(u, v) for u, v in B.edges(self.color)}
        for u, v in self.matching:
            if (u, v) not in col:
                raise InvariantViolation(f"matching edge {u}-{v} is not a {self.color.letter} edge")
            if u in used or v in used:
                raise InvariantViolation(f"matching reuses a vertex at {u}-{v}")
            used.update((u, v))
        for u, v in col:
            if u not in self.cover and v not in self.cover:
                raise InvariantViolation(f"edge {u}-{v} is not covered")
        if len(self.matching) != len(self.cover):
            raise InvariantViolation(f"|matching| = {len(self.matching)} but |cover| = {len(self.cover)}")


def konig(B: BipartiteReduction, color: Color) -> KonigCertificate:
    """Maximum matching plus the alternating-reachability minimum cover."""
    color = Color(color)
    adj = B.adjacency(color)
    nl, nr = len(B.left), len(B.right)
    match_l, match_r = hopcroft_karp(adj, nr)
    # Z: reachable from free left vertices along alternating paths
    zl = [False] * nl
    zr = [False] * nr
    q = deque(i for i in range(nl) if match_l[i] == -1)
    for i in q:
        zl[i] = True
    while q:
        u = q.popleft()
        for v in adj[u]:
            if not zr[v] and match_l[u] != v:
                zr[v] = True
                w = match_r[v]
                if w != -1 and not zl[w]:
                    zl[w] = True
                    q.append(w)
    cover = {B.left[i] for i in range(nl) if not zl[i]}
    cover |= {B.right[j] for j in range(nr) if zr[j]}
    matching = tuple((B.left[i], B.right[j]) for i, j in enumerate(match_l) if j != -1)
    return KonigCertificate(color, matching, frozenset(cover))


# -- degree sequence ---------------------------------------------------------------------


@dataclass(frozen=True)
class DegreeSequence:
    """Sorted blue-degrees of the red vertices; ``vertices[i]`` realises ``values[i]``."""

    values: tuple[int, ...]
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)

    def a(self, i: int) -> int:
        return self.values[i - 1]

    def as_sequence(self) -> seq.OscillationSequence:
        return seq.OscillationSequence(self.values)


def _blue_degrees(G: TotalColoredGraph, vertices: Sequence[int], towards: Sequence[int] | None = None) -> np.ndarray:
    towards = G.blue if towards is None else towards
    if not len(vertices):
        return np.zeros(0, dtype=np.int64)
    rows = np.asarray(vertices, dtype=np.intp) - 1
    cols = np.asarray(towards, dtype=np.intp) - 1
    return (G.edge_matrix[np.ix_(rows, cols)] == Color.BLUE).sum(axis=1)


def degree_sequence(G: TotalColoredGraph) -> DegreeSequence:
    red = G.red
    if not red:
        raise PreconditionError("the graph has no red vertex", stage="degree_sequence")
    deg = _blue_degrees(G, red)
    order = np.argsort(deg, kind="stable")
    return DegreeSequence(
        tuple(int(deg[i]) for i in order),
        tuple(red[i] for i in order),
    )


# -- the extraction claims ------------------------------------------------------------------


def _greedy_blue_matching(G: TotalColoredGraph, ordered: Sequence[int], start: int, t: int) -> list[tuple[int, int]]:
    """Match ``ordered[start-1:]`` to distinct blue neighbours, in order.

    Vertex number ``j`` has more than ``j - t`` blue neighbours, while only
    ``j - t`` of them can already be taken, so the greedy never gets stuck.
    """
    blue = np.asarray(G.blue, dtype=np.intp)
    taken = np.zeros(G.n + 1, dtype=bool)
    pairs = []
    for j in range(start, len(ordered) + 1):
        v = ordered[j - 1]
        row = G.edge_matrix[v - 1, blue - 1] == Color.BLUE
        cand = blue[row & ~taken[blue]]
        if not cand.size:
            raise InvariantViolation(f"greedy matching stuck at index {j}", stage="extract_blue_forest")
        w = int(cand[0])
        taken[w] = True
        pairs.append((v, w))
    return pairs


def extract_blue_forest(G: TotalColoredGraph, Rprime: Iterable[int], t: int) -> SimpleForest:
    """Blue simple forest missing at most ``t`` vertices of ``R' + B``.

    Requires ``d_b(v_j) > j - t`` for ``j < |R'|``, where ``v_1, v_2, ...``
    lists ``R'`` by increasing blue-degree.
    """
    Rp = sorted(set(Rprime))
    if t < 1:
        raise PreconditionError(f"t must be positive, got {t}", stage="extract_blue_forest")
    for v in Rp:
        if G.vertex_color(v) is not Color.RED:
            raise PreconditionError(f"vertex {v} in R' is not red", stage="extract_blue_forest")
    deg = _blue_degrees(G, Rp)
    order = np.argsort(deg, kind="stable")
    ordered = [Rp[i] for i in order]
    sdeg = deg[order]
    for j in range(1, len(Rp)):
        if not sdeg[j - 1] > j - t:
            raise PreconditionError(
                f"d_b(v_{j}) = {int(sdeg[j - 1])} is not above j - t = {j - t}",
                stage="extract_blue_forest",
                index=j,
            )
    # v_t .. v_{|R'|-1}; the last vertex is allowed to stay uncovered
    pairs = _greedy_blue_matching(G, ordered[: len(Rp) - 1], t, t)
    matched = {w for _, w in pairs}
    isolated = frozenset(b for b in G.blue if b not in matched)
    return SimpleForest(Color.BLUE, frozenset(pairs), isolated)


def _red_konig(G: TotalColoredGraph, Bprime: Sequence[int]) -> KonigCertificate:
    B = BipartiteReduction.from_graph(G, G.red, Bprime)
    return konig(B, Color.RED)


def extract_red_forest(G: TotalColoredGraph, Bprime: Iterable[int], t: int) -> SimpleForest:
    """Red simple forest missing at most ``t + alpha*n`` vertices of ``R + B'``.

    The matching is a maximum red matching between ``R`` and ``B'``.  If it
    misses too much of ``B'``, the cover yields an index ``i`` with
    ``a_i >= i + t`` and ``i <= |B'| - t``, which is reported.
    """
    Bp = sorted(set(Bprime))
    for v in Bp:
        if G.vertex_color(v) is not Color.BLUE:
            raise PreconditionError(f"vertex {v} in B' is not blue", stage="extract_red_forest")
    cert = _red_konig(G, Bp)
    need = len(Bp) - t - G.alpha * G.n
    if len(cert.cover) < need:
        i = len(cert.cover & set(G.red)) + 1
        raise PreconditionError(
            f"the red cover has size {len(cert.cover)} < |B'| - t - alpha*n = {float(need):g};"
            f" a_{i} >= {i} + t violates the hypothesis",
            stage="extract_red_forest",
            index=i,
        )
    matched = {u for u, _ in cert.matching}
    isolated = frozenset(r for r in G.red if r not in matched)
    return SimpleForest(Color.RED, frozenset(cert.matching), isolated)


@dataclass(frozen=True)
class ForestCertificate:
    """A forest together with the prefix it is measured on."""

    forest: SimpleForest
    horizon: int
    density: Fraction
    branch: str = ""
    ell: int | None = None
    t: int | None = None
    clipped: bool = False

    def bound(self, alpha: Fraction, n: int) -> Fraction | None:
        """``(ell - alpha*n) / (ell + t)`` when the certificate came from a threshold."""
        if self.ell is None or self.t is None:
            return None
        return (self.ell - alpha * n) / (self.ell + self.t)


def extract_forest(
    G: TotalColoredGraph,
    t: int,
    lplus: int | None = None,
    lminus: int | None = None,
) -> ForestCertificate:
    """Forest with density at least ``(ell - alpha*n)/(ell + t)`` at ``ell + t``.

    ``ell = ell_plus(t) + ell_minus(t)`` is computed from the degree sequence;
    passing ``lplus``/``lminus`` only cross-checks them.
    """
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise PreconditionError(f"t must be a positive integer, got {t!r}", stage="extract_forest")
    t = int(t)
    a = degree_sequence(G).as_sequence()
    T = seq.oscillation(a).T
    if t > T:
        raise PreconditionError(f"t={t} exceeds the oscillation {T}", stage="extract_forest")
    lp, lm = seq.ell_plus(a, t), seq.ell_minus(a, t)
    if (lplus is not None and lplus != lp) or (lminus is not None and lminus != lm):
        raise PreconditionError(
            f"given ell_plus/ell_minus ({lplus}, {lminus}) differ from the sequence ({lp}, {lm})",
            stage="extract_forest",
        )
    ell = lp + lm
    horizon = ell + t
    clipped = horizon > G.n
    if clipped:
        horizon = G.n
    Rp = [v for v in G.red if v <= horizon]
    Bp = [v for v in G.blue if v <= horizon]
    if lm >= len(Rp):
        F = extract_blue_forest(G, Rp, t)
        branch = "blue"
    else:
        F = extract_red_forest(G, Bp, t)
        branch = "red"
    rep = validate_simple_forest(G, F)
    if not rep:
        raise InvariantViolation(f"extracted forest is invalid: {rep.reason}", stage="extract_forest")
    d = F.density(horizon)
    if not clipped and d < (ell - G.alpha * G.n) / horizon:
        raise InvariantViolation(
            f"density {d} below (ell - alpha n)/(ell + t) at t={t}, ell={ell}", stage="extract_forest"
        )
    return ForestCertificate(F, horizon, d, branch, ell, t, clipped)


# -- the oscillation dichotomy ------------------------------------------------------------------


@dataclass(frozen=True)
class OscillationWitness:
    """Indices with ``a_i - i >= bound`` and ``j - a_j >= bound``.

    With ``swapped`` set, the sequence is that of the colour-swapped graph.
    """

    i: int
    j: int
    a_i: int
    a_j: int
    bound: int
    swapped: bool = False

    def check(self, a: Sequence[int]) -> None:
        if not (a[self.i - 1] == self.a_i and a[self.j - 1] == self.a_j):
            raise InvariantViolation("witness values do not match the sequence", stage="oscillation_or_forest")
        if not (self.a_i - self.i >= self.bound and self.j - self.a_j >= self.bound):
            raise InvariantViolation(
                f"witness (i={self.i}, j={self.j}) misses the bound {self.bound}", stage="oscillation_or_forest"
            )

    def verify(self, G: TotalColoredGraph) -> None:
        """Re-check against the degree sequence of ``G`` (swapped if needed)."""
        H = G.swap_colors() if self.swapped else G
        self.check(degree_sequence(H).values)


@dataclass(frozen=True)
class ForestOutcome:
    """A forest valid in the original colours, whatever orientation found it."""

    forest: SimpleForest
    density: Fraction
    branch: str
    swapped: bool = False

    def verify(self, G: TotalColoredGraph) -> None:
        rep = validate_simple_forest(G, self.forest)
        if not rep:
            raise InvariantViolation(f"forest invalid: {rep.reason}", stage="oscillation_or_forest")
        if self.forest.density(G.n) != self.density or self.density < Fraction(7, 8) - G.alpha:
            raise InvariantViolation(f"forest density {self.density} is wrong or too small", stage="oscillation_or_forest")


def _dichotomy(G: TotalColoredGraph) -> OscillationWitness | ForestOutcome:
    n = G.n
    alpha = G.alpha
    R, Bl = G.red, G.blue
    B = BipartiteReduction.from_graph(G)
    X = konig(B, Color.RED)
    if len(X.cover) >= len(Bl) - (Fraction(1, 8) + alpha) * n:
        matched = {u for u, _ in X.matching}
        F = SimpleForest(Color.RED, frozenset(X.matching), frozenset(r for r in R if r not in matched))
        return _forest_outcome(G, F, Fraction(7, 8) - alpha, "red-cover")
    Y = konig(B, Color.BLUE)
    if len(Y.cover) > len(R) - Fraction(n, 8):
        matched = {v for _, v in Y.matching}
        F = SimpleForest(Color.BLUE, frozenset(Y.matching), frozenset(b for b in Bl if b not in matched))
        return _forest_outcome(G, F, Fraction(7, 8), "blue-cover")
    Xr = X.cover & set(R)
    if len(Xr) == len(R):
        raise ClaimGapError(f"all {len(R)} red vertices lie in the red cover of size {len(X.cover)}")
    a = degree_sequence(G).values
    i = len(Xr) + 1
    j = len(R) - len(Y.cover & set(R))
    w = OscillationWitness(i, j, a[i - 1], a[j - 1], n // 8)
    w.check(a)
    return w


def oscillation_or_forest(G: TotalColoredGraph) -> OscillationWitness | ForestOutcome:
    """Either a red or blue simple forest of density at least ``7/8 - alpha``
    on ``[n]`` or an oscillation witness of size ``floor(n/8)``.

    The witness for the upper side is the red vertex after the red part of
    a minimum cover of the red edges.  When every red vertex is in that
    cover there is no such vertex; the argument is then rerun with the
    colours swapped, which always succeeds because the red cover of the
    swapped graph is smaller than its red side.
    """
    if G.n == 0:
        raise PreconditionError("empty graph", stage="oscillation_or_forest")
    try:
        return _dichotomy(G)
    except ClaimGapError as exc:
        gap = exc
    try:
        out = _dichotomy(G.swap_colors())
    except ClaimGapError as exc:
        raise InvariantViolation(f"no certificate in either orientation ({gap}; {exc})") from exc
    if isinstance(out, ForestOutcome):
        return ForestOutcome(_recolor(out.forest), out.density, out.branch, True)
    return OscillationWitness(out.i, out.j, out.a_i, out.a_j, out.bound, True)


def _forest_outcome(G: TotalColoredGraph, F: SimpleForest, floor: Fraction, branch: str) -> ForestOutcome:
    rep = validate_simple_forest(G, F)
    if not rep:
        raise InvariantViolation(f"forest invalid: {rep.reason}", stage="oscillation_or_forest")
    d = F.density(G.n)
    if d < floor:
        raise InvariantViolation(f"forest density {d} below {floor}", stage="oscillation_or_forest")
    return ForestOutcome(F, d, branch)


def _recolor(F: SimpleForest) -> SimpleForest:
    return SimpleForest(F.color.other, F.edges, F.isolated)


# -- the pipeline ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    """Outcome of :func:`simple_forest_pipeline`.

    ``t`` is the threshold (``None`` on the early forest exit, where the
    horizon is ``kN``).  ``guaranteed`` tells whether every hypothesis of the
    density guarantee held; ``notes`` says which did not.  ``swapped`` means
    the colours were exchanged to get past a cover with no witness; the
    returned forest is already expressed in the original colours.
    """

    t: int | None
    forest: SimpleForest
    horizon: int
    density: Fraction
    branch: str
    swapped: bool
    guaranteed: bool
    N: int
    target: QuadraticValue
    notes: tuple[str, ...] = ()

    def meets_target(self) -> bool:
        return self.density >= self.target


def _best_integer_t(a: seq.OscillationSequence, lo: int, hi: int) -> tuple[int, int]:
    """Integer ``t`` in ``[lo, hi]`` maximising ``ell(t)/t``."""
    best = None
    for t in range(lo, hi + 1):
        ell = seq.ell_plus(a, t) + seq.ell_minus(a, t)
        if best is None or ell * best[0] > best[1] * t:
            best = (t, ell)
    assert best is not None
    return best


def simple_forest_pipeline(G: TotalColoredGraph, k: int, gamma: object) -> PipelineResult:
    """Monochromatic simple forest with density close to ``(12 + sqrt 8)/17``.

    Works on the prefix ``[kN]`` with ``N = n // k``.  The chain is: cover
    dichotomy, then a threshold ``t`` from the oscillation lemma applied with
    ``k/8``, then the forest for ``ceil(t)``.  When the lemma's ``N`` exceeds
    the available ``N`` and no threshold reaches the ratio, the integer ``t``
    with the best ratio is used instead and the result is marked as not
    guaranteed.
    """
    gamma_p = seq._exact(gamma)
    if not gamma_p > 0:
        raise PreconditionError("gamma must be positive", stage="pipeline")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise PreconditionError(f"k must be a positive integer, got {k!r}", stage="pipeline")
    k = int(k)
    N = G.n // k
    if N < 1:
        raise PreconditionError(f"n = {G.n} is smaller than k = {k}", stage="pipeline")
    gam = gamma_p / 4
    H = G.restrict(k * N)
    n = H.n
    target = TARGET_DENSITY - gamma_p
    unmet: list[str] = []
    notes: list[str] = []
    need_N = _lemma_N(gam)
    if k < math.ceil(8 / gam):
        unmet.append(f"k = {k} is below ceil(8/gamma) = {math.ceil(8 / gam)}")
    if H.alpha > gam / (8 * N):
        unmet.append(f"alpha = {H.alpha} exceeds gamma/(8N) = {gam / (8 * N)}")
    if need_N is None or N < need_N:
        unmet.append(f"N = {N} is below the oscillation lemma's N = {need_N if need_N else 'astronomical'}")

    out = oscillation_or_forest(H)
    swapped = out.swapped
    if isinstance(out, OscillationWitness) and swapped:
        notes.append("colours swapped: every red vertex was in the red cover")
        H = H.swap_colors()

    def finish(F: SimpleForest, t: int | None, horizon: int, d: Fraction, branch: str) -> PipelineResult:
        if swapped and t is not None:
            F = _recolor(F)
        rep = validate_simple_forest(G, F)
        if not rep:
            raise InvariantViolation(f"pipeline forest invalid: {rep.reason}", stage="pipeline")
        guaranteed = not unmet
        if guaranteed and d < target:
            raise InvariantViolation(f"density {d} below the target {float(target):.6f}", stage="pipeline")
        return PipelineResult(t, F, horizon, d, branch, swapped, guaranteed, N, target, tuple(unmet + notes))

    if isinstance(out, ForestOutcome):
        return finish(out.forest, None, n, out.density, out.branch)

    a = degree_sequence(H).as_sequence()
    T = seq.oscillation(a).T
    k8 = Fraction(k, 8)
    if T < k8 * N:
        raise PreconditionError(
            f"oscillation {T} is below kN/8 = {k8 * N} (n not divisible by 8?)", stage="find_oscillation_t"
        )
    try:
        th = seq.find_oscillation_t(a, k8, gam, N)
        t = th.t_int
    except seq.SearchExhausted as exc:
        unmet.append(f"threshold search fell back to the best ratio: {exc}")
        t, _ = _best_integer_t(a, math.ceil(k8), min(int(T), (k * N) // 8))
    cert = extract_forest(H, t)
    if not (k8 <= t <= k * N):
        raise InvariantViolation(f"t = {t} outside [k/8, kN]", stage="pipeline")
    return finish(cert.forest, t, cert.horizon, cert.density, cert.branch)


def _lemma_N(gamma: Fraction) -> int | None:
    """The lemma's ``N``, or None when it is too large to be meaningful."""
    try:
        return seq.choose_N(gamma)
    except PreconditionError:
        return None


# -- certificate files --------------------------------------------------------------------------


def format_certificate(cert: ForestCertificate) -> str:
    F = cert.forest
    lines = [f"color {F.color.letter}"]
    lines += [f"edge {u} {v}" for u, v in sorted(F.edges)]
    lines += [f"isolated {v}" for v in sorted(F.isolated)]
    d = cert.density
    lines.append(f"horizon {cert.horizon} density {d.numerator}/{d.denominator}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> ForestCertificate:
    color = None
    edges: list[tuple[int, int]] = []
    isolated: list[int] = []
    horizon = density = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "color" and len(parts) == 2:
                color = Color.from_letter(parts[1])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "isolated" and len(parts) == 2:
                isolated.append(int(parts[1]))
            elif parts[0] == "horizon" and len(parts) == 4 and parts[2] == "density":
                horizon = int(parts[1])
                density = Fraction(parts[3])
            else:
                raise ValueError(raw)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"line {lineno}: cannot parse {raw!r}") from None
    if color is None or horizon is None or density is None:
        raise FormatError("certificate needs a color line and a horizon line")
    return ForestCertificate(SimpleForest(color, frozenset(edges), frozenset(isolated)), horizon, density)


def write_certificate(cert: ForestCertificate, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_certificate(cert))


def read_certificate(path: str | os.PathLike) -> ForestCertificate:
    with open(path, encoding="utf-8") as fh:
        return parse_certificate(fh.read())


def verify_certificate(G: TotalColoredGraph, cert: ForestCertificate) -> str | None:
    """None if the certificate is valid for ``G``, else the reason it is not."""
    rep = validate_simple_forest(G, cert.forest)
    if not rep:
        return rep.reason
    if not 1 <= cert.horizon <= G.n:
        return f"horizon {cert.horizon} outside [1, {G.n}]"
    actual = density_at(cert.forest.vertices, cert.horizon)
    if actual != cert.density:
        return f"stated density {cert.density} but the forest has {actual}"
    return None
