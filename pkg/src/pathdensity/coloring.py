"""The geometric block colouring, its canonical matchings and the reordering.

Blocks ``A_0, A_1, ...`` of sizes ``floor(q**i)`` are laid out consecutively.
An edge between blocks ``i`` and ``j`` is red when ``min(i, j)`` is odd and
blue otherwise; a vertex is red when its block index is odd.

All block sizes are computed exactly: ``q`` is either a rational number or an
element of Q(sqrt 2) such as the silver ratio ``1 + sqrt 2``.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError
from .graphmodel import Color, TotalColoredGraph
from .quadratic import SILVER, QuadraticValue, as_exact, to_mpf

__all__ = [
    "GeometricColoring",
    "BlockMatching",
    "Reordering",
    "Breakpoint",
    "DensityProfile",
    "SweepRow",
    "build",
    "from_block_sizes",
    "edge_color",
    "matchings",
    "reordering",
    "ell_r",
    "ell_b",
    "ell_r_closed",
    "ell_b_closed",
    "density_profile",
    "density_bound",
    "optimal_q",
    "sweep_q",
    "parse_q",
    "to_total_graph",
    "block_structure_of",
    "MAX_VERTICES",
]

MAX_VERTICES = 50_000_000

Exact = Fraction | QuadraticValue


def parse_q(spec: str | int | Fraction | QuadraticValue) -> Exact:
    """Parse ``"silver"``, ``"k"`` or ``"a/b"`` (also accepts exact numbers)."""
    try:
        q = as_exact(spec)
    except (ValueError, ZeroDivisionError, TypeError):
        raise PreconditionError(f"cannot parse q specification {spec!r}") from None
    if q <= 1:
        raise PreconditionError(f"q must exceed 1, got {q}")
    return q


def _q_label(q: Exact | None) -> str:
    if q is None:
        return "blocks"
    if q == SILVER:
        return "silver"
    return str(q)


@dataclass(frozen=True)
class GeometricColoring:
    """A finite prefix made of whole blocks.

    ``sizes[i]`` is ``|A_i|``; ``q`` is None when the colouring was rebuilt
    from explicit block sizes.
    """

    sizes: tuple[int, ...]
    q: Exact | None = None

    def __post_init__(self) -> None:
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise PreconditionError("every block needs at least one vertex")

    @property
    def num_levels(self) -> int:
        return len(self.sizes)

    @cached_property
    def block_start(self) -> tuple[int, ...]:
        """``block_start[i]`` is the first vertex of ``A_i``; one extra entry past the end."""
        starts = [1]
        for s in self.sizes:
            starts.append(starts[-1] + s)
        return tuple(starts)

    @property
    def n(self) -> int:
        return self.block_start[-1] - 1

    @cached_property
    def levels(self) -> np.ndarray:
        """Block index of every vertex, indexed by ``v - 1``."""
        lv = np.repeat(np.arange(self.num_levels, dtype=np.int64), self.sizes)
        lv.flags.writeable = False
        return lv

    def level(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise PreconditionError(f"vertex {v} outside [1, {self.n}]")
        return bisect.bisect_right(self.block_start, v) - 1

    def block(self, i: int) -> range:
        return range(self.block_start[i], self.block_start[i + 1])

    def vertex_color(self, v: int) -> Color:
        return Color.RED if self.level(v) % 2 else Color.BLUE

    @cached_property
    def vertex_colors(self) -> np.ndarray:
        vc = np.where(self.levels % 2 == 1, Color.RED, Color.BLUE).astype(np.int8)
        vc.flags.writeable = False
        return vc

    def label(self) -> str:
        return _q_label(self.q)


def _block_size(q: Exact, i: int) -> int:
    return math.floor(q**i)


def build(q: str | int | Fraction | QuadraticValue, n_min: int, *, max_vertices: int = MAX_VERTICES) -> GeometricColoring:
    """Smallest prefix of whole blocks with at least ``n_min`` vertices."""
    q = parse_q(q)
    if n_min < 1:
        raise PreconditionError(f"n_min must be positive, got {n_min}")
    sizes: list[int] = []
    total = 0
    power = q**0
    while total < n_min:
        s = math.floor(power)
        sizes.append(s)
        total += s
        if total > max_vertices:
            raise PreconditionError(
                f"prefix would need {total} vertices, above the limit of {max_vertices}"
            )
        power = power * q
    return GeometricColoring(tuple(sizes), q)


def from_block_sizes(sizes: Sequence[int]) -> GeometricColoring:
    return GeometricColoring(tuple(int(s) for s in sizes), None)


def edge_color(C: GeometricColoring, u: int, v: int) -> Color:
    if u == v:
        raise PreconditionError("an edge needs two distinct vertices")
    lo = min(C.level(u), C.level(v))
    return Color.RED if lo % 2 else Color.BLUE


def block_structure_of(G: TotalColoredGraph) -> GeometricColoring:
    """Recover the block sizes of a geometric prefix from its colouring.

    Consecutive blocks have different vertex colours, so blocks are the
    maximal runs of equal vertex colour.  The edge colours are then checked
    against the block rule.
    """
    vc = G.vertex_colors
    if G.n == 0 or vc[0] != Color.BLUE:
        raise PreconditionError("a geometric prefix starts with a blue block")
    cuts = np.flatnonzero(np.diff(vc)) + 1
    bounds = np.concatenate(([0], cuts, [G.n]))
    C = from_block_sizes(np.diff(bounds).tolist())
    if not G.is_complete() or not np.array_equal(G.edge_matrix, _edge_matrix(C)):
        raise PreconditionError("edge colours do not follow the geometric block rule")
    return C


def _edge_matrix(C: GeometricColoring) -> np.ndarray:
    lv = C.levels
    lo = np.minimum.outer(lv, lv)
    em = np.where(lo % 2 == 1, Color.RED, Color.BLUE).astype(np.int8)
    np.fill_diagonal(em, 0)
    return em


def to_total_graph(C: GeometricColoring, f: Reordering | None = None) -> TotalColoredGraph:
    """The complete totally coloured graph on the prefix.

    With a reordering, position ``k`` of the new graph is vertex ``f(k)``.
    """
    vc = C.vertex_colors
    em = _edge_matrix(C)
    if f is not None:
        idx = f.fwd[1:] - 1
        vc = vc[idx]
        em = em[np.ix_(idx, idx)]
    return TotalColoredGraph(vc, em, 0, check=False)


# -- matchings ---------------------------------------------------------------


@dataclass(frozen=True)
class BlockMatching:
    """Canonical matching of one colour.

    ``pairs`` has one row ``(u, v)`` per matched pair inside the prefix.
    ``covered`` marks matched vertices (index ``v``, entry 0 unused).  Pairs
    whose partner lies beyond the prefix are dropped; ``infinite_cover``
    additionally marks the vertices those dropped pairs would have covered.
    """

    color: Color
    pairs: np.ndarray
    covered: np.ndarray
    infinite_cover: np.ndarray

    def __len__(self) -> int:
        return len(self.pairs)

    def vertex_set(self) -> set[int]:
        return set(np.flatnonzero(self.covered).tolist())


def matchings(C: GeometricColoring) -> tuple[BlockMatching, BlockMatching]:
    """Return ``(M_r, M_b)``.

    ``M_r`` joins ``A_{2i-1}`` to the first ``|A_{2i-1}|`` vertices of
    ``A_{2i}``; ``M_b`` joins ``A_{2i}`` to the first ``|A_{2i}|`` vertices
    of ``A_{2i+1}``.
    """
    return _matching(C, Color.RED), _matching(C, Color.BLUE)


def _matching(C: GeometricColoring, color: Color) -> BlockMatching:
    first = 1 if color is Color.RED else 0
    n = C.n
    covered = np.zeros(n + 1, dtype=bool)
    infinite = np.zeros(n + 1, dtype=bool)
    chunks = []
    for i in range(first, C.num_levels, 2):
        lo = C.block_start[i]
        size = C.sizes[i]
        left = np.arange(lo, lo + size, dtype=np.int64)
        infinite[left] = True
        if i + 1 < C.num_levels:
            right = np.arange(C.block_start[i + 1], C.block_start[i + 1] + size, dtype=np.int64)
            chunks.append(np.column_stack((left, right)))
            covered[left] = True
            covered[right] = True
            infinite[right] = True
    pairs = np.concatenate(chunks) if chunks else np.zeros((0, 2), dtype=np.int64)
    for arr in (pairs, covered, infinite):
        arr.flags.writeable = False
    return BlockMatching(color, pairs, covered, infinite)


# -- reordering ---------------------------------------------------------------


@dataclass(frozen=True)
class Reordering:
    """The bijection f of positions ``1..n`` onto vertices.

    ``fwd[k]`` is ``f(k)`` and ``inv[v]`` its inverse (index 0 unused).
    ``red_star_pos[t-1]`` / ``blue_star_pos[t-1]`` are the positions of the
    t-th red / blue star vertex; ``ell_r[t-1]`` / ``ell_b[t-1]`` are their
    ranks among the red / blue vertices.
    """

    fwd: np.ndarray
    inv: np.ndarray
    red_star_pos: tuple[int, ...]
    blue_star_pos: tuple[int, ...]
    ell_r: tuple[int, ...]
    ell_b: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.fwd) - 1

    def f(self, k: int) -> int:
        if not 1 <= k <= self.n:
            raise PreconditionError(f"position {k} outside [1, {self.n}]")
        return int(self.fwd[k])

    def f_inv(self, v: int) -> int:
        if not 1 <= v <= self.n:
            raise PreconditionError(f"vertex {v} outside [1, {self.n}]")
        return int(self.inv[v])

    @property
    def realized(self) -> int:
        """Number of t for which both t-th star vertices exist in the prefix."""
        return min(len(self.ell_r), len(self.ell_b))


def reordering(C: GeometricColoring) -> Reordering:
    """Enumerate blue vertices up to the next blue star, then red vertices up
    to the next red star, and so on.

    A blue star is a blue vertex outside ``M_r``; a red star is a red vertex
    outside ``M_b``.  When one colour runs out the other one is enumerated to
    the end, so the result is always a bijection of the prefix.
    """
    M_r, M_b = matchings(C)
    vc = C.vertex_colors
    ids = np.arange(1, C.n + 1)
    blues = ids[vc == Color.BLUE].tolist()
    reds = ids[vc == Color.RED].tolist()
    blue_star = (~M_r.infinite_cover[blues]).tolist()
    red_star = (~M_b.infinite_cover[reds]).tolist()

    order: list[int] = []
    rpos: list[int] = []
    bpos: list[int] = []
    lr: list[int] = []
    lb: list[int] = []
    bi = ri = 0
    on_blue = True
    while bi < len(blues) or ri < len(reds):
        if on_blue:
            while bi < len(blues):
                order.append(blues[bi])
                bi += 1
                if blue_star[bi - 1]:
                    bpos.append(len(order))
                    lb.append(bi)
                    break
        else:
            while ri < len(reds):
                order.append(reds[ri])
                ri += 1
                if red_star[ri - 1]:
                    rpos.append(len(order))
                    lr.append(ri)
                    break
        on_blue = not on_blue

    fwd = np.zeros(C.n + 1, dtype=np.int64)
    fwd[1:] = order
    inv = np.zeros(C.n + 1, dtype=np.int64)
    inv[fwd[1:]] = np.arange(1, C.n + 1)
    fwd.flags.writeable = False
    inv.flags.writeable = False
    return Reordering(fwd, inv, tuple(rpos), tuple(bpos), tuple(lr), tuple(lb))


def _star_rank(ranks: tuple[int, ...], t: int, what: str) -> int:
    if t < 1:
        raise PreconditionError(f"t must be positive, got {t}")
    if t > len(ranks):
        raise PreconditionError(f"the prefix holds only {len(ranks)} {what} star vertices, asked for t={t}")
    return ranks[t - 1]


def ell_r(f: Reordering, t: int) -> int:
    """Rank of the t-th red star among the red vertices (direct enumeration)."""
    return _star_rank(f.ell_r, t, "red")


def ell_b(f: Reordering, t: int) -> int:
    return _star_rank(f.ell_b, t, "blue")


def ell_r_closed(C: GeometricColoring, t: int) -> int:
    """Closed-form red star rank: ``t + |A_0| + |A_2| + ... + |A_2i|`` where
    ``i`` is the first level whose cumulative star count reaches ``t``.
    """
    if t < 1:
        raise PreconditionError(f"t must be positive, got {t}")
    A = C.sizes
    stars = 0
    even_sum = 0
    i = 0
    while 2 * i + 1 < len(A):
        even_sum += A[2 * i]
        stars += A[2 * i + 1] - A[2 * i]
        if t <= stars:
            return t + even_sum
        i += 1
    raise PreconditionError(f"the prefix holds only {stars} red star vertices, asked for t={t}")


def ell_b_closed(C: GeometricColoring, t: int) -> int:
    """Closed-form blue star rank: ``t + |A_1| + |A_3| + ... + |A_{2i-1}|``."""
    if t < 1:
        raise PreconditionError(f"t must be positive, got {t}")
    A = C.sizes
    if t <= A[0]:
        return t
    stars = 0
    odd_sum = 0
    i = 1
    # blue stars of A_{2i} count only when M_r reaches into it, i.e. A_{2i-1} exists
    while 2 * i < len(A):
        odd_sum += A[2 * i - 1]
        stars += A[2 * i] - A[2 * i - 1]
        if t - A[0] <= stars:
            return t + odd_sum
        i += 1
    raise PreconditionError(f"the prefix holds only {A[0] + stars} blue star vertices, asked for t={t}")


# -- density profile -----------------------------------------------------------


@dataclass(frozen=True)
class Breakpoint:
    """Profile sample at ``k = ell_r(t) + ell_b(t) - 1``.

    ``value`` is the measured density of the matching; ``envelope`` is
    ``1 - (t-1)/k``, the bound the star count gives at that point.
    """

    t: int
    k: int
    value: Fraction
    envelope: Fraction


@dataclass(frozen=True)
class DensityProfile:
    color: Color
    counts: np.ndarray  # counts[k-1] = |V(M) ∩ f([k])|
    breakpoints: tuple[Breakpoint, ...]

    @property
    def n(self) -> int:
        return len(self.counts)

    def value(self, k: int) -> Fraction:
        if not 1 <= k <= self.n:
            raise PreconditionError(f"k={k} outside [1, {self.n}]")
        return Fraction(int(self.counts[k - 1]), k)

    def values(self) -> np.ndarray:
        return self.counts / np.arange(1, self.n + 1)

    def max_breakpoint(self) -> Breakpoint:
        if not self.breakpoints:
            raise PreconditionError("profile has no breakpoints; the prefix is too short")
        return max(self.breakpoints, key=lambda b: (b.value, -b.k))


def density_profile(C: GeometricColoring, M: BlockMatching, f: Reordering) -> DensityProfile:
    """Density of ``V(M)`` along the reordering, with breakpoint samples.

    Breakpoints are the realised ``t`` at which ``ell_r(t) - t`` or
    ``ell_b(t) - t`` increases (``t = 1`` included, taking both as 0 at
    ``t = 0``); only there can the star envelope attain a local maximum.
    """
    if f.n != C.n or M.covered.shape[0] != C.n + 1:
        raise PreconditionError("matching, reordering and colouring come from different prefixes")
    counts = np.cumsum(M.covered[f.fwd[1:]], dtype=np.int64)
    counts.flags.writeable = False
    bps = []
    prev_r = prev_b = 0
    for t in range(1, f.realized + 1):
        lr, lb = f.ell_r[t - 1], f.ell_b[t - 1]
        if lr - t > prev_r - (t - 1) or lb - t > prev_b - (t - 1):
            k = lr + lb - 1
            if 1 <= k <= C.n:
                bps.append(Breakpoint(t, k, Fraction(int(counts[k - 1]), k), 1 - Fraction(t - 1, k)))
        prev_r, prev_b = lr, lb
    return DensityProfile(M.color, counts, tuple(bps))


# -- closed-form bound ---------------------------------------------------------


def density_bound(q: str | int | Fraction | QuadraticValue) -> Exact:
    """``(q^2 + 2q - 1) / (q^2 + 3q - 2)``, exact for rational and Q(sqrt2) q."""
    q = parse_q(q)
    q2 = q * q
    val = (q2 + 2 * q - 1) / (q2 + 3 * q - 2)
    return val.rational_part if isinstance(val, QuadraticValue) and val.is_rational() else val


def optimal_q(lo: Fraction | int = 1, hi: Fraction | int = 4, tol: Fraction = Fraction(1, 10**12)) -> Fraction:
    """Minimiser of :func:`density_bound` on ``(lo, hi]`` by exact ternary search."""
    lo, hi = Fraction(lo), Fraction(hi)

    def g(q: Fraction) -> Fraction:
        return (q * q + 2 * q - 1) / (q * q + 3 * q - 2)

    while hi - lo > tol:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if g(m1) < g(m2):
            hi = m2
        else:
            lo = m1
        # keep denominators small
        lo = lo.limit_denominator(10**30) if lo.denominator > 10**40 else lo
        hi = hi.limit_denominator(10**30) if hi.denominator > 10**40 else hi
    return (lo + hi) / 2


# -- sweep ------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    q: str
    q_value: float
    n: int
    bound: float
    empirical: float
    empirical_exact: Fraction

    def as_csv_row(self) -> list[str]:
        e = self.empirical_exact
        return [self.q, f"{self.q_value:.12g}", str(self.n), f"{self.bound:.12f}",
                str(e.numerator), str(e.denominator), f"{self.empirical:.12f}"]


SWEEP_HEADER = ["q", "q_value", "n", "bound", "empirical_num", "empirical_den", "empirical"]


def _sweep_one(q: Exact, n_min: int) -> SweepRow:
    C = build(q, n_min)
    M_r, _ = matchings(C)
    f = reordering(C)
    best = density_profile(C, M_r, f).max_breakpoint().value
    return SweepRow(
        _q_label(q),
        float(to_mpf(q)) if isinstance(q, QuadraticValue) else float(q),
        C.n,
        float(density_bound(q)),
        float(best),
        best,
    )


def sweep_q(q_list: Iterable[str | int | Fraction | QuadraticValue], n_min: int, *, workers: int = 1) -> list[SweepRow]:
    """Closed-form bound next to the largest measured breakpoint of ``M_r``."""
    qs = [parse_q(q) for q in q_list]
    if workers <= 1:
        return [_sweep_one(q, n_min) for q in qs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda q: _sweep_one(q, n_min), qs))
