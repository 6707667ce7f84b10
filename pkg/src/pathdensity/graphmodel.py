"""Ordered, totally 2-coloured graphs and monochromatic forests.

Vertices are the integers ``1..n`` in their natural order.  A graph carries a
colour on every vertex and on every present edge; a missing edge is simply
absent (code 0 in the adjacency matrix), never a third colour.
"""

from __future__ import annotations

import enum
import io
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, PreconditionError

__all__ = [
    "Color",
    "TotalColoredGraph",
    "SimpleForest",
    "PathForest",
    "ForestReport",
    "density_at",
    "validate_simple_forest",
    "validate_path_forest",
    "complete_random_coloring",
    "random_coloring",
    "read_coloring",
    "write_coloring",
    "format_coloring",
    "parse_coloring",
]

NO_EDGE = 0


class Color(enum.IntEnum):
    RED = 1
    BLUE = 2

    @property
    def other(self) -> Color:
        return Color.BLUE if self is Color.RED else Color.RED

    def __invert__(self) -> Color:
        return self.other

    @property
    def letter(self) -> str:
        return "R" if self is Color.RED else "B"

    @classmethod
    def from_letter(cls, s: str) -> Color:
        try:
            return {"R": cls.RED, "B": cls.BLUE}[s]
        except KeyError:
            raise FormatError(f"unknown colour letter {s!r}") from None


def density_at(H: Iterable[int], t: int) -> Fraction:
    """Return ``|H ∩ [t]| / t`` exactly."""
    if t < 1:
        raise PreconditionError(f"horizon must be a positive integer, got {t}")
    return Fraction(sum(1 for v in set(H) if 1 <= v <= t), t)


class TotalColoredGraph:
    """A graph on ``[n]`` with coloured vertices and coloured (present) edges.

    ``alpha`` bounds the number of non-neighbours of every vertex by
    ``alpha * n``; ``alpha = 0`` therefore means the graph is complete.

    The adjacency matrix uses the codes of :class:`Color` for present edges
    and 0 for absent ones.  Arrays are made read-only after construction.
    """

    def __init__(
        self,
        vertex_colors: Sequence[int] | np.ndarray,
        edge_matrix: np.ndarray,
        alpha: Fraction | int = 0,
        *,
        check: bool = True,
    ) -> None:
        vc = np.asarray(vertex_colors, dtype=np.int8).copy()
        em = np.asarray(edge_matrix, dtype=np.int8).copy()
        n = vc.shape[0]
        self.n = n
        self.alpha = Fraction(alpha)
        vc.flags.writeable = False
        em.flags.writeable = False
        self._vc = vc
        self._em = em
        if check:
            if em.shape != (n, n):
                raise PreconditionError(f"edge matrix has shape {em.shape}, expected {(n, n)}")
            if not np.isin(vc, (Color.RED, Color.BLUE)).all():
                raise PreconditionError("vertex colours must be RED or BLUE")
            if not np.isin(em, (NO_EDGE, Color.RED, Color.BLUE)).all():
                raise PreconditionError("edge codes must be 0, RED or BLUE")
            if not (em == em.T).all():
                raise PreconditionError("edge colouring is not symmetric")
            if em.diagonal().any():
                raise PreconditionError("loops are not allowed")
            if not 0 <= self.alpha < 1:
                raise PreconditionError(f"alpha must lie in [0, 1), got {self.alpha}")
            worst = self.max_missing()
            if worst > self.alpha * n:
                raise PreconditionError(
                    f"a vertex misses {worst} edges, more than alpha*n = {float(self.alpha * n):g}"
                )

    # -- basic queries -------------------------------------------------------
    @property
    def vertex_colors(self) -> np.ndarray:
        """Colour codes indexed by ``v - 1``."""
        return self._vc

    @property
    def edge_matrix(self) -> np.ndarray:
        """Symmetric code matrix indexed by ``(u - 1, v - 1)``."""
        return self._em

    def vertex_color(self, v: int) -> Color:
        self._check_vertex(v)
        return Color(int(self._vc[v - 1]))

    def edge_color(self, u: int, v: int) -> Color | None:
        self._check_vertex(u)
        self._check_vertex(v)
        code = int(self._em[u - 1, v - 1])
        return Color(code) if code else None

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_color(u, v) is not None

    def vertices_of(self, color: Color) -> list[int]:
        return (np.flatnonzero(self._vc == color) + 1).tolist()

    @property
    def red(self) -> list[int]:
        return self.vertices_of(Color.RED)

    @property
    def blue(self) -> list[int]:
        return self.vertices_of(Color.BLUE)

    def degrees(self) -> np.ndarray:
        return (self._em != NO_EDGE).sum(axis=1)

    def max_missing(self) -> int:
        if self.n == 0:
            return 0
        return int((self.n - 1 - self.degrees()).max())

    def num_edges(self) -> int:
        return int((self._em != NO_EDGE).sum()) // 2

    def is_complete(self) -> bool:
        return self.max_missing() == 0

    def edges(self) -> Iterable[tuple[int, int, Color]]:
        us, vs = np.nonzero(np.triu(self._em, 1))
        for u, v in zip(us.tolist(), vs.tolist()):
            yield u + 1, v + 1, Color(int(self._em[u, v]))

    def _check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.n:
            raise PreconditionError(f"vertex {v} outside [1, {self.n}]")

    # -- derived graphs ------------------------------------------------------
    def restrict(self, m: int) -> TotalColoredGraph:
        """Induced subgraph on the prefix ``[m]``."""
        if not 0 <= m <= self.n:
            raise PreconditionError(f"cannot restrict to [{m}] in a graph on {self.n} vertices")
        sub = self._em[:m, :m]
        missing = 0 if m == 0 else int((m - 1 - (sub != NO_EDGE).sum(axis=1)).max())
        alpha = max(self.alpha, Fraction(missing, m) if m else Fraction(0))
        if alpha >= 1:
            alpha = Fraction(m - 1, m)
        return TotalColoredGraph(self._vc[:m], sub, alpha, check=False)

    def swap_colors(self) -> TotalColoredGraph:
        """Exchange red and blue on every vertex and edge."""
        vc = 3 - self._vc
        em = np.where(self._em == NO_EDGE, NO_EDGE, 3 - self._em).astype(np.int8)
        return TotalColoredGraph(vc, em, self.alpha, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TotalColoredGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.alpha == other.alpha
            and np.array_equal(self._vc, other._vc)
            and np.array_equal(self._em, other._em)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"TotalColoredGraph(n={self.n}, edges={self.num_edges()}, alpha={self.alpha})"


# -- forests -----------------------------------------------------------------


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimpleForest:
    color: Color
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    isolated: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "color", Color(self.color))
        object.__setattr__(self, "edges", frozenset(_pair(u, v) for u, v in self.edges))
        object.__setattr__(self, "isolated", frozenset(self.isolated))

    @property
    def vertices(self) -> frozenset[int]:
        vs = set(self.isolated)
        for u, v in self.edges:
            vs.add(u)
            vs.add(v)
        return frozenset(vs)

    def coverage(self, t: int) -> int:
        return sum(1 for v in self.vertices if v <= t)

    def density(self, t: int) -> Fraction:
        return density_at(self.vertices, t)


@dataclass(frozen=True)
class PathForest:
    """Vertex-disjoint paths; an isolated vertex is a path of length 0."""

    color: Color
    paths: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "color", Color(self.color))
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p)

    def density(self, t: int) -> Fraction:
        return density_at(self.vertices, t)


@dataclass(frozen=True)
class ForestReport:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _fail(reason: str) -> ForestReport:
    return ForestReport(False, reason)


def validate_simple_forest(G: TotalColoredGraph, F: SimpleForest) -> ForestReport:
    """Check every clause of the simple-forest definition against ``G``."""
    c = F.color
    seen: set[int] = set()
    for u, v in sorted(F.edges):
        for x in (u, v):
            if not 1 <= x <= G.n:
                return _fail(f"vertex {x} out of range")
            if x in seen:
                return _fail(f"vertex {x} appears twice (degree > 1)")
            seen.add(x)
        if u == v:
            return _fail(f"loop at {u}")
        col = G.edge_color(u, v)
        if col is None:
            return _fail(f"edge {u}-{v} is not present in the graph")
        if col is not c:
            return _fail(f"edge {u}-{v} has colour {col.letter}, forest colour is {c.letter}")
        if G.vertex_color(u) is not c and G.vertex_color(v) is not c:
            return _fail(f"edge {u}-{v} has no {c.letter}-coloured endpoint")
    for x in sorted(F.isolated):
        if not 1 <= x <= G.n:
            return _fail(f"vertex {x} out of range")
        if x in seen:
            return _fail(f"isolated vertex {x} also lies on an edge")
        seen.add(x)
        if G.vertex_color(x) is not c:
            return _fail(f"isolated vertex {x} is not {c.letter}-coloured")
    return ForestReport(True)


def validate_path_forest(G: TotalColoredGraph, F: PathForest) -> ForestReport:
    c = F.color
    seen: set[int] = set()
    for path in F.paths:
        if not path:
            return _fail("empty path")
        for x in path:
            if not 1 <= x <= G.n:
                return _fail(f"vertex {x} out of range")
            if x in seen:
                return _fail(f"vertex {x} is used twice: not vertex-disjoint")
            seen.add(x)
        for u, v in zip(path, path[1:]):
            col = G.edge_color(u, v)
            if col is None:
                return _fail(f"edge {u}-{v} is not present in the graph")
            if col is not c:
                return _fail(f"edge {u}-{v} has colour {col.letter}, forest colour is {c.letter}")
        for end in {path[0], path[-1]}:
            if G.vertex_color(end) is not c:
                kind = "isolated vertex" if len(path) == 1 else "leaf"
                return _fail(f"{kind} {end} is not {c.letter}-coloured")
    return ForestReport(True)


# -- generators --------------------------------------------------------------


def complete_random_coloring(n: int, seed: int) -> TotalColoredGraph:
    """Complete graph on ``[n]`` with uniformly random vertex and edge colours."""
    return random_coloring(n, seed)


def random_coloring(
    n: int,
    seed: int,
    *,
    red_vertex_prob: float = 0.5,
    red_edge_prob: float = 0.5,
    alpha: Fraction | int = 0,
) -> TotalColoredGraph:
    """Random total colouring; with ``alpha > 0`` some edges are deleted.

    Deleted edges form a union of random matchings, so every vertex misses at
    most ``floor(alpha * n)`` edges.
    """
    if n < 1:
        raise PreconditionError("n must be at least 1")
    rng = np.random.default_rng(seed)
    vc = np.where(rng.random(n) < red_vertex_prob, Color.RED, Color.BLUE).astype(np.int8)
    upper = np.where(rng.random((n, n)) < red_edge_prob, Color.RED, Color.BLUE).astype(np.int8)
    em = np.triu(upper, 1)
    em = em + em.T
    alpha = Fraction(alpha)
    budget = int(alpha * n)
    for _ in range(budget):
        perm = rng.permutation(n)
        keep = rng.random(n // 2) < 0.5
        for (u, v), k in zip(perm[: 2 * (n // 2)].reshape(-1, 2), keep):
            if k:
                em[u, v] = em[v, u] = NO_EDGE
    return TotalColoredGraph(vc, em, alpha)


# -- file format -------------------------------------------------------------


def format_coloring(G: TotalColoredGraph) -> str:
    buf = io.StringIO()
    a = G.alpha
    buf.write(f"n {G.n} alpha {a.numerator}/{a.denominator}\n")
    buf.write("".join("R" if c == Color.RED else "B" for c in G.vertex_colors.tolist()))
    buf.write("\n")
    us, vs = np.nonzero(np.triu(G.edge_matrix, 1))
    codes = G.edge_matrix[us, vs]
    letters = np.where(codes == Color.RED, "R", "B")
    lines = [f"{u} {v} {c}\n" for u, v, c in zip((us + 1).tolist(), (vs + 1).tolist(), letters.tolist())]
    buf.write("".join(lines))
    return buf.getvalue()


def write_coloring(G: TotalColoredGraph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_coloring(G))


def parse_coloring(text: str) -> TotalColoredGraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 2:
        raise FormatError("coloring file needs a header and a vertex-colour line")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "n" or head[2] != "alpha":
        raise FormatError(f"bad header line {lines[0]!r}")
    try:
        n = int(head[1])
        alpha = Fraction(head[3])
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad header line {lines[0]!r}") from None
    colors = lines[1].strip()
    if n < 0 or len(colors) != n:
        raise FormatError(f"vertex-colour line has length {len(colors)}, expected {n}")
    vc = np.array([Color.from_letter(ch) for ch in colors], dtype=np.int8)
    em = np.zeros((n, n), dtype=np.int8)
    for lineno, ln in enumerate(lines[2:], start=3):
        parts = ln.split()
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'u v R|B'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise FormatError(f"line {lineno}: vertex out of range")
        if u >= v:
            raise FormatError(f"line {lineno}: edges must be written with u < v")
        if em[u - 1, v - 1]:
            raise FormatError(f"line {lineno}: duplicate edge {u} {v}")
        em[u - 1, v - 1] = em[v - 1, u - 1] = Color.from_letter(parts[2])
    try:
        return TotalColoredGraph(vc, em, alpha)
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None


def read_coloring(path: str | os.PathLike) -> TotalColoredGraph:
    with open(path, encoding="ascii") as fh:
        return parse_coloring(fh.read())
