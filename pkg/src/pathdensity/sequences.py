"""Oscillation of nondecreasing sequences and the good-threshold search.

Values may be ints, Fractions or :class:`~pathdensity.quadratic.QuadraticValue`
instances; every comparison is exact.  Indices are 1-based throughout, as in
the definitions they implement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath

from .errors import InvariantViolation, PreconditionError
from .quadratic import QuadraticValue, as_exact, to_mpf

__all__ = [
    "OscillationSequence",
    "GapSequence",
    "Oscillation",
    "IntervalPartition",
    "GoodWitness",
    "GoodThreshold",
    "OscillationThreshold",
    "RecurrenceTrace",
    "SearchExhausted",
    "oscillation",
    "ell_plus",
    "ell_minus",
    "interval_partition",
    "is_k_good",
    "u_odd",
    "u_even",
    "good_t_candidates",
    "find_good_t",
    "find_oscillation_t",
    "recurrence_trace",
    "closed_form_values",
    "choose_N",
    "first_negative",
    "extremal_sequence",
    "target_ratio",
    "read_sequence",
    "parse_sequence",
]

Number = int | Fraction | QuadraticValue

SQRT8 = QuadraticValue(0, 2)


class SearchExhausted(PreconditionError):
    """No candidate threshold worked, and the lemma's N was not large enough
    to promise one."""


def _exact(x: object) -> Number:
    if type(x) is int:
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return int(x)
    return as_exact(x)


class OscillationSequence(tuple):
    """A nondecreasing sequence of nonnegative numbers.

    ``integral`` is True when every value is an int.
    """

    integral: bool

    def __new__(cls, values: Iterable[object]) -> OscillationSequence:
        vals = tuple(_exact(v) for v in values)
        if vals and vals[0] < 0:
            raise PreconditionError("value at index 1 is negative")
        for i in range(1, len(vals)):
            if vals[i] < vals[i - 1]:
                raise PreconditionError(f"sequence decreases at index {i + 1}")
        obj = super().__new__(cls, vals)
        obj.integral = all(type(v) is int for v in vals)
        return obj


class GapSequence(tuple):
    """A sequence of nonnegative numbers, not necessarily monotone."""

    def __new__(cls, values: Iterable[object]) -> GapSequence:
        vals = tuple(_exact(v) for v in values)
        for i, v in enumerate(vals):
            if v < 0:
                raise PreconditionError(f"value at index {i + 1} is negative")
        return super().__new__(cls, vals)


def _as_osc(s: Sequence[object]) -> OscillationSequence:
    return s if isinstance(s, OscillationSequence) else OscillationSequence(s)


def _as_gap(g: Sequence[object]) -> GapSequence:
    return g if isinstance(g, GapSequence) else GapSequence(g)


# -- oscillation ---------------------------------------------------------------


@dataclass(frozen=True)
class Oscillation:
    """``T`` with witnesses ``a_i - i >= T`` and ``j - a_j >= T``."""

    T: Number
    i: int
    j: int


def oscillation(s: Sequence[object]) -> Oscillation:
    """``min(max_i (a_i - i), max_j (j - a_j))``, clamped below at 0.

    Witnesses are the first indices attaining the two maxima.
    """
    a = _as_osc(s)
    if not a:
        raise PreconditionError("oscillation of an empty sequence")
    up = [v - i for i, v in enumerate(a, start=1)]
    down = [i - v for i, v in enumerate(a, start=1)]
    hi = max(up)
    lo = max(down)
    i = up.index(hi) + 1
    j = down.index(lo) + 1
    T = min(hi, lo)
    if T < 0:
        T = 0
    return Oscillation(T, i, j)


def _check_t(a: OscillationSequence, t: object) -> Number:
    t = _exact(t)
    if not t > 0:
        raise PreconditionError(f"t must be positive, got {t}")
    T = oscillation(a).T
    if t > T:
        raise PreconditionError(f"t={t} exceeds the oscillation {T}")
    return t


def _first_above(a: OscillationSequence, t: Number) -> int:
    if a.integral and not isinstance(t, QuadraticValue):
        # integer values: a_i - i >= t iff a_i - i >= ceil(t)
        c = math.ceil(t)
        return next(i for i, v in enumerate(a, start=1) if v - i >= c)
    return next(i for i, v in enumerate(a, start=1) if v >= i + t)


def _first_below(a: OscillationSequence, t: Number) -> int:
    if a.integral and not isinstance(t, QuadraticValue):
        c = math.ceil(t)
        return next(j for j, v in enumerate(a, start=1) if j - v >= c)
    return next(j for j, v in enumerate(a, start=1) if v <= j - t)


def ell_plus(s: Sequence[object], t: object) -> int:
    """First index with ``a_i >= i + t``."""
    a = _as_osc(s)
    return _first_above(a, _check_t(a, t))


def ell_minus(s: Sequence[object], t: object) -> int:
    """First index with ``a_j <= j - t``."""
    a = _as_osc(s)
    return _first_below(a, _check_t(a, t))


# -- interval partition ----------------------------------------------------------


@dataclass(frozen=True)
class IntervalPartition:
    """Maximal runs above (``a_j >= j``) and below (``a_j < j``) the diagonal.

    ``intervals[i]`` is an inclusive 1-based ``(start, end)`` pair and
    ``gaps[i]`` the largest ``|a_j - j|`` on it.  ``above_parity`` is 1 when
    the odd-numbered intervals lie above the diagonal (the case ``a_1 >= 1``)
    and 0 when the even-numbered ones do.
    """

    intervals: tuple[tuple[int, int], ...]
    gaps: GapSequence
    above_parity: int

    def is_above(self, index: int) -> bool:
        return index % 2 == self.above_parity % 2

    def __len__(self) -> int:
        return len(self.intervals)


def interval_partition(s: Sequence[object]) -> IntervalPartition:
    a = _as_osc(s)
    if not a:
        raise PreconditionError("interval partition of an empty sequence")
    intervals = []
    gaps = []
    start = 1
    above = a[0] >= 1
    best = abs(a[0] - 1)
    for j in range(2, len(a) + 1):
        v = a[j - 1]
        here = v >= j
        if here != above:
            intervals.append((start, j - 1))
            gaps.append(best)
            start, above, best = j, here, abs(v - j)
        else:
            d = abs(v - j)
            if d > best:
                best = d
    intervals.append((start, len(a)))
    gaps.append(best)
    return IntervalPartition(tuple(intervals), GapSequence(gaps), 1 if a[0] >= 1 else 0)


# -- good sequences -------------------------------------------------------------------


@dataclass(frozen=True)
class GoodWitness:
    good: bool
    i_odd: int | None
    i_even: int | None

    def __bool__(self) -> bool:
        return self.good


def _first_reaching(g: GapSequence, t: Number, parity: int, strict: bool = False) -> int | None:
    for i in range(1 if parity else 2, len(g) + 1, 2):
        v = g[i - 1]
        if (v > t) if strict else (v >= t):
            return i
    return None


def is_k_good(g: Sequence[object], k: object) -> GoodWitness:
    """Whether some odd and some even index carry a value ``>= k``."""
    g = _as_gap(g)
    k = _exact(k)
    if not k > 0:
        raise PreconditionError(f"k must be positive, got {k}")
    io = _first_reaching(g, k, 1)
    ie = _first_reaching(g, k, 0)
    return GoodWitness(io is not None and ie is not None, io, ie)


def _prefix_sum(g: GapSequence, upto: int) -> Number:
    return sum(g[: upto - 1], 0)


def _u(g: GapSequence, t: object, parity: int, strict: bool = False) -> Number:
    t = _exact(t)
    if not t > 0:
        raise PreconditionError(f"t must be positive, got {t}")
    io = _first_reaching(g, t, 1, strict)
    ie = _first_reaching(g, t, 0, strict)
    if io is None or ie is None:
        raise PreconditionError(f"sequence is not {t}-good")
    return _prefix_sum(g, io if parity else ie)


def u_odd(g: Sequence[object], t: object) -> Number:
    """Sum of the values before the first odd index reaching ``t``."""
    return _u(_as_gap(g), t, 1)


def u_even(g: Sequence[object], t: object) -> Number:
    return _u(_as_gap(g), t, 0)


def target_ratio(gamma: object, base: int) -> QuadraticValue:
    """``base + sqrt(8) - gamma`` exactly."""
    return SQRT8 + base - _exact(gamma)


@dataclass(frozen=True)
class GoodThreshold:
    """A threshold ``t`` with ``u_o(t) + u_e(t) >= ratio * t``."""

    t: Fraction
    u_odd: Number
    u_even: Number
    ratio: QuadraticValue
    candidates_tried: int

    def achieved(self) -> Number:
        return (self.u_odd + self.u_even) / self.t


@dataclass(frozen=True)
class _Candidate:
    lower: Number  # the candidate is t = lower (closed) or t slightly above lower (open)
    open: bool
    upper: Number  # u is constant on (lower, upper] for open candidates
    u_sum: Number


def _records(g: GapSequence, k: Number) -> list[int]:
    out = []
    best = None
    for i, v in enumerate(g, start=1):
        if best is None or v > best:
            best = v
            if v >= k:
                out.append(i)
    return out


def good_t_candidates(g: Sequence[object], k: object, kN: object) -> Iterator[_Candidate]:
    """Candidate thresholds in increasing order.

    First ``t = k`` itself, then ``t`` just above each record value
    ``a_i >= k`` (a value exceeding everything before it) that is still below
    ``kN``.  Just above a record the sums ``u_o`` and ``u_e`` are computed with
    strict comparisons, which is their limit from the right.
    """
    g = _as_gap(g)
    k, kN = _exact(k), _exact(kN)
    values = sorted(set(g))
    yield _Candidate(k, False, k, _u(g, k, 1) + _u(g, k, 0))
    for i in _records(g, k):
        v = g[i - 1]
        if not v < kN:
            break
        above = [w for w in values if w > v]
        upper = min(above[0], kN) if above else kN
        try:
            total = _u(g, v, 1, strict=True) + _u(g, v, 0, strict=True)
        except PreconditionError:
            break
        yield _Candidate(v, True, upper, total)


def _rational_below(x: QuadraticValue | Fraction, lo: Number) -> Fraction:
    """A rational in ``(lo, x]`` (assumes ``lo < x``)."""
    if not isinstance(x, QuadraticValue) or x.is_rational():
        return Fraction(x.rational_part if isinstance(x, QuadraticValue) else x)
    scale = 1
    while True:
        r = Fraction(math.floor(x * scale), scale)
        if r > lo:
            return r
        scale *= 2


def _realize(c: _Candidate, ratio: QuadraticValue) -> Fraction | None:
    """A concrete ``t`` for candidate ``c`` with ``u >= ratio * t``, if any."""
    if not c.open:
        return Fraction(c.lower) if c.u_sum >= ratio * c.lower else None
    if not c.u_sum > ratio * c.lower:
        return None
    t_max = c.u_sum / ratio  # largest admissible t
    # integer thresholds for integer data: lower + 1 when it still fits
    if isinstance(c.lower, int) and c.lower + 1 <= c.upper and c.lower + 1 <= t_max:
        return Fraction(c.lower + 1)
    hi = t_max if t_max < c.upper else c.upper
    return _rational_below(hi, c.lower)


def _rational(x: Number) -> Fraction:
    if isinstance(x, QuadraticValue):
        if not x.is_rational():
            raise PreconditionError("k must be rational")
        return x.rational_part
    return Fraction(x)


def find_good_t(
    g: Sequence[object],
    k: object,
    gamma: object,
    N: int | None = None,
) -> GoodThreshold:
    """Smallest candidate ``t`` in ``[k, kN]`` with
    ``u_o(t) + u_e(t) >= (3 + sqrt 8 - gamma) t``.

    ``N`` defaults to :func:`choose_N`; a smaller ``N`` is allowed but then a
    failed search raises :class:`SearchExhausted` instead of an alarm.
    """
    g = _as_gap(g)
    k = _rational(_exact(k))
    if not k > 0:
        raise PreconditionError(f"k must be positive, got {k}")
    guaranteed_N = choose_N(gamma)
    if N is None:
        N = guaranteed_N
    kN = k * N
    if not is_k_good(g, kN):
        raise PreconditionError(f"sequence is not {kN}-good", stage="find_good_t")
    ratio = target_ratio(gamma, 3)
    tried = 0
    for c in good_t_candidates(g, k, kN):
        tried += 1
        t = _realize(c, ratio)
        if t is None:
            continue
        uo, ue = u_odd(g, t), u_even(g, t)
        if not (k <= t <= kN and uo + ue >= ratio * t):
            raise InvariantViolation(f"candidate t={t} failed its own re-check", stage="find_good_t")
        return GoodThreshold(t, uo, ue, ratio, tried)
    msg = f"no threshold in [{k}, {kN}] reaches ratio {float(ratio):.6f} ({tried} candidates)"
    if N >= guaranteed_N:
        raise InvariantViolation(msg, stage="find_good_t")
    raise SearchExhausted(f"{msg}; N={N} is below the guaranteed N={guaranteed_N}", stage="find_good_t")


@dataclass(frozen=True)
class OscillationThreshold:
    """``t`` (possibly fractional) with ``ell_plus + ell_minus >= ratio * t``.

    ``t_int`` is ``ceil(t)``; for integer sequences the first indices do not
    change between ``t`` and ``t_int``.
    """

    t: Fraction
    t_int: int
    lplus: int
    lminus: int
    ratio: QuadraticValue
    partition: IntervalPartition
    good: GoodThreshold

    @property
    def ell(self) -> int:
        return self.lplus + self.lminus


def find_oscillation_t(
    s: Sequence[object],
    k: object,
    gamma: object,
    N: int | None = None,
) -> OscillationThreshold:
    """Threshold with ``ell_plus(t) + ell_minus(t) >= (4 + sqrt 8 - gamma) t``.

    The sequence is cut into diagonal intervals, the interval gaps are
    searched with :func:`find_good_t`, and the result is re-verified by a
    direct scan for the first indices.
    """
    a = _as_osc(s)
    k = _rational(_exact(k))
    guaranteed_N = choose_N(gamma)
    if N is None:
        N = guaranteed_N
    osc = oscillation(a)
    if osc.T < k * N:
        raise PreconditionError(f"oscillation {osc.T} is below kN = {k * N}", stage="find_oscillation_t")
    part = interval_partition(a)
    good = find_good_t(part.gaps, k, gamma, N)
    t = good.t
    lplus = _first_above(a, t)
    lminus = _first_below(a, t)
    ratio = target_ratio(gamma, 4)
    if not lplus + lminus >= ratio * t:
        raise InvariantViolation(
            f"ell_plus + ell_minus = {lplus + lminus} < {float(ratio):.6f} * {t}", stage="find_oscillation_t"
        )
    return OscillationThreshold(t, math.ceil(t), lplus, lminus, ratio, part, good)


# -- the recurrence -----------------------------------------------------------------------


@dataclass(frozen=True)
class RecurrenceTrace:
    """``b_1 = 1``, ``b_2 = rho - 2``, ``b_{i+1} = (rho-1) b_i - rho b_{i-1}``.

    ``values`` are exact; ``first_negative`` is the first 1-based index with
    ``b_m < 0`` or None if none occurs within the trace.
    """

    rho: Fraction | QuadraticValue
    values: tuple[Fraction | QuadraticValue, ...]
    first_negative: int | None

    def floats(self) -> list[float]:
        return [float(v) for v in self.values]


def _discriminant(rho: Fraction | QuadraticValue) -> Fraction | QuadraticValue:
    return rho * rho - 6 * rho + 1


def negativity_guaranteed(rho: object) -> bool:
    """True when the characteristic roots are non-real (``3-sqrt8 < rho < 3+sqrt8``)."""
    rho = as_exact(rho)
    return _discriminant(rho) < 0


def _negativity_horizon(rho: Fraction | QuadraticValue) -> int:
    """An index by which the trace must have turned negative (non-real roots).

    ``b_i = 2|z| r^i cos(i*theta + phi)`` changes sign within every run of
    ``ceil(pi/theta) + 1`` consecutive indices.
    """
    with mpmath.workprec(200):
        r = to_mpf(rho, 200)
        disc = -to_mpf(_discriminant(rho), 200)
        theta = mpmath.atan2(mpmath.sqrt(disc), r - 1)
        return int(mpmath.ceil(mpmath.pi / theta)) + 3


def recurrence_trace(rho: object, max_len: int) -> RecurrenceTrace:
    """Run the recurrence exactly until it turns negative or ``max_len`` terms.

    When the roots are non-real the trace must turn negative by a computable
    index; not doing so within ``max_len`` terms, with ``max_len`` past that
    index, raises :class:`InvariantViolation`.
    """
    rho = as_exact(rho)
    if max_len < 1:
        raise PreconditionError("max_len must be positive")
    values: list[Fraction | QuadraticValue] = [Fraction(1)]
    if max_len >= 2:
        values.append(rho - 2)
    first = next((i for i, v in enumerate(values, start=1) if v < 0), None)
    while first is None and len(values) < max_len:
        nxt = (rho - 1) * values[-1] - rho * values[-2]
        values.append(nxt)
        if nxt < 0:
            first = len(values)
    if first is None and negativity_guaranteed(rho) and max_len >= _negativity_horizon(rho):
        raise InvariantViolation(f"trace for rho={rho} stayed nonnegative for {max_len} terms")
    return RecurrenceTrace(rho, tuple(values), first)


def closed_form_values(rho: object, count: int, prec: int = 200) -> list[mpmath.mpf]:
    """``b_i = 2 Re(z alpha^i)`` with ``alpha`` a root of ``x^2 - (rho-1)x + rho``.

    ``z`` is fixed by ``b_0 = 1/rho`` (the recurrence run backwards) and
    ``b_1 = 1``.
    """
    rho = as_exact(rho)
    with mpmath.workprec(prec):
        r = to_mpf(rho, prec)
        disc = to_mpf(_discriminant(rho), prec)
        alpha = ((r - 1) + mpmath.sqrt(mpmath.mpc(disc))) / 2
        # 2Re(z) = 1/rho and 2Re(z*alpha) = 1
        x0 = 1 / (2 * r)
        # Re(z alpha) = x0*Re(alpha) - y0*Im(alpha) = 1/2
        y0 = (x0 * alpha.real - mpmath.mpf(1) / 2) / alpha.imag
        z = mpmath.mpc(x0, y0)
        return [2 * (z * alpha**i).real for i in range(1, count + 1)]


def first_negative(rho: object, max_len: int = 100_000) -> int:
    tr = recurrence_trace(rho, max_len)
    if tr.first_negative is None:
        raise PreconditionError(f"the recurrence for rho={rho} stays nonnegative for {max_len} terms")
    return tr.first_negative


def choose_N(gamma: object) -> int:
    """``6 * 4**m`` with ``m`` the first negative index of the recurrence at
    ``rho = 3 + sqrt 8 - gamma``."""
    gamma = as_exact(gamma)
    if not (0 < gamma < SQRT8 + 3):
        raise PreconditionError(f"gamma must lie in (0, 3 + sqrt 8), got {gamma}")
    return 6 * 4 ** first_negative(target_ratio(gamma, 3))


def extremal_sequence(rho: object, length: int) -> GapSequence:
    """The sequence meeting ``a'_{j+1} = (rho-2) a'_j - 2(a'_1 + ... + a'_{j-1})``
    with equality, starting from 1."""
    rho = as_exact(rho)
    if length < 1:
        raise PreconditionError("length must be positive")
    tr = recurrence_trace(rho, length + 1)
    if tr.first_negative is not None and length >= tr.first_negative:
        raise PreconditionError(
            f"length {length} reaches the first negative term at index {tr.first_negative}"
        )
    vals = tr.values[:length]
    if any(v <= 0 for v in vals):
        raise PreconditionError("extremal sequence has a zero term")
    return GapSequence(vals)


# -- sequence files ------------------------------------------------------------------------


def parse_sequence(text: str) -> list[Number]:
    out: list[Number] = []
    for lineno, ln in enumerate(text.splitlines(), start=1):
        ln = ln.split("#", 1)[0]
        for tok in ln.split():
            try:
                v = Fraction(tok)
            except (ValueError, ZeroDivisionError):
                raise PreconditionError(f"line {lineno}: bad number {tok!r}") from None
            if v < 0:
                raise PreconditionError(f"line {lineno}: negative value {tok}")
            out.append(int(v) if v.denominator == 1 else v)
    return out


def read_sequence(path) -> list[Number]:
    with open(path, encoding="utf-8") as fh:
        return parse_sequence(fh.read())
