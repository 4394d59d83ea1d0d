"""Insertion transforms phi_p, psi_p and f_p = psi_p o phi_p on s-adic digit streams.

Layout of z = f_p(x): the k-th group consists of a fixed segment of
s^2 * 2^(k-1) positions followed by s^2 * p * 2^(k-1) free positions that
carry the next source digits of x. The fixed segment is s sub-blocks of
s * 2^(k-1) positions: for each i <= s-2 the period (i ... i, s-1) with
s-1 copies of i, then the period (s-1, 0, 1, ..., s-2). Each period is
repeated 2^(k-1) times.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from .errors import ContractError, NotInSupportError, ParameterError
from .streams import DigitStream, StreamKind, Symbol
from ..utils import logger


@dataclass(frozen=True)
class TransformParams:
    s: int
    p: int

    def __post_init__(self):
        if not isinstance(self.s, int) or self.s < 2:
            raise ParameterError(f"base must be an integer >= 2, got {self.s!r}")
        if self.s == 2:
            raise ParameterError(
                "base 2 rejected: T_2 is empty (one binary frequency determines the other)")
        if not isinstance(self.p, int) or self.p < 1:
            raise ParameterError(f"p must be a positive integer, got {self.p!r}")

    def fixed_length(self, k: int) -> int:
        return self.s * self.s * 2 ** (k - 1)

    def free_length(self, k: int) -> int:
        return self.s * self.s * self.p * 2 ** (k - 1)

    def free_before(self, k: int) -> int:
        """Source digits consumed by groups 1 .. k-1."""
        return self.s * self.s * self.p * (2 ** (k - 1) - 1)


@dataclass(frozen=True)
class Fixed:
    digit: int


@dataclass(frozen=True)
class Free:
    source_index: int


PositionClass = Union[Fixed, Free]


@dataclass(frozen=True)
class GroupLayout:
    k: int
    start: int
    fixed_length: int
    free_length: int
    end: int

    @property
    def fixed_end(self) -> int:
        return self.start + self.fixed_length - 1


def _check_k(k: int) -> None:
    if k < 1:
        raise ParameterError(f"group index must be >= 1, got {k}")


def _check_checkpoint_digit(params: TransformParams, i: int) -> None:
    if not 0 <= i <= params.s - 2:
        raise ParameterError(
            f"checkpoints are defined for digits 0..{params.s - 2}, got {i}")


def _group_end(params: TransformParams, k: int) -> int:
    return params.s * params.s * (params.p + 1) * (2 ** k - 1)


def group_end(params: TransformParams, k: int) -> int:
    """l_k = s^2 (p+1) (2^k - 1), the last position of group k."""
    _check_k(k)
    return _group_end(params, k)


def group_layout(params: TransformParams, k: int) -> GroupLayout:
    _check_k(k)
    return GroupLayout(
        k=k,
        start=_group_end(params, k - 1) + 1,
        fixed_length=params.fixed_length(k),
        free_length=params.free_length(k),
        end=_group_end(params, k),
    )


def group_of(params: TransformParams, n: int) -> int:
    """The k with l_{k-1} < n <= l_k."""
    if n < 1:
        raise ParameterError(f"position must be >= 1, got {n}")
    unit = params.s * params.s * (params.p + 1)
    q = -(-n // unit)
    return q.bit_length()


def covering_rank(params: TransformParams, k: int) -> int:
    """m_k = l_k - 2^(k-1) s^2 p, the end of group k's fixed segment."""
    _check_k(k)
    return _group_end(params, k) - params.free_length(k)


def upper_checkpoint(params: TransformParams, k: int, i: int) -> int:
    """m'_{k+1}(i): end of the run of periods (i..i, s-1) in group k+1."""
    _check_k(k)
    _check_checkpoint_digit(params, i)
    return _group_end(params, k) + params.s * (i + 1) * 2 ** k


def lower_checkpoint(params: TransformParams, k: int, i: int) -> int:
    """m''_{k+1}(i): start of the run of periods (i..i, s-1) in group k+1."""
    _check_k(k)
    _check_checkpoint_digit(params, i)
    return _group_end(params, k) + params.s * i * 2 ** k + 1


def position_class(params: TransformParams, n: int) -> PositionClass:
    """Closed-form role of position n in every z in S_p."""
    s = params.s
    k = group_of(params, n)
    offset = n - _group_end(params, k - 1)
    fixed = params.fixed_length(k)
    if offset > fixed:
        return Free(params.free_before(k) + offset - fixed)

    unit = s * 2 ** (k - 1)
    b = (offset - 1) // unit + 1
    r = (offset - 1) % s + 1
    if b <= s - 1:
        return Fixed(b - 1) if r <= s - 1 else Fixed(s - 1)
    return Fixed(s - 1) if r == 1 else Fixed(r - 2)


def position_classes(params: TransformParams) -> Iterator[PositionClass]:
    """Sequential walk over position_class(1), position_class(2), ..."""
    s, p = params.s, params.p
    source_index = 0
    tail = [Fixed(s - 1)] + [Fixed(i) for i in range(s - 1)]
    for k in itertools.count(1):
        reps = 2 ** (k - 1)
        for b in range(s - 1):
            period = [Fixed(b)] * (s - 1) + [Fixed(s - 1)]
            for _ in range(reps):
                yield from period
        for _ in range(reps):
            yield from tail
        for _ in range(s * s * p * reps):
            source_index += 1
            yield Free(source_index)


def fixed_pattern(params: TransformParams, n: int) -> np.ndarray:
    """Vectorized layout of positions 1..n: the fixed digit, or -1 on free positions."""
    s = params.s
    out = np.full(n, -1, dtype=np.int64)
    periods = [np.array([b] * (s - 1) + [s - 1], dtype=np.int64) for b in range(s - 1)]
    periods.append(np.array([s - 1] + list(range(s - 1)), dtype=np.int64))
    pos, k = 0, 1
    while pos < n:
        reps = 2 ** (k - 1)
        segment = np.concatenate([np.tile(period, reps) for period in periods])
        take = min(segment.size, n - pos)
        out[pos:pos + take] = segment[:take]
        pos += segment.size + params.free_length(k)
        k += 1
    return out


def free_count(params: TransformParams, n: int) -> int:
    """Number of free positions among 1..n."""
    if n <= 0:
        return 0
    k = group_of(params, n)
    offset = n - _group_end(params, k - 1)
    return params.free_before(k) + max(0, offset - params.fixed_length(k))


def _check_source(params: TransformParams, stream: DigitStream) -> None:
    if stream.base != params.s:
        raise ParameterError(
            f"stream base {stream.base} does not match transform base {params.s}")


def _annotated(params: TransformParams, stage: str, label: str,
               symbols: Callable[[], Iterator[Symbol]]) -> DigitStream:
    return DigitStream(
        params.s, StreamKind.TRANSFORMED,
        lambda: (sym.digit for sym in symbols()),
        description=label,
        symbol_factory=symbols,
        origin=(stage, params),
    )


def phi(params: TransformParams, x: DigitStream) -> DigitStream:
    """Insert the fixed series (0..0 1..1 ... (s-2)..(s-2) (s-1)..(s-1)) before each source group."""
    _check_source(params, x)
    s, p = params.s, params.p

    def symbols() -> Iterator[Symbol]:
        source = x.digits()
        for k in itertools.count(1):
            reps = 2 ** (k - 1)
            for i in range(s - 1):
                yield from itertools.repeat(Symbol(i, True), reps * (s - 1))
            yield from itertools.repeat(Symbol(s - 1, True), reps)
            need = s * s * p * reps
            got = 0
            for d in itertools.islice(source, need):
                got += 1
                yield Symbol(d, False)
            if got < need:
                return

    return _annotated(params, "phi", f"phi_{p}({x.description})", symbols)


def psi(params: TransformParams, y: DigitStream) -> DigitStream:
    """Apply the insertion rules of psi_p to an annotated phi_p output.

    After every s-1 consecutive fixed copies of a digit i <= s-2 insert s-1;
    after every fixed s-1 insert 0, 1, ..., s-2. Free digits pass untouched.
    """
    if not y.annotated or y.origin != ("phi", params):
        raise ContractError(f"psi_{params.p} needs a phi_{params.p} output, got {y!r}")
    s = params.s
    after_top = tuple(Symbol(i, True) for i in range(s - 1))
    closing = Symbol(s - 1, True)

    def symbols() -> Iterator[Symbol]:
        run_digit, run = None, 0
        for sym in y.symbols():
            yield sym
            if not sym.fixed:
                run_digit, run = None, 0
            elif sym.digit == s - 1:
                yield from after_top
            else:
                if sym.digit != run_digit:
                    run_digit, run = sym.digit, 0
                run += 1
                if run == s - 1:
                    yield closing
                    run = 0

    label = y.description.replace("phi_", "f_", 1)
    return _annotated(params, "psi", label, symbols)


def f(params: TransformParams, x: DigitStream) -> DigitStream:
    """f_p = psi_p(phi_p(x))."""
    return psi(params, phi(params, x))


def f_positional(params: TransformParams, x: DigitStream) -> DigitStream:
    """f_p assembled from position_class alone (Fixed -> digit, Free(j) -> alpha_j(x))."""
    _check_source(params, x)

    def generate() -> Iterator[int]:
        source = x.digits()
        for n in itertools.count(1):
            cls = position_class(params, n)
            if isinstance(cls, Fixed):
                yield cls.digit
            else:
                d = next(source, None)
                if d is None:
                    return
                yield d

    return DigitStream(params.s, StreamKind.TRANSFORMED, generate,
                       description=f"f_{params.p}({x.description}) positional")


def f_inverse(params: TransformParams, z: DigitStream) -> DigitStream:
    """Recover x from z = f_p(x), checking every fixed position on the way.

    Raises NotInSupportError (while consuming) at the first fixed position
    whose digit differs from the layout.
    """
    _check_source(params, z)

    def generate() -> Iterator[int]:
        for n, (cls, d) in enumerate(zip(position_classes(params), z.digits()), start=1):
            if isinstance(cls, Fixed):
                if d != cls.digit:
                    raise NotInSupportError(n, cls.digit, d)
            else:
                yield d

    return DigitStream(params.s, StreamKind.TRANSFORMED, generate,
                       description=f"f_{params.p}^-1({z.description})")


@dataclass(frozen=True)
class SubsequenceLimits:
    """Limits of N_i(z,n)/n along n = m''_{k+1}(i)-1 and n = m'_{k+1}(i)."""

    digit: int
    lower: Fraction
    upper: Fraction
    closed_form_upper: Fraction

    @property
    def gap(self) -> Fraction:
        return self.upper - self.lower


def expected_subsequence_limits(params: TransformParams, i: int) -> SubsequenceLimits:
    """Exact subsequence limits for z = f_p(x), x s-normal.

    Up to m'' - 1 digit i occurs s(2^k - 1) times in fixed segments plus
    s p (2^k - 1) + o(2^k) times among free digits; up to m' the partial
    group adds (s-1) 2^k more. closed_form_upper keeps the closed form
    (p+2)/(s(p+1)+i+1) that assumes s 2^k there instead.
    """
    _check_checkpoint_digit(params, i)
    s, p = params.s, params.p
    lower = Fraction(p + 1, s * (p + 1) + i)
    upper = Fraction(s * (p + 2) - 1, s * (s * (p + 1) + i + 1))
    closed_form_upper = Fraction(p + 2, s * (p + 1) + i + 1)
    # (s-2)s(p+1) + (s-1)i > 0 for s >= 3
    assert upper > lower
    return SubsequenceLimits(digit=i, lower=lower, upper=upper, closed_form_upper=closed_form_upper)


@dataclass(frozen=True)
class CheckpointRatios:
    k: int
    lower_position: int
    upper_position: int
    lower_ratio: Fraction
    upper_ratio: Fraction
    fixed_count: int
    derived_fixed_count: int
    closed_form_fixed_count: int

    @property
    def gap(self) -> Fraction:
        return self.upper_ratio - self.lower_ratio


@dataclass(frozen=True)
class OscillationReport:
    params: TransformParams
    limits: SubsequenceLimits
    rows: Tuple[CheckpointRatios, ...]
    realized: str
    nearest: str

    @property
    def realized_upper(self) -> Optional[Fraction]:
        return {"derived": self.limits.upper, "closed_form": self.limits.closed_form_upper}.get(self.realized)


def oscillation_report(params: TransformParams, source: DigitStream, i: int,
                       ks: Iterable[int]) -> OscillationReport:
    """Brute-force digit counts of f_p(source) at m''_{k+1}(i)-1 and m'_{k+1}(i).

    realized names the upper limit whose fixed-digit count identity holds
    exactly at every k ("derived", "closed_form" or "neither"); nearest names the
    candidate closest to the empirical ratio at the deepest k.
    """
    ks = sorted(set(ks))
    if not ks:
        raise ParameterError("at least one k is required")
    limits = expected_subsequence_limits(params, i)
    s = params.s
    total = upper_checkpoint(params, ks[-1], i)
    logger.debug(f"oscillation check: {total} digits of f_{params.p}({source.description})")

    digits = np.empty(total, dtype=np.int64)
    fixed = np.empty(total, dtype=bool)
    for n, sym in enumerate(itertools.islice(f(params, source).symbols(), total)):
        digits[n] = sym.digit
        fixed[n] = sym.fixed
    hits = digits == i
    cum = np.cumsum(hits, dtype=np.int64)
    fixed_cum = np.cumsum(hits & fixed, dtype=np.int64)

    rows: List[CheckpointRatios] = []
    for k in ks:
        lo = lower_checkpoint(params, k, i) - 1
        hi = upper_checkpoint(params, k, i)
        rows.append(CheckpointRatios(
            k=k,
            lower_position=lo,
            upper_position=hi,
            lower_ratio=Fraction(int(cum[lo - 1]), lo),
            upper_ratio=Fraction(int(cum[hi - 1]), hi),
            fixed_count=int(fixed_cum[hi - 1]),
            derived_fixed_count=s * (2 ** k - 1) + (s - 1) * 2 ** k,
            closed_form_fixed_count=s * (2 ** (k + 1) - 1),
        ))

    if all(r.fixed_count == r.derived_fixed_count for r in rows):
        realized = "derived"
    elif all(r.fixed_count == r.closed_form_fixed_count for r in rows):
        realized = "closed_form"
    else:
        realized = "neither"
    deepest = rows[-1].upper_ratio
    nearest = ("derived" if abs(deepest - limits.upper) <= abs(deepest - limits.closed_form_upper)
               else "closed_form")
    return OscillationReport(params=params, limits=limits, rows=tuple(rows),
                             realized=realized, nearest=nearest)
