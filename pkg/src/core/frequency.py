"""Digit counts N_i(x,k), checkpointed ratio logs and stochastic vectors."""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ParameterError
from .streams import DigitStream
from ..utils.config import DEFAULT_CHECKPOINT_RATIO, DEFAULT_CHECKPOINT_START

FLOAT_TOLERANCE = 1e-12

Number = Union[Fraction, float]


@dataclass(frozen=True)
class StochasticVector:
    """Probability vector (nu_0, ..., nu_{s-1}); exact when all entries are Fractions."""

    entries: Tuple[Number, ...]

    def __post_init__(self):
        if len(self.entries) < 2:
            raise ParameterError("a stochastic vector needs at least two entries")
        if any(e < 0 for e in self.entries):
            raise ParameterError(f"negative entry in {self.entries}")
        if self.exact:
            if sum(self.entries) != 1:
                raise ParameterError(f"entries sum to {sum(self.entries)}, not 1")
        elif abs(math.fsum(float(e) for e in self.entries) - 1.0) > FLOAT_TOLERANCE:
            raise ParameterError(f"entries sum to {math.fsum(self.entries)}, not 1")

    @classmethod
    def uniform(cls, s: int) -> "StochasticVector":
        return cls(tuple(Fraction(1, s) for _ in range(s)))

    @classmethod
    def point_mass(cls, s: int, i: int) -> "StochasticVector":
        if not 0 <= i < s:
            raise ParameterError(f"digit {i} out of range for base {s}")
        return cls(tuple(Fraction(int(d == i)) for d in range(s)))

    @classmethod
    def parse(cls, text: str) -> "StochasticVector":
        """Parse "1/2,1/2,0" (exact) or "0.5,0.5,0" (decimal text read exactly)."""
        try:
            entries = tuple(Fraction(part.strip()) for part in text.split(","))
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"cannot parse stochastic vector {text!r}")
        return cls(entries)

    @property
    def exact(self) -> bool:
        return all(isinstance(e, (Fraction, int)) for e in self.entries)

    @property
    def base(self) -> int:
        return len(self.entries)

    @property
    def is_uniform(self) -> bool:
        s = self.base
        if self.exact:
            return all(e == Fraction(1, s) for e in self.entries)
        return all(abs(float(e) - 1.0 / s) <= FLOAT_TOLERANCE for e in self.entries)

    @property
    def point_mass_digit(self) -> Optional[int]:
        for i, e in enumerate(self.entries):
            if e == 1:
                return i
        return None

    def as_floats(self) -> np.ndarray:
        return np.asarray([float(e) for e in self.entries], dtype=float)


@dataclass(frozen=True)
class CheckpointEntry:
    """Ratios N_i(x,n)/n at a checkpoint plus their extremes since the previous one."""

    position: int
    ratios: Tuple[Fraction, ...]
    window_min: Tuple[Fraction, ...]
    window_max: Tuple[Fraction, ...]


@dataclass(frozen=True)
class FrequencyProfile:
    base: int
    depth: int
    counts: Tuple[int, ...]
    checkpoints: Tuple[CheckpointEntry, ...]

    def ratios(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.depth) for c in self.counts)


def default_checkpoints(depth: int,
                        start: int = DEFAULT_CHECKPOINT_START,
                        ratio: int = DEFAULT_CHECKPOINT_RATIO) -> Tuple[int, ...]:
    """Geometric checkpoints start * ratio^j <= depth, closed by depth itself."""
    if depth < 1:
        raise ParameterError(f"depth must be >= 1, got {depth}")
    if start < 1 or ratio < 2:
        raise ParameterError(f"checkpoint start must be >= 1 and ratio >= 2, got {start}, {ratio}")
    points: List[int] = []
    n = start
    while n <= depth:
        points.append(n)
        n *= ratio
    if not points or points[-1] != depth:
        points.append(depth)
    return tuple(points)


def validate_checkpoints(checkpoints: Sequence[int], depth: int) -> Tuple[int, ...]:
    points = tuple(int(c) for c in checkpoints)
    if any(c < 1 or c > depth for c in points):
        raise ParameterError(f"checkpoints must lie in [1, {depth}]")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise ParameterError("checkpoints must be strictly increasing")
    return points


def _refine_extreme(counts: np.ndarray, positions: np.ndarray, ratio: np.ndarray,
                    start: int, sign: int) -> int:
    # float ratios in [0, 1] sit within eps/2 of the exact ones, so the exact
    # extreme is among the indices whose float ratio is this close to start's
    near = np.flatnonzero(np.abs(ratio - ratio[start]) <= 4 * np.finfo(float).eps)
    best = start
    while True:
        diff = sign * (counts[near] * positions[best] - counts[best] * positions[near])
        j = int(np.argmax(diff))
        if diff[j] <= 0:
            return int(near[np.flatnonzero(diff == 0)[0]])
        best = int(near[j])


def ratio_extremes(counts: np.ndarray, positions: np.ndarray) -> Tuple[int, int]:
    """Indices of the smallest and largest counts[i] / positions[i].

    Candidates are compared by cross-multiplying in int64, so ratios that
    round to the same double are still told apart. Ties go to the first index.
    """
    counts = np.asarray(counts, dtype=np.int64)
    positions = np.asarray(positions, dtype=np.int64)
    ratio = counts / positions
    return (_refine_extreme(counts, positions, ratio, int(np.argmin(ratio)), -1),
            _refine_extreme(counts, positions, ratio, int(np.argmax(ratio)), 1))


def count_digits(stream: DigitStream, k: int,
                 checkpoints: Optional[Sequence[int]] = None) -> FrequencyProfile:
    """Count N_i(x,k) for every digit and log ratios at the checkpoints.

    Args:
        stream: Source digits
        k: Depth (number of digits consumed)
        checkpoints: Positions <= k; defaults to default_checkpoints(k)

    Returns:
        FrequencyProfile: exact counts and exact checkpoint ratios
    """
    if k < 1:
        raise ParameterError(f"depth must be >= 1, got {k}")
    points = validate_checkpoints(
        default_checkpoints(k) if checkpoints is None else checkpoints, k)

    s = stream.base
    digits = stream.as_array(k)
    positions = np.arange(1, k + 1, dtype=np.int64)
    bounds = [0] + list(points)

    counts = []
    per_digit = []
    for d in range(s):
        cum = np.cumsum(digits == d, dtype=np.int64)
        counts.append(int(cum[-1]))
        at, lows, highs = [], [], []
        for lo, hi in zip(bounds, bounds[1:]):
            w_min, w_max = ratio_extremes(cum[lo:hi], positions[lo:hi])
            i_min, i_max = lo + w_min, lo + w_max
            at.append(Fraction(int(cum[hi - 1]), hi))
            lows.append(Fraction(int(cum[i_min]), i_min + 1))
            highs.append(Fraction(int(cum[i_max]), i_max + 1))
        per_digit.append((at, lows, highs))

    entries = tuple(
        CheckpointEntry(
            position=pos,
            ratios=tuple(per_digit[d][0][j] for d in range(s)),
            window_min=tuple(per_digit[d][1][j] for d in range(s)),
            window_max=tuple(per_digit[d][2][j] for d in range(s)),
        )
        for j, pos in enumerate(points)
    )
    return FrequencyProfile(base=s, depth=k, counts=tuple(counts), checkpoints=entries)
