"""Finite-depth classification into normal / quasinormal / particularly and essentially non-normal."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import ParameterError
from .frequency import (CheckpointEntry, FrequencyProfile, count_digits,
                        default_checkpoints, validate_checkpoints)
from .streams import DigitStream
from ..utils.config import (DEFAULT_CHECKPOINT_RATIO, DEFAULT_CHECKPOINT_START,
                            DEFAULT_DELTA, DEFAULT_EPSILON)

MIN_CHECKPOINTS = 4


class NumberClassTag(str, Enum):
    NORMAL = "Normal"
    QUASINORMAL = "Quasinormal"
    PARTICULARLY_NON_NORMAL = "ParticularlyNonNormal"
    ESSENTIALLY_NON_NORMAL = "EssentiallyNonNormal"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ClassificationConfig:
    depth: int
    checkpoints: Tuple[int, ...]
    delta: Fraction = DEFAULT_DELTA
    epsilon: Fraction = DEFAULT_EPSILON

    def __post_init__(self):
        if self.depth < 1:
            raise ParameterError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "checkpoints", validate_checkpoints(self.checkpoints, self.depth))
        object.__setattr__(self, "delta", Fraction(self.delta))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        if self.delta <= 0 or self.epsilon <= 0:
            raise ParameterError("delta and epsilon must be positive")

    @classmethod
    def default(cls, depth: int,
                delta: Fraction = DEFAULT_DELTA,
                epsilon: Fraction = DEFAULT_EPSILON,
                start: int = DEFAULT_CHECKPOINT_START,
                ratio: int = DEFAULT_CHECKPOINT_RATIO) -> "ClassificationConfig":
        return cls(depth=depth, checkpoints=default_checkpoints(depth, start, ratio),
                   delta=delta, epsilon=epsilon)


@dataclass(frozen=True)
class DigitVerdict:
    """Converged (with a limit estimate) or Oscillating, for one digit."""

    digit: int
    converged: bool
    spread: Fraction
    estimate: Optional[Fraction] = None

    @property
    def label(self) -> str:
        return "Converged" if self.converged else "Oscillating"


@dataclass(frozen=True)
class NumberClass:
    tag: NumberClassTag
    verdicts: Tuple[DigitVerdict, ...]
    profile: Optional[FrequencyProfile] = field(default=None, compare=False)


def tail_spread(entries: Sequence[CheckpointEntry], digit: int) -> Fraction:
    """max - min of the digit's ratio over positions from entries[0] to entries[-1].

    The first entry contributes only its checkpoint ratio; later entries
    contribute the extremes of their whole window.
    """
    values = [entries[0].ratios[digit]]
    for entry in entries[1:]:
        values.append(entry.window_min[digit])
        values.append(entry.window_max[digit])
    return max(values) - min(values)


def assemble_tag(verdicts: Sequence[DigitVerdict], base: int, epsilon: Fraction) -> NumberClassTag:
    if not verdicts:
        return NumberClassTag.UNDETERMINED
    converged = [v.converged for v in verdicts]
    if all(converged):
        target = Fraction(1, base)
        if all(abs(v.estimate - target) <= epsilon for v in verdicts):
            return NumberClassTag.NORMAL
        return NumberClassTag.QUASINORMAL
    if not any(converged):
        return NumberClassTag.ESSENTIALLY_NON_NORMAL
    return NumberClassTag.PARTICULARLY_NON_NORMAL


def classify_profile(profile: FrequencyProfile, config: ClassificationConfig) -> NumberClass:
    entries = profile.checkpoints
    if len(entries) < MIN_CHECKPOINTS:
        return NumberClass(NumberClassTag.UNDETERMINED, (), profile)

    tail = entries[len(entries) // 2:]
    verdicts = []
    for d in range(profile.base):
        spread = tail_spread(tail, d)
        converged = spread < config.delta
        verdicts.append(DigitVerdict(
            digit=d,
            converged=converged,
            spread=spread,
            estimate=entries[-1].ratios[d] if converged else None,
        ))
    verdicts = tuple(verdicts)
    return NumberClass(assemble_tag(verdicts, profile.base, config.epsilon), verdicts, profile)


def classify(stream: DigitStream, config: ClassificationConfig) -> NumberClass:
    """Classify the stream's prefix of length config.depth."""
    profile = count_digits(stream, config.depth, config.checkpoints)
    return classify_profile(profile, config)
