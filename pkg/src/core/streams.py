"""s-adic expansions as lazy, replayable digit streams."""

import itertools
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, List, NamedTuple, Optional, Sequence

import numpy as np

from .errors import ContractError, DomainError, ParameterError

# Random streams draw this many digits per generator call; as_array relies on it
RANDOM_CHUNK = 4096


class StreamKind(str, Enum):
    RATIONAL = "rational"
    CHAMPERNOWNE = "champernowne"
    PERIODIC = "periodic"
    BLOCK_OSCILLATOR = "block-oscillator"
    TRANSFORMED = "transformed"
    RANDOM = "random"
    FILE = "file"


class Symbol(NamedTuple):
    """A digit together with its fixed/free role in a transformed stream."""
    digit: int
    fixed: bool


def check_base(s: int) -> int:
    if not isinstance(s, (int, np.integer)) or isinstance(s, bool) or s < 2:
        raise ParameterError(f"base must be an integer >= 2, got {s!r}")
    return int(s)


def check_digit(d: int, s: int) -> int:
    d = int(d)
    if not 0 <= d < s:
        raise ParameterError(f"digit {d} out of range for base {s}")
    return d


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise DomainError(f"not a rational number: {x!r}")
    if not isinstance(x, Rational):
        raise DomainError(f"exact rational required, got {type(x).__name__}")
    return Fraction(x)


def _long_division(x: Fraction, s: int) -> Iterator[int]:
    # Long division never produces a trailing period of s-1
    num, den = x.numerator, x.denominator
    while True:
        num *= s
        d, num = divmod(num, den)
        yield d


def expand(x, s: int, n: int) -> List[int]:
    """Return the first n digits of the canonical base-s expansion of x.

    Args:
        x: Exact rational in [0, 1) (Fraction, int or "p/q" string)
        s: Base
        n: Number of digits

    Returns:
        List[int]: Digits alpha_1 .. alpha_n
    """
    s = check_base(s)
    if n < 0:
        raise ParameterError(f"digit count must be >= 0, got {n}")
    x = _as_fraction(x)
    if not 0 <= x < 1:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    return list(itertools.islice(_long_division(x, s), n))


def evaluate_prefix(digits: Iterable[int], s: int) -> Fraction:
    """Exact value of sum s^-n * alpha_n over the given digit prefix."""
    s = check_base(s)
    acc = 0
    length = 0
    for d in digits:
        acc = acc * s + check_digit(d, s)
        length += 1
    return Fraction(acc, s ** length)


def to_base(k: int, s: int) -> List[int]:
    """Base-s numeral of a positive integer, most significant digit first."""
    out = []
    while k:
        k, r = divmod(k, s)
        out.append(r)
    out.reverse()
    return out


class DigitStream:
    """Replayable lazy sequence of base-s digits alpha_1, alpha_2, ...

    Each call to digits() (or iteration) opens a fresh single-consumer cursor
    from the stored factory, so pulling the first n digits twice gives the same
    answer. Transformed streams additionally carry fixed/free annotations.
    """

    def __init__(self,
                 base: int,
                 kind: StreamKind,
                 factory: Callable[[], Iterator[int]],
                 description: str = "",
                 symbol_factory: Optional[Callable[[], Iterator[Symbol]]] = None,
                 chunk_factory: Optional[Callable[[], Iterator[np.ndarray]]] = None,
                 origin: object = None):
        self.base = check_base(base)
        self.kind = StreamKind(kind)
        self.description = description or self.kind.value
        self._factory = factory
        self._symbol_factory = symbol_factory
        self._chunk_factory = chunk_factory
        # (stage, params) for transformed streams, e.g. ("phi", TransformParams)
        self.origin = origin

    def __repr__(self) -> str:
        return f"DigitStream(base={self.base}, {self.description})"

    def __iter__(self) -> Iterator[int]:
        return self.digits()

    def digits(self) -> Iterator[int]:
        return self._factory()

    @property
    def annotated(self) -> bool:
        return self._symbol_factory is not None

    def symbols(self) -> Iterator[Symbol]:
        if self._symbol_factory is None:
            raise ContractError(f"{self!r} carries no fixed/free annotations")
        return self._symbol_factory()

    def take(self, n: int) -> List[int]:
        return list(itertools.islice(self.digits(), n))

    def as_array(self, n: int) -> np.ndarray:
        """First n digits as an int64 array.

        Raises:
            DomainError: if the stream ends before n digits
        """
        if self._chunk_factory is not None:
            parts = []
            have = 0
            for chunk in self._chunk_factory():
                parts.append(chunk)
                have += chunk.size
                if have >= n:
                    break
            out = np.concatenate(parts)[:n] if parts else np.zeros(0, dtype=np.int64)
        else:
            out = np.fromiter(itertools.islice(self.digits(), n), dtype=np.int64)
        if out.size < n:
            raise DomainError(f"{self!r} ended after {out.size} digits, {n} requested")
        return out.astype(np.int64, copy=False)


def rational_stream(x, s: int) -> DigitStream:
    """Canonical expansion of an exact rational x in [0, 1)."""
    s = check_base(s)
    x = _as_fraction(x)
    if not 0 <= x < 1:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    return DigitStream(s, StreamKind.RATIONAL, lambda: _long_division(x, s),
                       description=f"rational {x}")


def champernowne_stream(s: int) -> DigitStream:
    """Concatenated base-s numerals of 1, 2, 3, ..."""
    s = check_base(s)

    def generate() -> Iterator[int]:
        for k in itertools.count(1):
            yield from to_base(k, s)

    return DigitStream(s, StreamKind.CHAMPERNOWNE, generate, description=f"champernowne base {s}")


def periodic_stream(s: int, pattern: Sequence[int]) -> DigitStream:
    """Purely periodic expansion repeating the given digit block."""
    s = check_base(s)
    block = tuple(check_digit(d, s) for d in pattern)
    if not block:
        raise ParameterError("periodic pattern must not be empty")
    if all(d == s - 1 for d in block):
        raise ParameterError(f"pattern of all {s - 1} is not a canonical expansion")
    label = "".join(str(d) for d in block) if s <= 10 else ",".join(str(d) for d in block)
    return DigitStream(s, StreamKind.PERIODIC, lambda: itertools.cycle(block),
                       description=f"periodic [{label}]")


def block_oscillator_stream(s: int, digit_a: int, digit_b: int) -> DigitStream:
    """digit_a on positions 4^j <= n < 2*4^j, digit_b elsewhere."""
    s = check_base(s)
    a = check_digit(digit_a, s)
    b = check_digit(digit_b, s)
    if a == b:
        raise ParameterError("oscillator digits must differ")

    def generate() -> Iterator[int]:
        for j in itertools.count():
            yield from itertools.repeat(a, 4 ** j)
            yield from itertools.repeat(b, 2 * 4 ** j)

    return DigitStream(s, StreamKind.BLOCK_OSCILLATOR, generate,
                       description=f"oscillator {a},{b}")


def random_stream(s: int, seed: int) -> DigitStream:
    """i.i.d. uniform digits from a seeded numpy generator."""
    s = check_base(s)

    def chunks() -> Iterator[np.ndarray]:
        rng = np.random.default_rng(seed)
        while True:
            yield rng.integers(0, s, size=RANDOM_CHUNK, dtype=np.int64)

    def generate() -> Iterator[int]:
        for chunk in chunks():
            yield from chunk.tolist()

    return DigitStream(s, StreamKind.RANDOM, generate, chunk_factory=chunks,
                       description=f"random seed {seed}")


def digits_stream(s: int, digits: Sequence[int], description: str = "file") -> DigitStream:
    """Finite stream over an explicit digit list (used for digit files)."""
    s = check_base(s)
    data = np.asarray([check_digit(d, s) for d in digits], dtype=np.int64)

    def chunks() -> Iterator[np.ndarray]:
        yield data

    return DigitStream(s, StreamKind.FILE, lambda: iter(data.tolist()),
                       chunk_factory=chunks, description=description)


def file_stream(path: str, s: int) -> DigitStream:
    """Finite stream over a digit file (see read_digit_file for the format)."""
    from ..utils.file_utils import read_digit_file

    return digits_stream(s, read_digit_file(path, s), description=f"file {path}")
