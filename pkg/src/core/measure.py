"""Probability measures with independent s-adic digits and the singular measure mu_p."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from .dimension import DimensionReport
from .errors import ContractError, DomainError, ParameterError
from .frequency import StochasticVector, ratio_extremes
from .montecarlo import run_indexed
from .streams import check_base, expand
from .transform import (Fixed, TransformParams, covering_rank, fixed_pattern, free_count,
                        group_end, position_class)
from ..utils import logger

SHAPE_MU_P = "mu_p"
SHAPE_UNIFORM = "uniform"
SHAPE_GENERAL = "general"

# Per-position entropies beyond point mass / uniform are computed in floats
ENTROPY_TOLERANCE = 1e-12

# dimension_of_measure scans every c_n/n up to l_K only below this length
MAX_SCAN = 2 ** 20


@dataclass(frozen=True)
class IndependentDigitMeasure:
    """Law of sum s^-n xi_n with independent digits xi_n ~ law(n)."""

    base: int
    law: Callable[[int], StochasticVector] = field(compare=False)
    shape: str = SHAPE_GENERAL
    params: Optional[TransformParams] = None

    def law_at(self, n: int) -> StochasticVector:
        if n < 1:
            raise ParameterError(f"position must be >= 1, got {n}")
        return self.law(n)

    def law_matrix(self, n: int) -> np.ndarray:
        """(n, s) float array whose row j-1 is law(j)."""
        s = self.base
        if self.shape == SHAPE_UNIFORM:
            return np.full((n, s), 1.0 / s)
        if self.shape == SHAPE_MU_P:
            pattern = fixed_pattern(self.params, n)
            rows = np.full((n, s), 1.0 / s)
            fixed = pattern >= 0
            rows[fixed] = 0.0
            rows[np.flatnonzero(fixed), pattern[fixed]] = 1.0
            return rows
        return np.vstack([self.law(j).as_floats() for j in range(1, n + 1)])


def mu_p(params: TransformParams) -> IndependentDigitMeasure:
    """Image of Lebesgue measure under f_p: point masses on fixed positions, uniform elsewhere."""
    s = params.s
    uniform = StochasticVector.uniform(s)
    masses = [StochasticVector.point_mass(s, i) for i in range(s)]

    def law(n: int) -> StochasticVector:
        cls = position_class(params, n)
        return masses[cls.digit] if isinstance(cls, Fixed) else uniform

    return IndependentDigitMeasure(s, law, SHAPE_MU_P, params)


def uniform_measure(s: int) -> IndependentDigitMeasure:
    s = check_base(s)
    uniform = StochasticVector.uniform(s)
    return IndependentDigitMeasure(s, lambda n: uniform, SHAPE_UNIFORM)


def general_measure(s: int, law: Callable[[int], StochasticVector]) -> IndependentDigitMeasure:
    s = check_base(s)

    def checked(n: int) -> StochasticVector:
        vector = law(n)
        if vector.base != s:
            raise ContractError(f"law at position {n} has {vector.base} entries, base is {s}")
        return vector

    return IndependentDigitMeasure(s, checked, SHAPE_GENERAL)


def _draw(cumulative: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    rand = rng.random(cumulative.shape[0])
    mask = cumulative > rand[:, None]
    return np.argmax(mask, axis=1)


def _cumulative(measure: IndependentDigitMeasure, n: int) -> np.ndarray:
    cumulative = np.cumsum(measure.law_matrix(n), axis=1)
    # rounding must not leave the last column below a uniform draw
    cumulative[:, -1] = np.inf
    return cumulative


def sample(measure: IndependentDigitMeasure, n: int, seed: int) -> List[int]:
    """First n digits of one draw from the measure (inverse transform per position)."""
    if n < 1:
        raise ParameterError(f"digit count must be >= 1, got {n}")
    digits = _draw(_cumulative(measure, n), np.random.default_rng(seed))
    return digits.tolist()


def sample_values(measure: IndependentDigitMeasure, count: int, precision: int,
                  seed: int, workers: int = 1) -> np.ndarray:
    """Values of `count` independent draws truncated to `precision` digits.

    Sample j uses the generator spawned from (seed, j), so the result does
    not depend on `workers`.
    """
    if precision < 1:
        raise ParameterError(f"precision must be >= 1, got {precision}")
    cumulative = _cumulative(measure, precision)
    weights = float(measure.base) ** -np.arange(1, precision + 1, dtype=np.float64)

    def one(index: int, rng: np.random.Generator) -> float:
        return float(_draw(cumulative, rng) @ weights)

    return np.asarray(run_indexed(count, seed, one, workers), dtype=np.float64)


def empirical_cdf(values: Sequence[float], points: Sequence[float]) -> np.ndarray:
    """Fraction of values <= each point."""
    ordered = np.sort(np.asarray(values, dtype=np.float64))
    if ordered.size == 0:
        raise ParameterError("empirical CDF needs at least one value")
    hits = np.searchsorted(ordered, np.asarray(points, dtype=np.float64), side="right")
    return hits / ordered.size


@dataclass(frozen=True)
class CdfBounds:
    """F(t) lies in [lower, upper]; the two agree once t's digits leave the support."""

    t: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    @property
    def half_width(self) -> Fraction:
        return (self.upper - self.lower) / 2


def cdf(measure: IndependentDigitMeasure, t, precision: int) -> CdfBounds:
    """Bounds on F(t) = measure([0, t]) from the first `precision` digits of t.

    F(t) = sum_n prod_{j<n} q_j(t_j) * sum_{d<t_n} q_n(d); the scan stops as
    soon as the running product vanishes, which for mu_p happens at the first
    fixed position where t's digit differs from the forced one.

    Raises:
        DomainError: t outside [0, 1]
    """
    if precision < 1:
        raise ParameterError(f"precision must be >= 1, got {precision}")
    try:
        t = Fraction(t)
    except (TypeError, ValueError):
        raise DomainError(f"not a rational number: {t!r}")
    if not 0 <= t <= 1:
        raise DomainError(f"t must lie in [0, 1], got {t}")
    if t == 1:
        return CdfBounds(t, Fraction(1), Fraction(1))

    acc: Union[Fraction, float] = Fraction(0)
    mass: Union[Fraction, float] = Fraction(1)
    for n, digit in enumerate(expand(t, measure.base, precision), start=1):
        law = measure.law_at(n).entries
        acc += mass * sum(law[:digit], Fraction(0))
        mass *= law[digit]
        if mass == 0:
            return CdfBounds(t, acc, acc)
    return CdfBounds(t, acc, acc + mass)


@dataclass(frozen=True, eq=False)
class EntropySequence:
    """Per-position entropies h_j as coefficients of ln s, with partial sums c_n = H_n / ln s."""

    base: int
    terms: np.ndarray
    exact: bool

    @property
    def length(self) -> int:
        return int(self.terms.size)

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.terms)

    def coefficient(self, n: int) -> Union[Fraction, float]:
        """c_n, exact when every law is a point mass or uniform."""
        if not 0 <= n <= self.length:
            raise ParameterError(f"n must lie in [0, {self.length}], got {n}")
        total = self.terms[:n].sum()
        return Fraction(int(total)) if self.exact else float(total)

    def ratio(self, n: int) -> Union[Fraction, float]:
        if n < 1:
            raise ParameterError(f"n must be >= 1, got {n}")
        c = self.coefficient(n)
        return c / n if not self.exact else Fraction(c, n)

    def entropy(self, n: int) -> float:
        """H_n in nats."""
        return float(self.coefficient(n)) * math.log(self.base)


def entropy_sequence(measure: IndependentDigitMeasure, n: int) -> EntropySequence:
    """h_j = 0 at point-mass positions, ln s at uniform ones, -sum q ln q otherwise."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    s = measure.base
    if measure.shape == SHAPE_UNIFORM:
        return EntropySequence(s, np.ones(n, dtype=np.int64), True)
    if measure.shape == SHAPE_MU_P:
        free = (fixed_pattern(measure.params, n) < 0).astype(np.int64)
        return EntropySequence(s, free, True)

    terms = np.empty(n, dtype=np.float64)
    exact = True
    for j in range(1, n + 1):
        law = measure.law_at(j)
        if law.point_mass_digit is not None:
            terms[j - 1] = 0.0
        elif law.is_uniform:
            terms[j - 1] = 1.0
        else:
            exact = False
            q = law.as_floats()
            q = q[q > 0]
            terms[j - 1] = float(-(q * np.log(q)).sum() / math.log(s))
    if exact:
        return EntropySequence(s, terms.astype(np.int64), True)
    return EntropySequence(s, terms, False)


def mu_p_closed_form(params: TransformParams, k: int) -> Fraction:
    """c_{m_k}/m_k = p(2^(k-1) - 1) / ((p+1)(2^k - 1) - p 2^(k-1))."""
    p = params.p
    return Fraction(p * (2 ** (k - 1) - 1), (p + 1) * (2 ** k - 1) - p * 2 ** (k - 1))


def dimension_of_measure(measure: IndependentDigitMeasure, horizon: int) -> DimensionReport:
    """liminf H_n / (n ln s) for mu_p (along n = m_k) or an all-uniform measure.

    The evidence rows carry, per group k <= horizon, c_{m_k}, the exact ratio
    and its closed form. When l_horizon is small enough every c_n/n in the
    group is scanned and the group minimum is compared against the value at m_k.

    Raises:
        ContractError: measure is neither mu_p nor uniform
    """
    if horizon < 1:
        raise ParameterError(f"group horizon must be >= 1, got {horizon}")
    if measure.shape == SHAPE_UNIFORM:
        return DimensionReport(kind="measure", exact=Fraction(1), numeric=1.0,
                               limit=Fraction(1), notes=("c_n/n = 1 for every n",))
    if measure.shape != SHAPE_MU_P:
        raise ContractError("dimension_of_measure supports mu_p and uniform measures only")

    params = measure.params
    scan = None
    if group_end(params, horizon) <= MAX_SCAN:
        scan = entropy_sequence(measure, group_end(params, horizon)).partial_sums
    else:
        logger.debug(f"l_{horizon} exceeds {MAX_SCAN}, skipping the per-group scan")

    rows = []
    for k in range(1, horizon + 1):
        m = covering_rank(params, k)
        c = free_count(params, m)
        ratio = Fraction(c, m)
        closed = mu_p_closed_form(params, k)
        row = {"k": k, "rank": m, "coefficient": c, "ratio": ratio,
               "closed_form": closed, "match": ratio == closed}
        if scan is not None:
            lo = 0 if k == 1 else group_end(params, k - 1)
            window = scan[lo:group_end(params, k)]
            positions = np.arange(lo + 1, lo + window.size + 1)
            at, _ = ratio_extremes(window, positions)
            group_min = Fraction(int(window[at]), lo + at + 1)
            row["group_min"] = group_min
            row["minimizer_ok"] = group_min == ratio
        rows.append(row)

    if not all(row["match"] for row in rows):
        raise ContractError("c_{m_k}/m_k disagrees with its closed form")

    p = params.p
    # leading coefficients of 2^(k-1) in numerator and denominator
    limit = Fraction(p, 2 * (p + 1) - p)
    notes = [f"c_(m_k)/m_k -> {limit}"]
    if scan is not None and not all(row["minimizer_ok"] for row in rows):
        notes.append("some group minimum of c_n/n lies below its value at m_k")
    return DimensionReport(
        kind="measure",
        exact=limit,
        numeric=float(limit),
        limit=limit,
        evidence=tuple(rows),
        notes=tuple(notes),
    )
