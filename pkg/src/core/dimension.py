"""Dimension computations: Besicovitch-Eggleston, coverings of S_p, cylinder counts."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ContractError, ParameterError, ResourceLimitError
from .frequency import StochasticVector
from .streams import check_base
from .transform import (TransformParams, covering_rank, fixed_pattern, free_count,
                        group_end)
from ..utils import logger
from ..utils.config import MAX_ENUMERATION

PrefixOracle = Callable[[Sequence[int]], bool]


@dataclass(frozen=True)
class LogQuantity:
    """log_s of a positive quantity (or the zero quantity, whose log is -inf)."""

    base: int
    value: Union[Fraction, float] = Fraction(0)
    zero: bool = False

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction) and not self.zero

    def __float__(self) -> float:
        return -math.inf if self.zero else float(self.value)

    def __add__(self, other: "LogQuantity") -> "LogQuantity":
        """Log of the product."""
        if other.base != self.base:
            raise ParameterError("cannot combine logarithms in different bases")
        if self.zero or other.zero:
            return LogQuantity(self.base, Fraction(0), zero=True)
        return LogQuantity(self.base, self.value + other.value)

    def power(self, alpha: Fraction) -> "LogQuantity":
        if self.zero:
            return self
        return LogQuantity(self.base, self.value * alpha)

    def to_fraction(self) -> Fraction:
        """s ** value, exact for integer logarithms."""
        if self.zero:
            return Fraction(0)
        if not self.exact or self.value.denominator != 1:
            raise ContractError(f"s^{self.value} is not an exact rational")
        return Fraction(self.base) ** int(self.value)


@dataclass(frozen=True)
class DimensionReport:
    """Result of a dimension computation.

    provenance is "computed" for exact results, "estimate" for numerical
    estimators and "cited" for values quoted rather than computed.
    """

    kind: str
    exact: Optional[Fraction]
    numeric: float
    provenance: str = "computed"
    limit: Optional[Fraction] = None
    evidence: Tuple[Dict[str, Any], ...] = field(default=(), compare=False)
    notes: Tuple[str, ...] = ()

    def summary(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "exact": self.exact,
            "numeric": self.numeric,
            "limit": self.limit,
            "provenance": self.provenance,
        }


def besicovitch_eggleston(nu: Union[StochasticVector, Sequence], s: Optional[int] = None) -> float:
    """Hausdorff dimension of the set of numbers with digit frequencies nu.

    sum nu_i ln nu_i / (-ln s), with 0 ln 0 = 0. Uniform vectors give exactly
    1.0 and point masses exactly 0.0.
    """
    if not isinstance(nu, StochasticVector):
        nu = StochasticVector(tuple(nu))
    if s is None:
        s = nu.base
    elif check_base(s) != nu.base:
        raise ParameterError(f"vector of length {nu.base} does not match base {s}")
    if nu.is_uniform:
        return 1.0
    if nu.point_mass_digit is not None:
        return 0.0
    total = math.fsum(q * math.log(q) for q in nu.as_floats() if q > 0)
    return min(1.0, max(0.0, total / -math.log(s)))


@dataclass(frozen=True)
class CoveringReport:
    """The rank-m_k covering of S_p by s^(s^2 p (2^(k-1) - 1)) cylinders."""

    params: TransformParams
    k: int
    rank: int
    count_log: LogQuantity
    mesh_log: LogQuantity

    def alpha_volume(self, alpha: Fraction) -> LogQuantity:
        return self.count_log + self.mesh_log.power(alpha)


def covering_report(params: TransformParams, k: int) -> CoveringReport:
    s, p = params.s, params.p
    rank = covering_rank(params, k)
    return CoveringReport(
        params=params,
        k=k,
        rank=rank,
        count_log=LogQuantity(s, Fraction(s * s * p * (2 ** (k - 1) - 1))),
        mesh_log=LogQuantity(s, Fraction(-rank)),
    )


def _check_alpha(alpha) -> Fraction:
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def alpha_volume_log(params: TransformParams, k: int, alpha) -> LogQuantity:
    """log_s of count * eps_k^alpha = s^2 [2^(k-1)(p - alpha(p+2)) + alpha(p+1) - p]."""
    return covering_report(params, k).alpha_volume(_check_alpha(alpha))


def upper_dimension_bound(params: TransformParams) -> Fraction:
    """Critical exponent of the coverings: the alpha where the 2^(k-1) term vanishes.

    alpha_volume_log is A(alpha) 2^(k-1) + B(alpha) with A linear in alpha, so
    A is read off consecutive differences at alpha = 0 and alpha = 1.
    """
    a0 = (alpha_volume_log(params, 2, 0).value - alpha_volume_log(params, 1, 0).value)
    a1 = (alpha_volume_log(params, 2, 1).value - alpha_volume_log(params, 1, 1).value)
    return a0 / (a0 - a1)


def covering_dimension_report(params: TransformParams, horizon: int) -> DimensionReport:
    if horizon < 1:
        raise ParameterError(f"group horizon must be >= 1, got {horizon}")
    critical = upper_dimension_bound(params)
    evidence = []
    for k in range(1, horizon + 1):
        cover = covering_report(params, k)
        evidence.append({
            "k": k,
            "rank": cover.rank,
            "count_log": cover.count_log.value,
            "alpha_volume_log": cover.alpha_volume(critical).value,
        })
    return DimensionReport(
        kind="covering",
        exact=critical,
        numeric=float(critical),
        evidence=tuple(evidence),
        notes=(f"alpha-volume is constant in k at alpha = {critical} and tends to 0 above it",),
    )


class SupportPrefixOracle:
    """Prefix test for S_p = f_p([0,1)): fixed positions must carry their digit.

    Prefix-closed: callers extend accepted prefixes one digit at a time, so
    only the last digit needs checking.
    """

    def __init__(self, params: TransformParams):
        self.params = params
        self._pattern: List[int] = []

    def _ensure(self, n: int) -> None:
        if n > len(self._pattern):
            size = max(n, 2 * len(self._pattern), group_end(self.params, 1))
            self._pattern = fixed_pattern(self.params, size).tolist()

    def __call__(self, prefix: Sequence[int]) -> bool:
        n = len(prefix)
        if n == 0:
            return True
        self._ensure(n)
        expected = self._pattern[n - 1]
        return expected < 0 or expected == prefix[-1]


def accept_all(prefix: Sequence[int]) -> bool:
    """Oracle for the whole interval [0, 1)."""
    return True


def cylinder_count_enumerate(oracle: PrefixOracle, s: int, rank: int,
                             limit: int = MAX_ENUMERATION) -> int:
    """Count rank-`rank` cylinders whose prefix the oracle accepts at every length.

    Depth-first over the s-ary prefix tree with pruning at rejected prefixes.

    Raises:
        ResourceLimitError: more than `limit` surviving cylinders
    """
    s = check_base(s)
    if rank < 0:
        raise ParameterError(f"rank must be >= 0, got {rank}")
    if rank == 0:
        return 1

    count = 0
    prefix: List[int] = []
    stack = [(0, d) for d in range(s - 1, -1, -1)]
    while stack:
        depth, d = stack.pop()
        del prefix[depth:]
        prefix.append(d)
        if not oracle(prefix):
            continue
        if depth + 1 == rank:
            count += 1
            if count > limit:
                raise ResourceLimitError(
                    f"more than {limit} cylinders at rank {rank}", limit=limit)
            continue
        stack.extend((depth + 1, e) for e in range(s - 1, -1, -1))
    logger.debug(f"enumerated {count} cylinders of rank {rank}")
    return count


def cylinder_count_closed_form(params: TransformParams, rank: int) -> LogQuantity:
    """log_s of the number of rank-`rank` cylinders meeting S_p."""
    if rank < 0:
        raise ParameterError(f"rank must be >= 0, got {rank}")
    return LogQuantity(params.s, Fraction(free_count(params, rank)))


def covering_points(params: TransformParams, ks: Iterable[int]) -> List[Tuple[int, Fraction]]:
    """(rank m_k, count-log) pairs for box_dimension_estimate."""
    points = []
    for k in ks:
        cover = covering_report(params, k)
        points.append((cover.rank, cover.count_log.value))
    return points


def box_dimension_estimate(points: Sequence[Tuple[int, Any]]) -> float:
    """Least-squares slope of count-log against rank, clamped to [0, 1].

    Args:
        points: (rank n, log_s of the cylinder count at rank n), ranks increasing

    Returns:
        float: Estimated box dimension
    """
    if len(points) < 2:
        raise ParameterError("box dimension estimate needs at least two points")
    ranks = np.array([float(n) for n, _ in points], dtype=np.float64)
    logs = np.array([float(c) for _, c in points], dtype=np.float64)
    if np.any(np.diff(ranks) <= 0):
        raise ParameterError("ranks must be strictly increasing")
    coeffs = np.polyfit(ranks, logs, 1)
    return float(np.clip(coeffs[0], 0.0, 1.0))


def estimate_report(params: TransformParams, horizon: int, first: int = 2) -> DimensionReport:
    if horizon < first + 1:
        raise ParameterError(f"group horizon must be >= {first + 1}, got {horizon}")
    points = covering_points(params, range(first, horizon + 1))
    estimate = box_dimension_estimate(points)
    return DimensionReport(
        kind="estimate",
        exact=None,
        numeric=estimate,
        provenance="estimate",
        limit=upper_dimension_bound(params),
        evidence=tuple({"rank": n, "count_log": c} for n, c in points),
    )


def g_dimension_sup(p_list: Sequence[int], s: int = 3) -> DimensionReport:
    """max over p of dim G_p = p/(p+2); the supremum over all p is 1."""
    if not p_list:
        raise ParameterError("p-list must not be empty")
    bounds = [(p, upper_dimension_bound(TransformParams(s, p))) for p in p_list]
    best = max(b for _, b in bounds)
    return DimensionReport(
        kind="g-sup",
        exact=best,
        numeric=float(best),
        limit=Fraction(1),
        evidence=tuple({"p": p, "dimension": b} for p, b in bounds),
        notes=("sup over all p of p/(p+2) is 1: a limit, never attained at finite p",),
    )


def quasinormal_dimension_sup(s: int, steps: int = 20) -> DimensionReport:
    """BE dimensions of non-uniform vectors (1 - 2^-j) uniform + 2^-j delta_0 approaching 1."""
    s = check_base(s)
    if steps < 1:
        raise ParameterError(f"steps must be >= 1, got {steps}")
    uniform = StochasticVector.uniform(s)
    corner = StochasticVector.point_mass(s, 0)
    evidence = []
    for j in range(1, steps + 1):
        w = Fraction(1, 2 ** j)
        nu = StochasticVector(tuple((1 - w) * u + w * c
                                    for u, c in zip(uniform.entries, corner.entries)))
        evidence.append({"j": j, "dimension": besicovitch_eggleston(nu, s)})
    return DimensionReport(
        kind="quasinormal-sup",
        exact=Fraction(1),
        numeric=1.0,
        limit=Fraction(1),
        evidence=tuple(evidence),
        notes=("every vector is non-uniform; their dimensions increase to 1",),
    )
