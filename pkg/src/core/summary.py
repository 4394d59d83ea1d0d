"""Summary table of the four digit-frequency classes N_s, W_s, T_s, L_s."""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .classifier import ClassificationConfig, NumberClassTag, classify
from .dimension import besicovitch_eggleston, g_dimension_sup, quasinormal_dimension_sup
from .errors import ParameterError
from .frequency import StochasticVector
from .montecarlo import run_indexed
from .streams import check_base, random_stream
from ..utils import logger

CITED = "cited"
COMPUTED = "computed"
ESTIMATE = "estimate"

# Baire category is quoted, never computed
CATEGORY = {
    "N_s": "first",
    "W_s": "first",
    "T_s": "first",
    "L_s": "second",
}

ROW_TAGS = {
    "N_s": NumberClassTag.NORMAL,
    "W_s": NumberClassTag.QUASINORMAL,
    "T_s": NumberClassTag.PARTICULARLY_NON_NORMAL,
    "L_s": NumberClassTag.ESSENTIALLY_NON_NORMAL,
}


@dataclass(frozen=True)
class Cell:
    value: object
    provenance: str
    note: str = ""

    def render(self) -> str:
        text = str(self.value)
        if self.provenance == CITED:
            text += " (cited)"
        return text


@dataclass(frozen=True)
class SummaryRow:
    name: str
    measure: Cell
    dimension: Cell
    category: Cell


@dataclass(frozen=True)
class SummaryTable:
    base: int
    samples: int
    depth: int
    rows: Tuple[SummaryRow, ...]
    undetermined: Fraction

    def row(self, name: str) -> SummaryRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)


def class_fractions(s: int, depth: int, samples: int, seed: int,
                    workers: int = 1,
                    config: Optional[ClassificationConfig] = None) -> Dict[NumberClassTag, Fraction]:
    """Share of uniform random streams landing in each class at the given depth."""
    config = config or ClassificationConfig.default(depth)

    def one(index: int, rng) -> NumberClassTag:
        stream = random_stream(s, int(rng.integers(0, 2 ** 63)))
        return classify(stream, config).tag

    tags = Counter(run_indexed(samples, seed, one, workers))
    return {tag: Fraction(tags.get(tag, 0), samples) for tag in NumberClassTag}


def build_summary_table(s: int, p_list: Sequence[int] = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10),
                        depth: int = 2 ** 16, samples: int = 1000, seed: int = 0,
                        workers: int = 1,
                        config: Optional[ClassificationConfig] = None) -> SummaryTable:
    """Lebesgue measure (Monte Carlo), Hausdorff dimension and Baire category per class.

    For s = 2 the T_s row is degenerate: one binary frequency fixes the other,
    so T_2 is empty and its dimension is 0.
    """
    s = check_base(s)
    if not p_list:
        raise ParameterError("p-list must not be empty")
    logger.info(f"classifying {samples} random streams in base {s} at depth {depth}")
    fractions = class_fractions(s, depth, samples, seed, workers, config)

    normal_dim = besicovitch_eggleston(StochasticVector.uniform(s), s)
    quasi = quasinormal_dimension_sup(s)
    if s == 2:
        t_dimension = Cell(0, COMPUTED, "T_2 is empty")
    else:
        g_sup = g_dimension_sup(p_list, s)
        t_dimension = Cell("sup_p p/(p+2) = 1", COMPUTED,
                           f"max over p <= {max(p_list)} is {g_sup.exact}")
    dimensions = {
        "N_s": Cell(int(normal_dim), COMPUTED, "BE formula at the uniform vector"),
        "W_s": Cell(int(quasi.exact), COMPUTED, "sup of BE over non-uniform vectors"),
        "T_s": t_dimension,
        "L_s": Cell(1, CITED),
    }

    rows = []
    for name, tag in ROW_TAGS.items():
        rows.append(SummaryRow(
            name=name,
            measure=Cell(fractions[tag], ESTIMATE, f"{samples} samples at depth {depth}"),
            dimension=dimensions[name],
            category=Cell(CATEGORY[name], CITED),
        ))
    return SummaryTable(base=s, samples=samples, depth=depth, rows=tuple(rows),
                        undetermined=fractions[NumberClassTag.UNDETERMINED])
