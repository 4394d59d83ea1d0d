"""nonnormal - digit frequencies, particularly non-normal numbers and their dimensions."""

__version__ = "0.1.0"
__description__ = "s-adic digit streams, the insertion transforms f_p, the measure mu_p and Hausdorff dimensions"

from .core.classifier import ClassificationConfig, NumberClassTag, classify
from .core.streams import DigitStream, champernowne_stream, expand, evaluate_prefix
from .core.transform import TransformParams, f, f_inverse

__all__ = [
    "ClassificationConfig",
    "DigitStream",
    "NumberClassTag",
    "TransformParams",
    "champernowne_stream",
    "classify",
    "evaluate_prefix",
    "expand",
    "f",
    "f_inverse",
]
