"""Tests for the finite-depth classifier."""

import unittest
from fractions import Fraction

import numpy as np

from src.core.classifier import (ClassificationConfig, DigitVerdict, NumberClassTag,
                                 assemble_tag, classify, tail_spread)
from src.core.errors import ParameterError
from src.core.frequency import CheckpointEntry
from src.core.streams import (block_oscillator_stream, champernowne_stream, digits_stream,
                              periodic_stream)
from src.core.transform import TransformParams, f


class TestClassificationConfig(unittest.TestCase):
    """Test cases for ClassificationConfig."""

    def test_default(self):
        config = ClassificationConfig.default(1000)
        self.assertEqual(config.checkpoints, (64, 128, 256, 512, 1000))
        self.assertEqual(config.delta, Fraction(1, 20))
        self.assertEqual(config.epsilon, Fraction(1, 50))

    def test_rejects(self):
        with self.assertRaises(ParameterError):
            ClassificationConfig(depth=0, checkpoints=())
        with self.assertRaises(ParameterError):
            ClassificationConfig(depth=100, checkpoints=(10, 200))
        with self.assertRaises(ParameterError):
            ClassificationConfig(depth=100, checkpoints=(10, 100), delta=Fraction(0))


class TestAssembleTag(unittest.TestCase):
    """Test cases for the decision table."""

    def _verdict(self, digit, estimate=None):
        return DigitVerdict(digit=digit, converged=estimate is not None,
                            spread=Fraction(0), estimate=estimate)

    def test_table(self):
        eps = Fraction(1, 50)
        third = Fraction(1, 3)
        normal = [self._verdict(d, third) for d in range(3)]
        self.assertEqual(assemble_tag(normal, 3, eps), NumberClassTag.NORMAL)

        quasi = [self._verdict(0, Fraction(2, 3)), self._verdict(1, third), self._verdict(2, Fraction(0))]
        self.assertEqual(assemble_tag(quasi, 3, eps), NumberClassTag.QUASINORMAL)

        mixed = [self._verdict(0), self._verdict(1, third), self._verdict(2)]
        self.assertEqual(assemble_tag(mixed, 3, eps), NumberClassTag.PARTICULARLY_NON_NORMAL)

        none = [self._verdict(d) for d in range(3)]
        self.assertEqual(assemble_tag(none, 3, eps), NumberClassTag.ESSENTIALLY_NON_NORMAL)

        self.assertEqual(assemble_tag([], 3, eps), NumberClassTag.UNDETERMINED)

    def test_tail_spread_uses_window_extremes(self):
        entries = [
            CheckpointEntry(10, (Fraction(1, 2), Fraction(1, 2)),
                            (Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))),
            CheckpointEntry(20, (Fraction(1, 2), Fraction(1, 2)),
                            (Fraction(2, 5), Fraction(3, 10)), (Fraction(7, 10), Fraction(3, 5))),
        ]
        # first entry contributes only its checkpoint ratio
        self.assertEqual(tail_spread(entries, 0), Fraction(3, 10))
        self.assertEqual(tail_spread(entries, 1), Fraction(3, 10))


class TestGoldenStreams(unittest.TestCase):
    """The four golden streams land in the four classes."""

    def setUp(self):
        self.config = ClassificationConfig.default(2 ** 16)

    def test_periodic_uniform_is_normal(self):
        result = classify(periodic_stream(3, [0, 1, 2]), self.config)
        self.assertEqual(result.tag, NumberClassTag.NORMAL)
        self.assertTrue(all(v.converged for v in result.verdicts))

    def test_periodic_biased_is_quasinormal(self):
        result = classify(periodic_stream(3, [0, 0, 1]), self.config)
        self.assertEqual(result.tag, NumberClassTag.QUASINORMAL)
        self.assertAlmostEqual(float(result.verdicts[0].estimate), 2 / 3, places=3)

    def test_block_oscillator_is_essentially_non_normal(self):
        result = classify(block_oscillator_stream(2, 0, 1), self.config)
        self.assertEqual(result.tag, NumberClassTag.ESSENTIALLY_NON_NORMAL)
        self.assertEqual(result.verdicts[0].spread, result.verdicts[1].spread)

    def test_transformed_champernowne_is_particularly_non_normal(self):
        config = ClassificationConfig.default(2 ** 18)
        z = f(TransformParams(3, 1), champernowne_stream(3))
        result = classify(z, config)
        self.assertEqual(result.tag, NumberClassTag.PARTICULARLY_NON_NORMAL)
        self.assertFalse(result.verdicts[0].converged)
        self.assertTrue(result.verdicts[2].converged)
        self.assertLess(abs(result.verdicts[2].estimate - Fraction(1, 3)), Fraction(1, 50))


class TestClassifierBehaviour(unittest.TestCase):
    """Test cases for edge behaviour."""

    def test_few_checkpoints_undetermined(self):
        config = ClassificationConfig.default(100)
        result = classify(periodic_stream(3, [0, 1, 2]), config)
        self.assertEqual(result.tag, NumberClassTag.UNDETERMINED)
        self.assertEqual(result.verdicts, ())

    def test_deterministic(self):
        config = ClassificationConfig.default(4096)
        stream = champernowne_stream(3)
        self.assertEqual(classify(stream, config), classify(stream, config))

    def test_binary_never_particularly_non_normal(self):
        """One binary frequency determines the other, so both verdicts agree."""
        rng = np.random.default_rng(2024)
        config = ClassificationConfig.default(2048)
        for _ in range(1000):
            bias = rng.random()
            digits = (rng.random(2048) < bias).astype(np.int64)
            result = classify(digits_stream(2, digits.tolist()), config)
            self.assertNotEqual(result.tag, NumberClassTag.PARTICULARLY_NON_NORMAL)


if __name__ == '__main__':
    unittest.main()
