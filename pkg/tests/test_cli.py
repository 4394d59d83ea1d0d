"""Tests for the command line interface, reports and digit files."""

import io
import json
import os
import shutil
import tempfile
import unittest
from fractions import Fraction
from unittest.mock import patch

from src import __description__
from src.cli import main, parse_source
from src.core.errors import DomainError, ParameterError
from src.core.streams import champernowne_stream
from src.utils import logger
from src.utils.config import reset_config
from src.utils.file_utils import read_digit_file, write_output
from src.utils.report_utils import from_json, make_report, render, to_csv, to_json


class CliTestCase(unittest.TestCase):
    """Runs main() against a private config directory."""

    def setUp(self):
        """Set up test environment."""
        self.temp_dir = tempfile.mkdtemp()
        reset_config()

    def tearDown(self):
        """Clean up test environment."""
        shutil.rmtree(self.temp_dir, ignore_errors=True)
        reset_config()
        logger.set_level("info")

    def _run(self, *argv):
        with patch('sys.stdout', new_callable=io.StringIO) as out, \
                patch('sys.stderr', new_callable=io.StringIO) as err:
            code = main(list(argv) + ['--config-dir', self.temp_dir])
        self.stderr = err.getvalue()
        return code, out.getvalue()

    def _json(self, *argv):
        code, out = self._run(*argv, '--format', 'json')
        self.assertEqual(code, 0, self.stderr)
        return from_json(out)


class TestClassifyCommand(CliTestCase):
    """Test cases for classify."""

    def test_periodic_normal(self):
        report = self._json('classify', '--source', 'periodic:012', '--depth', '65536')
        self.assertEqual(report.results[0], {"record": "class", "tag": "Normal"})
        verdicts = [row for row in report.results if row["record"] == "verdict"]
        self.assertEqual(len(verdicts), 3)
        checkpoints = [row for row in report.results if row["record"] == "checkpoint"]
        self.assertEqual(checkpoints[-1]["position"], 65536)

    def test_oscillator_binary(self):
        report = self._json('classify', '--base', '2', '--source', 'oscillator:0,1')
        self.assertEqual(report.results[0]["tag"], "EssentiallyNonNormal")

    def test_bad_sources(self):
        self.assertEqual(self._run('classify', '--source', 'nonsense')[0], 2)
        self.assertEqual(self._run('classify', '--source', 'rational:abc')[0], 2)
        self.assertEqual(self._run('classify', '--source', 'rational:3/2')[0], 3)
        self.assertEqual(self._run('classify', '--base', '2', '--source', 'transformed:1,zero')[0], 2)

    def test_missing_source_is_usage_error(self):
        with patch('sys.stderr', new_callable=io.StringIO):
            with self.assertRaises(SystemExit) as ctx:
                main(['classify'])
        self.assertEqual(ctx.exception.code, 2)


class TestTransformCommand(CliTestCase):
    """Test cases for transform."""

    def test_forward_zero(self):
        report = self._json('transform', '--base', '3', '-p', '1', '--source', 'zero', '-n', '18')
        self.assertEqual([row["digit"] for row in report.results],
                         [0, 0, 2, 1, 1, 2, 2, 0, 1] + [0] * 9)
        self.assertEqual(report.results[0]["class"], "fixed")
        self.assertEqual(report.results[9]["class"], "free")
        self.assertEqual(report.results[9]["source_index"], 1)

    def test_binary_rejected(self):
        code, _ = self._run('transform', '--base', '2', '-p', '1', '--source', 'zero', '-n', '5')
        self.assertEqual(code, 2)
        self.assertIn("T_2", self.stderr)

    def test_inverse_non_member(self):
        code, _ = self._run('transform', '-p', '1', '--source', 'periodic:1', '-n', '5',
                            '--direction', 'inverse')
        self.assertEqual(code, 3)
        self.assertIn("position 1", self.stderr)

    def test_forward_then_inverse(self):
        forward = self._json('transform', '-p', '1', '--source', 'champernowne', '-n', '54')
        path = os.path.join(self.temp_dir, 'z.txt')
        with open(path, 'w') as f:
            f.write("".join(str(row["digit"]) for row in forward.results) + "\n")
        inverse = self._json('transform', '-p', '1', '--source', f'file:{path}', '-n', '27',
                             '--direction', 'inverse')
        self.assertEqual([row["digit"] for row in inverse.results], champernowne_stream(3).take(27))

    def test_short_file_source(self):
        # a valid S_1 prefix: the first fixed block, then one free digit
        path = os.path.join(self.temp_dir, 'short.txt')
        with open(path, 'w') as f:
            f.write("0021122010\n")
        for direction in ('forward', 'inverse'):
            code, out = self._run('transform', '-p', '1', '--source', f'file:{path}', '-n', '50',
                                  '--direction', direction)
            self.assertEqual(code, 3)
            self.assertEqual(out, "")
            self.assertIn("of 50", self.stderr)
        report = self._json('transform', '-p', '1', '--source', f'file:{path}', '-n', '1',
                            '--direction', 'inverse')
        self.assertEqual(report.results, [{"position": 1, "digit": 0}])


class TestTableCommand(CliTestCase):
    """Test cases for table."""

    def test_base_three_table(self):
        report = self._json('table', '--base', '3', '-p', '1,2', '--samples', '50',
                            '--depth', '4096')
        self.assertEqual([row["set"] for row in report.results], ["N_s", "W_s", "T_s", "L_s"])
        rows = {row["set"]: row for row in report.results}
        self.assertEqual(rows["T_s"]["hausdorff_dimension"], "sup_p p/(p+2) = 1")
        self.assertEqual(rows["L_s"]["baire_category"], "second (cited)")
        for row in report.results:
            self.assertEqual(row["category_provenance"], "cited")
        self.assertEqual(report.params["p_list"], [1, 2])
        self.assertEqual(report.params["samples"], 50)
        total = sum(row["lebesgue_measure"] for row in report.results) + report.params["undetermined"]
        self.assertEqual(total, 1)

    def test_bad_p_list(self):
        self.assertEqual(self._run('table', '-p', '1,x', '--samples', '2', '--depth', '256')[0], 2)


class TestDimensionCommand(CliTestCase):
    """Test cases for dimension."""

    def test_be(self):
        report = self._json('dimension', 'be', '--base', '3', '--nu', '1/2,1/2,0')
        summary = report.results[0]
        self.assertEqual(summary["kind"], "be")
        self.assertIsNone(summary["exact"])
        self.assertAlmostEqual(summary["numeric"], 0.630930, places=6)

    def test_be_invalid(self):
        self.assertEqual(self._run('dimension', 'be', '--nu', '1/2,1/3,0')[0], 2)

    def test_covering(self):
        report = self._json('dimension', 'covering', '-p', '1', '--base', '3', '-K', '8')
        self.assertEqual(report.results[0]["exact"], Fraction(1, 3))
        evidence = [row for row in report.results if row["record"] == "evidence"]
        self.assertEqual(len(evidence), 8)

    def test_measure(self):
        report = self._json('dimension', 'measure', '-p', '2', '-K', '6')
        self.assertEqual(report.results[0]["exact"], Fraction(1, 2))

    def test_estimate(self):
        report = self._json('dimension', 'estimate', '-p', '1', '-K', '8')
        self.assertEqual(report.provenance, "estimate")
        self.assertLess(abs(report.results[0]["numeric"] - 1 / 3), 0.05)

    def test_g_sup(self):
        report = self._json('dimension', 'g-sup', '--pmax', '10')
        summary = report.results[0]
        self.assertEqual(summary["exact"], Fraction(5, 6))
        self.assertEqual(summary["limit"], 1)
        notes = [row["text"] for row in report.results if row["record"] == "note"]
        self.assertTrue(any("is 1" in note for note in notes))


class TestMeasureCommand(CliTestCase):
    """Test cases for measure."""

    def test_sample(self):
        report = self._json('measure', 'sample', '-p', '1', '--base', '3', '-n', '9', '--seed', '7')
        self.assertEqual([row["digit"] for row in report.results], [0, 0, 2, 1, 1, 2, 2, 0, 1])

    def test_sample_values(self):
        report = self._json('measure', 'sample', '-p', '1', '-n', '20', '--count', '5')
        self.assertEqual(len(report.results), 5)
        for row in report.results:
            self.assertTrue(0 <= row["value"] < 1)

    def test_cdf(self):
        report = self._json('measure', 'cdf', '-p', '1', '--base', '3', '--t', '0', '1')
        self.assertEqual(report.results[0], {"t": 0, "lower": 0, "upper": 0})
        self.assertEqual(report.results[1], {"t": 1, "lower": 1, "upper": 1})

    def test_entropy(self):
        report = self._json('measure', 'entropy', '-p', '1', '--base', '3', '-K', '3')
        self.assertIn({"k": 3, "point": "m_k", "n": 90, "c_n": 27, "ratio": Fraction(3, 10)},
                      report.results)

    def test_entropy_csv(self):
        code, out = self._run('measure', 'entropy', '-p', '1', '-K', '3', '--format', 'csv')
        self.assertEqual(code, 0)
        lines = out.splitlines()
        self.assertEqual(lines[0], "k,point,n,c_n,ratio,ratio_float")
        self.assertIn("3,m_k,90,27,3/10,0.3", lines)


class TestGeneralOptions(CliTestCase):
    """Test cases for output handling and configuration."""

    def test_deterministic_output(self):
        argv = ('measure', 'sample', '-p', '1', '-n', '60', '--seed', '3', '--format', 'csv')
        self.assertEqual(self._run(*argv), self._run(*argv))

    def test_config_format(self):
        with open(os.path.join(self.temp_dir, 'config.yaml'), 'w') as f:
            f.write("format: json\n")
        code, out = self._run('dimension', 'g-sup', '--pmax', '3')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out)["command"], "dimension")

    def test_text_output(self):
        code, out = self._run('dimension', 'g-sup', '--pmax', '3')
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("dimension (computed)"))
        self.assertIn("3/5", out)

    def test_out_file(self):
        path = os.path.join(self.temp_dir, 'out', 'report.json')
        code, out = self._run('dimension', 'g-sup', '--pmax', '2', '--format', 'json', '--out', path)
        self.assertEqual((code, out), (0, ""))
        with open(path) as f:
            self.assertEqual(from_json(f.read()).results[0]["exact"], Fraction(1, 2))

    def test_no_command(self):
        with patch('sys.stdout', new_callable=io.StringIO) as out:
            self.assertEqual(main([]), 0)
        self.assertIn("usage", out.getvalue())
        # help text is wrapped to the terminal width
        self.assertIn("".join(__description__.split()), "".join(out.getvalue().split()))

    def test_version(self):
        with patch('sys.stdout', new_callable=io.StringIO) as out:
            with self.assertRaises(SystemExit) as ctx:
                main(['--version'])
        self.assertEqual(ctx.exception.code, 0)
        self.assertIn("nonnormal", out.getvalue())


class TestParseSource(unittest.TestCase):
    """Test cases for source specs."""

    def test_sources(self):
        self.assertEqual(parse_source('zero', 3).take(3), [0, 0, 0])
        self.assertEqual(parse_source('rational:1/3', 3).take(2), [1, 0])
        self.assertEqual(parse_source('periodic:01', 3).take(4), [0, 1, 0, 1])
        self.assertEqual(parse_source('periodic:1,10', 11).take(2), [1, 10])
        self.assertEqual(parse_source('oscillator:1,0', 2).take(3), [1, 0, 0])
        self.assertEqual(parse_source('random:4', 3).take(50), parse_source('random', 3, seed=4).take(50))
        self.assertEqual(parse_source('transformed:1,zero', 3).take(3), [0, 0, 2])
        self.assertEqual(parse_source('transformed:1', 3).take(12)[9:],
                         champernowne_stream(3).take(3))

    def test_bad_specs(self):
        for text in ('x', 'zero:1', 'oscillator:1', 'transformed:a,zero', 'random:abc'):
            with self.assertRaises(ParameterError):
                parse_source(text, 3)


class TestReports(unittest.TestCase):
    """Test cases for report emitters."""

    def setUp(self):
        self.report = make_report(
            "dimension",
            {"p": 1, "nu": (Fraction(1, 2), Fraction(1, 2), Fraction(0))},
            [{"record": "summary", "exact": Fraction(1, 3), "numeric": 1 / 3, "limit": None,
              "ok": True},
             {"record": "evidence", "k": 2, "values": [Fraction(3, 10), 4]}],
            version="0.1.0",
        )

    def test_json_round_trip(self):
        self.assertEqual(from_json(to_json(self.report)), self.report)
        self.assertEqual(to_json(from_json(to_json(self.report))), to_json(self.report))

    def test_json_fraction_encoding(self):
        data = json.loads(to_json(self.report))
        self.assertEqual(data["results"][0]["exact"], {"fraction": "1/3", "float": 1 / 3})

    def test_csv_union_header(self):
        lines = to_csv(self.report).splitlines()
        self.assertEqual(lines[0], "record,exact,exact_float,numeric,limit,ok,k,values")
        self.assertEqual(lines[2], "evidence,,,,,,2,3/10 4")

    def test_bad_json(self):
        with self.assertRaises(ParameterError):
            from_json('{"command": "x"}')

    def test_unknown_format(self):
        with self.assertRaises(ParameterError):
            render(self.report, 'xml')


class TestDigitFiles(unittest.TestCase):
    """Test cases for digit file handling."""

    def setUp(self):
        """Set up test environment."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up test environment."""
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def _create_file(self, content: bytes) -> str:
        path = os.path.join(self.temp_dir, 'digits.txt')
        with open(path, 'wb') as f:
            f.write(content)
        return path

    def test_read_with_newlines(self):
        path = self._create_file(b"0121\n20\r\n1\n")
        self.assertEqual(read_digit_file(path, 3), [0, 1, 2, 1, 2, 0, 1])

    def test_letters_above_nine(self):
        path = self._create_file(b"9aF")
        self.assertEqual(read_digit_file(path, 16), [9, 10, 15])

    def test_rejects(self):
        with self.assertRaises(DomainError):
            read_digit_file(self._create_file(b"013"), 3)
        with self.assertRaises(DomainError):
            read_digit_file(self._create_file(b"01 2"), 3)
        with self.assertRaises(ParameterError):
            read_digit_file(os.path.join(self.temp_dir, 'missing.txt'), 3)

    def test_write_output(self):
        path = os.path.join(self.temp_dir, 'nested', 'out.txt')
        write_output("a,b", path)
        with open(path) as f:
            self.assertEqual(f.read(), "a,b\n")
        with patch('sys.stdout', new_callable=io.StringIO) as out:
            write_output("x\n")
        self.assertEqual(out.getvalue(), "x\n")


if __name__ == '__main__':
    unittest.main()
