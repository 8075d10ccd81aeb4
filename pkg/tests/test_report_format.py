#!/usr/bin/env python3
"""Test the byte-stable JSON and CSV writers"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from services.claims import Inequality, SweepPoint
from services.eigen import SpectrumEntry, SpectrumResult
from services.report_format import (
    SWEEP_HEADER,
    dumps_csv,
    dumps_json,
    format_float,
    spectrum_csv,
    spectrum_document,
    sweep_csv,
)


def _sphere_like_result() -> SpectrumResult:
    entries = [
        SpectrumEntry(value=0.0, k=0, multiplicity=1, sector_index=0, parity="even"),
        SpectrumEntry(value=2.0, k=1, multiplicity=2, sector_index=0, parity="even"),
    ]
    return SpectrumResult(
        entries=entries,
        num_values=3,
        alpha=0.0,
        lambda0=0.0,
        lambda1=2.0,
        metric={"family": "sphere", "L": None, "scale": 1.0},
        numerics={"mode_cutoff": 2},
    )


class TestFormatFloat(unittest.TestCase):
    def test_seventeen_significant_digits(self):
        self.assertEqual(format_float(0.1), "0.10000000000000001")
        self.assertEqual(format_float(5.0), "5")
        self.assertEqual(float(format_float(math.pi)), math.pi)
        self.assertEqual(format_float(np.float64(1e-20)), "9.9999999999999995e-21")


class TestDumpsJson(unittest.TestCase):
    def test_layout_and_key_order(self):
        text = dumps_json({"b": 1, "a": [1.5, True, None, float("nan")]})
        expected = '{\n  "b": 1,\n  "a": [\n    1.5,\n    true,\n    null,\n    null\n  ]\n}\n'
        self.assertEqual(text, expected)

    def test_scalars(self):
        self.assertEqual(dumps_json(False), "false\n")
        self.assertEqual(dumps_json(np.int64(3)), "3\n")
        self.assertEqual(dumps_json(float("inf")), "null\n")
        self.assertEqual(dumps_json(Inequality.MASS_EIGENVALUE), '"eq1"\n')
        self.assertEqual(dumps_json({"x": {}, "y": []}), '{\n  "x": {},\n  "y": []\n}\n')

    def test_models_dump_by_alias(self):
        text = dumps_json(SpectrumEntry(value=0.25, k=0, multiplicity=1, sector_index=1))
        self.assertIn('"value": 0.25', text)
        self.assertIn('"parity": null', text)

    def test_unknown_type(self):
        with self.assertRaises(TypeError):
            dumps_json(object())


class TestCsv(unittest.TestCase):
    def test_dumps_csv(self):
        text = dumps_csv(["a", "b"], [[0.1, None], [2, "x,y"]])
        self.assertEqual(text, 'a,b\n0.10000000000000001,\n2,"x,y"\n')
        self.assertNotIn("\r", text)

    def test_spectrum_csv(self):
        expected = (
            "index,value,k,multiplicity,branch,sector_index,parity\n"
            "0,0,0,1,,0,even\n"
            "1,2,1,2,cos,0,even\n"
            "2,2,1,2,sin,0,even\n"
        )
        self.assertEqual(spectrum_csv(_sphere_like_result()), expected)

    def test_sweep_csv(self):
        point = SweepPoint(
            L=10.0,
            alpha=0.0,
            area_hat=113.09733552923255,
            lambda0_hat=0.0,
            lambda1_hat=0.03,
            lambda0_normalized=0.0,
            lambda1_normalized=0.27,
            rhs_eq1=1.3608276348795434,
            rhs_eq3=1.3608276348795434,
            hersch_ratio=0.135,
        )
        lines = sweep_csv([point]).splitlines()
        self.assertEqual(lines[0], ",".join(SWEEP_HEADER))
        self.assertEqual(lines[1].split(",")[:2], ["10", "0"])
        self.assertEqual(len(lines[1].split(",")), len(SWEEP_HEADER))


class TestSpectrumDocument(unittest.TestCase):
    def test_fields(self):
        document = spectrum_document(_sphere_like_result(), normalized=False)
        self.assertEqual(list(document)[:3], ["metric", "alpha", "normalized"])
        self.assertEqual([row["branch"] for row in document["values"]], [None, "cos", "sin"])
        self.assertEqual(document["flags"], [])
        self.assertTrue(dumps_json(document).endswith("}\n"))


if __name__ == "__main__":
    unittest.main()
