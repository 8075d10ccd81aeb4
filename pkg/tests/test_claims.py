#!/usr/bin/env python3
"""Test the sweep, the exponent fits and the verification report"""

import json
import math
import sys
import unittest
from pathlib import Path

import numpy as np
from pydantic import ValidationError

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from services.claims import (
    ClaimConfig,
    Inequality,
    check_area_normalization,
    check_counterexample,
    check_curvature_positivity,
    check_gauss_bonnet,
    fit_decay_exponent,
    full_report,
    run_sweep,
)
from services.errors import InvalidProblemError
from services.models import Numerics

EXPECTED_CLAIMS = [
    "curvature_positivity",
    "area_normalization",
    "gauss_bonnet",
    "gluing_hypothesis",
    "mass_admissibility",
    "hersch_elsoufi",
    "decay_exponents",
    "rayleigh_asymptotics",
    "upper_bound_consistency",
    "counterexample_eq1",
    "counterexample_eq3",
    "inequality_implication",
    "alpha_monotonicity",
    "direct_scale",
    "sweep_numerics",
]


class TestFitDecayExponent(unittest.TestCase):
    def test_exact_power_law(self):
        L = [1.0, 2.0, 4.0, 8.0, 16.0]
        slope, residual = fit_decay_exponent(L, [3.0 * x**-2 for x in L], tail=None)
        self.assertAlmostEqual(slope, -2.0, places=12)
        self.assertLess(residual, 1e-12)

    def test_tail_uses_largest_L(self):
        L = [16.0, 1.0, 2.0, 4.0, 8.0]
        # the two smallest L break the power law
        values = [x**-1 if x >= 4.0 else 100.0 for x in L]
        slope, _ = fit_decay_exponent(L, values)
        self.assertAlmostEqual(slope, -1.0, places=12)

    def test_rejects_bad_input(self):
        with self.assertRaises(InvalidProblemError):
            fit_decay_exponent([1.0, 2.0, 3.0], [1.0, 0.0, 2.0])
        with self.assertRaises(InvalidProblemError):
            fit_decay_exponent([1.0, 2.0], [1.0, 0.5])
        with self.assertRaises(InvalidProblemError):
            fit_decay_exponent([1.0, 1.0, 2.0], [1.0, 1.0, 0.5])
        with self.assertRaises(InvalidProblemError):
            fit_decay_exponent([1.0, 2.0, 3.0], [1.0, 0.5])


class TestInequality(unittest.TestCase):
    def test_right_hand_sides(self):
        self.assertAlmostEqual(Inequality.MASS_EIGENVALUE.rhs(0.5, 0.0), 1.0, places=15)
        self.assertAlmostEqual(Inequality.WEIGHTED_MASS_EIGENVALUE.rhs(1.0, 2.0), 1.0, places=15)
        for lam in (0.1, 0.7, 3.0):
            self.assertAlmostEqual(
                Inequality.MASS_EIGENVALUE.rhs(lam, 0.0), Inequality.WEIGHTED_MASS_EIGENVALUE.rhs(lam, 0.0), places=14
            )

    def test_values(self):
        self.assertEqual(Inequality("eq1"), Inequality.MASS_EIGENVALUE)
        self.assertEqual(Inequality.WEIGHTED_MASS_EIGENVALUE.value, "eq3")


class TestClaimConfig(unittest.TestCase):
    def test_defaults(self):
        config = ClaimConfig()
        self.assertEqual(config.L_values, [1.0, 2.0, 5.0, 10.0, 20.0, 40.0, 80.0])
        self.assertEqual(config.alpha_values, [0.0, 1.0, 2.0])
        self.assertEqual(config.adm_mass, 1.0)
        self.assertEqual(config.numerics.n, 4000)

    def test_rejects_unordered_L(self):
        with self.assertRaises(ValidationError):
            ClaimConfig(L_values=[2.0, 1.0, 3.0])
        with self.assertRaises(ValidationError):
            ClaimConfig(L_values=[])
        with self.assertRaises(ValidationError):
            ClaimConfig(L_values=[-1.0, 2.0])

    def test_rejects_L_below_one(self):
        with self.assertRaises(ValidationError):
            ClaimConfig(L_values=[0.5, 2.0])
        self.assertEqual(ClaimConfig(L_values=[1.0, 2.0, 3.0]).L_values, [1.0, 2.0, 3.0])

    def test_rejects_non_finite_values(self):
        for values in ([2.0, float("inf")], [float("nan"), 2.0]):
            with self.assertRaises(ValidationError):
                ClaimConfig(L_values=values)
        with self.assertRaises(ValidationError):
            ClaimConfig(alpha_values=[0.0, float("nan")])
        with self.assertRaises(ValidationError):
            ClaimConfig(alpha_values=[float("inf")])
        with self.assertRaises(ValidationError):
            ClaimConfig(numerics={"T": float("inf")})
        with self.assertRaises(ValidationError):
            ClaimConfig.model_validate_json('{"L_values": [2, 3], "alpha_values": [NaN]}')

    def test_rejects_negative_alpha(self):
        with self.assertRaises(ValidationError):
            ClaimConfig(alpha_values=[-1.0, 0.0])

    def test_rejects_reversed_band(self):
        with self.assertRaises(ValidationError):
            ClaimConfig(hat_decay_band=(-1.8, -2.3))

    def test_rejects_unknown_field(self):
        with self.assertRaises(ValidationError):
            ClaimConfig(L_list=[1.0])

    def test_from_json(self):
        config = ClaimConfig.model_validate_json(
            '{"L_values": [5, 10, 20], "alpha_values": [0], "numerics": {"n": 800, "eigen_abs_tol": 1e-9}}'
        )
        self.assertEqual(config.L_values, [5.0, 10.0, 20.0])
        self.assertEqual(config.numerics.n, 800)
        self.assertEqual(config.numerics.eigen_abs_tol, 1e-9)


class TestGeometricChecks(unittest.TestCase):
    def setUp(self):
        self.config = ClaimConfig(L_values=[1.0, 5.0, 20.0, 80.0], alpha_values=[0.0])

    def test_curvature_positivity(self):
        record = check_curvature_positivity(self.config)
        self.assertTrue(record.passed)
        self.assertGreater(record.margin, 0.0)
        self.assertEqual(record.flags, [])
        self.assertEqual(record.values["round_sphere_min_K"], 1.0)

    def test_area_normalization(self):
        record = check_area_normalization(self.config)
        self.assertTrue(record.passed)
        self.assertLess(record.values["remainder_constant"], 4.0)
        self.assertGreater(record.values["remainder_constant"], 3.5)

    def test_gauss_bonnet(self):
        record = check_gauss_bonnet(self.config)
        self.assertTrue(record.passed)
        self.assertLessEqual(record.values["max_relative_error"], 1e-6)


class TestSweep(unittest.TestCase):
    def test_L_major_order(self):
        config = ClaimConfig(L_values=[2.0, 3.0], alpha_values=[0.0, 1.0], numerics=Numerics(n=400))
        points = run_sweep(config)
        self.assertEqual([(p.L, p.alpha) for p in points], [(2.0, 0.0), (2.0, 1.0), (3.0, 0.0), (3.0, 1.0)])
        for point in points:
            self.assertAlmostEqual(point.lambda1_normalized, point.lambda1_hat * point.area_hat / (4 * math.pi), places=12)
            self.assertAlmostEqual(point.hersch_ratio, point.lambda1_normalized / (2.0 + point.alpha), places=12)

    def test_worker_count_does_not_change_results(self):
        serial = ClaimConfig(L_values=[2.0, 3.0], alpha_values=[0.0, 1.0], numerics=Numerics(n=400))
        parallel = serial.model_copy(update={"numerics": Numerics(n=400, workers=2)})
        a = [p.lambda1_hat for p in run_sweep(serial)]
        b = [p.lambda1_hat for p in run_sweep(parallel)]
        self.assertEqual(a, b)

    def test_no_witness_at_short_lengths(self):
        config = ClaimConfig(L_values=[1.0, 2.0, 3.0], alpha_values=[0.0], numerics=Numerics(n=800))
        record = check_counterexample(config, Inequality.MASS_EIGENVALUE)
        self.assertFalse(record.passed)
        self.assertIsNone(record.values["per_alpha"][0]["witness_L"])
        self.assertLess(record.margin, 0.0)


class TestFullReport(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.config = ClaimConfig(L_values=[5.0, 10.0, 20.0, 40.0], alpha_values=[0.0, 2.0])
        cls.report = full_report(cls.config)
        cls.claims = {record.id: record for record in cls.report.claims}

    def test_claim_order(self):
        self.assertEqual([record.id for record in self.report.claims], EXPECTED_CLAIMS)

    def test_every_claim_passes(self):
        self.assertEqual(self.report.failed(), [])
        self.assertTrue(self.report.passed)

    def test_witnesses(self):
        eq1 = self.claims["counterexample_eq1"].values["per_alpha"]
        self.assertEqual(eq1[0]["alpha"], 0.0)
        self.assertEqual(eq1[0]["witness_L"], 10.0)
        self.assertGreater(eq1[0]["rhs_at_witness"], 1.0)
        for entry in self.claims["counterexample_eq3"].values["per_alpha"]:
            self.assertIsNotNone(entry["witness_L"])

    def test_decay_slopes(self):
        for entry in self.claims["decay_exponents"].values["per_alpha"]:
            self.assertAlmostEqual(entry["hat_slope"], -2.0, delta=0.2)
            self.assertAlmostEqual(entry["normalized_slope"], -1.0, delta=0.2)
            self.assertEqual(entry["fit_L"], [10.0, 20.0, 40.0])

    def test_gluing_hypothesis_solves_alpha_one(self):
        record = self.claims["gluing_hypothesis"]
        self.assertEqual(record.inputs["alpha"], 1.0)
        self.assertEqual(len(record.values["per_L"]), 4)
        self.assertGreater(record.margin, 0.0)

    def test_document(self):
        document = self.report.to_document()
        self.assertEqual(document["version"], "1")
        self.assertIn("pass", document["claims"][0])
        self.assertNotIn("passed", document["claims"][0])
        self.assertEqual(document["config"]["L_values"], [5.0, 10.0, 20.0, 40.0])
        for key in ("numerics", "timestamp", "toolkit_version", "python", "numpy", "scipy"):
            self.assertIn(key, document["environment"])
        # every value in the document is plain JSON
        json.dumps(document, allow_nan=False)

    def test_margins_are_finite(self):
        for record in self.report.claims:
            if record.margin is not None:
                self.assertTrue(np.isfinite(record.margin), record.id)


if __name__ == "__main__":
    unittest.main()
