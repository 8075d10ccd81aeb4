#!/usr/bin/env python3
"""Test the adaptive Gauss-Legendre quadrature"""

import math
import sys
import unittest
from pathlib import Path

import numpy as np

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from services.errors import QuadratureError, TailBoundError
from services.quadrature import gauss_legendre, integrate, integrate_with_tail


class TestGaussLegendre(unittest.TestCase):
    def test_reference_rule(self):
        nodes, weights = gauss_legendre(20)
        self.assertEqual(len(nodes), 20)
        self.assertAlmostEqual(float(weights.sum()), 2.0, places=13)
        self.assertAlmostEqual(float(weights @ nodes**2), 2.0 / 3.0, places=13)

    def test_cached_rule_is_read_only(self):
        nodes, _ = gauss_legendre(20)
        with self.assertRaises(ValueError):
            nodes[0] = 0.0


class TestIntegrate(unittest.TestCase):
    def test_smooth_integrand(self):
        result = integrate(np.exp, 0.0, 1.0, rel_tol=1e-12)
        self.assertLess(abs(result.value - (math.e - 1.0)), 1e-12)

    def test_kink_at_breakpoint_is_exact(self):
        result = integrate(np.abs, -1.0, 2.0, breakpoints=(0.0,))
        self.assertAlmostEqual(result.value, 2.5, places=13)

    def test_gaussian(self):
        result = integrate(lambda t: np.exp(-t * t), -10.0, 10.0, rel_tol=1e-12)
        self.assertLess(abs(result.value - math.sqrt(math.pi)) / math.sqrt(math.pi), 1e-11)
        self.assertLessEqual(result.error, 1e-11)

    def test_vanishing_integrand(self):
        result = integrate(np.zeros_like, -3.0, 3.0)
        self.assertEqual(result.value, 0.0)

    def test_non_finite_integrand(self):
        with self.assertRaises(QuadratureError):
            integrate(lambda t: np.full_like(t, np.nan), 0.0, 1.0)

    def test_invalid_interval(self):
        with self.assertRaises(QuadratureError):
            integrate(np.exp, 1.0, 1.0)

    def test_panel_budget(self):
        with self.assertRaises(QuadratureError):
            integrate(lambda t: np.sqrt(np.abs(t)), -1.0, 1.0, rel_tol=1e-15, max_panels=4)


class TestIntegrateWithTail(unittest.TestCase):
    def test_window_grows_until_tail_is_small(self):
        result = integrate_with_tail(
            lambda t: np.exp(-np.abs(t)),
            lambda T: 2.0 * math.exp(-T),
            rel_tol=1e-10,
        )
        self.assertEqual(result.window, 25.0)
        self.assertLess(abs(result.value - 2.0), 1e-9)
        self.assertGreaterEqual(result.error, 2.0 * math.exp(-25.0))

    def test_unmet_tail_bound(self):
        with self.assertRaises(TailBoundError):
            integrate_with_tail(lambda t: np.exp(-t * t), lambda T: 1.0, limit=30.0)


if __name__ == "__main__":
    unittest.main()
