#!/usr/bin/env python3
"""Test mode separation and the finite-difference pencils"""

import sys
import unittest
from pathlib import Path

import numpy as np
import scipy.linalg

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from services.discretize import (
    ModeProblem,
    TridiagonalPencil,
    build_pencil,
    default_bc,
    grid,
    observed_order,
    reduce_to_standard,
    separate_mode,
)
from services.eigen import smallest_eigenvalues
from services.errors import InvalidProblemError, NonPositiveWeightError
from services.metric import custom_metric, paper_metric, psi_second, round_sphere
from services.models import BoundaryCondition, Numerics


class TestModeProblem(unittest.TestCase):
    def test_default_boundary_conditions(self):
        self.assertIs(default_bc(0), BoundaryCondition.NEUMANN)
        self.assertIs(default_bc(3), BoundaryCondition.DIRICHLET)
        problem = ModeProblem(k=2, alpha=0.0, T=5.0, n=10, bc=BoundaryCondition.NEUMANN)
        self.assertIs(problem.boundary, BoundaryCondition.NEUMANN)

    def test_grid(self):
        problem = ModeProblem(k=0, alpha=0.0, T=1.0, n=3)
        np.testing.assert_allclose(grid(problem), [-0.5, 0.0, 0.5])
        self.assertEqual(problem.h, 0.5)

    def test_for_metric(self):
        problem = ModeProblem.for_metric(paper_metric(10.0), 1, 2.0, Numerics(n=500))
        self.assertEqual(problem.T, 35.0)
        self.assertEqual(problem.n, 500)
        self.assertIs(problem.boundary, BoundaryCondition.DIRICHLET)
        problem = ModeProblem.for_metric(round_sphere(), 0, 0.0, Numerics(T=12.0, bc="dirichlet"))
        self.assertEqual(problem.T, 12.0)
        self.assertIs(problem.boundary, BoundaryCondition.DIRICHLET)

    def test_negative_mode_rejected(self):
        with self.assertRaises(ValueError):
            ModeProblem(k=-1, alpha=0.0, T=5.0, n=10)


class TestSeparateMode(unittest.TestCase):
    def test_potential_and_weight(self):
        metric = paper_metric(3.0, scale=2.0)
        q, w = separate_mode(metric, 2, 1.5)
        t = np.array([-1.0, 0.0, 4.0])
        np.testing.assert_allclose(q(t), 4.0 + 1.5 * psi_second(metric, t))
        self.assertTrue(np.all(w(t) > 0))
        self.assertAlmostEqual(float(w(np.array([0.0]))[0]), 2.0 * float(separate_mode(paper_metric(3.0), 0, 0.0)[1](np.array([0.0]))[0]))


class TestBuildPencil(unittest.TestCase):
    def test_neumann_annihilates_constants(self):
        problem = ModeProblem(k=0, alpha=0.0, T=12.0, n=200)
        pencil = build_pencil(round_sphere(), problem)
        dense = np.diag(pencil.diag) + np.diag(pencil.offdiag, 1) + np.diag(pencil.offdiag, -1)
        np.testing.assert_allclose(dense @ np.ones(problem.n), 0.0, atol=1e-9)

    def test_dirichlet_diagonal(self):
        metric = paper_metric(4.0)
        problem = ModeProblem(k=1, alpha=2.0, T=20.0, n=100)
        pencil = build_pencil(metric, problem)
        h2 = problem.h**2
        t = grid(problem)
        self.assertAlmostEqual(pencil.diag[0], 2.0 / h2 + 1.0 + 2.0 * psi_second(metric, t[0]), places=10)
        np.testing.assert_allclose(pencil.offdiag, -1.0 / h2)
        self.assertEqual(pencil.meta.bc, BoundaryCondition.DIRICHLET)

    def test_flat_dirichlet_laplacian(self):
        flat = custom_metric(
            psi=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            psi_prime=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            psi_second=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            even=True,
            name="flat",
        )
        problem = ModeProblem(k=0, alpha=0.0, T=np.pi / 2, n=2000, bc=BoundaryCondition.DIRICHLET)
        pencil = build_pencil(flat, problem)
        np.testing.assert_allclose(pencil.weight, 1.0)
        diag, off = reduce_to_standard(pencil)
        lowest = smallest_eigenvalues(diag, off, 2)
        # -f'' on an interval of length pi: 1, 4, ...
        self.assertAlmostEqual(lowest[0], 1.0, delta=1e-5)
        self.assertAlmostEqual(lowest[1], 4.0, delta=1e-4)

    def test_arrays_are_frozen(self):
        pencil = build_pencil(round_sphere(), ModeProblem(k=0, alpha=0.0, T=5.0, n=10))
        with self.assertRaises(ValueError):
            pencil.diag[0] = 1.0

    def test_invalid_grid(self):
        with self.assertRaises(InvalidProblemError):
            build_pencil(round_sphere(), ModeProblem(k=0, alpha=0.0, T=5.0, n=2))
        with self.assertRaises(InvalidProblemError):
            build_pencil(round_sphere(), ModeProblem(k=0, alpha=0.0, T=0.0, n=10))

    def test_short_truncation_is_flagged(self):
        pencil = build_pencil(paper_metric(10.0), ModeProblem(k=0, alpha=0.0, T=15.0, n=50))
        self.assertTrue(pencil.meta.short_truncation)
        pencil = build_pencil(paper_metric(10.0), ModeProblem(k=0, alpha=0.0, T=35.0, n=50))
        self.assertFalse(pencil.meta.short_truncation)

    def test_weight_underflow(self):
        with self.assertRaises(NonPositiveWeightError):
            build_pencil(paper_metric(1.0), ModeProblem(k=0, alpha=0.0, T=400.0, n=100))


class TestReduceToStandard(unittest.TestCase):
    def test_same_spectrum_as_pencil(self):
        rng = np.random.default_rng(3)
        n = 40
        diag = rng.uniform(2.0, 4.0, n)
        offdiag = rng.uniform(-1.0, 1.0, n - 1)
        weight = rng.uniform(0.5, 2.0, n)
        pencil = TridiagonalPencil(diag=diag, offdiag=offdiag, weight=weight)
        reduced_diag, reduced_off = reduce_to_standard(pencil)
        reduced = np.diag(reduced_diag) + np.diag(reduced_off, 1) + np.diag(reduced_off, -1)
        dense = np.diag(diag) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
        expected = scipy.linalg.eigh(dense, np.diag(weight), eigvals_only=True)
        np.testing.assert_allclose(np.linalg.eigvalsh(reduced), expected, rtol=1e-12, atol=1e-12)

    def test_nonpositive_weight(self):
        pencil = TridiagonalPencil(diag=np.ones(3), offdiag=np.zeros(2), weight=np.array([1.0, 0.0, 1.0]))
        with self.assertRaises(NonPositiveWeightError):
            reduce_to_standard(pencil)


class TestObservedOrder(unittest.TestCase):
    def test_second_order_sequence(self):
        c = 0.3
        self.assertAlmostEqual(observed_order([1 + 16 * c, 1 + 4 * c, 1 + c]), 2.0, places=12)

    def test_needs_three_levels(self):
        with self.assertRaises(InvalidProblemError):
            observed_order([1.0, 2.0])


if __name__ == "__main__":
    unittest.main()
