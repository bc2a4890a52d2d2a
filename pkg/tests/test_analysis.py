#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试脚本：主特征值、阻碍、Levy 圈、增长分类与 Cantor 子多重曲线
"""

import dataclasses
import unittest
from fractions import Fraction
from unittest.mock import patch

import numpy as np

from curve_complex import PullbackEntry
from multicurve_analysis import (
    GrowthKind, classify_growth, cycles_through, find_cantor_submulticurve, find_levy_cycle,
    find_obstruction, generated_multicurve, growth_table, has_unique_cycle, irreducible_components,
    is_obstruction, leading_eigenvalue, periodic_classes, shortest_cycle_through,
    spectral_radius_below_one,
)
from multicurve_errors import ConvergenceError, NotPeriodicError, StabilityError
from pullback import CurveMatrix, thurston_matrix
from system_store import default_fixtures


class TestLeadingEigenvalue(unittest.TestCase):
    """主特征值测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_fixture_eigenvalues(self):
        expected = {'coiling-pair': 0.5, 'levy': 1.0, 'cantor': 2 / 3, 'chain': 0.5,
                    'renormalizable': 0.5, 'coiled-fatou': 0.5}
        for name, lam in expected.items():
            with self.subTest(name=name):
                self.assertAlmostEqual(leading_eigenvalue(thurston_matrix(self.fixtures[name])), lam, places=9)

    def test_reducible_matrix(self):
        """可约矩阵取各不可约块的最大值"""
        matrix = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [5.0, 0.0, 0.25]])
        self.assertAlmostEqual(leading_eigenvalue(matrix), 1.0, places=9)

    def test_periodic_block(self):
        """周期块（零对角）也能收敛"""
        matrix = np.array([[0.0, 0.0, 2.0], [3.0, 0.0, 0.0], [0.0, 1.5, 0.0]])
        self.assertAlmostEqual(leading_eigenvalue(matrix), 9.0 ** (1 / 3), places=8)

    def test_nilpotent_and_empty(self):
        self.assertEqual(leading_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]])), 0.0)
        self.assertEqual(leading_eigenvalue(np.zeros((0, 0))), 0.0)

    def test_rejects_negative_and_non_square(self):
        with self.assertRaises(ValueError):
            leading_eigenvalue(np.array([[0.5, -1.0], [0.0, 0.5]]))
        with self.assertRaises(ValueError):
            leading_eigenvalue(np.ones((2, 3)))

    def test_iteration_cap(self):
        matrix = np.array([[0.3, 0.7, 0.1], [0.2, 0.1, 0.9], [0.6, 0.4, 0.2]])
        with self.assertRaises(ConvergenceError) as ctx:
            leading_eigenvalue(matrix, tol=1e-300, max_iter=5)
        self.assertTrue(ctx.exception.trace)

    def test_cross_check_disagreement_raises(self):
        """幂迭代结果与 eigvals 不一致时抛出异常，而不是只记日志"""
        matrix = np.array([[0.0, 1.0], [1.0, 0.0]])
        with patch('multicurve_analysis._power_iteration', return_value=0.75):
            with self.assertRaises(ConvergenceError) as ctx:
                leading_eigenvalue(matrix)
        order, lam, reference = ctx.exception.trace[0]
        self.assertEqual((order, lam), (2, 0.75))
        self.assertAlmostEqual(reference, 1.0, places=12)

    def test_exact_spectral_radius(self):
        half = Fraction(1, 2)
        below = CurveMatrix(('x', 'y'), ((half, half), (0, half)))
        at_one = CurveMatrix(('x', 'y'), ((half, half), (half, half)))
        self.assertTrue(spectral_radius_below_one(below))
        self.assertFalse(spectral_radius_below_one(at_one))


class TestObstructions(unittest.TestCase):
    """阻碍与 Levy 圈测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_levy_fixture_is_obstructed(self):
        sys = self.fixtures['levy']
        verdict, lam = is_obstruction(sys)
        self.assertTrue(verdict)
        self.assertAlmostEqual(lam, 1.0)
        cycle = find_levy_cycle(sys)
        self.assertEqual(cycle.curves, ('gamma',))
        self.assertEqual(cycle.degree, 1)
        self.assertEqual(find_obstruction(sys), (('gamma',), lam))

    def test_unobstructed_fixtures(self):
        for name in ('coiling-pair', 'cantor', 'chain', 'renormalizable', 'coiled-fatou'):
            with self.subTest(name=name):
                sys = self.fixtures[name]
                self.assertFalse(is_obstruction(sys)[0])
                self.assertIsNone(find_obstruction(sys))
                self.assertIsNone(find_levy_cycle(sys))

    def test_obstruction_on_subset(self):
        verdict, lam = is_obstruction(self.fixtures['chain'], ['gamma', 'v', 'a'])
        self.assertFalse(verdict)
        self.assertAlmostEqual(lam, 0.5)
        with self.assertRaises(StabilityError):
            is_obstruction(self.fixtures['chain'], ['v'])

    def test_obstruction_inside_larger_system(self):
        """只有部分曲线构成阻碍时返回其祖先闭包"""
        sys = self.fixtures['chain']
        words = dict(sys.words, a=(PullbackEntry('a', 1),))
        obstructed = dataclasses.replace(sys, words=words)
        subset, lam = find_obstruction(obstructed)
        self.assertEqual(subset, ('gamma', 'v', 'a'))
        self.assertAlmostEqual(lam, 1.0)
        self.assertEqual(find_levy_cycle(obstructed).curves, ('a',))

    def test_irreducible_components(self):
        components = irreducible_components(self.fixtures['chain'])
        self.assertEqual([c.curves for c in components], [('gamma',), ('v',), ('a',), ('b',)])
        self.assertEqual([c.lam for c in components], [0.0, 0.0, 0.5, 0.5])


class TestGrowth(unittest.TestCase):
    """增长分类测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_coiling_pair(self):
        table = growth_table(self.fixtures['coiling-pair'])
        self.assertIs(table['alpha'].kind, GrowthKind.CONST1)
        self.assertIs(table['beta'].kind, GrowthKind.COILING)
        self.assertEqual(table['beta'].witness['branching'], 'beta')

    def test_bounded_chain(self):
        table = growth_table(self.fixtures['chain'])
        self.assertEqual(table['gamma'].label(), "Bounded(2)")
        self.assertEqual(table['gamma'].depth, 2)
        self.assertEqual(table['v'].label(), "Bounded(2)")
        self.assertEqual(table['v'].depth, 1)
        self.assertIs(table['a'].kind, GrowthKind.CONST1)

    def test_cantor_all_coiling(self):
        table = growth_table(self.fixtures['cantor'])
        self.assertTrue(all(g.is_coiling for g in table.values()))

    def test_single_curve_matches_table(self):
        sys = self.fixtures['renormalizable']
        self.assertEqual(classify_growth(sys, 'gamma'), growth_table(sys)['gamma'])
        self.assertIs(classify_growth(sys, 'alpha').kind, GrowthKind.CONST1)

    def test_upstream_of_coiling_is_coiling(self):
        """能走到 Coiling 圈的非周期曲线也是 Coiling"""
        sys = self.fixtures['coiling-pair']
        words = dict(sys.words, alpha=(PullbackEntry('beta', 2),))
        upstream = dataclasses.replace(sys, words=words)
        self.assertTrue(classify_growth(upstream, 'alpha').is_coiling)


class TestCycles(unittest.TestCase):
    """圈与 Cantor 子多重曲线测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_periodic_classes(self):
        self.assertEqual(periodic_classes(self.fixtures['chain']), ('a', 'b'))
        self.assertEqual(periodic_classes(self.fixtures['cantor']), ('gamma1', 'gamma2'))

    def test_cycles_through(self):
        cycles = cycles_through(self.fixtures['cantor'], 'gamma1')
        self.assertEqual([c.curves for c in cycles], [('gamma1',), ('gamma1', 'gamma2')])
        self.assertEqual(cycles[1].degree, 9)
        self.assertFalse(has_unique_cycle(self.fixtures['cantor']))
        self.assertTrue(has_unique_cycle(self.fixtures['chain']))

    def test_shortest_cycle(self):
        self.assertEqual(shortest_cycle_through(self.fixtures['cantor'], 'gamma2').curves, ('gamma2',))
        with self.assertRaises(NotPeriodicError):
            shortest_cycle_through(self.fixtures['chain'], 'gamma')

    def test_generated_multicurve(self):
        self.assertEqual(generated_multicurve(self.fixtures['chain'], 'a'), ('gamma', 'v', 'a'))
        with self.assertRaises(NotPeriodicError):
            generated_multicurve(self.fixtures['chain'], 'v')

    def test_cantor_submulticurve(self):
        self.assertEqual(find_cantor_submulticurve(self.fixtures['cantor']), ('gamma1', 'gamma2'))
        for name in ('coiling-pair', 'levy', 'chain', 'renormalizable', 'coiled-fatou'):
            with self.subTest(name=name):
                self.assertIsNone(find_cantor_submulticurve(self.fixtures[name]))


if __name__ == "__main__":
    unittest.main(verbosity=2)
