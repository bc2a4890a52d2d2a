#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试脚本：计数矩阵、Thurston 矩阵、n 层词与迭代系统
"""

import dataclasses
import unittest
from fractions import Fraction

from curve_complex import InessentialPreimage, Orientation, PullbackEntry, validate
from pullback import (
    counting_matrix, entry_multigraph, kappa, level_word, matrix_power_row_sums,
    power_system, sub_matrix, thurston_matrix, word_signature,
)
from system_store import default_fixtures


class TestMatrices(unittest.TestCase):
    """矩阵测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_counting_matrix(self):
        B = counting_matrix(self.fixtures['coiling-pair'])
        self.assertEqual(B.ids, ('alpha', 'beta'))
        self.assertEqual(B.rows, ((1, 0), (2, 1)))

    def test_thurston_matrix_is_exact(self):
        M = thurston_matrix(self.fixtures['coiling-pair'])
        self.assertEqual(M.entry('alpha', 'alpha'), Fraction(1, 2))
        self.assertEqual(M.entry('beta', 'alpha'), Fraction(1))
        self.assertEqual(M.entry('beta', 'beta'), Fraction(1, 2))
        self.assertEqual(M.to_list(), [[0.5, 0.0], [1.0, 0.5]])

    def test_sub_matrix(self):
        M = thurston_matrix(self.fixtures['chain'])
        reduced = sub_matrix(M, ['b', 'v'])
        self.assertEqual(reduced.ids, ('v', 'b'))
        self.assertEqual(reduced.rows, ((0, Fraction(1, 2)), (0, Fraction(1, 2))))

    def test_matrix_power(self):
        B = counting_matrix(self.fixtures['coiling-pair'])
        self.assertEqual(B.power(0).rows, ((1, 0), (0, 1)))
        self.assertEqual(B.power(5).rows, ((1, 0), (10, 1)))
        self.assertEqual(matrix_power_row_sums(B, 3), {'alpha': 1, 'beta': 7})

    def test_entry_multigraph_keeps_parallel_entries(self):
        graph = entry_multigraph(self.fixtures['coiling-pair'])
        self.assertEqual(graph.number_of_edges('beta', 'alpha'), 2)
        self.assertEqual(graph['beta']['alpha'][2]['degree'], 2)


class TestKappa(unittest.TestCase):
    """κ_n 测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_kappa_grows_linearly_for_beta(self):
        """κ_n(beta) = 2n+1"""
        sys = self.fixtures['coiling-pair']
        for n in range(1, 31):
            self.assertEqual(kappa(sys, 'beta', n), 2 * n + 1)
            self.assertEqual(kappa(sys, 'alpha', n), 1)

    def test_kappa_of_cantor_doubles(self):
        sys = self.fixtures['cantor']
        self.assertEqual([kappa(sys, 'gamma1', n) for n in range(1, 5)], [2, 4, 8, 16])

    def test_kappa_bounded_chain(self):
        sys = self.fixtures['chain']
        self.assertEqual([kappa(sys, 'gamma', n) for n in range(1, 6)], [1, 2, 2, 2, 2])

    def test_kappa_requires_positive_level(self):
        with self.assertRaises(ValueError):
            kappa(self.fixtures['levy'], 'gamma', 0)


class TestLevelWord(unittest.TestCase):
    """n 层词测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_length_matches_kappa(self):
        sys = self.fixtures['coiling-pair']
        for n in (1, 2, 3, 4):
            self.assertEqual(len(level_word(sys, 'beta', n)), kappa(sys, 'beta', n))

    def test_order_and_degrees(self):
        sys = self.fixtures['coiling-pair']
        word = level_word(sys, 'beta', 2)
        self.assertEqual([a.target for a in word], ['alpha', 'alpha', 'beta', 'alpha', 'alpha'])
        self.assertEqual(word_signature(word)[1], "1:beta.0:alpha")
        self.assertTrue(all(a.degree == 4 for a in word))

    def test_reversed_entry_reverses_block(self):
        sys = self.fixtures['coiling-pair']
        words = dict(sys.words)
        words['beta'] = (
            PullbackEntry('alpha', 2),
            PullbackEntry('beta', 2, Orientation.REVERSED),
            PullbackEntry('alpha', 1),
        )
        twisted = dataclasses.replace(sys, words=words)
        word = level_word(twisted, 'beta', 2)
        self.assertEqual(word_signature(word), ["0:alpha.0:alpha", "1:beta.2:alpha", "1:beta.1:beta",
                                                "1:beta.0:alpha", "2:alpha.0:alpha"])
        self.assertEqual(word[1].orientation, Orientation.REVERSED)
        self.assertEqual(word[1].degree, 2)
        self.assertEqual(word[2].orientation, Orientation.SAME)


class TestPowerSystem(unittest.TestCase):
    """迭代系统测试类"""

    def test_power_system_words_and_degree(self):
        sys = default_fixtures()['coiling-pair']
        square = power_system(sys, 2)
        self.assertEqual(square.degree, 36)
        self.assertEqual(len(square.words_for('beta')), 5)
        self.assertEqual(counting_matrix(square).rows, ((1, 0), (4, 1)))
        self.assertIs(power_system(sys, 1), sys)

    def test_power_system_carries_inessential_table(self):
        """F^k 的非本质原像次数补足 d^k，次数和检查不再跳过"""
        sys = default_fixtures()['levy']
        table = dataclasses.replace(sys, inessential={'gamma': (InessentialPreimage(1, 'p1'),)})
        self.assertTrue(validate(table).ok)

        cube = power_system(table, 3)
        items = cube.inessential['gamma']
        self.assertEqual(sorted(item.degree for item in items), [1, 2, 4])
        self.assertEqual([item.point for item in items if item.degree == 1], ['p1'])
        report = validate(cube)
        self.assertTrue(report.ok)
        self.assertEqual(report.warnings, [])

        self.assertIsNone(power_system(sys, 2).inessential)

    def test_power_system_iterates_piece_map(self):
        sys = default_fixtures()['levy']
        pieces = tuple(dataclasses.replace(p, image='R' if p.id == 'L' else 'L') for p in sys.pieces)
        swapped = dataclasses.replace(sys, pieces=pieces)
        self.assertEqual(power_system(swapped, 2).piece_map, {'L': 'L', 'R': 'R'})
        with self.assertRaises(ValueError):
            power_system(sys, 0)


if __name__ == "__main__":
    unittest.main(verbosity=2)
