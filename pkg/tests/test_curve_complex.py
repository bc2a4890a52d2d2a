#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试脚本：曲线系统的校验、子系统与 JSON 读写
"""

import dataclasses
import json
import os
import tempfile
import unittest

from curve_complex import (
    CurveClass, CurveSystem, InessentialPreimage, MarkedPoint, Piece, PullbackEntry,
    check_stable_subset, curve_sides, dual_tree, induced_piece_map, load_system,
    piece_orbits, piece_partition, piece_period, save_system, sub_system,
    system_from_dict, system_to_dict, validate,
)
from multicurve_errors import (
    DecompositionTreeError, PieceDynamicsError, StabilityError, SystemFormatError,
)
from system_store import default_fixtures

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), '..', 'fixtures')


def _replace(sys: CurveSystem, **changes) -> CurveSystem:
    return dataclasses.replace(sys, **changes)


class TestValidate(unittest.TestCase):
    """校验测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_all_fixtures_valid(self):
        """内置系统全部通过校验"""
        for name, sys in self.fixtures.items():
            with self.subTest(name=name):
                report = validate(sys)
                self.assertTrue(report.ok, report.to_dict())

    def test_missing_inessential_table_only_warns(self):
        report = validate(self.fixtures['levy'])
        self.assertTrue(report.ok)
        self.assertEqual(len(report.warnings), 1)

    def test_degree_below_two(self):
        report = validate(_replace(self.fixtures['levy'], degree=1))
        self.assertIn("degree", report.codes)

    def test_unresolved_point_image(self):
        sys = self.fixtures['levy']
        points = (MarkedPoint('p1', 'nowhere'),) + sys.points[1:]
        report = validate(_replace(sys, points=points))
        self.assertIn("unresolved_reference", report.codes)
        self.assertIn('p1', report.issues[0].ids)

    def test_point_in_two_pieces(self):
        sys = self.fixtures['levy']
        pieces = (Piece('L', ('p1', 'p2', 'p3'), 'L'), Piece('R', ('p3', 'p4'), 'R'))
        report = validate(_replace(sys, pieces=pieces))
        self.assertIn("point_placement", report.codes)

    def test_dual_graph_with_cycle(self):
        """两条曲线连接同一对片时对偶图不是树"""
        sys = self.fixtures['levy']
        curves = sys.curves + (CurveClass('delta', 'L', 'R'),)
        words = dict(sys.words, delta=(PullbackEntry('gamma', 1),))
        report = validate(_replace(sys, curves=curves, words=words))
        self.assertIn("dual_tree", report.codes)
        with self.assertRaises(DecompositionTreeError):
            dual_tree(_replace(sys, curves=curves, words=words))

    def test_inessential_curve_rejected(self):
        """一侧只有一个标记点的非外围曲线不是本质曲线"""
        sys = self.fixtures['levy']
        pieces = (Piece('L', ('p1',), 'L'), Piece('R', ('p2', 'p3', 'p4'), 'R'))
        report = validate(_replace(sys, pieces=pieces))
        self.assertIn("essential", report.codes)

    def test_pre_stability(self):
        sys = self.fixtures['chain']
        words = dict(sys.words, gamma=())
        report = validate(_replace(sys, words=words))
        self.assertIn("pre_stability", report.codes)

    def test_word_entry_degree_out_of_range(self):
        sys = self.fixtures['levy']
        report = validate(_replace(sys, words={'gamma': (PullbackEntry('gamma', 3),)}))
        self.assertIn("degree", report.codes)

    def test_degree_sum_exceeds_global_degree(self):
        sys = self.fixtures['levy']
        words = {'gamma': (PullbackEntry('gamma', 2), PullbackEntry('gamma', 1))}
        report = validate(_replace(sys, words=words))
        self.assertIn("degree_sum", report.codes)

    def test_degree_sum_with_inessential_table(self):
        """提供非本质原像时次数和必须恰好等于全局次数"""
        sys = self.fixtures['levy']
        complete = _replace(sys, inessential={'gamma': (InessentialPreimage(1),)})
        self.assertTrue(validate(complete).ok)
        self.assertEqual(validate(complete).warnings, [])

        short = _replace(sys, inessential={'gamma': ()})
        self.assertIn("degree_sum", validate(short).codes)

    def test_declared_boundary_mismatch(self):
        sys = self.fixtures['levy']
        pieces = (Piece('L', ('p1', 'p2'), 'L', boundary=('gamma', 'extra')),) + sys.pieces[1:]
        self.assertIn("boundary", validate(_replace(sys, pieces=pieces)).codes)

    def test_peripheral_curve(self):
        sys = self.fixtures['coiled-fatou']
        self.assertFalse(sys.curve('beta').essential)
        sides = curve_sides(sys)
        self.assertEqual(sides['beta'][1], frozenset({'a'}))


class TestSubsystems(unittest.TestCase):
    """稳定子集与子系统测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_unstable_subset(self):
        """gamma 的原像含 v，只取 v 不稳定"""
        with self.assertRaises(StabilityError) as ctx:
            check_stable_subset(self.fixtures['chain'], ['v'])
        self.assertEqual(ctx.exception.curve, 'gamma')

    def test_not_pre_stable_subset(self):
        """v 只是 a、b 的原像，没有 a、b 时不是预稳定的"""
        with self.assertRaises(StabilityError):
            check_stable_subset(self.fixtures['chain'], ['gamma', 'v'])

    def test_unknown_and_empty_subset(self):
        with self.assertRaises(StabilityError):
            check_stable_subset(self.fixtures['chain'], ['nope'])
        with self.assertRaises(StabilityError):
            check_stable_subset(self.fixtures['chain'], [])

    def test_sub_system_merges_pieces(self):
        sys = self.fixtures['renormalizable']
        reduced = sub_system(sys, ['gamma'])
        self.assertEqual(reduced.piece_ids, ('P1', 'P2+P3'))
        self.assertEqual(reduced.curve_ids, ('gamma',))
        self.assertEqual(reduced.words_for('gamma'), (PullbackEntry('gamma', 2),))
        self.assertEqual(reduced.piece('P2+P3').points, ('e3', 'e4', 'e5'))
        self.assertTrue(validate(reduced).ok)

    def test_sub_system_idempotent(self):
        """对同一子集再取一次子系统，结果不变"""
        subsets = [(name, sys.curve_ids) for name, sys in self.fixtures.items()]
        subsets += [('renormalizable', ('gamma',)), ('coiling-pair', ('beta',))]
        for name, subset in subsets:
            with self.subTest(name=name, subset=subset):
                once = sub_system(self.fixtures[name], subset)
                self.assertEqual(sub_system(once, subset), once)

    def test_piece_partition_and_induced_map(self):
        sys = self.fixtures['renormalizable']
        self.assertEqual(piece_partition(sys, ['gamma']), {'P1': 'P1', 'P2': 'P2+P3', 'P3': 'P2+P3'})
        self.assertEqual(induced_piece_map(sys, ['gamma']), {'P1': 'P1', 'P2+P3': 'P2+P3'})

    def test_inconsistent_piece_dynamics(self):
        """合并片内的片映到不同合并片"""
        sys = self.fixtures['renormalizable']
        pieces = (Piece('P1', ('e1', 'e2'), 'P1'), Piece('P2', ('e3',), 'P1'), Piece('P3', ('e4', 'e5'), 'P3'))
        with self.assertRaises(PieceDynamicsError):
            induced_piece_map(_replace(sys, pieces=pieces), ['gamma'])

    def test_piece_orbits(self):
        sys = self.fixtures['levy']
        pieces = (Piece('L', ('p1', 'p2'), 'R'), Piece('R', ('p3', 'p4'), 'R'))
        moved = _replace(sys, pieces=pieces)
        orbits = piece_orbits(moved)
        self.assertEqual((orbits['L'].preperiod, orbits['L'].period, orbits['L'].lands_on), (1, 1, 'R'))
        self.assertIsNone(piece_period(moved, 'L'))
        self.assertEqual(piece_period(moved, 'R'), 1)


class TestSystemJson(unittest.TestCase):
    """JSON 读写测试类"""

    def test_fixture_files_match_builtin_systems(self):
        """fixtures/ 下的文件与内置系统一致"""
        for name, sys in default_fixtures().items():
            with self.subTest(name=name):
                self.assertEqual(load_system(os.path.join(FIXTURES_DIR, f"{name}.json")), sys)

    def test_save_and_load(self):
        sys = default_fixtures()['coiled-fatou']
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'sys.json')
            save_system(sys, path)
            self.assertEqual(load_system(path), sys)

    def test_compact_entry_syntax(self):
        data = system_to_dict(default_fixtures()['levy'])
        data['words'] = {'gamma': [['gamma', 1, 'reversed']]}
        sys = system_from_dict(data)
        self.assertEqual(sys.words_for('gamma')[0].orientation.value, 'reversed')

    def test_missing_key(self):
        data = system_to_dict(default_fixtures()['levy'])
        del data['pieces']
        with self.assertRaises(SystemFormatError):
            system_from_dict(data)

    def test_malformed_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'broken.json')
            with open(path, 'w', encoding='utf-8') as f:
                f.write("{not json")
            with self.assertRaises(SystemFormatError):
                load_system(path)
            with self.assertRaises(SystemFormatError):
                load_system(os.path.join(tmp, 'missing.json'))

    def test_bad_orientation(self):
        data = system_to_dict(default_fixtures()['levy'])
        data['words'] = {'gamma': [{'target': 'gamma', 'degree': 1, 'orientation': 'sideways'}]}
        with self.assertRaises(SystemFormatError):
            system_from_dict(data)

    def test_dict_is_json_serializable(self):
        json.dumps(system_to_dict(default_fixtures()['chain']))


if __name__ == "__main__":
    unittest.main(verbosity=2)
