#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试脚本：细化、分离报告、重整化证书与可重整片搜索
"""

import dataclasses
import unittest

from curve_complex import validate
from decomposition import (
    cantor_certificates, combinatorial_renormalization_data, detect_coiled_fatou, dichotomy_depth,
    find_renormalizable_piece, refine_to_dichotomy, renormalization_certificate, separation_report,
)
from multicurve_analysis import GrowthKind, growth_table
from multicurve_errors import NotPeriodicError, RealizabilityError
from system_store import default_fixtures


class TestRefinement(unittest.TestCase):
    """细化测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_dichotomy_depth(self):
        self.assertEqual(dichotomy_depth(self.fixtures['chain']), 2)
        self.assertEqual(dichotomy_depth(self.fixtures['coiling-pair']), 1)

    def test_chain_refines_to_dichotomy(self):
        """路径长度 2 之后不再有 Bounded 类"""
        result = refine_to_dichotomy(self.fixtures['chain'])
        self.assertEqual(result.N, 2)
        self.assertTrue(result.dichotomy)
        self.assertEqual(result.residual_bounded, ())
        self.assertTrue(all(g.kind is GrowthKind.CONST1 for g in result.growth.values()))
        self.assertAlmostEqual(result.lam_input, result.lam_refined)

        refined = result.system
        self.assertEqual(refined.curve_ids, ('gamma[0.0]', 'gamma[0.1]', 'v[0.0]', 'v[1.0]', 'a[0.0]', 'b[0.0]'))
        self.assertEqual(result.projection('gamma[0.1]'), 'gamma')
        self.assertEqual([e.target for e in refined.words_for('gamma[0.1]')], ['v[1.0]'])
        self.assertEqual(refined.refinement['markers'], ['m:gamma:0', 'm:v:0'])
        self.assertTrue(refined.point('m:gamma:0').synthetic)
        self.assertTrue(validate(refined).ok)

    def test_levy_refines_to_single_class(self):
        result = refine_to_dichotomy(self.fixtures['levy'])
        self.assertEqual(result.N, 1)
        self.assertEqual(result.system.curve_ids, ('gamma[0]',))
        self.assertIs(result.growth['gamma[0]'].kind, GrowthKind.CONST1)
        self.assertTrue(result.dichotomy)

    def test_refinement_preserves_coiling_projections(self):
        """Coiling 细化类的投影恰好是原系统的 Coiling 类"""
        for name, sys in self.fixtures.items():
            with self.subTest(name=name):
                result = refine_to_dichotomy(sys)
                coiling_in = {cid for cid, g in growth_table(sys).items() if g.is_coiling}
                coiling_out = {result.projection(cid) for cid, g in result.growth.items() if g.is_coiling}
                self.assertEqual(coiling_out, coiling_in)
                self.assertAlmostEqual(result.lam_input, result.lam_refined, places=6)

    def test_coiling_pair_refinement(self):
        result = refine_to_dichotomy(self.fixtures['coiling-pair'])
        self.assertTrue(result.dichotomy)
        self.assertTrue(result.growth['beta[1]'].is_coiling)
        self.assertIs(result.growth['alpha[0]'].kind, GrowthKind.CONST1)

    def test_short_paths_leave_bounded_classes(self):
        result = refine_to_dichotomy(self.fixtures['chain'], N=1)
        self.assertFalse(result.dichotomy)
        self.assertIn('gamma[0]', result.residual_bounded)

    def test_rejects_non_positive_length(self):
        with self.assertRaises(ValueError):
            refine_to_dichotomy(self.fixtures['chain'], N=0)


class TestSeparation(unittest.TestCase):
    """分离报告测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_coiling_curves_separate(self):
        report = separation_report(self.fixtures['coiling-pair'])
        self.assertEqual(report.verdict('alpha'), "touching")
        self.assertEqual(report.verdict('beta'), "disjoint")
        self.assertFalse(report.refined)

    def test_refined_report_carries_projections(self):
        report = separation_report(self.fixtures['chain'], refine=True)
        self.assertTrue(report.refined)
        self.assertEqual(report.N, 2)
        self.assertEqual({row.projection for row in report.rows}, {'gamma', 'v', 'a', 'b'})
        self.assertTrue(all(row.verdict == "touching" for row in report.rows))
        self.assertEqual(len(report.to_dict()['rows']), 6)


class TestCertificates(unittest.TestCase):
    """证书测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_renormalization_certificate(self):
        cert = renormalization_certificate(self.fixtures['renormalizable'], 'P1')
        self.assertEqual(cert.period, 1)
        self.assertEqual(cert.boundary, {'gamma': 'Coiling'})
        self.assertTrue(cert.verified)
        self.assertEqual(cert.to_dict()['piece'], 'P1')

    def test_no_certificate_with_const1_boundary(self):
        self.assertIsNone(renormalization_certificate(self.fixtures['renormalizable'], 'P2'))

    def test_non_periodic_piece(self):
        sys = self.fixtures['renormalizable']
        pieces = tuple(dataclasses.replace(p, image='P1') if p.id == 'P2' else p for p in sys.pieces)
        with self.assertRaises(NotPeriodicError):
            renormalization_certificate(dataclasses.replace(sys, pieces=pieces), 'P2')

    def test_cantor_certificates(self):
        certs = cantor_certificates(self.fixtures['cantor'])
        self.assertEqual([c.piece for c in certs], ['Q1', 'Q2', 'Q3'])
        self.assertEqual(certs[1].boundary, {'gamma1': 'Coiling', 'gamma2': 'Coiling'})
        self.assertEqual(cantor_certificates(self.fixtures['coiling-pair']), [])

    def test_combinatorial_renormalization_data(self):
        cert = combinatorial_renormalization_data(self.fixtures['renormalizable'], 'P1')
        self.assertEqual(cert.boundary_degrees, {'gamma': 2})
        self.assertEqual(cert.synthetic_points['a[gamma]']['image'], 'a[gamma]')
        self.assertTrue(cert.synthetic_points['a[gamma]']['critical'])
        self.assertEqual(cert.interior_points['e1'], {'image': 'e1', 'critical': False})
        self.assertEqual(cert.marked_set, ('e1', 'e2', 'a[gamma]'))
        self.assertTrue(cert.verified)

    def test_coiled_fatou(self):
        cert = detect_coiled_fatou(self.fixtures['coiled-fatou'])
        self.assertEqual((cert.fixed_point, cert.alpha, cert.beta), ('a', 'alpha', 'beta'))
        self.assertEqual(cert.to_dict()['witnesses']['fixed_point'], 'a')
        self.assertIsNone(detect_coiled_fatou(self.fixtures['renormalizable']))

    def test_coiled_fatou_needs_critical_fixed_point(self):
        sys = self.fixtures['coiled-fatou']
        points = tuple(dataclasses.replace(p, critical=False) for p in sys.points)
        self.assertIsNone(detect_coiled_fatou(dataclasses.replace(sys, points=points)))


class TestRenormalizableSearch(unittest.TestCase):
    """可重整片搜索测试类"""

    def setUp(self):
        self.fixtures = default_fixtures()

    def test_finds_piece(self):
        trace = []
        found = find_renormalizable_piece(self.fixtures['renormalizable'], trace)
        self.assertEqual(found.subset, ('gamma', 'alpha'))
        self.assertEqual(found.piece, 'P1')
        self.assertEqual(found.iterate, 1)
        self.assertFalse(found.cantor)
        self.assertEqual(found.certificate.witnesses['search']['gamma'], 'gamma')
        self.assertTrue(trace)

    def test_cantor_shortcut(self):
        found = find_renormalizable_piece(self.fixtures['cantor'])
        self.assertTrue(found.cantor)
        self.assertEqual(found.subset, ('gamma1', 'gamma2'))
        self.assertEqual(found.piece, 'Q1')

    def test_no_coiling_curves(self):
        for name in ('levy', 'chain', 'coiled-fatou'):
            with self.subTest(name=name):
                self.assertIsNone(find_renormalizable_piece(self.fixtures[name]))

    def test_copies_on_both_sides(self):
        """beta 的两个 alpha 拷贝分居 beta 两侧时不可实现"""
        with self.assertRaises(RealizabilityError):
            find_renormalizable_piece(self.fixtures['coiling-pair'])


if __name__ == "__main__":
    unittest.main(verbosity=2)
