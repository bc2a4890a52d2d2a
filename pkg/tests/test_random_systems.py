#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试脚本：随机预稳定系统上的路径计数性质

随机系统的片沿一条链排列、全部不动；每条曲线有 1..3 个原像条目。
暴力对照：逐层累加条目得到 κ_n，按条目实例深度优先枚举简单圈
"""

import random
import unittest
from fractions import Fraction
from typing import Dict, List

import numpy as np

from curve_complex import (
    CurveClass, CurveSystem, MarkedPoint, Orientation, Piece, PullbackEntry, sub_system, validate,
)
from decomposition import refine_to_dichotomy
from multicurve_analysis import (
    GrowthKind, find_cantor_submulticurve, generated_multicurve, growth_table, has_unique_cycle,
    irreducible_components, leading_eigenvalue, periodic_classes, spectral_radius_below_one,
)
from pullback import CurveMatrix, counting_matrix, kappa, level_word, power_system, thurston_matrix

SEED = 20240613
MAX_CURVES = 6
MAX_ENTRIES = 3


def random_system(rng: random.Random, index: int) -> CurveSystem:
    count = rng.randint(1, MAX_CURVES)
    curve_ids = [f"c{i}" for i in range(count)]
    pieces = []
    points = []
    for k in range(count + 1):
        size = 2 if k in (0, count) else 1
        ids = tuple(f"p{k}_{j}" for j in range(size))
        pieces.append(Piece(f"P{k}", ids, f"P{k}"))
        points.extend(MarkedPoint(pid, pid) for pid in ids)
    curves = tuple(CurveClass(cid, f"P{k}", f"P{k + 1}") for k, cid in enumerate(curve_ids))
    words = {
        cid: tuple(
            PullbackEntry(rng.choice(curve_ids), rng.randint(1, 3),
                          rng.choice([Orientation.SAME, Orientation.REVERSED]))
            for _ in range(rng.randint(1, MAX_ENTRIES))
        )
        for cid in curve_ids
    }
    # 全局次数不小于任一曲线的本质原像次数和
    totals = {cid: 0 for cid in curve_ids}
    for entries in words.values():
        for entry in entries:
            totals[entry.target] += entry.degree
    return CurveSystem(degree=max(6, *totals.values()), points=tuple(points), curves=curves,
                       pieces=tuple(pieces), words=words, name=f"random-{index}")


def random_systems(count: int, seed: int = SEED) -> List[CurveSystem]:
    rng = random.Random(seed)
    return [random_system(rng, i) for i in range(count)]


def brute_kappa(sys: CurveSystem, n: int) -> Dict[str, int]:
    counts = {cid: 1 for cid in sys.curve_ids}
    for _ in range(n):
        counts = {cid: sum(counts[e.target] for e in sys.words_for(cid)) for cid in sys.curve_ids}
    return counts


def brute_cycle_count(sys: CurveSystem, start: str, stop: int = 2) -> int:
    """经过 start 的简单圈个数（条目实例层面），数到 stop 为止"""
    found = 0
    stack = [(start, frozenset([start]))]
    while stack and found < stop:
        vertex, seen = stack.pop()
        for entry in sys.words_for(vertex):
            if entry.target == start:
                found += 1
            elif entry.target not in seen:
                stack.append((entry.target, seen | {entry.target}))
    return found


def brute_spectral_radius(sys: CurveSystem) -> float:
    """按相互可达的块分别求特征值，避免 Jordan 块放大舍入"""
    matrix = thurston_matrix(sys).to_array()
    ids = sys.curve_ids
    reach = {}
    for cid in ids:
        seen, stack = set(), [cid]
        while stack:
            for entry in sys.words_for(stack.pop()):
                if entry.target not in seen:
                    seen.add(entry.target)
                    stack.append(entry.target)
        reach[cid] = seen
    radius = 0.0
    for i, cid in enumerate(ids):
        block = [j for j, other in enumerate(ids) if other in reach[cid] and cid in reach[other]]
        if i in block:
            values = np.linalg.eigvals(matrix[np.ix_(block, block)])
            radius = max(radius, float(np.max(np.abs(values))))
    return radius


class TestRandomSystems(unittest.TestCase):
    """随机系统性质测试类"""

    @classmethod
    def setUpClass(cls):
        cls.systems = random_systems(1000)

    def test_generated_systems_validate(self):
        for sys in self.systems:
            report = validate(sys)
            self.assertTrue(report.ok, f"{sys.name}: {sorted(report.codes)}")

    def test_every_class_is_preperiodic(self):
        for sys in self.systems:
            periodic = set(periodic_classes(sys))
            for cid in sys.curve_ids:
                current = cid
                for _ in range(len(sys.curve_ids)):
                    if current in periodic:
                        break
                    current = sys.words_for(current)[0].target
                self.assertIn(current, periodic, sys.name)

    def test_growth_matches_brute_force(self):
        for sys in self.systems:
            table = growth_table(sys)
            short, long = brute_kappa(sys, 32), brute_kappa(sys, 64)
            for cid, growth in table.items():
                with self.subTest(system=sys.name, curve=cid):
                    if long[cid] > short[cid]:
                        self.assertIs(growth.kind, GrowthKind.COILING)
                    elif long[cid] == 1:
                        self.assertIs(growth.kind, GrowthKind.CONST1)
                    else:
                        self.assertIs(growth.kind, GrowthKind.BOUNDED)
                        self.assertEqual(growth.limit, long[cid])

    def test_periodic_non_coiling_classes_have_one_preimage(self):
        for sys in self.systems:
            table = growth_table(sys)
            counts = brute_kappa(sys, 64)
            for cid in periodic_classes(sys):
                if table[cid].is_coiling:
                    continue
                self.assertEqual(counts[cid], 1, sys.name)
                reduced = sub_system(sys, generated_multicurve(sys, cid))
                for n in (1, 4, 16):
                    self.assertEqual(kappa(reduced, cid, n), kappa(sys, cid, n))

    def test_cantor_iff_two_cycles(self):
        for sys in self.systems:
            two_cycles = any(brute_cycle_count(sys, cid) >= 2 for cid in periodic_classes(sys))
            with self.subTest(system=sys.name):
                self.assertEqual(find_cantor_submulticurve(sys) is not None, two_cycles)
                self.assertEqual(has_unique_cycle(sys), not two_cycles)

    def test_kappa_matches_walk_counts(self):
        for sys in self.systems[:200]:
            for n in (1, 2, 5):
                counts = brute_kappa(sys, n)
                for cid in sys.curve_ids:
                    self.assertEqual(kappa(sys, cid, n), counts[cid])

    def test_level_word_length(self):
        for sys in self.systems[:500]:
            for cid in sys.curve_ids:
                for n in range(1, 7):
                    self.assertEqual(len(level_word(sys, cid, n)), kappa(sys, cid, n))

    def test_leading_eigenvalue_matches_numpy(self):
        for sys in self.systems:
            matrix = thurston_matrix(sys)
            reference = brute_spectral_radius(sys)
            lam = leading_eigenvalue(matrix)
            self.assertAlmostEqual(lam, reference, delta=1e-6, msg=sys.name)
            if abs(reference - 1) > 1e-6:
                self.assertEqual(spectral_radius_below_one(matrix), reference < 1, sys.name)

    def test_leading_eigenvalue_is_component_maximum(self):
        for sys in self.systems:
            components = irreducible_components(sys)
            lam = leading_eigenvalue(thurston_matrix(sys))
            with self.subTest(system=sys.name):
                self.assertAlmostEqual(max(c.lam for c in components), lam, delta=1e-9)
                self.assertEqual(sorted(cid for c in components for cid in c.curves), sorted(sys.curve_ids))

    def test_power_system_counting_matrix(self):
        """F^k 的计数矩阵等于 B^k"""
        for sys in self.systems[:300]:
            B = counting_matrix(sys)
            for k in range(1, 5):
                with self.subTest(system=sys.name, k=k):
                    self.assertEqual(counting_matrix(power_system(sys, k)).rows, B.power(k).rows)

    def test_sub_system_idempotent(self):
        for sys in self.systems:
            subsets = [sys.curve_ids]
            table = growth_table(sys)
            subsets += [generated_multicurve(sys, cid) for cid in periodic_classes(sys) if not table[cid].is_coiling]
            for subset in subsets:
                with self.subTest(system=sys.name, subset=sorted(subset)):
                    once = sub_system(sys, subset)
                    self.assertEqual(sub_system(once, subset), once)

    def test_refinement_preserves_coiling(self):
        """细化后 Coiling 类的投影恰为原系统的 Coiling 类，λ 不变"""
        for sys in self.systems[:200]:
            result = refine_to_dichotomy(sys)
            coiling_in = {cid for cid, g in growth_table(sys).items() if g.is_coiling}
            coiling_out = {result.projection(cid) for cid, g in result.growth.items() if g.is_coiling}
            with self.subTest(system=sys.name):
                self.assertEqual(coiling_out, coiling_in)
                self.assertAlmostEqual(result.lam_input, result.lam_refined, delta=1e-6)

    def test_exact_radius_on_scaled_identity(self):
        """λ 恰为 1 时精确判定给出 False"""
        one = Fraction(1)
        self.assertFalse(spectral_radius_below_one(CurveMatrix(('x',), ((one,),))))


if __name__ == "__main__":
    unittest.main(verbosity=2)
