#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
曲线系统目录
内置示例系统，以及按名称或文件路径取得系统、批量导出为 JSON
"""

import logging
import os
from typing import Dict, List, Optional, Sequence, Tuple, Any

from curve_complex import (
    CurveSystem, CurveClass, MarkedPoint, Orientation, Piece, PullbackEntry,
    load_system, save_system, system_to_dict,
)
from multicurve_errors import SystemFormatError


def _entries(*items: Tuple[str, int]) -> Tuple[PullbackEntry, ...]:
    return tuple(PullbackEntry(target, degree, Orientation.SAME) for target, degree in items)


def _fixed_points(ids: Sequence[str], critical: Sequence[str] = ()) -> Tuple[MarkedPoint, ...]:
    return tuple(MarkedPoint(pid, pid, pid in critical) for pid in ids)


def _chain(name: str, degree: int, layout: Sequence[Tuple[str, Sequence[str]]], curve_ids: Sequence[str],
           words: Dict[str, Tuple[PullbackEntry, ...]], critical: Sequence[str] = (),
           peripheral: Optional[Dict[str, str]] = None) -> CurveSystem:
    """片沿一条链排列、全部不动的系统：layout[i] 与 layout[i+1] 之间是 curve_ids[i]"""
    peripheral = peripheral or {}
    pieces = tuple(Piece(pid, tuple(points), pid) for pid, points in layout)
    curves = tuple(
        CurveClass(cid, layout[i][0], layout[i + 1][0], peripheral.get(cid))
        for i, cid in enumerate(curve_ids)
    )
    point_ids = [pt for _, points in layout for pt in points]
    return CurveSystem(
        degree=degree,
        points=_fixed_points(point_ids, critical),
        curves=curves,
        pieces=pieces,
        words=words,
        name=name,
    )


# 旧编号 -> 内置系统名
FIXTURE_ALIASES = {
    'cor55': 'coiling-pair',
    'thm14': 'renormalizable',
}


def default_fixtures() -> Dict[str, CurveSystem]:
    """内置示例系统，按名称索引"""
    fixtures = [
        # κ_n(beta) = 2n+1，alpha 恒为 1
        _chain(
            "coiling-pair", 6,
            [("P1", ["m1", "m2"]), ("P2", ["m3"]), ("P3", ["m4", "m5"])],
            ["alpha", "beta"],
            {
                "alpha": _entries(("alpha", 2)),
                "beta": _entries(("alpha", 2), ("beta", 2), ("alpha", 2)),
            },
        ),
        # 次数 1 的不动曲线
        _chain(
            "levy", 2,
            [("L", ["p1", "p2"]), ("R", ["p3", "p4"])],
            ["gamma"],
            {"gamma": _entries(("gamma", 1))},
        ),
        _chain(
            "cantor", 6,
            [("Q1", ["q1", "q2"]), ("Q2", ["q3"]), ("Q3", ["q4", "q5"])],
            ["gamma1", "gamma2"],
            {
                "gamma1": _entries(("gamma1", 3), ("gamma2", 3)),
                "gamma2": _entries(("gamma1", 3), ("gamma2", 3)),
            },
        ),
        # 有界但不 coiling：κ_n(gamma) = 2 (n ≥ 2)
        _chain(
            "chain", 4,
            [("P1", ["n1", "n2"]), ("P2", ["n3"]), ("P3", ["n4"]), ("P4", ["n5"]), ("P5", ["n6", "n7"])],
            ["gamma", "v", "a", "b"],
            {
                "gamma": _entries(("v", 2)),
                "v": _entries(("a", 2), ("b", 2)),
                "a": _entries(("a", 2)),
                "b": _entries(("b", 2)),
            },
        ),
        # coiling 曲线 gamma，没有 Cantor 子多重曲线
        _chain(
            "renormalizable", 4,
            [("P1", ["e1", "e2"]), ("P2", ["e3"]), ("P3", ["e4", "e5"])],
            ["gamma", "alpha"],
            {
                "gamma": _entries(("gamma", 2), ("alpha", 2)),
                "alpha": _entries(("alpha", 2)),
            },
        ),
        # alpha 的原像中有绕不动临界点 a 的外围曲线 beta
        _chain(
            "coiled-fatou", 4,
            [("P1", ["x1", "x2"]), ("P2", ["x3"]), ("P3", ["a"])],
            ["alpha", "beta"],
            {
                "alpha": _entries(("alpha", 2)),
                "beta": _entries(("alpha", 2)),
            },
            critical=["a"],
            peripheral={"beta": "a"},
        ),
    ]
    return {sys.name: sys for sys in fixtures}


class SystemStore:
    """曲线系统目录"""

    def __init__(self, fixtures_dir: Optional[str] = None):
        self.logger = logging.getLogger(__name__)

        if fixtures_dir is None:
            fixtures_dir = os.path.join(os.path.dirname(__file__), '..', 'fixtures')
        self.fixtures_dir = fixtures_dir
        self.systems: Dict[str, CurveSystem] = default_fixtures()

    def names(self) -> List[str]:
        return list(self.systems)

    def get(self, name: str) -> CurveSystem:
        name = FIXTURE_ALIASES.get(name, name)
        if name not in self.systems:
            raise SystemFormatError(f"未知的内置系统: {name}，可选: {', '.join(self.systems)}")
        return self.systems[name]

    def resolve(self, ref: str) -> CurveSystem:
        """
        按文件路径或内置名称取得系统

        Raises:
            SystemFormatError: 文件不可读、格式错误或名称未知
        """
        if os.path.exists(ref):
            return load_system(ref)
        stem = os.path.splitext(os.path.basename(ref))[0]
        stem = FIXTURE_ALIASES.get(stem, stem)
        if stem in self.systems and os.path.dirname(ref) in ('', 'fixtures'):
            self.logger.info(f"文件 {ref} 不存在，使用内置系统 {stem}")
            return self.systems[stem]
        ref = FIXTURE_ALIASES.get(ref, ref)
        if ref in self.systems:
            return self.systems[ref]
        raise SystemFormatError(f"找不到系统文件或内置系统: {ref}")

    def export_fixtures(self, out_dir: Optional[str] = None) -> List[str]:
        """把全部内置系统写成 JSON 文件"""
        out_dir = out_dir or self.fixtures_dir
        os.makedirs(out_dir, exist_ok=True)
        paths = []
        for name, sys in self.systems.items():
            path = os.path.join(out_dir, f"{name}.json")
            save_system(sys, path)
            paths.append(path)
        self.logger.info(f"导出了 {len(paths)} 个内置系统到 {out_dir}")
        return paths

    def export_to_dict(self) -> Dict[str, Any]:
        return {name: system_to_dict(sys) for name, sys in self.systems.items()}


# 全局目录实例
system_store = SystemStore()
