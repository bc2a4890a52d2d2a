#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
拉回计数与替换动力学
计数矩阵 B、Thurston 矩阵 M、n 层有序词、κ_n 以及系统的迭代
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Any, Iterable, Sequence

import networkx as nx
import numpy as np

from curve_complex import CurveSystem, InessentialPreimage, PullbackEntry, Orientation, Piece, MarkedPoint


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurveMatrix:
    """以曲线 id 为行列索引的方阵，元素为 int 或 Fraction"""
    ids: Tuple[str, ...]
    rows: Tuple[Tuple[Any, ...], ...]

    def index(self, curve_id: str) -> int:
        return self.ids.index(curve_id)

    def entry(self, row: str, col: str):
        return self.rows[self.index(row)][self.index(col)]

    def row(self, curve_id: str) -> Tuple[Any, ...]:
        return self.rows[self.index(curve_id)]

    def to_list(self) -> List[List[Any]]:
        """转为可 JSON 序列化的嵌套列表（Fraction 写成 float）"""
        return [[float(x) if isinstance(x, Fraction) else x for x in row] for row in self.rows]

    def to_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows], dtype=float).reshape(len(self.ids), len(self.ids))

    def __matmul__(self, other: "CurveMatrix") -> "CurveMatrix":
        size = len(self.ids)
        product = tuple(
            tuple(sum(self.rows[i][k] * other.rows[k][j] for k in range(size)) for j in range(size))
            for i in range(size)
        )
        return CurveMatrix(self.ids, product)

    def power(self, n: int) -> "CurveMatrix":
        """整数精度的矩阵幂（平方求幂）"""
        size = len(self.ids)
        result = CurveMatrix(self.ids, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))
        base = self
        while n > 0:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result


@dataclass(frozen=True)
class WalkAddress:
    """n 层词中的一个地址：沿条目实例的一条路径"""
    steps: Tuple[Tuple[int, str], ...]
    degree: int = 1
    orientation: Orientation = Orientation.SAME

    @property
    def target(self) -> str:
        return self.steps[-1][1]

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(index for index, _ in self.steps)

    def label(self) -> str:
        return ".".join(f"{i}:{t}" for i, t in self.steps)


def counting_matrix(sys: CurveSystem) -> CurveMatrix:
    """B[γ][β] = words[γ] 中目标为 β 的条目数"""
    ids = sys.curve_ids
    position = {cid: i for i, cid in enumerate(ids)}
    rows = [[0] * len(ids) for _ in ids]
    for source, _, entry in sys.iter_entries():
        rows[position[source]][position[entry.target]] += 1
    return CurveMatrix(ids, tuple(tuple(r) for r in rows))


def thurston_matrix(sys: CurveSystem) -> CurveMatrix:
    """M[γ][β] = Σ 1/deg，元素保持为精确有理数"""
    ids = sys.curve_ids
    position = {cid: i for i, cid in enumerate(ids)}
    rows = [[Fraction(0)] * len(ids) for _ in ids]
    for source, _, entry in sys.iter_entries():
        rows[position[source]][position[entry.target]] += Fraction(1, entry.degree)
    return CurveMatrix(ids, tuple(tuple(r) for r in rows))


def sub_matrix(matrix: CurveMatrix, subset: Iterable[str]) -> CurveMatrix:
    """限制到曲线子集（保持原有顺序）"""
    wanted = set(subset)
    keep = [i for i, cid in enumerate(matrix.ids) if cid in wanted]
    return CurveMatrix(
        tuple(matrix.ids[i] for i in keep),
        tuple(tuple(matrix.rows[i][j] for j in keep) for i in keep),
    )


def entry_multigraph(sys: CurveSystem) -> nx.MultiDiGraph:
    """条目实例多重图：每个条目 words[γ][i] = (β, d, o) 是一条边 γ→β，key 为 i"""
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(sys.curve_ids)
    for source, index, entry in sys.iter_entries():
        graph.add_edge(source, entry.target, key=index, degree=entry.degree, orientation=entry.orientation)
    return graph


def kappa(sys: CurveSystem, curve_id: str, n: int) -> int:
    """
    κ_n(γ) = Σ_β (Bⁿ)[γ][β]

    Args:
        sys: 曲线系统
        curve_id: 曲线 γ
        n: 层数，n ≥ 1
    """
    if n < 1:
        raise ValueError(f"n 必须 ≥ 1，当前为 {n}")
    return sum(counting_matrix(sys).power(n).row(curve_id))


def level_word(sys: CurveSystem, curve_id: str, n: int) -> List[WalkAddress]:
    """
    n 层有序词

    words[γ] 的每个条目 (β, d, o) 依次替换为 β 的 n-1 层词，
    次数乘以 d，o 为 Reversed 时整段倒序

    Returns:
        长度为 κ_n(γ) 的地址列表
    """
    if n < 1:
        raise ValueError(f"n 必须 ≥ 1，当前为 {n}")

    cache: Dict[Tuple[str, int], List[WalkAddress]] = {}

    def expand(source: str, level: int) -> List[WalkAddress]:
        if level == 0:
            return [WalkAddress(())]
        key = (source, level)
        if key in cache:
            return cache[key]
        word: List[WalkAddress] = []
        for index, entry in enumerate(sys.words_for(source)):
            tail = expand(entry.target, level - 1)
            if entry.orientation is Orientation.REVERSED:
                tail = list(reversed(tail))
            for address in tail:
                word.append(WalkAddress(
                    steps=((index, entry.target),) + address.steps,
                    degree=entry.degree * address.degree,
                    orientation=entry.orientation.compose(address.orientation),
                ))
        cache[key] = word
        return word

    return list(expand(curve_id, n))


def iterate_map(step: Dict[str, str], k: int) -> Dict[str, str]:
    """有限自映射的 k 次迭代"""
    result = {}
    for start in step:
        current = start
        for _ in range(k):
            current = step[current]
        result[start] = current
    return result


def _power_inessential(sys: CurveSystem, k: int) -> Optional[Dict[str, Tuple[InessentialPreimage, ...]]]:
    """
    F^k 的非本质原像表

    第 j 层 (1 ≤ j ≤ k) 的地址 w 落在 β 上时，β 的非本质原像成为 γ 的非本质原像，次数乘 deg(w)；
    j < k 时该分量再拉回 k − j 次，只保留次数 (× d^{k−j})，记为平凡曲线
    """
    if sys.inessential is None:
        return None
    table: Dict[str, Tuple[InessentialPreimage, ...]] = {}
    for cid in sys.curve_ids:
        items: List[InessentialPreimage] = []
        for j in range(1, k + 1):
            prefixes = [(cid, 1)] if j == 1 else [(w.target, w.degree) for w in level_word(sys, cid, j - 1)]
            spread = sys.degree ** (k - j)
            for target, degree in prefixes:
                for item in sys.inessential.get(target, ()):
                    point = item.point if j == k else None
                    items.append(InessentialPreimage(degree * item.degree * spread, point))
        table[cid] = tuple(items)
    return table


def power_system(sys: CurveSystem, k: int) -> CurveSystem:
    """
    表示 F^k 的曲线系统

    词为 k 层词（地址折叠为带累积次数与定向的条目），片映射与点映射迭代 k 次；
    给出非本质原像表时一并迭代，F^k 的次数和检查照常进行
    """
    if k < 1:
        raise ValueError(f"k 必须 ≥ 1，当前为 {k}")
    if k == 1:
        return sys

    words = {
        cid: tuple(PullbackEntry(a.target, a.degree, a.orientation) for a in level_word(sys, cid, k))
        for cid in sys.curve_ids
    }
    piece_images = iterate_map(sys.piece_map, k)
    point_images = iterate_map(sys.point_map, k)
    logger.debug(f"构造 F^{k}: 条目总数 {sum(len(w) for w in words.values())}")
    return CurveSystem(
        degree=sys.degree ** k,
        points=tuple(MarkedPoint(p.id, point_images[p.id], p.critical, p.synthetic) for p in sys.points),
        curves=sys.curves,
        pieces=tuple(Piece(p.id, p.points, piece_images[p.id], p.boundary) for p in sys.pieces),
        words=words,
        inessential=_power_inessential(sys, k),
        name=sys.name,
    )


def matrix_power_row_sums(matrix: CurveMatrix, n: int) -> Dict[str, int]:
    """每条曲线的 Bⁿ 行和"""
    powered = matrix.power(n)
    return {cid: sum(row) for cid, row in zip(powered.ids, powered.rows)}


def word_signature(word: Sequence[WalkAddress]) -> List[str]:
    """地址列表的紧凑表示，用于报告与日志"""
    return [address.label() for address in word]
