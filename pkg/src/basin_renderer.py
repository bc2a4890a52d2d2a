#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
吸引域渲染
逐像素前向迭代，按最先接近的吸引周期着色，输出二进制 PPM（P6）
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Dict, Any

import numpy as np
from PIL import Image

from pcf_numerics import RationalMapExpr, eval_map_array, format_point, is_infinite, verify_pcf
from tool_config import tool_config_manager


logger = logging.getLogger(__name__)

# 每个吸引周期一种颜色，未分类像素为黑色
PALETTE: Tuple[Tuple[int, int, int], ...] = (
    (46, 134, 171),
    (76, 175, 80),
    (242, 166, 90),
    (198, 40, 40),
    (149, 117, 205),
    (255, 235, 59),
    (0, 150, 136),
    (233, 30, 99),
)
UNCLASSIFIED = (0, 0, 0)


@dataclass
class BasinStats:
    center: complex
    width: float
    px: int
    max_iter: int
    eps: float
    cycles: List[List[complex]]
    counts: List[int]
    unclassified: int

    @property
    def total(self) -> int:
        return self.px * self.px

    @property
    def classified_fraction(self) -> float:
        return 1.0 - self.unclassified / self.total

    def to_dict(self) -> Dict[str, Any]:
        return {
            'center': format_point(self.center),
            'width': self.width,
            'px': self.px,
            'max_iter': self.max_iter,
            'eps': self.eps,
            'classified_fraction': self.classified_fraction,
            'basins': [
                {'cycle': [format_point(z) for z in cycle], 'pixels': count}
                for cycle, count in zip(self.cycles, self.counts)
            ],
            'unclassified': self.unclassified,
        }


@dataclass
class RenderResult:
    labels: np.ndarray
    rgb: np.ndarray
    stats: BasinStats
    path: Optional[str] = None


def _chordal_to(z: np.ndarray, point: complex) -> np.ndarray:
    if is_infinite(point):
        return 2.0 / np.sqrt(1.0 + np.abs(z) ** 2)
    return 2.0 * np.abs(z - point) / (np.sqrt(1.0 + np.abs(z) ** 2) * np.sqrt(1.0 + abs(point) ** 2))


def pixel_grid(center: complex, width: float, px: int) -> np.ndarray:
    """像素中心坐标，第 0 行在上方"""
    offsets = (np.arange(px) + 0.5) * width / px - width / 2
    xs = center.real + offsets
    ys = center.imag - offsets
    return xs[None, :] + 1j * ys[:, None]


def classify_points(m: RationalMapExpr, z: np.ndarray, cycles: Sequence[Sequence[complex]],
                    max_iter: int, eps: float) -> np.ndarray:
    """返回每个点所属吸引周期的下标，-1 表示 max_iter 步内未分类"""
    labels = np.full(z.size, -1, dtype=int)
    index = np.arange(z.size)
    current = np.asarray(z, dtype=complex).ravel().copy()
    for iteration in range(max_iter + 1):
        for k, cycle in enumerate(cycles):
            hit = np.zeros(current.shape, dtype=bool)
            for point in cycle:
                hit |= _chordal_to(current, point) < eps
            labels[index[hit]] = k
            index, current = index[~hit], current[~hit]
        if current.size == 0 or iteration == max_iter:
            break
        current = eval_map_array(m, current)
    return labels.reshape(np.shape(z))


def colorize(labels: np.ndarray) -> np.ndarray:
    rgb = np.zeros(labels.shape + (3,), dtype=np.uint8)
    rgb[:] = UNCLASSIFIED
    for k in range(int(labels.max(initial=-1)) + 1):
        rgb[labels == k] = PALETTE[k % len(PALETTE)]
    return rgb


def write_ppm(rgb: np.ndarray, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    Image.fromarray(rgb, 'RGB').save(path, format='PPM')
    return path


def attracting_cycles(m: RationalMapExpr) -> List[List[complex]]:
    portrait = verify_pcf(m)
    if not portrait.pcf:
        raise ValueError(f"{m.name or '映射'} 未通过 PCF 验证，无法确定吸引周期")
    cycles = portrait.attracting_cycles()
    logger.debug(f"{m.name or '映射'}: 吸引周期 {[[format_point(z) for z in c] for c in cycles]}")
    return cycles


def render_basins(m: RationalMapExpr, center: complex = 0j, width: float = 4.0, px: Optional[int] = None,
                  max_iter: Optional[int] = None, eps: Optional[float] = None,
                  cycles: Optional[List[List[complex]]] = None, out: Optional[str] = None,
                  threads: int = 1) -> RenderResult:
    """
    渲染以 center 为中心、边长 width 的正方形窗口

    Args:
        cycles: 吸引周期；缺省时由 verify_pcf 得到
        out: PPM 输出路径
        threads: 按扫描行分块的线程数
    """
    config = tool_config_manager.config
    px = config.render_px if px is None else px
    max_iter = config.render_max_iter if max_iter is None else max_iter
    eps = config.render_eps if eps is None else eps
    cycles = attracting_cycles(m) if cycles is None else cycles

    grid = pixel_grid(complex(center), width, px)
    if threads > 1:
        chunks = np.array_split(grid, threads, axis=0)
        with ThreadPoolExecutor(max_workers=threads) as executor:
            parts = list(executor.map(lambda chunk: classify_points(m, chunk, cycles, max_iter, eps), chunks))
        labels = np.vstack(parts)
    else:
        labels = classify_points(m, grid, cycles, max_iter, eps)

    counts = [int(np.count_nonzero(labels == k)) for k in range(len(cycles))]
    stats = BasinStats(complex(center), width, px, max_iter, eps, cycles, counts,
                       int(np.count_nonzero(labels < 0)))
    rgb = colorize(labels)
    path = write_ppm(rgb, out) if out else None
    logger.info(f"{m.name or '映射'}: 窗口 {format_point(complex(center))} ± {width / 2:g}, "
                f"分类比例 {stats.classified_fraction:.4f}, 各吸引域像素 {counts}")
    return RenderResult(labels, rgb, stats, path)


def render_zoom_sequence(m: RationalMapExpr, center: complex, widths: Sequence[float], px: Optional[int] = None,
                         max_iter: Optional[int] = None, eps: Optional[float] = None,
                         out_dir: Optional[str] = None, prefix: str = "zoom",
                         threads: int = 1) -> List[Tuple[float, BasinStats]]:
    """围绕同一点的逐级放大，每帧单独写一个 PPM"""
    cycles = attracting_cycles(m)
    frames: List[Tuple[float, BasinStats]] = []
    for k, width in enumerate(widths, 1):
        out = os.path.join(out_dir, f"{prefix}_{k:02d}.ppm") if out_dir else None
        result = render_basins(m, center, width, px, max_iter, eps, cycles, out, threads)
        frames.append((width, result.stats))
    return frames
