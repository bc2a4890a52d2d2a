#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
PCF 有理映射数值工具
射影求值、临界点（Aberth–Ehrlich 同时迭代）、临界轨道验证与 Newton 参数求解
"""

import cmath
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Any, Union

import numpy as np
from numpy.polynomial import polynomial as P

from multicurve_errors import ConvergenceError
from tool_config import tool_config_manager


logger = logging.getLogger(__name__)

INF = complex(math.inf, 0.0)

Number = Union[complex, float]


def is_infinite(z: Number) -> bool:
    return cmath.isinf(complex(z))


def chordal_distance(z: Number, w: Number) -> float:
    """Riemann 球面上的弦距离，∞ 可参与比较"""
    z_inf, w_inf = is_infinite(z), is_infinite(w)
    if z_inf and w_inf:
        return 0.0
    if z_inf:
        return 2.0 / math.sqrt(1.0 + abs(w) ** 2)
    if w_inf:
        return 2.0 / math.sqrt(1.0 + abs(z) ** 2)
    return 2.0 * abs(z - w) / math.sqrt((1.0 + abs(z) ** 2) * (1.0 + abs(w) ** 2))


def format_point(z: Number, digits: int = 16) -> str:
    if is_infinite(z):
        return "∞"
    z = complex(z)
    if z.imag == 0.0:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


@dataclass(frozen=True)
class PolyExpr:
    """多项式，系数按次数升序"""
    coeffs: Tuple[complex, ...]

    @classmethod
    def of(cls, coeffs: Sequence[Number]) -> "PolyExpr":
        return cls(tuple(complex(c) for c in coeffs)).trimmed(0.0)

    @classmethod
    def from_roots(cls, roots: Sequence[Number], scale: Number = 1.0) -> "PolyExpr":
        return cls.of(complex(scale) * P.polyfromroots([complex(r) for r in roots]))

    def trimmed(self, rel_tol: float = 1e-12) -> "PolyExpr":
        """去掉相对最大系数小于 rel_tol 的高次系数"""
        coeffs = list(self.coeffs)
        if not coeffs:
            return PolyExpr((0j,))
        top = max(abs(c) for c in coeffs)
        while len(coeffs) > 1 and abs(coeffs[-1]) <= rel_tol * top:
            coeffs.pop()
        return PolyExpr(tuple(coeffs))

    @property
    def degree(self) -> int:
        trimmed = self.trimmed(0.0)
        if len(trimmed.coeffs) == 1 and trimmed.coeffs[0] == 0:
            return 0
        return len(trimmed.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def __call__(self, z):
        return P.polyval(z, self.array)

    def derivative(self, order: int = 1) -> "PolyExpr":
        if order == 0:
            return self
        if len(self.coeffs) <= order:
            return PolyExpr((0j,))
        return PolyExpr(tuple(P.polyder(self.array, order)))

    def reversed_eval(self, w, degree: Optional[int] = None):
        """w^deg · p(1/w)"""
        degree = self.degree if degree is None else degree
        coeffs = np.zeros(degree + 1, dtype=complex)
        coeffs[:len(self.coeffs)] = self.array[:degree + 1]
        return P.polyval(w, coeffs[::-1])

    def __mul__(self, other: "PolyExpr") -> "PolyExpr":
        return PolyExpr(tuple(P.polymul(self.array, other.array)))

    def __sub__(self, other: "PolyExpr") -> "PolyExpr":
        return PolyExpr(tuple(P.polysub(self.array, other.array)))

    def scaled(self, factor: Number) -> "PolyExpr":
        return PolyExpr(tuple(complex(factor) * c for c in self.coeffs))


@dataclass(frozen=True)
class RationalMapExpr:
    """有理映射 num/den"""
    num: PolyExpr
    den: PolyExpr
    name: str = ""

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def rescaled(self, factor: Number) -> "RationalMapExpr":
        return RationalMapExpr(self.num.scaled(factor), self.den.scaled(factor), self.name)

    def check(self, tol: float = 1e-10) -> "RationalMapExpr":
        """次数 ≥ 2 且分子分母在工作精度下互素"""
        if self.degree < 2:
            raise ValueError(f"{self.name or '映射'} 的次数 {self.degree} 小于 2")
        if self.num.degree and self.den.degree:
            num_roots = P.polyroots(self.num.array)
            den_roots = P.polyroots(self.den.array)
            gap = min(abs(r - s) for r in num_roots for s in den_roots)
            if gap < tol:
                raise ValueError(f"{self.name or '映射'} 的分子分母有公共根（距离 {gap:.3g}）")
        return self

    def __call__(self, z: Number) -> complex:
        return eval_map(self, z)


def eval_map(m: RationalMapExpr, z: Number) -> complex:
    """
    射影求值：|z| > 1 时用 w = 1/z 的齐次形式，∞ 和极点返回 INF
    """
    dn, dd = m.num.degree, m.den.degree
    if is_infinite(z):
        if dn > dd:
            return INF
        if dn < dd:
            return 0j
        return complex(m.num.coeffs[dn] / m.den.coeffs[dd])

    z = complex(z)
    if abs(z) <= 1.0:
        numerator, denominator = complex(m.num(z)), complex(m.den(z))
        if denominator == 0:
            return INF if numerator != 0 else complex(math.nan, math.nan)
        return numerator / denominator

    w = 1.0 / z
    numerator, denominator = complex(m.num.reversed_eval(w, dn)), complex(m.den.reversed_eval(w, dd))
    if denominator == 0:
        return INF
    try:
        return numerator / denominator * z ** (dn - dd)
    except OverflowError:
        return INF


def eval_map_array(m: RationalMapExpr, z: np.ndarray, big: float = 1e100) -> np.ndarray:
    """数组版射影求值；|z| ≥ big 视为 ∞，返回值中 ∞ 记为 big"""
    dn, dd = m.num.degree, m.den.degree
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    with np.errstate(all='ignore'):
        inner = np.abs(z) <= 1.0
        zi = z[inner]
        out[inner] = m.num(zi) / m.den(zi)

        outer = ~inner
        zo = z[outer]
        w = 1.0 / zo
        out[outer] = m.num.reversed_eval(w, dn) / m.den.reversed_eval(w, dd) * zo ** (dn - dd)

        bad = ~np.isfinite(out) | (np.abs(out) >= big)
    out[bad] = big
    return out


def wronskian(m: RationalMapExpr) -> PolyExpr:
    """num′·den − num·den′"""
    return (m.num.derivative() * m.den - m.num * m.den.derivative()).trimmed(0.0)


def aberth_roots(poly: PolyExpr, tol: Optional[float] = None, max_iter: Optional[int] = None,
                 seed: Optional[int] = None) -> np.ndarray:
    """
    Aberth–Ehrlich 同时迭代求多项式全部根

    初值取半径为系数几何平均的圆周，角度带随机扰动

    Raises:
        ConvergenceError: 超过迭代上限且残差仍大，trace 为各根的相对残差
    """
    config = tool_config_manager.config
    tol = config.root_tol if tol is None else tol
    max_iter = config.root_max_iter if max_iter is None else max_iter
    seed = config.random_seed if seed is None else seed

    coeffs = poly.trimmed(0.0).array
    n = len(coeffs) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    derivative = P.polyder(coeffs)

    rng = np.random.default_rng(seed)
    radius = abs(coeffs[0] / coeffs[-1]) ** (1.0 / n) if coeffs[0] != 0 else 1.0
    radius = radius if radius > 0 else 1.0
    angles = 2 * np.pi * (np.arange(n) + rng.uniform(0.1, 0.4, n)) / n + 0.4
    z = radius * np.exp(1j * angles)

    for iteration in range(max_iter):
        value = P.polyval(z, coeffs)
        slope = P.polyval(z, derivative)
        with np.errstate(divide='ignore', invalid='ignore'):
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            repulsion = (1.0 / diff).sum(axis=1) - 1.0
            ratio = value / slope
            step = ratio / (1.0 - ratio * repulsion)
        step = np.where(np.isfinite(step), step, 0.0)
        z = z - step
        if np.all(np.abs(step) <= tol * (1.0 + np.abs(z))):
            logger.debug(f"Aberth 迭代 {iteration + 1} 步收敛, 次数 {n}")
            return z

    scale = P.polyval(np.abs(z), np.abs(coeffs))
    residuals = np.abs(P.polyval(z, coeffs)) / np.where(scale > 0, scale, 1.0)
    if np.all(residuals < 1e-10):
        logger.debug(f"Aberth 迭代达到上限 {max_iter}，残差 {residuals.max():.3g} 可接受")
        return z
    raise ConvergenceError(f"Aberth 迭代 {max_iter} 步未收敛", trace=residuals.tolist())


def _polish(poly: PolyExpr, z: complex, multiplicity: int, steps: int = 30) -> complex:
    """重根用 W^{(m-1)} 上的 Newton 迭代精化"""
    target = poly.derivative(multiplicity - 1)
    slope = target.derivative()
    for _ in range(steps):
        d = complex(slope(z))
        if d == 0:
            break
        delta = complex(target(z)) / d
        z -= delta
        if abs(delta) <= 1e-16 * (1.0 + abs(z)):
            break
    return z


@dataclass(frozen=True)
class CriticalPoint:
    point: complex
    multiplicity: int

    @property
    def at_infinity(self) -> bool:
        return is_infinite(self.point)


def _cluster(roots: Sequence[complex], tol: float) -> List[List[complex]]:
    clusters: List[List[complex]] = []
    for r in roots:
        for group in clusters:
            if abs(group[0] - r) < tol * (1.0 + abs(r)):
                group.append(r)
                break
        else:
            clusters.append([r])
    return clusters


def _relative_value(poly: PolyExpr, z: complex) -> float:
    scale = float(P.polyval(abs(z), np.abs(poly.array)))
    return abs(complex(poly(z))) / scale if scale > 0 else 0.0


def _is_multiple_root(poly: PolyExpr, z: complex, multiplicity: int, residual_tol: float) -> bool:
    """W, W′, …, W^{(m−2)} 在 z 处的相对值都低于 residual_tol"""
    return all(_relative_value(poly.derivative(k), z) < residual_tol for k in range(multiplicity - 1))


def _merge_multiple(poly: PolyExpr, clusters: List[List[complex]], merge_tol: float,
                    residual_tol: float) -> List[List[complex]]:
    """
    合并被舍入误差拆开的重根

    m 重根的数值根彼此相距约 (eps·cond)^{1/m}，远大于初次聚类的容差。
    相近的两组先在 W^{(m−1)} 上精化，低阶导数同时为零才合并
    """
    clusters = [list(group) for group in clusters]
    while True:
        pairs = []
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                ci, cj = complex(np.mean(clusters[i])), complex(np.mean(clusters[j]))
                distance = abs(ci - cj)
                if distance < merge_tol * (1.0 + abs(ci)):
                    pairs.append((distance, i, j))
        for _, i, j in sorted(pairs):
            group = clusters[i] + clusters[j]
            z = _polish(poly, complex(np.mean(group)), len(group))
            if not all(abs(r - z) < merge_tol * (1.0 + abs(z)) for r in group):
                continue
            if _is_multiple_root(poly, z, len(group), residual_tol):
                logger.debug(f"合并 {len(group)} 个相近的根为重根 {format_point(z, 12)}")
                clusters = [g for k, g in enumerate(clusters) if k not in (i, j)] + [group]
                break
        else:
            return clusters


def critical_points(m: RationalMapExpr, seed: Optional[int] = None, cluster_tol: float = 1e-6,
                    merge_tol: float = 5e-4, residual_tol: float = 1e-11) -> List[CriticalPoint]:
    """
    临界点及重数

    有限临界点为 Wronskian 的根，∞ 的重数为 2d − 2 − deg W，总重数为 2d − 2。
    相距 merge_tol 以内、且低阶导数的相对值低于 residual_tol 的根合并为重根
    """
    d = m.degree
    if d < 2:
        raise ValueError(f"次数 {d} 小于 2")
    w = wronskian(m).trimmed(1e-12)
    roots = aberth_roots(w, seed=seed)

    result: List[CriticalPoint] = []
    at_infinity = 2 * d - 2 - w.degree
    if at_infinity > 0:
        result.append(CriticalPoint(INF, at_infinity))
    clusters = _merge_multiple(w, _cluster(list(roots), cluster_tol), merge_tol, residual_tol)
    for group in clusters:
        centre = complex(np.mean(group))
        result.append(CriticalPoint(_polish(w, centre, len(group)), len(group)))

    finite = sorted(result[1:] if at_infinity > 0 else result,
                    key=lambda c: (round(c.point.real, 9), round(c.point.imag, 9)))
    result = ([result[0]] if at_infinity > 0 else []) + finite
    logger.debug(f"{m.name or '映射'}: {len(result)} 个临界点, 重数和 {sum(c.multiplicity for c in result)}")
    return result


def riemann_hurwitz_check(m: RationalMapExpr, points: Optional[List[CriticalPoint]] = None) -> Tuple[int, int, bool]:
    points = critical_points(m) if points is None else points
    total = sum(c.multiplicity for c in points)
    return total, 2 * m.degree - 2, total == 2 * m.degree - 2


@dataclass
class CriticalOrbit:
    """一个临界点的前向轨道，直到与前面某点在容差内重合"""
    point: complex
    multiplicity: int
    orbit: List[complex]
    preperiod: Optional[int] = None
    period: Optional[int] = None
    residual: float = math.inf
    step_distances: List[float] = field(default_factory=list)

    @property
    def closed(self) -> bool:
        return self.period is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'point': format_point(self.point),
            'multiplicity': self.multiplicity,
            'orbit': [format_point(z) for z in self.orbit],
            'preperiod': self.preperiod,
            'period': self.period,
            'residual': self.residual,
        }


@dataclass
class CriticalPortrait:
    """临界点、重数与有限前向轨道"""
    name: str
    degree: int
    orbits: List[CriticalOrbit]

    @property
    def multiplicity_sum(self) -> int:
        return sum(o.multiplicity for o in self.orbits)

    @property
    def pcf(self) -> bool:
        return all(o.closed for o in self.orbits)

    @property
    def max_residual(self) -> float:
        return max((o.residual for o in self.orbits), default=0.0)

    def postcritical_set(self, tol: float = 1e-6) -> List[complex]:
        points: List[complex] = []
        for o in self.orbits:
            for z in o.orbit[1:]:
                if all(chordal_distance(z, p) >= tol for p in points):
                    points.append(z)
        return points

    def attracting_cycles(self, tol: float = 1e-6) -> List[List[complex]]:
        """含临界点的周期轨道（超吸引）"""
        cycles: List[List[complex]] = []
        critical = [o.point for o in self.orbits]
        for o in self.orbits:
            if not o.closed:
                continue
            cycle = o.orbit[o.preperiod:o.preperiod + o.period]
            if not any(chordal_distance(z, c) < tol for z in cycle for c in critical):
                continue
            if any(any(chordal_distance(cycle[0], z) < tol for z in known) for known in cycles):
                continue
            cycles.append(cycle)
        return cycles

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'degree': self.degree,
            'pcf': self.pcf,
            'multiplicity_sum': self.multiplicity_sum,
            'expected_sum': 2 * self.degree - 2,
            'max_residual': self.max_residual,
            'orbits': [o.to_dict() for o in self.orbits],
            'postcritical_set': [format_point(z) for z in self.postcritical_set()],
        }


def _follow_orbit(m: RationalMapExpr, cp: CriticalPoint, max_orbit: int, tol: float) -> CriticalOrbit:
    orbit = CriticalOrbit(cp.point, cp.multiplicity, [cp.point])
    current = cp.point
    for _ in range(max_orbit):
        current = eval_map(m, current)
        distances = [chordal_distance(current, z) for z in orbit.orbit]
        close = [i for i, dist in enumerate(distances) if dist < tol]
        nearest = min(distances)
        orbit.step_distances.append(nearest)
        if len(close) > 1:
            raise ValueError(
                f"{m.name or '映射'}: 轨道点 {format_point(current)} 与 {len(close)} 个已有点都在容差 {tol} 内，无法区分")
        if close:
            j = close[0]
            orbit.orbit.append(current)
            orbit.preperiod, orbit.period = j, len(orbit.orbit) - 1 - j
            orbit.residual = distances[j]
            return orbit
        orbit.orbit.append(current)
    return orbit


def verify_pcf(m: RationalMapExpr, max_orbit: Optional[int] = None, tol: Optional[float] = None,
               points: Optional[List[CriticalPoint]] = None) -> CriticalPortrait:
    """
    逐个迭代临界点直到与前面某点在 tol 内重合

    Returns:
        CriticalPortrait；有轨道超过 max_orbit 未闭合时 pcf 为 False
    """
    config = tool_config_manager.config
    max_orbit = config.max_orbit if max_orbit is None else max_orbit
    tol = config.orbit_tol if tol is None else tol

    points = critical_points(m) if points is None else points
    portrait = CriticalPortrait(m.name, m.degree, [_follow_orbit(m, cp, max_orbit, tol) for cp in points])
    if portrait.pcf:
        logger.info(f"{m.name or '映射'}: PCF 验证通过, 最大残差 {portrait.max_residual:.3g}")
    else:
        open_points = [format_point(o.point) for o in portrait.orbits if not o.closed]
        logger.warning(f"{m.name or '映射'}: {len(open_points)} 条临界轨道在 {max_orbit} 步内未闭合: {open_points}")
    return portrait


# ---------------------------------------------------------------------------
# Newton 参数求解
# ---------------------------------------------------------------------------

@dataclass
class ParameterProblem:
    """参数问题：未知量、残差条件与初值"""
    family: str
    unknowns: Tuple[str, ...]
    residual: Callable[[np.ndarray], np.ndarray]
    seeds: Tuple[Number, ...]
    conditions: Tuple[str, ...] = ()
    target: Optional[Tuple[float, ...]] = None
    target_digits: int = 13
    complex_valued: bool = False

    def describe(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'unknowns': list(self.unknowns),
            'conditions': list(self.conditions),
            'n_conditions': len(self.conditions),
            'n_unknowns': len(self.unknowns),
            'seeds': [format_point(s) for s in self.seeds],
        }


@dataclass
class NewtonStep:
    iteration: int
    values: List[Number]
    residual: float
    step: float


@dataclass
class ParameterSolution:
    problem: ParameterProblem
    values: np.ndarray
    residual: float
    trace: List[NewtonStep]

    @property
    def root(self) -> Number:
        return self.values[0]

    def errors(self) -> List[float]:
        """各步与最终解的距离"""
        return [float(np.linalg.norm(np.asarray(s.values) - self.values)) for s in self.trace]

    def digits_matched(self, target: Optional[Sequence[float]] = None) -> int:
        target = self.problem.target if target is None else target
        if target is None:
            return 0
        return min(significant_digits(v, t) for v, t in zip(self.values, target))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'problem': self.problem.describe(),
            'values': {name: format_point(v) for name, v in zip(self.problem.unknowns, self.values)},
            'residual': self.residual,
            'iterations': len(self.trace),
            'errors': self.errors(),
        }


def significant_digits(value: Number, target: Number) -> int:
    """相对误差给出的一致有效数字位数（上限 16）"""
    diff = abs(complex(value) - complex(target))
    if diff == 0:
        return 16
    scale = abs(complex(target)) or 1.0
    return max(0, min(16, int(math.floor(-math.log10(diff / scale)))))


def _jacobian(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray, f0: np.ndarray) -> np.ndarray:
    """中心差分 Jacobian；复参数按全纯函数处理"""
    jac = np.empty((len(f0), len(x)), dtype=f0.dtype if np.iscomplexobj(f0) or np.iscomplexobj(x) else float)
    for k in range(len(x)):
        h = 1e-7 * max(1.0, abs(x[k]))
        forward, backward = x.copy(), x.copy()
        forward[k] += h
        backward[k] -= h
        jac[:, k] = (func(forward) - func(backward)) / (2 * h)
    return jac


def newton_solve(func: Callable[[np.ndarray], np.ndarray], x0: Sequence[Number], tol: float,
                 max_iter: int, complex_valued: bool = False) -> Tuple[np.ndarray, float, List[NewtonStep]]:
    """
    数值 Jacobian 的 Newton 迭代（最小二乘步）

    残差低于 tol 后继续迭代直到步长不再有意义，以获得满精度的根

    Raises:
        ConvergenceError: 迭代上限内残差未降到 tol 以下
    """
    dtype = complex if complex_valued else float
    x = np.array(x0, dtype=dtype)
    trace: List[NewtonStep] = []
    last_step = math.inf
    for iteration in range(max_iter):
        f = np.atleast_1d(np.asarray(func(x), dtype=dtype))
        norm = float(np.linalg.norm(f))
        trace.append(NewtonStep(iteration, x.tolist(), norm, last_step))
        if not math.isfinite(norm):
            raise ConvergenceError("残差出现非有限值", trace=trace)
        if norm < tol:
            tiny_step = last_step <= 1e-15 * (1.0 + float(np.linalg.norm(x)))
            # 残差不再下降即已到舍入水平
            stalled = iteration > 0 and trace[-2].residual <= norm
            if norm == 0.0 or tiny_step or stalled:
                return x, norm, trace
        jac = _jacobian(func, x, f)
        step, *_ = np.linalg.lstsq(jac, f, rcond=None)
        x = x - step
        last_step = float(np.linalg.norm(step))
    f = np.atleast_1d(np.asarray(func(x), dtype=dtype))
    norm = float(np.linalg.norm(f))
    if norm < tol:
        return x, norm, trace
    raise ConvergenceError(f"Newton 迭代 {max_iter} 步后残差 {norm:.3g} 仍大于 {tol}", trace=trace)


def solve_parameter(problem: ParameterProblem, tol: Optional[float] = None,
                    max_iter: Optional[int] = None) -> ParameterSolution:
    """
    从初值出发的 Newton 求解

    Raises:
        ConvergenceError: 发散，或收敛到与目标前缀不符的根（错误吸引域）
    """
    config = tool_config_manager.config
    tol = config.newton_tol if tol is None else tol
    max_iter = config.newton_max_iter if max_iter is None else max_iter

    values, residual, trace = newton_solve(problem.residual, problem.seeds, tol, max_iter, problem.complex_valued)
    solution = ParameterSolution(problem, values, residual, trace)
    if problem.target is not None:
        digits = solution.digits_matched()
        if digits < problem.target_digits:
            raise ConvergenceError(
                f"{problem.family}: 收敛到 {format_point(values[0])}，与目标只有 {digits} 位一致", trace=trace)
    logger.info(f"{problem.family}: {', '.join(f'{n} = {format_point(v)}' for n, v in zip(problem.unknowns, values))}"
                f", 迭代 {len(trace)} 次")
    return solution


@dataclass
class RefinedParameters:
    family: str
    names: Tuple[str, ...]
    seeds: np.ndarray
    values: np.ndarray
    residual: float
    drift: float
    consistent: bool
    iterations: int

    def as_dict(self) -> Dict[str, complex]:
        return dict(zip(self.names, self.values))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'family': self.family,
            'values': {n: format_point(v) for n, v in zip(self.names, self.values)},
            'residual': self.residual,
            'drift': self.drift,
            'consistent': self.consistent,
            'iterations': self.iterations,
        }


def refine_parameters(problem: ParameterProblem, reference: Optional[Sequence[Number]] = None,
                      tol: Optional[float] = None) -> RefinedParameters:
    """
    多元 Newton 精化临界轨道方程组

    结果与参考值（默认为初值）的偏差超过 tol 时只报告不一致，不覆盖参考值
    """
    config = tool_config_manager.config
    tol = config.refine_tol if tol is None else tol
    seeds = np.array(problem.seeds, dtype=complex)
    reference = seeds if reference is None else np.array(reference, dtype=complex)

    values, residual, trace = newton_solve(problem.residual, seeds, tol, config.newton_max_iter, complex_valued=True)
    count = len(reference)
    drift = float(np.max(np.abs(values[:count] - reference)))
    consistent = drift <= tol
    if not consistent:
        logger.warning(f"{problem.family}: 精化结果偏离参考值 {drift:.3g}，保留参考值")
    else:
        logger.info(f"{problem.family}: 精化残差 {residual:.3g}, 偏差 {drift:.3g}")
    return RefinedParameters(problem.family, problem.unknowns, seeds, values, residual, drift, consistent, len(trace))


# ---------------------------------------------------------------------------
# 映射的 JSON 读写
# ---------------------------------------------------------------------------

def _coefficient(raw: Any) -> complex:
    if isinstance(raw, (list, tuple)):
        re, im = raw
        return complex(float(re), float(im))
    if isinstance(raw, str):
        return complex(raw.replace(' ', '').replace('i', 'j'))
    return complex(raw)


def map_from_dict(data: Dict[str, Any], name: str = "") -> RationalMapExpr:
    """{"num": [...], "den": [...]}，系数升序，可写为数、[实部, 虚部] 或复数字符串"""
    try:
        num = PolyExpr.of([_coefficient(c) for c in data['num']])
        den = PolyExpr.of([_coefficient(c) for c in data.get('den', [1])])
    except (KeyError, TypeError, ValueError) as e:
        raise ValueError(f"映射格式错误: {e!r}") from e
    return RationalMapExpr(num, den, str(data.get('name', name))).check()


def map_to_dict(m: RationalMapExpr) -> Dict[str, Any]:
    return {
        'name': m.name,
        'num': [[c.real, c.imag] for c in m.num.coeffs],
        'den': [[c.real, c.imag] for c in m.den.coeffs],
    }


def load_map(path: str) -> RationalMapExpr:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise ValueError(f"无法读取映射文件 {path}: {e}") from e
    return map_from_dict(data, name=path)
