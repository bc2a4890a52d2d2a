#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
内置映射族
两个调节（tuning）例子中的 R、g₀、g，以及它们的临界轨道图、参数问题与自动成立的轨道条件
"""

import cmath
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Any

import numpy as np

from pcf_numerics import (
    INF, PolyExpr, RationalMapExpr, CriticalPortrait, ParameterProblem,
    chordal_distance, critical_points, eval_map, wronskian,
)


logger = logging.getLogger(__name__)

Params = Dict[str, complex]


@dataclass(frozen=True)
class DeclaredOrbit:
    """声明的临界轨道：标签序列，最后一项重复前面某项"""
    label: str
    multiplicity: int
    orbit: Tuple[str, ...]


@dataclass(frozen=True)
class AutomaticCondition:
    """对任意参数成立的轨道条件；check 返回归一化残差"""
    description: str
    check: Callable[[Params], float]


@dataclass
class MapFamily:
    id: str
    description: str
    params: Dict[str, float]
    builder: Callable[[Params], RationalMapExpr]
    known_points: Callable[[Params], Dict[str, complex]]
    declared: Tuple[DeclaredOrbit, ...]
    automatic: Tuple[AutomaticCondition, ...] = ()
    sample_ranges: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    def resolve(self, params: Optional[Params] = None) -> Params:
        merged: Params = {k: complex(v) for k, v in self.params.items()}
        if params:
            merged.update({k: complex(v) for k, v in params.items()})
        return merged

    def build(self, params: Optional[Params] = None) -> RationalMapExpr:
        m = self.builder(self.resolve(params))
        return RationalMapExpr(m.num, m.den, self.id)

    def sample_params(self, rng: np.random.Generator) -> Params:
        return {k: complex(rng.uniform(lo, hi)) for k, (lo, hi) in self.sample_ranges.items()}


def _orbit(*labels: str) -> Tuple[str, ...]:
    return tuple(labels)


# ---------------------------------------------------------------------------
# 例一：三次多项式 R 与调节后的 g₀，手术后的五次映射 g
# ---------------------------------------------------------------------------

EX1_NU = -0.1219358974084060
EX1_G = {'a': -0.1203582660251960, 'b': 0.1369645575161714, 'c': 0.9975907956140505, 'd': 1.0001239392656081}


def _ex1_R(_: Params) -> RationalMapExpr:
    return RationalMapExpr(PolyExpr.of([0, 0, 27 / 4, -27 / 4]), PolyExpr.of([1]))


def ex1_mu(nu: complex) -> complex:
    return (1 + nu + nu ** 2) / (1 + nu)


def _ex1_g0(p: Params) -> RationalMapExpr:
    nu = p['nu']
    k = (1 + nu) / nu
    return RationalMapExpr(PolyExpr.of([nu, 0, -k * ex1_mu(nu), k]), PolyExpr.of([1]))


def ex1_q(a: complex, b: complex, c: complex, d: complex) -> complex:
    """使 0 成为临界点的 q"""
    return d * (3 * a * b + a * c + b * c) / (a * b * c)


def _ex1_g(p: Params) -> RationalMapExpr:
    a, b, c, d = p['a'], p['b'], p['c'], p['d']
    num = PolyExpr.from_roots([a, b, c, c, c], scale=-d)
    den = PolyExpr.of([d, -ex1_q(a, b, c, d), 1]).scaled(b * c ** 3)
    return RationalMapExpr(num, den)


def _ex1_g_zero_critical(p: Params) -> float:
    m = _ex1_g(p)
    dn, dd = m.num.derivative(), m.den.derivative()
    scale = abs(dn(0) * m.den(0)) + abs(m.num(0) * dd(0))
    return abs(complex(wronskian(m)(0))) / scale


# ---------------------------------------------------------------------------
# 例二：偶映射 R 与 g₀，手术后的六次映射 g
# ---------------------------------------------------------------------------

EX2_NU = -0.4287815744562657
EX2_G = {'a': 0.1266022073620638, 'b': -0.0469758128977771, 'c': -0.0327926126839635}


def _ex2_R(_: Params) -> RationalMapExpr:
    return RationalMapExpr(PolyExpr.of([0, 0, 2]), PolyExpr.of([1, 0, 0, 0, 1]))


def _ex2_g0(p: Params) -> RationalMapExpr:
    nu = p['nu']
    return RationalMapExpr(
        PolyExpr.of([-nu ** 2, 0, 1]),
        PolyExpr.of([-nu, 0, -(2 * nu ** 2 - 2 * nu - 1), 0, nu * (nu - 1)]),
    )


def ex2_c0(nu: complex) -> complex:
    return 1j * cmath.sqrt(1 - 2 * nu ** 2)


def _ex2_g(p: Params) -> RationalMapExpr:
    a, b, c = p['a'], p['b'], p['c']
    num = PolyExpr.from_roots([1, 1, -1, -1, a, -a], scale=c)
    den = PolyExpr.of([-a * c, 0, b, 0, 1])
    return RationalMapExpr(num, den)


def _backward_residual(m: RationalMapExpr, z: complex, w: complex) -> float:
    """g(z) = w 清除分母后的残差 |num(z) − w·den(z)|，以逐项绝对值之和归一化"""
    z, w = complex(z), complex(w)
    gap = abs(complex(m.num(z)) - w * complex(m.den(z)))
    scale = (float(np.polynomial.polynomial.polyval(abs(z), np.abs(m.num.array)))
             + abs(w) * float(np.polynomial.polynomial.polyval(abs(z), np.abs(m.den.array))))
    return gap / scale if scale > 0 else gap


def _value_condition(builder: Callable[[Params], RationalMapExpr], point: Callable[[Params], complex],
                     target: Callable[[Params], complex]) -> Callable[[Params], float]:
    return lambda p: _backward_residual(builder(p), point(p), target(p))


FAMILIES: Dict[str, MapFamily] = {
    'ex1.R': MapFamily(
        id='ex1.R',
        description='R(z) = −27/4·z²(z−1)',
        params={},
        builder=_ex1_R,
        known_points=lambda p: {'inf': INF, '0': 0j, '1': 1 + 0j, 'c0': 2 / 3 + 0j},
        declared=(
            DeclaredOrbit('inf', 2, _orbit('inf', 'inf')),
            DeclaredOrbit('0', 1, _orbit('0', '0')),
            DeclaredOrbit('c0', 1, _orbit('c0', '1', '0', '0')),
        ),
    ),
    'ex1.g0': MapFamily(
        id='ex1.g0',
        description='g₀(z) = ((1+ν)/ν)·z²(z−μ) + ν, μ = (1+ν+ν²)/(1+ν)',
        params={'nu': EX1_NU},
        builder=_ex1_g0,
        known_points=lambda p: {'inf': INF, '0': 0j, '1': 1 + 0j, 'nu': p['nu'], 'c0': 2 * ex1_mu(p['nu']) / 3},
        declared=(
            DeclaredOrbit('inf', 2, _orbit('inf', 'inf')),
            DeclaredOrbit('0', 1, _orbit('0', 'nu', '0')),
            DeclaredOrbit('c0', 1, _orbit('c0', '1', '0', 'nu', '0')),
        ),
        automatic=(
            AutomaticCondition('g₀(0) = ν', _value_condition(_ex1_g0, lambda p: 0j, lambda p: p['nu'])),
            AutomaticCondition('g₀(ν) = 0', _value_condition(_ex1_g0, lambda p: p['nu'], lambda p: 0j)),
            AutomaticCondition('g₀(1) = 0', _value_condition(_ex1_g0, lambda p: 1 + 0j, lambda p: 0j)),
        ),
        sample_ranges={'nu': (-0.45, -0.05)},
    ),
    'ex1.g': MapFamily(
        id='ex1.g',
        description='g(z) = −d(z−a)(z−b)(z−c)³ / (bc³(z²−qz+d)), q = d(3ab+ac+bc)/(abc)',
        params=dict(EX1_G),
        builder=_ex1_g,
        known_points=lambda p: {'inf': INF, '0': 0j, '1': 1 + 0j, 'a': p['a'], 'c': p['c']},
        declared=(
            DeclaredOrbit('inf', 2, _orbit('inf', 'inf')),
            DeclaredOrbit('c', 2, _orbit('c', '0', 'a', '0')),
            DeclaredOrbit('0', 1, _orbit('0', 'a', '0')),
            DeclaredOrbit('1', 1, _orbit('1', '1')),
            DeclaredOrbit('c1', 1, _orbit('c1', 'a', '0', 'a')),
            DeclaredOrbit('c2', 1, _orbit('c2', '1', '1')),
        ),
        automatic=(
            AutomaticCondition('g(c) = 0', _value_condition(_ex1_g, lambda p: p['c'], lambda p: 0j)),
            AutomaticCondition('g(0) = a', _value_condition(_ex1_g, lambda p: 0j, lambda p: p['a'])),
            AutomaticCondition('g(a) = 0', _value_condition(_ex1_g, lambda p: p['a'], lambda p: 0j)),
            AutomaticCondition("g'(0) = 0", _ex1_g_zero_critical),
        ),
        sample_ranges={'a': (-0.3, -0.05), 'b': (0.05, 0.3), 'c': (0.5, 1.5), 'd': (0.5, 1.5)},
    ),
    'ex2.R': MapFamily(
        id='ex2.R',
        description='R(z) = 2z²/(z⁴+1)',
        params={},
        builder=_ex2_R,
        known_points=lambda p: {'inf': INF, '0': 0j, '1': 1 + 0j, '-1': -1 + 0j, 'i': 1j, '-i': -1j},
        declared=(
            DeclaredOrbit('inf', 1, _orbit('inf', '0', '0')),
            DeclaredOrbit('0', 1, _orbit('0', '0')),
            DeclaredOrbit('1', 1, _orbit('1', '1')),
            DeclaredOrbit('-1', 1, _orbit('-1', '1', '1')),
            DeclaredOrbit('i', 1, _orbit('i', '-1', '1', '1')),
            DeclaredOrbit('-i', 1, _orbit('-i', '-1', '1', '1')),
        ),
    ),
    'ex2.g0': MapFamily(
        id='ex2.g0',
        description='g₀(z) = (z²−ν²) / (ν(ν−1)z⁴ − (2ν²−2ν−1)z² − ν)',
        params={'nu': EX2_NU},
        builder=_ex2_g0,
        known_points=lambda p: {'inf': INF, '0': 0j, '1': 1 + 0j, '-1': -1 + 0j, 'nu': p['nu'],
                                'c0': ex2_c0(p['nu']), '-c0': -ex2_c0(p['nu'])},
        declared=(
            DeclaredOrbit('inf', 1, _orbit('inf', '0', 'nu', '0')),
            DeclaredOrbit('0', 1, _orbit('0', 'nu', '0')),
            DeclaredOrbit('1', 1, _orbit('1', '1')),
            DeclaredOrbit('-1', 1, _orbit('-1', '1', '1')),
            DeclaredOrbit('c0', 1, _orbit('c0', '-1', '1', '1')),
            DeclaredOrbit('-c0', 1, _orbit('-c0', '-1', '1', '1')),
        ),
        automatic=(
            AutomaticCondition('g₀(0) = ν', _value_condition(_ex2_g0, lambda p: 0j, lambda p: p['nu'])),
            AutomaticCondition('g₀(ν) = 0', _value_condition(_ex2_g0, lambda p: p['nu'], lambda p: 0j)),
            AutomaticCondition('g₀(1) = 1', _value_condition(_ex2_g0, lambda p: 1 + 0j, lambda p: 1 + 0j)),
            AutomaticCondition('g₀(−1) = 1', _value_condition(_ex2_g0, lambda p: -1 + 0j, lambda p: 1 + 0j)),
        ),
        sample_ranges={'nu': (-0.6, -0.1)},
    ),
    'ex2.g': MapFamily(
        id='ex2.g',
        description='g(z) = c(z²−1)²(z²−a²) / (z⁴+bz²−ac)',
        params=dict(EX2_G),
        builder=_ex2_g,
        known_points=lambda p: {'inf': INF, '0': 0j, '1': 1 + 0j, '-1': -1 + 0j, 'a': p['a']},
        declared=(
            DeclaredOrbit('inf', 1, _orbit('inf', 'inf')),
            DeclaredOrbit('0', 1, _orbit('0', 'a', '0')),
            DeclaredOrbit('1', 1, _orbit('1', '0', 'a', '0')),
            DeclaredOrbit('-1', 1, _orbit('-1', '0', 'a', '0')),
            DeclaredOrbit('s', 1, _orbit('s', '-c1', 'c1', 'c1')),
            DeclaredOrbit('-s', 1, _orbit('-s', '-c1', 'c1', 'c1')),
            DeclaredOrbit('c1', 1, _orbit('c1', 'c1')),
            DeclaredOrbit('-c1', 1, _orbit('-c1', 'c1', 'c1')),
            DeclaredOrbit('c2', 1, _orbit('c2', 'a', '0', 'a')),
            DeclaredOrbit('-c2', 1, _orbit('-c2', 'a', '0', 'a')),
        ),
        automatic=(
            AutomaticCondition('g(±1) = 0', lambda p: max(_backward_residual(_ex2_g(p), 1, 0),
                                                          _backward_residual(_ex2_g(p), -1, 0))),
            AutomaticCondition('g(0) = a', _value_condition(_ex2_g, lambda p: 0j, lambda p: p['a'])),
            AutomaticCondition('g(a) = 0', _value_condition(_ex2_g, lambda p: p['a'], lambda p: 0j)),
        ),
        sample_ranges={'a': (0.05, 0.3), 'b': (-0.1, 0.1), 'c': (-0.1, -0.01)},
    ),
}


def get_family(family_id: str) -> MapFamily:
    try:
        return FAMILIES[family_id]
    except KeyError:
        raise ValueError(f"未知映射族 {family_id}，可选: {', '.join(FAMILIES)}") from None


def build_map(family_id: str, params: Optional[Params] = None) -> RationalMapExpr:
    return get_family(family_id).build(params)


def match_portrait(portrait: CriticalPortrait, family_id: str, params: Optional[Params] = None,
                   tol: float = 1e-6) -> List[str]:
    """
    将数值轨道与声明的轨道图比较

    轨道点按弦距离聚类，已知标签固定到对应的类，其余标签单射地回溯分配

    Returns:
        问题列表，为空表示完全一致
    """
    family = get_family(family_id)
    problems: List[str] = []
    if not portrait.pcf:
        problems.append("存在未闭合的临界轨道")
        return problems

    representatives: List[complex] = []

    def cluster_of(z: complex) -> int:
        for i, r in enumerate(representatives):
            if chordal_distance(z, r) < tol:
                return i
        representatives.append(z)
        return len(representatives) - 1

    sequences = [(o.multiplicity, tuple(cluster_of(z) for z in o.orbit)) for o in portrait.orbits]

    used_labels = {label for d in family.declared for label in d.orbit}
    fixed: Dict[str, int] = {}
    for label, value in family.known_points(family.resolve(params)).items():
        if label not in used_labels:
            continue
        matches = [i for i, r in enumerate(representatives) if chordal_distance(value, r) < tol]
        if not matches:
            problems.append(f"已知点 {label} 不在数值轨道中")
        else:
            fixed[label] = matches[0]
    if len(sequences) != len(family.declared):
        problems.append(f"临界点个数 {len(sequences)} 与声明的 {len(family.declared)} 不符")
    if problems:
        return problems

    def assign(k: int, used: frozenset, mapping: Dict[str, int]) -> bool:
        if k == len(family.declared):
            return True
        declared = family.declared[k]
        for j, (multiplicity, sequence) in enumerate(sequences):
            if j in used or multiplicity != declared.multiplicity or len(sequence) != len(declared.orbit):
                continue
            trial = dict(mapping)
            ok = True
            for label, cluster in zip(declared.orbit, sequence):
                if label in trial:
                    ok = trial[label] == cluster
                elif cluster in trial.values():
                    ok = False
                else:
                    trial[label] = cluster
                if not ok:
                    break
            if ok and assign(k + 1, used | {j}, trial):
                return True
        return False

    if not assign(0, frozenset(), fixed):
        problems.append("数值轨道图与声明的轨道图不同构")
    return problems


# ---------------------------------------------------------------------------
# 参数问题
# ---------------------------------------------------------------------------

def _ex1_nu_residual(x: np.ndarray) -> np.ndarray:
    nu = x[0]
    m = _ex1_g0({'nu': nu})
    return np.array([(eval_map(m, 2 * ex1_mu(nu) / 3) - 1).real])


def _ex2_nu_residual(x: np.ndarray) -> np.ndarray:
    nu = x[0]
    m = _ex2_g0({'nu': nu})
    return np.array([(eval_map(m, ex2_c0(nu)) + 1).real])


PARAMETER_PROBLEMS: Dict[str, Callable[[], ParameterProblem]] = {
    '1': lambda: ParameterProblem(
        family='ex1.g0',
        unknowns=('nu',),
        residual=_ex1_nu_residual,
        seeds=(-0.12,),
        conditions=('g₀(2μ/3) = 1',),
        target=(EX1_NU,),
    ),
    '2': lambda: ParameterProblem(
        family='ex2.g0',
        unknowns=('nu',),
        residual=_ex2_nu_residual,
        seeds=(-0.43,),
        conditions=('g₀(i√(1−2ν²)) = −1',),
        target=(EX2_NU,),
    ),
    'trivial': lambda: ParameterProblem(
        family='z²−1',
        unknowns=('z',),
        residual=lambda x: np.array([x[0] ** 2 - 1]),
        seeds=(1.5,),
        conditions=('z² − 1 = 0',),
        target=(1.0,),
    ),
}


def parameter_problem(key: str, seed: Optional[float] = None, digits: Optional[int] = None) -> ParameterProblem:
    try:
        problem = PARAMETER_PROBLEMS[str(key)]()
    except KeyError:
        raise ValueError(f"未知参数问题 {key}，可选: {', '.join(PARAMETER_PROBLEMS)}") from None
    if seed is not None:
        problem.seeds = (seed,)
    if digits is not None:
        problem.target_digits = digits
    return problem


def _pick(candidates: List[complex], score: Callable[[complex], float]) -> complex:
    """得分最小的候选；±对称时取实部（其次虚部）较大者"""
    best = min(score(z) for z in candidates)
    close = [z for z in candidates if score(z) <= best + 1e-6]
    return max(close, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def _free_critical_points(m: RationalMapExpr, known: List[complex]) -> List[complex]:
    return [c.point for c in critical_points(m)
            if not c.at_infinity and all(abs(c.point - k) > 1e-6 for k in known)]


def _ex1_refinement(params: Params) -> Tuple[Tuple[str, ...], Callable[[np.ndarray], np.ndarray], List[complex], Tuple[str, ...]]:
    m = _ex1_g(params)
    free = _free_critical_points(m, [0j, 1 + 0j, params['c']])
    c1 = _pick(free, lambda z: abs(eval_map(m, z) - params['a']))
    c2 = _pick([z for z in free if abs(z - c1) > 1e-6], lambda z: abs(eval_map(m, z) - 1))

    def residual(x: np.ndarray) -> np.ndarray:
        a, b, c, d, z1, z2 = x
        g = _ex1_g({'a': a, 'b': b, 'c': c, 'd': d})
        w = wronskian(g)
        return np.array([
            g.num(1) - g.den(1),
            w(1),
            w(z1),
            g.num(z1) - a * g.den(z1),
            w(z2),
            g.num(z2) - g.den(z2),
        ], dtype=complex)

    conditions = ('g(1) = 1', "g'(1) = 0", "g'(c₁) = 0", 'g(c₁) = a', "g'(c₂) = 0", 'g(c₂) = 1')
    return ('a', 'b', 'c', 'd', 'c1', 'c2'), residual, [c1, c2], conditions


def _ex2_refinement(params: Params) -> Tuple[Tuple[str, ...], Callable[[np.ndarray], np.ndarray], List[complex], Tuple[str, ...]]:
    m = _ex2_g(params)
    free = _free_critical_points(m, [0j, 1 + 0j, -1 + 0j])
    c1 = _pick(free, lambda z: abs(eval_map(m, z) - z))
    rest = [z for z in free if abs(z - c1) > 1e-6 and abs(z + c1) > 1e-6]
    s = _pick(rest, lambda z: abs(eval_map(m, z) + c1))
    c2 = _pick([z for z in rest if abs(z - s) > 1e-6 and abs(z + s) > 1e-6],
               lambda z: abs(eval_map(m, z) - params['a']))

    def residual(x: np.ndarray) -> np.ndarray:
        a, b, c, zs, z1, z2 = x
        g = _ex2_g({'a': a, 'b': b, 'c': c})
        w = wronskian(g)
        return np.array([
            w(zs),
            g.num(zs) + z1 * g.den(zs),
            w(z1),
            g.num(z1) - z1 * g.den(z1),
            w(z2),
            g.num(z2) - a * g.den(z2),
        ], dtype=complex)

    conditions = ("g'(s) = 0", 'g(s) = −c₁', "g'(c₁) = 0", 'g(c₁) = c₁', "g'(c₂) = 0", 'g(c₂) = a')
    return ('a', 'b', 'c', 's', 'c1', 'c2'), residual, [s, c1, c2], conditions


REFINEMENTS = {
    'ex1.g': _ex1_refinement,
    'ex2.g': _ex2_refinement,
}


def refinement_problem(family_id: str, params: Optional[Params] = None) -> Tuple[ParameterProblem, Tuple[complex, ...]]:
    """
    构造精化问题：未知量为映射参数与非自动临界点，方程为清除分母后的轨道条件与临界条件

    Returns:
        (问题, 参考参数值)；参考值恒为内置常数
    """
    if family_id not in REFINEMENTS:
        raise ValueError(f"映射族 {family_id} 没有精化方程组，可选: {', '.join(REFINEMENTS)}")
    family = get_family(family_id)
    seeds = family.resolve(params)
    names, residual, free_seeds, conditions = REFINEMENTS[family_id](seeds)
    param_names = list(family.params)
    problem = ParameterProblem(
        family=family_id,
        unknowns=names,
        residual=residual,
        seeds=tuple(seeds[k] for k in param_names) + tuple(free_seeds),
        conditions=conditions,
        complex_valued=True,
    )
    reference = tuple(complex(family.params[k]) for k in param_names)
    logger.debug(f"{family_id}: {len(conditions)} 个条件, {len(names)} 个未知量")
    return problem, reference
