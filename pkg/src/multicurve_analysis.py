#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
谱与图论分析
主特征值、不可约分支、Thurston 阻碍、Levy 圈、增长分类、圈枚举与 Cantor 子多重曲线
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Any, Iterable, Union

import networkx as nx
import numpy as np

from curve_complex import CurveSystem, Orientation, check_stable_subset, sub_system
from multicurve_errors import ClassificationError, ConvergenceError, NotPeriodicError
from pullback import CurveMatrix, counting_matrix, thurston_matrix, sub_matrix
from tool_config import tool_config_manager


logger = logging.getLogger(__name__)

# 阶数不超过 CROSS_CHECK_ORDER 的不可约块用 eigvals 核对幂迭代结果
CROSS_CHECK_ORDER = 6
CROSS_CHECK_TOL = 1e-6


class GrowthKind(str, Enum):
    CONST1 = "Const1"
    BOUNDED = "Bounded"
    COILING = "Coiling"


@dataclass(frozen=True)
class GrowthClass:
    """κ_n(γ) 的增长类型及证据"""
    kind: GrowthKind
    limit: Optional[int] = None
    depth: Optional[int] = None
    witness: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    @property
    def is_coiling(self) -> bool:
        return self.kind is GrowthKind.COILING

    def label(self) -> str:
        if self.kind is GrowthKind.BOUNDED:
            return f"Bounded({self.limit})"
        return self.kind.value

    def to_dict(self) -> Dict[str, Any]:
        data = {'class': self.label(), 'kind': self.kind.value}
        if self.limit is not None:
            data['limit'] = self.limit
        if self.depth is not None:
            data['depth'] = self.depth
        if self.witness:
            data['witness'] = self.witness
        return data


@dataclass(frozen=True)
class CycleEdge:
    """条目实例 words[source][index]"""
    source: str
    index: int
    target: str
    degree: int
    orientation: Orientation


@dataclass(frozen=True)
class Cycle:
    """由条目实例构成的闭路，经过的曲线两两不同"""
    edges: Tuple[CycleEdge, ...]

    @property
    def curves(self) -> Tuple[str, ...]:
        return tuple(e.source for e in self.edges)

    @property
    def degree(self) -> int:
        product = 1
        for e in self.edges:
            product *= e.degree
        return product

    @property
    def orientation(self) -> Orientation:
        result = Orientation.SAME
        for e in self.edges:
            result = result.compose(e.orientation)
        return result

    def __len__(self) -> int:
        return len(self.edges)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'curves': list(self.curves),
            'edges': [[e.source, e.index, e.target] for e in self.edges],
            'degree': self.degree,
            'orientation': self.orientation.value,
        }


@dataclass(frozen=True)
class IrreducibleComponent:
    curves: Tuple[str, ...]
    lam: float

    def to_dict(self) -> Dict[str, Any]:
        return {'curves': list(self.curves), 'lambda': self.lam}


def support_graph(sys: CurveSystem) -> nx.DiGraph:
    """支撑有向图：B[γ][β] > 0 时有边 γ→β，multiplicity 记录 B[γ][β]"""
    graph = nx.DiGraph()
    graph.add_nodes_from(sys.curve_ids)
    for source, _, entry in sys.iter_entries():
        if graph.has_edge(source, entry.target):
            graph[source][entry.target]['multiplicity'] += 1
        else:
            graph.add_edge(source, entry.target, multiplicity=1)
    return graph


def _as_array(matrix: Union[CurveMatrix, np.ndarray, List[List[float]]]) -> np.ndarray:
    if isinstance(matrix, CurveMatrix):
        return matrix.to_array()
    array = np.asarray(matrix, dtype=float)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise ValueError(f"矩阵必须是方阵，当前形状 {array.shape}")
    return array


def _power_iteration(block: np.ndarray, tol: float, max_iter: int) -> float:
    """不可约非负块的 Perron 根：对 block + I 做幂迭代，Collatz–Wielandt 上下界夹逼"""
    shifted = block + np.eye(block.shape[0])
    x = np.ones(block.shape[0])
    trace = []
    for iteration in range(max_iter):
        y = shifted @ x
        ratios = y / x
        lower, upper = float(ratios.min()), float(ratios.max())
        if iteration < 16 or iteration % 1000 == 0:
            trace.append((iteration, lower - 1.0, upper - 1.0))
        if upper - lower < tol:
            return 0.5 * (lower + upper) - 1.0
        x = y / np.linalg.norm(y)
    raise ConvergenceError(f"幂迭代在 {max_iter} 步内未收敛", trace=trace)


def _component_lambda(array: np.ndarray, members: List[int], tol: float, max_iter: int) -> float:
    if len(members) == 1:
        return float(array[members[0], members[0]])
    block = array[np.ix_(members, members)]
    lam = _power_iteration(block, tol, max_iter)
    if len(members) <= CROSS_CHECK_ORDER:
        # 不可约块的 Perron 根是单特征值，eigvals 的误差与 eps 同阶
        reference = float(np.max(np.abs(np.linalg.eigvals(block))))
        if abs(reference - lam) > CROSS_CHECK_TOL * max(1.0, reference):
            raise ConvergenceError(
                f"主特征值交叉核对不一致: 幂迭代 {lam:.12g}, eigvals {reference:.12g}",
                trace=[(len(members), lam, reference)],
            )
    return lam


def _strong_components(array: np.ndarray) -> List[List[int]]:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(array.shape[0]))
    rows, cols = np.nonzero(array > 0)
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return [sorted(c) for c in sorted(nx.strongly_connected_components(graph), key=min)]


def leading_eigenvalue(matrix, tol: Optional[float] = None, max_iter: Optional[int] = None) -> float:
    """
    非负方阵的 Perron 根

    按强连通分支分解后对每个不可约块做平移幂迭代；阶数 ≤ 4 时用特征多项式交叉核对

    Raises:
        ConvergenceError: 幂迭代超过上限，trace 中为迭代记录
    """
    config = tool_config_manager.config
    tol = config.eigen_tol if tol is None else tol
    max_iter = config.eigen_max_iter if max_iter is None else max_iter

    array = _as_array(matrix)
    if array.size == 0:
        return 0.0
    if (array < 0).any():
        raise ValueError("矩阵含负元素")

    lam = max(_component_lambda(array, members, tol, max_iter) for members in _strong_components(array))
    logger.debug(f"主特征值 λ = {lam:.12g}")
    return lam


def spectral_radius_below_one(matrix: CurveMatrix) -> bool:
    """
    精确判定 λ(M) < 1

    I − M 是非奇异 M-矩阵当且仅当其各阶顺序主子式均为正；
    无主元选取的 Gauss 消元中第 k 个主元等于相邻两个顺序主子式之比
    """
    size = len(matrix.ids)
    work = [[Fraction(int(i == j)) - Fraction(matrix.rows[i][j]) for j in range(size)] for i in range(size)]
    for k in range(size):
        pivot = work[k][k]
        if pivot <= 0:
            return False
        for i in range(k + 1, size):
            factor = work[i][k] / pivot
            if factor:
                for j in range(k, size):
                    work[i][j] -= factor * work[k][j]
    return True


def irreducible_components(sys: CurveSystem) -> List[IrreducibleComponent]:
    """支撑有向图的强连通分支及各分支子矩阵的主特征值（按系统顺序）"""
    config = tool_config_manager.config
    matrix = thurston_matrix(sys)
    array = matrix.to_array()
    components = []
    for members in _strong_components(array):
        lam = _component_lambda(array, members, config.eigen_tol, config.eigen_max_iter)
        components.append(IrreducibleComponent(tuple(sys.curve_ids[i] for i in members), lam))
    return components


def is_obstruction(sys: CurveSystem, subset: Optional[Iterable[str]] = None) -> Tuple[bool, float]:
    """
    稳定子集是否构成 Thurston 阻碍

    Returns:
        (λ(M_{Γ′}) ≥ 1, λ)；|λ − 1| 落入精确判定带时由有理运算决定

    Raises:
        StabilityError: 子集不稳定
    """
    config = tool_config_manager.config
    ordered = check_stable_subset(sys, sys.curve_ids if subset is None else subset)
    matrix = sub_matrix(thurston_matrix(sys), ordered)
    lam = leading_eigenvalue(matrix)
    if abs(lam - 1.0) < config.obstruction_exact_band:
        verdict = not spectral_radius_below_one(matrix)
        logger.info(f"λ = {lam:.12g} 接近 1，精确判定结果: {'阻碍' if verdict else '非阻碍'}")
    else:
        verdict = lam >= 1.0 - config.eigen_tol
    return verdict, lam


def _instances(sys: CurveSystem, source: str, target: str) -> List[CycleEdge]:
    return [CycleEdge(source, i, e.target, e.degree, e.orientation)
            for i, e in enumerate(sys.words_for(source)) if e.target == target]


def _expand_cycle(sys: CurveSystem, vertices: List[str], degree_one_only: bool = False) -> List[Cycle]:
    steps = []
    for i, source in enumerate(vertices):
        target = vertices[(i + 1) % len(vertices)]
        options = _instances(sys, source, target)
        if degree_one_only:
            options = [e for e in options if e.degree == 1]
        steps.append(options)
    return [Cycle(tuple(choice)) for choice in itertools.product(*steps)]


def _rotate_to(vertices: List[str], start: str) -> List[str]:
    k = vertices.index(start)
    return vertices[k:] + vertices[:k]


def _cycle_sort_key(cycle: Cycle):
    return (len(cycle), cycle.curves, tuple(e.index for e in cycle.edges))


def find_levy_cycle(sys: CurveSystem) -> Optional[Cycle]:
    """次数为 1 的条目实例构成的圈（最短者，按字典序打破平局）"""
    graph = nx.DiGraph()
    graph.add_nodes_from(sys.curve_ids)
    for source, _, entry in sys.iter_entries():
        if entry.degree == 1:
            graph.add_edge(source, entry.target)

    order = {cid: i for i, cid in enumerate(sys.curve_ids)}
    best = None
    for vertices in nx.simple_cycles(graph):
        vertices = _rotate_to(list(vertices), min(vertices, key=order.__getitem__))
        cycle = _expand_cycle(sys, vertices, degree_one_only=True)[0]
        if best is None or _cycle_sort_key(cycle) < _cycle_sort_key(best):
            best = cycle
    if best is not None:
        logger.info(f"找到 Levy 圈: {' → '.join(best.curves)}")
    return best


def periodic_classes(sys: CurveSystem) -> Tuple[str, ...]:
    """位于某个圈上的曲线（系统顺序）"""
    graph = support_graph(sys)
    periodic = set()
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            periodic |= component
        else:
            (v,) = component
            if graph.has_edge(v, v):
                periodic.add(v)
    return tuple(cid for cid in sys.curve_ids if cid in periodic)


def find_obstruction(sys: CurveSystem) -> Optional[Tuple[Tuple[str, ...], float]]:
    """
    寻找一个构成阻碍的稳定子集

    取 λ ≥ 1 的不可约分支，返回其祖先闭包（稳定且预稳定）及 λ；λ(M_Γ) < 1 时返回 None
    """
    verdict, _ = is_obstruction(sys)
    if not verdict:
        return None
    graph = support_graph(sys)
    components = sorted(irreducible_components(sys), key=lambda c: -c.lam)
    for component in components:
        closure = set(component.curves)
        for cid in component.curves:
            closure |= nx.ancestors(graph, cid)
        ordered = tuple(cid for cid in sys.curve_ids if cid in closure)
        try:
            found, lam = is_obstruction(sys, ordered)
        except ValueError:
            continue
        if found:
            logger.info(f"阻碍子集 {list(ordered)}, λ = {lam:.12g}")
            return ordered, lam
    return None


def cycles_through(sys: CurveSystem, curve_id: str) -> List[Cycle]:
    """经过 γ 的全部简单圈（条目实例层面），每个圈从 γ 开始"""
    graph = support_graph(sys)
    component = next(c for c in nx.strongly_connected_components(graph) if curve_id in c)
    local = graph.subgraph(component)
    cycles = []
    for vertices in nx.simple_cycles(local):
        vertices = list(vertices)
        if curve_id not in vertices:
            continue
        cycles.extend(_expand_cycle(sys, _rotate_to(vertices, curve_id)))
    cycles.sort(key=_cycle_sort_key)
    return cycles


def has_unique_cycle(sys: CurveSystem) -> bool:
    """每条周期曲线恰好位于一个圈上"""
    return all(len(cycles_through(sys, cid)) == 1 for cid in periodic_classes(sys))


def generated_multicurve(sys: CurveSystem, curve_id: str) -> Tuple[str, ...]:
    """
    周期曲线 γ 生成的完全稳定多重曲线 Λ_γ：γ 及所有能走到 γ 的曲线

    Raises:
        NotPeriodicError: γ 不在任何圈上
    """
    if curve_id not in periodic_classes(sys):
        raise NotPeriodicError(f"曲线 {curve_id} 不是周期的")
    members = nx.ancestors(support_graph(sys), curve_id) | {curve_id}
    return tuple(cid for cid in sys.curve_ids if cid in members)


def _walk_counts(sys: CurveSystem, reachable: List[str], steps: int) -> List[Dict[str, int]]:
    """W_0 = 𝟙，W_{k+1} = B·W_k（限制在可达集上）"""
    history = [{v: 1 for v in reachable}]
    for _ in range(steps):
        previous = history[-1]
        history.append({v: sum(previous[e.target] for e in sys.words_for(v)) for v in reachable})
    return history


@dataclass
class GrowthContext:
    """一个系统上所有曲线共用的图信息"""
    graph: nx.DiGraph
    periodic: Tuple[str, ...]
    branching: frozenset
    coiling: frozenset


def _backward_closure(graph: nx.DiGraph, seeds: Iterable[str]) -> set:
    closed = set(seeds)
    stack = list(closed)
    while stack:
        v = stack.pop()
        for u in graph.predecessors(v):
            if u not in closed:
                closed.add(u)
                stack.append(u)
    return closed


def growth_context(sys: CurveSystem) -> GrowthContext:
    """Coiling 集合 = 能走到“可到达分叉顶点的圈顶点”的曲线"""
    graph = support_graph(sys)
    periodic = periodic_classes(sys)
    branching = frozenset(cid for cid in sys.curve_ids if len(sys.words_for(cid)) >= 2)
    feeds_branching = _backward_closure(graph, branching)
    hot = [c for c in periodic if c in feeds_branching]
    return GrowthContext(graph, periodic, branching, frozenset(_backward_closure(graph, hot)))


def classify_growth(sys: CurveSystem, curve_id: str, context: Optional[GrowthContext] = None) -> GrowthClass:
    """
    κ_n(γ) 的增长分类

    图判据：存在从 γ 可达的圈顶点 c，以及从 c 可达（含 c 本身）且出重数 ≥ 2 的顶点 v 时为 Coiling；
    否则迭代 W_n = Bⁿ·𝟙 至不动点得到 Const1 或 Bounded。两种方法必须一致

    Raises:
        ClassificationError: 图判据与迭代结果矛盾
    """
    context = context or growth_context(sys)
    graph = context.graph
    reachable_set = nx.descendants(graph, curve_id) | {curve_id}
    reachable = [cid for cid in sys.curve_ids if cid in reachable_set]

    witness = None
    if curve_id in context.coiling:
        for c in context.periodic:
            if c not in reachable_set:
                continue
            downstream = nx.descendants(graph, c) | {c}
            v = next((b for b in sys.curve_ids if b in context.branching and b in downstream), None)
            if v is not None:
                cycle = shortest_cycle_through(sys, c, graph)
                witness = {'branching': v, 'cycle': cycle.to_dict()}
                break
        if witness is None:
            raise ClassificationError(f"{curve_id}: Coiling 集合与逐顶点判据不一致")

    size = len(reachable)
    if witness is not None:
        history = _walk_counts(sys, reachable, 2 * size + 2)
        for k in range(1, len(history)):
            if history[k] == history[k - 1]:
                raise ClassificationError(
                    f"{curve_id}: 图判据为 Coiling，但 W 在第 {k} 步达到不动点")
        witness['kappa_tail'] = history[-1][curve_id]
        return GrowthClass(GrowthKind.COILING, witness=witness)

    history = _walk_counts(sys, reachable, size + 1)
    for k in range(1, len(history)):
        if history[k] == history[k - 1]:
            limit = history[k][curve_id]
            # 稳定深度：κ_n 首次达到极限的 n
            depth = next(n for n in range(len(history)) if history[n][curve_id] == limit)
            if limit == 1:
                return GrowthClass(GrowthKind.CONST1, limit=1, depth=depth)
            return GrowthClass(GrowthKind.BOUNDED, limit=limit, depth=depth)
    raise ClassificationError(f"{curve_id}: 图判据为有界，但 W 在 {size + 1} 步内未达到不动点")


def growth_table(sys: CurveSystem) -> Dict[str, GrowthClass]:
    """全部曲线的增长分类（共用一次图预处理）"""
    context = growth_context(sys)
    return {cid: classify_growth(sys, cid, context) for cid in sys.curve_ids}


def shortest_cycle_through(sys: CurveSystem, curve_id: str, graph: Optional[nx.DiGraph] = None) -> Cycle:
    """经过 γ 的最短圈（条目实例取每步第一个）"""
    graph = graph if graph is not None else support_graph(sys)
    best = None
    for successor in graph.successors(curve_id):
        if not nx.has_path(graph, successor, curve_id):
            continue
        path = nx.shortest_path(graph, successor, curve_id)
        vertices = [curve_id] + path[:-1]
        if best is None or len(vertices) < len(best):
            best = vertices
    if best is None:
        raise NotPeriodicError(f"曲线 {curve_id} 不是周期的")
    return _expand_cycle(sys, best)[0]


def find_cantor_submulticurve(sys: CurveSystem) -> Optional[Tuple[str, ...]]:
    """
    Cantor 子多重曲线

    取所在强连通分支不是单重简单圈的字典序最小顶点，返回它生成的 Λ；
    返回前在子系统中重新核对完全稳定性与每条曲线都是 Coiling
    """
    graph = support_graph(sys)
    periodic = set(periodic_classes(sys))
    candidates = []
    for component in nx.strongly_connected_components(graph):
        if not component & periodic:
            continue
        internal = sum(1 for v in component for e in sys.words_for(v) if e.target in component)
        if internal > len(component):
            candidates.append(min(component))
    if not candidates:
        return None

    vertex = min(candidates)
    members = generated_multicurve(sys, vertex)
    reduced = sub_system(sys, members)
    for cid in members:
        if not classify_growth(reduced, cid).is_coiling:
            raise ClassificationError(f"Cantor 子多重曲线 {list(members)} 中 {cid} 不是 Coiling")
    logger.info(f"Cantor 子多重曲线: {list(members)}")
    return members
