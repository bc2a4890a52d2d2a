#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
分解构造与证书
细化到二分性、分离报告、重整化证书、可重整片搜索以及 coiled Fatou 检测
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Any, Set

import networkx as nx

from curve_complex import (
    CurveSystem, CurveClass, MarkedPoint, Piece, PullbackEntry, Orientation,
    check_stable_subset, curve_sides, dual_tree, piece_partition,
    piece_period, sub_system, validate,
)
from multicurve_analysis import (
    GrowthClass, GrowthKind, classify_growth, find_cantor_submulticurve, generated_multicurve,
    growth_context, growth_table, leading_eigenvalue, shortest_cycle_through, support_graph,
)
from multicurve_errors import (
    ClassificationError, NotPeriodicError, RealizabilityError,
)
from pullback import level_word, power_system, thurston_matrix


logger = logging.getLogger(__name__)


@dataclass
class RefinementResult:
    """细化结果"""
    system: CurveSystem
    N: int
    dichotomy: bool
    growth: Dict[str, GrowthClass]
    residual_bounded: Tuple[str, ...]
    lam_input: float
    lam_refined: float

    def projection(self, refined_id: str) -> str:
        return self.system.refinement['projections'][refined_id]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'N': self.N,
            'dichotomy': self.dichotomy,
            'residual_bounded': list(self.residual_bounded),
            'lambda_input': self.lam_input,
            'lambda_refined': self.lam_refined,
            'growth': {cid: g.label() for cid, g in self.growth.items()},
        }


@dataclass
class SeparationRow:
    curve: str
    left_piece: str
    right_piece: str
    growth: str
    verdict: str  # disjoint | touching
    projection: Optional[str] = None


@dataclass
class SeparationReport:
    """每条曲线两侧小 Julia 集是否分离"""
    rows: List[SeparationRow]
    refined: bool = False
    N: Optional[int] = None

    def verdict(self, curve_id: str) -> str:
        return next(row.verdict for row in self.rows if row.curve == curve_id)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'refined': self.refined,
            'N': self.N,
            'rows': [row.__dict__.copy() for row in self.rows],
        }


@dataclass
class RenormCertificate:
    """周期片的重整化证书"""
    piece: str
    period: int
    boundary: Dict[str, str]
    theorem: str
    statement: str
    verified: bool
    iterate: int = 1
    curves: Tuple[str, ...] = ()
    witnesses: Dict[str, Any] = field(default_factory=dict)
    synthetic_points: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    boundary_degrees: Dict[str, int] = field(default_factory=dict)
    interior_points: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    @property
    def marked_set(self) -> Tuple[str, ...]:
        return tuple(self.interior_points) + tuple(self.synthetic_points)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'theorem': self.theorem,
            'statement': self.statement,
            'piece': self.piece,
            'period': self.period,
            'iterate': self.iterate,
            'curves': list(self.curves),
            'boundary': dict(self.boundary),
            'witnesses': self.witnesses,
            'verified': self.verified,
        }
        if self.synthetic_points or self.interior_points:
            data['marked_set'] = list(self.marked_set)
            data['synthetic_points'] = self.synthetic_points
            data['interior_points'] = self.interior_points
            data['boundary_degrees'] = self.boundary_degrees
        return data


@dataclass
class RenormalizablePiece:
    subset: Tuple[str, ...]
    piece: str
    certificate: RenormCertificate
    iterate: int = 1
    cantor: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'subset': list(self.subset),
            'piece': self.piece,
            'iterate': self.iterate,
            'cantor': self.cantor,
            'certificate': self.certificate.to_dict(),
        }


@dataclass
class CoiledFatouCertificate:
    fixed_point: str
    alpha: str
    beta: str
    theorem: str = "coiled-fatou-jordan"
    statement: str = ""
    verified: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'theorem': self.theorem,
            'statement': self.statement,
            'witnesses': {'fixed_point': self.fixed_point, 'alpha': self.alpha, 'beta': self.beta},
            'verified': self.verified,
        }


# ---------------------------------------------------------------------------
# 细化
# ---------------------------------------------------------------------------

def dichotomy_depth(sys: CurveSystem) -> int:
    """非 Coiling 非周期曲线到可达周期曲线的最短路长度的最大值，至少为 1"""
    context = growth_context(sys)
    graph = context.graph
    periodic = set(context.periodic)
    depth = 1
    for cid in sys.curve_ids:
        if cid in periodic or cid in context.coiling:
            continue
        lengths = nx.single_source_shortest_path_length(graph, cid)
        for target, length in lengths.items():
            if target in periodic:
                depth = max(depth, length)
    return depth


def _walk_id(walk: Tuple[Tuple[str, int], ...]) -> str:
    return f"{walk[0][0]}[{'.'.join(str(index) for _, index in walk)}]"


def refine_to_dichotomy(sys: CurveSystem, N: Optional[int] = None) -> RefinementResult:
    """
    细化为长度 N 的条目路径类

    路径 s = (e0..e_{N-1}) 的原像列出 (e1..e_N)，e_N 取遍 target(e_{N-1}) 的条目，
    次数与定向取 e0 的；同一投影的相邻拷贝之间加一个缝片和一个合成标记点

    Returns:
        RefinementResult；残留的 Bounded 类只报告不隐藏
    """
    N = dichotomy_depth(sys) if N is None else N
    if N < 1:
        raise ValueError(f"N 必须 ≥ 1，当前为 {N}")
    logger.info(f"细化 {sys.name or '<unnamed>'}: N = {N}")

    # 每条原曲线的平行拷贝，按 N 层词顺序
    copies: Dict[str, List[Tuple[Tuple[Tuple[str, int], ...], Orientation]]] = {}
    walk_ids: Dict[Tuple[Tuple[str, int], ...], str] = {}
    for cid in sys.curve_ids:
        copies[cid] = []
        for address in level_word(sys, cid, N):
            sources = (cid,) + tuple(target for _, target in address.steps[:-1])
            walk = tuple(zip(sources, address.indices))
            copies[cid].append((walk, address.orientation))
            walk_ids[walk] = _walk_id(walk)

    points = list(sys.points)
    pieces = list(sys.pieces)
    curves: List[CurveClass] = []
    markers: List[str] = []
    projections: Dict[str, str] = {}
    walks_meta: Dict[str, List[List[Any]]] = {}

    for cid in sys.curve_ids:
        original = sys.curve(cid)
        chain = copies[cid]
        for j, (walk, _) in enumerate(chain):
            left = original.left_piece if j == 0 else f"{cid}|{j - 1}"
            right = original.right_piece if j == len(chain) - 1 else f"{cid}|{j}"
            refined_id = walk_ids[walk]
            curves.append(CurveClass(refined_id, left, right))
            projections[refined_id] = cid
            walks_meta[refined_id] = [[source, index] for source, index in walk]

        for j in range(len(chain) - 1):
            marker = f"m:{cid}:{j}"
            image = _marker_image(sys, chain[j][0], chain[j + 1][0])
            points.append(MarkedPoint(marker, image, critical=False, synthetic=True))
            pieces.append(Piece(f"{cid}|{j}", (marker,), sys.piece_of_point[image]))
            markers.append(marker)

    words: Dict[str, Tuple[PullbackEntry, ...]] = {}
    for cid in sys.curve_ids:
        for walk, parity in copies[cid]:
            first = sys.words_for(walk[0][0])[walk[0][1]]
            last_target = sys.words_for(walk[-1][0])[walk[-1][1]].target
            entries = [
                PullbackEntry(walk_ids[walk[1:] + ((last_target, index),)], first.degree, first.orientation)
                for index in range(len(sys.words_for(last_target)))
            ]
            if parity is Orientation.REVERSED:
                entries.reverse()
            words[walk_ids[walk]] = tuple(entries)

    draft = CurveSystem(
        degree=sys.degree, points=tuple(points), curves=tuple(curves), pieces=tuple(pieces),
        words=words, inessential=None, name=f"{sys.name}-refined" if sys.name else "refined",
    )
    # 外围性按两侧实际点数重新判定
    sides = curve_sides(draft)
    curves = [
        CurveClass(c.id, c.left_piece, c.right_piece, _single_point(sides[c.id]))
        for c in draft.curves
    ]
    refined = CurveSystem(
        degree=draft.degree, points=draft.points, curves=tuple(curves), pieces=draft.pieces,
        words=draft.words, inessential=None, name=draft.name,
        refinement={'N': N, 'markers': markers, 'projections': projections,
                    'walks': walks_meta, 'source': sys.name},
    )

    growth = growth_table(refined)
    residual = tuple(cid for cid, g in growth.items() if g.kind is GrowthKind.BOUNDED)
    if residual:
        logger.warning(f"细化后仍有 Bounded 类: {list(residual)}")

    lam_input = leading_eigenvalue(thurston_matrix(sys))
    lam_refined = leading_eigenvalue(thurston_matrix(refined))
    if abs(lam_input - lam_refined) > 1e-6:
        logger.warning(f"细化前后 λ 不一致: {lam_input:.12g} vs {lam_refined:.12g}")

    logger.info(f"细化完成: {len(curves)} 个类, {len(markers)} 个合成标记点, 二分性 {not residual}")
    return RefinementResult(refined, N, not residual, growth, residual, lam_input, lam_refined)


def _single_point(sides: Tuple[frozenset, frozenset]) -> Optional[str]:
    for side in sides:
        if len(side) == 1:
            return next(iter(side))
    return None


def _marker_image(sys: CurveSystem, lower: Tuple[Tuple[str, int], ...], upper: Tuple[Tuple[str, int], ...]) -> str:
    """缝中标记点的像：两侧拷贝首条边目标曲线的邻接片里系统顺序最靠前的原标记点"""
    region: List[str] = []
    for walk in (lower, upper):
        target = sys.curve(sys.words_for(walk[0][0])[walk[0][1]].target)
        for pid in (target.left_piece, target.right_piece):
            if pid not in region:
                region.append(pid)
    candidates = {pt for pid in region for pt in sys.piece(pid).points}
    for point_id in sys.point_ids:
        if point_id in candidates:
            return point_id
    return sys.point_ids[0]


# ---------------------------------------------------------------------------
# 分离报告与证书
# ---------------------------------------------------------------------------

def separation_report(sys: CurveSystem, refine: bool = False) -> SeparationReport:
    """
    每条曲线：两侧片、增长类、判定

    Coiling 曲线两侧的小 Julia 集互不相交（disjoint），否则相交（touching）
    """
    target, N = sys, None
    if refine:
        result = refine_to_dichotomy(sys)
        target, N = result.system, result.N
        growth = result.growth
    else:
        growth = growth_table(sys)

    projections = (target.refinement or {}).get('projections', {}) if refine else {}
    rows = [
        SeparationRow(
            curve=c.id, left_piece=c.left_piece, right_piece=c.right_piece,
            growth=growth[c.id].label(),
            verdict="disjoint" if growth[c.id].is_coiling else "touching",
            projection=projections.get(c.id),
        )
        for c in target.curves
    ]
    return SeparationReport(rows, refined=refine, N=N)


def renormalization_certificate(sys: CurveSystem, piece_id: str, iterate: int = 1) -> Optional[RenormCertificate]:
    """
    周期片的重整化证书：边界曲线全部 Coiling 时给出，否则返回 None

    Raises:
        NotPeriodicError: 片不是 f_Γ 周期的
    """
    period = piece_period(sys, piece_id)
    if period is None:
        raise NotPeriodicError(f"片 {piece_id} 不是周期的")
    boundary = sys.boundary_of(piece_id)
    if not boundary:
        return None

    context = growth_context(sys)
    growth = {cid: classify_growth(sys, cid, context) for cid in boundary}
    if not all(g.is_coiling for g in growth.values()):
        logger.debug(f"片 {piece_id} 的边界含非 Coiling 曲线")
        return None

    cert = RenormCertificate(
        piece=piece_id, period=period,
        boundary={cid: g.label() for cid, g in growth.items()},
        theorem="coiling-boundary-renormalization",
        statement=(f"片 {piece_id} 在 f_Γ 下周期为 {period}，其边界曲线 {list(boundary)} 都是 Coiling 曲线；"
                   f"存在与之同伦的有限连通区域 V 使 f^{period * iterate} 限制在 V 的原像分支上为重整化"),
        verified=True, iterate=iterate, curves=sys.curve_ids,
        witnesses={cid: g.witness for cid, g in growth.items()},
    )
    logger.info(f"重整化证书: 片 {piece_id}, 周期 {period}")
    return cert


def cantor_certificates(sys: CurveSystem) -> List[RenormCertificate]:
    """Cantor 子系统的每个周期片都有证书"""
    members = find_cantor_submulticurve(sys)
    if members is None:
        return []
    reduced = sub_system(sys, members)
    certificates = []
    for pid in reduced.piece_ids:
        if piece_period(reduced, pid) is None:
            continue
        cert = renormalization_certificate(reduced, pid)
        if cert is None:
            raise ClassificationError(f"Cantor 子系统的周期片 {pid} 没有证书")
        certificates.append(cert)
    return certificates


def _path_curve(tree: nx.MultiGraph, start: str, goal: str) -> str:
    """对偶树上从 start 到 goal 的路径经过的第一条曲线"""
    path = nx.shortest_path(tree, start, goal)
    return next(iter(tree.get_edge_data(path[0], path[1])))


def combinatorial_renormalization_data(sys: CurveSystem, piece_id: str) -> RenormCertificate:
    """
    组合重整化的标记球面数据

    每条边界曲线 c 对应的补分支塌缩为合成点 a[c]；沿 F^p 跟踪与 U 相邻的那个 c 的拷贝，
    其累积次数为边界次数，目标 c′ 给出 a[c] ↦ a[c′]；U 内标记点按 f^p 映射，落到 U 外时
    映到路径上第一条边界曲线的合成点
    """
    period = piece_period(sys, piece_id)
    if period is None:
        raise NotPeriodicError(f"片 {piece_id} 不是周期的")
    iterate_system = power_system(sys, period)
    tree = dual_tree(sys)
    boundary = sys.boundary_of(piece_id)

    def collapse(pid: str) -> Optional[str]:
        if pid == piece_id:
            return None
        return f"a[{_path_curve(tree, piece_id, pid)}]"

    synthetic: Dict[str, Dict[str, Any]] = {}
    degrees: Dict[str, int] = {}
    for cid in boundary:
        curve = sys.curve(cid)
        word = iterate_system.words_for(cid)
        tracked = word[0] if curve.left_piece == piece_id else word[-1]
        image_curve = iterate_system.curve(tracked.target)
        if tracked.target in boundary:
            image = f"a[{tracked.target}]"
        else:
            side = image_curve.right_piece if image_curve.left_piece == piece_id else image_curve.left_piece
            image = collapse(side) or f"a[{tracked.target}]"
            logger.warning(f"跟踪拷贝 {cid}→{tracked.target} 不在 {piece_id} 的边界上")
        degrees[cid] = tracked.degree
        synthetic[f"a[{cid}]"] = {'image': image, 'critical': tracked.degree > 1,
                                  'boundary_curve': cid, 'degree': tracked.degree}

    interior: Dict[str, Dict[str, Any]] = {}
    for point_id in sys.piece(piece_id).points:
        image = iterate_system.point(point_id).image
        owner = sys.piece_of_point[image]
        critical = False
        current = point_id
        for _ in range(period):
            critical = critical or sys.point(current).critical
            current = sys.point(current).image
        interior[point_id] = {'image': image if owner == piece_id else collapse(owner), 'critical': critical}

    context = growth_context(sys)
    growth = {cid: classify_growth(sys, cid, context) for cid in boundary}
    return RenormCertificate(
        piece=piece_id, period=period,
        boundary={cid: g.label() for cid, g in growth.items()},
        theorem="combinatorial-renormalization",
        statement=(f"f^{period} 在片 {piece_id} 上的组合重整化：补分支塌缩为 {len(synthetic)} 个合成点，"
                   f"每个合成点至多一个临界值"),
        verified=all(g.is_coiling for g in growth.values()),
        curves=sys.curve_ids,
        synthetic_points=synthetic, boundary_degrees=degrees, interior_points=interior,
    )


# ---------------------------------------------------------------------------
# 可重整片搜索
# ---------------------------------------------------------------------------

def _note(trace: Optional[List[str]], message: str):
    logger.debug(message)
    if trace is not None:
        trace.append(message)


def _copy_sides(system: CurveSystem, curve_id: str, loop: int, depth: int) -> Dict[str, Set[str]]:
    """
    γ 的非平凡拷贝所在的侧

    在 γ 自身的周期地址处首次分叉于条目 j：j 在 loop 之前为 left，之后为 right。
    深度受限的逐层传播与“τ_j 及其后代”的有限判据必须一致
    """
    word = system.words_for(curve_id)
    branches = [(j, e.target, "left" if j < loop else "right") for j, e in enumerate(word) if j != loop]

    propagated: Dict[str, Set[str]] = {}
    frontier: Set[Tuple[str, str]] = set()
    for _ in range(depth):
        frontier = {(e.target, side) for v, side in frontier for e in system.words_for(v)}
        frontier |= {(target, side) for _, target, side in branches}
        for v, side in frontier:
            propagated.setdefault(v, set()).add(side)

    graph = support_graph(system)
    finite: Dict[str, Set[str]] = {}
    for _, target, side in branches:
        for v in nx.descendants(graph, target) | {target}:
            finite.setdefault(v, set()).add(side)

    if propagated != finite:
        raise ClassificationError(f"拷贝侧的逐层传播与有限判据不一致: {propagated} vs {finite}")
    return finite


def find_renormalizable_piece(sys: CurveSystem, trace: Optional[List[str]] = None) -> Optional[RenormalizablePiece]:
    """
    在含 Coiling 曲线的系统中寻找子多重曲线 Γ′ 与一个边界全为 Coiling 的周期片

    Args:
        sys: 曲线系统
        trace: 可选列表，逐步记录搜索过程

    Returns:
        RenormalizablePiece；没有 Coiling 曲线或找不到合格片时为 None

    Raises:
        RealizabilityError: 某条曲线的 γ 拷贝分居 γ 两侧，输入不能由 PCF 映射实现
    """
    context = growth_context(sys)
    if not context.coiling:
        _note(trace, "没有 Coiling 曲线")
        return None

    cantor = find_cantor_submulticurve(sys)
    if cantor is not None:
        _note(trace, f"Cantor 子多重曲线 {list(cantor)}，直接取其周期片")
        reduced = sub_system(sys, cantor)
        for pid in reduced.piece_ids:
            if piece_period(reduced, pid) is not None:
                cert = renormalization_certificate(reduced, pid)
                if cert is not None:
                    return RenormalizablePiece(cantor, pid, cert, cantor=True)
        _note(trace, "Cantor 子系统中没有合格周期片")
        return None

    # 周期 Coiling 曲线：最短圈优先，平局取字典序
    candidates = []
    for cid in context.periodic:
        if cid in context.coiling:
            cycle = shortest_cycle_through(sys, cid, context.graph)
            candidates.append((len(cycle), cid, cycle))
    _, gamma, cycle = min(candidates, key=lambda item: (item[0], item[1]))
    p = len(cycle) * (2 if cycle.orientation is Orientation.REVERSED else 1)
    _note(trace, f"选取周期 Coiling 曲线 {gamma}, 圈 {list(cycle.curves)}, 迭代 F^{p}")

    system = power_system(sys, p)
    word = system.words_for(gamma)
    loops = [j for j, e in enumerate(word) if e.target == gamma]
    if len(loops) != 1 or word[loops[0]].orientation is not Orientation.SAME:
        raise ClassificationError(f"F^{p} 中 {gamma} 的自环条目应唯一且保持定向: {loops}")
    loop = loops[0]
    _note(trace, f"周期地址条目 i* = {loop}")

    sides = _copy_sides(system, gamma, loop, 2 * len(system.curves))
    for cid, found in sides.items():
        if len(found) > 1:
            raise RealizabilityError(f"输入不能由 PCF 映射实现: {cid} 的 {gamma} 拷贝分居两侧")
    first_branch = next(j for j in range(len(word)) if j != loop)
    chosen = "left" if first_branch < loop else "right"
    _note(trace, f"拷贝所在侧: {chosen}")

    star = tuple(cid for cid in system.curve_ids if sides.get(cid, set()) <= {chosen})
    lam_gamma = generated_multicurve(system, gamma)
    _note(trace, f"Γ* = {list(star)}, Λ_γ = {list(lam_gamma)}")

    partition = piece_partition(system, lam_gamma)
    reduced = sub_system(system, lam_gamma)
    g_curve = system.curve(gamma)
    opposite = g_curve.left_piece if chosen == "right" else g_curve.right_piece
    u_gamma = partition[opposite]

    orbit_graph = nx.Graph()
    orbit_graph.add_nodes_from(reduced.piece_ids)
    orbit_graph.add_edges_from(reduced.piece_map.items())
    grand_orbit = nx.node_connected_component(orbit_graph, u_gamma)
    _note(trace, f"U_γ = {u_gamma}, 大轨道 {sorted(grand_orbit)}")

    members = set(lam_gamma)
    prime = tuple(
        cid for cid in star
        if cid in members or partition[system.curve(cid).left_piece] not in grand_orbit
    )
    _note(trace, f"Γ′ = {list(prime)}")

    sub = _verify_subset(system, prime, lam_gamma, gamma, opposite, partition, u_gamma)
    sub_partition = piece_partition(system, prime)
    target_piece = sub_partition[opposite]

    order = [target_piece] + [pid for pid in sub.piece_ids if pid != target_piece]
    for pid in order:
        if piece_period(sub, pid) is None:
            continue
        cert = renormalization_certificate(sub, pid, iterate=p)
        if cert is not None:
            cert.witnesses['search'] = {'gamma': gamma, 'side': chosen, 'star': list(star),
                                        'lambda_gamma': list(lam_gamma), 'u_gamma': u_gamma}
            _note(trace, f"找到片 {pid}")
            logger.info(f"可重整片: {pid}, Γ′ = {list(prime)}, 迭代 F^{p}")
            return RenormalizablePiece(prime, pid, cert, iterate=p)

    _note(trace, "没有边界全为 Coiling 的周期片")
    return None


def _verify_subset(system: CurveSystem, prime: Tuple[str, ...], lam_gamma: Tuple[str, ...], gamma: str,
                   opposite: str, partition: Dict[str, str], u_gamma: str) -> CurveSystem:
    """独立复核：Γ′ 完全稳定；U_γ 是 f_{Γ′} 的不动片；Λ_γ 中曲线在 Γ′ 中都是 Coiling"""
    check_stable_subset(system, prime)
    sub = sub_system(system, prime)
    report = validate(sub)
    if not report.ok:
        raise RealizabilityError(f"Γ′ 子系统校验失败: {sorted(report.codes)}")

    sub_partition = piece_partition(system, prime)
    piece = sub_partition[opposite]
    same_members = {pid for pid, gid in sub_partition.items() if gid == piece} == \
        {pid for pid, gid in partition.items() if gid == u_gamma}
    if not same_members or sub.piece_map[piece] != piece:
        raise RealizabilityError(f"U_γ = {u_gamma} 不是 f_Γ′ 的不动片")

    context = growth_context(sub)
    for cid in lam_gamma:
        if not classify_growth(sub, cid, context).is_coiling:
            raise RealizabilityError(f"{cid} 在 Γ′ 中不是 Coiling 曲线")
    return sub


# ---------------------------------------------------------------------------
# Coiled Fatou
# ---------------------------------------------------------------------------

def detect_coiled_fatou(sys: CurveSystem) -> Optional[CoiledFatouCertificate]:
    """
    本质曲线 α 的原像中既有与 α 同伦的分量，又有与环绕不动临界点 a 的外围曲线 β 同伦的分量时，
    a 所在的不动 Fatou 分支为 coiled Fatou 分支
    """
    for alpha in sys.curves:
        if not alpha.essential:
            continue
        if not any(e.target == alpha.id for e in sys.words_for(alpha.id)):
            continue
        for beta in sys.curves:
            if beta.essential:
                continue
            point = sys.point(beta.peripheral_around)
            if point.image != point.id or not point.critical:
                continue
            if any(e.target == alpha.id for e in sys.words_for(beta.id)):
                cert = CoiledFatouCertificate(
                    fixed_point=point.id, alpha=alpha.id, beta=beta.id,
                    statement=(f"不动临界点 {point.id} 所在的 Fatou 分支 D 是 Jordan 区域，"
                               f"且 D 的闭包与其余 Fatou 分支的闭包互不相交"),
                )
                logger.info(f"coiled Fatou: a = {point.id}, α = {alpha.id}, β = {beta.id}")
                return cert
    return None
