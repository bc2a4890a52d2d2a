#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
曲线系统数据模型
标记球面、完全稳定(伪)多重曲线及其拉回组合数据的定义、校验与子系统构造
"""

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, List, Optional, Tuple, Any, Iterable, Iterator, Mapping

import networkx as nx

from multicurve_errors import (
    SystemFormatError, StabilityError, DecompositionTreeError, PieceDynamicsError,
)


logger = logging.getLogger(__name__)


class Orientation(str, Enum):
    """拉回分量相对目标曲线的定向"""
    SAME = "same"
    REVERSED = "reversed"

    def compose(self, other: "Orientation") -> "Orientation":
        """定向按奇偶复合"""
        return Orientation.SAME if self is other else Orientation.REVERSED

    @classmethod
    def parse(cls, value: Any) -> "Orientation":
        if isinstance(value, Orientation):
            return value
        text = str(value).strip().lower()
        if text in ("same", "s", "+"):
            return cls.SAME
        if text in ("reversed", "r", "-"):
            return cls.REVERSED
        raise SystemFormatError(f"无法识别的定向: {value!r}")


@dataclass(frozen=True)
class MarkedPoint:
    """标记点"""
    id: str
    image: str
    critical: bool = False
    synthetic: bool = False  # 细化时添加的标记点


@dataclass(frozen=True)
class CurveClass:
    """曲线同伦类，left/right 为两侧的片"""
    id: str
    left_piece: str
    right_piece: str
    peripheral_around: Optional[str] = None

    @property
    def essential(self) -> bool:
        return self.peripheral_around is None


@dataclass(frozen=True)
class PullbackEntry:
    """与某条曲线同伦的一个原像分量：它是 target 的原像，映射度为 degree"""
    target: str
    degree: int = 1
    orientation: Orientation = Orientation.SAME


@dataclass(frozen=True)
class InessentialPreimage:
    """非本质原像分量；point 为空表示平凡曲线，否则为绕该点的外围曲线"""
    degree: int
    point: Optional[str] = None

    @property
    def kind(self) -> str:
        return "peripheral" if self.point is not None else "trivial"


@dataclass(frozen=True)
class Piece:
    """Ĉ∖Γ 的一个连通分支"""
    id: str
    points: Tuple[str, ...] = ()
    image: str = ""
    boundary: Optional[Tuple[str, ...]] = None  # 声明的边界，可省略


@dataclass(frozen=True)
class CurveSystem:
    """完整的组合模型。构造后不再修改，所有操作返回新对象"""
    degree: int
    points: Tuple[MarkedPoint, ...]
    curves: Tuple[CurveClass, ...]
    pieces: Tuple[Piece, ...]
    words: Dict[str, Tuple[PullbackEntry, ...]]
    inessential: Optional[Dict[str, Tuple[InessentialPreimage, ...]]] = None
    name: str = ""
    refinement: Optional[Dict[str, Any]] = field(default=None, compare=False)

    @cached_property
    def curve_ids(self) -> Tuple[str, ...]:
        return tuple(c.id for c in self.curves)

    @cached_property
    def point_ids(self) -> Tuple[str, ...]:
        return tuple(p.id for p in self.points)

    @cached_property
    def piece_ids(self) -> Tuple[str, ...]:
        return tuple(p.id for p in self.pieces)

    @cached_property
    def _curve_index(self) -> Dict[str, CurveClass]:
        return {c.id: c for c in self.curves}

    @cached_property
    def _piece_index(self) -> Dict[str, Piece]:
        return {p.id: p for p in self.pieces}

    @cached_property
    def _point_index(self) -> Dict[str, MarkedPoint]:
        return {p.id: p for p in self.points}

    def curve(self, curve_id: str) -> CurveClass:
        return self._curve_index[curve_id]

    def piece(self, piece_id: str) -> Piece:
        return self._piece_index[piece_id]

    def point(self, point_id: str) -> MarkedPoint:
        return self._point_index[point_id]

    def has_curve(self, curve_id: str) -> bool:
        return curve_id in self._curve_index

    def words_for(self, curve_id: str) -> Tuple[PullbackEntry, ...]:
        return tuple(self.words.get(curve_id, ()))

    def iter_entries(self) -> Iterator[Tuple[str, int, PullbackEntry]]:
        """按系统顺序遍历 (源曲线, 序号, 条目)"""
        for curve_id in self.curve_ids:
            for index, entry in enumerate(self.words_for(curve_id)):
                yield curve_id, index, entry

    @cached_property
    def piece_of_point(self) -> Dict[str, str]:
        owner = {}
        for piece in self.pieces:
            for point_id in piece.points:
                owner.setdefault(point_id, piece.id)
        return owner

    def boundary_of(self, piece_id: str) -> Tuple[str, ...]:
        """由曲线两侧推出的片边界（系统顺序）"""
        return tuple(c.id for c in self.curves if piece_id in (c.left_piece, c.right_piece))

    @cached_property
    def piece_map(self) -> Dict[str, str]:
        return {p.id: p.image for p in self.pieces}

    @cached_property
    def point_map(self) -> Dict[str, str]:
        return {p.id: p.image for p in self.points}


@dataclass
class ValidationIssue:
    """一条违反的不变量"""
    code: str
    message: str
    ids: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code, 'message': self.message, 'ids': list(self.ids)}


@dataclass
class ValidationReport:
    """校验报告"""
    issues: List[ValidationIssue] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def codes(self) -> set:
        return {issue.code for issue in self.issues}

    def add(self, code: str, message: str, *ids: str):
        self.issues.append(ValidationIssue(code, message, tuple(ids)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'ok': self.ok,
            'issues': [issue.to_dict() for issue in self.issues],
            'warnings': list(self.warnings),
        }


@dataclass(frozen=True)
class PieceOrbit:
    """片在 f_Γ 下的前周期、周期与最终落入的周期片"""
    piece: str
    preperiod: int
    period: int
    lands_on: str


def eventual_orbit(step: Mapping[str, str], start: str) -> Tuple[int, int, str]:
    """
    沿有限自映射迭代直到重复

    Returns:
        (前周期, 周期, 第一个周期元素)
    """
    seen: Dict[str, int] = {}
    current = start
    while current not in seen:
        seen[current] = len(seen)
        current = step[current]
    preperiod = seen[current]
    return preperiod, len(seen) - preperiod, current


def _build_multigraph(sys: CurveSystem) -> nx.MultiGraph:
    graph = nx.MultiGraph()
    for piece in sys.pieces:
        graph.add_node(piece.id, points=tuple(piece.points))
    for curve in sys.curves:
        graph.add_edge(curve.left_piece, curve.right_piece, key=curve.id, curve=curve.id)
    return graph


def dual_tree(sys: CurveSystem) -> nx.MultiGraph:
    """
    构造对偶树：片为顶点，曲线为边

    Raises:
        DecompositionTreeError: 对偶图有圈或不连通
    """
    graph = _build_multigraph(sys)
    if len(graph) == 0 or not nx.is_tree(graph):
        raise DecompositionTreeError(
            f"不是球面分解: {len(sys.pieces)} 个片, {len(sys.curves)} 条曲线")
    return graph


def curve_sides(sys: CurveSystem, tree: Optional[nx.MultiGraph] = None) -> Dict[str, Tuple[frozenset, frozenset]]:
    """每条曲线左右两侧子树所含的标记点"""
    tree = tree if tree is not None else dual_tree(sys)
    sides = {}
    for curve in sys.curves:
        cut = nx.MultiGraph(tree)
        cut.remove_edge(curve.left_piece, curve.right_piece, key=curve.id)
        left_pieces = nx.node_connected_component(cut, curve.left_piece)
        left_points = frozenset(pt for pid in left_pieces for pt in sys.piece(pid).points)
        right_points = frozenset(pt for pt in sys.point_ids if pt not in left_points)
        sides[curve.id] = (left_points, right_points)
    return sides


def validate(sys: CurveSystem) -> ValidationReport:
    """
    校验曲线系统的全部不变量

    Args:
        sys: 待校验的曲线系统

    Returns:
        ValidationReport，列出每个违反项及相关 id；引用无法解析时只记录，不抛异常
    """
    report = ValidationReport()

    if sys.degree < 2:
        report.add("degree", f"全局次数必须 ≥ 2，当前为 {sys.degree}")

    for label, ids in (("point", sys.point_ids), ("curve", sys.curve_ids), ("piece", sys.piece_ids)):
        seen = set()
        for item in ids:
            if item in seen:
                report.add("duplicate_id", f"重复的{label} id: {item}", item)
            seen.add(item)

    point_set = set(sys.point_ids)
    piece_set = set(sys.piece_ids)
    curve_set = set(sys.curve_ids)

    # 标记点的像必须存在（前向不变）
    for point in sys.points:
        if point.image not in point_set:
            report.add("unresolved_reference", f"标记点 {point.id} 的像 {point.image} 不存在", point.id, point.image)

    # 片：像、所含标记点
    placement: Dict[str, List[str]] = {}
    for piece in sys.pieces:
        if piece.image not in piece_set:
            report.add("unresolved_reference", f"片 {piece.id} 的像 {piece.image} 不存在", piece.id, piece.image)
        for point_id in piece.points:
            if point_id not in point_set:
                report.add("unresolved_reference", f"片 {piece.id} 含未知标记点 {point_id}", piece.id, point_id)
            placement.setdefault(point_id, []).append(piece.id)
    for point_id in sys.point_ids:
        owners = placement.get(point_id, [])
        if len(owners) != 1:
            report.add("point_placement", f"标记点 {point_id} 应恰好属于一个片，实际为 {owners}", point_id, *owners)

    # 曲线两侧
    curves_resolved = True
    for curve in sys.curves:
        for side in (curve.left_piece, curve.right_piece):
            if side not in piece_set:
                curves_resolved = False
                report.add("unresolved_reference", f"曲线 {curve.id} 的邻接片 {side} 不存在", curve.id, side)
        if curve.left_piece == curve.right_piece:
            curves_resolved = False
            report.add("dual_tree", f"曲线 {curve.id} 两侧是同一个片 {curve.left_piece}", curve.id)
        if curve.peripheral_around is not None and curve.peripheral_around not in point_set:
            report.add("unresolved_reference",
                       f"外围曲线 {curve.id} 环绕的点 {curve.peripheral_around} 不存在", curve.id)

    # 拉回词：稳定性、预稳定性、次数
    for key in sys.words:
        if key not in curve_set:
            report.add("unresolved_reference", f"words 中出现未知曲线 {key}", key)
    essential_sums: Dict[str, int] = {cid: 0 for cid in sys.curve_ids}
    for curve_id in sys.curve_ids:
        entries = sys.words_for(curve_id)
        if not entries:
            report.add("pre_stability", f"曲线 {curve_id} 不与 F⁻¹(Γ) 中任何曲线同伦", curve_id)
        for index, entry in enumerate(entries):
            if entry.target not in curve_set:
                report.add("stability", f"{curve_id}[{index}] 指向未知曲线 {entry.target}", curve_id, entry.target)
                continue
            if not 1 <= entry.degree <= sys.degree:
                report.add("degree", f"{curve_id}[{index}] 的次数 {entry.degree} 超出 [1, {sys.degree}]", curve_id)
            essential_sums[entry.target] += entry.degree

    # 次数和
    for target, total in essential_sums.items():
        if total > sys.degree:
            report.add("degree_sum", f"{target} 的本质原像次数和 {total} 超过全局次数 {sys.degree}", target)
    if sys.inessential is None:
        report.warnings.append("未提供非本质原像表，跳过次数和检查")
        logger.warning(f"系统 {sys.name or '<unnamed>'} 未提供非本质原像表，跳过次数和检查")
    else:
        for target in sys.inessential:
            if target not in curve_set:
                report.add("unresolved_reference", f"inessential 中出现未知曲线 {target}", target)
        for target in sys.curve_ids:
            extra = sys.inessential.get(target, ())
            for item in extra:
                if item.point is not None and item.point not in point_set:
                    report.add("unresolved_reference", f"{target} 的外围原像环绕未知点 {item.point}", target, item.point)
            total = essential_sums[target] + sum(item.degree for item in extra)
            if total != sys.degree:
                report.add("degree_sum", f"{target} 的原像次数和 {total} ≠ 全局次数 {sys.degree}", target)

    # 对偶树与本质性
    if curves_resolved and not (report.codes & {"duplicate_id"}):
        graph = _build_multigraph(sys)
        if len(graph) == 0 or not nx.is_tree(graph):
            report.add("dual_tree", f"片与曲线不构成树: {len(sys.pieces)} 个片, {len(sys.curves)} 条曲线")
        elif "point_placement" not in report.codes:
            _check_sides(sys, graph, report)

    if report.ok:
        logger.info(f"系统 {sys.name or '<unnamed>'} 校验通过")
    else:
        logger.info(f"系统 {sys.name or '<unnamed>'} 校验失败: {sorted(report.codes)}")
    return report


def _check_sides(sys: CurveSystem, graph: nx.MultiGraph, report: ValidationReport):
    sides = curve_sides(sys, graph)
    peripheral_pieces = set()
    for curve in sys.curves:
        left, right = sides[curve.id]
        if curve.peripheral_around is None:
            if len(left) < 2 or len(right) < 2:
                report.add("essential", f"曲线 {curve.id} 两侧标记点数为 {len(left)}/{len(right)}，不是本质曲线", curve.id)
        else:
            target = frozenset([curve.peripheral_around])
            if left == target:
                peripheral_pieces.add(curve.left_piece)
            elif right == target:
                peripheral_pieces.add(curve.right_piece)
            else:
                report.add("peripheral", f"曲线 {curve.id} 没有一侧恰好只含 {curve.peripheral_around}", curve.id)

    for piece in sys.pieces:
        derived = sys.boundary_of(piece.id)
        if piece.boundary is not None and set(piece.boundary) != set(derived):
            report.add("boundary", f"片 {piece.id} 声明的边界 {list(piece.boundary)} 与推出的 {list(derived)} 不符", piece.id)
        if len(derived) + len(piece.points) < 3 and piece.id not in peripheral_pieces:
            report.add("piece_complexity", f"片 {piece.id} 的边界数与标记点数之和小于 3", piece.id)


def check_stable_subset(sys: CurveSystem, subset: Iterable[str]) -> Tuple[str, ...]:
    """
    检查曲线子集在拉回下稳定且预稳定

    Returns:
        按系统顺序排列的子集

    Raises:
        StabilityError: 消息中给出违反的曲线
    """
    wanted = set(subset)
    unknown = wanted - set(sys.curve_ids)
    if unknown:
        raise StabilityError(f"未知曲线: {sorted(unknown)}", curve=sorted(unknown)[0])
    if not wanted:
        raise StabilityError("曲线子集为空")

    for source, index, entry in sys.iter_entries():
        if entry.target in wanted and source not in wanted:
            raise StabilityError(f"{entry.target} 的原像中有与 {source} 同伦的分量，子集不稳定", curve=source)
    ordered = tuple(cid for cid in sys.curve_ids if cid in wanted)
    for curve_id in ordered:
        if not any(entry.target in wanted for entry in sys.words_for(curve_id)):
            raise StabilityError(f"{curve_id} 不是子集中曲线的原像，子集不是预稳定的", curve=curve_id)
    return ordered


def _merge_pieces(sys: CurveSystem, kept: Iterable[str]) -> Tuple[Dict[str, str], List[Tuple[str, Tuple[str, ...]]]]:
    """沿不在子集中的曲线粘合片，返回 (原片→合并片 id, 有序合并组)"""
    kept = set(kept)
    glue = nx.Graph()
    glue.add_nodes_from(sys.piece_ids)
    for curve in sys.curves:
        if curve.id not in kept:
            glue.add_edge(curve.left_piece, curve.right_piece)

    order = {pid: i for i, pid in enumerate(sys.piece_ids)}
    groups = []
    for component in nx.connected_components(glue):
        members = tuple(sorted(component, key=order.__getitem__))
        groups.append(("+".join(members), members))
    groups.sort(key=lambda item: order[item[1][0]])

    merged = {pid: gid for gid, members in groups for pid in members}
    return merged, groups


def piece_partition(sys: CurveSystem, subset: Iterable[str]) -> Dict[str, str]:
    """原片 id → Ĉ∖Λ 中所在合并片的 id（不检查稳定性）"""
    return _merge_pieces(sys, subset)[0]


def induced_piece_map(sys: CurveSystem, subset: Iterable[str]) -> Dict[str, str]:
    """
    子多重曲线上诱导的片映射 f_Λ(merged(U)) = merged(f_Γ(U))

    Raises:
        StabilityError: 子集不完全稳定
        PieceDynamicsError: 同一合并片中的片映到不同合并片
    """
    ordered = check_stable_subset(sys, subset)
    merged, groups = _merge_pieces(sys, ordered)
    induced: Dict[str, str] = {}
    for gid, members in groups:
        images = {merged[sys.piece(pid).image] for pid in members}
        if len(images) != 1:
            raise PieceDynamicsError(f"片动力学不一致: 合并片 {gid} 映到 {sorted(images)}")
        induced[gid] = images.pop()
    return induced


def sub_system(sys: CurveSystem, subset: Iterable[str]) -> CurveSystem:
    """
    由完全稳定子集 Λ 生成的子系统

    Args:
        sys: 原系统
        subset: 曲线 id 集合 Λ

    Returns:
        新的 CurveSystem：片为 Ĉ∖Λ 的分支，拉回词只保留指向 Λ 的条目
    """
    ordered = check_stable_subset(sys, subset)
    kept = set(ordered)
    merged, groups = _merge_pieces(sys, kept)
    induced = induced_piece_map(sys, kept)

    pieces = tuple(
        Piece(id=gid,
              points=tuple(pt for pid in members for pt in sys.piece(pid).points),
              image=induced[gid])
        for gid, members in groups
    )
    curves = tuple(
        CurveClass(c.id, merged[c.left_piece], merged[c.right_piece], c.peripheral_around)
        for c in sys.curves if c.id in kept
    )
    words = {cid: tuple(e for e in sys.words_for(cid) if e.target in kept) for cid in ordered}
    inessential = None
    if sys.inessential is not None:
        inessential = {cid: tuple(sys.inessential.get(cid, ())) for cid in ordered}

    logger.debug(f"子系统 {list(ordered)}: {len(pieces)} 个合并片")
    return CurveSystem(
        degree=sys.degree, points=sys.points, curves=curves, pieces=pieces, words=words,
        inessential=inessential, name=sys.name,
        refinement=sys.refinement if len(kept) == len(sys.curves) else None,
    )


def piece_orbits(sys: CurveSystem) -> Dict[str, PieceOrbit]:
    """每个片的前周期、周期以及最终落入的周期片"""
    orbits = {}
    for pid in sys.piece_ids:
        preperiod, period, first_periodic = eventual_orbit(sys.piece_map, pid)
        orbits[pid] = PieceOrbit(pid, preperiod, period, first_periodic)
    return orbits


def piece_period(sys: CurveSystem, piece_id: str) -> Optional[int]:
    """周期片返回周期，否则返回 None"""
    preperiod, period, _ = eventual_orbit(sys.piece_map, piece_id)
    return period if preperiod == 0 else None


# ---------------------------------------------------------------------------
# JSON 读写
# ---------------------------------------------------------------------------

def _entry_from_json(raw: Any) -> PullbackEntry:
    if isinstance(raw, (list, tuple)):
        target, degree, *rest = raw
        orientation = rest[0] if rest else "same"
    else:
        target, degree = raw['target'], raw.get('degree', 1)
        orientation = raw.get('orientation', 'same')
    return PullbackEntry(str(target), int(degree), Orientation.parse(orientation))


def system_from_dict(data: Mapping[str, Any], name: str = "") -> CurveSystem:
    """
    从 JSON 字典构造曲线系统

    Raises:
        SystemFormatError: 缺少键或类型错误
    """
    try:
        points = tuple(
            MarkedPoint(str(p['id']), str(p.get('image', p['id'])),
                        bool(p.get('critical', False)), bool(p.get('synthetic', False)))
            for p in data['points']
        )
        curves = tuple(
            CurveClass(str(c['id']),
                       str(c.get('left_piece', c.get('left'))),
                       str(c.get('right_piece', c.get('right'))),
                       c.get('peripheral_around'))
            for c in data['curves']
        )
        pieces = tuple(
            Piece(str(p['id']), tuple(str(x) for x in p.get('points', ())), str(p.get('image', p['id'])),
                  tuple(p['boundary']) if p.get('boundary') is not None else None)
            for p in data['pieces']
        )
        words = {str(cid): tuple(_entry_from_json(e) for e in entries)
                 for cid, entries in data.get('words', {}).items()}
        inessential = None
        if data.get('inessential') is not None:
            inessential = {
                str(cid): tuple(
                    InessentialPreimage(int(item['degree']),
                                        item.get('point') if item.get('kind', 'trivial') == 'peripheral' else None)
                    for item in items)
                for cid, items in data['inessential'].items()
            }
        return CurveSystem(
            degree=int(data['degree']), points=points, curves=curves, pieces=pieces, words=words,
            inessential=inessential, name=str(data.get('name', name)),
            refinement=data.get('refinement'),
        )
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, SystemFormatError):
            raise
        raise SystemFormatError(f"曲线系统格式错误: {e!r}") from e


def system_to_dict(sys: CurveSystem) -> Dict[str, Any]:
    """曲线系统转为 JSON 字典"""
    data: Dict[str, Any] = {
        'name': sys.name,
        'degree': sys.degree,
        'points': [
            {'id': p.id, 'image': p.image, 'critical': p.critical, **({'synthetic': True} if p.synthetic else {})}
            for p in sys.points
        ],
        'curves': [
            {'id': c.id, 'left_piece': c.left_piece, 'right_piece': c.right_piece,
             **({'peripheral_around': c.peripheral_around} if c.peripheral_around is not None else {})}
            for c in sys.curves
        ],
        'pieces': [
            {'id': p.id, 'points': list(p.points), 'image': p.image,
             **({'boundary': list(p.boundary)} if p.boundary is not None else {})}
            for p in sys.pieces
        ],
        'words': {
            cid: [{'target': e.target, 'degree': e.degree, 'orientation': e.orientation.value}
                  for e in sys.words_for(cid)]
            for cid in sys.curve_ids
        },
        'inessential': None,
    }
    if sys.inessential is not None:
        data['inessential'] = {
            cid: [{'kind': item.kind, 'degree': item.degree, **({'point': item.point} if item.point else {})}
                  for item in items]
            for cid, items in sys.inessential.items()
        }
    if sys.refinement is not None:
        data['refinement'] = sys.refinement
    return data


def load_system(path: str) -> CurveSystem:
    """从 JSON 文件读取曲线系统"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except OSError as e:
        raise SystemFormatError(f"无法读取文件 {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SystemFormatError(f"文件 {path} 不是合法 JSON: {e}") from e
    logger.debug(f"读取曲线系统: {path}")
    return system_from_dict(data)


def save_system(sys: CurveSystem, path: str):
    """写出曲线系统 JSON"""
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(system_to_dict(sys), f, ensure_ascii=False, indent=2)
    logger.info(f"曲线系统已保存到: {path}")
