#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
多重曲线分解工具
命令行入口：分析、细化、证书、例子验证、参数求解与吸引域渲染
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Any, Optional, Tuple

from curve_complex import CurveSystem, validate, save_system
from pullback import counting_matrix, thurston_matrix
from multicurve_analysis import (
    find_cantor_submulticurve, find_levy_cycle, find_obstruction, growth_table,
    irreducible_components, is_obstruction,
)
from decomposition import (
    cantor_certificates, combinatorial_renormalization_data, detect_coiled_fatou,
    find_renormalizable_piece, refine_to_dichotomy, renormalization_certificate, separation_report,
)
from pcf_numerics import (
    RationalMapExpr, format_point, load_map, refine_parameters, solve_parameter, verify_pcf,
)
from example_families import FAMILIES, build_map, match_portrait, parameter_problem, refinement_problem
from basin_renderer import render_basins, render_zoom_sequence
from system_store import system_store
from report_exporter import report_exporter, FORMATS
from multicurve_errors import ConvergenceError
from tool_config import tool_config_manager, setup_logging


EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERIC = 2

ORBIT_RESIDUAL_LIMIT = 1e-8


@dataclass
class AnalyzeReport:
    """analyze 子命令的报告"""
    system: str
    validation: Dict[str, Any]
    matrices: Dict[str, Any] = field(default_factory=dict)
    lam: Optional[float] = None
    obstruction: Optional[bool] = None
    obstruction_subset: Optional[List[str]] = None
    levy_cycle: Optional[Dict[str, Any]] = None
    components: List[Dict[str, Any]] = field(default_factory=list)
    growth: Dict[str, Any] = field(default_factory=dict)
    cantor: Optional[List[str]] = None
    separation: Optional[Dict[str, Any]] = None
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'title': f"多重曲线分析: {self.system}",
            'system': self.system,
            'validation': self.validation,
            'matrices': self.matrices,
            'lambda': self.lam,
            'obstruction': self.obstruction,
            'obstruction_subset': self.obstruction_subset,
            'levy_cycle': self.levy_cycle,
            'components': self.components,
            'growth': self.growth,
            'cantor': self.cantor,
            'separation': self.separation,
            'certificates': self.certificates,
            'notes': self.notes,
        }


class ToolArgumentParser(argparse.ArgumentParser):
    """参数错误按校验错误处理（退出码 1）"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"错误: {message}\n")


class MulticurveTool:
    """多重曲线分解工具类"""

    def __init__(self, threads: int = 1):
        self.logger = logging.getLogger(__name__)
        self.threads = max(1, threads)
        self.store = system_store
        self.exporter = report_exporter

    # ------------------------------------------------------------------
    # 组合部分
    # ------------------------------------------------------------------

    def analyze(self, sys_: CurveSystem) -> Tuple[AnalyzeReport, bool]:
        """校验并分析曲线系统；校验失败时报告只含校验结果"""
        validation = validate(sys_)
        report = AnalyzeReport(sys_.name or "<unnamed>", validation.to_dict())
        if not validation.ok:
            self.logger.warning(f"系统 {report.system} 校验失败: {sorted(validation.codes)}")
            return report, False

        B, M = counting_matrix(sys_), thurston_matrix(sys_)
        report.matrices = {
            'B': {'ids': list(B.ids), 'rows': B.to_list()},
            'M': {'ids': list(M.ids), 'rows': M.to_list()},
        }
        report.obstruction, report.lam = is_obstruction(sys_)
        found = find_obstruction(sys_)
        report.obstruction_subset = list(found[0]) if found else None
        levy = find_levy_cycle(sys_)
        report.levy_cycle = levy.to_dict() if levy else None
        report.components = [c.to_dict() for c in irreducible_components(sys_)]
        report.growth = {cid: g.to_dict() for cid, g in growth_table(sys_).items()}

        cantor = find_cantor_submulticurve(sys_)
        report.cantor = list(cantor) if cantor else None
        report.separation = separation_report(sys_).to_dict()

        report.certificates = [c.to_dict() for c in cantor_certificates(sys_)]
        try:
            piece = find_renormalizable_piece(sys_)
            if piece is not None and not piece.cantor:
                report.certificates.append(piece.to_dict())
        except RuntimeError as e:
            report.notes.append(f"可重整片搜索失败: {e}")
            self.logger.warning(f"可重整片搜索失败: {e}")
        fatou = detect_coiled_fatou(sys_)
        if fatou is not None:
            report.certificates.append(fatou.to_dict())

        self.logger.info(f"分析完成: λ = {report.lam:.12g}, 阻碍 {report.obstruction}, "
                         f"证书 {len(report.certificates)} 个")
        return report, True

    def refine(self, sys_: CurveSystem, N: Optional[int] = None, out: Optional[str] = None) -> Dict[str, Any]:
        result = refine_to_dichotomy(sys_, N)
        data = result.to_dict()
        data['title'] = f"细化: {sys_.name or '<unnamed>'}"
        data['projections'] = dict(result.system.refinement['projections'])
        if out:
            save_system(result.system, out)
            data['output'] = out
        return data

    def certify(self, sys_: CurveSystem, piece: Optional[str] = None, find: bool = False) -> Dict[str, Any]:
        if find:
            trace: List[str] = []
            found = find_renormalizable_piece(sys_, trace)
            return {'title': '可重整片搜索', 'found': found.to_dict() if found else None, 'trace': trace}
        if piece:
            cert = renormalization_certificate(sys_, piece)
            return {
                'title': f"片 {piece} 的证书",
                'certificate': cert.to_dict() if cert else None,
                'renormalization': combinatorial_renormalization_data(sys_, piece).to_dict(),
            }
        fatou = detect_coiled_fatou(sys_)
        return {
            'title': '证书',
            'cantor': [c.to_dict() for c in cantor_certificates(sys_)],
            'coiled_fatou': fatou.to_dict() if fatou else None,
        }

    # ------------------------------------------------------------------
    # 数值部分
    # ------------------------------------------------------------------

    def verify_example(self, which: str) -> Tuple[Dict[str, Any], bool]:
        """验证一个例子中全部映射的临界轨道图"""
        rows = []
        all_ok = True
        for family_id in (f"ex{which}.R", f"ex{which}.g0", f"ex{which}.g"):
            m = build_map(family_id)
            portrait = verify_pcf(m)
            problems = match_portrait(portrait, family_id)
            ok = (portrait.pcf and not problems and portrait.max_residual < ORBIT_RESIDUAL_LIMIT
                  and portrait.multiplicity_sum == 2 * m.degree - 2)
            all_ok = all_ok and ok
            rows.append({'family': family_id, 'ok': ok, 'problems': problems, 'portrait': portrait.to_dict()})
        return {'title': f"例 {which} 验证", 'ok': all_ok, 'maps': rows}, all_ok

    def solve_param(self, which: str, digits: int = 13, start: Optional[float] = None) -> Dict[str, Any]:
        problem = parameter_problem(which, seed=start, digits=digits)
        solution = solve_parameter(problem)
        matched = min(solution.digits_matched(), digits)
        data = solution.to_dict()
        data.update({'title': f"参数问题 {which}", 'digits': digits, 'matched': matched,
                     'target': [format_point(t) for t in problem.target or ()]})
        return data

    def refine_example(self, family_id: str) -> Dict[str, Any]:
        problem, reference = refinement_problem(family_id)
        refined = refine_parameters(problem, reference)
        data = refined.to_dict()
        data['title'] = f"{family_id} 参数精化"
        data['conditions'] = list(problem.conditions)
        return data

    def resolve_map(self, ref: str) -> RationalMapExpr:
        if ref in FAMILIES:
            return build_map(ref)
        if os.path.exists(ref):
            return load_map(ref)
        raise ValueError(f"未知映射: {ref}，可选内置映射族 {', '.join(FAMILIES)} 或 JSON 文件")

    def render(self, ref: str, out: Optional[str], center: complex, width: float, px: Optional[int],
               max_iter: Optional[int], zoom: Optional[int] = None) -> Dict[str, Any]:
        m = self.resolve_map(ref)
        if zoom:
            out_dir = os.path.splitext(out)[0] if out else None
            widths = [10.0 ** -k for k in range(1, zoom + 1)]
            frames = render_zoom_sequence(m, center, widths, px, max_iter, out_dir=out_dir, threads=self.threads)
            return {'title': f"{ref} 逐级放大", 'frames': [stats.to_dict() for _, stats in frames],
                    'output': out_dir}
        result = render_basins(m, center, width, px, max_iter, out=out, threads=self.threads)
        data = result.stats.to_dict()
        data.update({'title': f"{ref} 吸引域", 'output': result.path})
        return data

    # ------------------------------------------------------------------

    def emit(self, report: Dict[str, Any], out: Optional[str] = None, fmt: Optional[str] = None):
        if out:
            self.exporter.save_report(report, out, fmt)
            print(f"结果已保存到: {out}")
        else:
            print(json.dumps(report, ensure_ascii=False, indent=2))


COMPLEX_OPTIONS = ("--center",)


def complex_point(text: str) -> complex:
    """解析复数参数，接受 i 或 j 作虚数单位，允许空格"""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise argparse.ArgumentTypeError(f"无法解析复数: {text}")


def join_complex_options(argv: List[str]) -> List[str]:
    """把 `--center -0.5+0.1j` 改写成 `--center=-0.5+0.1j`，负数值不会被当成选项"""
    joined: List[str] = []
    pending = None
    for token in argv:
        if pending is not None:
            joined.append(f"{pending}={token}")
            pending = None
        elif token in COMPLEX_OPTIONS:
            pending = token
        else:
            joined.append(token)
    if pending is not None:
        joined.append(pending)
    return joined


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="求根初值扰动的随机种子")
    common.add_argument("--threads", type=int, default=1, help="渲染线程数")
    common.add_argument("--debug", action="store_true", help="开启调试模式")

    parser = ToolArgumentParser(description="PCF 分支覆叠的多重曲线分解工具", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ToolArgumentParser)

    p = sub.add_parser("analyze", parents=[common], help="校验并分析曲线系统")
    p.add_argument("path", help="系统 JSON 文件或内置系统名称")
    p.add_argument("-o", "--out", help="报告输出路径")
    p.add_argument("-f", "--format", choices=FORMATS, help="报告格式 (默认按扩展名)")

    p = sub.add_parser("refine", parents=[common], help="细化到二分性")
    p.add_argument("path")
    p.add_argument("--N", type=int, dest="N", help="路径长度 (默认自动)")
    p.add_argument("-o", "--out", help="细化后系统的 JSON 路径")

    p = sub.add_parser("certify", parents=[common], help="重整化证书")
    p.add_argument("path")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--piece", help="指定周期片")
    group.add_argument("--find", action="store_true", help="搜索可重整片")
    p.add_argument("-o", "--out")

    p = sub.add_parser("verify-example", parents=[common], help="验证例子映射的临界轨道图")
    p.add_argument("which", choices=["1", "2"])
    p.add_argument("--refine", action="store_true", help="同时精化映射 g 的参数")
    p.add_argument("-o", "--out")

    p = sub.add_parser("solve-param", parents=[common], help="Newton 求解例子中的参数 ν")
    p.add_argument("which", choices=["1", "2", "trivial"])
    p.add_argument("--digits", type=int, default=13)
    p.add_argument("--start", type=float, help="Newton 初值")
    p.add_argument("-o", "--out")

    p = sub.add_parser("render", parents=[common], help="渲染吸引域为 PPM")
    p.add_argument("target", help="内置映射族 id 或映射 JSON 文件")
    p.add_argument("-o", "--out", help="PPM 输出路径")
    p.add_argument("--center", type=complex_point, default=0j, help="窗口中心，如 -0.5+0.1j")
    p.add_argument("--width", type=float, default=4.0)
    p.add_argument("--px", type=int)
    p.add_argument("--maxiter", type=int)
    p.add_argument("--zoom", type=int, help="宽度 10^-1..10^-K 的逐级放大")

    p = sub.add_parser("fixtures", parents=[common], help="导出内置系统")
    p.add_argument("-o", "--out", default="fixtures", help="输出目录")
    return parser


def _print_residual_table(report: Dict[str, Any]):
    print(f"\n=== {report['title']} ===")
    for row in report['maps']:
        portrait = row['portrait']
        mark = "✅" if row['ok'] else "❌"
        print(f"{mark} {row['family']}: 重数和 {portrait['multiplicity_sum']}/{portrait['expected_sum']}, "
              f"最大残差 {portrait['max_residual']:.3e}")
        for orbit in portrait['orbits']:
            print(f"    {orbit['point']:>40} (×{orbit['multiplicity']}) "
                  f"前周期 {orbit['preperiod']} 周期 {orbit['period']} 残差 {orbit['residual']:.3e}")
        for problem in row['problems']:
            print(f"    ⚠️ {problem}")


def run(args: argparse.Namespace) -> int:
    tool = MulticurveTool(threads=args.threads)

    if args.command == "analyze":
        report, ok = tool.analyze(tool.store.resolve(args.path))
        tool.emit(report.to_dict(), args.out, args.format)
        return EXIT_OK if ok else EXIT_INVALID

    if args.command == "refine":
        tool.emit(tool.refine(tool.store.resolve(args.path), args.N, args.out))
        return EXIT_OK

    if args.command == "certify":
        tool.emit(tool.certify(tool.store.resolve(args.path), args.piece, args.find), args.out)
        return EXIT_OK

    if args.command == "verify-example":
        report, ok = tool.verify_example(args.which)
        if args.refine:
            report['refinement'] = tool.refine_example(f"ex{args.which}.g")
        _print_residual_table(report)
        if args.out:
            tool.emit(report, args.out)
        return EXIT_OK if ok else EXIT_INVALID

    if args.command == "solve-param":
        report = tool.solve_param(args.which, args.digits, args.start)
        print(f"{report['problem']['unknowns'][0]} = {next(iter(report['values'].values()))}")
        print(f"{report['matched']}/{report['digits']} digits match")
        if args.out:
            tool.emit(report, args.out)
        return EXIT_OK

    if args.command == "render":
        report = tool.render(args.target, args.out, args.center, args.width, args.px, args.maxiter, args.zoom)
        print(json.dumps(report, ensure_ascii=False, indent=2))
        return EXIT_OK

    if args.command == "fixtures":
        for path in tool.store.export_fixtures(args.out):
            print(path)
        return EXIT_OK

    return EXIT_INVALID


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(join_complex_options(argv))
    setup_logging(debug=args.debug)
    if args.seed is not None:
        tool_config_manager.config = tool_config_manager.override(random_seed=args.seed)

    started = datetime.now()
    try:
        code = run(args)
    except ConvergenceError as e:
        print(f"错误: 数值迭代未收敛 - {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, RuntimeError, OSError) as e:
        print(f"错误: {e}", file=sys.stderr)
        return EXIT_INVALID
    logging.getLogger(__name__).debug(f"{args.command} 用时 {(datetime.now() - started).total_seconds():.3f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
