#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
报告导出工具
把分析、细化、证书等报告写成 JSON / TXT / CSV / XLSX
"""

import csv
import json
import logging
import os
from datetime import datetime
from typing import Dict, List, Any, Optional, Tuple

import openpyxl
from openpyxl.styles import Font, PatternFill, Border, Side, Alignment
from openpyxl.utils import get_column_letter


FORMATS = ("json", "txt", "csv", "xlsx")


def _flatten(data: Any, prefix: str = "") -> List[Tuple[str, Any]]:
    """嵌套字典展开为 (点分路径, 值)"""
    if isinstance(data, dict):
        items: List[Tuple[str, Any]] = []
        for key, value in data.items():
            items.extend(_flatten(value, f"{prefix}.{key}" if prefix else str(key)))
        return items
    if isinstance(data, list) and any(isinstance(x, (dict, list)) for x in data):
        items = []
        for i, value in enumerate(data):
            items.extend(_flatten(value, f"{prefix}[{i}]"))
        return items
    if isinstance(data, list):
        return [(prefix, ", ".join(str(x) for x in data))]
    return [(prefix, data)]


def growth_rows(report: Dict[str, Any]) -> List[Dict[str, Any]]:
    """每条曲线一行：增长类型、极限、深度、分离结论"""
    growth = report.get('growth') or {}
    verdicts = {row['curve']: row for row in (report.get('separation') or {}).get('rows', [])}
    rows = []
    for curve_id, info in growth.items():
        info = info if isinstance(info, dict) else {'class': info}
        row = {
            'curve': curve_id,
            'class': info.get('class', ''),
            'limit': info.get('limit', ''),
            'depth': info.get('depth', ''),
            'verdict': verdicts.get(curve_id, {}).get('verdict', ''),
        }
        rows.append(row)
    return rows


class ReportExporter:
    """报告导出工具类"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.setup_styles()

    def setup_styles(self):
        """设置Excel样式"""
        self.title_font = Font(name='微软雅黑', size=14, bold=True, color='FFFFFF')
        self.header_font = Font(name='微软雅黑', size=12, bold=True, color='FFFFFF')
        self.content_font = Font(name='微软雅黑', size=11)
        self.number_font = Font(name='Arial', size=11)

        self.title_fill = PatternFill(start_color='2E86AB', end_color='2E86AB', fill_type='solid')
        self.header_fill = PatternFill(start_color='4A90E2', end_color='4A90E2', fill_type='solid')
        self.success_fill = PatternFill(start_color='D4EDDA', end_color='D4EDDA', fill_type='solid')
        self.warning_fill = PatternFill(start_color='FFF3CD', end_color='FFF3CD', fill_type='solid')
        self.error_fill = PatternFill(start_color='F8D7DA', end_color='F8D7DA', fill_type='solid')

        thin = Side(style='thin')
        self.default_border = Border(left=thin, right=thin, top=thin, bottom=thin)
        thick = Side(style='thick')
        self.thick_border = Border(left=thick, right=thick, top=thick, bottom=thick)

        self.center_alignment = Alignment(horizontal='center', vertical='center')
        self.left_alignment = Alignment(horizontal='left', vertical='center')
        self.right_alignment = Alignment(horizontal='right', vertical='center')

    def save_report(self, report: Dict[str, Any], path: str, fmt: Optional[str] = None) -> str:
        """
        保存报告

        Args:
            report: 可 JSON 序列化的报告字典
            path: 输出路径
            fmt: json / txt / csv / xlsx，缺省时按扩展名判断

        Returns:
            写出的文件路径
        """
        fmt = (fmt or os.path.splitext(path)[1].lstrip('.') or 'json').lower()
        if fmt not in FORMATS:
            raise ValueError(f"不支持的报告格式: {fmt}，可选: {', '.join(FORMATS)}")

        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        writer = getattr(self, f"_write_{fmt}")
        writer(report, path)
        self.logger.info(f"报告已保存: {path} ({fmt})")
        return path

    def _write_json(self, report: Dict[str, Any], path: str):
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(report, f, ensure_ascii=False, indent=2)

    def render_text(self, report: Dict[str, Any]) -> str:
        lines = [f"# {report.get('title', '分析报告')}", f"生成时间: {datetime.now().isoformat(timespec='seconds')}", ""]
        rows = growth_rows(report)
        if rows:
            lines.append("曲线增长:")
            for row in rows:
                extra = f", 极限 {row['limit']}" if row['limit'] != '' else ""
                verdict = f", {row['verdict']}" if row['verdict'] else ""
                lines.append(f"  {row['curve']}: {row['class']}{extra}{verdict}")
            lines.append("")
        for key, value in _flatten({k: v for k, v in report.items() if k not in ('growth', 'title')}):
            lines.append(f"{key}: {value}")
        return "\n".join(lines) + "\n"

    def _write_txt(self, report: Dict[str, Any], path: str):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(self.render_text(report))

    def _write_csv(self, report: Dict[str, Any], path: str):
        rows = growth_rows(report)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            if rows:
                writer = csv.DictWriter(f, fieldnames=list(rows[0]))
                writer.writeheader()
                writer.writerows(rows)
            else:
                writer = csv.writer(f)
                writer.writerow(['key', 'value'])
                writer.writerows(_flatten(report))

    def _write_xlsx(self, report: Dict[str, Any], path: str):
        wb = openpyxl.Workbook()
        ws = wb.active
        ws.title = "概要"
        self._create_summary_sheet(ws, report)

        rows = growth_rows(report)
        if rows:
            self._create_growth_sheet(wb.create_sheet("曲线增长"), rows)
        matrices = report.get('matrices') or {}
        for name, matrix in matrices.items():
            if isinstance(matrix, dict) and 'rows' in matrix:
                self._create_matrix_sheet(wb.create_sheet(f"矩阵{name}"), matrix['ids'], matrix['rows'])
        wb.save(path)

    def _header_row(self, ws, row: int, headers: List[str]):
        for col, header in enumerate(headers, 1):
            cell = ws.cell(row=row, column=col, value=header)
            cell.font = self.header_font
            cell.fill = self.header_fill
            cell.border = self.default_border
            cell.alignment = self.center_alignment

    def _create_summary_sheet(self, ws, report: Dict[str, Any]):
        title_cell = ws.cell(row=1, column=1, value=report.get('title', '分析报告'))
        title_cell.font = self.title_font
        title_cell.fill = self.title_fill
        title_cell.border = self.thick_border
        title_cell.alignment = self.center_alignment
        ws.merge_cells('A1:B1')

        self._header_row(ws, 3, ["项目", "值"])
        items = _flatten({k: v for k, v in report.items() if k not in ('growth', 'matrices', 'title')})
        for row, (key, value) in enumerate(items, 4):
            ws.cell(row=row, column=1, value=key).border = self.default_border
            cell = ws.cell(row=row, column=2, value=value if isinstance(value, (int, float, str)) else str(value))
            cell.border = self.default_border
            cell.alignment = self.left_alignment
            if value is True:
                cell.fill = self.success_fill
            elif value is False:
                cell.fill = self.error_fill
        ws.column_dimensions['A'].width = 40
        ws.column_dimensions['B'].width = 60

    def _create_growth_sheet(self, ws, rows: List[Dict[str, Any]]):
        headers = ["曲线", "增长类型", "极限", "深度", "分离结论"]
        self._header_row(ws, 1, headers)
        for r, row in enumerate(rows, 2):
            for c, key in enumerate(('curve', 'class', 'limit', 'depth', 'verdict'), 1):
                cell = ws.cell(row=r, column=c, value=row[key])
                cell.font = self.content_font
                cell.border = self.default_border
                cell.alignment = self.left_alignment
            status = ws.cell(row=r, column=2)
            if row['class'] == 'Coiling':
                status.fill = self.warning_fill
            elif row['class'] == 'Const1':
                status.fill = self.success_fill
            else:
                status.fill = self.error_fill
        for i, width in enumerate([14, 16, 10, 10, 14], 1):
            ws.column_dimensions[get_column_letter(i)].width = width

    def _create_matrix_sheet(self, ws, ids: List[str], rows: List[List[Any]]):
        self._header_row(ws, 1, [""] + list(ids))
        for r, (cid, values) in enumerate(zip(ids, rows), 2):
            head = ws.cell(row=r, column=1, value=cid)
            head.font = self.header_font
            head.fill = self.header_fill
            head.border = self.default_border
            for c, value in enumerate(values, 2):
                cell = ws.cell(row=r, column=c, value=value)
                cell.font = self.number_font
                cell.border = self.default_border
                cell.alignment = self.right_alignment
        for i in range(1, len(ids) + 2):
            ws.column_dimensions[get_column_letter(i)].width = 12


# 全局导出器实例
report_exporter = ReportExporter()
