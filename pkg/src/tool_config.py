#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具配置管理器
管理数值容差、迭代上限、渲染默认值和日志级别
"""

import json
import os
import logging
from typing import Dict, Any, Optional
from dataclasses import dataclass, asdict, fields
from datetime import datetime


# MCD_LOG 环境变量取值到日志级别的映射
LOG_LEVELS = {
    "quiet": logging.WARNING,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


@dataclass
class ToolConfig:
    """工具配置类"""
    eigen_tol: float = 1e-9  # 主特征值容差
    eigen_max_iter: int = 100000  # 幂迭代上限
    obstruction_exact_band: float = 1e-6  # |λ-1| 小于该值时改用精确有理判定
    orbit_tol: float = 1e-8  # 临界轨道重复判定容差
    max_orbit: int = 64  # 临界轨道最大长度
    root_tol: float = 1e-12  # 求根精度
    root_max_iter: int = 500  # Aberth 迭代上限
    newton_tol: float = 1e-13  # 一维参数方程残差
    newton_max_iter: int = 50
    refine_tol: float = 1e-10  # 多元参数精化的残差与漂移上限
    render_eps: float = 1e-6  # 吸引周期判定半径
    render_max_iter: int = 10000
    render_px: int = 256
    random_seed: int = 20240613
    log_level: str = "info"


class ToolConfigManager:
    """工具配置管理器"""

    def __init__(self, config_path: Optional[str] = None):
        self.logger = logging.getLogger(__name__)

        # 默认配置路径
        if config_path is None:
            config_path = os.path.join(os.path.dirname(__file__), '..', 'docs', 'tool_config.json')

        self.config_path = config_path
        self.config = ToolConfig()

        # 加载配置
        self.load_config()

    def load_config(self):
        """从文件加载配置，文件不存在时保留默认值"""
        if not os.path.exists(self.config_path):
            self.logger.debug(f"配置文件不存在，使用默认配置: {self.config_path}")
            return

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                config_data = json.load(f)

            self.import_from_dict(config_data.get('settings', config_data))
            self.logger.info(f"从配置文件加载了工具配置: {self.config_path}")

        except Exception as e:
            self.logger.error(f"加载配置文件失败: {e}")

    def save_config(self) -> bool:
        """保存配置到文件"""
        try:
            os.makedirs(os.path.dirname(self.config_path), exist_ok=True)

            config_data = {
                'version': '1.0',
                'created_at': datetime.now().isoformat(),
                'settings': asdict(self.config)
            }

            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(config_data, f, ensure_ascii=False, indent=2)

            self.logger.info(f"配置已保存到: {self.config_path}")
            return True

        except Exception as e:
            self.logger.error(f"保存配置文件失败: {e}")
            return False

    def import_from_dict(self, settings: Dict[str, Any]) -> bool:
        """从字典导入配置，未知键只记录警告"""
        known = {f.name: f.type for f in fields(ToolConfig)}
        values = asdict(self.config)

        for key, value in settings.items():
            if key not in known:
                self.logger.warning(f"忽略未知配置项: {key}")
                continue
            values[key] = value

        try:
            self.config = ToolConfig(**values)
            return True
        except TypeError as e:
            self.logger.error(f"导入配置失败: {e}")
            return False

    def export_to_dict(self) -> Dict[str, Any]:
        """导出配置为字典格式"""
        return asdict(self.config)

    def override(self, **changes) -> ToolConfig:
        """返回带有单次运行覆盖值的配置副本（None 值不覆盖）"""
        values = asdict(self.config)
        values.update({k: v for k, v in changes.items() if v is not None})
        return ToolConfig(**values)


def resolve_log_level(explicit: Optional[str] = None) -> int:
    """根据参数或 MCD_LOG 环境变量得到日志级别"""
    name = (explicit or os.environ.get("MCD_LOG") or tool_config_manager.config.log_level).lower()
    if name not in LOG_LEVELS:
        logging.getLogger(__name__).warning(f"未知日志级别 {name!r}，使用 info")
        name = "info"
    return LOG_LEVELS[name]


def setup_logging(debug: bool = False, explicit: Optional[str] = None):
    """初始化日志（命令行入口调用一次）"""
    level = logging.DEBUG if debug else resolve_log_level(explicit)
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger().setLevel(level)


# 全局工具配置管理器实例
tool_config_manager = ToolConfigManager()
