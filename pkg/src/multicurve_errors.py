#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常类型定义
继承 ValueError / RuntimeError，调用方按原有方式捕获即可
"""

from typing import List, Optional


class SystemFormatError(ValueError):
    """曲线系统 JSON 无法读取或格式错误"""


class StabilityError(ValueError):
    """曲线子集不稳定或不是预稳定的"""

    def __init__(self, message: str, curve: Optional[str] = None):
        super().__init__(message)
        self.curve = curve


class DecompositionTreeError(ValueError):
    """片与曲线构成的对偶图不是树"""


class PieceDynamicsError(ValueError):
    """片映射在合并后不是良定义的"""


class NotPeriodicError(ValueError):
    """要求周期的曲线或片不是周期的"""


class ClassificationError(RuntimeError):
    """增长分类的图判据与迭代结果不一致"""


class RealizabilityError(RuntimeError):
    """单侧性检查失败，输入不能由 PCF 映射实现"""


class ConvergenceError(RuntimeError):
    """迭代未收敛，trace 中保留迭代记录或残差"""

    def __init__(self, message: str, trace: Optional[List] = None):
        super().__init__(message)
        self.trace = list(trace or [])
