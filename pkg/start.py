#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
统一启动脚本 - 多重曲线分解工具
检查依赖后把命令行参数交给 multicurve_tool
"""

import sys
import os


REQUIRED = {
    'numpy': 'numpy',
    'networkx': 'networkx',
    'Pillow': 'PIL',
    'openpyxl': 'openpyxl',
}


def missing_dependencies():
    missing = []
    for package, module in REQUIRED.items():
        try:
            __import__(module)
        except ImportError:
            missing.append(package)
    return missing


def main():
    """主启动函数"""
    missing = missing_dependencies()
    if missing:
        print(f"⚠️  缺少依赖库: {', '.join(missing)}", file=sys.stderr)
        print(f"命令: pip install {' '.join(missing)}", file=sys.stderr)
        return 1

    base = getattr(sys, '_MEIPASS', os.path.dirname(os.path.abspath(__file__)))
    sys.path.insert(0, os.path.join(base, 'src'))
    from multicurve_tool import main as cli_main
    return cli_main(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
