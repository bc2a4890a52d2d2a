#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试脚本：工具配置与日志级别
"""

import logging
import os
import tempfile
import unittest
from unittest.mock import patch

from tool_config import ToolConfig, ToolConfigManager, resolve_log_level


class TestToolConfig(unittest.TestCase):
    """工具配置测试类"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, 'docs', 'tool_config.json')

    def tearDown(self):
        self.tmp.cleanup()

    def test_missing_file_uses_defaults(self):
        manager = ToolConfigManager(self.path)
        self.assertEqual(manager.config, ToolConfig())
        self.assertEqual(manager.config.newton_tol, 1e-13)

    def test_save_and_load(self):
        manager = ToolConfigManager(self.path)
        manager.import_from_dict({'render_px': 64, 'unknown_key': 1})
        self.assertTrue(manager.save_config())
        self.assertEqual(ToolConfigManager(self.path).config.render_px, 64)

    def test_override_ignores_none(self):
        manager = ToolConfigManager(self.path)
        changed = manager.override(random_seed=7, orbit_tol=None)
        self.assertEqual(changed.random_seed, 7)
        self.assertEqual(changed.orbit_tol, manager.config.orbit_tol)
        self.assertEqual(manager.config.random_seed, 20240613)

    def test_log_level(self):
        self.assertEqual(resolve_log_level('debug'), logging.DEBUG)
        with patch.dict(os.environ, {'MCD_LOG': 'quiet'}):
            self.assertEqual(resolve_log_level(), logging.WARNING)
        with patch.dict(os.environ, {'MCD_LOG': 'loud'}):
            self.assertEqual(resolve_log_level(), logging.INFO)


if __name__ == "__main__":
    unittest.main(verbosity=2)
