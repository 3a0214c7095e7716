"""
Tests for config.json loading
"""
import logging

from config import load_config_file


class TestConfigFile:
    """Tests for the config.json layer"""

    def test_missing_file(self, tmp_path):
        assert load_config_file(tmp_path / 'config.json') == {}

    def test_sections_are_read(self, tmp_path):
        path = tmp_path / 'config.json'
        path.write_text('{"checks": {"budget": 9}}')
        assert load_config_file(path) == {'checks': {'budget': 9}}

    def test_malformed_json_warns(self, tmp_path, caplog):
        """A truncated file falls back to the environment with a warning"""
        path = tmp_path / 'config.json'
        path.write_text('{"workbench": ')
        with caplog.at_level(logging.WARNING, logger='config'):
            assert load_config_file(path) == {}
        assert 'Ignoring' in caplog.text

    def test_non_object_warns(self, tmp_path, caplog):
        path = tmp_path / 'config.json'
        path.write_text('[1, 2]')
        with caplog.at_level(logging.WARNING, logger='config'):
            assert load_config_file(path) == {}
        assert 'JSON object' in caplog.text
