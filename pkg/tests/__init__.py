"""
Tambara Workbench Test Suite
"""
