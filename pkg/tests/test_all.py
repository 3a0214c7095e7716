"""
Package sanity checks: modules import, dependencies resolve, configuration is coherent.
Run directly for the sanity checks followed by the full suite.
"""
import importlib
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

WORKBENCH_MODULES = ['errors', 'config', 'groups', 'gsets', 'bispans', 'rings', 'tambara_core',
                     'constructions', 'ideals_fields', 'free_poly', 'classification', 'io_formats', 'main']

# import name -> requirements name
THIRD_PARTY = {'numpy': 'numpy', 'pandas': 'pandas', 'sympy': 'sympy', 'dotenv': 'python-dotenv',
               'hypothesis': 'hypothesis'}


@pytest.mark.parametrize('module', WORKBENCH_MODULES)
def test_imports(module):
    """Every workbench module imports on its own"""
    importlib.import_module(module)


def test_dependencies():
    """Third-party packages from both requirement files are installed"""
    missing = []
    for name, requirement in THIRD_PARTY.items():
        try:
            importlib.import_module(name)
        except ImportError:
            missing.append(requirement)
    assert not missing, f"Install {', '.join(missing)}"


def test_configuration():
    """Caps are positive and the sample and log locations are set"""
    from config import CheckConfig, DataConfig, SearchConfig, WorkbenchConfig

    assert WorkbenchConfig.SCHEMA_VERSION == 1
    assert min(WorkbenchConfig.ENUMERATION_CAP, WorkbenchConfig.MAX_MIDDLE_POINTS) > 0
    assert WorkbenchConfig.MAX_GROUP_ORDER >= 8
    assert CheckConfig.MAX_SAMPLE_ORBITS >= 1 and CheckConfig.MAX_SAMPLE_POINTS >= 2
    assert CheckConfig.FIELDLIKE_EXHAUSTIVE_LIMIT <= WorkbenchConfig.ENUMERATION_CAP
    assert SearchConfig.IDEMPOTENT_CAP > 0 and SearchConfig.HOM_SEARCH_CAP > 0
    assert SearchConfig.CLOSURE_TOWER_CAP >= 1
    assert DataConfig.LOG_FILE.endswith('.log')
    assert DataConfig.SAMPLES_DIR


def test_samples_carry_versions():
    """Every bundled sample declares the current schema version"""
    from config import DataConfig, WorkbenchConfig
    from io_formats import read_document

    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    samples = os.path.join(root, DataConfig.SAMPLES_DIR)
    names = sorted(n for n in os.listdir(samples) if n.endswith('.json'))
    assert names
    for name in names:
        assert read_document(os.path.join(samples, name))['schema_version'] == WorkbenchConfig.SCHEMA_VERSION


if __name__ == "__main__":
    print("🧮 Tambara Workbench sanity checks")
    for module in WORKBENCH_MODULES:
        test_imports(module)
    test_dependencies()
    test_configuration()
    print("✅ Imports, dependencies and configuration look good")
    sys.exit(pytest.main([os.path.dirname(os.path.abspath(__file__)), "-q"]))
