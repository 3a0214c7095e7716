"""
Tambara Workbench Configuration
"""
import os
import json
import logging
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


def load_config_file(path: Path) -> dict:
    """Sections of a config.json; a missing file is empty, a malformed one is ignored with a warning"""
    if not path.exists():
        return {}
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.warning(f"Ignoring {path}: {e}; using environment and defaults")
        return {}
    if not isinstance(data, dict):
        logger.warning(f"Ignoring {path}: expected a JSON object of sections")
        return {}
    return data


# config.json first, then environment variables, then defaults
config_file = Path('config.json')
config_data = load_config_file(config_file)


class WorkbenchConfig:
    """Global limits for exact enumeration"""
    workbench_config = config_data.get('workbench', {})

    SCHEMA_VERSION = 1

    # Rings larger than this are never enumerated
    ENUMERATION_CAP = int(workbench_config.get('enumeration_cap') or os.getenv('TAMBARA_CAP', '65536'))

    # Dependent products grow like k^n in the fiber size n
    MAX_MIDDLE_POINTS = int(workbench_config.get('max_middle_points') or os.getenv('TAMBARA_MAX_MIDDLE', '100000'))

    MAX_GROUP_ORDER = int(workbench_config.get('max_group_order', 24))


class CheckConfig:
    """Axiom checker settings"""
    checks_config = config_data.get('checks', {})

    DEFAULT_SEED = int(checks_config.get('seed', 7))
    DEFAULT_BUDGET = int(checks_config.get('budget') or os.getenv('TAMBARA_BUDGET', '500'))

    # Inputs are enumerated instead of sampled when the source level is this small
    EXHAUSTIVE_LEVEL_LIMIT = int(checks_config.get('exhaustive_level_limit', 32))

    # Orbits per random G-set and fiber sizes in random bispans
    MAX_SAMPLE_ORBITS = int(checks_config.get('max_sample_orbits', 2))
    MAX_SAMPLE_POINTS = int(checks_config.get('max_sample_points', 8))

    FIELDLIKE_EXHAUSTIVE_LIMIT = int(checks_config.get('fieldlike_exhaustive_limit', 64))


class SearchConfig:
    """Caps for exhaustive searches"""
    search_config = config_data.get('search', {})

    IDEMPOTENT_CAP = int(search_config.get('idempotent_cap', 2 ** 16))
    HOM_SEARCH_CAP = int(search_config.get('hom_search_cap') or os.getenv('TAMBARA_HOM_CAP', '1000000'))
    CLOSURE_TOWER_CAP = int(search_config.get('closure_tower_cap', 4))


class DataConfig:
    """Input and log locations"""
    data_config = config_data.get('data', {})

    SAMPLES_DIR = data_config.get('samples_dir', 'samples')
    LOGS_DIR = data_config.get('logs_dir') or os.getenv('TAMBARA_LOGS_DIR', 'logs')
    LOG_FILE = 'workbench.log'
