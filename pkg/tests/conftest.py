"""
Pytest configuration and fixtures for Tambara Workbench tests
"""
import json
import logging
import os
import tempfile

import pytest

# Add parent directory to path for imports
import sys
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config import DataConfig, WorkbenchConfig
from constructions import burnside_tambara, coinduce, constant, fixed_point
from groups import FiniteGroup
from rings import GaloisField, GRing, IntegersMod


SAMPLES_DIR = os.path.join(os.path.dirname(__file__), '..', 'samples')


@pytest.fixture(scope="session")
def c2():
    return FiniteGroup.cyclic(2)


@pytest.fixture(scope="session")
def c3():
    return FiniteGroup.cyclic(3)


@pytest.fixture(scope="session")
def c4():
    return FiniteGroup.cyclic(4)


@pytest.fixture(scope="session")
def s3():
    return FiniteGroup.symmetric(3)


@pytest.fixture(scope="session")
def trivial_group():
    return FiniteGroup.cyclic(1)


@pytest.fixture
def constant_f3(c2):
    """Constant functor F3 over C2"""
    return constant(c2, GaloisField(3))


@pytest.fixture
def constant_z4(c2):
    return constant(c2, IntegersMod(4))


@pytest.fixture
def coinduced_f2(c2):
    """Coinduction of F2 to C2; bottom level F2 x F2"""
    return coinduce(c2, GaloisField(2))


@pytest.fixture
def frobenius_f4(c2):
    """Fixed points of C2 acting on F4 by Frobenius"""
    return fixed_point(GRing.frobenius(c2, GaloisField(2, 2)))


@pytest.fixture
def burnside_c2(c2):
    return burnside_tambara(c2)


@pytest.fixture
def raised_cap():
    """Temporarily raise the enumeration cap"""
    original = WorkbenchConfig.ENUMERATION_CAP
    WorkbenchConfig.ENUMERATION_CAP = 1 << 18
    yield WorkbenchConfig
    WorkbenchConfig.ENUMERATION_CAP = original


@pytest.fixture
def temp_data_dir():
    """Temporary directory that also receives the log file"""
    with tempfile.TemporaryDirectory() as temp_dir:
        original_logs_dir = DataConfig.LOGS_DIR
        DataConfig.LOGS_DIR = os.path.join(temp_dir, 'logs')

        yield temp_dir

        DataConfig.LOGS_DIR = original_logs_dir


@pytest.fixture
def write_document(temp_data_dir):
    """Write a JSON document into the temp directory and return its path"""
    def write(name, content):
        path = os.path.join(temp_data_dir, name)
        with open(path, 'w') as f:
            json.dump(content, f)
        return path
    return write


@pytest.fixture
def sample_path():
    def path(name):
        return os.path.join(SAMPLES_DIR, name)
    return path


@pytest.fixture
def capture_logs():
    """Capture log messages for testing"""
    from io import StringIO

    log_stream = StringIO()
    handler = logging.StreamHandler(log_stream)
    handler.setLevel(logging.DEBUG)

    logger = logging.getLogger()
    logger.addHandler(handler)
    original_level = logger.level
    logger.setLevel(logging.DEBUG)

    yield log_stream

    logger.removeHandler(handler)
    logger.setLevel(original_level)
