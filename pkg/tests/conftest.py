from __future__ import annotations

import os
import sys

import pytest

os.environ.setdefault('FLASK_ENV', 'testing')
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algnum import cyc_context  # noqa: E402
from armodel import ar_model  # noqa: E402
from chebrings import FoldingType  # noqa: E402
from config import TestingConfig  # noqa: E402


@pytest.fixture
def ctx4():
    """Q(2cos π/8), the field of the A7 and D5 foldings"""
    return cyc_context(4)


@pytest.fixture
def a3():
    return ar_model(FoldingType.parse('A3'))


@pytest.fixture
def a7():
    return ar_model(FoldingType.parse('A7'))


@pytest.fixture
def d5():
    return ar_model(FoldingType.parse('D5'))


@pytest.fixture
def cfg():
    return TestingConfig
