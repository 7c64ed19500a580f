from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import diffcalc
from compass.learner import DecayParams


@pytest.fixture
def diffcalc_model():
    return diffcalc.build_model()


@pytest.fixture
def diffcalc_pool():
    return diffcalc.build_pool()


@pytest.fixture
def diffcalc_individual():
    return diffcalc.build_individual()


@pytest.fixture
def params():
    return DecayParams()
