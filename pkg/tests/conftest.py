"""
测试共用的 fixture：内置示例分布与固定种子的随机源
"""
import random

import pytest

from simpol.fixtures import load_fixture


@pytest.fixture
def pr_box():
    return load_fixture("pr_box")


@pytest.fixture
def trichotomic():
    return load_fixture("trichotomic")


@pytest.fixture
def bell_233():
    return load_fixture("bell_233")


@pytest.fixture
def cycle_z4():
    return load_fixture("cycle2_z4_order3")


@pytest.fixture
def uniform_c3():
    return load_fixture("uniform_c3_d2")


@pytest.fixture
def rng():
    return random.Random(20240501)
