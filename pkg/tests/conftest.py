"""
Shared fixtures
"""
import numpy as np
import pytest

from grassmoment.core.cache import cache

SEED = 0xC0FFEE


@pytest.fixture
def rng():
    """固定种子的随机数发生器"""
    return np.random.default_rng(SEED)


@pytest.fixture(autouse=True)
def clear_cache():
    """每个测试前清空接口缓存"""
    cache.clear()
    yield
    cache.clear()
