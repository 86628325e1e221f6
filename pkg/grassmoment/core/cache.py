"""
缓存管理模块
"""
import logging
import time
from functools import wraps
from typing import Any, Callable, Dict, Optional

logger = logging.getLogger(__name__)


class SimpleCache:
    """简单内存缓存（确定性报告）"""

    def __init__(self) -> None:
        self._cache: Dict[str, Dict[str, Any]] = {}

    def get(self, key: str) -> Optional[Any]:
        """获取缓存值"""
        item = self._cache.get(key)
        if item is None:
            return None
        if time.time() < item["expires_at"]:
            return item["value"]
        del self._cache[key]
        return None

    def set(self, key: str, value: Any, ttl: int = 300) -> None:
        """设置缓存值"""
        self._cache[key] = {"value": value, "expires_at": time.time() + ttl}

    def clear(self) -> None:
        """清空所有缓存"""
        self._cache.clear()

    def get_stats(self) -> Dict[str, int]:
        """获取缓存统计信息"""
        now = time.time()
        active = sum(1 for item in self._cache.values() if now < item["expires_at"])
        return {
            "total_items": len(self._cache),
            "active_items": active,
            "expired_items": len(self._cache) - active,
        }


# 全局缓存实例
cache = SimpleCache()


def cached(ttl: int = 300, key_prefix: str = "") -> Callable:
    """缓存装饰器，用于异步接口"""

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        async def wrapper(*args: Any, **kwargs: Any) -> Any:
            cache_key = f"{key_prefix}:{func.__name__}:{args!r}:{sorted(kwargs.items())!r}"

            hit = cache.get(cache_key)
            if hit is not None:
                logger.debug(f"Cache hit for {cache_key}")
                return hit

            result = await func(*args, **kwargs)
            cache.set(cache_key, result, ttl)
            logger.debug(f"Cache miss for {cache_key}, cached for {ttl}s")
            return result

        return wrapper

    return decorator
