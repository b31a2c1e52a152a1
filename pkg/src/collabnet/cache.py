"""Thread-safe TTL + LRU cache for page-level response bodies."""

from __future__ import annotations

import threading
import time
from collections import OrderedDict


class TtlLruCache:
    """Bounded mapping with per-entry expiry and least-recently-used eviction.

    The clock is injectable so expiry is testable without sleeping.
    """

    def __init__(self, ttl_s: float = 3600.0, max_entries: int = 10_000, clock=time.monotonic):
        if ttl_s <= 0 or max_entries < 1:
            raise ValueError("ttl_s must be positive and max_entries at least 1")
        self.ttl_s = ttl_s
        self.max_entries = max_entries
        self.clock = clock
        self._lock = threading.Lock()
        self._entries: OrderedDict[object, tuple[float, object]] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        """Value for key, or None when absent or expired."""
        with self._lock:
            item = self._entries.get(key)
            if item is None:
                self.misses += 1
                return None
            expires_at, value = item
            if self.clock() >= expires_at:
                del self._entries[key]
                self.misses += 1
                return None
            self._entries.move_to_end(key)
            self.hits += 1
            return value

    def put(self, key, value) -> None:
        with self._lock:
            self._entries[key] = (self.clock() + self.ttl_s, value)
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
