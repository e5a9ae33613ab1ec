import threading
from typing import Callable, Dict, Hashable, TypeVar

from fundgroup.kernel.caching.logic import CacheEntry

T = TypeVar("T")


class ComputationCache:
    """
    Per-run memo of projection, stabilizer and transporter results.
    """

    def __init__(self) -> None:
        self._entries: Dict[Hashable, CacheEntry] = {}
        self._lock = threading.Lock()

    def get_or_compute(self, key: Hashable, compute: Callable[[], T]) -> T:
        with self._lock:
            entry = self._entries.get(key)
            if entry is not None:
                entry.hits += 1
                return entry.value  # type: ignore[no-any-return]
        value = compute()
        with self._lock:
            self._entries.setdefault(key, CacheEntry(key=key, value=value))
        return value

    def __len__(self) -> int:
        return len(self._entries)

    def hits(self) -> int:
        return sum(e.hits for e in self._entries.values())

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
