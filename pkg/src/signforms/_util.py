"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def pmap(fn, items, workers: int = 1) -> list:
    """Map preserving item order.

    Results depend only on the items, never on the worker count: callers key
    all randomness by item index and merge by position.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def split_range(start: int, stop: int, parts: int) -> list[tuple[int, int]]:
    """Split [start, stop) into at most `parts` contiguous nonempty ranges."""
    total = stop - start
    if total <= 0:
        return []
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out = []
    lo = start
    for i in range(parts):
        hi = lo + step + (1 if i < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out
