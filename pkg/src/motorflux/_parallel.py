"""Optional thread fan-out for independent solves, capped by MOTORFLUX_THREADS."""

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count() -> int:
    """Worker cap from the MOTORFLUX_THREADS environment variable (default 1)."""
    raw = os.environ.get("MOTORFLUX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Map ``fn`` over ``items``, threaded when more than one worker is allowed.

    Results come back in input order, so threading never changes the output.
    """
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
