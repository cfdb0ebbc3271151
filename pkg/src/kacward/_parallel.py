import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def worker_count() -> int:
    """Worker threads for grid evaluations, capped by KACWARD_THREADS."""
    env = os.environ.get("KACWARD_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def map_chunks(fn, n: int, chunk: int) -> np.ndarray:
    """Apply ``fn`` to consecutive slices of range(n) and concatenate in order."""
    slices = [slice(i, min(i + chunk, n)) for i in range(0, n, chunk)]
    workers = min(worker_count(), len(slices))
    if workers <= 1:
        parts = [fn(s) for s in slices]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(fn, slices))
    if not parts:
        return np.empty(0, dtype=complex)
    return np.concatenate(parts)
