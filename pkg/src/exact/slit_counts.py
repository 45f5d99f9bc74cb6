import logging
from typing import List

import numpy as np

from src.experiments.constants import slit_count_constant

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 14
STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _forbidden(x: int, y: int) -> bool:
    return y == 0 and x >= 0


def slit_walk_counts(n_max: int) -> List[int]:
    """
    a_0..a_{n_max}: walks from the origin that avoid {(x, 0): x >= 0}
    at every time >= 1. Exact Python integers (they grow like 4^n).
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")

    size = 2 * n_max + 3
    o = n_max + 1
    counts = np.zeros((size, size), dtype=object)
    counts[o, o] = 1
    result = [1]

    for _ in range(n_max):
        new = np.zeros((size, size), dtype=object)
        new[1:, :] += counts[:-1, :]
        new[:-1, :] += counts[1:, :]
        new[:, 1:] += counts[:, :-1]
        new[:, :-1] += counts[:, 1:]
        new[o:, o] = 0
        counts = new
        result.append(int(counts.sum()))

    return result


def enumerate_slit_walks(n: int) -> List[int]:
    """Same counts by depth-first enumeration of all 4^n walks (pruned at the slit)"""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > EXHAUSTIVE_LIMIT:
        raise ValueError(f"Exhaustive enumeration is limited to n <= {EXHAUSTIVE_LIMIT}")

    counts = [0] * (n + 1)

    def extend(x: int, y: int, depth: int):
        counts[depth] += 1
        if depth == n:
            return
        for dx, dy in STEPS:
            nx, ny = x + dx, y + dy
            if not _forbidden(nx, ny):
                extend(nx, ny, depth + 1)

    extend(0, 0, 0)
    return counts


def count_ratio(n: int, counts: List[int] = None) -> float:
    """(a_n / 4^n) * n^{1/4}, which tends to slit_count_constant()"""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    counts = counts if counts is not None and len(counts) > n else slit_walk_counts(n)
    return (counts[n] / 4 ** n) * n ** 0.25


def exact_table(n_max: int) -> List[dict]:
    """Rows n, a_n, a_n/4^n and the normalised ratio for the table dump"""
    counts = slit_walk_counts(n_max)
    limit = slit_count_constant()
    rows = []
    for n, a_n in enumerate(counts):
        ratio = (a_n / 4 ** n) * n ** 0.25 if n > 0 else None
        rows.append({
            'n': n,
            'a_n': a_n,
            'a_n_over_4n': a_n / 4 ** n,
            'ratio': ratio,
            'ratio_over_limit': ratio / limit if n > 0 else None,
        })
    return rows
