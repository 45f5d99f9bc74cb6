"""
Open-addressing hash set of lattice sites for the JIT kernels.

A site is keyed by its full coordinate vector, one int64 column per axis.
Linear scan over a power-of-two table kept at most half full.
"""

import numpy as np

from .jit_support import jit

HASH_MASK = (1 << 62) - 1
MIX_A = 0x27D4EB2F165667C5
MIX_B = 0x165667B19E3779F9


def table_capacity(max_sites: int) -> int:
    capacity = 16
    while capacity < 2 * max_sites:
        capacity *= 2
    return capacity


def new_site_table(max_sites: int, d: int):
    capacity = table_capacity(max_sites)
    keys = np.zeros((capacity, d), dtype=np.int64)
    used = np.zeros(capacity, dtype=np.uint8)
    return keys, used


@jit
def site_hash(pos):
    h = 0
    for i in range(pos.shape[0]):
        h = (h * MIX_A + int(pos[i]) * MIX_B + i) & HASH_MASK
        h ^= h >> 29
    h = (h * MIX_A) & HASH_MASK
    h ^= h >> 31
    return h


@jit
def site_insert(keys, used, pos):
    """Insert a site; True if it was not present before"""
    mask = keys.shape[0] - 1
    d = pos.shape[0]
    i = site_hash(pos) & mask
    while used[i] == 1:
        same = True
        for a in range(d):
            if keys[i, a] != pos[a]:
                same = False
                break
        if same:
            return False
        i = (i + 1) & mask
    used[i] = 1
    for a in range(d):
        keys[i, a] = pos[a]
    return True
