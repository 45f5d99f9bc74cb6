import logging
from typing import Dict

import numpy as np

logger = logging.getLogger(__name__)

UINT64_LIMIT = 1 << 64


class RngStream:
    """
    Splittable uniform stream keyed by (master_seed, stream_index).

    Backed by numpy's Philox counter-based generator. The key is derived with
    SeedSequence(entropy=master_seed, spawn_key=(stream_index, *lanes)), so
    the output is a pure function of the key and distinct stream indices give
    independent sequences. Lanes are sub-streams (e.g. coupling flips).
    """

    BLOCK_SIZE = 4096

    def __init__(self, master_seed: int, stream_index: int = 0, lanes: tuple = ()):
        for label, value in (('master_seed', master_seed), ('stream_index', stream_index)):
            if not (0 <= int(value) < UINT64_LIMIT):
                raise ValueError(f"{label} must be a 64-bit unsigned integer, got {value}")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        self.lanes = tuple(int(lane) for lane in lanes)

        seed_sequence = np.random.SeedSequence(
            entropy=self.master_seed,
            spawn_key=(self.stream_index,) + self.lanes,
        )
        self._generator = np.random.Generator(np.random.Philox(seed_sequence))
        self._buffer = np.empty(0, dtype=np.float64)
        self._cursor = 0
        self._substreams: Dict[int, 'RngStream'] = {}
        self.consumed = 0

    def uniform(self) -> float:
        if self._cursor >= self._buffer.shape[0]:
            self._buffer = self._generator.random(self.BLOCK_SIZE)
            self._cursor = 0
        value = float(self._buffer[self._cursor])
        self._cursor += 1
        self.consumed += 1
        return value

    def peek_block(self, count: int) -> np.ndarray:
        """Next `count` variates without consuming them; pair with advance()"""
        available = self._buffer.shape[0] - self._cursor
        if available < count:
            fresh = self._generator.random(max(count - available, self.BLOCK_SIZE))
            self._buffer = np.concatenate((self._buffer[self._cursor:], fresh))
            self._cursor = 0
        return self._buffer[self._cursor:self._cursor + count]

    def advance(self, count: int):
        if count < 0 or self._cursor + count > self._buffer.shape[0]:
            raise ValueError(f"Cannot advance stream by {count} variates")
        self._cursor += count
        self.consumed += count

    def uniforms(self, count: int) -> np.ndarray:
        block = self.peek_block(count).copy()
        self.advance(count)
        return block

    def substream(self, lane: int) -> 'RngStream':
        """Persistent independent sub-stream identified by a lane number"""
        if lane not in self._substreams:
            self._substreams[lane] = RngStream(self.master_seed, self.stream_index, self.lanes + (lane,))
        return self._substreams[lane]

    @staticmethod
    def stream_index_for(group_index: int, trial_index: int) -> int:
        """Stream index of one trial inside one experiment group"""
        return (int(group_index) << 32) | int(trial_index)

    def __repr__(self):
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index}, lanes={self.lanes})"
