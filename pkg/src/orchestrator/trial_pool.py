import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional

import psutil

from src.core.rng import RngStream

logger = logging.getLogger(__name__)

TrialFn = Callable[[Dict[str, Any], RngStream], Dict[str, Any]]


def resolve_workers(workers: Optional[int]) -> int:
    """0 or None means one worker per physical core"""
    if workers is None or int(workers) <= 0:
        return psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
    return int(workers)


def _run_one(task) -> Dict[str, Any]:
    trial_fn, params, master_seed, group_index, trial_index = task
    rng = RngStream(master_seed, RngStream.stream_index_for(group_index, trial_index))
    row = trial_fn(params, rng)
    row['trial'] = trial_index
    return row


class TrialPool:
    """
    Runs independent trials and returns their rows in trial order.

    Trial i of group g always draws from RngStream(master_seed, g*2^32 + i),
    so the rows do not depend on how many workers execute them.
    """

    def __init__(self, workers: int = 1, chunk_size: int = 0):
        self.workers = resolve_workers(workers)
        self.chunk_size = int(chunk_size)

    def run(self, trial_fn: TrialFn, params: Dict[str, Any], trials: int,
            master_seed: int, group_index: int = 0) -> List[Dict[str, Any]]:
        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials}")
        tasks = [(trial_fn, params, master_seed, group_index, i) for i in range(trials)]
        return self.map(_run_one, tasks)

    def map(self, fn: Callable[[Any], Any], items: List[Any]) -> List[Any]:
        """Order-preserving map over picklable items"""
        if self.workers == 1 or len(items) <= 1:
            return [fn(item) for item in items]

        chunk_size = self.chunk_size or max(1, len(items) // (4 * self.workers))
        logger.debug(f"Dispatching {len(items)} tasks to {self.workers} workers (chunk {chunk_size})")
        with ProcessPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(fn, items, chunksize=chunk_size))
