from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar
import logging

from . import config

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Map ``fn`` over ``items`` on a thread pool, keeping input order.

    ``BOLTZMANN_GATE_THREADS=1`` runs everything inline.
    """
    items = list(items)
    if not items:
        return []
    if config.GATE_THREADS == 1 or len(items) == 1:
        return [fn(item) for item in items]
    logger.debug(f"🔍 parallel_map over {len(items)} items, max_workers={config.GATE_THREADS}")
    with ThreadPoolExecutor(max_workers=config.GATE_THREADS) as pool:
        return list(pool.map(fn, items))
