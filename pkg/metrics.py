"""
Prometheus metrics for the colouring searches and the closure.

The command line is short-lived, so metrics are written to a text file in the
exposition format instead of being served.
"""

import time
from contextlib import contextmanager
from typing import Iterator

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

REGISTRY = CollectorRegistry()

SEARCH_NODES = Counter(
    "symflex_search_nodes_total", "Partial assignments visited", ["kind"], registry=REGISTRY
)
SEARCH_PRUNED = Counter(
    "symflex_search_pruned_total", "Partial assignments pruned by an almost-cycle", ["kind"], registry=REGISTRY
)
COLOURINGS_FOUND = Counter(
    "symflex_colourings_found_total", "Colourings emitted by enumeration", ["kind"], registry=REGISTRY
)
CLOSURE_ROUNDS = Counter(
    "symflex_closure_rounds_total", "Constant distance closure rounds that added edges", registry=REGISTRY
)
OPERATION_DURATION = Histogram(
    "symflex_operation_duration_seconds", "Operation duration", ["operation"], registry=REGISTRY
)


@contextmanager
def timed(operation: str) -> Iterator[None]:
    """Observe the wall time of the enclosed block."""
    start = time.perf_counter()
    try:
        yield
    finally:
        OPERATION_DURATION.labels(operation=operation).observe(time.perf_counter() - start)


def write_metrics(path: str) -> None:
    """Dump the registry in the Prometheus text format."""
    write_to_textfile(path, REGISTRY)
