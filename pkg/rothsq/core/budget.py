"""
rothsq Search Budget - Node and Wall-Clock Caps

A circuit breaker for exponential searches: the breaker opens once either the
node cap or the wall-clock cap is reached, and stays open.
"""

import time
from typing import Any, Dict, Optional

from .settings import settings


class SearchBudget:
    """Circuit breaker guarding a backtracking search"""

    def __init__(self, node_limit: Optional[int] = None, time_limit: Optional[float] = None):
        self.node_limit = node_limit if node_limit is not None else settings.node_budget
        self.time_limit = time_limit if time_limit is not None else settings.time_budget
        self.nodes = 0
        self.started = time.monotonic()
        self.state = "closed"  # closed, open
        self.reason: Optional[str] = None

    def record_node(self) -> None:
        """Record one explored node"""
        self.nodes += 1
        if self.nodes >= self.node_limit:
            self._trip("node_limit")
        # the clock is only polled every 1024 nodes
        elif self.nodes & 1023 == 0 and self.elapsed() >= self.time_limit:
            self._trip("time_limit")

    def can_proceed(self) -> bool:
        """Check if the search may continue"""
        if self.state == "closed" and self.elapsed() >= self.time_limit:
            self._trip("time_limit")
        return self.state == "closed"

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def _trip(self, reason: str) -> None:
        self.state = "open"
        self.reason = reason

    def to_dict(self) -> Dict[str, Any]:
        # wall-clock time is left out so reports stay reproducible
        return {
            "nodes": self.nodes,
            "node_limit": self.node_limit,
            "time_limit": self.time_limit,
            "state": self.state,
            "reason": self.reason,
        }
