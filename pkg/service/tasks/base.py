"""Interface of an analysis task."""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any


class BaseTask(ABC):
    """One analysis over one or two parsed graphs."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Value of ``task`` in execute requests."""

    @property
    @abstractmethod
    def description(self) -> str:
        """Shown by ``GET /api/tasks``."""

    @property
    def needs_second_graph(self) -> bool:
        return False

    @abstractmethod
    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        """Execute the task.

        ``request`` carries ``graph`` (and ``graph2`` when
        ``needs_second_graph``) as parsed ``ColoredGraph`` objects, the raw
        ``params`` dict and the active ``settings``.

        Must return a dict with at least ``{"success": bool, "summary": str}``.
        An optional ``steps`` list is reported as the response logs; every
        other key becomes the response ``data``.
        """
