"""Stable coloring and quotient graph of one graph."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel

from ktinhofer.refinement import quotient, refine
from service.tasks.base import BaseTask


class RefineParams(BaseModel):
    engine: str | None = None
    with_quotient: bool = False


class RefineTask(BaseTask):

    @property
    def name(self) -> str:
        return "refine"

    @property
    def description(self) -> str:
        return "Canonical stable coloring (color refinement) of the graph."

    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        params = RefineParams(**request["params"])
        g = request["graph"]
        pi = refine(g, engine=params.engine, settings=request["settings"])
        result: dict[str, Any] = {
            "success": True,
            "summary": f"{len(pi.classes)} classes after {pi.round_count} rounds"
                       + (" (discrete)" if pi.is_discrete else ""),
            "colors": list(pi.assignment),
            "classes": len(pi.classes),
            "rounds": pi.round_count,
            "discrete": pi.is_discrete,
        }
        if params.with_quotient:
            q = quotient(g, pi)
            result["quotient"] = {
                "nodes": [list(node) for node in q.nodes],
                "arcs": [[ci, cj, count] for (ci, cj), count in q.arcs],
            }
        return result
