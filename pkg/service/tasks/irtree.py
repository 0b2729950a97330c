"""IR-tree statistics and DOT export."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from ktinhofer.tinhofer import CellSelector, build_ir_tree, export_dot
from service.tasks.base import BaseTask


class IRTreeParams(BaseModel):
    depth: int = Field(default=1, ge=0)
    selector: CellSelector = CellSelector.MIN_COLOR
    dot: bool = False


class IRTreeTask(BaseTask):

    @property
    def name(self) -> str:
        return "irtree"

    @property
    def description(self) -> str:
        return "Build the IR-tree to a given depth; optionally return it as DOT."

    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        params = IRTreeParams(**request["params"])
        tree = build_ir_tree(request["graph"], params.selector, params.depth, settings=request["settings"])
        levels = [len(tree.level(d)) for d in range(params.depth + 1)]
        leaves = tree.leaves()
        result: dict[str, Any] = {
            "success": True,
            "summary": f"{tree.size} nodes, {len(leaves)} leaves",
            "levels": levels,
            "leaves": len(leaves),
            "discrete_leaves": sum(1 for leaf in leaves if leaf.coloring.is_discrete),
        }
        if params.dot:
            result["dot"] = export_dot(tree)
        return result
