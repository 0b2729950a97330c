"""k-Tinhofer membership with an optional witness."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field

from ktinhofer.hierarchy import check
from ktinhofer.tinhofer import CellSelector
from service.tasks.base import BaseTask


class KtinParams(BaseModel):
    k: int = Field(ge=0)
    method: Literal["op", "alg", "irtree"] = "op"
    prune: bool = False
    selector: CellSelector = CellSelector.MIN_COLOR
    seed: int = 0


class KtinTask(BaseTask):

    @property
    def name(self) -> str:
        return "ktin"

    @property
    def description(self) -> str:
        return "Decide k-Tinhofer membership (operational, algebraic or IR-tree check)."

    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        params = KtinParams(**request["params"])
        kwargs: dict[str, Any] = {"settings": request["settings"]}
        if params.method != "alg":
            kwargs["prune"] = params.prune
        if params.method == "irtree":
            kwargs.update(sel=params.selector, seed=params.seed)
        verdict = check(request["graph"], params.k, params.method, **kwargs)

        witness = None
        if verdict.witness is not None:
            gamma, mu = verdict.witness
            witness = {"g": [v + 1 for v in gamma], "h": [v + 1 for v in mu]}
        return {
            "success": True,
            "summary": f"{'member' if verdict.member else 'not a member'} at k={params.k} ({verdict.method})",
            "member": verdict.member,
            "witness": witness,
            "nodes": verdict.nodes,
        }
