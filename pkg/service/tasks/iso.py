"""Isomorphism test between ``graph`` and ``graph2``."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel

from ktinhofer.groups import exact_iso
from ktinhofer.tinhofer import CellSelector, ChoicePolicy, fpt_iso, tinhofer_iso
from service.tasks.base import BaseTask


class IsoParams(BaseModel):
    method: Literal["tinhofer", "fpt", "exact"] = "tinhofer"
    selector: CellSelector = CellSelector.MIN_COLOR
    policy: str = "first"
    seed: int = 0
    budget: int | None = None


class IsoTask(BaseTask):

    @property
    def name(self) -> str:
        return "iso"

    @property
    def description(self) -> str:
        return "Isomorphism test (Tinhofer, FPT or exact backtracking) between two graphs."

    @property
    def needs_second_graph(self) -> bool:
        return True

    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        params = IsoParams(**request["params"])
        g, h, settings = request["graph"], request["graph2"], request["settings"]
        pol_g = ChoicePolicy.parse(params.policy, seed=params.seed)
        pol_h = ChoicePolicy.parse(params.policy, seed=params.seed + 1)
        steps: list[str] = []

        if params.method == "tinhofer":
            verdict, transcript = tinhofer_iso(g, h, params.selector, pol_g, pol_h, settings=settings)
            steps = transcript.render().splitlines()
            bijection = verdict.bijection
        elif params.method == "fpt":
            budget = g.n if params.budget is None else params.budget
            bijection = fpt_iso(g, h, budget, params.selector, pol_g, pol_h, settings=settings).bijection
        else:
            bijection = exact_iso(g, h, settings=settings)

        isomorphic = bijection is not None
        return {
            "success": True,
            "summary": f"{params.method}: {'isomorphic' if isomorphic else 'not isomorphic'}",
            "isomorphic": isomorphic,
            "bijection": None if bijection is None else [w + 1 for w in bijection],
            "steps": steps,
        }
