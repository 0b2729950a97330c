"""Automorphism group size and orbits, optionally with fixed vertices."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel

from ktinhofer.groups import automorphisms, orbit_partition
from service.tasks.base import BaseTask


class OrbitParams(BaseModel):
    fix: list[int] = []  # 1-based


class OrbitsTask(BaseTask):

    @property
    def name(self) -> str:
        return "orbits"

    @property
    def description(self) -> str:
        return "Orbits of the pointwise stabilizer of the fixed vertices."

    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        params = OrbitParams(**request["params"])
        auts = automorphisms(request["graph"], [v - 1 for v in params.fix], settings=request["settings"])
        orbits = [[v + 1 for v in orbit] for orbit in orbit_partition(auts).classes]
        return {
            "success": True,
            "summary": f"|Aut| = {len(auts)}, {len(orbits)} orbits",
            "group_order": len(auts),
            "orbits": orbits,
        }
