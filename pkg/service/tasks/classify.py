"""Refinable / threshold / deficiency report."""

from __future__ import annotations

from dataclasses import asdict
from typing import Any

from ktinhofer.hierarchy import classify
from service.tasks.base import BaseTask


class ClassifyTask(BaseTask):

    @property
    def name(self) -> str:
        return "classify"

    @property
    def description(self) -> str:
        return "Discrete, refinable, Tinhofer threshold and deficiency of the graph."

    def run(self, request: dict[str, Any]) -> dict[str, Any]:
        report = classify(request["graph"], settings=request["settings"])
        return {
            "success": True,
            "summary": f"threshold {report.threshold} of n={report.n}"
                       + (" (Tinhofer)" if report.is_tinhofer else ""),
            **asdict(report),
        }
