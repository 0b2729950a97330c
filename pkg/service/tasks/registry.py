"""Task lookup by name; every module under ``service/tasks/`` is scanned once."""

from __future__ import annotations

import importlib
import inspect
import logging
import pkgutil
from pathlib import Path

from service.tasks.base import BaseTask

logger = logging.getLogger("service")

_registry: dict[str, type[BaseTask]] = {}
_discovered = False


def _discover():
    global _discovered
    if _discovered:
        return
    _discovered = True

    package_dir = Path(__file__).resolve().parent
    for info in pkgutil.iter_modules([str(package_dir)]):
        if info.name.startswith("_") or info.name in ("base", "registry"):
            continue
        module = importlib.import_module(f"service.tasks.{info.name}")
        for _attr_name, obj in inspect.getmembers(module, inspect.isclass):
            if issubclass(obj, BaseTask) and obj is not BaseTask and not inspect.isabstract(obj):
                try:
                    instance = obj()
                    _registry[instance.name] = obj
                except Exception:
                    logger.exception("skipping broken task %s", obj.__name__)


def get_task(name: str) -> BaseTask:
    _discover()
    if name not in _registry:
        available = ", ".join(sorted(_registry)) or "(none)"
        raise KeyError(f"Unknown task '{name}'. Available: {available}")
    return _registry[name]()


def list_tasks() -> list[dict]:
    _discover()
    result = []
    for name, cls in sorted(_registry.items()):
        instance = cls()
        result.append({
            "name": instance.name,
            "description": instance.description,
        })
    return result
