"""Configuration loader: reads a .env file using only stdlib (no python-dotenv).

Every bound the search engines respect lives here so a run can be widened
from the environment without touching code.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

ENGINES = ("fast", "naive")


def _load_dotenv(path=None):
    """Load variables from a .env file into os.environ."""
    if path is None:
        path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", ".env")
    if not os.path.isfile(path):
        return
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            # Strip surrounding quotes
            if len(value) >= 2 and value[0] == value[-1] and value[0] in ('"', "'"):
                value = value[1:-1]
            os.environ.setdefault(key, value)


_load_dotenv()


@dataclass(frozen=True)
class Settings:
    """Validated runtime limits."""

    enum_bound: int = 64
    group_cap: int = 1_000_000
    tree_node_cap: int = 1_000_000
    search_node_cap: int = 5_000_000
    engine: str = "fast"
    perf_seconds: float = 2.0
    log_level: str = "WARNING"


_INT_VARS = {
    "KTIN_ENUM_BOUND": "enum_bound",
    "KTIN_GROUP_CAP": "group_cap",
    "KTIN_TREE_NODE_CAP": "tree_node_cap",
    "KTIN_SEARCH_NODE_CAP": "search_node_cap",
}


def get_config() -> Settings:
    """Load and validate configuration from environment."""
    defaults = Settings()
    values: dict = {}
    invalid = []

    for var, field in _INT_VARS.items():
        raw = os.getenv(var, "")
        if not raw:
            continue
        try:
            parsed = int(raw)
        except ValueError:
            invalid.append(f"{var}={raw!r} (expected an integer)")
            continue
        if parsed <= 0:
            invalid.append(f"{var}={raw!r} (must be positive)")
            continue
        values[field] = parsed

    engine = os.getenv("KTIN_ENGINE", defaults.engine).strip().lower()
    if engine not in ENGINES:
        invalid.append(f"KTIN_ENGINE={engine!r} (expected one of {', '.join(ENGINES)})")
    else:
        values["engine"] = engine

    raw_perf = os.getenv("KTIN_PERF_SECONDS", "")
    if raw_perf:
        try:
            perf = float(raw_perf)
            if perf <= 0:
                raise ValueError
            values["perf_seconds"] = perf
        except ValueError:
            invalid.append(f"KTIN_PERF_SECONDS={raw_perf!r} (expected a positive number)")

    values["log_level"] = os.getenv("KTIN_LOG_LEVEL", defaults.log_level).upper()

    if invalid:
        raise ValueError(
            f"Invalid environment variables: {', '.join(invalid)}\n"
            f"Fix them in the environment or in .env."
        )

    return Settings(**values)
