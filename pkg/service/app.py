"""Analysis service: runs registered k-Tinhofer tasks over HTTP."""

import logging
import time
import traceback
from dataclasses import asdict

from fastapi import FastAPI, File, HTTPException, UploadFile
from pydantic import BaseModel

from ktinhofer.config import get_config
from ktinhofer.errors import GraphFormatError, SizeBoundError
from ktinhofer.graph import parse_graph
from ktinhofer.hierarchy import classify
from service.tasks.registry import get_task, list_tasks

app = FastAPI(title="k-Tinhofer Analysis Service")
logger = logging.getLogger("service")


# ---------------------------------------------------------------------------
# Request / response models
# ---------------------------------------------------------------------------

class ExecuteRequest(BaseModel):
    task_id: str
    task: str  # task name, e.g. "ktin"
    graph: str  # cgraph text
    graph2: str | None = None
    params: dict = {}


class ExecuteResponse(BaseModel):
    task_id: str
    task: str
    success: bool
    summary: str
    data: dict = {}  # task-specific structured output
    logs: list[str] = []
    duration: float | None = None


# ---------------------------------------------------------------------------
# Endpoints
# ---------------------------------------------------------------------------

@app.get("/health")
def health():
    """Health check: configuration parses and tasks are loaded."""
    checks = {}
    healthy = True
    try:
        settings = get_config()
        checks["engine"] = settings.engine
        checks["enum_bound"] = settings.enum_bound
    except ValueError as e:
        checks["config"] = str(e)
        healthy = False

    checks["tasks_loaded"] = len(list_tasks())
    healthy = healthy and checks["tasks_loaded"] > 0
    return {
        "status": "ok" if healthy else "unhealthy",
        "checks": checks,
    }


@app.get("/api/tasks")
def tasks_list():
    return {"tasks": list_tasks()}


@app.post("/api/execute", response_model=ExecuteResponse)
def execute_task(req: ExecuteRequest):
    """Parse the graph(s), run the requested task and wrap its result."""

    def failed(summary: str, logs: list[str] | None = None, duration: float | None = None):
        return ExecuteResponse(
            task_id=req.task_id,
            task=req.task,
            success=False,
            summary=summary,
            logs=logs or [],
            duration=duration,
        )

    try:
        task = get_task(req.task)
    except KeyError as e:
        return failed(e.args[0])

    try:
        settings = get_config()
    except ValueError as e:
        return failed(f"Configuration error: {e}")

    try:
        request = {
            "task_id": req.task_id,
            "graph": parse_graph(req.graph),
            "graph2": parse_graph(req.graph2) if req.graph2 is not None else None,
            "params": req.params,
            "settings": settings,
        }
    except GraphFormatError as e:
        return failed(f"Invalid graph: {e}")
    if task.needs_second_graph and request["graph2"] is None:
        return failed(f"Task '{task.name}' needs graph2")

    start_time = time.time()
    try:
        result = task.run(request)
    except Exception as e:
        elapsed = time.time() - start_time
        logger.warning("task %s (%s) failed: %s", req.task_id, req.task, e)
        return failed(f"Task error: {e}", [traceback.format_exc()], round(elapsed, 2))
    elapsed = time.time() - start_time

    # Separate standard fields from task-specific data
    success = result.pop("success", False)
    summary = result.pop("summary", "")
    steps = result.pop("steps", [])
    logger.info("task %s (%s) done in %.2fs: %s", req.task_id, req.task, elapsed, summary)

    return ExecuteResponse(
        task_id=req.task_id,
        task=req.task,
        success=success,
        summary=summary,
        data=result,
        logs=steps,
        duration=round(elapsed, 2),
    )


@app.post("/api/classify-upload")
async def classify_upload(file: UploadFile = File(...)):
    """Classify an uploaded cgraph file."""
    content = await file.read()
    try:
        g = parse_graph(content.decode("utf-8"))
    except (GraphFormatError, UnicodeDecodeError) as e:
        raise HTTPException(status_code=400, detail=f"Invalid graph file: {e}")

    try:
        report = classify(g, settings=get_config())
    except (SizeBoundError, ValueError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    return {"filename": file.filename, **asdict(report)}
