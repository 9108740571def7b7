"""
Stage monitoring for the pipeline.
Times each stage, logs slow and critical stages, and reports to Sentry when
the SDK is installed and initialised (``SENTRY_DSN`` set).
"""

import functools
import logging
import time
from typing import Callable, Dict, Optional

from django.conf import settings

# Try to import sentry_sdk with fallback
try:
    import sentry_sdk
    SENTRY_AVAILABLE = True
except ImportError:  # pragma: no cover
    SENTRY_AVAILABLE = False
    sentry_sdk = None

logger = logging.getLogger(__name__)

CATEGORY = "xai.stage"


def sentry_active() -> bool:
    return SENTRY_AVAILABLE and sentry_sdk.get_client().is_active()


def stage_thresholds():
    """(slow, critical) stage durations in seconds."""
    return settings.XAI_SLOW_STAGE_SECONDS, settings.XAI_CRITICAL_STAGE_SECONDS


class StageMonitor:
    """Sentry breadcrumbs and local log lines for pipeline stages."""

    @staticmethod
    def add_breadcrumb(message: str, level: str = "info", data: Optional[Dict] = None):
        if sentry_active():
            sentry_sdk.add_breadcrumb(category=CATEGORY, message=message, level=level, data=data or {})

    @staticmethod
    def log_level_for(execution_time: float) -> int:
        slow, critical = stage_thresholds()
        if execution_time >= critical:
            return logging.ERROR
        if execution_time >= slow:
            return logging.WARNING
        return logging.INFO

    @staticmethod
    def log_result(stage: str, execution_time: float, error: Optional[BaseException] = None):
        if error is not None:
            logger.error("Stage %s failed after %.3fs: %s: %s", stage, execution_time, type(error).__name__, error)
            return
        level = StageMonitor.log_level_for(execution_time)
        prefix = {logging.ERROR: "CRITICAL: ", logging.WARNING: "SLOW: "}.get(level, "")
        logger.log(level, "%sStage %s completed in %.3fs", prefix, stage, execution_time)


def _run_locally(stage: str, func: Callable, args, kwargs):
    start = time.perf_counter()
    try:
        result = func(*args, **kwargs)
    except Exception as exc:
        StageMonitor.log_result(stage, time.perf_counter() - start, exc)
        raise
    StageMonitor.log_result(stage, time.perf_counter() - start)
    return result


def _run_with_sentry(stage: str, func: Callable, args, kwargs):
    StageMonitor.add_breadcrumb(f"Starting {stage}", data={"function": func.__name__})
    with sentry_sdk.start_span(op=CATEGORY, name=stage) as span:
        span.set_tag("stage", stage)
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as exc:
            execution_time = time.perf_counter() - start
            span.set_data("execution_time", execution_time)
            span.set_status("internal_error")
            StageMonitor.add_breadcrumb(f"Error in {stage}: {exc}", level="error")
            sentry_sdk.capture_exception(exc)
            StageMonitor.log_result(stage, execution_time, exc)
            raise
        execution_time = time.perf_counter() - start
        span.set_data("execution_time", execution_time)
        span.set_status("ok")
        StageMonitor.add_breadcrumb(f"Completed {stage} in {execution_time:.3f}s")
        StageMonitor.log_result(stage, execution_time)
        return result


def monitor_stage(stage: str):
    """
    Decorator timing one pipeline stage.

    Usage:
        @monitor_stage("train")
        def train_stage(config, paths):
            ...
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            if not sentry_active():
                return _run_locally(stage, func, args, kwargs)
            return _run_with_sentry(stage, func, args, kwargs)
        return wrapper
    return decorator
