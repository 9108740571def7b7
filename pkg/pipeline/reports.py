"""
Metric reports and the CSV tables merged from them.

Reports are JSON with sorted keys and no timestamps, so a rerun of the same
run config reproduces them byte for byte.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from crosstraining.types import SeparationSets
from utils.exceptions import ContainerFormatError, MissingArtifactError

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 50
BASELINE = "none"
LEADING_COLUMNS = ["method", "distance_kind", "degradation.kind", "degradation.level", "dataset", "k",
                   "reco", "reco_auc", "best_gamma", "mege", "mu_f_mean", "s_avg_mean"]


@dataclass
class MetricReport:
    dataset: str
    arch: Any
    method: str
    distance_kind: str
    k: int
    seeds: Dict[str, Any]
    accuracies: List[float]
    accuracy_spread: float
    degradation: Optional[Dict[str, Any]]
    reco: Optional[float]
    reco_auc: Optional[float]
    best_gamma: Optional[float]
    mege: Optional[float]
    mean_s_equal: Optional[float]
    s_equal_count: int
    s_diff_count: int
    skipped_pairs: int
    degenerate_pairs: int
    mu_f_mean: Optional[float]
    mu_f_skipped: int
    s_avg_mean: Optional[float]
    s_avg_skipped: int
    histograms: Dict[str, List[float]] = field(default_factory=dict)
    run_config: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @property
    def stem(self) -> str:
        return report_stem(self.method, self.distance_kind, self.degradation)


def report_stem(method: str, distance_kind: str, degradation: Optional[Dict[str, Any]] = None) -> str:
    label = BASELINE if not degradation else f"{degradation['kind']}@{degradation['level']:g}"
    return f"{method}-{distance_kind}-{label}"


def distance_histograms(sets: SeparationSets, bins: int = HISTOGRAM_BINS) -> Dict[str, List[float]]:
    """Counts of S= and S!= over ``bins`` uniform bins spanning [0, max distance]."""
    values = np.concatenate([sets.s_equal, sets.s_diff])
    top = float(values.max()) if values.size else 0.0
    edges = np.linspace(0.0, top if top > 0 else 1.0, bins + 1)
    return {
        "bin_edges": edges.tolist(),
        "s_equal": np.histogram(sets.s_equal, bins=edges)[0].tolist(),
        "s_diff": np.histogram(sets.s_diff, bins=edges)[0].tolist(),
    }


def write_report(report: MetricReport, directory) -> Path:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{report.stem}.json"
    path.write_text(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    logger.info("Wrote metric report %s", path)
    return path


def read_report(path) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise MissingArtifactError(path, "metric report")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ContainerFormatError(f"{path}: unreadable metric report: {exc}") from exc


def load_reports(directory) -> List[Dict[str, Any]]:
    directory = Path(directory)
    paths = sorted(directory.glob("*.json")) if directory.is_dir() else []
    if not paths:
        raise MissingArtifactError(directory, "metric reports")
    return [read_report(p) for p in paths]


def flatten_report(data: Dict[str, Any], parent: str = "", sep: str = ".") -> Dict[str, Any]:
    """
    Flatten nested mappings using dot notation; lists become JSON strings.
    Example: {"a": {"b": 1}} -> {"a.b": 1}
    """
    result = {}
    for key, value in data.items():
        new_key = parent + sep + key if parent else key
        if isinstance(value, dict):
            result.update(flatten_report(value, new_key, sep))
        elif isinstance(value, list):
            result[new_key] = json.dumps(value, sort_keys=True)
        else:
            result[new_key] = value
    return result


def summary_frame(reports: List[Dict[str, Any]]) -> pd.DataFrame:
    """One row per report, baseline first within each method and distance."""
    rows = []
    for report in reports:
        row = {k: v for k, v in report.items() if k != "histograms"}
        row["degradation"] = row.get("degradation") or {"kind": BASELINE, "level": 0.0}
        rows.append(flatten_report(row))
    frame = pd.DataFrame(rows)
    frame["_baseline_last"] = (frame["degradation.kind"] != BASELINE).astype(int)
    frame = frame.sort_values(["method", "distance_kind", "_baseline_last", "degradation.kind", "degradation.level"],
                              kind="mergesort").drop(columns="_baseline_last")
    leading = [c for c in LEADING_COLUMNS if c in frame.columns]
    return frame[leading + sorted(c for c in frame.columns if c not in leading)].reset_index(drop=True)


def histogram_frame(report: Dict[str, Any]) -> pd.DataFrame:
    histograms = report["histograms"]
    edges = histograms["bin_edges"]
    return pd.DataFrame({
        "bin_left": edges[:-1],
        "bin_right": edges[1:],
        "s_equal": histograms["s_equal"],
        "s_diff": histograms["s_diff"],
    })


def merge_reports(reports_dir, output_dir) -> Dict[str, Any]:
    """Write summary.csv plus one histogram CSV per report; returns the written paths."""
    reports = load_reports(reports_dir)
    output_dir = Path(output_dir)
    histogram_dir = output_dir / "histograms"
    histogram_dir.mkdir(parents=True, exist_ok=True)

    summary_path = output_dir / "summary.csv"
    summary_frame(reports).to_csv(summary_path, index=False, lineterminator="\n")
    histogram_paths = []
    for report in reports:
        path = histogram_dir / f"{report_stem(report['method'], report['distance_kind'], report.get('degradation'))}.csv"
        histogram_frame(report).to_csv(path, index=False, lineterminator="\n")
        histogram_paths.append(path)
    logger.info("Merged %d metric reports into %s", len(reports), summary_path)
    return {"summary": summary_path, "histograms": histogram_paths}
