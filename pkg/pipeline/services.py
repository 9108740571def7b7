"""
Pipeline stages behind ``manage.py xai <subcommand>``.

Stages communicate only through the run directory (see ``RunPaths``):

    gen-data       -> data/train.xtd, data/test.xtd, run_config.yaml
    train          -> ensemble/manifest.json, ensemble/fold-<i>.xtm
    explain        -> explanations/<METHOD>/fold-<i>.xta
    sanity         -> sanity/<test>-<kind>.json, sanity/sanity.csv
    metrics        -> reports/<METHOD>-<distance>-<degradation>.json
    degrade-sweep  -> one report per degradation plus the baseline
    report         -> summary.csv, histograms/*.csv
"""

import json
import logging
import shutil
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple

import pandas as pd
from django.conf import settings

from crosstraining.bank import compute_explanations
from crosstraining.ensemble import train_ensemble
from crosstraining.manifest import load_ensemble, save_ensemble
from crosstraining.separation import build_separation_sets
from crosstraining.types import ExplanationBank, FoldEnsemble
from dataset.generators import gen_shapes
from dataset.idx import load_idx
from dataset.splits import split_train_test
from dataset.storage import load_dataset, save_dataset
from dataset.types import LabeledDataset
from degradation.services import degrade_dataset, degrade_ensemble, retrains
from degradation.types import DegradationSpec
from distances.sanity import noise_base, sanity_noise, sanity_spatial
from distances.types import ALL_KINDS
from evaluation.consistency import mege, reco
from evaluation.exceptions import UndefinedMetricError
from evaluation.services import average_fidelity, average_stability

from .archives import load_bank, save_bank
from .config import RUN_CONFIG_NAME, RunConfig, load_run_config, save_run_config
from .exceptions import ArchiveFormatError
from .monitoring import monitor_stage
from .reports import MetricReport, distance_histograms, merge_reports, write_report
from .types import RunPaths

logger = logging.getLogger(__name__)


def resolve_run(config_path=None, output=None, **overrides) -> Tuple[RunConfig, RunPaths]:
    """Load the run config, falling back to the one saved in the output directory."""
    root = Path(output) if output else None
    if config_path is None:
        saved = (root or Path(settings.XAI_OUTPUT_DIR)) / RUN_CONFIG_NAME
        if saved.is_file():
            config_path = saved
    config = load_run_config(config_path, **overrides)
    if root is not None:
        config = config.with_overrides(output_dir=str(root))
    return config, RunPaths(config.output_dir)


def load_split(paths: RunPaths) -> Tuple[LabeledDataset, LabeledDataset]:
    return load_dataset(paths.train_data), load_dataset(paths.test_data)


def build_dataset(config: RunConfig) -> LabeledDataset:
    spec = config["dataset"]
    if spec["source"] == "idx":
        return load_idx(spec["images_path"], spec["labels_path"], spec.get("limit"))
    return gen_shapes(spec["n"], spec["size"], spec["classes"], config.seeds["data"], noise_level=spec["noise_level"])


def fit_ensemble(config: RunConfig, train: LabeledDataset, test: LabeledDataset,
                 enforce_spread: bool = True) -> FoldEnsemble:
    return train_ensemble(
        train, config["k"], config["architecture"], config.train_config(),
        test_data=test,
        seed=config.seeds["partition"],
        accuracy_tolerance=config["accuracy_tolerance"],
        strict=config["strict_spread"],
        enforce_spread=enforce_spread,
        n_jobs=config.n_jobs,
    )


def apply_degradation(config: RunConfig, spec: DegradationSpec, ensemble: FoldEnsemble, train: LabeledDataset,
                      test: LabeledDataset) -> Tuple[FoldEnsemble, LabeledDataset]:
    """Degraded ensemble plus the dataset its blocks partition; spread is recorded, not enforced."""
    if retrains(spec):
        data = degrade_dataset(train, spec)
        return fit_ensemble(config, data, test, enforce_spread=False), data
    return degrade_ensemble(ensemble, spec, test), train


def saved_bank(paths: RunPaths, method: str, ensemble: FoldEnsemble,
               train: LabeledDataset) -> Optional[ExplanationBank]:
    directory = paths.explanations(method)
    if not directory.is_dir():
        return None
    bank = load_bank(directory, ensemble.k)
    if bank.sample_ids != train.sample_ids:
        raise ArchiveFormatError(f"archives in {directory} explain other samples than {paths.train_data}")
    if bank.model_ids != ensemble.model_ids():
        raise ArchiveFormatError(f"archives in {directory} belong to models {bank.model_ids}, "
                                 f"ensemble has {ensemble.model_ids()}")
    logger.info("Using saved %s explanations from %s", method, directory)
    return bank


def _metric(fn: Callable, sets, lenient: bool):
    try:
        return fn(sets)
    except UndefinedMetricError as exc:
        if not lenient:
            raise
        logger.warning("%s undefined for %s/%s: %s", fn.__name__, sets.method, sets.distance_kind, exc)
        return None


def evaluate(config: RunConfig, ensemble: FoldEnsemble, train: LabeledDataset, test: LabeledDataset,
             bank: Optional[ExplanationBank] = None, degradation: Optional[DegradationSpec] = None,
             lenient: bool = False) -> MetricReport:
    """Every metric of one ensemble; with ``lenient`` an undefined ReCo or MeGe is reported as null."""
    method, kind = config["method"], config["distance"]
    attribution_cfg = config.attribution_config()
    sets = build_separation_sets(ensemble, train, method, kind, cfg=attribution_cfg, bank=bank,
                                 n_jobs=config.n_jobs)
    consistency = _metric(reco, sets, lenient)
    generality = _metric(mege, sets, lenient)

    # muF and S_avg use fold model 0 on held-out samples
    model = ensemble.models[0]
    fidelity = average_fidelity(model, test, method, config.fidelity_config(), attribution_cfg,
                                limit=config["metric_samples"])
    stability = average_stability(model, test, method, config.stability_config(), attribution_cfg,
                                  limit=config["metric_samples"])

    return MetricReport(
        dataset=train.name,
        arch=ensemble.architecture,
        method=sets.method,
        distance_kind=sets.distance_kind,
        k=ensemble.k,
        seeds={"run": config.seeds, "ensemble": ensemble.seeds},
        accuracies=[float(a) for a in ensemble.accuracies],
        accuracy_spread=float(ensemble.spread),
        degradation=None if degradation is None else degradation.to_dict(),
        reco=None if consistency is None else consistency.reco,
        reco_auc=None if consistency is None else consistency.reco_auc,
        best_gamma=None if consistency is None else consistency.best_threshold,
        mege=None if generality is None else generality.mege,
        mean_s_equal=None if generality is None else generality.mean_s_equal,
        s_equal_count=len(sets.s_equal),
        s_diff_count=len(sets.s_diff),
        skipped_pairs=sets.skipped_pairs,
        degenerate_pairs=sets.degenerate_pairs,
        mu_f_mean=fidelity.mean,
        mu_f_skipped=fidelity.skipped,
        s_avg_mean=stability.mean,
        s_avg_skipped=stability.skipped,
        histograms=distance_histograms(sets),
        run_config=config.protocol(),
    )


@monitor_stage("gen-data")
def gen_data_stage(config: RunConfig, paths: RunPaths) -> str:
    dataset = build_dataset(config)
    train, test = split_train_test(dataset, config["dataset"]["test_fraction"], seed=config.seeds["split"])
    save_dataset(train, paths.train_data)
    save_dataset(test, paths.test_data)
    save_run_config(config, paths.run_config)
    return f"Wrote {len(train)} training and {len(test)} test samples to {paths.train_data.parent}"


@monitor_stage("train")
def train_stage(config: RunConfig, paths: RunPaths) -> str:
    train, test = load_split(paths)
    ensemble = fit_ensemble(config, train, test)
    save_ensemble(ensemble, paths.ensemble)
    stale = paths.root / "explanations"
    if stale.is_dir():
        logger.info("Removing explanation archives of the previous ensemble in %s", stale)
        shutil.rmtree(stale)
    save_run_config(config, paths.run_config)
    return f"Trained {ensemble.k} fold models, accuracies {[round(a, 4) for a in ensemble.accuracies]}"


@monitor_stage("explain")
def explain_stage(config: RunConfig, paths: RunPaths) -> str:
    ensemble = load_ensemble(paths.ensemble)
    train = load_dataset(paths.train_data)
    bank = compute_explanations(ensemble, train, config["method"], config.attribution_config(),
                                n_jobs=config.n_jobs)
    directory = paths.explanations(bank.method)
    save_bank(bank, directory, seed=config.seeds["attribution"])
    return f"Wrote {bank.k} {bank.method} archives of {len(train)} maps to {directory}"


@monitor_stage("sanity")
def sanity_stage(config: RunConfig, paths: RunPaths, image_size: int = 32, steps: int = 100,
                 repeats: int = 50) -> str:
    reports = []
    for kind in ALL_KINDS:
        reports.append(sanity_spatial(kind, image_size, steps))
        reports.append(sanity_noise(kind, noise_base(image_size), repeats=repeats, seed=config.seeds["metrics"]))

    paths.sanity.mkdir(parents=True, exist_ok=True)
    for report in reports:
        (paths.sanity / f"{report.test}-{report.kind}.json").write_text(
            json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n")
    pd.concat([r.to_frame() for r in reports]).to_csv(paths.sanity / "sanity.csv", index=False, lineterminator="\n")

    failed = [f"{r.test}/{r.kind}" for r in reports if not r.passed]
    if failed:
        logger.warning("Sanity checks failed: %s", ", ".join(failed))
    return f"{len(reports) - len(failed)} of {len(reports)} sanity checks passed, reports in {paths.sanity}"


@monitor_stage("metrics")
def metrics_stage(config: RunConfig, paths: RunPaths) -> str:
    ensemble = load_ensemble(paths.ensemble)
    train, test = load_split(paths)
    spec = config.degradation_spec()
    if spec is None:
        report = evaluate(config, ensemble, train, test, bank=saved_bank(paths, config["method"], ensemble, train))
    else:
        degraded, data = apply_degradation(config, spec, ensemble, train, test)
        report = evaluate(config, degraded, data, test, degradation=spec)
    path = write_report(report, paths.reports)
    return f"ReCo={report.reco} MeGe={report.mege}, report in {path}"


@monitor_stage("degrade-sweep")
def degrade_sweep_stage(config: RunConfig, paths: RunPaths) -> str:
    ensemble = load_ensemble(paths.ensemble)
    train, test = load_split(paths)
    bank = saved_bank(paths, config["method"], ensemble, train)
    written = [write_report(evaluate(config, ensemble, train, test, bank=bank, lenient=True), paths.reports)]
    for spec in config.degradation_grid():
        logger.info("Degradation %s", spec.label)
        degraded, data = apply_degradation(config, spec, ensemble, train, test)
        written.append(write_report(evaluate(config, degraded, data, test, degradation=spec, lenient=True),
                                    paths.reports))
    return f"Wrote {len(written)} metric reports to {paths.reports}"


@monitor_stage("report")
def report_stage(config: RunConfig, paths: RunPaths) -> str:
    written = merge_reports(paths.reports, paths.root)
    return f"Wrote {written['summary']} and {len(written['histograms'])} histogram tables"


STAGES: Dict[str, Callable[..., str]] = {
    "gen-data": gen_data_stage,
    "train": train_stage,
    "explain": explain_stage,
    "sanity": sanity_stage,
    "metrics": metrics_stage,
    "degrade-sweep": degrade_sweep_stage,
    "report": report_stage,
}


def run_stage(subcommand: str, config: RunConfig, paths: RunPaths, **options) -> str:
    if subcommand == "sanity":
        return sanity_stage(config, paths, **options)
    return STAGES[subcommand](config, paths)
