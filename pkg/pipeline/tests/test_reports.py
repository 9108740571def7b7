import json
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
from django.test import SimpleTestCase

from crosstraining.types import SeparationSets
from pipeline.reports import (
    HISTOGRAM_BINS,
    MetricReport,
    distance_histograms,
    flatten_report,
    merge_reports,
    report_stem,
    summary_frame,
    write_report,
)
from utils.exceptions import MissingArtifactError


def report(method="SM", degradation=None, reco=0.5, **kwargs):
    fields = dict(
        dataset="gen_shapes-train", arch="mlp", method=method, distance_kind="spearman_abs", k=5,
        seeds={"run": {"partition": 0}}, accuracies=[0.9] * 5, accuracy_spread=0.0, degradation=degradation,
        reco=reco, reco_auc=0.4, best_gamma=0.3, mege=0.8, mean_s_equal=0.25, s_equal_count=10,
        s_diff_count=4, skipped_pairs=2, degenerate_pairs=0, mu_f_mean=0.1, mu_f_skipped=0, s_avg_mean=0.2,
        s_avg_skipped=0,
        histograms={"bin_edges": [0.0, 0.5, 1.0], "s_equal": [8, 2], "s_diff": [1, 3]},
        run_config={"k": 5, "training": {"epochs": 3}},
    )
    fields.update(kwargs)
    return MetricReport(**fields)


def spec(kind, level):
    return {"kind": kind, "level": level, "noise_sigma": 0.5, "seed": 0, "free": False,
            "layer_order": "output_first"}


class HistogramTestCase(SimpleTestCase):

    def test_fifty_bins_over_zero_to_max(self):
        sets = SeparationSets(s_equal=np.array([0.1, 0.2, 0.2]), s_diff=np.array([0.9, 2.0]))
        hist = distance_histograms(sets)
        self.assertEqual(len(hist["bin_edges"]), HISTOGRAM_BINS + 1)
        self.assertEqual(hist["bin_edges"][0], 0.0)
        self.assertEqual(hist["bin_edges"][-1], 2.0)
        self.assertEqual(sum(hist["s_equal"]), 3)
        self.assertEqual(sum(hist["s_diff"]), 2)
        # the maximum lands in the closed last bin
        self.assertEqual(hist["s_diff"][-1], 1)

    def test_all_zero_distances_use_unit_range(self):
        sets = SeparationSets(s_equal=np.zeros(4), s_diff=np.array([]))
        hist = distance_histograms(sets)
        self.assertEqual(hist["bin_edges"][-1], 1.0)
        self.assertEqual(hist["s_equal"][0], 4)


class ReportFileTestCase(SimpleTestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.dir = Path(self.tmp.name)

    def test_stem_names_degradation(self):
        self.assertEqual(report_stem("SM", "l2"), "SM-l2-none")
        self.assertEqual(report_stem("GC", "ssim", spec("invert_labels", 0.3)), "GC-ssim-invert_labels@0.3")

    def test_report_is_sorted_json_without_timestamps(self):
        path = write_report(report(), self.dir / "reports")
        text = path.read_text()
        data = json.loads(text)
        self.assertEqual(list(data), sorted(data))
        self.assertEqual(data["run_config"]["k"], 5)
        self.assertNotIn("created", text)
        self.assertEqual(write_report(report(), self.dir / "reports").read_text(), text)

    def test_flatten_uses_dotted_names(self):
        flat = flatten_report({"a": {"b": 1, "c": {"d": 2}}, "e": [1, 2]})
        self.assertEqual(flat, {"a.b": 1, "a.c.d": 2, "e": "[1, 2]"})

    def test_summary_rows_sorted_by_method_then_degradation(self):
        rows = [
            report("SM", spec("randomize_weights", 0.3)).to_dict(),
            report("GC").to_dict(),
            report("SM", spec("invert_labels", 0.1)).to_dict(),
            report("SM").to_dict(),
            report("SM", spec("invert_labels", 0.05)).to_dict(),
        ]
        frame = summary_frame(rows)
        self.assertEqual(list(frame["method"]), ["GC", "SM", "SM", "SM", "SM"])
        self.assertEqual(list(frame["degradation.kind"]),
                         ["none", "none", "invert_labels", "invert_labels", "randomize_weights"])
        self.assertEqual(list(frame["degradation.level"]), [0.0, 0.0, 0.05, 0.1, 0.3])
        self.assertIn("run_config.training.epochs", frame.columns)
        self.assertNotIn("histograms.s_equal", frame.columns)

    def test_merge_writes_summary_and_histograms(self):
        reports_dir = self.dir / "reports"
        write_report(report(), reports_dir)
        write_report(report(degradation=spec("limit_data", 0.5), reco=None), reports_dir)
        written = merge_reports(reports_dir, self.dir)

        summary = pd.read_csv(written["summary"])
        self.assertEqual(len(summary), 2)
        self.assertTrue(np.isnan(summary.loc[1, "reco"]))
        names = sorted(p.name for p in written["histograms"])
        self.assertEqual(names, ["SM-spearman_abs-limit_data@0.5.csv", "SM-spearman_abs-none.csv"])
        hist = pd.read_csv(self.dir / "histograms" / "SM-spearman_abs-none.csv")
        self.assertEqual(list(hist.columns), ["bin_left", "bin_right", "s_equal", "s_diff"])
        self.assertEqual(hist["s_equal"].tolist(), [8, 2])

    def test_merge_is_byte_stable(self):
        reports_dir = self.dir / "reports"
        write_report(report(), reports_dir)
        first = merge_reports(reports_dir, self.dir)["summary"].read_bytes()
        self.assertEqual(merge_reports(reports_dir, self.dir)["summary"].read_bytes(), first)

    def test_nothing_to_merge(self):
        with self.assertRaises(MissingArtifactError):
            merge_reports(self.dir / "reports", self.dir)
