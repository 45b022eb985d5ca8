"""Result files.

``results.csv``
    One row per run, columns ``value,repeat,seed,A,F,C0,C1,alpha``. Floats are
    written with Python's shortest round-trip ``repr``; NaN is ``nan``; a run
    without a sweep value has an empty ``value`` field. Lines end in ``\\n``.
``summary.csv``
    One row per sweep value: ``value,n,A_mean,A_min,A_max,F_mean,C0_mean,
    C1_mean,alpha_mean``.
``results.json``
    Bundle ``{"command", "config", "reports": [...]}``; each report is
    :meth:`RunReport.to_dict` output, NaN stored as ``null``.
``pca.csv``
    Columns ``pc1,pc2,class,episode``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .experiment import RunReport, summarize

CSV_COLUMNS = ("value", "repeat", "seed", "A", "F", "C0", "C1", "alpha")
SUMMARY_COLUMNS = ("value", "n", "A_mean", "A_min", "A_max", "F_mean", "C0_mean", "C1_mean",
                   "alpha_mean")
PCA_COLUMNS = ("pc1", "pc2", "class", "episode")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_row(report: RunReport) -> list[str]:
    d = report.dynamics
    return [_fmt(v) for v in (report.value, report.repeat, report.seed, report.accuracy,
                              d.F, d.C0, d.C1, d.alpha)]


def write_csv(reports, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in reports:
            w.writerow(report_row(r))
    return path


def write_summary(reports, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for row in summarize(list(reports)):
            w.writerow([_fmt(row[c]) for c in SUMMARY_COLUMNS])
    return path


def write_pca(rows, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PCA_COLUMNS)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def bundle(reports, config: dict | None = None, command: str = "run") -> dict:
    return {"command": command, "config": config,
            "reports": [r.to_dict() for r in reports]}


def write_json(reports, path, config: dict | None = None, command: str = "run") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(bundle(reports, config, command), fh, indent=1, allow_nan=False)
        fh.write("\n")
    return path


def read_bundle(path) -> tuple[list[RunReport], dict]:
    with open(path) as fh:
        data = json.load(fh)
    return [RunReport.from_dict(r) for r in data["reports"]], data


def export_results(reports, out_dir, formats=("csv", "json"), config: dict | None = None,
                   command: str = "run") -> list[Path]:
    """Write the requested formats into ``out_dir`` and return the paths."""
    out_dir = Path(out_dir)
    reports = list(reports)
    written = []
    if "csv" in formats:
        written.append(write_csv(reports, out_dir / "results.csv"))
        written.append(write_summary(reports, out_dir / "summary.csv"))
    if "json" in formats:
        written.append(write_json(reports, out_dir / "results.json", config, command))
    return written
