"""Render evaluation and training reports: delimited text plus figures.

Every report path writes the machine-readable TSV next to PNG figures
(confusion-matrix heatmap, per-class score bars, training curves).
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus import LABEL_NAMES
from .metrics import EvalReport, format_report, write_report_tsv
from .mlp import write_training_log


def render_confusion_figure(report: EvalReport, path) -> None:
    names = LABEL_NAMES[report.task]
    fig, ax = plt.subplots(figsize=(1.6 + 1.1 * len(names), 1.2 + 1.1 * len(names)))
    im = ax.imshow(report.confusion, cmap="Blues")
    ax.set_xticks(range(len(names)), names, rotation=30, ha="right")
    ax.set_yticks(range(len(names)), names)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    threshold = report.confusion.max() / 2 if report.confusion.max() else 0
    for i in range(len(names)):
        for j in range(len(names)):
            value = int(report.confusion[i, j])
            color = "white" if value > threshold else "black"
            ax.text(j, i, str(value), ha="center", va="center", color=color)
    fig.colorbar(im, ax=ax, fraction=0.046)
    ax.set_title(f"task {report.task}: accuracy {100 * report.accuracy:.2f}%")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_per_class_figure(report: EvalReport, path) -> None:
    names = LABEL_NAMES[report.task]
    x = np.arange(len(names))
    width = 0.27
    fig, ax = plt.subplots(figsize=(2.0 + 1.6 * len(names), 3.6))
    for shift, (label, column) in enumerate(
        [("precision", 0), ("recall", 1), ("f1", 2)]
    ):
        values = [100 * scores[column] for scores in report.per_class]
        ax.bar(x + (shift - 1) * width, values, width, label=label)
    ax.set_xticks(x, names, rotation=20, ha="right")
    ax.set_ylabel("%")
    ax.set_ylim(0, 100)
    ax.legend(loc="upper right")
    ax.set_title(f"task {report.task}: per-class scores")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_training_curves(training_logs, path) -> None:
    """Overlay per-member train (solid) and validation (dashed) loss curves."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    cmap = plt.get_cmap("tab10")
    for i, logs in enumerate(training_logs):
        color = cmap(i % 10)
        epochs = [entry.epoch for entry in logs]
        ax.plot(epochs, [e.train_loss for e in logs], color=color, alpha=0.7, lw=1.0)
        ax.plot(epochs, [e.val_loss for e in logs], color=color, alpha=0.7, lw=1.0, ls="--")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss (train solid, validation dashed)")
    ax.set_title(f"fold member training ({len(training_logs)} members)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_eval_outputs(report: EvalReport, out_dir) -> list:
    """report.txt + report.tsv + the two figures; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    text_path = out_dir / "report.txt"
    text_path.write_text(format_report(report), encoding="utf-8")
    tsv_path = out_dir / "report.tsv"
    write_report_tsv(report, tsv_path)
    confusion_path = out_dir / "confusion_matrix.png"
    render_confusion_figure(report, confusion_path)
    scores_path = out_dir / "per_class_scores.png"
    render_per_class_figure(report, scores_path)
    return [text_path, tsv_path, confusion_path, scores_path]


def write_training_outputs(training_logs, out_dir) -> list:
    """Per-member loss TSVs + the training-curve figure; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for i, logs in enumerate(training_logs):
        path = out_dir / f"training_log_member{i}.tsv"
        write_training_log(path, logs)
        written.append(path)
    curves = out_dir / "training_curves.png"
    render_training_curves(training_logs, curves)
    written.append(curves)
    return written
