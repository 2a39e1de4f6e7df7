"""Accuracy, precision, recall, F1 and confusion matrices.

The aggregate row follows the task rule: the binary subtask reports the
positive (ironic) class, the 4-class subtask reports macro averages.
Macro-F1 defaults to the mean of per-class F1 values; `macro_f1_of_means`
switches to F1 computed from the averaged precision and recall.
"""

from dataclasses import dataclass

import numpy as np

from .corpus import LABEL_NAMES, n_classes
from .errors import ValidationError


@dataclass(frozen=True)
class EvalReport:
    task: str
    confusion: np.ndarray            # rows = gold, cols = predicted
    accuracy: float
    per_class: tuple                 # (precision, recall, f1) per class id
    aggregate: tuple                 # (precision, recall, f1) per task rule

    @property
    def n_samples(self) -> int:
        return int(self.confusion.sum())


def _prf(tp: float, fp: float, fn: float) -> tuple:
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return precision, recall, f1


def confusion_matrix(gold, predicted, classes: int) -> np.ndarray:
    matrix = np.zeros((classes, classes), dtype=np.int64)
    for g, p in zip(gold, predicted):
        matrix[g, p] += 1
    return matrix


def report_from_confusion(confusion: np.ndarray, task: str, macro_f1_of_means: bool = False) -> EvalReport:
    confusion = np.asarray(confusion, dtype=np.int64)
    classes = confusion.shape[0]
    per_class = []
    for c in range(classes):
        tp = confusion[c, c]
        fp = confusion[:, c].sum() - tp
        fn = confusion[c, :].sum() - tp
        per_class.append(_prf(float(tp), float(fp), float(fn)))
    accuracy = float(np.trace(confusion)) / float(confusion.sum())
    if task == "A":
        aggregate = per_class[1]
    else:
        mean_p = float(np.mean([p for p, _, _ in per_class]))
        mean_r = float(np.mean([r for _, r, _ in per_class]))
        if macro_f1_of_means:
            macro_f1 = 2 * mean_p * mean_r / (mean_p + mean_r) if mean_p + mean_r > 0 else 0.0
        else:
            macro_f1 = float(np.mean([f for _, _, f in per_class]))
        aggregate = (mean_p, mean_r, macro_f1)
    return EvalReport(
        task=task,
        confusion=confusion,
        accuracy=accuracy,
        per_class=tuple(per_class),
        aggregate=aggregate,
    )


def evaluate(gold, predicted, task: str, macro_f1_of_means: bool = False) -> EvalReport:
    """Score predicted labels against gold labels for one subtask."""
    if len(gold) != len(predicted):
        raise ValidationError(f"gold has {len(gold)} labels, predictions {len(predicted)}")
    if len(gold) == 0:
        raise ValidationError("cannot evaluate an empty label list")
    classes = n_classes(task)
    for value in list(gold) + list(predicted):
        if not 0 <= int(value) < classes:
            raise ValidationError(f"label {value} out of range for task {task}")
    confusion = confusion_matrix(gold, predicted, classes)
    return report_from_confusion(confusion, task, macro_f1_of_means)


def format_report(report: EvalReport) -> str:
    """Aligned text table, percentages rounded to 2 decimals."""
    names = LABEL_NAMES[report.task]
    rule = "positive class" if report.task == "A" else "macro average"
    width = max(len(n) for n in (*names, rule, "class")) + 2
    lines = [
        f"task {report.task} evaluation on {report.n_samples} tweets",
        "",
        "confusion matrix (rows = gold, cols = predicted)",
    ]
    header = " " * width + "".join(f"{f'pred {c}':>10}" for c in range(len(names)))
    lines.append(header)
    for c, name in enumerate(names):
        row = "".join(f"{int(v):>10}" for v in report.confusion[c])
        lines.append(f"{name:<{width}}{row}")
    lines.append("")
    lines.append(f"accuracy {100 * report.accuracy:.2f}")
    lines.append("")
    lines.append(f"{'class':<{width}}{'precision':>10}{'recall':>10}{'f1':>10}")
    for name, (p, r, f) in zip(names, report.per_class):
        lines.append(f"{name:<{width}}{100 * p:>10.2f}{100 * r:>10.2f}{100 * f:>10.2f}")
    p, r, f = report.aggregate
    lines.append(f"{rule:<{width}}{100 * p:>10.2f}{100 * r:>10.2f}{100 * f:>10.2f}")
    return "\n".join(lines) + "\n"


def write_report_tsv(report: EvalReport, path) -> None:
    """Machine-readable mirror of the report (full-precision values)."""
    names = LABEL_NAMES[report.task]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("metric\tclass\tvalue\n")
        handle.write(f"n_samples\t-\t{report.n_samples}\n")
        handle.write(f"accuracy\t-\t{report.accuracy!r}\n")
        for c, (p, r, f) in enumerate(report.per_class):
            handle.write(f"precision\t{c}\t{p!r}\n")
            handle.write(f"recall\t{c}\t{r!r}\n")
            handle.write(f"f1\t{c}\t{f!r}\n")
        p, r, f = report.aggregate
        handle.write(f"aggregate_precision\t-\t{p!r}\n")
        handle.write(f"aggregate_recall\t-\t{r!r}\n")
        handle.write(f"aggregate_f1\t-\t{f!r}\n")
        for g in range(len(names)):
            for q in range(len(names)):
                handle.write(f"confusion\t{g},{q}\t{int(report.confusion[g, q])}\n")
