"""Dual-stream LSTM/GRU sequence classifier with a C++ core."""

import json

from ._core import (
    ConfigError,
    DataError,
    DimensionError,
    DivergenceError,
    Model,
    accuracy_interval,
    auc_one_vs_rest,
    closed_form_param_count,
    cmd_eval,
    cmd_report,
    cmd_train,
    cohen_kappa,
    confusion_matrix,
    format_report,
    gradcheck,
    load_csv,
    report_json,
    train_run,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DimensionError",
    "DivergenceError",
    "Model",
    "accuracy_interval",
    "auc_one_vs_rest",
    "classification_report",
    "closed_form_param_count",
    "cmd_eval",
    "cmd_report",
    "cmd_train",
    "cohen_kappa",
    "confusion_matrix",
    "format_report",
    "gradcheck",
    "load_csv",
    "report_json",
    "train",
    "train_run",
]


def classification_report(truth, probs, class_names, split="test", total_params=0):
    """Overall and per-class statistics as a dict."""
    return json.loads(report_json(truth, probs, class_names, split, total_params))


def train(config_text, seed=None):
    """Runs a training config; returns (model, epoch log, report dict)."""
    model, log, report = train_run(config_text, seed)
    return model, log, json.loads(report)
