"""Figures for the budget and evaluation reports (Agg backend, no display)."""

from __future__ import annotations

from typing import Dict, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# no Software/date chunks so reruns give identical files
_PNG_META = {"Software": None}


def plot_budget(rows: Sequence[Dict], path: str) -> None:
    genres = [r["genre"] for r in rows]
    tokens = [r["tokens"] for r in rows]
    targets = [r["target"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    xs = range(len(genres))
    ax.bar(xs, tokens, color="#4c72b0", label="tokens")
    ax.scatter(xs, targets, marker="_", s=400, color="#c44e52", label="target", zorder=3)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(genres, rotation=30, ha="right")
    ax.set_ylabel("tokens")
    ax.set_title("Tokens per genre")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)


def plot_scores(report: Dict, path: str) -> None:
    """Per-document primary score for an evaluation report."""
    docs = report["documents"]
    names = list(docs)
    values = [_headline(report["layer"], docs[d]) for d in names]
    fig, ax = plt.subplots(figsize=(max(4, 0.4 * len(names) + 2), 3.5))
    ax.bar(range(len(names)), values, color="#55a868")
    if report.get("corpus"):
        ax.axhline(_headline(report["layer"], report["corpus"]), color="#333333",
                   linestyle="--", linewidth=1, label="corpus (micro)")
        ax.legend(frameon=False)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel(_label(report["layer"]))
    ax.set_title(f"{report['layer']} scores")
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata=_PNG_META)
    plt.close(fig)


def _headline(layer: str, block: Dict) -> float:
    if layer == "xpos":
        return block["accuracy"]
    if layer == "deps":
        return block["las"]
    if layer == "coref":
        return block["avg_f1"]
    if layer == "rst":
        return block["relation"]
    return block["f1"]


def _label(layer: str) -> str:
    return {"xpos": "accuracy", "deps": "LAS", "coref": "avg F1", "rst": "relation F1"}.get(layer, "F1")
