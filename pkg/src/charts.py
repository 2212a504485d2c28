"""Charts for evaluation output"""

from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def plot_score_distribution(
    scores: Sequence[float],
    threshold: float,
    output_path: Union[str, Path],
    title: str = "Generation vs retrieved context similarity",
) -> Path:
    """
    Save a histogram of per-record S_emb grounding scores with the
    threshold marked.

    Args:
        scores: Per-record scores
        threshold: Grounding threshold
        output_path: PNG path

    Returns:
        Path of the written chart
    """
    values = np.asarray(scores, dtype=np.float64)
    above = float(np.mean(values > threshold)) if values.size else 0.0

    plt.close("all")
    plt.figure(figsize=(10, 6))
    low = min(0.0, float(values.min())) if values.size else 0.0
    plt.hist(values, bins=np.linspace(low, 1.0, 21), color="steelblue", edgecolor="white")
    plt.axvline(
        threshold, color="red", linestyle="--", linewidth=2, label=f"threshold {threshold:.2f}"
    )
    if values.size:
        plt.axvline(values.mean(), color="green", linewidth=2, label=f"mean {values.mean():.4f}")
    plt.xlabel("S_emb(generation, context)", fontsize=12)
    plt.ylabel("Records", fontsize=12)
    plt.title(f"{title} ({above:.0%} above threshold)", fontsize=14, fontweight="bold")
    plt.grid(True, alpha=0.3)
    plt.legend()
    plt.tight_layout()

    output_path = Path(output_path)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    plt.savefig(output_path, dpi=150, bbox_inches="tight")
    plt.close()
    return output_path
