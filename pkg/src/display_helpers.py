"""Display helper functions for formatting console output"""

import re
from typing import Dict, Iterable, List, Optional, Sequence

from termcolor import colored

BOX_WIDTH = 78
ANSI_ESCAPE = re.compile(r"\x1B(?:[@-Z\\-_]|\[[0-?]*[ -/]*[@-~])")


def strip_ansi(text) -> str:
    """Remove ANSI escape codes from text for width calculation"""
    return ANSI_ESCAPE.sub("", str(text))


def print_section_header(title: str) -> None:
    """Print a formatted section header"""
    print("\n" + colored("═" * (BOX_WIDTH + 2), "green", attrs=["bold"]))
    print(colored(f"  {title}", "green", attrs=["bold", "dark"]))
    print()


def print_info_box(data: Dict[str, object], separators: Optional[Iterable[int]] = None) -> None:
    """Print a two-column label/value box; separators are row counts after which to draw a rule"""
    if not data:
        return
    separators = set(separators or ())
    label_width = max(len(key) for key in data) + 3
    value_width = BOX_WIDTH - label_width - 1

    print("┌" + "─" * BOX_WIDTH + "┐")
    keys = list(data)
    for i, (key, value) in enumerate(data.items()):
        print("│" + f" {key:<{label_width - 1}}{str(value):<{value_width}} " + "│")
        if i + 1 in separators and i < len(keys) - 1:
            print("├" + "─" * BOX_WIDTH + "┤")
    print("└" + "─" * BOX_WIDTH + "┘")


def print_table(headers: Sequence[str], rows: List[Sequence[object]]) -> None:
    """Print a bordered table; cells may carry termcolor codes"""
    col_widths = []
    for i, header in enumerate(headers):
        width = len(header)
        for row in rows:
            if i < len(row):
                width = max(width, len(strip_ansi(row[i])))
        col_widths.append(width + 2)

    def rule(left: str, mid: str, right: str) -> str:
        return left + mid.join("─" * w for w in col_widths) + right

    print(rule("┌", "┬", "┐"))
    print("│" + "│".join(f" {h:<{col_widths[i] - 2}} " for i, h in enumerate(headers)) + "│")
    print(rule("├", "┼", "┤"))
    for row in rows:
        cells = []
        for i in range(len(headers)):
            value = str(row[i]) if i < len(row) else ""
            padding = col_widths[i] - 2 - len(strip_ansi(value))
            cells.append(f" {value}{' ' * padding} ")
        print("│" + "│".join(cells) + "│")
    print(rule("└", "┴", "┘"))


def score_color(score: float, threshold: float) -> str:
    """Color a score green above threshold, red otherwise"""
    return colored(f"{score:.4f}", "green" if score > threshold else "red")


def print_score_histogram(
    scores: Sequence[float], threshold: float, bins: int = 10, title: str = "GROUNDING SCORES"
) -> None:
    """ASCII histogram of similarity scores over [min(0, lowest), 1]"""
    if not scores:
        return
    low = min(0.0, min(scores))
    step = (1.0 - low) / bins
    counts = [0] * bins
    for s in scores:
        counts[min(int((s - low) / step), bins - 1)] += 1

    labels = [f"{low + i * step:5.2f}-{low + (i + 1) * step:5.2f}" for i in range(bins)]
    label_width = max(len(label) for label in labels)
    bar_width = BOX_WIDTH - label_width - 10
    peak = max(counts)

    print("┌" + "─" * BOX_WIDTH + "┐")
    print("│" + title.center(BOX_WIDTH) + "│")
    print("├" + "─" * BOX_WIDTH + "┤")
    for i, (label, count) in enumerate(zip(labels, counts)):
        length = round(count / peak * bar_width) if peak else 0
        upper = low + (i + 1) * step
        bar = colored("█" * length, "green" if upper > threshold else "red")
        print(f"│ {label:>{label_width}} │{bar}{' ' * (bar_width - length)}│{count:4d} │")
    print("└" + "─" * BOX_WIDTH + "┘")
