"""Shared CSV loading, schema validation, and deterministic SVG output."""

from __future__ import annotations

import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

FIGSIZE = (6.4, 4.0)


class SchemaError(SystemExit):
    def __init__(self, path, missing):
        super().__init__(f"error: {path}: missing required column(s): {', '.join(missing)}")


def load_csv(path: str, required: list[str]) -> dict[str, list[float]]:
    """Read a CSV into float columns, failing loudly on missing headers."""
    try:
        with open(path, newline="", encoding="ascii") as f:
            reader = csv.DictReader(f)
            header = reader.fieldnames or []
            missing = [c for c in required if c not in header]
            if missing:
                raise SchemaError(path, missing)
            cols: dict[str, list[float]] = {name: [] for name in header}
            for row in reader:
                for name in header:
                    cols[name].append(float(row[name]))
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc}") from exc
    return cols


def make_parser(description: str) -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--input", required=True, help="input CSV path")
    ap.add_argument("--output", required=True, help="output image path (SVG)")
    ap.add_argument("--title", default=None, help="figure title")
    return ap


def new_figure():
    plt.rcParams["svg.hashsalt"] = "capwaves-figures"
    fig, ax = plt.subplots(figsize=FIGSIZE)
    return fig, ax


def save(fig, path: str) -> None:
    # strip the creation date so reruns are byte-identical
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
