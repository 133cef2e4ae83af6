"""Artifact emission: CSV tables, JSON run manifests, SVG line plots.

All writers are atomic (temp file in the target directory, then rename) and
deterministic: floats print with 17 significant digits, JSON keys keep
insertion order, and SVG output strips timestamps.
"""

from __future__ import annotations

import json
import os
import tempfile

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "zlab"
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["emit_csv", "emit_manifest", "emit_svg", "format_float"]


def format_float(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int,)):
        return str(x)
    return format(float(x), ".17g")


def _atomic_write(path: str, write_fn):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            write_fn(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(path: str, header, rows) -> str:
    """Write a delimited table: one header row, '.' decimals, \\n newlines."""
    rows = list(rows)
    if not rows:
        raise ValueError("refusing to write an empty table")
    lines = [",".join(str(h) for h in header)]
    for row in rows:
        if len(row) != len(header):
            raise ValueError(f"row width {len(row)} != header width {len(header)}")
        lines.append(",".join(format_float(x) if not isinstance(x, str) else x for x in row))
    payload = ("\n".join(lines) + "\n").encode("utf-8")
    _atomic_write(path, lambda h: h.write(payload))
    return path


def emit_manifest(path: str, manifest: dict) -> str:
    """Write the run manifest as UTF-8 JSON."""
    payload = (json.dumps(manifest, indent=2) + "\n").encode("utf-8")
    _atomic_write(path, lambda h: h.write(payload))
    return path


def emit_svg(
    path: str,
    x,
    y,
    xlabel: str = "x",
    ylabel: str = "y",
    logx: bool = False,
    logy: bool = False,
) -> str:
    """Render a single polyline as an SVG figure."""
    if len(x) == 0 or len(x) != len(y):
        raise ValueError("series must be nonempty and equally long")
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(x, y, marker="o", markersize=3)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.tight_layout()

    def write(handle):
        fig.savefig(handle, format="svg", metadata={"Date": None})

    try:
        _atomic_write(path, write)
    finally:
        plt.close(fig)
    return path
