"""Sampled curve records (strain/stress, displacement/force) and their file formats."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np


def _fmt(v: float) -> str:
    # repr-stable short form so identical runs write identical bytes
    return format(float(v), ".10g")


@dataclass
class CurveSeries:
    """A table of sampled records, column-major.

    names: one label per column, e.g. ("strain", "stress_mpa").
    values: float array of shape (n_samples, n_columns).
    meta: free-form scalars echoed into CSV comments are deliberately NOT
    supported; metadata travels in the run manifest instead.
    """

    names: tuple[str, ...]
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[1] != len(self.names):
            raise ValueError("values must be (n, k) with k == len(names)")

    def __len__(self) -> int:
        return self.values.shape[0]

    def col(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.names)
            for row in self.values:
                w.writerow([_fmt(v) for v in row])

    @classmethod
    def read_csv(cls, path) -> "CurveSeries":
        with open(path, newline="") as fh:
            r = csv.reader(fh)
            header = next(r)
            rows = [[float(v) for v in row] for row in r if row]
        return cls(tuple(header), np.array(rows, dtype=float))


def secant_slope(x: np.ndarray, y: np.ndarray, a: float, b: float) -> float:
    """Slope of the chord between the curve points nearest to x=a and x=b."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ia = int(np.argmin(np.abs(x - a)))
    ib = int(np.argmin(np.abs(x - b)))
    if ia == ib:
        raise ValueError("a and b resolve to the same sample")
    return (y[ib] - y[ia]) / (x[ib] - x[ia])


def knee_location(x: np.ndarray, y: np.ndarray) -> float:
    """Abscissa of maximum curvature, i.e. where the slope jumps the most.

    Works on monotone stiffening curves: the transition from the soft to the
    stiff regime shows up as the largest increase between consecutive chord
    slopes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 3:
        raise ValueError("need at least 3 samples to locate a knee")
    slopes = np.diff(y) / np.diff(x)
    jumps = np.diff(slopes)
    k = int(np.argmax(jumps))
    return float(x[k + 1])


def write_curve_svg(path, x, y, title: str = "", width: int = 640, height: int = 480) -> None:
    """Minimal standalone SVG polyline plot of a single curve."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pad = 50.0
    xr = float(x.max() - x.min()) or 1.0
    yr = float(y.max() - y.min()) or 1.0
    px = pad + (x - x.min()) / xr * (width - 2 * pad)
    py = height - pad - (y - y.min()) / yr * (height - 2 * pad)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>',
        f'<rect x="{pad:.0f}" y="{pad:.0f}" width="{width - 2 * pad:.0f}" '
        f'height="{height - 2 * pad:.0f}" fill="none" stroke="black"/>',
        f'<text x="{width / 2:.0f}" y="{pad / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
        f'<text x="{width / 2:.0f}" y="{height - pad / 4:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="11">'
        f"x: {_fmt(x.min())} .. {_fmt(x.max())} | y: {_fmt(y.min())} .. {_fmt(y.max())}</text>",
        "</svg>",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
