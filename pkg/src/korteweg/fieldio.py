"""Plain-text and image dumps of fields and sampled curves."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_amplitude_csv(y, F, path) -> Path:
    """Write a sampled curve as ``y,F`` rows (17 significant digits, UTF-8).

    ``y`` must be strictly monotone.
    """
    y = np.asarray(y, dtype=float).ravel()
    F = np.asarray(F, dtype=float).ravel()
    if y.shape != F.shape:
        raise ValueError("y and F must have the same length")
    dy = np.diff(y)
    if y.size > 1 and not (np.all(dy > 0) or np.all(dy < 0)):
        raise ValueError("sample coordinates must be strictly monotone")
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("y,F\n")
        for a, b in zip(y, F):
            fh.write(f"{_fmt(a)},{_fmt(b)}\n")
    return path


def read_amplitude_csv(path) -> tuple:
    """Read back ``(y, F)`` written by :func:`write_amplitude_csv`."""
    with Path(path).open(encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["y", "F"]:
        raise ValueError(f"{path}: expected header 'y,F'")
    data = np.array([[float(a), float(b)] for a, b in rows[1:]]).reshape(-1, 2)
    return data[:, 0], data[:, 1]


def amplitude_csv_name(u1: float, u2: float, xi: float) -> str:
    """File name ``pml_<u1>_<u2>_n1_<xi>_n2_<xi>.csv`` with ``xi`` rounded to two decimals."""
    a = f"{round(xi, 2):.2f}".rstrip("0")
    a = a + "0" if a.endswith(".") else a
    return f"pml_{u1:g}_{u2:g}_n1_{a}_n2_{a}.csv"


def write_field_csv(field, path) -> Path:
    """Dump a complex grid field as ``x,y,re,im`` rows, one per node."""
    x, y = field.grid.mesh()
    v = field.values
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write("x,y,re,im\n")
        for a, b, c in zip(x.ravel(), y.ravel(), v.ravel()):
            fh.write(f"{_fmt(a)},{_fmt(b)},{_fmt(c.real)},{_fmt(c.imag)}\n")
    return path


def to_gray(values, vmax: float | None = None) -> np.ndarray:
    """Scale non-negative values linearly to ``uint8``; ``vmax`` defaults to the maximum."""
    a = np.asarray(values, dtype=float)
    top = float(np.max(a)) if vmax is None else float(vmax)
    if not math.isfinite(top) or top <= 0.0:
        return np.zeros(a.shape, dtype=np.uint8)
    return np.clip(np.rint(255.0 * a / top), 0, 255).astype(np.uint8)


def write_pgm(image, path) -> Path:
    """Write a 2D ``uint8`` array as a binary portable graymap (P5); row 0 is the top row."""
    img = np.ascontiguousarray(image, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError("image must be two-dimensional")
    h, w = img.shape
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
    return path


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    # the header is four whitespace-separated tokens followed by exactly one whitespace byte
    tokens, pos = [], 0
    while len(tokens) < 4:
        while data[pos : pos + 1].isspace():
            pos += 1
        end = pos
        while not data[end : end + 1].isspace():
            end += 1
        tokens.append(data[pos:end])
        pos = end
    if tokens[0] != b"P5":
        raise ValueError(f"{path}: not a binary graymap")
    w, h, top = (int(t) for t in tokens[1:])
    if top != 255:
        raise ValueError("only 8-bit graymaps are supported")
    return np.frombuffer(data[pos + 1 : pos + 1 + w * h], dtype=np.uint8).reshape(h, w)


def write_modulus_pgm(values, path, vmax: float | None = None) -> Path:
    """Image of ``|values|`` for an ``(nx, ny)`` Cartesian-ordered array, y pointing up."""
    a = np.abs(np.asarray(values))
    return write_pgm(to_gray(a, vmax).T[::-1], path)
