"""Deterministic file formats: 17-significant-digit floats, CSV matrices, labeled point CSVs."""

import csv
import json
import math

import numpy as np

from .errors import InputError


def format_float(x):
    """Render a float with 17 significant digits so parsing it recovers the exact bits."""
    x = float(x)
    if not math.isfinite(x):
        raise InputError(f"cannot serialize non-finite value {x!r}")
    text = f"{x:.17g}"
    # %.17g drops the decimal point for integral values; keep these JSON floats
    if "." not in text and "e" not in text and "E" not in text:
        text += ".0"
    return text


def _render_json(obj):
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_render_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render_json(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _render_json(obj.tolist())
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    raise InputError(f"cannot serialize {type(obj).__name__} to JSON")


def dump_json(obj, path):
    """Write JSON with every float at 17 significant digits (bitwise round-trip)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(_render_json(obj))
        fh.write("\n")


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def save_matrix_csv(values, path):
    """One row per line, comma separated, 17-significant-digit decimals."""
    values = np.asarray(values, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in values:
            fh.write(",".join(format_float(x) for x in row))
            fh.write("\n")


def load_matrix_csv(path):
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError:
                raise InputError(f"{path}: line {lineno}: non-numeric matrix entry") from None
    if not rows:
        raise InputError(f"{path}: empty matrix file")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError(f"{path}: ragged rows, expected {width} columns everywhere")
    return np.array(rows, dtype=np.float64)


def save_labeled_points_csv(path, words, categories, splits, values, component_names=None):
    """CSV with `word,category,split` key columns followed by one column per component."""
    values = np.asarray(values, dtype=np.float64)
    if not (len(words) == len(categories) == len(splits) == len(values)):
        raise InputError("words, categories, splits, and values must have equal length")
    width = values.shape[1] if values.ndim == 2 else 0
    if component_names is None:
        component_names = [f"v{i}" for i in range(width)]
    elif len(component_names) != width:
        raise InputError("component_names length must match the point dimension")
    header = ["word", "category", "split"] + list(component_names)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for word, cat, split, row in zip(words, categories, splits, values):
            fields = [word, cat, split] + [format_float(x) for x in row]
            fh.write(",".join(fields) + "\n")


def load_labeled_points_csv(path):
    """Returns (words, categories, splits, values) from a labeled point CSV."""
    words, cats, splits, rows = [], [], [], []
    with open(path, encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        if header[:3] != ["word", "category", "split"]:
            raise InputError(f"{path}: expected header starting `word,category,split`")
        width = len(header) - 3
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(header):
                raise InputError(f"{path}: line {lineno}: expected {len(header)} fields, found {len(rec)}")
            words.append(rec[0])
            cats.append(rec[1])
            splits.append(rec[2])
            try:
                rows.append([float(tok) for tok in rec[3:]])
            except ValueError:
                raise InputError(f"{path}: line {lineno}: non-numeric component") from None
    if not words:
        raise InputError(f"{path}: no data rows")
    return words, cats, splits, np.array(rows, dtype=np.float64).reshape(len(words), width)
