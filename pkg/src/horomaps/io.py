"""JSON/CSV plumbing for the command line.

Function documents come in two shapes:

* a spectral function ``{"mu", "chart", "k_min", "coeffs": [[re, im], ...]}``
* a sum of translates ``{"mu", "terms": [{"shift", "k_min", "coeffs"}, ...]}``
  meaning x -> sum_j S_j(x - shift_j).
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from .models import SpectralFunction, TranslateSum, model_for


def load_function(source) -> SpectralFunction | TranslateSum:
    """Read a function document from a path, a JSON string or a dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = str(source)
        path = Path(text)
        if not text.lstrip().startswith("{") and path.exists():
            text = path.read_text()
        data = json.loads(text)
    if "terms" in data:
        model = model_for(float(data["mu"]), data.get("chart"))
        pieces = []
        for term in data["terms"]:
            coeffs = [complex(re, im) for re, im in term["coeffs"]]
            pieces.append((float(term.get("shift", 0.0)), SpectralFunction(model, int(term["k_min"]), coeffs)))
        return TranslateSum(pieces)
    return SpectralFunction.from_json_dict(data)


def function_to_json_dict(f) -> dict:
    if isinstance(f, SpectralFunction):
        return f.to_json_dict()
    return {
        "mu": f.mu,
        "chart": f.model.chart,
        "terms": [{"shift": t, **{k: v for k, v in s.to_json_dict().items() if k in ("k_min", "coeffs")}}
                  for t, s in f.terms],
    }


def _plain(obj):
    """Make numpy scalars, complex numbers and NaN JSON-friendly."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [_plain(obj.real), _plain(obj.imag)]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2)


def write_json(obj, path: str | None = None) -> None:
    text = dumps(obj) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def rows_to_csv(rows: list[dict]) -> str:
    """CSV with the union of row keys as header; nested values are JSON-encoded."""
    rows = [_plain(r) for r in rows]
    header: list[str] = []
    for r in rows:
        for k in r:
            if k not in header:
                header.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
    return buf.getvalue()


def emit(data, fmt: str = "json", stream=None) -> None:
    """Write ``data`` (a dict or a list of row dicts) as JSON or CSV."""
    stream = stream or sys.stdout
    if fmt == "csv":
        rows = data if isinstance(data, list) else [data]
        stream.write(rows_to_csv(rows))
    else:
        stream.write(dumps(data) + "\n")
