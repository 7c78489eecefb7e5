"""On-disk formats: state files and report files.

A state file is a single self-describing JSON document.  Real and
imaginary parts are stored as separate nested real arrays so the format
stays unambiguous across ecosystems; floats use full repr precision, so
a write/read round trip reproduces every entry exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import StateValidationError
from .states import DensityMatrix, PureState

FORMAT_VERSION = 1


def _split(a: np.ndarray):
    return a.real.tolist(), a.imag.tolist()


def state_to_doc(state: PureState | DensityMatrix, meta: dict | None = None) -> dict:
    if isinstance(state, PureState):
        re, im = _split(np.asarray(state.vector))
        kind = "pure"
    elif isinstance(state, DensityMatrix):
        re, im = _split(np.asarray(state.matrix))
        kind = "mixed"
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "dims": list(state.dims.dims),
        "data": {"re": re, "im": im},
    }
    if meta:
        doc["meta"] = meta
    return doc


def state_from_doc(doc: dict) -> PureState | DensityMatrix:
    try:
        version = doc["format_version"]
        kind = doc["kind"]
        dims = [int(d) for d in doc["dims"]]
        re = np.asarray(doc["data"]["re"], dtype=float)
        im = np.asarray(doc["data"]["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise StateValidationError(f"malformed state document: {exc}") from exc
    if version != FORMAT_VERSION:
        raise StateValidationError(
            f"unsupported format_version {version}, expected {FORMAT_VERSION}"
        )
    if re.shape != im.shape:
        raise StateValidationError("re/im arrays have different shapes")
    data = re + 1j * im
    if kind == "pure":
        if data.ndim != 1:
            raise StateValidationError("pure state data must be a flat vector")
        return PureState(dims, data)
    if kind == "mixed":
        if data.ndim != 2:
            raise StateValidationError("mixed state data must be a matrix")
        return DensityMatrix(dims, data)
    raise StateValidationError(f"unknown state kind {kind!r}")


def dump_json(doc: dict, path) -> None:
    """Canonical JSON serialization: sorted keys, fixed separators, one
    trailing newline.  Byte-identical for identical documents."""
    text = json.dumps(doc, sort_keys=True, separators=(",", ":"), allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def write_state(state: PureState | DensityMatrix, path, meta: dict | None = None) -> None:
    dump_json(state_to_doc(state, meta), path)


def read_state(path) -> PureState | DensityMatrix:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise StateValidationError(f"not a valid JSON state file: {exc}") from exc
    return state_from_doc(doc)
