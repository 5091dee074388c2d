"""Model files: an ``.npz`` container with a JSON header array.

The header carries the format name and version, model kind, class list,
feature dimension, seed and provenance (schema id, feature config id,
hyperparameters, training-split digest). Numeric payloads are stored as
float64/int64 arrays so weights round-trip bit for bit.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
import zipfile
from pathlib import Path

import numpy as np

from ..errors import ModelLoadError
from .base import FOREST, LOGREG, MAJORITY, RANDOM, SVM, TREE, ForestModel, LinearModel, TrainedModel, TreeModel

FORMAT_NAME = "banglahate-model"
FORMAT_VERSION = 1

_TREE_FIELDS = ("feature", "threshold", "left", "right", "value")


def _header(model: TrainedModel) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "kind": model.kind,
        "k": model.k,
        "schema_id": model.schema_id,
        "classes": list(model.classes),
        "feature_dim": model.feature_dim,
        "seed": model.seed,
        "provenance": model.provenance,
    }


def model_to_bytes(model: TrainedModel) -> bytes:
    header = _header(model)
    arrays = {}
    if model.kind == MAJORITY:
        header["majority_class"] = int(model.payload)
    elif model.kind in (LOGREG, SVM):
        arrays["weights"] = model.payload.weights
        arrays["bias"] = model.payload.bias
    elif model.kind == TREE:
        for name in _TREE_FIELDS:
            arrays[f"tree_{name}"] = getattr(model.payload, name)
        header["tree_root"] = model.payload.root
    elif model.kind == FOREST:
        forest = model.payload
        offsets = np.cumsum([0] + [t.n_nodes for t in forest.trees])
        arrays["forest_offsets"] = offsets.astype(np.int64)
        for name in _TREE_FIELDS:
            parts = [getattr(t, name) for t in forest.trees]
            arrays[f"forest_{name}"] = np.concatenate(parts) if parts else np.empty(0)
        header["forest_roots"] = [t.root for t in forest.trees]
        header["forest_tree_seeds"] = [list(s) for s in forest.tree_seeds]
        header["forest_seed"] = forest.seed
    text = json.dumps(header, sort_keys=True, ensure_ascii=False)
    arrays["header"] = np.frombuffer(text.encode("utf-8"), dtype=np.uint8)
    buf = io.BytesIO()
    np.savez(buf, **arrays)
    return buf.getvalue()


def save_model(model: TrainedModel, path) -> None:
    """Write atomically: a crash never leaves a half-written model behind."""
    path = Path(path)
    data = model_to_bytes(model)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def model_from_bytes(data: bytes) -> TrainedModel:
    try:
        with np.load(io.BytesIO(data), allow_pickle=False) as npz:
            arrays = {name: npz[name] for name in npz.files}
        header = json.loads(arrays.pop("header").tobytes().decode("utf-8"))
    except (zipfile.BadZipFile, ValueError, KeyError, OSError, EOFError, UnicodeDecodeError) as exc:
        raise ModelLoadError(f"corrupt model file: {exc}") from None
    if header.get("format") != FORMAT_NAME:
        raise ModelLoadError("not a banglahate model file")
    if header.get("version") != FORMAT_VERSION:
        raise ModelLoadError(f"unsupported model format version {header.get('version')} (expected {FORMAT_VERSION})")

    kind = header["kind"]
    try:
        if kind == MAJORITY:
            payload = int(header["majority_class"])
        elif kind == RANDOM:
            payload = None
        elif kind in (LOGREG, SVM):
            payload = LinearModel(kind, arrays["weights"], arrays["bias"])
        elif kind == TREE:
            payload = TreeModel(*(arrays[f"tree_{n}"] for n in _TREE_FIELDS), root=header["tree_root"])
            payload.validate()
        elif kind == FOREST:
            offs = arrays["forest_offsets"]
            trees = []
            for i, root in enumerate(header["forest_roots"]):
                lo, hi = offs[i], offs[i + 1]
                t = TreeModel(*(arrays[f"forest_{n}"][lo:hi] for n in _TREE_FIELDS), root=root)
                t.validate()
                trees.append(t)
            payload = ForestModel(tuple(trees), tuple(tuple(s) for s in header["forest_tree_seeds"]),
                                  header["forest_seed"])
        else:
            raise ModelLoadError(f"unknown model kind {kind!r}")
    except (KeyError, IndexError, ValueError) as exc:
        raise ModelLoadError(f"corrupt model file: {exc}") from None

    return TrainedModel(kind, header["k"], payload, header["schema_id"], tuple(header["classes"]),
                        header["feature_dim"], header["seed"], header["provenance"])


def load_model(path) -> TrainedModel:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ModelLoadError(f"cannot read model file: {exc}") from None
    return model_from_bytes(data)
