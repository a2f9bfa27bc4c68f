"""Text serialization of fitted models.

Documents are JSON objects tagged with a format name and version. Reals
are written as decimal strings with 17 significant digits, which
round-trips IEEE doubles exactly, so a reloaded model reproduces the
original scores bit for bit.
"""

from __future__ import annotations

import json

import numpy as np

FORMAT = "ocens-model"
VERSION = 1


def _real(x):
    return format(float(x), ".17g")


def encode_value(v):
    if isinstance(v, np.ndarray):
        if v.dtype.kind in "iub":
            return {"ints": list(v.shape), "data": [int(a) for a in v.reshape(-1)]}
        return {"array": list(v.shape), "data": [_real(a) for a in v.reshape(-1)]}
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return {"real": _real(v)}
    if isinstance(v, str) or v is None:
        return v
    if isinstance(v, dict):
        return {"map": {k: encode_value(x) for k, x in v.items()}}
    if isinstance(v, (list, tuple)):
        return {"list": [encode_value(x) for x in v]}
    raise TypeError(f"cannot serialize {type(v).__name__}")


def decode_value(v):
    if isinstance(v, dict):
        if "real" in v:
            return float(v["real"])
        if "array" in v:
            return np.array([float(a) for a in v["data"]], dtype=np.float64).reshape(v["array"])
        if "ints" in v:
            return np.array(v["data"], dtype=np.int64).reshape(v["ints"])
        if "map" in v:
            return {k: decode_value(x) for k, x in v["map"].items()}
        if "list" in v:
            return [decode_value(x) for x in v["list"]]
        raise ValueError(f"unrecognised encoded value with keys {sorted(v)}")
    return v


def model_to_document(model):
    return {
        "format": FORMAT,
        "version": VERSION,
        "algorithm": model.algorithm,
        "name": model.name,
        "dim": model.dim,
        "theta": encode_value(model.theta),
        "params": {k: encode_value(v) for k, v in model.params.items()},
        "state": {k: encode_value(v) for k, v in model.state().items()},
    }


def model_from_document(doc):
    from . import MODEL_TYPES

    if doc.get("format") != FORMAT:
        raise ValueError(f"not an {FORMAT} document: format={doc.get('format')!r}")
    if doc.get("version") != VERSION:
        raise ValueError(f"unsupported model document version {doc.get('version')!r}")
    cls = MODEL_TYPES[doc["algorithm"]]
    params = {k: decode_value(v) for k, v in doc["params"].items()}
    state = {k: decode_value(v) for k, v in doc["state"].items()}
    return cls.from_state(decode_value(doc["theta"]), params, doc["dim"], doc["name"], state)


def dumps(model):
    return json.dumps(model_to_document(model), indent=1, sort_keys=True)


def loads(text):
    return model_from_document(json.loads(text))


def save(model, path):
    with open(path, "w") as fh:
        fh.write(dumps(model))


def load(path):
    with open(path) as fh:
        return loads(fh.read())
