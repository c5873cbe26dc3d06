"""JSON documents describing chain specifications (schema version 1).

::

    {"schema": 1, "kind": "exchangeable", "k": 1, "A": [[...]], "B": [[...]]}
    {"schema": 1, "kind": "banded", "k": 1, "A": [[...]], "B": [[...]], "j": 2}
    {"schema": 1, "kind": "toeplitz_mixture", "k": 1, "A": [[...]],
     "bands": [{"j": 1, "p": 0.5, "B": [[...]]}, ...]}

Matrices are row-major lists of rows in the intra-site order (q_1, p_1, ...).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .chains import Band, BandedSpec, ChainSpec, ExchangeableSpec, ToeplitzMixtureSpec
from .errors import InvalidArgumentError, SpecParseError

SCHEMA_VERSION = 1
KINDS = ("exchangeable", "banded", "toeplitz_mixture")


def _matrix(doc, key, path, k):
    if key not in doc:
        raise SpecParseError(f"{path}: missing required field {key!r}")
    rows = doc[key]
    where = f"{path}.{key}"
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SpecParseError(f"{where}: expected a list of rows")
    if len(rows) != 2 * k:
        raise SpecParseError(f"{where}: expected {2 * k} rows for k={k}, got {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != 2 * k:
            raise SpecParseError(f"{where}[{i}]: expected {2 * k} entries, got {len(row)}")
        for jj, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SpecParseError(f"{where}[{i}][{jj}]: expected a number, got {x!r}")
    return np.array(rows, dtype=float)


def _int(doc, key, path, minimum=1):
    if key not in doc:
        raise SpecParseError(f"{path}: missing required field {key!r}")
    x = doc[key]
    if isinstance(x, bool) or not isinstance(x, int) or x < minimum:
        raise SpecParseError(f"{path}.{key}: expected an integer >= {minimum}, got {x!r}")
    return x


def spec_from_dict(doc: dict) -> ChainSpec:
    if not isinstance(doc, dict):
        raise SpecParseError("$: expected a JSON object")
    if doc.get("schema") != SCHEMA_VERSION:
        raise SpecParseError(f"$.schema: expected {SCHEMA_VERSION}, got {doc.get('schema')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecParseError(f"$.kind: expected one of {list(KINDS)}, got {kind!r}")
    k = _int(doc, "k", "$")
    A = _matrix(doc, "A", "$", k)
    try:
        if kind == "exchangeable":
            return ExchangeableSpec(A, _matrix(doc, "B", "$", k))
        if kind == "banded":
            return BandedSpec(A, _matrix(doc, "B", "$", k), _int(doc, "j", "$"))
        bands = doc.get("bands")
        if not isinstance(bands, list):
            raise SpecParseError("$.bands: expected a list")
        parsed = []
        for i, band in enumerate(bands):
            where = f"$.bands[{i}]"
            if not isinstance(band, dict):
                raise SpecParseError(f"{where}: expected an object")
            p = band.get("p")
            if isinstance(p, bool) or not isinstance(p, (int, float)):
                raise SpecParseError(f"{where}.p: expected a number, got {p!r}")
            parsed.append(Band(_int(band, "j", where), float(p), _matrix(band, "B", where, k)))
        return ToeplitzMixtureSpec(A, parsed)
    except SpecParseError:
        raise
    except InvalidArgumentError as exc:
        raise SpecParseError(f"$: {exc}") from exc


def spec_to_dict(spec: ChainSpec) -> dict:
    doc = {"schema": SCHEMA_VERSION, "kind": spec.kind, "k": spec.k, "A": spec.A.tolist()}
    if isinstance(spec, ExchangeableSpec):
        doc["B"] = spec.B.tolist()
    elif isinstance(spec, BandedSpec):
        doc["B"] = spec.B.tolist()
        doc["j"] = spec.j
    else:
        doc["bands"] = [{"j": b.j, "p": b.p, "B": b.B.tolist()} for b in spec.bands]
    return doc


def loads(text: str) -> ChainSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return spec_from_dict(doc)


def dumps(spec: ChainSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2) + "\n"


def load(path) -> ChainSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecParseError(f"{path}: {exc.strerror}") from exc
    try:
        return loads(text)
    except SpecParseError as exc:
        raise SpecParseError(f"{path}: {exc}") from exc


def dump(spec: ChainSpec, path) -> None:
    Path(path).write_text(dumps(spec))
