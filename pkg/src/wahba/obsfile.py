"""Observation file reader.

Two layouts are accepted.

Line records, one observation per line, fields separated by whitespace
and/or commas::

    r1 r2 r3 b1 b2 b3 [sigma]

``#`` starts a comment; blank lines are ignored. Without a sigma column
every observation gets unit weight.

JSON, either a list of records or ``{"observations": [...]}``; each record
has ``reference`` and ``body`` (3-lists) plus optionally ``sigma`` (radians)
or ``weight``.

Vectors are normalized on ingestion.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import WahbaError
from .problem import ObservationSet, weights_from_sigmas

_SPLIT = re.compile(r"[\s,]+")


class ObservationFileError(WahbaError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass
class _Record:
    reference: list[float]
    body: list[float]
    sigma: float | None = None
    weight: float | None = None
    line: int | None = None


def _floats(values, what: str, line: int | None, n: int) -> list[float]:
    try:
        out = [float(v) for v in values]
    except (TypeError, ValueError):
        raise ObservationFileError(f"{what} must be numeric", line) from None
    if len(out) != n:
        raise ObservationFileError(f"{what} needs {n} values, got {len(out)}", line)
    if not all(math.isfinite(v) for v in out):
        raise ObservationFileError(f"{what} has non-finite values", line)
    return out


def _parse_lines(text: str) -> list[_Record]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        fields = [f for f in _SPLIT.split(body) if f]
        if len(fields) not in (6, 7):
            raise ObservationFileError(f"expected 6 or 7 fields, got {len(fields)}", lineno)
        nums = _floats(fields, "record", lineno, len(fields))
        sigma = nums[6] if len(nums) == 7 else None
        if sigma is not None and not sigma > 0:
            raise ObservationFileError("sigma must be positive", lineno)
        records.append(_Record(nums[0:3], nums[3:6], sigma=sigma, line=lineno))
    return records


def _parse_json(text: str) -> list[_Record]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ObservationFileError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if isinstance(doc, dict):
        doc = doc.get("observations")
    if not isinstance(doc, list):
        raise ObservationFileError("JSON document must be a list of observation records")
    records = []
    for i, item in enumerate(doc, start=1):
        if not isinstance(item, dict) or "reference" not in item or "body" not in item:
            raise ObservationFileError(f"record {i} needs 'reference' and 'body'")
        r = _floats(item["reference"], f"record {i} reference", None, 3)
        b = _floats(item["body"], f"record {i} body", None, 3)
        sigma, weight = item.get("sigma"), item.get("weight")
        if sigma is not None and not float(sigma) > 0:
            raise ObservationFileError(f"record {i}: sigma must be positive")
        if weight is not None and not float(weight) > 0:
            raise ObservationFileError(f"record {i}: weight must be positive")
        records.append(
            _Record(
                r,
                b,
                sigma=None if sigma is None else float(sigma),
                weight=None if weight is None else float(weight),
            )
        )
    return records


def parse_observations(text: str, weighting: str = "inverse_variance") -> ObservationSet:
    """Parse either layout into a normalized-weight observation set."""
    stripped = text.lstrip()
    records = _parse_json(text) if stripped[:1] in ("[", "{") else _parse_lines(text)
    if not records:
        raise ObservationFileError("no observations found")

    sigmas = [r.sigma for r in records]
    weights = [r.weight for r in records]
    if all(w is not None for w in weights):
        raw = weights
    elif all(s is not None for s in sigmas):
        raw = weights_from_sigmas(sigmas, weighting)
    elif all(s is None for s in sigmas) and all(w is None for w in weights):
        raw = [1.0] * len(records)
    else:
        raise ObservationFileError("give sigma (or weight) for every observation or for none")
    try:
        return ObservationSet.from_vectors(
            [r.reference for r in records],
            [r.body for r in records],
            raw,
            normalize_weights=True,
        )
    except WahbaError as exc:
        raise ObservationFileError(str(exc)) from None


def read_observations(path, weighting: str = "inverse_variance") -> ObservationSet:
    return parse_observations(Path(path).read_text(), weighting)
