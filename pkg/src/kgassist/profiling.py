"""Extraction of dataset characteristics from delimited tabular files.

A column counts as numeric iff every non-missing cell parses as a number;
cells are missing when empty or the literal ``?``. Which characteristics get
populated depends on the target column's type: categorical targets carry a
class count and an imbalance ratio, numerical targets a standard deviation.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import schema as sc
from .store import Graph, Term, Triple, iri, lit

MISSING_MARKERS = ("", "?")

# Numeric targets with at most this many distinct values are treated as
# categorical (class labels encoded as numbers). Exposed for callers that
# need a different cutoff.
CATEGORICAL_CARDINALITY_MAX = 10


class ProfileError(Exception):
    """The input table cannot be profiled."""


@dataclass(frozen=True)
class DatasetProfile:
    """The extracted characteristics of one tabular dataset."""

    name: str
    n_instances: int
    n_features: int
    n_numeric: int
    n_categorical: int
    pct_missing: float
    target_type: str  # categorical | numerical
    n_classes: Optional[int] = None
    imbalance: Optional[float] = None
    std_target: Optional[float] = None

    def __post_init__(self):
        if self.n_numeric + self.n_categorical != self.n_features:
            raise ProfileError(
                "numeric + categorical feature counts must equal the feature count"
            )
        if not 0.0 <= self.pct_missing <= 1.0:
            raise ProfileError("pct_missing must lie in [0, 1]")
        if self.target_type == "categorical":
            if self.n_classes is None or self.imbalance is None or self.std_target is not None:
                raise ProfileError(
                    "categorical targets populate n_classes and imbalance only"
                )
            if self.imbalance < 1.0:
                raise ProfileError("imbalance is majority/minority and is >= 1")
        elif self.target_type == "numerical":
            if self.std_target is None or self.n_classes is not None or self.imbalance is not None:
                raise ProfileError("numerical targets populate std_target only")
            if self.std_target < 0.0:
                raise ProfileError("std_target is nonnegative")
        else:
            raise ProfileError(f"unknown target type {self.target_type!r}")

    def populated_fields(self) -> dict:
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if getattr(self, f.name) is not None
        }


def _is_missing(cell: str) -> bool:
    return cell.strip() in MISSING_MARKERS


def _parse_number(cell: str) -> Optional[float]:
    try:
        return float(cell)
    except ValueError:
        return None


def profile_rows(
    header: list, rows: list, target: str, name: str = "dataset"
) -> DatasetProfile:
    """Profile already-parsed rows; the core of :func:`profile_file`."""
    if target not in header:
        raise ProfileError(f"target column {target!r} not found in header")
    if not rows:
        raise ProfileError("table has no data rows")
    target_idx = header.index(target)
    feature_idx = [i for i in range(len(header)) if i != target_idx]

    width = len(header)
    for row in rows:
        if len(row) != width:
            raise ProfileError(
                f"row width {len(row)} does not match header width {width}"
            )

    n_missing = 0
    numeric_cols = 0
    for i in feature_idx:
        column = [row[i] for row in rows]
        present = [c for c in column if not _is_missing(c)]
        n_missing += len(column) - len(present)
        if all(_parse_number(c) is not None for c in present):
            numeric_cols += 1

    target_cells = [row[target_idx] for row in rows if not _is_missing(row[target_idx])]
    if not target_cells:
        raise ProfileError(f"target column {target!r} is entirely missing")

    target_numbers = [_parse_number(c) for c in target_cells]
    numeric_target = all(v is not None for v in target_numbers)
    distinct = set(target_cells)
    categorical = not numeric_target or len(distinct) <= CATEGORICAL_CARDINALITY_MAX

    n_features = len(feature_idx)
    common = dict(
        name=name,
        n_instances=len(rows),
        n_features=n_features,
        n_numeric=numeric_cols,
        n_categorical=n_features - numeric_cols,
        pct_missing=n_missing / (len(rows) * n_features) if n_features else 0.0,
    )
    if categorical:
        counts = {}
        for c in target_cells:
            counts[c] = counts.get(c, 0) + 1
        return DatasetProfile(
            target_type="categorical",
            n_classes=len(counts),
            imbalance=max(counts.values()) / min(counts.values()),
            **common,
        )
    mean = sum(target_numbers) / len(target_numbers)
    var = sum((v - mean) ** 2 for v in target_numbers) / len(target_numbers)
    return DatasetProfile(target_type="numerical", std_target=math.sqrt(var), **common)


def profile_text(
    text: str, target: str, delimiter: str = ",", name: str = "dataset"
) -> DatasetProfile:
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    table = [row for row in reader if row]
    if not table:
        raise ProfileError("file is empty")
    return profile_rows(table[0], table[1:], target, name=name)


def profile_file(
    path, target: str, delimiter: str = ",", name: Optional[str] = None
) -> DatasetProfile:
    """Profile a delimited text file with a header row."""
    p = Path(path)
    return profile_text(
        p.read_text(encoding="utf-8"),
        target,
        delimiter=delimiter,
        name=name or p.stem,
    )


# Profile field -> (scalar property, characteristic class for reified form).
_FIELD_PROPERTIES = {
    "name": (sc.DATASET_NAME, None),
    "n_instances": (sc.NUM_INSTANCES, sc.CH_INSTANCES),
    "n_features": (sc.NUM_FEATURES, sc.CH_FEATURES),
    "n_numeric": (sc.NUM_NUMERIC, sc.CH_NUMERIC),
    "n_categorical": (sc.NUM_CATEGORICAL, sc.CH_CATEGORICAL),
    "pct_missing": (sc.MISSING_RATIO, sc.CH_MISSING),
    "n_classes": (sc.NUM_CLASSES, sc.CH_CLASSES),
    "imbalance": (sc.TARGET_IMBALANCE, sc.CH_IMBALANCE),
    "std_target": (sc.TARGET_STD, sc.CH_STD),
    "target_type": (sc.TARGET_TYPE, sc.CH_TARGET_TYPE),
}


def dataset_iri(name: str) -> Term:
    slug = "".join(c if c.isalnum() or c in "-_." else "-" for c in name)
    return iri(f"da:dataset/{slug}")


def profile_triples(profile: DatasetProfile, reify: bool = False) -> list:
    """The triples annotating a profile: one per populated field plus the
    type triple; ``reify`` adds a linked characteristic entity per Table-style
    metafeature (the value itself stays on the dataset)."""
    ds = dataset_iri(profile.name)
    out = [Triple(ds, sc.RDF_TYPE, sc.DATASET)]
    for field_name, value in profile.populated_fields().items():
        prop, ch_class = _FIELD_PROPERTIES[field_name]
        out.append(Triple(ds, prop, lit(value)))
        if reify and ch_class is not None:
            ch = iri(f"{ds.value}/char/{field_name}")
            out.append(Triple(ds, sc.HAS_CHARACTERISTIC, ch))
            out.append(Triple(ch, sc.RDF_TYPE, ch_class))
    return out


def annotate_profile(
    g: Graph, schema: sc.Schema, profile: DatasetProfile, reify: bool = False
) -> Term:
    """Persist a profile into the store and return the dataset entity.

    Re-annotating an identically named dataset reuses the entity; set
    semantics keep repeated annotation from duplicating triples. Schema
    violations abort without touching the store.
    """
    new = profile_triples(profile, reify=reify)
    violations = schema.validate_batch(new, context=g)
    if violations:
        raise ProfileError(f"annotation is schema-invalid: {violations[0]}")
    g.add_all(new)
    return dataset_iri(profile.name)
