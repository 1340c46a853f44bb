"""Tabular dataset handling.

Owns the immutable subjects-by-features table, schema-mapped CSV ingestion,
per-class summary statistics, z-scoring, and a seeded synthetic generator
that reproduces the published per-class marginals of the preprocessed ABIDE
corpus-callosum table.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadValue,
    DuplicateSubject,
    EmptyTable,
    InvalidSpec,
    MissingColumn,
)

CONTROL = 0
ASD = 1
CLASS_NAMES = ("control", "asd")

# Canonical model features, in reporting order. Corpus callosum morphometrics
# (area mm^2, perimeter, midline length, circularity), the seven Witelson
# subdivisions, and total intracranial volume (mm^3).
FEATURE_NAMES = (
    "cc_area",
    "cc_perimeter",
    "cc_length",
    "cc_circularity",
    "w1_rostrum",
    "w2_genu",
    "w3_anterior_body",
    "w4_mid_body",
    "w5_posterior_body",
    "w6_isthmus",
    "w7_splenium",
    "brain_volume",
)

METADATA_FIELDS = ("subject_id", "site", "label", "sex", "age")

# ABIDE acquisition sites in canonical reporting order.
SITE_ORDER = (
    "CALTECH", "CMU", "KKI", "MAXMUN", "NYU", "OLIN", "OHSU", "SDSU", "SBL",
    "STANFORD", "TRINITY", "UCLA_1", "UCLA_2", "LEUVEN_1", "LEUVEN_2",
    "UM_1", "UM_2", "PITT", "USM", "YALE",
)


def _default_columns() -> dict[str, str]:
    return {name: name for name in METADATA_FIELDS + FEATURE_NAMES}


@dataclass(frozen=True)
class ColumnSchema:
    """Maps canonical field names to source CSV header names.

    ``label_positive`` / ``label_negative`` fix which label strings denote
    ASD and control rows. Values not matching either are rejected.
    """

    columns: dict[str, str] = field(default_factory=_default_columns)
    label_positive: str = "ASD"
    label_negative: str = "Control"

    @classmethod
    def default(cls) -> "ColumnSchema":
        return cls()

    @classmethod
    def from_file(cls, path) -> "ColumnSchema":
        """Parse a flat key=value schema file; unlisted keys keep defaults.

        Lines starting with '#' (or trailing '# ...' fragments) are comments.
        """
        columns = _default_columns()
        label_positive = "ASD"
        label_negative = "Control"
        text = Path(path).read_text(encoding="utf-8")
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key == "label_positive":
                label_positive = value
            elif key == "label_negative":
                label_negative = value
            elif key in columns:
                columns[key] = value
            else:
                raise ValueError(f"{path}:{lineno}: unknown schema key {key!r}")
        return cls(columns=columns, label_positive=label_positive,
                   label_negative=label_negative)


@dataclass(frozen=True)
class SubjectRecord:
    subject_id: str
    site: str
    label: int
    sex: str
    age: float
    features: tuple[float, ...]


@dataclass(frozen=True)
class FeatureTable:
    """Immutable table of subjects with numeric features and metadata.

    Safe to share across threads; every operation returns a new table.
    """

    records: tuple[SubjectRecord, ...]
    feature_names: tuple[str, ...] = FEATURE_NAMES
    schema: ColumnSchema = field(default_factory=ColumnSchema.default)

    def __post_init__(self):
        width = len(self.feature_names)
        seen = set()
        for rec in self.records:
            if len(rec.features) != width:
                raise ValueError(
                    f"record {rec.subject_id!r} has {len(rec.features)} features, "
                    f"expected {width}")
            if rec.subject_id in seen:
                raise DuplicateSubject(rec.subject_id)
            seen.add(rec.subject_id)
            if not rec.site:
                raise ValueError(f"record {rec.subject_id!r} has an empty site")
            for v in rec.features:
                if not math.isfinite(v):
                    raise ValueError(
                        f"record {rec.subject_id!r} has a non-finite feature value")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def labels(self) -> np.ndarray:
        return np.array([rec.label for rec in self.records], dtype=int)

    @property
    def sites(self) -> tuple[str, ...]:
        return tuple(rec.site for rec in self.records)

    def n_classes(self) -> int:
        return len({rec.label for rec in self.records})

    def feature_index(self, name: str) -> int:
        try:
            return self.feature_names.index(name)
        except ValueError:
            raise KeyError(f"unknown feature {name!r}") from None

    def column(self, name: str) -> np.ndarray:
        i = self.feature_index(name)
        return np.array([rec.features[i] for rec in self.records], dtype=float)

    def feature_matrix(self, subset=None) -> np.ndarray:
        names = self.feature_names if subset is None else tuple(subset)
        idx = [self.feature_index(n) for n in names]
        return np.array([[rec.features[i] for i in idx] for rec in self.records],
                        dtype=float)

    def subset_rows(self, indices) -> "FeatureTable":
        recs = tuple(self.records[i] for i in indices)
        return FeatureTable(records=recs, feature_names=self.feature_names,
                            schema=self.schema)


@dataclass(frozen=True)
class ClassSummary:
    """Counts and per-feature mean/std (ddof=1) for one class."""

    count: int
    sex_m: int
    sex_f: int
    age_mean: float
    age_std: float
    feature_means: tuple[float, ...]
    feature_stds: tuple[float, ...]


@dataclass(frozen=True)
class SummaryStats:
    feature_names: tuple[str, ...]
    control: ClassSummary
    asd: ClassSummary

    def by_class(self, label: int) -> ClassSummary:
        return self.asd if label == ASD else self.control

    def rows(self):
        """Yield (field, control value, asd value) rows for delimited output."""
        yield ("number", self.control.count, self.asd.count)
        yield ("sex_m", self.control.sex_m, self.asd.sex_m)
        yield ("sex_f", self.control.sex_f, self.asd.sex_f)
        yield ("age_mean", self.control.age_mean, self.asd.age_mean)
        yield ("age_std", self.control.age_std, self.asd.age_std)
        for i, name in enumerate(self.feature_names):
            yield (f"{name}_mean", self.control.feature_means[i],
                   self.asd.feature_means[i])
            yield (f"{name}_std", self.control.feature_stds[i],
                   self.asd.feature_stds[i])


@dataclass(frozen=True)
class ScalingStats:
    """Per-feature location/scale for z-scoring, fit on training rows only.

    Features with zero (or undefined) spread pass through unscaled.
    """

    mean: tuple[float, ...]
    std: tuple[float, ...]

    @classmethod
    def from_matrix(cls, x) -> "ScalingStats":
        x = np.asarray(x, dtype=float)
        mean = x.mean(axis=0)
        if x.shape[0] > 1:
            std = x.std(axis=0, ddof=1)
        else:
            std = np.zeros(x.shape[1])
        return cls(mean=tuple(float(v) for v in mean),
                   std=tuple(float(v) for v in std))

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        mean = np.asarray(self.mean)
        std = np.asarray(self.std)
        usable = std > 0
        shift = np.where(usable, mean, 0.0)
        scale = np.where(usable, std, 1.0)
        return (x - shift) / scale


def load_csv(path, schema: ColumnSchema | None = None) -> FeatureTable:
    """Read a feature table from a header-bearing, comma-separated UTF-8 file.

    Rows with unparseable or missing values are rejected with BadValue;
    nothing is ever imputed.
    """
    schema = schema or ColumnSchema.default()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyTable(f"{path}: file has no header row") from None
        position = {name.strip(): i for i, name in enumerate(header)}
        col_idx: dict[str, int] = {}
        for canonical in METADATA_FIELDS + FEATURE_NAMES:
            source = schema.columns.get(canonical, canonical)
            if source not in position:
                raise MissingColumn(source)
            col_idx[canonical] = position[source]
        records = []
        for row_num, row in enumerate(reader, start=1):
            records.append(_parse_row(row, row_num, col_idx, schema))
    return FeatureTable(records=tuple(records), schema=schema)


def _cell(row, row_num, col_idx, canonical):
    i = col_idx[canonical]
    if i >= len(row):
        raise BadValue(row_num, canonical, None, "row has too few fields")
    return row[i].strip()


def _parse_row(row, row_num, col_idx, schema) -> SubjectRecord:
    subject_id = _cell(row, row_num, col_idx, "subject_id")
    if not subject_id:
        raise BadValue(row_num, "subject_id", "", "empty subject id")
    site = _cell(row, row_num, col_idx, "site")
    if not site:
        raise BadValue(row_num, "site", "", "empty site")

    raw_label = _cell(row, row_num, col_idx, "label")
    if raw_label == schema.label_positive:
        label = ASD
    elif raw_label == schema.label_negative:
        label = CONTROL
    else:
        raise BadValue(row_num, "label", raw_label, "unknown class label")

    raw_sex = _cell(row, row_num, col_idx, "sex").upper()
    if raw_sex not in ("M", "F"):
        raise BadValue(row_num, "sex", raw_sex, "expected M or F")

    raw_age = _cell(row, row_num, col_idx, "age")
    try:
        age = float(raw_age)
    except ValueError:
        raise BadValue(row_num, "age", raw_age, "not a number") from None
    if not math.isfinite(age):
        raise BadValue(row_num, "age", raw_age, "not finite")

    values = []
    for name in FEATURE_NAMES:
        raw = _cell(row, row_num, col_idx, name)
        try:
            value = float(raw)
        except ValueError:
            raise BadValue(row_num, name, raw, "not a number") from None
        if not math.isfinite(value):
            raise BadValue(row_num, name, raw, "not finite")
        values.append(value)

    return SubjectRecord(subject_id=subject_id, site=site, label=label,
                         sex=raw_sex, age=age, features=tuple(values))


def write_csv(table: FeatureTable, path) -> None:
    """Inverse of load_csv under the table's schema; floats round-trip exactly."""
    schema = table.schema
    fields = METADATA_FIELDS + tuple(table.feature_names)
    header = [schema.columns.get(name, name) for name in fields]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rec in table.records:
            label = schema.label_positive if rec.label == ASD else schema.label_negative
            row = [rec.subject_id, rec.site, label, rec.sex, repr(rec.age)]
            row.extend(repr(v) for v in rec.features)
            writer.writerow(row)


def _class_summary(table: FeatureTable, label: int) -> ClassSummary:
    recs = [r for r in table.records if r.label == label]
    count = len(recs)
    if count == 0:
        nan = float("nan")
        width = len(table.feature_names)
        return ClassSummary(0, 0, 0, nan, nan, (nan,) * width, (nan,) * width)
    x = np.array([r.features for r in recs], dtype=float)
    ages = np.array([r.age for r in recs], dtype=float)
    means = x.mean(axis=0)
    if count > 1:
        stds = x.std(axis=0, ddof=1)
        age_std = float(ages.std(ddof=1))
    else:
        stds = np.zeros(x.shape[1])
        age_std = 0.0
    return ClassSummary(
        count=count,
        sex_m=sum(1 for r in recs if r.sex == "M"),
        sex_f=sum(1 for r in recs if r.sex == "F"),
        age_mean=float(ages.mean()),
        age_std=age_std,
        feature_means=tuple(float(v) for v in means),
        feature_stds=tuple(float(v) for v in stds),
    )


def summarize(table: FeatureTable) -> SummaryStats:
    """Per-class counts, sex split, and mean/std of age and every feature."""
    if not table.records:
        raise EmptyTable("cannot summarize an empty table")
    return SummaryStats(
        feature_names=tuple(table.feature_names),
        control=_class_summary(table, CONTROL),
        asd=_class_summary(table, ASD),
    )


def scaling_stats(table: FeatureTable) -> ScalingStats:
    if not table.records:
        raise EmptyTable("cannot compute scaling stats of an empty table")
    return ScalingStats.from_matrix(table.feature_matrix())


def standardize(table: FeatureTable, stats: ScalingStats) -> FeatureTable:
    """z-score every feature column with externally supplied stats.

    ``stats`` must come from a training subset; metadata is untouched.
    """
    scaled = stats.apply(table.feature_matrix())
    records = tuple(
        SubjectRecord(subject_id=rec.subject_id, site=rec.site, label=rec.label,
                      sex=rec.sex, age=rec.age,
                      features=tuple(float(v) for v in scaled[i]))
        for i, rec in enumerate(table.records)
    )
    return FeatureTable(records=records, feature_names=table.feature_names,
                        schema=table.schema)


def synthesize(spec: SummaryStats, n_per_class: int, n_sites: int,
               seed: int) -> FeatureTable:
    """Draw a synthetic table from per-class, per-feature normal marginals.

    Features are drawn independently (the published summary gives no
    covariances, a documented fidelity limit). Sites are assigned
    round-robin over the record sequence; output is deterministic per seed.
    """
    if n_per_class < 1:
        raise InvalidSpec(f"n_per_class must be >= 1, got {n_per_class}")
    if n_sites < 1:
        raise InvalidSpec(f"n_sites must be >= 1, got {n_sites}")
    for block in (spec.control, spec.asd):
        if block.age_std < 0 or any(s < 0 for s in block.feature_stds):
            raise InvalidSpec("negative standard deviation in generator spec")

    rng = np.random.default_rng(seed)
    sites = list(SITE_ORDER[:n_sites])
    while len(sites) < n_sites:
        sites.append(f"SITE{len(sites) + 1}")

    width = len(spec.feature_names)
    records = []
    index = 0
    for label, block in ((CONTROL, spec.control), (ASD, spec.asd)):
        columns = [rng.normal(block.feature_means[j], block.feature_stds[j],
                              size=n_per_class) for j in range(width)]
        ages = rng.normal(block.age_mean, block.age_std, size=n_per_class)
        total_sex = block.sex_m + block.sex_f
        p_male = block.sex_m / total_sex if total_sex > 0 else 0.5
        male = rng.random(n_per_class) < p_male
        for i in range(n_per_class):
            records.append(SubjectRecord(
                subject_id=f"SYN{index:05d}",
                site=sites[index % n_sites],
                label=label,
                sex="M" if male[i] else "F",
                age=float(max(ages[i], 0.0)),
                features=tuple(float(columns[j][i]) for j in range(width)),
            ))
            index += 1
    return FeatureTable(records=tuple(records),
                        feature_names=tuple(spec.feature_names))


# Published per-class statistics of the preprocessed ABIDE corpus-callosum
# table (571 controls / 529 ASD). Means and stds feed the synthetic generator
# and the conditional reproduction checks.
ABIDE_SUMMARY = SummaryStats(
    feature_names=FEATURE_NAMES,
    control=ClassSummary(
        count=571, sex_m=479, sex_f=99,
        age_mean=17.102, age_std=7.726,
        feature_means=(596.654, 196.405, 70.583, 0.194, 20.753, 128.789,
                       91.088, 69.705, 59.007, 51.843, 175.471, 1482428.866),
        feature_stds=(102.93, 6.353, 5.342, 0.020, 14.264, 32.134,
                      19.212, 13.351, 11.698, 12.519, 32.353, 150985.323),
    ),
    asd=ClassSummary(
        count=529, sex_m=465, sex_f=64,
        age_mean=17.082, age_std=8.428,
        feature_means=(596.908, 198.102, 70.711, 0.191, 25.899, 128.855,
                       91.734, 69.345, 59.454, 52.137, 174.483, 1504247.415),
        feature_stds=(110.134, 17.265, 5.671, 0.023, 10.809, 33.704,
                      20.302, 13.796, 12.501, 13.313, 34.562, 170357.180),
    ),
)
