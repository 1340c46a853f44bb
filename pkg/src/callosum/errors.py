"""Exception types raised across the pipeline.

Everything derives from CallosumError so the CLI can map any data or
validation problem to a single exit code.
"""


class CallosumError(Exception):
    """Base class for all pipeline errors."""


class MissingColumn(CallosumError):
    """Schema names a column that is absent from the CSV header."""

    def __init__(self, column: str):
        super().__init__(f"required column missing from CSV header: {column!r}")
        self.column = column


class BadValue(CallosumError):
    """A cell could not be parsed (non-numeric feature, unknown label/sex, ...).

    ``row`` is the 1-based data-row index, header excluded.
    """

    def __init__(self, row: int, column: str, value, reason: str = ""):
        detail = f" ({reason})" if reason else ""
        super().__init__(f"bad value at row {row}, column {column!r}: {value!r}{detail}")
        self.row = row
        self.column = column
        self.value = value


class DuplicateSubject(CallosumError):
    def __init__(self, subject_id: str):
        super().__init__(f"duplicate subject_id: {subject_id!r}")
        self.subject_id = subject_id


class EmptyTable(CallosumError):
    """Operation requires at least one record."""


class InvalidSpec(CallosumError):
    """Synthetic-generator parameters are unusable (negative std, bad counts)."""


class LengthMismatch(CallosumError):
    """Paired vectors have different lengths."""


class EmptyCounts(CallosumError):
    """Entropy of an all-zero count vector is undefined."""


class DegenerateData(CallosumError):
    """Fewer than two classes present where a fit/weighting needs both."""


class SingularScatter(CallosumError):
    """Pooled within-class scatter is singular and no ridge was requested."""


class DimensionMismatch(CallosumError):
    """Feature vector length does not match what the model was trained on."""


class KTooLarge(CallosumError):
    """k exceeds what the data supports (CV folds or KNN neighbours)."""


class SingleSite(CallosumError):
    """Leave-one-site-out needs at least two distinct sites."""


class EmptyTest(CallosumError):
    """Accuracy over an empty test set is undefined."""
