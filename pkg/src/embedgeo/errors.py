"""Exception hierarchy shared across the toolkit."""


class EmbedGeoError(Exception):
    """Base class for all toolkit errors."""


class ArgumentError(EmbedGeoError):
    """A parameter value is outside its documented domain."""


class EmptyToken(EmbedGeoError):
    """Token categorization was asked to classify an empty string."""


class ParseError(EmbedGeoError):
    """Input file is not syntactically valid."""


class SchemaError(EmbedGeoError):
    """Input file parsed but violates the expected layout (e.g. non-dense ids)."""


class FormatError(EmbedGeoError):
    """Binary matrix file has the wrong magic, version, or dtype."""


class UnsupportedLayout(EmbedGeoError):
    """Matrix file uses a memory layout the loader does not accept."""


class ShapeError(EmbedGeoError):
    """Array has the wrong rank or incompatible dimensions."""


class DataError(EmbedGeoError):
    """Loaded values fail validation (NaN/Inf); carries the first bad row."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class EmptyAlignment(EmbedGeoError):
    """Two vocabularies share no tokens."""


class DegenerateQuery(EmbedGeoError):
    """A nearest-neighbor query row has zero norm."""


class DegenerateLabels(EmbedGeoError):
    """A binary training set contains only one class."""


class SkippedCategory(EmbedGeoError):
    """A probe category has too few tokens to cross-validate."""


class RankError(EmbedGeoError):
    """Matrix is rank-deficient or has fewer rows than columns."""

    def __init__(self, message: str, rank: int | None = None):
        super().__init__(message)
        self.rank = rank


class EmptyCorpus(EmbedGeoError):
    """Frequency counting saw no usable input lines."""
