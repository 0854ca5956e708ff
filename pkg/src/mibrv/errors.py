"""Exception types shared across the package.

Everything raised on bad input derives from MibrvError so callers (and
the CLI) can distinguish data problems from genuine bugs.
"""


class MibrvError(Exception):
    """Base class for all input and state errors raised by this package."""


class DimMismatch(MibrvError):
    """Feature dimensionalities that were required to agree do not."""


class EmptyBag(MibrvError):
    """A bag with zero instances where at least one is required."""


class EmptyDataset(MibrvError):
    """A dataset with no bags."""


class DuplicateBagId(MibrvError):
    """Two bags in one dataset share an id."""


class NonFiniteFeature(MibrvError):
    """A bag feature is NaN or infinite."""


class UnlabeledBag(MibrvError):
    """A bag without a label where one is required."""


class SingleClass(MibrvError):
    """Training data contains only one label."""


class SingleClassFold(MibrvError):
    """A cross-validation training fold contains only one label."""


class NonFinite(MibrvError):
    """A classifier input is NaN or infinite."""


class LengthMismatch(MibrvError):
    """Two sequences that must align have different lengths."""


class EmptyInput(MibrvError):
    """An operation received an empty sequence it cannot handle."""


class TooFewBags(MibrvError):
    """More folds requested than there are bags."""


class TooFewPerClass(MibrvError):
    """Stratified folds requested exceed the size of the smaller class."""


class ParseError(MibrvError):
    """Malformed input file; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InconsistentBagLabel(ParseError):
    """Lines of one bag carry different labels."""


class VersionMismatch(MibrvError):
    """A persisted file has an unknown or corrupted version header."""


class FingerprintMismatch(MibrvError):
    """A model was applied with references it was not trained against."""
