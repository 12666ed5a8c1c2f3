"""Exception types shared across the package."""


class TwinreduceError(Exception):
    """Base class for all library errors."""


class InvalidMergeError(TwinreduceError):
    """A merge referenced a dead, unknown, or repeated vertex."""


class InvalidPartitionError(TwinreduceError):
    """A vertex set family is not a partition of the ground set."""


class TooLargeError(TwinreduceError):
    """Input exceeds the size cap of an exact evaluator."""


class InvalidAnchorError(TwinreduceError):
    """A profile query placed the probe vertex inside the anchor set."""


class CertificateError(TwinreduceError):
    """A product certificate failed a static validity check."""


class PigeonholeError(CertificateError):
    """A row held more distinct neighbourhood signatures than the target
    part count, certifying a violated separation condition."""

    def __init__(self, message, separation=None, row=None, signatures=None, side=None):
        super().__init__(message)
        self.separation = separation
        self.row = row
        self.signatures = signatures
        self.side = side


class GadgetParameterError(TwinreduceError):
    """Generator parameters outside their legal range."""
