"""Exception types shared across the package."""


class RklsError(Exception):
    """Base class for all rkls errors."""


class BadMagic(RklsError):
    pass


class Truncated(RklsError):
    pass


class BadRecordSize(RklsError):
    pass


class LabelOutOfRange(RklsError):
    pass


class ZeroNorm(RklsError):
    pass


class ShapeMismatch(RklsError):
    pass


class IndexOutOfRange(RklsError):
    pass


class BlockTooLarge(RklsError):
    pass


class NonFinite(RklsError):
    pass


class Singular(RklsError):
    pass


class IncompatibleModels(RklsError):
    pass


class VersionMismatch(RklsError):
    pass


class EmptyTestSet(RklsError):
    pass
