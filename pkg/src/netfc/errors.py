"""Exception types raised by :mod:`netfc`."""


class NfcError(Exception):
    """Base class for all library errors."""


class InvalidRangeError(NfcError, ValueError):
    pass


class BitsOutOfRangeError(NfcError, ValueError):
    pass


class LevelOutOfRangeError(NfcError, IndexError):
    pass


class DomainError(NfcError, ValueError):
    pass


class TableTooLargeError(NfcError, ValueError):
    pass


class InconsistentColoringError(NfcError):
    """Two input tuples with the same color tuple disagree on the output."""


class UnknownColorTupleError(NfcError, KeyError):
    pass


class TruncatedFrameError(NfcError, ValueError):
    pass
