"""Exception hierarchy shared by all sepcontact modules."""


class SepContactError(Exception):
    """Base class for every error raised by this package."""


class OverlapError(SepContactError):
    """Two balls of a packing have overlapping interiors."""


class DegreeError(SepContactError):
    """A ball touches more than 2d others; the input cannot be a valid packing."""


class CollinearError(SepContactError):
    pass


class MissingPairError(SepContactError):
    pass


class DuplicateCenterError(SepContactError):
    pass


class CapacityError(SepContactError):
    pass


class InternalInconsistency(SepContactError):
    """Two independent computations of the same quantity disagree."""


class LimitError(SepContactError):
    """Requested search is beyond the desk-scale limits."""


class DomainError(SepContactError, ValueError):
    pass


class DisconnectedError(SepContactError):
    pass


class EmbeddingError(SepContactError):
    pass


class RealizabilityError(SepContactError, ValueError):
    pass
