"""Exception hierarchy shared across the package."""


class ClusterDSSError(ValueError):
    """Base class for every parameter or verification error raised here."""


class NonDivisible(ClusterDSSError):
    pass


class InvalidK(ClusterDSSError):
    pass


class NegativeBandwidth(ClusterDSSError):
    pass


class OrderViolation(ClusterDSSError):
    pass


class InvalidL(ClusterDSSError):
    pass


class InvalidLc(ClusterDSSError):
    pass


class InvalidAdversary(ClusterDSSError):
    pass


class IndexOutOfRange(ClusterDSSError):
    pass


class InvalidSchedule(ClusterDSSError):
    pass


class PlacementViolation(ClusterDSSError):
    pass


class TooLarge(ClusterDSSError):
    pass


class BoundViolated(ClusterDSSError):
    """Raised by grid validation when the oracle finds a value below a bound.

    The offending report is attached as ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class UnknownCluster(ClusterDSSError):
    pass


class FieldTooSmall(ClusterDSSError):
    pass


class LengthMismatch(ClusterDSSError):
    pass


class SizeMismatch(ClusterDSSError):
    pass


class AlreadyFailed(ClusterDSSError):
    pass


class InsufficientNodes(ClusterDSSError):
    pass


class SecrecyViolation(ClusterDSSError):
    """An observation set leaks information about the message.

    ``clusters`` names the compromised cluster choice and ``observed`` the
    coordinates of the codeword the adversary sees.
    """

    def __init__(self, message, clusters=None, observed=None):
        super().__init__(message)
        self.clusters = clusters
        self.observed = observed
