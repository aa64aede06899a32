"""Exception hierarchy.

Every domain error derives from :class:`GiryError` so the CLI can map the
whole family onto exit code 2.
"""


class GiryError(Exception):
    """Base class for all girylab domain errors."""


# measure-core
class DuplicateIndex(GiryError):
    pass


class NegativeWeight(GiryError):
    pass


class MassNotOne(GiryError):
    pass


class UnsupportedSetShape(GiryError):
    pass


class EnumerationCapExceeded(GiryError):
    pass


class PartialMap(GiryError):
    pass


class PartialFamily(GiryError):
    pass


class TailUnsupported(GiryError):
    pass


# scvx
class UnknownSpace(GiryError):
    pass


class PartialSequence(GiryError):
    pass


class OutOfCarrier(GiryError):
    pass


class BoundExceeded(GiryError):
    pass


# algebras
class NotAffine(GiryError):
    pass


class NotPermutation(GiryError):
    pass


class UnknownAlgebra(GiryError):
    pass


# stdspace
class IndexOutOfRange(GiryError):
    pass


class EmptyPart(GiryError):
    pass


class NotAPartition(GiryError):
    pass


class UnknownPoint(GiryError):
    pass


class BrokenChain(GiryError):
    pass


# amplitudes
class NormNotOne(GiryError):
    pass


# cli
class UnknownSuite(GiryError):
    pass


class BadConfig(GiryError):
    pass


class ParseError(GiryError):
    pass
