"""Exception hierarchy shared by every module."""


class SpectraError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class CycleDetected(SpectraError):
    pass


class UnknownElement(SpectraError):
    pass


class CapExceeded(SpectraError):
    pass


class EmptySubset(SpectraError):
    pass


class NotDirected(SpectraError):
    pass


class UnknownNode(SpectraError):
    pass


class InvalidRelation(SpectraError):
    """A relation whose kind does not fit the kinds of its endpoints."""


class ClosureConflict(SpectraError):
    pass


class NodeCycle(ClosureConflict):
    pass


class NotRepresentable(SpectraError):
    """The result exists as a poset but has no ray-poset presentation."""


class UnknownVertex(SpectraError):
    pass


class NotHereditarySaturated(SpectraError):
    pass


class NotATail(SpectraError):
    pass


class NotGradedRegime(SpectraError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MixedGraphs(SpectraError):
    pass


class UnknownPrime(SpectraError):
    pass


class NoSuchPrime(SpectraError):
    pass


class UnknownExample(SpectraError):
    pass


class UnknownSuite(SpectraError):
    pass
