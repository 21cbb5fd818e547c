"""Exception and warning types raised across the toolkit."""


class HnilmError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(HnilmError):
    pass


class InvalidSample(HnilmError):
    pass


class IncompatiblePeriod(HnilmError):
    pass


class NoOverlap(HnilmError):
    pass


class NoData(HnilmError):
    pass


class InvalidHierarchy(HnilmError):
    pass


class TooShort(HnilmError):
    pass


class NoOnState(HnilmError):
    pass


class TooManyCombinations(HnilmError):
    pass


class ZeroEnergy(HnilmError):
    pass


class MissingTruth(HnilmError):
    def __init__(self, name):
        super().__init__(f"no ground truth series for appliance {name!r}")
        self.name = name


class UndefinedCorrelation(HnilmError):
    def __init__(self, name):
        super().__init__(f"feed {name!r} is constant over the overlap")
        self.name = name


class InvalidSpec(HnilmError):
    pass


class DegenerateTraining(UserWarning):
    """Fewer distinct ON levels were available than states requested."""
