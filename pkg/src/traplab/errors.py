"""Exception types raised across traplab."""


class ParameterError(ValueError):
    """A model or sampler parameter is outside its admissible range."""


class WindowError(ValueError):
    """A query falls outside the spatial window a random object represents."""


class CapExceededError(RuntimeError):
    """An event/step cap was hit; the run is not trustworthy as a sample."""


class IntegrationError(RuntimeError):
    """A numerical integration or root bracket failed."""


class InsufficientDataError(ValueError):
    """Too few resolved points or samples for a statistic."""
