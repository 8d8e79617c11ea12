"""Exception hierarchy shared by all spikeot modules."""


class SpikeOTError(Exception):
    """Base class for all spikeot errors."""


class DomainError(SpikeOTError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class InvalidSample(SpikeOTError, ValueError):
    """Sample values are malformed (NaN, infinity, wrong shape)."""


class InvalidMeasure(SpikeOTError, ValueError):
    """An empirical measure violates its mass or support invariants."""


class SizeMismatch(SpikeOTError, ValueError):
    """Two sample sequences that must have equal length do not."""


class EmptyTrain(SpikeOTError, ValueError):
    """An operation that requires at least one event received an empty train."""


class ChannelMismatch(SpikeOTError, ValueError):
    """Multi-channel inputs have different channel counts."""


class DimensionMismatch(SpikeOTError, ValueError):
    """Point clouds live in different ambient dimensions."""


class NumericalError(SpikeOTError, ArithmeticError):
    """A numerical invariant was violated badly enough to signal a bug."""


class IntensityExhausted(SpikeOTError, ValueError):
    """A cumulative-intensity inverse was requested beyond the total mass."""


class DegenerateLimit(SpikeOTError, ValueError):
    """A limiting formula was requested at a parameter point where it is not proven."""
