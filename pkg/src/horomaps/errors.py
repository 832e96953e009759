"""Exception types raised across the package."""


class HoromapsError(Exception):
    """Base class for all library errors."""


class InvalidDiscreteParameter(HoromapsError, ValueError):
    """mu <= 0 but sqrt(1 - mu) is not an odd positive integer."""


class DomainError(HoromapsError, ValueError):
    """A point lies outside the chart it is supposed to belong to."""


class IllConditioned(HoromapsError):
    """Coefficient recovery from samples failed its round-trip check."""


class TailDivergence(HoromapsError):
    """Sampled decay is too slow for the requested integral or sum."""


class SingularityResolutionFailure(HoromapsError):
    """Successive refinements toward a singular set disagree."""


class OscillationUnderresolved(HoromapsError):
    """Halving the panel width changed an oscillatory integral too much."""


class NotInAnnihilator(HoromapsError):
    """The input does not vanish on a distribution it is required to vanish on."""


class TailBoundUnavailable(HoromapsError):
    """No usable tail bound for a one-sided series."""


class ResidualTooLarge(HoromapsError):
    """A computed solution fails its residual check."""


class ObstructionNonzero(HoromapsError):
    """An invariant distribution does not vanish on the input."""


class UnsupportedIndex(HoromapsError, ValueError):
    """Index outside the range supported by a construction."""


class SeriesTruncationFailure(HoromapsError):
    """A truncated series tail could not be made small enough."""
