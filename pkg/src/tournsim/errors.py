"""Exception types shared across the package."""


class TournsimError(ValueError):
    """Base class for all domain errors."""


class IngestionError(TournsimError):
    """Malformed or inconsistent tabular model input."""


class InvalidPairingError(TournsimError):
    """A game was requested between a team and itself."""


class InvalidInputError(TournsimError):
    """Empty or mixed-pair game lists, bad parameters."""


class IncompleteRoundRobinError(TournsimError):
    """A scoring operation needs one entry per opponent / per pair."""


class InvalidComparisonError(TournsimError):
    """Rankings or distributions over different team sets."""


class UnsupportedSizeError(TournsimError):
    """Format engine invoked with a team count it does not support."""


class IncompleteInputError(TournsimError):
    """A fixed result table is missing pairings."""
