"""Exception types shared across the package."""


class SimplenormError(Exception):
    """Base class for all package-specific errors."""


class ProfileError(SimplenormError):
    """A run profile is malformed or violates a structural requirement."""


class EnumerationTooLarge(SimplenormError):
    """A brute-force oracle was asked to enumerate beyond its guard."""


class PremiseFailure(SimplenormError):
    """A conditional check was invoked with its premises unmet.

    Deliberately distinct from a ``False`` conclusion: premise failures mean
    the check does not apply, not that the claimed implication is wrong.
    """


class InternalInvariantError(SimplenormError):
    """An internal guarantee that should be unconditionally true was violated."""
