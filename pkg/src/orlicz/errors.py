"""Exception types shared across the package."""


class OrliczError(Exception):
    """Base class for all library-specific failures."""


class DegenerateFunctionError(OrliczError):
    """The candidate function is bounded, vanishing, or otherwise not usable."""


class Delta2RequiredError(OrliczError):
    """An operation needs a doubling constant the function does not carry."""


class DomainError(OrliczError, ValueError):
    """An argument violates an operation's stated domain."""


class NotProperError(OrliczError):
    """An objective is identically +inf on every probe point or grid point."""
