class DomainError(ValueError):
    """Raised when an input lies outside the domain of a formula (e.g. |v| >= c)."""
