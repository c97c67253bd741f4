"""Exception hierarchy shared across the package."""


class LeakwiseError(Exception):
    """Base class for all package-specific errors."""


class DomainError(LeakwiseError, ValueError):
    """A parameter lies outside the supported range."""


class ResourceBudgetError(LeakwiseError):
    """A tabulation or enumeration would exceed its size budget."""


class SingularCovarianceError(LeakwiseError):
    """Covariance matrix is (numerically) singular; no finite entropy."""


class DegenerateScenarioError(LeakwiseError):
    """Scenario has no finite answer (e.g. continuous inputs, no spectators)."""


class UnboundedSearchError(LeakwiseError):
    """The spectator-count search exhausted its upper bound."""
