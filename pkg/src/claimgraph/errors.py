"""Exception hierarchy shared across the package."""


class ClaimGraphError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ClaimGraphError):
    """Invalid configuration, policy, or world specification."""


class EmptyGraph(ClaimGraphError):
    """Operation requires at least one edge but the graph has none."""


class ConvergenceFailure(ClaimGraphError):
    """Iterative solver exceeded its iteration budget before converging."""


class NetworkError(ClaimGraphError):
    """Transport-level failure that survived all retries."""


class BackendError(ClaimGraphError):
    """Backend returned a non-success status or an unusable payload."""


class ScenarioMiss(ClaimGraphError):
    """Scripted backend has no entry for the issued request."""


class EmptyCompletion(ClaimGraphError):
    """Backend produced no text for a request."""


class DecompositionEmpty(ClaimGraphError):
    """Claim decomposition yielded zero well-formed lines for a non-empty response."""


class MismatchedClaims(ClaimGraphError):
    """Two score lists cover different claim-id sets."""


class NoFalseClaims(ClaimGraphError):
    """Percentile calibration requires at least one False-labeled claim."""


class DegenerateLabels(ClaimGraphError):
    """Discrimination metric requires both label classes to be present."""


class UnlabeledClaim(ClaimGraphError):
    """A claim required a ground-truth label but none was provided."""
