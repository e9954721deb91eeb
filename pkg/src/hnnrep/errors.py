"""Shared exception types."""


class VerificationError(RuntimeError):
    """An exact identity that a construction guarantees failed to hold."""


class OracleError(VerificationError):
    """A conjugator oracle violated its contract on sampled inputs."""


class DimensionBoundError(VerificationError):
    """Orbit closure exceeded the proven dimension bound."""
