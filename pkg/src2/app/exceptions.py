"""
Error hierarchy for the SPM bandit simulator.

Every error carries a human-readable message plus a `details` dict with the
values that triggered it, so the CLI (and tests) can report exactly which
input was rejected without parsing message strings.

    SpmError
    ├── SolverError
    │   ├── NonConvergence      - lambda search or coordinate inversion ran out of iterations
    │   ├── InvalidPotential    - alpha outside (0,1) or nonpositive beta / gamma
    │   └── OutOfRange          - target outside the range of a potential derivative
    ├── LearnerError
    │   ├── DegeneratePenalty   - penalty h too small for a learning-rate update
    │   ├── InactiveArmChosen   - sleeping learner asked to observe an inactive arm
    │   └── LossOutOfRange      - observed loss outside the learner's declared range
    ├── ReplaceOnEmpty          - reservoir replace requested before any fill
    ├── InvalidRegime           - environment parameters outside their valid regime
    ├── MissingCapture          - round logs lack the fields a lemma check needs
    └── ConfigError             - experiment configuration rejected (exit code 2)
        └── IncompatibleLossRange
"""
from typing import Any


class SpmError(Exception):
    """Base class for every error raised by this package."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def get_error_summary(self) -> str:
        """Return the message followed by the offending values."""
        if not self.details:
            return self.message
        parts = [f"{key}={value!r}" for key, value in self.details.items()]
        return f"{self.message} ({', '.join(parts)})"


# =============================================================================
# Solver
# =============================================================================
class SolverError(SpmError):
    """Raised by the simplex solver."""


class NonConvergence(SolverError):
    """Iteration budget exhausted before the tolerance was met."""


class InvalidPotential(SolverError):
    """Potential parameters outside their valid domain."""


class OutOfRange(SolverError):
    """Target value is not attained by the potential derivative on (0, 1)."""


# =============================================================================
# Learners
# =============================================================================
class LearnerError(SpmError):
    """Raised by a learner while stepping a round."""


class DegeneratePenalty(LearnerError):
    """Penalty term too close to zero for the SPM update."""


class InactiveArmChosen(LearnerError):
    """The observed arm is not in the round's active set."""


class LossOutOfRange(LearnerError):
    """Observed loss is outside the learner's declared loss range."""


# =============================================================================
# Reservoir / environments / oracles
# =============================================================================
class ReplaceOnEmpty(SpmError):
    """Replace phase requested on an empty reservoir."""


class InvalidRegime(SpmError):
    """Environment parameters violate the construction's preconditions."""


class MissingCapture(SpmError):
    """Round logs were recorded without the fields a check needs."""


# =============================================================================
# Harness
# =============================================================================
class ConfigError(SpmError):
    """Experiment configuration could not be accepted."""


class IncompatibleLossRange(ConfigError):
    """Environment emits losses outside the learner's accepted range."""
