"""Exception and warning types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for all errors raised by this package."""


class RoleError(PipelineError):
    """A role (id/time/group) names a missing or unusable column."""


class DuplicateKeyError(PipelineError):
    """Duplicate (id, time) pairs in a table that requires unique keys."""


class SchemaError(PipelineError):
    """A table does not match the expected column schema."""


class EmptyJoinError(PipelineError):
    """A metadata join matched zero variables."""


class GapError(PipelineError):
    """A monthly series has a gap where a contiguous sequence is required."""


class DomainError(PipelineError):
    """Input values fall outside the mathematical domain of an operation."""


class ConstantColumnError(PipelineError):
    """A scaling or weighting step hit a column with zero dispersion."""


class MappingError(PipelineError):
    """A spatial mapping does not cover every observed id."""


class InsufficientSampleError(PipelineError):
    """Too few observations for the requested statistic. Carries ``n``."""

    def __init__(self, message: str, n: int):
        super().__init__(message)
        self.n = n


class FitInfeasibleError(PipelineError):
    """Sample L-moments lie outside the feasible region of a family."""


class SchemeError(PipelineError):
    """A simplification scheme is malformed (cut/label mismatch, ordering)."""


class FormulaError(PipelineError):
    """Formula text violates the grammar. Carries ``position``."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class WeightError(PipelineError):
    """A weight scheme cannot be resolved or is invalid."""


class ConfigError(PipelineError):
    """A pipeline configuration failed validation."""


class ReplayError(PipelineError):
    """A step log cannot be replayed (unknown or unregistered operation)."""


class PipelineWarning(UserWarning):
    """Base class for warnings emitted by pipeline steps."""


class UnmatchedVariableWarning(PipelineWarning):
    """Metadata rows name variables absent from the table."""


class EmptyWindowWarning(PipelineWarning):
    """A rolling window is longer than an entity's series."""


class SkippedCellWarning(PipelineWarning):
    """A fit cell was skipped (too few points or infeasible point fit)."""


class DroppedReplicateWarning(PipelineWarning):
    """Bootstrap replicates were dropped due to infeasible fits."""


class ComboFailedWarning(PipelineWarning):
    """One parameter combination of a recipe failed; others proceeded."""


class WeightNormalizationWarning(PipelineWarning):
    """Weights did not sum to one and were auto-normalized."""


class MissingValueWarning(PipelineWarning):
    """Null contributors nullified aggregated rows."""
