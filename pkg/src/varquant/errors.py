"""Exception types shared across the toolkit."""


class VarquantError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(VarquantError):
    """A value failed one of its declared construction invariants."""


class DomainError(VarquantError):
    """Two objects that must share a variable space do not."""


class AccessibilityError(VarquantError):
    """An operation restricted to accessible variables got an inaccessible one."""


class GroupAxiomError(VarquantError):
    """A group-valued argument fails the group axioms."""


class GroupMembershipError(VarquantError):
    """A transformation is not an element of the group it was claimed from."""


class CategoryError(VarquantError):
    """Two value ranges that must have equal cardinality do not."""


class PostulateViolation(VarquantError):
    """A structural precondition (transitivity, free action, invariance) fails."""


class SeedError(VarquantError):
    """A coherent-family seed is not an injective function on the base space."""


class EmbeddingError(VarquantError):
    """A numeric embedding is not injective or does not cover the value set."""


class RelationError(VarquantError):
    """A claimed relation between variables is not confirmed by the matrices."""


class DimensionError(VarquantError):
    """Matrix or vector dimensions do not match."""


class BasisError(VarquantError):
    """A family of vectors is not the orthonormal basis an operation requires."""


class ModelError(VarquantError):
    """A probability model or measurement model is internally inconsistent."""


class DegenerateEffectError(VarquantError):
    """An effect is numerically zero where a nonzero one is required."""


class CompletenessError(VarquantError):
    """An effect collection is not informationally complete for its dimension."""


class SpectrumError(VarquantError):
    """Observables that must share an outcome set have different spectra."""


class SetupError(VarquantError):
    """A correlation-experiment setup violates its invariants."""


class ReproducibilityError(VarquantError):
    """The marginal-agreement hypothesis of the intersubjectivity check fails."""


class ScenarioError(VarquantError):
    """A scenario document could not be loaded; carries path-qualified issues."""

    def __init__(self, issues, source: str = ""):
        self.issues = list(issues)
        self.source = source
        lines = "; ".join(f"{path}: {message}" for path, message in self.issues)
        prefix = f"{source}: " if source else ""
        super().__init__(prefix + (lines or "invalid scenario document"))
