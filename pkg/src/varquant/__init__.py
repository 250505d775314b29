"""Finite-dimensional toolkit for variable families, group actions and
the quantum structures they generate.

Variables are function tables on a finite base space; groups act on that
space by permutations. From these the package builds weighted function
spaces, unitary representations, diagonal operators, transition
probabilities, effect families, pointer-measurement models, correlation
setups and context graphs, and re-verifies the promised properties of
each construction numerically. Scenario documents bundle concrete
instances with named checks; the command line runs them.
"""

from .checks import CHECK_REGISTRY, EXPERIMENT_CHECKS, run_checks
from .errors import (
    AccessibilityError,
    BasisError,
    CategoryError,
    CompletenessError,
    DegenerateEffectError,
    DimensionError,
    DomainError,
    EmbeddingError,
    GroupAxiomError,
    GroupMembershipError,
    InvariantViolation,
    ModelError,
    PostulateViolation,
    RelationError,
    ReproducibilityError,
    ScenarioError,
    SeedError,
    SetupError,
    SpectrumError,
    VarquantError,
)
from .experiments import (
    CHSHSetup,
    ContextGraph,
    MeasurementScenario,
    check_reproducibility,
    chsh_value,
    classical_chsh_bound,
    decision_context,
    deterministic_strategy_values,
    embed_factor,
    intersubjectivity_joint,
    singlet_setup,
    singlet_state,
    spin_setting,
    tsirelson_bound,
    validate_context,
)
from .groups import (
    GroupAction,
    InvariantMeasure,
    Permutation,
    invariant_measure,
    is_invariant,
    measure_freedom,
    verify_group,
)
from .hilbert import (
    FunctionSpace,
    LemmaReport,
    RegularRepresentation,
    build_representation,
    coherent_family,
    permutation_matrix,
    verify_lemmas,
)
from .operators import (
    HermitianOperator,
    NumericEmbedding,
    build_operator,
    commutator,
    commutator_check,
    conjugate_by_relation,
    conjugate_operator,
    fourier_basis,
    maximality_spectral_check,
    operator_from_basis,
    permutation_unitary,
    relation_from_conjugation,
    spectral_decomposition,
)
from .probability import (
    CoherenceFit,
    DensityOperator,
    Effect,
    LikelihoodModel,
    StateVector,
    born_conditional,
    born_matrix,
    coherence_fit,
    compose_independent,
    effect_family,
    evidence_equivalent,
    expectation,
    likelihood_effect,
    traceless_hermitian_basis,
)
from .relatedness import (
    RelatednessResult,
    RelationStatus,
    check_relation,
    find_relation,
    relation_witnesses,
)
from .scenario import (
    CheckResult,
    Report,
    Scenario,
    list_corpus,
    load_corpus_scenario,
    load_scenario,
    parse_report,
    parse_scenario,
    serialize_report,
    serialize_scenario,
    validate_document,
)
from .variables import (
    TheoreticalVariable,
    VariableFamily,
    VariableSpace,
    has_maximal_cover,
    induce_on_range,
    is_bijective_correspondence,
    is_function_of,
    is_maximal,
    maximal_members,
)

__version__ = "1.0.0"

__all__ = [name for name in dir() if not name.startswith("_")]
