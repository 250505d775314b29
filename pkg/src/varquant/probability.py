"""States, transition probabilities, effects and state reconstruction.

Probabilities come from the squared overlap of eigenstates of two
nondegenerate operators, or more generally from the trace rule against a
density operator. Likelihood kernels over outcome values induce effect
operators, and an informationally complete family of effects lets a
state be fitted back from its outcome probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BasisError,
    CompletenessError,
    DegenerateEffectError,
    DimensionError,
    InvariantViolation,
)
from .operators import HermitianOperator

NORM_ATOL = 1e-10
PSD_ATOL = 1e-8


@dataclass(frozen=True, eq=False)
class StateVector:
    """A unit vector in a finite-dimensional complex space."""

    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        object.__setattr__(self, "amplitudes", amp)
        if amp.ndim != 1:
            raise DimensionError("state amplitudes must form a vector")
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > NORM_ATOL:
            raise InvariantViolation(f"state is not normalized, norm {norm}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def density(self) -> "DensityOperator":
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A positive semidefinite Hermitian matrix of unit trace."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > NORM_ATOL:
            raise InvariantViolation("density matrix is not Hermitian")
        if abs(np.trace(m).real - 1.0) > NORM_ATOL:
            raise InvariantViolation(f"density matrix trace is {np.trace(m).real}")
        min_eig = float(np.linalg.eigvalsh(m)[0])
        if min_eig < -PSD_ATOL:
            raise InvariantViolation(f"density matrix has eigenvalue {min_eig}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, state: StateVector) -> "DensityOperator":
        return state.density()

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)


def expectation(rho: DensityOperator, op: HermitianOperator) -> float:
    """Trace rule value of an operator in a state."""
    if rho.dim != op.dim:
        raise DimensionError("state and operator dimensions differ")
    return float(np.trace(rho.matrix @ op.matrix).real)


def _require_maximal(op: HermitianOperator) -> None:
    if any(m != 1 for m in op.multiplicities):
        raise BasisError(
            "operator has a degenerate eigenvalue, no transition matrix exists"
        )


def born_matrix(op_a: HermitianOperator, op_b: HermitianOperator) -> np.ndarray:
    """Transition probabilities between the eigenstates of two operators.

    Entry (k, j) is the probability of the j-th outcome of the second
    operator when the state is the k-th eigenstate of the first, indexed
    in each operator's stored eigenvalue order. Rows and columns both sum
    to one because the two eigenbases are orthonormal.
    """
    _require_maximal(op_a)
    _require_maximal(op_b)
    if op_a.dim != op_b.dim:
        raise DimensionError("operators act on different dimensions")
    out = np.empty((op_a.dim, op_b.dim), dtype=float)
    for k, p in enumerate(op_a.projectors):
        for j, q in enumerate(op_b.projectors):
            out[k, j] = float(np.trace(p @ q).real)
    return out


def born_conditional(op_a: HermitianOperator, value_a: float,
                     op_b: HermitianOperator, value_b: float) -> float:
    """Probability of one outcome of the second operator given an eigenstate
    of the first, both identified by eigenvalue."""
    _require_maximal(op_a)
    _require_maximal(op_b)
    if op_a.dim != op_b.dim:
        raise DimensionError("operators act on different dimensions")
    p = op_a.projector_for(value_a)
    q = op_b.projector_for(value_b)
    return float(np.trace(p @ q).real)


@dataclass(frozen=True, eq=False)
class Effect:
    """A Hermitian matrix with spectrum inside [0, 1]."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError("effect matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > NORM_ATOL:
            raise InvariantViolation("effect matrix is not Hermitian")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] < -PSD_ATOL or eigs[-1] > 1.0 + PSD_ATOL:
            raise InvariantViolation(
                f"effect spectrum [{eigs[0]:.3e}, {eigs[-1]:.3e}] leaves [0, 1]"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def probability(self, rho: DensityOperator) -> float:
        if rho.dim != self.dim:
            raise DimensionError("state and effect dimensions differ")
        return float(np.trace(rho.matrix @ self.matrix).real)


@dataclass(frozen=True)
class LikelihoodModel:
    """Conditional outcome distributions over the eigenvalues of an operator.

    ``kernel[z][j]`` is the probability of observing z when the underlying
    value is the j-th eigenvalue; each column over z must sum to one.
    """

    outcomes: tuple[str, ...]
    kernel: dict = field(repr=False)

    def __post_init__(self):
        widths = {len(self.kernel[z]) for z in self.outcomes}
        if len(widths) != 1:
            raise InvariantViolation("kernel rows have inconsistent lengths")
        (width,) = widths
        for j in range(width):
            col = sum(self.kernel[z][j] for z in self.outcomes)
            if abs(col - 1.0) > NORM_ATOL:
                raise InvariantViolation(
                    f"kernel column {j} sums to {col}, expected 1"
                )
        for z in self.outcomes:
            if any(p < 0 for p in self.kernel[z]):
                raise InvariantViolation(f"kernel row {z!r} has negative entries")

    @property
    def width(self) -> int:
        return len(self.kernel[self.outcomes[0]])


def likelihood_effect(model: LikelihoodModel, outcome: str,
                      op: HermitianOperator) -> Effect:
    """Effect of one outcome: likelihoods weighting the eigenprojectors."""
    if outcome not in model.outcomes:
        raise InvariantViolation(f"unknown outcome {outcome!r}")
    if model.width != len(op.eigenvalues):
        raise DimensionError("kernel width does not match the operator's spectrum")
    mat = np.zeros_like(op.matrix)
    for j, p in enumerate(op.projectors):
        mat = mat + model.kernel[outcome][j] * p
    return Effect(mat, label=outcome)


def effect_family(model: LikelihoodModel, op: HermitianOperator) -> dict:
    """All outcome effects; they sum to the identity by kernel normalization."""
    return {z: likelihood_effect(model, z, op) for z in model.outcomes}


def evidence_equivalent(f1: Effect, f2: Effect, atol: float = 1e-9) -> bool:
    """Whether two effects carry the same evidence (positive multiples).

    Zero effects carry no evidence and are rejected.
    """
    if f1.dim != f2.dim:
        raise DimensionError("effects act on different dimensions")
    n1 = float(np.linalg.norm(f1.matrix))
    n2 = float(np.linalg.norm(f2.matrix))
    if n1 <= atol or n2 <= atol:
        raise DegenerateEffectError("zero effect has no evidence class")
    scale = float(np.trace(f2.matrix.conj().T @ f1.matrix).real) / (n2 * n2)
    if scale <= 0:
        return False
    return float(np.max(np.abs(f1.matrix - scale * f2.matrix))) <= atol


def traceless_hermitian_basis(dim: int) -> tuple[np.ndarray, ...]:
    """Orthonormal Hermitian basis of the traceless matrices (generalized
    Pauli construction: symmetric, antisymmetric and diagonal families)."""
    out = []
    for j in range(dim):
        for k in range(j + 1, dim):
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = m[k, j] = 1 / np.sqrt(2)
            out.append(m)
            m = np.zeros((dim, dim), dtype=complex)
            m[j, k] = -1j / np.sqrt(2)
            m[k, j] = 1j / np.sqrt(2)
            out.append(m)
    for r in range(1, dim):
        diag = np.zeros(dim)
        diag[:r] = 1.0
        diag[r] = -r
        diag = diag / np.linalg.norm(diag)
        out.append(np.diag(diag).astype(complex))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class CoherenceFit:
    """Result of fitting a state to observed effect probabilities."""

    matrix: np.ndarray
    residual: float
    min_eigenvalue: float
    coherent: bool
    state: DensityOperator | None


def coherence_fit(effects, probabilities, dim: int,
                  residual_tol: float = 1e-6,
                  psd_tol: float = 1e-8) -> CoherenceFit:
    """Fit the unique state reproducing the given effect probabilities.

    The state is expanded around the maximally mixed one in a traceless
    orthonormal Hermitian basis and the coefficients solved by least
    squares. The effect family must be informationally complete (span
    all Hermitian matrices); the data are declared coherent when the fit
    reproduces them and the fitted matrix is positive semidefinite.
    """
    effects = list(effects)
    probabilities = [float(p) for p in probabilities]
    if len(effects) != len(probabilities):
        raise InvariantViolation("one probability per effect required")
    for f in effects:
        if f.dim != dim:
            raise DimensionError("effect dimension does not match the fit dimension")

    basis = traceless_hermitian_basis(dim)
    full = (np.eye(dim, dtype=complex) / np.sqrt(dim),) + basis
    design_full = np.array(
        [[np.trace(f.matrix @ g).real for g in full] for f in effects]
    )
    if np.linalg.matrix_rank(design_full, tol=1e-9) < dim * dim:
        raise CompletenessError(
            f"effects span rank {np.linalg.matrix_rank(design_full, tol=1e-9)} "
            f"of {dim * dim}, state is not determined"
        )

    design = np.array(
        [[np.trace(f.matrix @ b).real for b in basis] for f in effects]
    )
    target = np.array(
        [p - np.trace(f.matrix).real / dim for f, p in zip(effects, probabilities)]
    )
    x, *_ = np.linalg.lstsq(design, target, rcond=None)

    matrix = np.eye(dim, dtype=complex) / dim
    for coef, b in zip(x, basis):
        matrix = matrix + coef * b
    fitted = np.array([np.trace(f.matrix @ matrix).real for f in effects])
    residual = float(np.max(np.abs(fitted - np.array(probabilities))))
    min_eig = float(np.linalg.eigvalsh(matrix)[0])
    coherent = residual <= residual_tol and min_eig >= -psd_tol
    state = DensityOperator(matrix) if coherent else None
    return CoherenceFit(matrix, residual, min_eig, coherent, state)


def compose_independent(s1: StateVector, s2: StateVector) -> StateVector:
    """Joint state of two independent systems (tensor product).

    Joint amplitudes multiply, so joint probabilities multiply too.
    """
    label = f"{s1.label}*{s2.label}" if s1.label and s2.label else ""
    return StateVector(np.kron(s1.amplitudes, s2.amplitudes), label)
