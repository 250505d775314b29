"""Hermitian operators built from variables, with exact spectral data.

A variable with numerically embedded values becomes a diagonal operator
on the function space of its domain. Eigenvalues and projectors are
written down analytically (the eigenbasis is the point basis), so the
spectrum equals the embedded value set and multiplicities equal preimage
sizes, with no numerical diagonalization involved. Operators with a
different eigenbasis are constructed from an explicit orthonormal basis
instead. Numerical diagonalization appears only when decomposing raw
matrices loaded from scenario files.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionError,
    EmbeddingError,
    InvariantViolation,
    RelationError,
)
from .groups import GroupAction, Permutation
from .variables import TheoreticalVariable

REL_GAP = 1e-7
ATOL = 1e-10


@dataclass(frozen=True)
class NumericEmbedding:
    """An injective assignment of real numbers to value labels."""

    mapping: dict

    def __post_init__(self):
        values = [float(v) for v in self.mapping.values()]
        if len(set(values)) != len(values):
            raise EmbeddingError("embedding must be injective on its labels")

    def __call__(self, label: str) -> float:
        try:
            return float(self.mapping[label])
        except KeyError:
            raise EmbeddingError(f"no number assigned to value {label!r}") from None

    @classmethod
    def enumerate(cls, labels) -> "NumericEmbedding":
        """Embed labels as 0, 1, 2, ... in the given order."""
        return cls({lab: float(i) for i, lab in enumerate(labels)})


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """A Hermitian matrix together with its spectral decomposition.

    ``eigenvalues[j]`` goes with ``projectors[j]``; eigenvalues are
    pairwise distinct and the projectors resolve the identity. The
    decomposition is validated at construction.
    """

    matrix: np.ndarray
    eigenvalues: tuple[float, ...]
    projectors: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        a = self.matrix
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"operator matrix must be square, got {a.shape}")
        if np.max(np.abs(a - a.conj().T)) > ATOL:
            raise InvariantViolation("matrix is not Hermitian")
        if len(self.eigenvalues) != len(self.projectors):
            raise InvariantViolation("one projector per eigenvalue required")
        if len(set(self.eigenvalues)) != len(self.eigenvalues):
            raise InvariantViolation("eigenvalues must be pairwise distinct")
        total = np.zeros_like(a)
        recon = np.zeros_like(a)
        for v, p in zip(self.eigenvalues, self.projectors):
            if p.shape != a.shape:
                raise DimensionError("projector shape does not match the operator")
            if np.max(np.abs(p - p.conj().T)) > ATOL:
                raise InvariantViolation("projector is not Hermitian")
            if np.max(np.abs(p @ p - p)) > ATOL:
                raise InvariantViolation("projector is not idempotent")
            total = total + p
            recon = recon + v * p
        if np.max(np.abs(total - np.eye(a.shape[0]))) > ATOL:
            raise InvariantViolation("projectors do not resolve the identity")
        if np.max(np.abs(recon - a)) > ATOL:
            raise InvariantViolation("spectral decomposition does not rebuild the matrix")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    def spectrum(self) -> tuple[float, ...]:
        """Eigenvalues sorted ascending, one entry per distinct value."""
        return tuple(sorted(self.eigenvalues))

    def projector_for(self, value: float, atol: float = ATOL) -> np.ndarray:
        for v, p in zip(self.eigenvalues, self.projectors):
            if abs(v - value) <= atol:
                return p
        raise InvariantViolation(f"{value} is not an eigenvalue")


def build_operator(variable: TheoreticalVariable,
                   embedding: NumericEmbedding) -> HermitianOperator:
    """Diagonal operator of a variable in the point basis of its domain.

    Each distinct value contributes one eigenvalue (its embedded number)
    and one projector onto the preimage points. Everything is exact.
    """
    n = variable.domain.size
    diag = np.array([embedding(v) for v in variable.values], dtype=float)
    matrix = np.diag(diag).astype(complex)
    eigenvalues = []
    projectors = []
    for value in variable.value_set:
        eigenvalues.append(embedding(value))
        p = np.zeros((n, n), dtype=complex)
        for i in variable.preimages()[value]:
            p[i, i] = 1.0
        projectors.append(p)
    return HermitianOperator(matrix, tuple(eigenvalues), tuple(projectors))


def operator_from_basis(eigenvalues, basis: np.ndarray,
                        atol: float = 1e-12) -> HermitianOperator:
    """Operator with the given eigenvalues on the columns of a unitary basis."""
    basis = np.asarray(basis, dtype=complex)
    n = basis.shape[0]
    if basis.shape != (n, n):
        raise DimensionError("basis must be a square matrix of column vectors")
    if np.max(np.abs(basis.conj().T @ basis - np.eye(n))) > atol:
        raise InvariantViolation("basis columns are not orthonormal")
    values = tuple(float(v) for v in eigenvalues)
    if len(values) != n:
        raise DimensionError("one eigenvalue per basis column required")
    if len(set(values)) != len(values):
        raise InvariantViolation("eigenvalues must be pairwise distinct")
    matrix = basis @ np.diag(values) @ basis.conj().T
    matrix = (matrix + matrix.conj().T) / 2
    projectors = tuple(np.outer(basis[:, j], basis[:, j].conj()) for j in range(n))
    return HermitianOperator(matrix, values, projectors)


def fourier_basis(d: int) -> np.ndarray:
    """Unitary discrete Fourier basis, columns indexed by frequency."""
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * j * k / d) / np.sqrt(d)


def _fix_phases(basis: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    # first nonzero component of each column made real positive
    fixed = basis.copy()
    for j in range(basis.shape[1]):
        col = fixed[:, j]
        for x in col:
            if abs(x) > atol:
                fixed[:, j] = col * (abs(x) / x)
                break
    return fixed


def spectral_decomposition(matrix: np.ndarray,
                           rel_gap: float = REL_GAP) -> HermitianOperator:
    """Decompose a raw Hermitian matrix, clustering nearly equal eigenvalues.

    Eigenvalues closer than ``rel_gap`` times the spectral range are
    merged into one eigenspace. Used for matrices loaded from files; the
    constructors above never need it.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if np.max(np.abs(matrix - matrix.conj().T)) > ATOL:
        raise InvariantViolation("matrix is not Hermitian")
    vals, vecs = np.linalg.eigh(matrix)
    vecs = _fix_phases(vecs)
    spread = float(vals[-1] - vals[0])
    gap = rel_gap * spread if spread > 0 else rel_gap
    clusters: list[list[int]] = [[0]]
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] <= gap:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    eigenvalues = []
    projectors = []
    for cluster in clusters:
        eigenvalues.append(float(np.mean(vals[cluster])))
        block = vecs[:, cluster]
        projectors.append(block @ block.conj().T)
    recon = sum(v * p for v, p in zip(eigenvalues, projectors))
    return HermitianOperator(np.asarray(recon), tuple(eigenvalues), tuple(projectors))


def maximality_spectral_check(op: HermitianOperator,
                              rel_gap: float = REL_GAP) -> bool:
    """Nondegeneracy test: every eigenvalue gap exceeds the relative cutoff.

    A variable is maximal exactly when its operator has a simple spectrum,
    so this is the operator-side criterion.
    """
    if op.dim == 1:
        return True
    if len(op.eigenvalues) < op.dim:
        return False
    vals = sorted(op.eigenvalues)
    spread = vals[-1] - vals[0]
    if spread == 0:
        return False
    return all(vals[i + 1] - vals[i] > rel_gap * spread for i in range(len(vals) - 1))


def permutation_unitary(k: Permutation) -> np.ndarray:
    """The unitary moving basis vector j to basis vector k(j)."""
    mat = np.zeros((k.degree, k.degree), dtype=complex)
    for j in range(k.degree):
        mat[k(j), j] = 1.0
    return mat


def conjugate_operator(op: HermitianOperator, k: Permutation) -> HermitianOperator:
    """Exact conjugation ``S(k)^dag A S(k)`` by index permutation.

    Entry (i, j) of the result is entry (k(i), k(j)) of the input, and
    projectors are conjugated the same way, so the spectrum is unchanged.
    """
    if k.degree != op.dim:
        raise DimensionError("permutation degree does not match operator dimension")
    idx = np.array(k.images)
    matrix = op.matrix[np.ix_(idx, idx)]
    projectors = tuple(p[np.ix_(idx, idx)] for p in op.projectors)
    return HermitianOperator(matrix, op.eigenvalues, projectors)


def conjugate_by_relation(op_theta: HermitianOperator, op_eta: HermitianOperator,
                          k: Permutation, atol: float = 1e-12) -> dict:
    """Verify that conjugating by k carries one operator onto the other.

    Checks matrix equality, spectrum equality and eigenspace matching,
    raising on any failure. Returns the error figures found.
    """
    if op_theta.dim != op_eta.dim:
        raise DimensionError("operators act on different dimensions")
    conj = conjugate_operator(op_theta, k)
    matrix_err = float(np.max(np.abs(conj.matrix - op_eta.matrix)))
    if matrix_err > atol:
        raise RelationError(
            f"conjugated matrix differs by {matrix_err:.3e}, beyond {atol:.1e}"
        )
    if sorted(op_theta.eigenvalues) != sorted(op_eta.eigenvalues):
        raise RelationError("operators have different spectra")
    projector_err = 0.0
    for v in op_eta.eigenvalues:
        p_conj = conj.projector_for(v)
        p_eta = op_eta.projector_for(v)
        projector_err = max(projector_err, float(np.max(np.abs(p_conj - p_eta))))
    if projector_err > atol:
        raise RelationError(
            f"conjugated eigenspaces differ by {projector_err:.3e}"
        )
    return {"matrix_error": matrix_err, "projector_error": projector_err}


def relation_from_conjugation(op_theta: HermitianOperator,
                              op_eta: HermitianOperator,
                              action: GroupAction,
                              atol: float = 1e-9) -> Permutation | None:
    """First group element whose conjugation maps one operator to the other.

    Iterates the stored element order, so the result is comparable with
    the witness found by the variable-level relation search.
    """
    if op_theta.dim != action.space.size:
        raise DimensionError("operator dimension does not match the acted space")
    for k in action.elements:
        conj = conjugate_operator(op_theta, k)
        if float(np.max(np.abs(conj.matrix - op_eta.matrix))) <= atol:
            return k
    return None


def commutator(a: HermitianOperator, b: HermitianOperator) -> np.ndarray:
    if a.dim != b.dim:
        raise DimensionError("operators act on different dimensions")
    return a.matrix @ b.matrix - b.matrix @ a.matrix


def commutator_check(a: HermitianOperator, b: HermitianOperator,
                     atol: float = 1e-9) -> dict:
    """Frobenius norm of the commutator and whether it vanishes."""
    norm = float(np.linalg.norm(commutator(a, b)))
    return {"commutes": norm <= atol, "norm": norm}
