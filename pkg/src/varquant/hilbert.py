"""Group actions turned into unitary matrices on a finite function space.

Complex functions on a finite space form a Hilbert space once a strictly
positive weight vector fixes the inner product. A permutation action
lifts to the function space by moving points, ``(U(g) f)(x) = f(g^-1 x)``,
which sends basis vectors to basis vectors. The verification routine
re-proves the expected properties (norm preservation, homomorphism,
unitarity, faithfulness) numerically on the stored element table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, PostulateViolation, SeedError
from .groups import GroupAction, InvariantMeasure, Permutation, invariant_measure
from .variables import VariableSpace


@dataclass(frozen=True)
class FunctionSpace:
    """Complex functions on a finite space with a weighted inner product.

    ``inner(f, g) = sum_x w(x) * conj(f(x)) * g(x)`` with all weights
    strictly positive, so the norm is a genuine norm.
    """

    space: VariableSpace
    measure: InvariantMeasure

    def __post_init__(self):
        if self.measure.space != self.space:
            raise InvariantViolation("measure must live on the function space's base")

    @property
    def dim(self) -> int:
        return self.space.size

    @property
    def weight_vector(self) -> np.ndarray:
        return np.array(self.measure.as_floats(), dtype=float)

    def basis_vector(self, point: str) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        vec[self.space.index(point)] = 1.0
        return vec

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        return complex(np.sum(self.weight_vector * np.conj(f) * g))

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(self.inner(f, f).real))


@dataclass(frozen=True)
class RegularRepresentation:
    """A group action realized as permutation matrices on a function space.

    ``matrices[i]`` represents ``action.elements[i]``; columns are indexed
    by source points, so ``U(g)[g(j), j] = 1``.
    """

    action: GroupAction
    function_space: FunctionSpace
    matrices: tuple[np.ndarray, ...]

    def matrix(self, g: Permutation) -> np.ndarray:
        for h, mat in zip(self.action.elements, self.matrices):
            if h.images == g.images:
                return mat
        raise InvariantViolation(f"{g} is not represented")

    @property
    def dim(self) -> int:
        return self.function_space.dim


def permutation_matrix(g: Permutation) -> np.ndarray:
    mat = np.zeros((g.degree, g.degree), dtype=complex)
    for j in range(g.degree):
        mat[g(j), j] = 1.0
    return mat


def build_representation(action: GroupAction,
                         measure: InvariantMeasure | None = None,
                         require_transitive: bool = True) -> RegularRepresentation:
    """Lift a permutation action to unitary matrices on its function space.

    Transitivity is required by default: without it the invariant measure
    is not unique up to scale and the state space decomposes.
    """
    if require_transitive and not action.is_transitive():
        raise PostulateViolation(
            f"action on {action.space.id!r} has {len(action.orbits())} orbits, "
            "expected a single one"
        )
    if measure is None:
        measure = invariant_measure(action)
    fspace = FunctionSpace(action.space, measure)
    mats = tuple(permutation_matrix(g) for g in action.elements)
    return RegularRepresentation(action, fspace, mats)


@dataclass(frozen=True)
class LemmaReport:
    """Outcome of the four representation checks, with worst-case errors."""

    norm_preserving: bool
    norm_error: float
    homomorphism: bool
    homomorphism_error: float
    unitary: bool
    unitarity_error: float
    faithful: bool
    identity_exact: bool

    @property
    def all_passed(self) -> bool:
        return (self.norm_preserving and self.homomorphism
                and self.unitary and self.faithful and self.identity_exact)

    def as_dict(self) -> dict:
        return {
            "norm_preserving": self.norm_preserving,
            "norm_error": self.norm_error,
            "homomorphism": self.homomorphism,
            "homomorphism_error": self.homomorphism_error,
            "unitary": self.unitary,
            "unitarity_error": self.unitarity_error,
            "faithful": self.faithful,
            "identity_exact": self.identity_exact,
            "all_passed": self.all_passed,
        }


def verify_lemmas(rep: RegularRepresentation, tol: float = 1e-12,
                  seed: int = 0, samples: int = 8) -> LemmaReport:
    """Numerically re-check what the construction promises.

    Norm preservation is probed on pseudo-random complex vectors, the
    homomorphism property on every pair of elements, unitarity against
    the weighted inner product matrix, and faithfulness by pairwise
    distinctness of the matrices.
    """
    rng = np.random.default_rng(seed)
    fspace = rep.function_space
    weights = fspace.weight_vector
    gram = np.diag(weights).astype(complex)

    norm_err = 0.0
    vectors = [rng.normal(size=fspace.dim) + 1j * rng.normal(size=fspace.dim)
               for _ in range(samples)]
    for mat in rep.matrices:
        for f in vectors:
            norm_err = max(norm_err, abs(fspace.norm(mat @ f) - fspace.norm(f)))

    elems = rep.action.elements
    index = {g.images: i for i, g in enumerate(elems)}
    hom_err = 0.0
    for i, g in enumerate(elems):
        for j, h in enumerate(elems):
            prod = rep.matrices[i] @ rep.matrices[j]
            expected = rep.matrices[index[(g * h).images]]
            hom_err = max(hom_err, float(np.linalg.norm(prod - expected)))

    unit_err = 0.0
    for mat in rep.matrices:
        unit_err = max(unit_err, float(np.linalg.norm(mat.conj().T @ gram @ mat - gram)))

    faithful = len({mat.tobytes() for mat in rep.matrices}) == len(rep.matrices)

    identity_mat = rep.matrix(rep.action.identity)
    identity_exact = bool(np.array_equal(identity_mat, np.eye(rep.dim, dtype=complex)))

    return LemmaReport(
        norm_preserving=norm_err <= tol,
        norm_error=norm_err,
        homomorphism=hom_err <= tol,
        homomorphism_error=hom_err,
        unitary=unit_err <= tol,
        unitarity_error=unit_err,
        faithful=faithful,
        identity_exact=identity_exact,
    )


def coherent_family(rep: RegularRepresentation, seed_vector: np.ndarray) -> tuple[np.ndarray, ...]:
    """The orbit of a seed vector under every represented element.

    The family must be injective (distinct elements give distinct
    vectors), which holds exactly when no non-identity element fixes the
    seed. A seed with pairwise distinct entries always works.
    """
    seed_vector = np.asarray(seed_vector, dtype=complex)
    if seed_vector.shape != (rep.dim,):
        raise SeedError(f"seed must have shape ({rep.dim},)")
    family = tuple(mat @ seed_vector for mat in rep.matrices)
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if np.array_equal(family[i], family[j]):
                raise SeedError(
                    f"seed does not separate elements {rep.action.elements[i]} "
                    f"and {rep.action.elements[j]}"
                )
    return family
