"""Composite measurement models, agreement checks and correlation bounds.

Three experiment families live here. Pointer models couple a system to
one or more meters through a unitary and ask whether the meters end up
showing the system's value (and each other's). Context graphs record
which variables are jointly decidable and are checked for forbidden
triples. Two-party correlation setups evaluate the four-term correlation
combination against its classical and quantum ceilings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionError,
    InvariantViolation,
    ModelError,
    ReproducibilityError,
    SetupError,
    SpectrumError,
)
from .operators import HermitianOperator
from .probability import DensityOperator, StateVector

UNITARY_ATOL = 1e-10
DIST_ATOL = 1e-10
JOINT_OFFDIAG_ATOL = 1e-12


def embed_factor(matrix: np.ndarray, dims, which: int) -> np.ndarray:
    """Embed a one-factor operator into the tensor product of all factors."""
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (dims[which], dims[which]):
        raise DimensionError(
            f"operator shape {matrix.shape} does not fit factor {which} of size "
            f"{dims[which]}"
        )
    out = np.eye(1, dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, matrix if i == which else np.eye(d, dtype=complex))
    return out


@dataclass(frozen=True, eq=False)
class MeasurementScenario:
    """A system coupled to meters: initial state, coupling unitary, pointers.

    Factor 0 is the system, factors 1.. are meters. The system observable
    lives on factor 0 and pointer i on factor i + 1. Time evolution is by
    integer powers of the coupling unitary.
    """

    dims: tuple[int, ...]
    initial: StateVector
    unitary: np.ndarray
    system_observable: HermitianOperator
    pointers: tuple[HermitianOperator, ...]

    def __post_init__(self):
        total = int(np.prod(self.dims))
        u = np.asarray(self.unitary, dtype=complex)
        object.__setattr__(self, "unitary", u)
        if len(self.dims) < 2:
            raise ModelError("scenario needs a system and at least one meter")
        if self.initial.dim != total:
            raise DimensionError(
                f"initial state dimension {self.initial.dim} != product {total}"
            )
        if u.shape != (total, total):
            raise DimensionError(f"unitary shape {u.shape} != ({total}, {total})")
        if np.max(np.abs(u.conj().T @ u - np.eye(total))) > UNITARY_ATOL:
            raise ModelError("coupling matrix is not unitary")
        if self.system_observable.dim != self.dims[0]:
            raise DimensionError("system observable does not fit the system factor")
        if len(self.pointers) != len(self.dims) - 1:
            raise ModelError("one pointer observable per meter required")
        for i, p in enumerate(self.pointers):
            if p.dim != self.dims[i + 1]:
                raise DimensionError(f"pointer {i} does not fit meter factor {i}")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def initial_density(self) -> DensityOperator:
        return self.initial.density()

    def propagator(self, t: int) -> np.ndarray:
        if not isinstance(t, (int, np.integer)):
            raise ModelError(f"time must be an integer number of steps, got {t!r}")
        return np.linalg.matrix_power(self.unitary, int(t))

    def system_projector(self, value: float) -> np.ndarray:
        return embed_factor(self.system_observable.projector_for(value), self.dims, 0)

    def pointer_projector(self, i: int, value: float, t: int) -> np.ndarray:
        """Heisenberg-picture eigenprojector of pointer i at integer time t."""
        raw = embed_factor(self.pointers[i].projector_for(value), self.dims, i + 1)
        u_t = self.propagator(t)
        return u_t.conj().T @ raw @ u_t


def check_reproducibility(scenario: MeasurementScenario, t: int = 1,
                          atol: float = DIST_ATOL) -> dict:
    """Compare the system's outcome distribution with every pointer's.

    All pointers must share the system observable's spectrum; the model
    is reproducible when every per-eigenvalue probability agrees within
    ``atol`` across the system and all evolved pointers.
    """
    sys_spec = np.array(scenario.system_observable.spectrum())
    for i, p in enumerate(scenario.pointers):
        if len(p.eigenvalues) != len(sys_spec) or not np.allclose(
                np.array(p.spectrum()), sys_spec, atol=1e-12):
            raise SpectrumError(
                f"pointer {i} spectrum {p.spectrum()} does not match the system's "
                f"{tuple(sys_spec)}"
            )
    rho = scenario.initial_density().matrix
    eigenvalues = list(scenario.system_observable.eigenvalues)
    system_dist = []
    pointer_dists = [[] for _ in scenario.pointers]
    for x in eigenvalues:
        system_dist.append(float(np.trace(rho @ scenario.system_projector(x)).real))
        for i in range(len(scenario.pointers)):
            proj = scenario.pointer_projector(i, x, t)
            pointer_dists[i].append(float(np.trace(rho @ proj).real))
    deviation = 0.0
    for dist in pointer_dists:
        deviation = max(deviation, float(np.max(np.abs(
            np.array(dist) - np.array(system_dist)))))
    return {
        "time": int(t),
        "eigenvalues": eigenvalues,
        "system": system_dist,
        "pointers": pointer_dists,
        "max_deviation": deviation,
        "reproducible": deviation <= atol,
    }


def intersubjectivity_joint(scenario: MeasurementScenario, t: int = 1,
                            atol: float = DIST_ATOL,
                            commute_atol: float = DIST_ATOL) -> dict:
    """Joint outcome distribution of two pointers reading the same system.

    Requires a reproducible two-meter scenario with commuting evolved
    pointer projectors. The returned matrix has entry (x, y) for pointer 1
    showing x and pointer 2 showing y; agreement of the observers shows up
    as vanishing off-diagonal mass.
    """
    if len(scenario.pointers) < 2:
        raise ModelError("joint distribution needs two pointers")
    report = check_reproducibility(scenario, t, atol)
    if not report["reproducible"]:
        raise ReproducibilityError(
            f"pointers deviate from the system by {report['max_deviation']:.3e}"
        )
    eigenvalues = report["eigenvalues"]
    rho = scenario.initial_density().matrix
    n = len(eigenvalues)
    joint = np.zeros((n, n), dtype=float)
    for a, x in enumerate(eigenvalues):
        px = scenario.pointer_projector(0, x, t)
        for b, y in enumerate(eigenvalues):
            py = scenario.pointer_projector(1, y, t)
            comm = float(np.max(np.abs(px @ py - py @ px)))
            if comm > commute_atol:
                raise ModelError(
                    f"pointer projectors for outcomes {x} and {y} do not commute "
                    f"(deviation {comm:.3e}), the joint distribution is undefined"
                )
            joint[a, b] = float(np.trace(rho @ px @ py).real)
    off_diag = float(np.max(np.abs(joint - np.diag(np.diag(joint))))) if n > 1 else 0.0
    return {
        "time": int(t),
        "eigenvalues": eigenvalues,
        "joint": joint,
        "max_off_diagonal": off_diag,
        "agree": off_diag <= JOINT_OFFDIAG_ATOL,
    }


@dataclass(frozen=True)
class ContextGraph:
    """An undirected graph of variables with edges for joint decidability."""

    nodes: tuple[str, ...]
    edges: frozenset

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise InvariantViolation("context nodes must be distinct")
        for e in self.edges:
            if len(e) != 2 or not e <= set(self.nodes):
                raise InvariantViolation(f"edge {set(e)} is not a pair of known nodes")

    @classmethod
    def from_pairs(cls, nodes, pairs) -> "ContextGraph":
        return cls(tuple(nodes), frozenset(frozenset(p) for p in pairs))

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def add_edge(self, a: str, b: str) -> "ContextGraph":
        if a not in self.nodes or b not in self.nodes or a == b:
            raise InvariantViolation(f"cannot join {a!r} and {b!r}")
        return ContextGraph(self.nodes, self.edges | {frozenset((a, b))})


def validate_context(graph: ContextGraph) -> tuple[tuple[str, str, str], ...]:
    """All triples where exactly two of the three pairs are decidable.

    Such a triple is inconsistent: two variables each decidable with a
    third but not with each other cannot sit in one context. A graph with
    no such triple is a disjoint union of fully decidable clusters.
    """
    violations = []
    for a, b, c in itertools.combinations(graph.nodes, 3):
        count = sum((graph.has_edge(a, b), graph.has_edge(a, c), graph.has_edge(b, c)))
        if count == 2:
            violations.append((a, b, c))
    return tuple(violations)


def decision_context(decisions, jointly_decidable) -> dict:
    """Report whether a set of decisions can be made inside one context.

    Takes decision names and the pairs that are jointly decidable, and
    phrases each forbidden triple as a concrete conflict.
    """
    graph = ContextGraph.from_pairs(decisions, jointly_decidable)
    conflicts = []
    for a, b, c in validate_context(graph):
        pairs = [(a, b), (a, c), (b, c)]
        missing = next(p for p in pairs if not graph.has_edge(*p))
        linked = [p for p in pairs if graph.has_edge(*p)]
        conflicts.append({
            "triple": (a, b, c),
            "missing": missing,
            "statement": (
                f"{missing[0]!r} and {missing[1]!r} are each decidable together "
                f"with a third decision ({linked[0][0]!r}/{linked[0][1]!r} and "
                f"{linked[1][0]!r}/{linked[1][1]!r}) but not with each other"
            ),
        })
    return {"consistent": not conflicts, "conflicts": conflicts, "graph": graph}


def _require_involution(name: str, mat: np.ndarray, atol: float) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise SetupError(f"setting {name} must be a square matrix")
    if np.max(np.abs(mat - mat.conj().T)) > atol:
        raise SetupError(f"setting {name} is not Hermitian")
    if np.max(np.abs(mat @ mat - np.eye(mat.shape[0]))) > atol:
        raise SetupError(f"setting {name} does not square to the identity")
    return mat


@dataclass(frozen=True, eq=False)
class CHSHSetup:
    """A bipartite state with two binary settings per side.

    Settings must be Hermitian involutions (outcomes +1 or -1). The state
    lives on the tensor product of the two sides.
    """

    state: DensityOperator
    alice: tuple[np.ndarray, np.ndarray]
    bob: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        alice = tuple(_require_involution(f"A{i + 1}", m, UNITARY_ATOL)
                      for i, m in enumerate(self.alice))
        bob = tuple(_require_involution(f"B{i + 1}", m, UNITARY_ATOL)
                    for i, m in enumerate(self.bob))
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)
        da = alice[0].shape[0]
        db = bob[0].shape[0]
        if alice[1].shape[0] != da or bob[1].shape[0] != db:
            raise SetupError("the two settings of one side must share a dimension")
        if self.state.dim != da * db:
            raise SetupError(
                f"state dimension {self.state.dim} != {da} * {db}"
            )

    def correlation(self, i: int, j: int) -> float:
        """Expected product of outcomes for settings A_i, B_j (1-based)."""
        op = np.kron(self.alice[i - 1], self.bob[j - 1])
        return float(np.trace(self.state.matrix @ op).real)


def chsh_value(setup: CHSHSetup) -> float:
    """The four-term combination E11 + E12 + E21 - E22."""
    return (setup.correlation(1, 1) + setup.correlation(1, 2)
            + setup.correlation(2, 1) - setup.correlation(2, 2))


def deterministic_strategy_values() -> tuple[float, ...]:
    """Values of the combination over all deterministic local strategies."""
    values = set()
    for a1, a2, b1, b2 in itertools.product((1, -1), repeat=4):
        values.add(float(a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2))
    return tuple(sorted(values))


def classical_chsh_bound() -> float:
    """Largest magnitude reachable by deterministic local strategies."""
    return max(abs(v) for v in deterministic_strategy_values())


def tsirelson_bound() -> float:
    return 2.0 * float(np.sqrt(2.0))


def spin_setting(angle: float) -> np.ndarray:
    """A +1/-1 valued qubit setting in the ZX plane at the given angle."""
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    return np.cos(angle) * z + np.sin(angle) * x


def singlet_state() -> StateVector:
    amp = np.zeros(4, dtype=complex)
    amp[1] = 1 / np.sqrt(2)
    amp[2] = -1 / np.sqrt(2)
    return StateVector(amp, label="singlet")


def singlet_setup(alpha1: float = np.pi / 2, alpha2: float = 0.0,
                  beta1: float = np.pi / 4, beta2: float = 3 * np.pi / 4) -> CHSHSetup:
    """Singlet with one side's analyzers reversed.

    For the singlet, the raw correlation of same-plane settings is the
    negative cosine of the angle difference; reversing the second side's
    settings flips it to a positive cosine, which makes the default angle
    choice reach the combination's quantum maximum with a plus sign.
    """
    return CHSHSetup(
        state=singlet_state().density(),
        alice=(spin_setting(alpha1), spin_setting(alpha2)),
        bob=(-spin_setting(beta1), -spin_setting(beta2)),
    )
