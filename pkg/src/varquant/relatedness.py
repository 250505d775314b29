"""Deciding whether two variables are images of each other under a group.

Two variables on the same space are related when one equals the other
composed with a single global group element. If that fails, the search
retries after relabeling the candidate's values through a bijection (a
surrogate). Everything is decided by exhaustive search over the stored
element table, so results are exact and reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from .errors import CategoryError, DomainError
from .groups import GroupAction, Permutation
from .variables import TheoreticalVariable, is_bijective_correspondence

MAX_SURROGATE_VALUES = 8


class RelationStatus(Enum):
    ONE_TO_ONE = "one_to_one"
    RELATED = "related"
    RELATED_VIA_SURROGATE = "related_via_surrogate"
    UNRELATED = "unrelated"


@dataclass(frozen=True)
class RelatednessResult:
    """Outcome of a relation search.

    ``witness`` is the first group element found (search order = stored
    element order), ``surrogate`` the value relabeling used if any, and
    ``witness_count`` how many witnesses the executed search phase found
    in total.
    """

    status: RelationStatus
    witness: Permutation | None = None
    surrogate: dict | None = None
    witness_count: int = 0
    detail: str = ""

    @property
    def related(self) -> bool:
        return self.status is not RelationStatus.UNRELATED


def _require_compatible(theta: TheoreticalVariable, eta: TheoreticalVariable,
                        action: GroupAction) -> None:
    if theta.domain != eta.domain:
        raise DomainError(
            f"variables {theta.id!r} and {eta.id!r} live on different spaces"
        )
    if theta.domain != action.space:
        raise DomainError(
            f"group acts on {action.space.id!r}, variables live on {theta.domain.id!r}"
        )
    if not (theta.accessible and eta.accessible):
        raise CategoryError("relation search is defined for accessible variables")


def check_relation(theta: TheoreticalVariable, eta: TheoreticalVariable,
                   k: Permutation, action: GroupAction) -> bool:
    """Whether ``eta(x) == theta(k(x))`` at every point, for this one k."""
    _require_compatible(theta, eta, action)
    action.require_member(k)
    return all(
        eta.values[i] == theta.values[k(i)] for i in range(theta.domain.size)
    )


def relation_witnesses(theta: TheoreticalVariable, eta: TheoreticalVariable,
                       action: GroupAction) -> tuple[Permutation, ...]:
    """All group elements witnessing the direct relation, in stored order."""
    _require_compatible(theta, eta, action)
    n = theta.domain.size
    return tuple(
        k for k in action.elements
        if all(eta.values[i] == theta.values[k(i)] for i in range(n))
    )


def _canonical_relabeling(theta: TheoreticalVariable,
                          eta: TheoreticalVariable) -> dict:
    """The value bijection carrying eta's table onto theta's, when one-to-one."""
    out: dict = {}
    for tv, ev in zip(theta.values, eta.values):
        out[ev] = tv
    return out


def find_relation(theta: TheoreticalVariable, eta: TheoreticalVariable,
                  action: GroupAction,
                  max_surrogate_values: int = MAX_SURROGATE_VALUES) -> RelatednessResult:
    """Classify the relation between two variables under a group action.

    Search order: pointwise bijective correspondence first, then group
    witnesses in stored element order, then surrogates over all value
    bijections (skipped when the value sets cannot be matched or exceed
    the size cap).
    """
    _require_compatible(theta, eta, action)

    if is_bijective_correspondence(theta, eta):
        beta = _canonical_relabeling(theta, eta)
        relabeled = eta.compose(eta.id, beta)
        count = len(relation_witnesses(theta, relabeled, action))
        return RelatednessResult(
            RelationStatus.ONE_TO_ONE,
            witness=action.identity,
            surrogate=beta,
            witness_count=count,
            detail="variables determine each other pointwise",
        )

    direct = relation_witnesses(theta, eta, action)
    if direct:
        return RelatednessResult(
            RelationStatus.RELATED,
            witness=direct[0],
            witness_count=len(direct),
            detail=f"{len(direct)} group witnesses",
        )

    v_theta = theta.value_set
    v_eta = eta.value_set
    if len(v_theta) != len(v_eta):
        return RelatednessResult(
            RelationStatus.UNRELATED,
            detail="value sets have different sizes, no surrogate possible",
        )
    if len(v_theta) > max_surrogate_values:
        return RelatednessResult(
            RelationStatus.UNRELATED,
            detail=f"surrogate search skipped, value set larger than {max_surrogate_values}",
        )

    first_pair = None
    total = 0
    for assigned in itertools.permutations(v_theta):
        beta = dict(zip(v_eta, assigned))
        relabeled = eta.compose(eta.id, beta)
        hits = relation_witnesses(theta, relabeled, action)
        if hits:
            total += len(hits)
            if first_pair is None:
                first_pair = (beta, hits[0])
    if first_pair is not None:
        beta, k = first_pair
        return RelatednessResult(
            RelationStatus.RELATED_VIA_SURROGATE,
            witness=k,
            surrogate=beta,
            witness_count=total,
            detail=f"{total} witness pairs over value bijections",
        )

    return RelatednessResult(
        RelationStatus.UNRELATED,
        detail="no group element matches under any value bijection",
    )
