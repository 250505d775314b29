"""Finite permutation groups acting on variable spaces.

Groups are stored as explicit element tables, generated by breadth-first
closure from a generating set. All group axioms are re-checked by brute
force on the table, and the invariant measure is constructed as an
explicit weight vector (counting measure on each orbit).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import GroupAxiomError, GroupMembershipError, InvariantViolation
from .variables import VariableSpace

MAX_GROUP_ORDER = 10080


@dataclass(frozen=True)
class Permutation:
    """A permutation of {0, ..., n-1} stored as its image tuple.

    ``images[i]`` is the image of i. Composition is function composition,
    ``(g * h)(x) = g(h(x))``, so the right factor acts first.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(n)):
            raise InvariantViolation(f"not a permutation of 0..{n - 1}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        """Build from disjoint cycles given as index tuples."""
        images = list(range(n))
        for cycle in cycles:
            for i, x in enumerate(cycle):
                y = cycle[(i + 1) % len(cycle)]
                images[x] = y
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.degree != other.degree:
            raise InvariantViolation("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.degree)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles in increasing order of smallest moved index."""
        seen = set()
        out = []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            out.append(tuple(cycle))
        return tuple(out)

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "e"
        return "".join("(" + " ".join(str(i) for i in c) + ")" for c in cyc)


def generate(generators, degree: int, max_order: int = MAX_GROUP_ORDER) -> tuple[Permutation, ...]:
    """Breadth-first closure of a generating set under composition.

    The identity comes first; beyond that, discovery order is kept, which
    fixes the tie-break order used by relation searches.
    """
    gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in generators]
    for g in gens:
        if g.degree != degree:
            raise InvariantViolation(f"generator degree {g.degree} != {degree}")
    identity = Permutation.identity(degree)
    elements = [identity]
    seen = {identity.images}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for h in frontier:
            for g in gens:
                prod = g * h
                if prod.images not in seen:
                    if len(elements) >= max_order:
                        raise InvariantViolation(
                            f"group closure exceeds the cap of {max_order} elements"
                        )
                    seen.add(prod.images)
                    elements.append(prod)
                    new_frontier.append(prod)
        frontier = new_frontier
    return tuple(elements)


@dataclass(frozen=True)
class GroupAction:
    """A finite group given by an explicit element table, acting on a space.

    Element order is part of the data: searches over the group iterate in
    this order and report the first hit.
    """

    space: VariableSpace
    elements: tuple[Permutation, ...]

    def __post_init__(self):
        if not self.elements:
            raise InvariantViolation("group has no elements")
        for g in self.elements:
            if g.degree != self.space.size:
                raise InvariantViolation(
                    f"element degree {g.degree} does not match space size {self.space.size}"
                )
        if len({g.images for g in self.elements}) != len(self.elements):
            raise InvariantViolation("group table has duplicate elements")

    @classmethod
    def from_generators(cls, space: VariableSpace, generators,
                        max_order: int = MAX_GROUP_ORDER) -> "GroupAction":
        return cls(space, generate(generators, space.size, max_order))

    @classmethod
    def from_elements(cls, space: VariableSpace, elements) -> "GroupAction":
        elems = tuple(
            g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in elements
        )
        action = cls(space, elems)
        report = verify_group(action)
        if not report["is_group"]:
            raise GroupAxiomError("; ".join(report["failures"]))
        return action

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return Permutation.identity(self.space.size)

    def __contains__(self, g: Permutation) -> bool:
        return any(g.images == h.images for h in self.elements)

    def require_member(self, g: Permutation) -> None:
        if g not in self:
            raise GroupMembershipError(f"{g} is not an element of the group")

    def act_point(self, g: Permutation, point: str) -> str:
        self.require_member(g)
        return self.space.points[g(self.space.index(point))]

    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits as sorted index tuples, ordered by smallest member."""
        remaining = set(range(self.space.size))
        out = []
        while remaining:
            start = min(remaining)
            orbit = {g(start) for g in self.elements}
            out.append(tuple(sorted(orbit)))
            remaining -= orbit
        return tuple(out)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def isotropy_trivial(self) -> bool:
        """Only the identity fixes every point it could fix, pointwise.

        True when no non-identity element has a fixed point, i.e. every
        stabilizer subgroup is trivial.
        """
        e = self.identity
        for g in self.elements:
            if g == e:
                continue
            if any(g(i) == i for i in range(self.space.size)):
                return False
        return True


def verify_group(action: GroupAction) -> dict:
    """Brute-force check of the group axioms on the element table.

    Returns a report dict; ``is_group`` is True only if closure, identity,
    inverses and associativity all hold. Associativity is inherited from
    function composition but is still spot-checked on the table.
    """
    elems = action.elements
    table = {g.images for g in elems}
    failures = []

    closed = True
    for g in elems:
        for h in elems:
            if (g * h).images not in table:
                closed = False
                failures.append(f"closure fails at {g} * {h}")
                break
        if not closed:
            break

    identity = Permutation.identity(action.space.size)
    has_identity = identity.images in table
    if not has_identity:
        failures.append("identity element missing")

    has_inverses = all(g.inverse().images in table for g in elems)
    if not has_inverses:
        failures.append("some element lacks an inverse in the table")

    associative = True
    sample = elems[: min(len(elems), 12)]
    for g in sample:
        for h in sample:
            for k in sample:
                if ((g * h) * k).images != (g * (h * k)).images:
                    associative = False
                    failures.append(f"associativity fails at {g}, {h}, {k}")
                    break
            if not associative:
                break
        if not associative:
            break

    return {
        "is_group": closed and has_identity and has_inverses and associative,
        "closed": closed,
        "has_identity": has_identity,
        "has_inverses": has_inverses,
        "associative": associative,
        "order": len(elems),
        "failures": failures,
    }


@dataclass(frozen=True)
class InvariantMeasure:
    """A strictly positive weight vector invariant under the group action.

    Weights are exact rationals; ``weight_of`` gives the value at a point
    label and ``as_floats`` the vector aligned with the space ordering.
    """

    space: VariableSpace
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.weights) != self.space.size:
            raise InvariantViolation("one weight per point required")
        if any(w <= 0 for w in self.weights):
            raise InvariantViolation("measure weights must be strictly positive")

    def weight_of(self, point: str) -> Fraction:
        return self.weights[self.space.index(point)]

    def as_floats(self) -> tuple[float, ...]:
        return tuple(float(w) for w in self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))


def invariant_measure(action: GroupAction) -> InvariantMeasure:
    """Counting measure: weight 1 on every point, invariant by construction."""
    return InvariantMeasure(action.space, tuple(Fraction(1) for _ in action.space.points))


def is_invariant(measure: InvariantMeasure, action: GroupAction) -> bool:
    if measure.space != action.space:
        raise InvariantViolation("measure and action live on different spaces")
    for g in action.elements:
        for i in range(action.space.size):
            if measure.weights[g(i)] != measure.weights[i]:
                return False
    return True


def measure_freedom(action: GroupAction) -> int:
    """Dimension of the cone of invariant measures: one degree per orbit.

    Equals 1 exactly when the action is transitive, in which case the
    invariant measure is unique up to overall scale.
    """
    return len(action.orbits())
