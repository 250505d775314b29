"""Variables as explicit function tables on a finite base space.

A variable assigns a value label to every point of a finite space. The
partial order "a is a function of b" is decided by partition refinement,
which is exact on finite tables. Maximality is always relative to a
declared family of variables, never absolute.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AccessibilityError, DomainError, InvariantViolation


@dataclass(frozen=True)
class VariableSpace:
    """A finite, ordered set of distinct point labels.

    The ordering is fixed at construction and used everywhere downstream
    (permutations, basis conventions, serialization).
    """

    id: str
    points: tuple[str, ...]

    def __post_init__(self):
        if len(self.points) < 1:
            raise InvariantViolation(f"space {self.id!r} has no points")
        if len(set(self.points)) != len(self.points):
            raise InvariantViolation(f"space {self.id!r} has duplicate point labels")

    @property
    def size(self) -> int:
        return len(self.points)

    def index(self, point: str) -> int:
        try:
            return self.points.index(point)
        except ValueError:
            raise InvariantViolation(f"point {point!r} not in space {self.id!r}") from None


@dataclass(frozen=True)
class TheoreticalVariable:
    """A total function from a variable space to value labels.

    ``values[i]`` is the value at ``domain.points[i]``. Value labels are
    opaque strings; numeric meaning is attached later by an embedding.
    """

    id: str
    domain: VariableSpace
    values: tuple[str, ...]
    accessible: bool = True

    def __post_init__(self):
        if len(self.values) != self.domain.size:
            raise InvariantViolation(
                f"variable {self.id!r}: {len(self.values)} values for "
                f"{self.domain.size} points"
            )

    @classmethod
    def from_map(cls, id: str, domain: VariableSpace, mapping, accessible: bool = True):
        """Build from a point -> value mapping, which must be total on the domain."""
        missing = [p for p in domain.points if p not in mapping]
        if missing:
            raise InvariantViolation(
                f"variable {id!r}: no value for points {missing} of {domain.id!r}"
            )
        extra = [p for p in mapping if p not in domain.points]
        if extra:
            raise InvariantViolation(
                f"variable {id!r}: values for unknown points {extra}"
            )
        return cls(id, domain, tuple(str(mapping[p]) for p in domain.points), accessible)

    def value(self, point: str) -> str:
        return self.values[self.domain.index(point)]

    @property
    def value_map(self) -> dict[str, str]:
        return dict(zip(self.domain.points, self.values))

    @property
    def value_set(self) -> tuple[str, ...]:
        """Image of the table, in first-occurrence order (no phantom values)."""
        seen = []
        for v in self.values:
            if v not in seen:
                seen.append(v)
        return tuple(seen)

    def preimages(self) -> dict[str, tuple[int, ...]]:
        """Point indices grouped by value, keyed by value label."""
        cells: dict[str, list[int]] = {}
        for i, v in enumerate(self.values):
            cells.setdefault(v, []).append(i)
        return {v: tuple(ix) for v, ix in cells.items()}

    def compose(self, id: str, mapping, accessible: bool | None = None) -> "TheoreticalVariable":
        """Post-compose with a total map on the value set (g after self)."""
        missing = [v for v in self.value_set if v not in mapping]
        if missing:
            raise InvariantViolation(f"composition map misses values {missing}")
        acc = self.accessible if accessible is None else accessible
        return TheoreticalVariable(
            id, self.domain, tuple(str(mapping[v]) for v in self.values), acc
        )


@dataclass(frozen=True)
class VariableFamily:
    """The set of variables declared in one context, over one base space."""

    phi_space: VariableSpace
    members: tuple[TheoreticalVariable, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ids = [m.id for m in self.members]
        if len(set(ids)) != len(ids):
            raise InvariantViolation("family has duplicate variable ids")
        for m in self.members:
            if m.domain != self.phi_space:
                raise DomainError(
                    f"family member {m.id!r} lives on {m.domain.id!r}, "
                    f"not on {self.phi_space.id!r}"
                )

    def member(self, id: str) -> TheoreticalVariable:
        for m in self.members:
            if m.id == id:
                return m
        raise KeyError(id)

    @property
    def accessible_members(self) -> tuple[TheoreticalVariable, ...]:
        return tuple(m for m in self.members if m.accessible)


def _require_shared_domain(a: TheoreticalVariable, b: TheoreticalVariable) -> None:
    if a.domain != b.domain:
        raise DomainError(
            f"variables {a.id!r} and {b.id!r} live on different spaces "
            f"({a.domain.id!r} vs {b.domain.id!r})"
        )


def is_function_of(a: TheoreticalVariable, b: TheoreticalVariable) -> bool:
    """Whether ``a = f(b)`` pointwise for some map f on b's values.

    Equivalent to: wherever b agrees, a agrees. Decided by checking that a
    is constant on every cell of b's value partition.
    """
    _require_shared_domain(a, b)
    seen: dict[str, str] = {}
    for av, bv in zip(a.values, b.values):
        if bv in seen:
            if seen[bv] != av:
                return False
        else:
            seen[bv] = av
    return True


def is_bijective_correspondence(a: TheoreticalVariable, b: TheoreticalVariable) -> bool:
    """Whether a and b determine each other (functions of each other both ways)."""
    return is_function_of(a, b) and is_function_of(b, a)


def is_maximal(v: TheoreticalVariable, family: VariableFamily) -> bool:
    """Whether no accessible family member sits strictly above v.

    ``w`` sits strictly above ``v`` when v is a function of w but the two
    are not in bijective correspondence. Maximality is relative to the
    declared family.
    """
    if not v.accessible:
        raise AccessibilityError(f"variable {v.id!r} is not accessible")
    if v.id not in {m.id for m in family.members}:
        raise InvariantViolation(f"variable {v.id!r} is not in the family")
    for w in family.accessible_members:
        if w.id == v.id:
            continue
        if is_function_of(v, w) and not is_bijective_correspondence(v, w):
            return False
    return True


def maximal_members(family: VariableFamily) -> tuple[TheoreticalVariable, ...]:
    """All accessible members that are maximal within the family."""
    return tuple(m for m in family.accessible_members if is_maximal(m, family))


def has_maximal_cover(family: VariableFamily) -> bool:
    """Every accessible member is a function of some maximal accessible member."""
    tops = maximal_members(family)
    return all(
        any(is_function_of(m, t) for t in tops) for m in family.accessible_members
    )


def induce_on_range(
    v: TheoreticalVariable,
    base: TheoreticalVariable,
    range_space: VariableSpace,
) -> TheoreticalVariable:
    """Re-express ``v`` as a function on the range space of ``base``.

    Requires v to be a function of base, and the range space's point labels
    to be exactly base's value labels. The result has one value per base
    value, which is what the operator construction consumes.
    """
    _require_shared_domain(v, base)
    if not is_function_of(v, base):
        raise DomainError(f"variable {v.id!r} is not a function of {base.id!r}")
    if set(base.value_set) != set(range_space.points):
        raise DomainError(
            f"range space {range_space.id!r} does not match the values of {base.id!r}"
        )
    table: dict[str, str] = {}
    for bv, vv in zip(base.values, v.values):
        table[bv] = vv
    return TheoreticalVariable.from_map(v.id, range_space, table, v.accessible)
