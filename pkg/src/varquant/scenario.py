"""Scenario documents, validation, and check reports.

A scenario is one YAML document declaring everything a verification run
needs: the base space, variables, groups, numeric embeddings, states,
likelihood kernels, experiment blocks and the list of named checks to
run. Loading resolves all cross-references and re-verifies every group
table; every problem is reported with a path into the document.

Reports are serialized as canonical JSON (sorted keys, two-space indent,
trailing newline), so serialize, parse, serialize is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .errors import ScenarioError
from .groups import GroupAction, verify_group
from .operators import NumericEmbedding
from .variables import TheoreticalVariable, VariableFamily, VariableSpace

SCHEMA_VERSION = 1

EXPERIMENT_TYPES = ("born", "chsh", "ozawa", "context", "coherence", "composition")

TOP_LEVEL_FIELDS = (
    "version", "name", "description", "phi_space", "variables", "groups",
    "embeddings", "states", "likelihood_models", "experiments", "checks",
)


@dataclass(frozen=True, eq=False)
class Scenario:
    """A loaded scenario with resolved algebraic objects and raw blocks.

    Groups are generated and verified at load time; states, likelihood
    models and experiment blocks stay as validated nodes and are built
    into live objects by the checks that use them, so that domain errors
    surface per check instead of failing the whole load.
    """

    name: str
    description: str
    version: int
    phi_space: VariableSpace | None
    family: VariableFamily | None
    groups: dict
    phi_group_id: str | None
    variable_groups: dict
    variable_embeddings: dict
    embeddings: dict
    states: dict
    likelihood_models: tuple
    experiments: tuple
    checks: tuple
    document: dict = field(repr=False)

    @property
    def phi_action(self) -> GroupAction | None:
        return self.groups[self.phi_group_id] if self.phi_group_id else None

    def embedding_for(self, variable_id: str) -> NumericEmbedding | None:
        """The embedding declared for a variable, or the only one declared."""
        eid = self.variable_embeddings.get(variable_id)
        if eid is not None:
            return self.embeddings[eid]
        if len(self.embeddings) == 1:
            return next(iter(self.embeddings.values()))
        return None

    def experiments_of(self, kind: str) -> tuple:
        return tuple(e for e in self.experiments if e["type"] == kind)


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one named check: status, numeric metrics, witnesses."""

    name: str
    status: str
    metrics: dict = field(default_factory=dict)
    witnesses: tuple | None = None
    message: str = ""

    def __post_init__(self):
        if self.status not in ("pass", "fail", "error"):
            raise ValueError(f"unknown status {self.status!r}")
        for key, value in self.metrics.items():
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise ValueError(f"metric {key!r} is not a finite number: {value!r}")


@dataclass(frozen=True)
class Report:
    """All check outcomes for one scenario run."""

    scenario: str
    seed: int
    results: tuple
    version: int = SCHEMA_VERSION

    @property
    def all_passed(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    @property
    def counts(self) -> dict:
        out = {"total": len(self.results), "pass": 0, "fail": 0, "error": 0}
        for r in self.results:
            out[r.status] += 1
        return out


# ---------------------------------------------------------------- numbers


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _is_complex_entry(x) -> bool:
    return (isinstance(x, list) and len(x) == 2
            and _is_number(x[0]) and _is_number(x[1]))


def vector_from_node(node) -> np.ndarray:
    """Complex vector from a list of [re, im] pairs."""
    return np.array([complex(re, im) for re, im in node], dtype=complex)


def matrix_from_node(node) -> np.ndarray:
    """Complex matrix from nested lists of [re, im] pairs."""
    return np.array(
        [[complex(re, im) for re, im in row] for row in node], dtype=complex
    )


def vector_to_node(vec) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(vec, dtype=complex)]


def matrix_to_node(mat) -> list:
    return [vector_to_node(row) for row in np.asarray(mat, dtype=complex)]


# ------------------------------------------------------------- validation


class _Checker:
    """Collects path-qualified structural problems in one document."""

    def __init__(self):
        self.issues: list[tuple[str, str]] = []

    def fail(self, path: str, message: str) -> None:
        self.issues.append((path, message))

    def expect(self, cond, path: str, message: str) -> bool:
        if not cond:
            self.fail(path, message)
        return bool(cond)

    def str_field(self, node: dict, key: str, path: str,
                  required: bool = True) -> str | None:
        if key not in node:
            if required:
                self.fail(f"{path}.{key}", "missing required field")
            return None
        if not isinstance(node[key], str) or not node[key]:
            self.fail(f"{path}.{key}", "must be a non-empty string")
            return None
        return node[key]

    def bool_field(self, node: dict, key: str, path: str) -> None:
        if key in node and not isinstance(node[key], bool):
            self.fail(f"{path}.{key}", "must be true or false")

    def vector(self, node, path: str, length: int | None = None) -> bool:
        if not isinstance(node, list) or not node:
            self.fail(path, "must be a non-empty list of [re, im] pairs")
            return False
        ok = True
        for i, entry in enumerate(node):
            if not _is_complex_entry(entry):
                self.fail(f"{path}[{i}]", "must be an [re, im] pair of numbers")
                ok = False
        if ok and length is not None and len(node) != length:
            self.fail(path, f"has {len(node)} entries, expected {length}")
            ok = False
        return ok

    def matrix(self, node, path: str, size: int | None = None) -> bool:
        if not isinstance(node, list) or not node:
            self.fail(path, "must be a non-empty list of rows")
            return False
        ok = True
        width = None
        for i, row in enumerate(node):
            if not self.vector(row, f"{path}[{i}]"):
                ok = False
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                self.fail(f"{path}[{i}]", f"row width {len(row)} != {width}")
                ok = False
        if ok and width != len(node):
            self.fail(path, f"must be square, got {len(node)} rows of width {width}")
            ok = False
        if ok and size is not None and len(node) != size:
            self.fail(path, f"is {len(node)}x{len(node)}, expected {size}x{size}")
            ok = False
        return ok

    def permutation(self, node, path: str, size: int | None = None) -> bool:
        if not isinstance(node, list):
            self.fail(path, "must be a list of point indices")
            return False
        n = len(node)
        if size is not None and n != size:
            self.fail(path, f"has {n} entries, expected {size}")
            return False
        if sorted(x for x in node if isinstance(x, int) and not isinstance(x, bool)) \
                != list(range(n)):
            self.fail(path, f"is not a permutation of 0..{n - 1}")
            return False
        return True


def _unique_ids(nodes, path: str, c: _Checker) -> None:
    seen = set()
    for i, node in enumerate(nodes):
        if not isinstance(node, dict):
            continue
        nid = node.get("id")
        if isinstance(nid, str):
            if nid in seen:
                c.fail(f"{path}[{i}].id", f"duplicate id {nid!r}")
            seen.add(nid)


def _validate_phi_space(node, c: _Checker) -> list | None:
    path = "phi_space"
    if not isinstance(node, dict):
        c.fail(path, "must be a mapping with id and points")
        return None
    c.str_field(node, "id", path)
    points = node.get("points")
    if not isinstance(points, list) or not points:
        c.fail(f"{path}.points", "must be a non-empty list")
        return None
    if not all(isinstance(p, str) and p for p in points):
        c.fail(f"{path}.points", "point labels must be non-empty strings")
        return None
    if len(set(points)) != len(points):
        c.fail(f"{path}.points", "point labels must be distinct")
        return None
    for key in set(node) - {"id", "points"}:
        c.fail(f"{path}.{key}", "unknown field")
    return points


def _validate_variables(nodes, n_points, c: _Checker) -> None:
    path = "variables"
    if not isinstance(nodes, list) or not nodes:
        c.fail(path, "must be a non-empty list")
        return
    _unique_ids(nodes, path, c)
    for i, node in enumerate(nodes):
        vp = f"{path}[{i}]"
        if not isinstance(node, dict):
            c.fail(vp, "must be a mapping with id and values")
            continue
        c.str_field(node, "id", vp)
        values = node.get("values")
        if not isinstance(values, list) or not values \
                or not all(isinstance(v, str) and v for v in values):
            c.fail(f"{vp}.values", "must be a list of non-empty value labels")
        elif n_points is not None and len(values) != n_points:
            c.fail(f"{vp}.values", f"has {len(values)} values for {n_points} points")
        c.bool_field(node, "accessible", vp)
        for key in ("group", "embedding"):
            if key in node and not isinstance(node[key], str):
                c.fail(f"{vp}.{key}", "must be an id string")
        for key in set(node) - {"id", "values", "accessible", "group", "embedding"}:
            c.fail(f"{vp}.{key}", "unknown field")


def _validate_groups(nodes, c: _Checker) -> None:
    path = "groups"
    if not isinstance(nodes, list) or not nodes:
        c.fail(path, "must be a non-empty list")
        return
    _unique_ids(nodes, path, c)
    phi_groups = []
    for i, node in enumerate(nodes):
        gp = f"{path}[{i}]"
        if not isinstance(node, dict):
            c.fail(gp, "must be a mapping with id, space and generators")
            continue
        gid = c.str_field(node, "id", gp)
        space = c.str_field(node, "space", gp)
        if space == "phi" and gid is not None:
            phi_groups.append(gid)
        gens = node.get("generators")
        if not isinstance(gens, list) or not gens:
            c.fail(f"{gp}.generators", "must be a non-empty list of permutations")
        else:
            for j, g in enumerate(gens):
                c.permutation(g, f"{gp}.generators[{j}]")
        for key in set(node) - {"id", "space", "generators"}:
            c.fail(f"{gp}.{key}", "unknown field")
    if len(phi_groups) > 1:
        c.fail(path, f"more than one group acts on the base space: {phi_groups}")


def _validate_embeddings(nodes, c: _Checker) -> None:
    path = "embeddings"
    if not isinstance(nodes, list) or not nodes:
        c.fail(path, "must be a non-empty list")
        return
    _unique_ids(nodes, path, c)
    for i, node in enumerate(nodes):
        ep = f"{path}[{i}]"
        if not isinstance(node, dict):
            c.fail(ep, "must be a mapping with id and mapping")
            continue
        c.str_field(node, "id", ep)
        mapping = node.get("mapping")
        if not isinstance(mapping, dict) or not mapping:
            c.fail(f"{ep}.mapping", "must map value labels to numbers")
            continue
        for label, num in mapping.items():
            if not _is_number(num):
                c.fail(f"{ep}.mapping.{label}", "must be a number")
        numbers = [float(v) for v in mapping.values() if _is_number(v)]
        if len(set(numbers)) != len(numbers):
            c.fail(f"{ep}.mapping", "numbers must be pairwise distinct")
        for key in set(node) - {"id", "mapping"}:
            c.fail(f"{ep}.{key}", "unknown field")


def _validate_states(nodes, c: _Checker) -> None:
    path = "states"
    if not isinstance(nodes, list) or not nodes:
        c.fail(path, "must be a non-empty list")
        return
    _unique_ids(nodes, path, c)
    for i, node in enumerate(nodes):
        sp = f"{path}[{i}]"
        if not isinstance(node, dict):
            c.fail(sp, "must be a mapping with id and vector or matrix")
            continue
        c.str_field(node, "id", sp)
        if "vector" in node:
            c.vector(node["vector"], f"{sp}.vector")
        elif "matrix" in node:
            c.matrix(node["matrix"], f"{sp}.matrix")
        else:
            c.fail(sp, "needs either vector or matrix")
        for key in set(node) - {"id", "vector", "matrix"}:
            c.fail(f"{sp}.{key}", "unknown field")


def _validate_likelihood_models(nodes, c: _Checker) -> None:
    path = "likelihood_models"
    if not isinstance(nodes, list) or not nodes:
        c.fail(path, "must be a non-empty list")
        return
    _unique_ids(nodes, path, c)
    for i, node in enumerate(nodes):
        lp = f"{path}[{i}]"
        if not isinstance(node, dict):
            c.fail(lp, "must be a mapping with id, operator and kernel")
            continue
        c.str_field(node, "id", lp)
        op = node.get("operator")
        if not isinstance(op, dict) or "matrix" not in op:
            c.fail(f"{lp}.operator", "must be a mapping with a matrix")
        else:
            c.matrix(op["matrix"], f"{lp}.operator.matrix")
        kernel = node.get("kernel")
        if not isinstance(kernel, dict) or not kernel:
            c.fail(f"{lp}.kernel", "must map outcomes to likelihood rows")
        else:
            widths = set()
            for z, row in kernel.items():
                if not isinstance(row, list) or not all(_is_number(x) for x in row):
                    c.fail(f"{lp}.kernel.{z}", "must be a list of numbers")
                else:
                    widths.add(len(row))
            if len(widths) > 1:
                c.fail(f"{lp}.kernel", "rows have inconsistent lengths")
        for key in set(node) - {"id", "operator", "kernel"}:
            c.fail(f"{lp}.{key}", "unknown field")


def _validate_experiment(node, xp: str, state_ids, c: _Checker) -> None:
    kind = node.get("type")
    if kind == "born":
        ops = node.get("operators")
        op_ids = []
        if not isinstance(ops, list) or len(ops) < 2:
            c.fail(f"{xp}.operators", "must list at least two operators")
        else:
            _unique_ids(ops, f"{xp}.operators", c)
            for j, op in enumerate(ops):
                op_path = f"{xp}.operators[{j}]"
                if not isinstance(op, dict):
                    c.fail(op_path, "must be a mapping")
                    continue
                oid = c.str_field(op, "id", op_path)
                if oid:
                    op_ids.append(oid)
                if "matrix" in op:
                    c.matrix(op["matrix"], f"{op_path}.matrix")
                elif "basis" in op and "eigenvalues" in op:
                    c.matrix(op["basis"], f"{op_path}.basis")
                    vals = op["eigenvalues"]
                    if not isinstance(vals, list) or not all(_is_number(v) for v in vals):
                        c.fail(f"{op_path}.eigenvalues", "must be a list of numbers")
                    elif isinstance(op.get("basis"), list) and len(vals) != len(op["basis"]):
                        c.fail(f"{op_path}.eigenvalues",
                               "needs one eigenvalue per basis column")
                else:
                    c.fail(op_path, "needs either matrix or basis plus eigenvalues")
        pairs = node.get("pairs")
        if not isinstance(pairs, list) or not pairs:
            c.fail(f"{xp}.pairs", "must be a non-empty list")
        else:
            for j, pair in enumerate(pairs):
                pp = f"{xp}.pairs[{j}]"
                if not isinstance(pair, dict):
                    c.fail(pp, "must be a mapping with a and b")
                    continue
                for side in ("a", "b"):
                    ref = c.str_field(pair, side, pp)
                    if ref is not None and op_ids and ref not in op_ids:
                        c.fail(f"{pp}.{side}", f"unknown operator {ref!r}")
                if "expect" in pair and pair["expect"] not in ("commuting", "noncommuting"):
                    c.fail(f"{pp}.expect", "must be commuting or noncommuting")
                for key in set(pair) - {"a", "b", "expect"}:
                    c.fail(f"{pp}.{key}", "unknown field")
        allowed = {"id", "type", "operators", "pairs"}
    elif kind == "chsh":
        state = node.get("state")
        if isinstance(state, str):
            if state not in state_ids:
                c.fail(f"{xp}.state", f"unknown state {state!r}")
        elif isinstance(state, list):
            c.vector(state, f"{xp}.state")
        else:
            c.fail(f"{xp}.state", "must be a state id or an amplitude vector")
        for side in ("alice", "bob"):
            mats = node.get(side)
            if not isinstance(mats, list) or len(mats) != 2:
                c.fail(f"{xp}.{side}", "must be a list of exactly two setting matrices")
            else:
                for j, m in enumerate(mats):
                    c.matrix(m, f"{xp}.{side}[{j}]")
        if "expected_value" in node and not _is_number(node["expected_value"]):
            c.fail(f"{xp}.expected_value", "must be a number")
        c.bool_field(node, "expect_exceeds_classical", xp)
        allowed = {"id", "type", "state", "alice", "bob", "expected_value",
                   "expect_exceeds_classical"}
    elif kind == "ozawa":
        dims = node.get("dims")
        total = None
        if not isinstance(dims, list) or len(dims) < 2 \
                or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 2
                           for d in dims):
            c.fail(f"{xp}.dims", "must be a list of at least two factor sizes >= 2")
            dims = None
        else:
            total = int(np.prod(dims))
        if "initial" in node:
            c.vector(node["initial"], f"{xp}.initial", total)
        elif "system" in node and "meters" in node:
            if dims is not None:
                c.vector(node["system"], f"{xp}.system", dims[0])
                meters = node["meters"]
                if not isinstance(meters, list) or len(meters) != len(dims) - 1:
                    c.fail(f"{xp}.meters", "needs one ready vector per meter")
                else:
                    for j, m in enumerate(meters):
                        c.vector(m, f"{xp}.meters[{j}]", dims[j + 1])
        else:
            c.fail(xp, "needs either initial or system plus meters")
        if "unitary" in node:
            c.matrix(node["unitary"], f"{xp}.unitary", total)
        else:
            c.fail(f"{xp}.unitary", "missing required field")
        if "system_observable" in node:
            c.matrix(node["system_observable"], f"{xp}.system_observable",
                     dims[0] if dims else None)
        else:
            c.fail(f"{xp}.system_observable", "missing required field")
        pointers = node.get("pointers")
        if not isinstance(pointers, list) or not pointers:
            c.fail(f"{xp}.pointers", "must be a non-empty list of matrices")
        else:
            if dims is not None and len(pointers) != len(dims) - 1:
                c.fail(f"{xp}.pointers",
                       f"has {len(pointers)} entries for {len(dims) - 1} meters")
            for j, m in enumerate(pointers):
                c.matrix(m, f"{xp}.pointers[{j}]",
                         dims[j + 1] if dims and j + 1 < len(dims) else None)
        if "time" in node and not (isinstance(node["time"], int)
                                   and not isinstance(node["time"], bool)):
            c.fail(f"{xp}.time", "must be an integer step count")
        c.bool_field(node, "sweep_system_basis", xp)
        c.bool_field(node, "expect_reproducible", xp)
        if node.get("sweep_system_basis") and "meters" not in node:
            c.fail(f"{xp}.sweep_system_basis",
                   "requires system and meters form of the initial state")
        allowed = {"id", "type", "dims", "initial", "system", "meters", "unitary",
                   "system_observable", "pointers", "time", "sweep_system_basis",
                   "expect_reproducible"}
    elif kind == "context":
        nodes_list = node.get("nodes")
        if not isinstance(nodes_list, list) or len(nodes_list) < 1 \
                or not all(isinstance(x, str) and x for x in nodes_list) \
                or len(set(nodes_list)) != len(nodes_list):
            c.fail(f"{xp}.nodes", "must be a list of distinct node names")
            nodes_list = []
        edges = node.get("edges", [])
        if not isinstance(edges, list):
            c.fail(f"{xp}.edges", "must be a list of pairs")
        else:
            for j, e in enumerate(edges):
                ok = (isinstance(e, list) and len(e) == 2
                      and all(isinstance(x, str) for x in e) and e[0] != e[1])
                if not c.expect(ok, f"{xp}.edges[{j}]",
                                "must be a pair of distinct node names"):
                    continue
                if nodes_list and not set(e) <= set(nodes_list):
                    c.fail(f"{xp}.edges[{j}]", f"unknown nodes in {e}")
        c.bool_field(node, "expect_consistent", xp)
        allowed = {"id", "type", "nodes", "edges", "expect_consistent"}
    elif kind == "coherence":
        dim = node.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
            c.fail(f"{xp}.dim", "must be an integer of at least 2")
            dim = None
        effs = node.get("effects")
        if not isinstance(effs, list) or not effs:
            c.fail(f"{xp}.effects", "must be a non-empty list of matrices")
            effs = []
        else:
            for j, m in enumerate(effs):
                c.matrix(m, f"{xp}.effects[{j}]", dim)
        if "state" in node:
            c.matrix(node["state"], f"{xp}.state", dim)
        elif "probabilities" in node:
            probs = node["probabilities"]
            if not isinstance(probs, list) or not all(_is_number(x) for x in probs):
                c.fail(f"{xp}.probabilities", "must be a list of numbers")
            elif effs and len(probs) != len(effs):
                c.fail(f"{xp}.probabilities",
                       f"has {len(probs)} entries for {len(effs)} effects")
        else:
            c.fail(xp, "needs either state or probabilities")
        if "sweep" in node and not (isinstance(node["sweep"], int)
                                    and not isinstance(node["sweep"], bool)
                                    and node["sweep"] >= 1):
            c.fail(f"{xp}.sweep", "must be a positive integer")
        c.bool_field(node, "expect_coherent", xp)
        allowed = {"id", "type", "dim", "effects", "state", "probabilities",
                   "sweep", "expect_coherent"}
    elif kind == "composition":
        for key in ("first", "second"):
            if key in node:
                c.vector(node[key], f"{xp}.{key}")
            else:
                c.fail(f"{xp}.{key}", "missing required field")
        allowed = {"id", "type", "first", "second"}
    else:
        return
    for key in set(node) - allowed:
        c.fail(f"{xp}.{key}", "unknown field")


def _validate_experiments(nodes, state_ids, c: _Checker) -> None:
    path = "experiments"
    if not isinstance(nodes, list) or not nodes:
        c.fail(path, "must be a non-empty list")
        return
    _unique_ids(nodes, path, c)
    for i, node in enumerate(nodes):
        xp = f"{path}[{i}]"
        if not isinstance(node, dict):
            c.fail(xp, "must be a mapping with a type")
            continue
        kind = node.get("type")
        if kind not in EXPERIMENT_TYPES:
            c.fail(f"{xp}.type",
                   f"unknown type {kind!r}, expected one of {', '.join(EXPERIMENT_TYPES)}")
            continue
        c.str_field(node, "id", xp)
        _validate_experiment(node, xp, state_ids, c)


def validate_document(doc) -> list:
    """Structural and cross-reference validation of one parsed document.

    Returns every (path, message) problem found; an empty list means the
    document can be resolved into a Scenario.
    """
    c = _Checker()
    if not isinstance(doc, dict):
        c.fail("$", "document must be a mapping")
        return c.issues

    version = doc.get("version")
    if version is None:
        c.fail("version", "missing required field")
    elif version != SCHEMA_VERSION:
        c.fail("version", f"unsupported version {version!r}, expected {SCHEMA_VERSION}")
    name = c.str_field(doc, "name", "$")
    if name is not None and not all(ch.isalnum() or ch in "-_" for ch in name):
        c.fail("name", "may contain only letters, digits, dashes and underscores")
    if "description" in doc and not isinstance(doc["description"], str):
        c.fail("description", "must be a string")
    for key in set(doc) - set(TOP_LEVEL_FIELDS):
        c.fail(str(key), "unknown top-level field")

    points = None
    if "phi_space" in doc:
        points = _validate_phi_space(doc["phi_space"], c)
    if "variables" in doc:
        if points is None and "phi_space" not in doc:
            c.fail("variables", "declared without a phi_space")
        _validate_variables(doc["variables"], len(points) if points else None, c)
    if "groups" in doc:
        _validate_groups(doc["groups"], c)
    if "embeddings" in doc:
        _validate_embeddings(doc["embeddings"], c)
    if "states" in doc:
        _validate_states(doc["states"], c)
    if "likelihood_models" in doc:
        _validate_likelihood_models(doc["likelihood_models"], c)

    state_ids = set()
    if isinstance(doc.get("states"), list):
        state_ids = {s.get("id") for s in doc["states"] if isinstance(s, dict)}
    if "experiments" in doc:
        _validate_experiments(doc["experiments"], state_ids, c)

    from . import checks as checks_module

    checks = doc.get("checks")
    if checks is not None:
        if not isinstance(checks, list) or not all(isinstance(x, str) for x in checks):
            c.fail("checks", "must be a list of check names")
        else:
            for i, check_name in enumerate(checks):
                if check_name not in checks_module.CHECK_REGISTRY:
                    c.fail(f"checks[{i}]", f"unknown check {check_name!r}")

    # cross-references between sections
    if c.issues:
        return c.issues
    _resolve_references(doc, c)
    return c.issues


def _resolve_references(doc: dict, c: _Checker) -> None:
    variables = {v["id"]: v for v in doc.get("variables", [])}
    groups = {g["id"]: g for g in doc.get("groups", [])}
    embeddings = {e["id"]: e for e in doc.get("embeddings", [])}
    n_points = len(doc["phi_space"]["points"]) if "phi_space" in doc else None

    for i, g in enumerate(doc.get("groups", [])):
        gp = f"groups[{i}]"
        space = g["space"]
        if space == "phi":
            if n_points is None:
                c.fail(f"{gp}.space", "references the base space but none is declared")
                continue
            degree = n_points
        elif space in variables:
            degree = len(dict.fromkeys(variables[space]["values"]))
        else:
            c.fail(f"{gp}.space", f"unresolved space reference {space!r}")
            continue
        for j, gen in enumerate(g["generators"]):
            if len(gen) != degree:
                c.fail(f"{gp}.generators[{j}]",
                       f"degree {len(gen)} does not match space size {degree}")

    for i, v in enumerate(doc.get("variables", [])):
        vp = f"variables[{i}]"
        gid = v.get("group")
        if gid is not None:
            if gid not in groups:
                c.fail(f"{vp}.group", f"unresolved group reference {gid!r}")
            elif groups[gid]["space"] != v["id"]:
                c.fail(f"{vp}.group",
                       f"group {gid!r} acts on {groups[gid]['space']!r}, "
                       f"not on this variable's values")
        eid = v.get("embedding")
        if eid is not None:
            if eid not in embeddings:
                c.fail(f"{vp}.embedding", f"unresolved embedding reference {eid!r}")
            else:
                labels = set(embeddings[eid]["mapping"])
                missing = [x for x in dict.fromkeys(v["values"]) if x not in labels]
                if missing:
                    c.fail(f"{vp}.embedding",
                           f"embedding {eid!r} has no numbers for {missing}")


# ------------------------------------------------------------- resolution


def _build_scenario(doc: dict) -> Scenario:
    phi_space = None
    family = None
    if "phi_space" in doc:
        phi_space = VariableSpace(doc["phi_space"]["id"],
                                  tuple(doc["phi_space"]["points"]))
    if "variables" in doc:
        members = tuple(
            TheoreticalVariable(
                v["id"], phi_space, tuple(v["values"]), v.get("accessible", True)
            )
            for v in doc["variables"]
        )
        family = VariableFamily(phi_space, members)

    groups: dict[str, GroupAction] = {}
    phi_group_id = None
    for g in doc.get("groups", []):
        if g["space"] == "phi":
            space = phi_space
            phi_group_id = g["id"]
        else:
            base = family.member(g["space"])
            space = VariableSpace(f"{g['space']}:values", base.value_set)
        groups[g["id"]] = GroupAction.from_generators(space, g["generators"])

    variable_groups = {}
    variable_embeddings = {}
    for v in doc.get("variables", []):
        if "group" in v:
            variable_groups[v["id"]] = v["group"]
        if "embedding" in v:
            variable_embeddings[v["id"]] = v["embedding"]

    embeddings = {
        e["id"]: NumericEmbedding(dict(e["mapping"]))
        for e in doc.get("embeddings", [])
    }

    return Scenario(
        name=doc["name"],
        description=doc.get("description", ""),
        version=doc["version"],
        phi_space=phi_space,
        family=family,
        groups=groups,
        phi_group_id=phi_group_id,
        variable_groups=variable_groups,
        variable_embeddings=variable_embeddings,
        embeddings=embeddings,
        states={s["id"]: s for s in doc.get("states", [])},
        likelihood_models=tuple(doc.get("likelihood_models", [])),
        experiments=tuple(doc.get("experiments", [])),
        checks=tuple(doc.get("checks") or ()),
        document=doc,
    )


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse, validate and resolve a YAML scenario document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError([("$", f"not valid YAML: {exc}")], source=source) from exc
    issues = validate_document(doc)
    if issues:
        raise ScenarioError(issues, source=source)
    scenario = _build_scenario(doc)
    for gid, action in scenario.groups.items():
        report = verify_group(action)
        if not report["is_group"]:
            raise ScenarioError(
                [(f"groups.{gid}", f"not a group: {'; '.join(report['failures'])}")],
                source=source,
            )
    return scenario


def load_scenario(path) -> Scenario:
    """Load and validate a scenario file from disk."""
    path = Path(path)
    return parse_scenario(path.read_text(encoding="utf-8"), source=str(path))


def to_document(scenario: Scenario) -> dict:
    return scenario.document


def serialize_scenario(scenario: Scenario) -> str:
    """Render a scenario back to YAML with section order preserved."""
    return yaml.safe_dump(scenario.document, sort_keys=False,
                          default_flow_style=None, width=100)


# ---------------------------------------------------------------- reports


def report_to_document(report: Report) -> dict:
    return {
        "report": {
            "scenario": report.scenario,
            "seed": report.seed,
            "version": report.version,
        },
        "results": [
            {
                "name": r.name,
                "status": r.status,
                "metrics": r.metrics,
                "witnesses": list(r.witnesses) if r.witnesses is not None else None,
                "message": r.message,
            }
            for r in report.results
        ],
        "summary": {**report.counts, "all_passed": report.all_passed},
    }


def serialize_report(report: Report, fmt: str = "machine") -> str:
    """Render a report; the machine format is canonical JSON, byte-stable."""
    if fmt == "machine":
        return json.dumps(report_to_document(report), sort_keys=True, indent=2) + "\n"
    if fmt != "human":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [f"scenario {report.scenario} (seed {report.seed})"]
    for r in report.results:
        lines.append(f"  {r.status.upper():<5} {r.name}")
        for key in sorted(r.metrics):
            lines.append(f"        {key} = {r.metrics[key]!r}")
        if r.witnesses:
            for w in r.witnesses:
                lines.append(f"        witness: {w}")
        if r.message:
            lines.append(f"        note: {r.message}")
    counts = report.counts
    lines.append(
        f"  {counts['pass']}/{counts['total']} passed, "
        f"{counts['fail']} failed, {counts['error']} errors"
    )
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Report:
    """Parse a machine-format report back into its dataclass form."""
    doc = json.loads(text)
    results = tuple(
        CheckResult(
            name=r["name"],
            status=r["status"],
            metrics=r["metrics"],
            witnesses=tuple(r["witnesses"]) if r["witnesses"] is not None else None,
            message=r["message"],
        )
        for r in doc["results"]
    )
    head = doc["report"]
    return Report(scenario=head["scenario"], seed=head["seed"],
                  results=results, version=head["version"])


# ----------------------------------------------------------------- corpus


def corpus_dir():
    return resources.files("varquant") / "scenarios"


def list_corpus() -> tuple[str, ...]:
    """Names of the bundled scenario files."""
    return tuple(sorted(
        entry.name[: -len(".yaml")]
        for entry in corpus_dir().iterdir()
        if entry.name.endswith(".yaml")
    ))


def load_corpus_scenario(name: str) -> Scenario:
    path = corpus_dir() / f"{name}.yaml"
    if not path.is_file():
        raise ScenarioError(
            [("$", f"no bundled scenario named {name!r}; "
                   f"available: {', '.join(list_corpus())}")]
        )
    return parse_scenario(path.read_text(encoding="utf-8"), source=str(path))
