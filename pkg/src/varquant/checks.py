"""The registry of named verifications that scenarios can request.

Each check re-derives one promised property from a scenario's declared
data and reports pass/fail with numeric metrics and, where useful,
witnesses. Checks are intrinsic: they verify invariants and theorems
against independent routes (brute-force recounts, enumeration oracles,
declared expectations carried by experiment blocks), never against
hidden state. Unknown check names are scenario validation errors.

Every check runs deterministically from the seed passed to
``run_checks``; randomized sweeps draw from a per-check generator.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import (
    DegenerateEffectError,
    ModelError,
    ReproducibilityError,
    SeedError,
)
from .experiments import (
    CHSHSetup,
    ContextGraph,
    MeasurementScenario,
    check_reproducibility,
    chsh_value,
    classical_chsh_bound,
    deterministic_strategy_values,
    intersubjectivity_joint,
    tsirelson_bound,
    validate_context,
)
from .groups import invariant_measure, is_invariant, measure_freedom, verify_group
from .hilbert import build_representation, coherent_family, verify_lemmas
from .operators import (
    build_operator,
    commutator_check,
    conjugate_by_relation,
    maximality_spectral_check,
    operator_from_basis,
    relation_from_conjugation,
    spectral_decomposition,
)
from .probability import (
    DensityOperator,
    Effect,
    LikelihoodModel,
    StateVector,
    born_matrix,
    coherence_fit,
    compose_independent,
    effect_family,
    evidence_equivalent,
    expectation,
)
from .relatedness import (
    RelationStatus,
    check_relation,
    find_relation,
    relation_witnesses,
)
from .scenario import (
    CheckResult,
    Report,
    Scenario,
    matrix_from_node,
    vector_from_node,
)
from .variables import (
    is_bijective_correspondence,
    is_function_of,
    is_maximal,
    maximal_members,
)

DIST_ATOL = 1e-10


# ------------------------------------------------------------ primitives


def _phi_action(scenario: Scenario):
    action = scenario.phi_action
    if action is None:
        raise ModelError("scenario declares no group on the base space")
    return action


def _family(scenario: Scenario):
    if scenario.family is None:
        raise ModelError("scenario declares no variables")
    return scenario.family


def _embedding(scenario: Scenario, variable_id: str):
    emb = scenario.embedding_for(variable_id)
    if emb is None:
        raise ModelError(f"no embedding declared for variable {variable_id!r}")
    return emb


def _blocks(scenario: Scenario, kind: str):
    blocks = scenario.experiments_of(kind)
    if not blocks:
        raise ModelError(f"scenario declares no {kind} experiments")
    return blocks


def _block_id(block, index: int) -> str:
    return block.get("id") or f"{block['type']}-{index}"


def _operator_node(node):
    if "matrix" in node:
        return spectral_decomposition(matrix_from_node(node["matrix"]))
    return operator_from_basis(
        [float(v) for v in node["eigenvalues"]], matrix_from_node(node["basis"])
    )


def _born_pairs(block):
    ops = {node["id"]: _operator_node(node) for node in block["operators"]}
    return [
        (pair["a"], pair["b"], ops[pair["a"]], ops[pair["b"]], pair.get("expect"))
        for pair in block["pairs"]
    ]


def _chsh_setup(scenario: Scenario, block) -> CHSHSetup:
    state = block["state"]
    if isinstance(state, str):
        node = scenario.states[state]
        if "vector" in node:
            rho = StateVector(vector_from_node(node["vector"])).density()
        else:
            rho = DensityOperator(matrix_from_node(node["matrix"]))
    else:
        rho = StateVector(vector_from_node(state)).density()
    alice = tuple(matrix_from_node(m) for m in block["alice"])
    bob = tuple(matrix_from_node(m) for m in block["bob"])
    return CHSHSetup(rho, alice, bob)


def _pointer_models(block):
    """All measurement models a pointer block describes (one per input)."""
    dims = tuple(block["dims"])
    unitary = matrix_from_node(block["unitary"])
    sys_obs = spectral_decomposition(matrix_from_node(block["system_observable"]))
    pointers = tuple(
        spectral_decomposition(matrix_from_node(m)) for m in block["pointers"]
    )
    initials = []
    if "initial" in block:
        initials.append(vector_from_node(block["initial"]))
    if "system" in block:
        meters = [vector_from_node(m) for m in block["meters"]]

        def joined(sys_vec):
            out = sys_vec
            for m in meters:
                out = np.kron(out, m)
            return out

        initials.append(joined(vector_from_node(block["system"])))
        if block.get("sweep_system_basis"):
            for i in range(dims[0]):
                basis_vec = np.zeros(dims[0], dtype=complex)
                basis_vec[i] = 1.0
                initials.append(joined(basis_vec))
    return [
        MeasurementScenario(dims, StateVector(v), unitary, sys_obs, pointers)
        for v in initials
    ]


def _random_orthonormal(rng, dim: int) -> np.ndarray:
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(raw)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_involution(rng) -> np.ndarray:
    n = rng.normal(size=3)
    n = n / np.linalg.norm(n)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    return n[0] * x + n[1] * y + n[2] * z


def _random_state(rng, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------- checks


def check_group_axioms(scenario: Scenario, rng) -> tuple:
    """Re-verify closure, identity, inverses, associativity on every table."""
    if not scenario.groups:
        raise ModelError("scenario declares no groups")
    ok = True
    metrics = {}
    witnesses = []
    for gid, action in scenario.groups.items():
        report = verify_group(action)
        ok = ok and report["is_group"]
        metrics[f"order.{gid}"] = report["order"]
        note = "group" if report["is_group"] else "; ".join(report["failures"])
        witnesses.append(f"{gid}: order {report['order']}, {note}")
    return ok, metrics, witnesses, ""


def check_action_orbit_structure(scenario: Scenario, rng) -> tuple:
    """Counting measure is invariant and its freedom equals the orbit count."""
    if not scenario.groups:
        raise ModelError("scenario declares no groups")
    ok = True
    metrics = {}
    for gid, action in scenario.groups.items():
        orbits = action.orbits()
        freedom = measure_freedom(action)
        measure = invariant_measure(action)
        agrees = (
            is_invariant(measure, action)
            and freedom == len(orbits)
            and (freedom == 1) == action.is_transitive()
        )
        ok = ok and agrees
        metrics[f"orbits.{gid}"] = len(orbits)
        metrics[f"measure_freedom.{gid}"] = freedom
    return ok, metrics, None, ""


def check_family_maximal_cover(scenario: Scenario, rng) -> tuple:
    """Every accessible variable is a function of a maximal accessible one."""
    family = _family(scenario)
    tops = maximal_members(family)
    uncovered = [
        m.id for m in family.accessible_members
        if not any(is_function_of(m, t) for t in tops)
    ]
    metrics = {
        "accessible": len(family.accessible_members),
        "maximal": len(tops),
        "uncovered": len(uncovered),
    }
    witnesses = [f"maximal: {t.id}" for t in tops]
    message = f"not covered: {', '.join(uncovered)}" if uncovered else ""
    return not uncovered, metrics, witnesses, message


def check_value_group_transitive(scenario: Scenario, rng) -> tuple:
    """Each variable's declared group moves its values in a single orbit."""
    if not scenario.variable_groups:
        raise ModelError("scenario attaches no groups to variables")
    ok = True
    metrics = {}
    for vid, gid in scenario.variable_groups.items():
        action = scenario.groups[gid]
        transitive = action.is_transitive()
        ok = ok and transitive
        metrics[f"orbits.{vid}"] = len(action.orbits())
        metrics[f"trivial_isotropy.{vid}"] = int(action.isotropy_trivial())
    return ok, metrics, None, ""


def check_representation_lemmas(scenario: Scenario, rng) -> tuple:
    """Permutation lift of each group is a faithful unitary homomorphism."""
    if not scenario.groups:
        raise ModelError("scenario declares no groups")
    ok = True
    metrics = {}
    for gid, action in scenario.groups.items():
        rep = build_representation(action, require_transitive=False)
        report = verify_lemmas(rep, tol=1e-12, seed=int(rng.integers(2 ** 31)))
        ok = ok and report.all_passed
        metrics[f"norm_error.{gid}"] = report.norm_error
        metrics[f"homomorphism_error.{gid}"] = report.homomorphism_error
        metrics[f"unitarity_error.{gid}"] = report.unitarity_error
        metrics[f"faithful.{gid}"] = int(report.faithful)
        metrics[f"identity_exact.{gid}"] = int(report.identity_exact)
    return ok, metrics, None, ""


def check_coherent_family_separates(scenario: Scenario, rng) -> tuple:
    """An injective seed's orbit separates elements; a constant seed cannot."""
    if not scenario.groups:
        raise ModelError("scenario declares no groups")
    ok = True
    metrics = {}
    for gid, action in scenario.groups.items():
        rep = build_representation(action, require_transitive=False)
        seed_vec = np.arange(rep.dim, dtype=complex)
        family = coherent_family(rep, seed_vec)
        distinct = len({tuple(np.round(v, 12)) for v in family})
        good = distinct == action.order
        if action.order > 1:
            try:
                coherent_family(rep, np.ones(rep.dim, dtype=complex))
                good = False
            except SeedError:
                pass
        ok = ok and good
        metrics[f"family_size.{gid}"] = distinct
    return ok, metrics, None, ""


def check_operator_construction_exact(scenario: Scenario, rng) -> tuple:
    """Accessible variables become diagonal operators with exact spectra.

    The base group must act transitively (checked by building its
    representation first); then each operator's diagonal, spectrum,
    multiplicities and resolution of identity are compared exactly.
    """
    family = _family(scenario)
    action = _phi_action(scenario)
    build_representation(action)
    ok = True
    checked = 0
    witnesses = []
    for var in family.accessible_members:
        emb = _embedding(scenario, var.id)
        op = build_operator(var, emb)
        checked += 1
        expected_spectrum = sorted(emb(v) for v in var.value_set)
        good = list(op.spectrum()) == expected_spectrum
        preimages = var.preimages()
        for value in var.value_set:
            proj = op.projector_for(emb(value))
            good = good and int(np.trace(proj).real) == len(preimages[value])
        good = good and np.array_equal(
            sum(op.projectors), np.eye(op.dim, dtype=complex)
        )
        diag = np.array([emb(v) for v in var.values], dtype=complex)
        good = good and np.array_equal(op.matrix, np.diag(diag))
        ok = ok and good
        witnesses.append(
            f"{var.id}: {len(op.eigenvalues)} eigenvalues, "
            f"multiplicities {op.multiplicities}"
        )
    return ok, {"variables": checked}, witnesses, ""


def check_operator_maximality_agreement(scenario: Scenario, rng) -> tuple:
    """Simple spectrum implies family maximality; equivalence when the
    family contains an injective accessible member."""
    family = _family(scenario)
    has_injective = any(
        len(m.value_set) == m.domain.size for m in family.accessible_members
    )
    ok = True
    witnesses = []
    for var in family.accessible_members:
        emb = _embedding(scenario, var.id)
        spectral = maximality_spectral_check(build_operator(var, emb))
        relational = is_maximal(var, family)
        if spectral and not relational:
            ok = False
        if has_injective and spectral != relational:
            ok = False
        witnesses.append(
            f"{var.id}: simple_spectrum={spectral} family_maximal={relational}"
        )
    metrics = {
        "variables": len(family.accessible_members),
        "has_injective_member": int(has_injective),
    }
    return ok, metrics, witnesses, ""


def check_relation_search_consistency(scenario: Scenario, rng) -> tuple:
    """Classify every ordered pair and re-verify each verdict directly."""
    family = _family(scenario)
    action = _phi_action(scenario)
    members = family.accessible_members
    if len(members) < 2:
        raise ModelError("relation search needs at least two accessible variables")
    ok = True
    counts = dict.fromkeys(RelationStatus, 0)
    witnesses = []
    for theta, eta in itertools.permutations(members, 2):
        res = find_relation(theta, eta, action)
        counts[res.status] += 1
        if res.status is RelationStatus.ONE_TO_ONE:
            good = is_bijective_correspondence(theta, eta)
            relabeled = eta.compose(eta.id, res.surrogate)
            good = good and check_relation(theta, relabeled, res.witness, action)
        elif res.status is RelationStatus.RELATED:
            direct = relation_witnesses(theta, eta, action)
            good = (
                check_relation(theta, eta, res.witness, action)
                and len(direct) == res.witness_count
                and direct[0].images == res.witness.images
            )
        elif res.status is RelationStatus.RELATED_VIA_SURROGATE:
            relabeled = eta.compose(eta.id, res.surrogate)
            good = (
                check_relation(theta, relabeled, res.witness, action)
                and not relation_witnesses(theta, eta, action)
            )
        else:
            good = not relation_witnesses(theta, eta, action)
        ok = ok and good
        label = f"{theta.id}->{eta.id}: {res.status.value}"
        if res.witness is not None:
            label += f" by {res.witness} ({res.witness_count} witnesses)"
        witnesses.append(label)
    metrics = {f"pairs.{status.value}": n for status, n in counts.items()}
    return ok, metrics, witnesses, ""


def check_conjugation_matches_relation(scenario: Scenario, rng) -> tuple:
    """Relation witnesses and operator conjugation find the same element.

    For every related pair, conjugating the first operator by the found
    witness must reproduce the second exactly, and the element recovered
    from operator conjugation alone must agree with the variable-level
    search. Unrelated pairs must yield no conjugating element.
    """
    family = _family(scenario)
    action = _phi_action(scenario)
    members = family.accessible_members
    if len(members) < 2:
        raise ModelError("conjugation check needs at least two accessible variables")
    ok = True
    pairs = 0
    agreements = 0
    witnesses = []
    for theta, eta in itertools.permutations(members, 2):
        res = find_relation(theta, eta, action)
        emb = _embedding(scenario, theta.id)
        op_theta = build_operator(theta, emb)
        pairs += 1
        if res.related:
            target = eta if res.status is RelationStatus.RELATED \
                else eta.compose(eta.id, res.surrogate)
            op_target = build_operator(target, emb)
            conjugate_by_relation(op_theta, op_target, res.witness, atol=1e-9)
            recovered = relation_from_conjugation(op_theta, op_target, action,
                                                  atol=1e-9)
            good = recovered is not None and recovered.images == res.witness.images
            if good:
                agreements += 1
                witnesses.append(f"{theta.id}->{eta.id}: {res.witness} both routes")
        else:
            good = True
            if set(eta.value_set) <= set(theta.value_set):
                op_eta = build_operator(eta, emb)
                good = relation_from_conjugation(op_theta, op_eta, action,
                                                 atol=1e-9) is None
            if good:
                agreements += 1
                witnesses.append(f"{theta.id}->{eta.id}: unrelated both routes")
        ok = ok and good
    return ok, {"pairs": pairs, "agreements": agreements}, witnesses, ""


def check_transition_doubly_stochastic(scenario: Scenario, rng) -> tuple:
    """Transition matrices have unit row and column sums.

    Declared operator pairs are checked first, then a seeded sweep of
    random orthonormal basis pairs in small dimensions.
    """
    blocks = _blocks(scenario, "born")
    worst = 0.0
    pairs = 0
    for block in blocks:
        for _, _, op_a, op_b, _ in _born_pairs(block):
            m = born_matrix(op_a, op_b)
            pairs += 1
            worst = max(
                worst,
                float(np.max(np.abs(m.sum(axis=0) - 1))),
                float(np.max(np.abs(m.sum(axis=1) - 1))),
                float(max(0.0, -m.min())),
            )
    for dim in range(2, 6):
        for _ in range(5):
            a = operator_from_basis(range(dim), _random_orthonormal(rng, dim))
            b = operator_from_basis(range(dim), _random_orthonormal(rng, dim))
            m = born_matrix(a, b)
            pairs += 1
            worst = max(
                worst,
                float(np.max(np.abs(m.sum(axis=0) - 1))),
                float(np.max(np.abs(m.sum(axis=1) - 1))),
            )
    metrics = {"pairs": pairs, "max_deviation": worst}
    return worst <= DIST_ATOL, metrics, None, ""


def check_outcome_eigenstate_consistency(scenario: Scenario, rng) -> tuple:
    """State-based expectations reduce to transition-probability averages."""
    blocks = _blocks(scenario, "born")
    worst = 0.0
    for block in blocks:
        for _, _, op_a, op_b, _ in _born_pairs(block):
            m = born_matrix(op_a, op_b)
            for k, proj in enumerate(op_a.projectors):
                rho = DensityOperator(proj)
                lhs = expectation(rho, op_b)
                rhs = float(sum(v * m[k, j] for j, v in enumerate(op_b.eigenvalues)))
                worst = max(worst, abs(lhs - rhs))
    return worst <= DIST_ATOL, {"max_deviation": worst}, None, ""


def check_complementary_noncommuting(scenario: Scenario, rng) -> tuple:
    """Declared pair expectations about commutators hold at tolerance."""
    blocks = _blocks(scenario, "born")
    ok = True
    n_zero = 0
    n_nonzero = 0
    min_nonzero = float("inf")
    max_zero = 0.0
    failing = []
    for block in blocks:
        for name_a, name_b, op_a, op_b, expect in _born_pairs(block):
            if expect is None:
                continue
            norm = commutator_check(op_a, op_b)["norm"]
            if expect == "noncommuting":
                n_nonzero += 1
                min_nonzero = min(min_nonzero, norm)
                good = (norm > 1e-6
                        and maximality_spectral_check(op_a)
                        and maximality_spectral_check(op_b))
            else:
                n_zero += 1
                max_zero = max(max_zero, norm)
                good = norm <= 1e-9
            if not good:
                failing.append(f"{name_a} vs {name_b}: commutator norm {norm:.6e}")
            ok = ok and good
    metrics = {"noncommuting_pairs": n_nonzero, "commuting_pairs": n_zero,
               "max_commuting_norm": max_zero}
    if n_nonzero:
        metrics["min_noncommuting_norm"] = min_nonzero
    return ok, metrics, failing or None, "; ".join(failing)


def check_effect_family_completeness(scenario: Scenario, rng) -> tuple:
    """Likelihood-kernel effects stay within [0, I] and sum to the identity."""
    if not scenario.likelihood_models:
        raise ModelError("scenario declares no likelihood models")
    worst = 0.0
    families = 0
    for node in scenario.likelihood_models:
        op = spectral_decomposition(matrix_from_node(node["operator"]["matrix"]))
        model = LikelihoodModel(tuple(node["kernel"]),
                                {z: list(row) for z, row in node["kernel"].items()})
        fam = effect_family(model, op)
        families += 1
        total = sum(e.matrix for e in fam.values())
        worst = max(worst, float(np.max(np.abs(total - np.eye(op.dim)))))
    metrics = {"families": families, "max_completeness_deviation": worst}
    return worst <= DIST_ATOL, metrics, None, ""


def check_proportional_likelihoods_equivalent(scenario: Scenario, rng) -> tuple:
    """Effects are positive multiples of each other exactly when their
    likelihood rows are; zero rows are rejected as evidence-free."""
    if not scenario.likelihood_models:
        raise ModelError("scenario declares no likelihood models")
    ok = True
    pairs = 0
    equivalent = 0
    for node in scenario.likelihood_models:
        op = spectral_decomposition(matrix_from_node(node["operator"]["matrix"]))
        model = LikelihoodModel(tuple(node["kernel"]),
                                {z: list(row) for z, row in node["kernel"].items()})
        fam = effect_family(model, op)
        rows = {z: np.array(model.kernel[z], dtype=float) for z in model.outcomes}
        for z1, z2 in itertools.combinations(model.outcomes, 2):
            pairs += 1
            r1, r2 = rows[z1], rows[z2]
            if not r1.any() or not r2.any():
                try:
                    evidence_equivalent(fam[z1], fam[z2])
                    ok = False
                except DegenerateEffectError:
                    pass
                continue
            scale = float(r1 @ r2) / float(r2 @ r2)
            proportional = scale > 0 and bool(np.max(np.abs(r1 - scale * r2)) <= 1e-12)
            same_evidence = evidence_equivalent(fam[z1], fam[z2])
            if same_evidence:
                equivalent += 1
            ok = ok and (same_evidence == proportional)
    metrics = {"pairs": pairs, "equivalent_pairs": equivalent}
    return ok, metrics, None, ""


def check_probability_coherence(scenario: Scenario, rng) -> tuple:
    """Outcome data fit a single state exactly when declared coherent.

    Blocks carrying a source state are round-tripped through the fit;
    blocks carrying raw probabilities are classified; optional sweeps fit
    random pure states through the block's effect set.
    """
    blocks = _blocks(scenario, "coherence")
    ok = True
    metrics = {}
    for i, block in enumerate(blocks):
        bid = _block_id(block, i)
        dim = block["dim"]
        effects = [Effect(matrix_from_node(m)) for m in block["effects"]]
        expect = block.get("expect_coherent", True)
        if "state" in block:
            rho = DensityOperator(matrix_from_node(block["state"]))
            probs = [e.probability(rho) for e in effects]
        else:
            rho = None
            probs = [float(x) for x in block["probabilities"]]
        fit = coherence_fit(effects, probs, dim)
        good = fit.coherent == expect
        if rho is not None and fit.coherent:
            recovery = float(np.linalg.norm(fit.matrix - rho.matrix))
            metrics[f"recovery_error.{bid}"] = recovery
            good = good and recovery <= 1e-8
        metrics[f"residual.{bid}"] = fit.residual
        metrics[f"min_eigenvalue.{bid}"] = fit.min_eigenvalue
        ok = ok and good
        for _ in range(int(block.get("sweep", 0))):
            vec = _random_state(rng, dim)
            source = DensityOperator(np.outer(vec, vec.conj()))
            sweep_probs = [e.probability(source) for e in effects]
            sweep_fit = coherence_fit(effects, sweep_probs, dim)
            ok = ok and sweep_fit.coherent and float(
                np.linalg.norm(sweep_fit.matrix - source.matrix)) <= 1e-8
    return ok, metrics, None, ""


def check_pointer_reproduces_system(scenario: Scenario, rng) -> tuple:
    """Every pointer's reading distribution matches the system's."""
    blocks = _blocks(scenario, "ozawa")
    ok = True
    metrics = {}
    for i, block in enumerate(blocks):
        bid = _block_id(block, i)
        expect = block.get("expect_reproducible", True)
        t = block.get("time", 1)
        worst = 0.0
        reproducible = True
        for model in _pointer_models(block):
            report = check_reproducibility(model, t)
            worst = max(worst, report["max_deviation"])
            reproducible = reproducible and report["reproducible"]
        metrics[f"max_deviation.{bid}"] = worst
        ok = ok and (reproducible == expect)
    return ok, metrics, None, ""


def check_observers_never_disagree(scenario: Scenario, rng) -> tuple:
    """Two pointers reading one system never show different values.

    Joint off-diagonal mass must vanish and the joint marginals must
    reproduce the system distribution; non-reproducible controls must be
    rejected before a joint distribution is formed.
    """
    blocks = _blocks(scenario, "ozawa")
    ok = True
    metrics = {}
    for i, block in enumerate(blocks):
        bid = _block_id(block, i)
        if len(block["pointers"]) < 2:
            continue
        expect = block.get("expect_reproducible", True)
        t = block.get("time", 1)
        worst_off = 0.0
        worst_marginal = 0.0
        for model in _pointer_models(block):
            if expect:
                joint = intersubjectivity_joint(model, t)
                worst_off = max(worst_off, joint["max_off_diagonal"])
                system = np.array(check_reproducibility(model, t)["system"])
                marg1 = joint["joint"].sum(axis=1)
                marg2 = joint["joint"].sum(axis=0)
                worst_marginal = max(
                    worst_marginal,
                    float(np.max(np.abs(marg1 - system))),
                    float(np.max(np.abs(marg2 - system))),
                )
                ok = ok and joint["agree"]
            else:
                try:
                    intersubjectivity_joint(model, t)
                    ok = False
                except ReproducibilityError:
                    pass
        if expect:
            metrics[f"max_off_diagonal.{bid}"] = worst_off
            metrics[f"max_marginal_deviation.{bid}"] = worst_marginal
            ok = ok and worst_marginal <= DIST_ATOL
    return ok, metrics, None, ""


def check_correlation_value(scenario: Scenario, rng) -> tuple:
    """The four-term correlation combination matches each block's declaration."""
    blocks = _blocks(scenario, "chsh")
    ok = True
    metrics = {}
    witnesses = []
    for i, block in enumerate(blocks):
        bid = _block_id(block, i)
        setup = _chsh_setup(scenario, block)
        value = chsh_value(setup)
        metrics[f"value.{bid}"] = value
        for a, b in itertools.product((1, 2), repeat=2):
            metrics[f"e{a}{b}.{bid}"] = setup.correlation(a, b)
        witnesses.append(f"{bid}: S = {value!r}")
        if "expected_value" in block:
            ok = ok and abs(value - float(block["expected_value"])) <= 1e-9
    return ok, metrics, witnesses, ""


def check_quantum_ceiling(scenario: Scenario, rng) -> tuple:
    """No setup, declared or randomly drawn, beats the quantum ceiling."""
    blocks = _blocks(scenario, "chsh")
    ceiling = tsirelson_bound() + 1e-9
    worst = 0.0
    for block in blocks:
        worst = max(worst, abs(chsh_value(_chsh_setup(scenario, block))))
    for _ in range(50):
        vec = _random_state(rng, 4)
        setup = CHSHSetup(
            DensityOperator(np.outer(vec, vec.conj())),
            (_random_involution(rng), _random_involution(rng)),
            (_random_involution(rng), _random_involution(rng)),
        )
        worst = max(worst, abs(chsh_value(setup)))
    return worst <= ceiling, {"max_abs_value": worst}, None, ""


def check_classical_ceiling(scenario: Scenario, rng) -> tuple:
    """Deterministic strategies reach exactly +-2; blocks beat it only
    when declared to."""
    blocks = _blocks(scenario, "chsh")
    values = deterministic_strategy_values()
    bound = classical_chsh_bound()
    ok = values == (-2.0, 2.0) and bound == 2.0
    metrics = {"classical_bound": bound, "strategy_values": len(values)}
    for i, block in enumerate(blocks):
        bid = _block_id(block, i)
        value = chsh_value(_chsh_setup(scenario, block))
        exceeds = abs(value) > bound + 1e-9
        metrics[f"exceeds_classical.{bid}"] = int(exceeds)
        if "expect_exceeds_classical" in block:
            ok = ok and exceeds == block["expect_exceeds_classical"]
    return ok, metrics, None, ""


def _clique_union_consistent(graph: ContextGraph) -> bool:
    # independent oracle: no forbidden triple <=> disjoint union of cliques
    adjacency = {n: set() for n in graph.nodes}
    for e in graph.edges:
        a, b = tuple(e)
        adjacency[a].add(b)
        adjacency[b].add(a)
    seen = set()
    for start in graph.nodes:
        if start in seen:
            continue
        component = set()
        stack = [start]
        while stack:
            node = stack.pop()
            if node in component:
                continue
            component.add(node)
            stack.extend(adjacency[node] - component)
        seen |= component
        for a, b in itertools.combinations(sorted(component), 2):
            if b not in adjacency[a]:
                return False
    return True


def check_forbidden_triples(scenario: Scenario, rng) -> tuple:
    """Triple detection agrees with the clique-union oracle and with each
    block's declared consistency."""
    blocks = _blocks(scenario, "context")
    ok = True
    metrics = {}
    witnesses = []
    for i, block in enumerate(blocks):
        bid = _block_id(block, i)
        graph = ContextGraph.from_pairs(block["nodes"], block.get("edges", []))
        violations = validate_context(graph)
        metrics[f"violations.{bid}"] = len(violations)
        ok = ok and (len(violations) == 0) == _clique_union_consistent(graph)
        if "expect_consistent" in block:
            ok = ok and (len(violations) == 0) == block["expect_consistent"]
        witnesses.extend(f"{bid}: {a},{b},{c}" for a, b, c in violations)
    return ok, metrics, witnesses or None, ""


def check_edge_toggle_locality(scenario: Scenario, rng) -> tuple:
    """New violations created by adding one edge all touch its endpoints."""
    blocks = _blocks(scenario, "context")
    ok = True
    toggles = 0
    for block in blocks:
        graph = ContextGraph.from_pairs(block["nodes"], block.get("edges", []))
        before = set(validate_context(graph))
        for a, b in itertools.combinations(graph.nodes, 2):
            if graph.has_edge(a, b):
                continue
            toggles += 1
            created = set(validate_context(graph.add_edge(a, b))) - before
            ok = ok and all({a, b} <= set(triple) for triple in created)
    return ok, {"toggles": toggles}, None, ""


def check_joint_amplitudes_multiply(scenario: Scenario, rng) -> tuple:
    """Composite amplitudes multiply, so composite probabilities do too."""
    blocks = _blocks(scenario, "composition")
    worst = 0.0
    for block in blocks:
        s1 = StateVector(vector_from_node(block["first"]))
        s2 = StateVector(vector_from_node(block["second"]))
        joint = compose_independent(s1, s2)
        outer = np.outer(s1.amplitudes, s2.amplitudes).reshape(-1)
        if not np.array_equal(joint.amplitudes, outer):
            return False, {"max_deviation": 1.0}, None, "tensor ordering broken"
        worst = max(worst, float(np.max(np.abs(
            np.abs(joint.amplitudes) ** 2
            - np.kron(np.abs(s1.amplitudes) ** 2, np.abs(s2.amplitudes) ** 2)
        ))))
    for _ in range(200):
        c1, c2 = (np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
                  for _ in range(2))
        worst = max(worst, abs(abs(c1 * c2) ** 2 - abs(c1) ** 2 * abs(c2) ** 2))
    return worst <= 1e-14, {"max_deviation": worst}, None, ""


CHECK_REGISTRY: dict = {
    "group-axioms": check_group_axioms,
    "action-orbit-structure": check_action_orbit_structure,
    "family-maximal-cover": check_family_maximal_cover,
    "value-group-transitive": check_value_group_transitive,
    "representation-lemmas": check_representation_lemmas,
    "coherent-family-separates": check_coherent_family_separates,
    "operator-construction-exact": check_operator_construction_exact,
    "operator-maximality-agreement": check_operator_maximality_agreement,
    "relation-search-consistency": check_relation_search_consistency,
    "conjugation-matches-relation": check_conjugation_matches_relation,
    "transition-doubly-stochastic": check_transition_doubly_stochastic,
    "outcome-eigenstate-consistency": check_outcome_eigenstate_consistency,
    "complementary-noncommuting": check_complementary_noncommuting,
    "effect-family-completeness": check_effect_family_completeness,
    "proportional-likelihoods-equivalent": check_proportional_likelihoods_equivalent,
    "probability-coherence": check_probability_coherence,
    "pointer-reproduces-system": check_pointer_reproduces_system,
    "observers-never-disagree": check_observers_never_disagree,
    "correlation-value": check_correlation_value,
    "quantum-ceiling": check_quantum_ceiling,
    "classical-ceiling-by-enumeration": check_classical_ceiling,
    "forbidden-triples": check_forbidden_triples,
    "edge-toggle-locality": check_edge_toggle_locality,
    "joint-amplitudes-multiply": check_joint_amplitudes_multiply,
}

# checks each experiment subcommand runs
EXPERIMENT_CHECKS = {
    "born": ("transition-doubly-stochastic", "outcome-eigenstate-consistency",
             "complementary-noncommuting"),
    "chsh": ("correlation-value", "quantum-ceiling",
             "classical-ceiling-by-enumeration"),
    "ozawa": ("pointer-reproduces-system", "observers-never-disagree"),
    "context": ("forbidden-triples", "edge-toggle-locality"),
}


def run_checks(scenario: Scenario, names=None, seed: int = 0) -> Report:
    """Run the scenario's checks (or an explicit list) and build a report.

    Results keep the requested order; each check failure or exception is
    captured in its own entry, never aborting the batch. Two runs with
    the same seed produce identical reports.
    """
    if names is None:
        names = scenario.checks
    registry_order = list(CHECK_REGISTRY)
    results = []
    for name in names:
        if name not in CHECK_REGISTRY:
            raise KeyError(f"unknown check {name!r}")
        rng = np.random.default_rng([seed, registry_order.index(name)])
        try:
            passed, metrics, witnesses, message = CHECK_REGISTRY[name](scenario, rng)
            results.append(CheckResult(
                name=name,
                status="pass" if passed else "fail",
                metrics={k: (float(v) if isinstance(v, float) else int(v))
                         for k, v in metrics.items()},
                witnesses=tuple(witnesses) if witnesses is not None else None,
                message=message,
            ))
        except Exception as exc:  # noqa: BLE001 - captured per entry by design
            results.append(CheckResult(
                name=name,
                status="error",
                metrics={},
                witnesses=None,
                message=f"{type(exc).__name__}: {exc}",
            ))
    return Report(scenario=scenario.name, seed=seed, results=tuple(results))
