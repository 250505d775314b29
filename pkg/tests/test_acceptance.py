"""End-to-end acceptance suite.

Each test here verifies one headline property of the toolkit at its
stated numeric tolerance and runtime budget, mostly against the bundled
scenario corpus. One summary line per criterion is printed at the end of
the pytest run (see conftest.py).
"""

import itertools
import time

import numpy as np
import pytest

from varquant import (
    CHSHSetup,
    ContextGraph,
    DensityOperator,
    Effect,
    LikelihoodModel,
    RegularRepresentation,
    SeedError,
    StateVector,
    TheoreticalVariable,
    VariableSpace,
    born_conditional,
    born_matrix,
    build_operator,
    build_representation,
    check_reproducibility,
    chsh_value,
    classical_chsh_bound,
    coherence_fit,
    coherent_family,
    commutator_check,
    conjugate_by_relation,
    deterministic_strategy_values,
    effect_family,
    evidence_equivalent,
    expectation,
    find_relation,
    intersubjectivity_joint,
    list_corpus,
    load_corpus_scenario,
    maximality_spectral_check,
    operator_from_basis,
    parse_scenario,
    relation_from_conjugation,
    run_checks,
    serialize_report,
    serialize_scenario,
    singlet_setup,
    tsirelson_bound,
    validate_context,
    verify_lemmas,
)
from varquant.checks import _born_pairs, _operator_node, _pointer_models


def all_corpus_scenarios():
    return [load_corpus_scenario(name) for name in list_corpus()]


def random_unit(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_orthonormal(rng, dim):
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(raw)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_involution(rng):
    n = rng.normal(size=3)
    n = n / np.linalg.norm(n)
    return np.array([[n[2], n[0] - 1j * n[1]],
                     [n[0] + 1j * n[1], -n[2]]], dtype=complex)


@pytest.mark.acceptance(num=1, label="representation lemmas at 1e-12, negative controls fail")
def test_criterion_1_representation_lemmas():
    start = time.perf_counter()
    groups_checked = 0
    for scenario in all_corpus_scenarios():
        for gid, action in scenario.groups.items():
            if action.order > 24:
                continue
            rep = build_representation(action, require_transitive=False)
            report = verify_lemmas(rep, tol=1e-12)
            assert report.all_passed, f"{scenario.name}/{gid}: {report.as_dict()}"
            assert report.norm_error <= 1e-12
            assert report.homomorphism_error <= 1e-12
            assert report.unitarity_error <= 1e-12
            assert report.identity_exact
            groups_checked += 1
    assert groups_checked >= 10

    # negative control: one corrupted matrix entry must break the suite
    action = load_corpus_scenario("scenario-rep-z4").phi_action
    rep = build_representation(action)
    bad = [m.copy() for m in rep.matrices]
    bad[1][0, 0] += 1e-6
    corrupted = RegularRepresentation(action, rep.function_space, tuple(bad))
    assert not verify_lemmas(corrupted, tol=1e-12).all_passed

    # negative control: a seed function that is not injective on points
    with pytest.raises(SeedError):
        coherent_family(rep, np.ones(rep.dim, dtype=complex))

    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(num=2, label="operator spectra, multiplicities and identity exact")
def test_criterion_2_operator_construction():
    start = time.perf_counter()
    variables_checked = 0
    for scenario in all_corpus_scenarios():
        if scenario.family is None:
            continue
        for var in scenario.family.accessible_members:
            embedding = scenario.embedding_for(var.id)
            assert embedding is not None, f"{scenario.name}/{var.id} has no embedding"
            op = build_operator(var, embedding)
            embedded = [embedding(v) for v in var.value_set]
            assert sorted(op.eigenvalues) == sorted(embedded)
            for value in var.value_set:
                projector = op.projector_for(embedding(value))
                assert np.trace(projector).real == len(var.preimages()[value])
            total = np.zeros((op.dim, op.dim), dtype=complex)
            for p in op.projectors:
                total = total + p
            assert np.array_equal(total, np.eye(op.dim, dtype=complex))
            diag = np.diag([embedding(v) for v in var.values]).astype(complex)
            assert np.array_equal(op.matrix, diag)
            variables_checked += 1
    assert variables_checked >= 12
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(num=3, label="relation witness and conjugation agree on the four-point scenario")
def test_criterion_3_round_trip():
    start = time.perf_counter()
    scenario = load_corpus_scenario("scenario-a")
    action = scenario.phi_action
    assert action.order == 24
    members = {v.id: v for v in scenario.family.members}
    parity, half = members["parity"], members["half"]

    result = find_relation(parity, half, action)
    assert result.related
    k = result.witness
    assert k is not None

    op_parity = build_operator(parity, scenario.embedding_for("parity"))
    op_half = build_operator(half, scenario.embedding_for("half"))
    errors = conjugate_by_relation(op_parity, op_half, k, atol=1e-9)
    assert errors["matrix_error"] <= 1e-9
    assert errors["projector_error"] <= 1e-9

    # the witness carries each preimage block onto the same-valued block
    parity_blocks = {v: set(b) for v, b in parity.preimages().items()}
    for value, block in half.preimages().items():
        assert {k(i) for i in block} == parity_blocks[value]

    recovered = relation_from_conjugation(op_parity, op_half, action)
    assert recovered is not None
    assert recovered.images == k.images
    assert time.perf_counter() - start < 5.0


@pytest.mark.acceptance(num=4, label="complementary pairs fail to commute, equivalent pairs commute")
def test_criterion_4_commutators():
    start = time.perf_counter()
    scenario = load_corpus_scenario("scenario-noncommutation")
    noncommuting = 0
    dims = set()
    for block in scenario.experiments_of("born"):
        for _, _, op_a, op_b, expect in _born_pairs(block):
            norm = commutator_check(op_a, op_b)["norm"]
            if expect == "noncommuting":
                assert maximality_spectral_check(op_a)
                assert maximality_spectral_check(op_b)
                assert norm > 1e-6
                noncommuting += 1
                dims.add(op_a.dim)
            else:
                assert expect == "commuting"
                assert norm <= 1e-9
    assert noncommuting >= 10
    assert dims == {2, 3, 4, 5, 6}
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(num=5, label="transition tables doubly stochastic; expectation reduces to the table")
def test_criterion_5_born_suite():
    start = time.perf_counter()
    z = operator_from_basis((1.0, -1.0), np.eye(2))
    x = operator_from_basis(
        (1.0, -1.0), np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2))
    table = born_matrix(z, x)
    assert np.max(np.abs(table - 0.5)) <= 1e-12
    assert abs(born_conditional(z, 1.0, x, -1.0) - 0.5) <= 1e-12

    rng = np.random.default_rng(2024)
    for i in range(1000):
        dim = 2 + (i % 7)
        op_a = operator_from_basis(range(dim), random_orthonormal(rng, dim))
        op_b = operator_from_basis(
            np.linspace(-1.0, 1.0, dim), random_orthonormal(rng, dim))
        table = born_matrix(op_a, op_b)
        assert np.min(table) >= -1e-10
        assert np.max(np.abs(table.sum(axis=0) - 1.0)) <= 1e-10
        assert np.max(np.abs(table.sum(axis=1) - 1.0)) <= 1e-10
        if i % 25 == 0:
            for k in range(dim):
                rho = DensityOperator(op_a.projectors[k])
                averaged = float(np.dot(table[k], op_b.eigenvalues))
                assert abs(expectation(rho, op_b) - averaged) <= 1e-10
    assert time.perf_counter() - start < 10.0


@pytest.mark.acceptance(num=6, label="effect families complete; proportional kernels evidence-equivalent")
def test_criterion_6_effect_families():
    start = time.perf_counter()
    families_checked = 0
    for scenario in all_corpus_scenarios():
        for node in scenario.likelihood_models:
            op = _operator_node(node["operator"])
            model = LikelihoodModel(tuple(node["kernel"]), dict(node["kernel"]))
            family = effect_family(model, op)
            total = np.zeros((op.dim, op.dim), dtype=complex)
            for eff in family.values():
                eigs = np.linalg.eigvalsh(eff.matrix)
                assert eigs[0] >= -1e-10
                assert eigs[-1] <= 1.0 + 1e-10
                total = total + eff.matrix
            assert np.max(np.abs(total - np.eye(op.dim))) <= 1e-10
            families_checked += 1

            rows = {z: np.array(model.kernel[z], dtype=float)
                    for z in model.outcomes}
            for z1, z2 in itertools.combinations(model.outcomes, 2):
                r1, r2 = rows[z1], rows[z2]
                if not r1.any() or not r2.any():
                    with pytest.raises(Exception):
                        evidence_equivalent(family[z1], family[z2])
                    continue
                scale = float(r1 @ r2) / float(r2 @ r2)
                proportional = scale > 0 and np.allclose(r1, scale * r2, atol=1e-12)
                assert evidence_equivalent(family[z1], family[z2]) == proportional
    assert families_checked >= 3
    assert time.perf_counter() - start < 1.0


def qubit_projector_effects():
    bases = [np.eye(2),
             np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2),
             np.array([[1.0, 1.0], [1.0j, -1.0j]]) / np.sqrt(2)]
    return [Effect(np.outer(b[:, j], b[:, j].conj()) / 3)
            for b in bases for j in range(2)]


def qutrit_projector_effects():
    omega = np.exp(2j * np.pi / 3)
    bases = [np.eye(3, dtype=complex)]
    for a in range(3):
        basis = np.empty((3, 3), dtype=complex)
        for j in range(3):
            for k in range(3):
                basis[k, j] = omega ** ((a * k * k + j * k) % 3) / np.sqrt(3)
        bases.append(basis)
    effects = [Effect(np.outer(b[:, j], b[:, j].conj()) / 4)
               for b in bases for j in range(3)]
    # self-check: mutually unbiased and informationally complete
    for b1, b2 in itertools.combinations(bases, 2):
        overlaps = np.abs(b1.conj().T @ b2) ** 2
        assert np.max(np.abs(overlaps - 1.0 / 3.0)) < 1e-12
    gram = np.array([[np.trace(e.matrix @ f.matrix).real for f in effects]
                     for e in effects])
    assert np.linalg.matrix_rank(gram, tol=1e-9) == 9
    return effects


def ginibre_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


@pytest.mark.acceptance(num=7, label="state reconstruction within 1e-8; incoherent data flagged")
def test_criterion_7_coherence_fit():
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    for effects, dim in ((qubit_projector_effects(), 2),
                         (qutrit_projector_effects(), 3)):
        for _ in range(100):
            rho = ginibre_density(rng, dim)
            probs = [f.probability(rho) for f in effects]
            fit = coherence_fit(effects, probs, dim=dim)
            assert fit.coherent
            assert np.linalg.norm(fit.matrix - rho.matrix) <= 1e-8
            assert fit.state is not None

    effects = qubit_projector_effects()
    incoherent = [p / 3 for p in (0.9, 0.3, 0.5, 0.5, 0.5, 0.5)]
    fit = coherence_fit(effects, incoherent, dim=2)
    assert not fit.coherent
    assert fit.residual > 1e-6
    assert time.perf_counter() - start < 10.0


@pytest.mark.acceptance(num=8, label="pointer sweep reproducible with diagonal joint; control fails")
def test_criterion_8_pointer_suite():
    start = time.perf_counter()
    scenario = load_corpus_scenario("scenario-pointer")
    (block,) = scenario.experiments_of("ozawa")
    models = _pointer_models(block)
    assert len(models) >= 3  # declared input plus the full system basis
    for model in models:
        report = check_reproducibility(model)
        assert report["reproducible"], report
        joint = intersubjectivity_joint(model)
        assert joint["max_off_diagonal"] <= 1e-12
        assert joint["agree"]

    control = load_corpus_scenario("scenario-pointer-decoupled")
    (block,) = control.experiments_of("ozawa")
    for model in _pointer_models(block):
        assert not check_reproducibility(model)["reproducible"]
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(num=9, label="correlation combination reaches 2*sqrt(2); bounds respected")
def test_criterion_9_chsh_suite():
    start = time.perf_counter()
    setup = singlet_setup(np.pi / 2, 0.0, np.pi / 4, 3 * np.pi / 4)
    assert abs(chsh_value(setup) - 2.0 * np.sqrt(2.0)) <= 1e-9

    assert deterministic_strategy_values() == (-2.0, 2.0)
    assert classical_chsh_bound() == 2.0

    rng = np.random.default_rng(99)
    ceiling = tsirelson_bound()
    for _ in range(1000):
        settings = ((random_involution(rng), random_involution(rng)),
                    (random_involution(rng), random_involution(rng)))
        product = StateVector(np.kron(random_unit(rng, 2), random_unit(rng, 2)))
        s_product = chsh_value(CHSHSetup(product.density(), *settings))
        assert abs(s_product) <= 2.0 + 1e-9
        entangled = StateVector(random_unit(rng, 4))
        s_quantum = chsh_value(CHSHSetup(entangled.density(), *settings))
        assert abs(s_quantum) <= ceiling + 1e-9
    assert time.perf_counter() - start < 30.0


@pytest.mark.acceptance(num=10, label="forbidden triples found exhaustively; edge toggles act locally")
def test_criterion_10_context_graphs():
    start = time.perf_counter()
    graphs_checked = 0
    for n in range(1, 6):
        nodes = tuple(f"v{i}" for i in range(n))
        pairs = list(itertools.combinations(nodes, 2))
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            edges = [p for p, bit in zip(pairs, bits) if bit]
            graph = ContextGraph.from_pairs(nodes, edges)
            found = set(validate_context(graph))
            # independent recount: exactly the triples with two of three edges
            expected = set()
            for triple in itertools.combinations(nodes, 3):
                a, b, c = triple
                count = sum((graph.has_edge(a, b), graph.has_edge(a, c),
                             graph.has_edge(b, c)))
                if count == 2:
                    expected.add(triple)
            assert found == expected
            graphs_checked += 1

            # toggling one absent edge changes only triples through it
            for a, b in pairs:
                if graph.has_edge(a, b):
                    continue
                closed = graph.add_edge(a, b)
                after = set(validate_context(closed))
                for triple in found ^ after:
                    assert a in triple and b in triple
            # adding the missing edge of a violating triple resolves it
            for a, b, c in found:
                triple_pairs = [(a, b), (a, c), (b, c)]
                missing = next(p for p in triple_pairs if not graph.has_edge(*p))
                assert (a, b, c) not in validate_context(graph.add_edge(*missing))
    assert graphs_checked == 1 + 2 + 8 + 64 + 1024
    assert time.perf_counter() - start < 5.0


@pytest.mark.acceptance(num=11, label="joint amplitude magnitudes multiply within 1e-14")
def test_criterion_11_amplitude_products():
    start = time.perf_counter()
    rng = np.random.default_rng(11)
    r1 = np.sqrt(rng.uniform(size=10_000))
    r2 = np.sqrt(rng.uniform(size=10_000))
    c1 = r1 * np.exp(1j * rng.uniform(0, 2 * np.pi, size=10_000))
    c2 = r2 * np.exp(1j * rng.uniform(0, 2 * np.pi, size=10_000))
    deviation = np.abs(np.abs(c1 * c2) ** 2 - np.abs(c1) ** 2 * np.abs(c2) ** 2)
    assert float(np.max(deviation)) <= 1e-14
    assert time.perf_counter() - start < 1.0


@pytest.mark.acceptance(num=12, label="corpus round trips byte-identically; reports deterministic")
def test_criterion_12_scenario_io():
    start = time.perf_counter()
    names = list_corpus()
    assert len(names) >= 12
    for name in names:
        scenario = load_corpus_scenario(name)
        text = serialize_scenario(scenario)
        again = parse_scenario(text, source=name)
        assert again.document == scenario.document
        assert serialize_scenario(again) == text

    for name in ("scenario-rep-z4", "scenario-relabel"):
        scenario = load_corpus_scenario(name)
        first = serialize_report(run_checks(scenario, seed=0))
        second = serialize_report(run_checks(scenario, seed=0))
        assert first == second
    assert time.perf_counter() - start < 1.0
