import numpy as np
import pytest

from entwit.errors import ShapeError
from entwit.linalg import kron, random_unitary, singular_values
from entwit.separability import (
    average_concurrence_bound,
    hollowizing_unitary,
    negativity,
    overlap_matrix,
    overlap_spectrum_direct,
    ppt_check,
    pure_state_check,
    sample_detection,
    witness_test,
    wootters_concurrence,
)
from entwit.states import (
    bell_state,
    density_from_pure,
    ghz_state,
    pure_from_coeffs,
    random_mixed,
    random_product_pure,
    random_pure,
    random_separable_mixture,
    w_state,
    werner_2qubit,
)
from entwit.witnesses import (
    WitnessStructure,
    bipartite_basis,
    bipartite_basis_witness,
    compose_witness,
    random_bipartite_witness,
)

BASIS22 = bipartite_basis_witness([2, 2], 1, 2, 1, 2)


class TestOverlapMatrix:
    def test_pure_state_rank_one(self):
        rho = density_from_pure(bell_state())
        s = overlap_matrix(rho, BASIS22)
        sv = singular_values(s)
        assert np.isclose(sv[0], 1.0, atol=1e-10)
        assert np.all(sv[1:] < 1e-10)

    def test_maximally_mixed_proportional_to_witness(self):
        rho = density_from_pure(bell_state())
        mixed = random_mixed([2, 2], rng=np.random.default_rng(0))
        iso = type(mixed)([2, 2], np.eye(4) / 4)
        s = overlap_matrix(iso, BASIS22)
        assert np.allclose(s, BASIS22.matrix / 4, atol=1e-12)
        assert np.allclose(singular_values(s), [0.25] * 4, atol=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(1)
        rho = random_mixed([3, 3], rng=rng)
        op = random_bipartite_witness([3, 3], rng)
        s = overlap_matrix(rho, op)
        assert np.linalg.norm(s - s.T) < 1e-12

    def test_dimension_mismatch(self):
        rho = random_mixed([2, 2], rng=np.random.default_rng(2))
        op = random_bipartite_witness([3, 3], np.random.default_rng(2))
        with pytest.raises(ShapeError):
            overlap_matrix(rho, op)


class TestWitnessTest:
    def test_bell_violates(self):
        res = witness_test(density_from_pure(bell_state()), BASIS22)
        assert res.violated
        assert np.isclose(res.margin, 1.0, atol=1e-9)
        assert np.allclose(res.singular_values, [1, 0, 0, 0], atol=1e-9)

    def test_maximally_mixed_inconclusive(self):
        from entwit.states import DensityMatrix

        rho = DensityMatrix([2, 2], np.eye(4) / 4)
        res = witness_test(rho, BASIS22)
        assert not res.violated
        assert res.margin < 0
        assert np.isclose(res.margin, 0.25 - 0.75, atol=1e-12)

    def test_product_pure_not_violated(self):
        psi = pure_from_coeffs([2, 2], [0, 1, 0, 0])
        res = witness_test(density_from_pure(psi), BASIS22)
        assert not res.violated
        assert res.singular_values[0] < 1e-10

    def test_scale_invariance_of_verdict(self):
        rng = np.random.default_rng(3)
        rho = random_mixed([2, 2], rng=rng)
        res1 = witness_test(rho, BASIS22.matrix)
        for c in (0.1, 7.3, -2.0, 1.0j):
            res2 = witness_test(rho, c * BASIS22.matrix)
            assert res2.violated == res1.violated
            assert np.isclose(res2.margin, abs(c) * res1.margin, atol=1e-10)

    def test_local_unitary_covariance(self):
        rng = np.random.default_rng(4)
        rho = random_mixed([2, 3], rng=rng)
        op = random_bipartite_witness([2, 3], rng)
        u = kron(random_unitary(2, rng), random_unitary(3, rng))
        from entwit.states import DensityMatrix

        rotated = DensityMatrix([2, 3], u @ rho.matrix @ u.conj().T)
        lhs = witness_test(rotated, op).singular_values
        rhs = witness_test(rho, u.T @ op.matrix @ u).singular_values
        assert np.allclose(lhs, rhs, atol=1e-9)


class TestSpectrumRoutes:
    def test_agreement_random(self):
        rng = np.random.default_rng(5)
        for dims in ([2, 2], [3, 3], [2, 4], [4, 4]):
            for _ in range(10):
                rho = random_mixed(dims, rng=rng)
                op = random_bipartite_witness(dims, rng)
                a = witness_test(rho, op).singular_values
                b = overlap_spectrum_direct(rho, op)
                assert np.allclose(a, b, atol=1e-8)

    def test_bell_direct(self):
        sv = overlap_spectrum_direct(density_from_pure(bell_state()), BASIS22)
        assert np.allclose(sv, [1, 0, 0, 0], atol=1e-9)

    def test_maximally_mixed_all_equal(self):
        from entwit.states import DensityMatrix

        rho = DensityMatrix([2, 2], np.eye(4) / 4)
        op = random_bipartite_witness([2, 2], np.random.default_rng(6))
        sv = overlap_spectrum_direct(rho, op)
        assert np.allclose(sv, sv[0], atol=1e-10)


class TestSampleDetection:
    def test_bell_first_trial(self):
        report = sample_detection(
            density_from_pure(bell_state()), trials=1, master_seed=0
        )
        assert report.verdict == "Entangled"
        assert report.first_violation_trial == 1

    def test_separable_soundness_small(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            rho = random_separable_mixture([3, 3], terms=3, rng=rng)
            report = sample_detection(rho, trials=50, master_seed=11)
            assert report.verdict == "Inconclusive"
            assert report.violations == 0

    def test_deterministic_across_workers(self):
        rng = np.random.default_rng(8)
        rho = random_mixed([3, 3], rank=2, rng=rng)
        reports = [
            sample_detection(rho, trials=40, master_seed=5, workers=w, full_stats=True)
            for w in (1, 2, 4)
        ]
        assert reports[0] == reports[1] == reports[2]

    def test_early_exit_matches_full_stats_prefix(self):
        rng = np.random.default_rng(9)
        rho = random_mixed([2, 2], rank=1, rng=rng)
        early = sample_detection(rho, trials=30, master_seed=3)
        full = sample_detection(rho, trials=30, master_seed=3, full_stats=True)
        assert early.first_violation_trial == full.first_violation_trial
        assert early.verdict == full.verdict

    def test_multipartite_cut_cycling(self):
        psi = ghz_state(3, 2)
        report = sample_detection(
            density_from_pure(psi), trials=6, master_seed=1, full_stats=True
        )
        assert report.verdict == "Entangled"

    def test_structure_mismatch(self):
        rho = random_mixed([2, 2], rng=np.random.default_rng(10))
        with pytest.raises(ShapeError):
            sample_detection(rho, 5, 0, structure=WitnessStructure([3, 3]))


class TestPureStateCheck:
    def test_product_four_qubits(self):
        psi = pure_from_coeffs([2, 2, 2, 2], np.eye(16)[3])  # |0011>
        res = pure_state_check(psi)
        assert res.verdict == "Separable"
        assert res.max_overlap < 1e-12

    def test_ghz3_entangled(self):
        res = pure_state_check(ghz_state(3, 2))
        assert res.verdict == "Entangled"
        assert res.max_overlap > res.threshold

    def test_agrees_with_wootters_two_qubits(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            psi = random_pure([2, 2], rng)
            res = pure_state_check(psi)
            conc = wootters_concurrence(density_from_pure(psi))
            assert (res.verdict == "Entangled") == (conc > 1e-10)

    def test_w_state_entangled(self):
        assert pure_state_check(w_state(4)).verdict == "Entangled"


class TestHollowization:
    def test_equal_pair(self):
        # known closed form: (1/sqrt2)[[1,1],[i,-i]] maps diag(1,1) to [[0,1],[1,0]]
        u = np.array([[1, 1], [1j, -1j]]) / np.sqrt(2)
        out = u.T @ np.diag([1.0, 1.0]) @ u
        assert np.allclose(out, [[0, 1], [1, 0]], atol=1e-12)
        cert = hollowizing_unitary(np.diag([1.0, 1.0]))
        assert cert.converged
        assert cert.max_abs_diagonal < 1e-6

    def test_infeasible_reports_floor(self):
        cert = hollowizing_unitary(np.diag([2.0, 0.5, 0.5]))
        assert not cert.converged
        floor = (2.0 - 1.0) / 3
        assert cert.max_abs_diagonal >= floor - 1e-9

    def test_already_hollow(self):
        s = np.array([[0, 1, 2], [1, 0, 0.5], [2, 0.5, 0]], dtype=complex)
        cert = hollowizing_unitary(s)
        assert cert.converged
        assert cert.iterations == 0
        assert np.array_equal(cert.unitary, np.eye(3))

    def test_unitarity_of_certificate(self):
        rng = np.random.default_rng(12)
        lam = np.array([1.0, 0.8, 0.5, 0.4])
        v = random_unitary(4, rng)
        s = v @ np.diag(lam) @ v.T
        cert = hollowizing_unitary(s)
        m = cert.unitary
        assert np.linalg.norm(m.conj().T @ m - np.eye(4)) < 1e-10
        assert cert.converged
        final = m.T @ s @ m
        assert np.max(np.abs(np.diag(final))) < 1e-6

    def test_separable_state_witness_hollowizable(self):
        rng = np.random.default_rng(13)
        rho = random_separable_mixture([2, 2], terms=4, rng=rng)
        op = random_bipartite_witness([2, 2], rng)
        s = overlap_matrix(rho, op)
        res = witness_test(rho, op)
        assert not res.violated
        cert = hollowizing_unitary(s)
        assert cert.converged

    def test_bell_witness_not_hollowizable(self):
        s = overlap_matrix(density_from_pure(bell_state()), BASIS22)
        cert = hollowizing_unitary(s)
        assert not cert.converged
        assert cert.max_abs_diagonal > 0.2  # rank-1, floor 1/4

    def test_padding(self):
        rng = np.random.default_rng(14)
        v = random_unitary(3, rng)
        lam = np.array([0.9, 0.8, 0.4])  # strict interior: infeasible at side 3
        s = v @ np.diag(lam) @ v.T
        assert not hollowizing_unitary(s).converged
        assert hollowizing_unitary(s, pad_to=4).converged


class TestAverageConcurrenceBound:
    def test_separable_is_zero(self):
        rng = np.random.default_rng(15)
        rho = random_separable_mixture([2, 2], terms=4, rng=rng)
        op = compose_witness([BASIS22], [1.0])
        assert average_concurrence_bound(rho, op) == 0.0

    def test_bell_with_unit_coefficient(self):
        rho = density_from_pure(bell_state())
        op = compose_witness([BASIS22], [1.0])
        assert np.isclose(average_concurrence_bound(rho, op), 1.0, atol=1e-9)

    def test_werner_matches_wootters(self):
        op = compose_witness([BASIS22], [1.0])
        for p in (0.5, 0.7, 0.9):
            rho = werner_2qubit(p)
            bound = average_concurrence_bound(rho, op)
            assert np.isclose(bound, max(0.0, (3 * p - 1) / 2), atol=1e-9)

    def test_requires_provenance(self):
        with pytest.raises(ValueError):
            average_concurrence_bound(density_from_pure(bell_state()), BASIS22)


class TestOracles:
    def test_ppt_bell(self):
        verdict, min_eig = ppt_check(density_from_pure(bell_state()))
        assert verdict == "NPT"
        assert np.isclose(min_eig, -0.5, atol=1e-10)

    def test_ppt_product(self):
        rng = np.random.default_rng(16)
        psi = random_product_pure([2, 2], rng)
        verdict, _ = ppt_check(density_from_pure(psi))
        assert verdict == "PPT"

    def test_werner_threshold(self):
        for p in (0.0, 0.2, 1 / 3):
            assert ppt_check(werner_2qubit(p))[0] == "PPT"
        for p in (0.34, 0.5, 1.0):
            assert ppt_check(werner_2qubit(p))[0] == "NPT"

    def test_werner_pt_min_eig_closed_form(self):
        for p in (0.1, 0.4, 0.8):
            _, min_eig = ppt_check(werner_2qubit(p))
            assert np.isclose(min_eig, (1 - 3 * p) / 4, atol=1e-10)

    def test_wootters_bell(self):
        assert np.isclose(wootters_concurrence(density_from_pure(bell_state())), 1.0)

    def test_wootters_werner(self):
        assert np.isclose(wootters_concurrence(werner_2qubit(0.5)), 0.25, atol=1e-10)
        assert wootters_concurrence(werner_2qubit(0.2)) == 0.0

    def test_wootters_separable_mixture(self):
        rng = np.random.default_rng(17)
        for _ in range(5):
            rho = random_separable_mixture([2, 2], terms=4, rng=rng)
            assert wootters_concurrence(rho) < 1e-10

    def test_negativity_bell(self):
        assert np.isclose(negativity(density_from_pure(bell_state())), 0.5, atol=1e-10)

    def test_wrong_dims(self):
        rho = random_mixed([3, 3], rng=np.random.default_rng(18))
        with pytest.raises(ValueError):
            wootters_concurrence(rho)
        rho3 = random_mixed([2, 2, 2], rng=np.random.default_rng(18))
        with pytest.raises(ValueError):
            ppt_check(rho3)


class TestTwoQubitEquivalence:
    def test_margin_sign_matches_wootters(self):
        rng = np.random.default_rng(19)
        for _ in range(50):
            rho = random_mixed([2, 2], rng=rng)
            res = witness_test(rho, BASIS22)
            conc = wootters_concurrence(rho)
            assert res.violated == (conc > 1e-10)
            if conc > 1e-6:
                assert np.isclose(res.margin, conc, atol=1e-8)
