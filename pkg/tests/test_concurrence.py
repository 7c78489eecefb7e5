import numpy as np
import pytest

from entwit.concurrence import (
    bipartite_concurrence_purity,
    bipartite_concurrence_witness_sum,
    cut_concurrence,
    multipartite_concurrence,
    multipartite_concurrence_purity,
    multipartite_concurrence_witness_sum,
)
from entwit.linalg import random_unitary
from entwit.states import (
    apply_local_unitary,
    bell_state,
    ghz_state,
    pure_from_coeffs,
    random_product_pure,
    random_pure,
    w_state,
)


class TestBipartite:
    def test_bell_is_one(self):
        assert np.isclose(bipartite_concurrence_witness_sum(bell_state()), 1.0)
        assert np.isclose(bipartite_concurrence_purity(bell_state()), 1.0)

    def test_product_is_zero(self):
        psi = pure_from_coeffs([2, 2], [1, 0, 0, 0])
        assert bipartite_concurrence_witness_sum(psi) < 1e-10
        assert bipartite_concurrence_purity(psi) < 1e-10

    def test_maximally_entangled_qutrits(self):
        psi = ghz_state(2, 3)
        expected = np.sqrt(2 * (1 - 1 / 3))
        assert np.isclose(bipartite_concurrence_witness_sum(psi), expected, atol=1e-9)
        assert np.isclose(expected, 1.154700, atol=1e-6)

    def test_routes_agree_on_random_states(self):
        rng = np.random.default_rng(0)
        for dims in ([2, 2], [2, 3], [3, 3], [3, 4]):
            for _ in range(25):
                psi = random_pure(dims, rng)
                a = bipartite_concurrence_witness_sum(psi)
                b = bipartite_concurrence_purity(psi)
                assert abs(a - b) < 1e-9

    def test_non_bipartite_rejected(self):
        with pytest.raises(ValueError):
            bipartite_concurrence_purity(ghz_state(3, 2))


class TestCut:
    def test_product_zero_all_cuts(self):
        rng = np.random.default_rng(1)
        psi = random_product_pure([2, 3, 2], rng)
        for k in (1, 2, 3):
            assert cut_concurrence(psi, k) < 1e-10

    def test_ghz3_cuts(self):
        for k in (1, 2, 3):
            assert np.isclose(cut_concurrence(ghz_state(3, 2), k), 1.0, atol=1e-12)

    def test_w3_cuts(self):
        expected = np.sqrt(8 / 9)
        for k in (1, 2, 3):
            assert np.isclose(cut_concurrence(w_state(3), k), expected, atol=1e-12)

    def test_bad_index(self):
        with pytest.raises(ValueError):
            cut_concurrence(w_state(3), 4)


class TestMultipartite:
    def test_ghz_closed_form(self):
        for n, d in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3)]:
            expected = np.sqrt(n * (1 - 1 / d))
            assert abs(multipartite_concurrence(ghz_state(n, d)) - expected) < 1e-9

    def test_w_closed_form(self):
        for n in range(2, 7):
            expected = np.sqrt(2 * (1 - 1 / n))
            assert abs(multipartite_concurrence(w_state(n)) - expected) < 1e-9

    def test_ghz32_value(self):
        assert np.isclose(multipartite_concurrence(ghz_state(3, 2)), 1.224745, atol=1e-6)

    def test_w3_value(self):
        assert np.isclose(multipartite_concurrence(w_state(3)), 1.154700, atol=1e-6)

    def test_ghz43_purity_form(self):
        assert np.isclose(
            multipartite_concurrence_purity(ghz_state(4, 3)), 1.632993, atol=1e-6
        )

    def test_fully_product_four_qubits(self):
        rng = np.random.default_rng(2)
        psi = random_product_pure([2, 2, 2, 2], rng)
        assert multipartite_concurrence(psi) < 1e-10
        # purity route loses half the digits near zero (1 - purity cancellation)
        assert multipartite_concurrence_purity(psi) < 1e-7

    def test_bipartite_reduction(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            psi = random_pure([3, 3], rng)
            assert abs(
                multipartite_concurrence(psi) - bipartite_concurrence_purity(psi)
            ) < 1e-12


class TestOperatorForm:
    def test_ghz32(self):
        val = multipartite_concurrence_witness_sum(ghz_state(3, 2))
        assert abs(val - np.sqrt(1.5)) < 1e-9

    def test_w3(self):
        val = multipartite_concurrence_witness_sum(w_state(3))
        assert abs(val - np.sqrt(4 / 3)) < 1e-9

    def test_product_zero(self):
        rng = np.random.default_rng(4)
        psi = random_product_pure([2, 2, 2], rng)
        assert multipartite_concurrence_witness_sum(psi) < 1e-10

    def test_three_routes_agree(self):
        rng = np.random.default_rng(5)
        for dims in ([2, 2, 2], [2, 2, 3]):
            for _ in range(10):
                psi = random_pure(dims, rng)
                a = multipartite_concurrence(psi)
                b = multipartite_concurrence_purity(psi)
                c = multipartite_concurrence_witness_sum(psi)
                assert abs(a - b) < 1e-9
                assert abs(a - c) < 1e-9


class TestLocalUnitaryInvariance:
    @pytest.mark.parametrize("dims", [[2, 2], [3, 3], [2, 2, 2]])
    def test_invariance(self, dims):
        rng = np.random.default_rng(6)
        for _ in range(5):
            psi = random_pure(dims, rng)
            us = [random_unitary(d, rng) for d in dims]
            rotated = apply_local_unitary(psi, us)
            before = multipartite_concurrence_purity(psi)
            after = multipartite_concurrence_purity(rotated)
            assert abs(before - after) < 1e-9

    def test_positivity_on_entangled_families(self):
        assert multipartite_concurrence(ghz_state(4, 2)) > 1.0
        assert multipartite_concurrence(w_state(5)) > 0.8
