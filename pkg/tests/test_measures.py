"""Entanglement quantifiers and the count-based visibility figure."""

import numpy as np
import pytest

from spdistill.registers import (
    QubitLabel,
    QubitRegister,
    abstract_pair_register,
    polarization_register,
)
from spdistill.states import (
    DensityMatrix,
    NormalizationError,
    PhysicalityError,
    PureState,
    tensor,
)
from spdistill.measures import (
    UndefinedVisibilityError,
    binary_entropy,
    concurrence,
    entanglement_of_formation,
    entropy_of_entanglement,
    fidelity_to_pure,
    purity,
    tangle,
    visibility,
)

# independently evaluated expectations
E_359 = 0.928439051698343        # binary entropy of sin^2(35.9 deg)
SIN_2T_359 = 0.949972051524652   # sin(71.8 deg)
E_200 = 0.5206107318548254       # binary entropy of sin^2(20 deg)
EOF_C025 = 0.11761887377091781   # h((1+sqrt(1-0.25^2))/2)


def schmidt_state(theta_deg):
    t = np.deg2rad(theta_deg)
    return PureState(polarization_register(), [np.cos(t), 0.0, 0.0, np.sin(t)])


def bell_phi_plus():
    return PureState(polarization_register(), np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0))


def haar_state(rng, register):
    v = rng.normal(size=register.dim) + 1j * rng.normal(size=register.dim)
    return PureState(register, v, normalize=True)


def werner(p):
    reg = polarization_register()
    bell = bell_phi_plus().to_density().matrix
    return DensityMatrix(reg, p * bell + (1.0 - p) * np.eye(4) / 4.0)


class TestEntropyOfEntanglement:
    def test_bell_state_is_one_ebit(self):
        reg = polarization_register()
        e = entropy_of_entanglement(bell_phi_plus(), (reg.labels[0],))
        assert e.ebits == pytest.approx(1.0, abs=1e-12)

    def test_schmidt_pair_matches_binary_entropy(self):
        reg = polarization_register()
        for theta, expect in ((35.9, E_359), (20.0, E_200)):
            e = entropy_of_entanglement(schmidt_state(theta), (reg.labels[0],))
            assert e.ebits == pytest.approx(expect, abs=1e-12)

    def test_product_state_is_zero(self):
        reg = polarization_register()
        st = PureState(reg, [0.0, 1.0, 0.0, 0.0])
        assert entropy_of_entanglement(st, (reg.labels[0],)).ebits == pytest.approx(0.0, abs=1e-12)

    def test_symmetric_under_partition_swap(self):
        rng = np.random.default_rng(12)
        reg = abstract_pair_register(2)
        a_side = tuple(q for q in reg.labels if q.party == "A")
        b_side = tuple(q for q in reg.labels if q.party == "B")
        for _ in range(10):
            st = haar_state(rng, reg)
            ea = entropy_of_entanglement(st, a_side).ebits
            eb = entropy_of_entanglement(st, b_side).ebits
            assert ea == pytest.approx(eb, abs=1e-9)

    def test_unnormalized_rejected(self):
        # the one unnormalized vector that can reach a measure is the null
        # state left behind by a zero-probability projection
        reg = polarization_register()
        null = PureState.null(reg)
        with pytest.raises(NormalizationError):
            entropy_of_entanglement(null, (reg.labels[0],))

    def test_bad_partition_rejected(self):
        reg = polarization_register()
        with pytest.raises(ValueError):
            entropy_of_entanglement(bell_phi_plus(), ())
        with pytest.raises(ValueError):
            entropy_of_entanglement(bell_phi_plus(), reg.labels)


class TestConcurrence:
    def test_bell_state(self):
        assert concurrence(bell_phi_plus().to_density()) == pytest.approx(1.0, abs=1e-12)

    def test_product_state(self):
        reg = polarization_register()
        rho = PureState(reg, [0.0, 0.0, 1.0, 0.0]).to_density()
        assert concurrence(rho) == pytest.approx(0.0, abs=1e-12)

    def test_schmidt_state_sin_two_theta(self):
        assert concurrence(schmidt_state(35.9).to_density()) == pytest.approx(SIN_2T_359, abs=1e-12)
        for theta in (5.0, 15.0, 30.0, 45.0, 60.0, 85.0):
            c = concurrence(schmidt_state(theta).to_density())
            assert c == pytest.approx(np.sin(np.deg2rad(2 * theta)), abs=1e-12)

    def test_werner_line(self):
        # p*|phi+><phi+| + (1-p)*I/4 has concurrence max(0, (3p-1)/2)
        assert concurrence(werner(0.5)) == pytest.approx(0.25, abs=1e-10)
        assert concurrence(werner(1.0 / 3.0)) == pytest.approx(0.0, abs=1e-10)
        assert concurrence(werner(0.2)) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        rho = DensityMatrix(polarization_register(), np.eye(4) / 4.0)
        assert concurrence(rho) == pytest.approx(0.0, abs=1e-12)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(21)
        reg = polarization_register()
        for _ in range(10):
            st = haar_state(rng, reg)
            c0 = concurrence(st.to_density())
            ua = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
            ub = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
            rot = DensityMatrix(reg, np.kron(ua, ub) @ st.to_density().matrix @ np.kron(ua, ub).conj().T)
            assert concurrence(rot) == pytest.approx(c0, abs=1e-8)

    def test_unphysical_matrix_rejected(self):
        reg = polarization_register()
        bad = np.diag([0.6, 0.5, -0.05, -0.05])
        with pytest.raises(PhysicalityError):
            concurrence(DensityMatrix(reg, bad, validate=False))

    def test_wrong_dimension_rejected(self):
        reg = QubitRegister((QubitLabel("A", "pol"),))
        with pytest.raises(ValueError):
            concurrence(DensityMatrix(reg, np.eye(2) / 2.0))


class TestEntanglementOfFormation:
    def test_pure_states_match_entropy(self):
        rng = np.random.default_rng(33)
        reg = polarization_register()
        for _ in range(20):
            st = haar_state(rng, reg)
            via_c = entanglement_of_formation(st.to_density()).ebits
            via_s = entropy_of_entanglement(st, (reg.labels[0],)).ebits
            assert via_c == pytest.approx(via_s, abs=1e-8)

    def test_frozen_value_at_c_quarter(self):
        assert entanglement_of_formation(werner(0.5)).ebits == pytest.approx(EOF_C025, abs=1e-9)

    def test_monotone_in_concurrence(self):
        values = [entanglement_of_formation(schmidt_state(t).to_density()).ebits
                  for t in (5.0, 15.0, 25.0, 35.0, 45.0)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_endpoints(self):
        assert entanglement_of_formation(bell_phi_plus().to_density()).ebits == pytest.approx(1.0, abs=1e-12)
        rho = DensityMatrix(polarization_register(), np.eye(4) / 4.0)
        assert entanglement_of_formation(rho).ebits == pytest.approx(0.0, abs=1e-12)


class TestFidelityAndPurity:
    def test_self_fidelity(self):
        assert fidelity_to_pure(bell_phi_plus().to_density(), bell_phi_plus()) == pytest.approx(1.0, abs=1e-12)

    def test_maximally_mixed_vs_any_pure(self):
        rng = np.random.default_rng(4)
        rho = DensityMatrix(polarization_register(), np.eye(4) / 4.0)
        for _ in range(5):
            target = haar_state(rng, polarization_register())
            assert fidelity_to_pure(rho, target) == pytest.approx(0.25, abs=1e-12)

    def test_accepts_pure_state_argument(self):
        reg = polarization_register()
        st = PureState(reg, [1.0, 0.0, 0.0, 0.0])
        assert fidelity_to_pure(st, bell_phi_plus()) == pytest.approx(0.5, abs=1e-12)

    def test_register_alignment(self):
        reg = polarization_register()
        swapped = QubitRegister(reg.labels[::-1])
        st = PureState(reg, [0.0, 1.0, 0.0, 0.0])          # |0>_A |1>_B
        target = PureState(swapped, [0.0, 1.0, 0.0, 0.0])  # |0>_B |1>_A
        assert fidelity_to_pure(st.to_density(), target) == pytest.approx(0.0, abs=1e-12)

    def test_purity_and_tangle(self):
        assert purity(bell_phi_plus().to_density()) == pytest.approx(1.0, abs=1e-12)
        assert purity(DensityMatrix(polarization_register(), np.eye(4) / 4.0)) == pytest.approx(0.25, abs=1e-12)
        assert tangle(schmidt_state(35.9).to_density()) == pytest.approx(SIN_2T_359**2, abs=1e-10)


class TestVisibility:
    def test_full_contrast(self):
        v = visibility([100.0, 0.0])
        assert v.value == pytest.approx(1.0, abs=1e-12)
        assert v.c_max == 100.0 and v.c_min == 0.0

    def test_half_contrast(self):
        assert visibility([75.0, 25.0]).value == pytest.approx(0.5, abs=1e-12)

    def test_all_zero_rejected(self):
        with pytest.raises(UndefinedVisibilityError):
            visibility([0.0, 0.0, 0.0])

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            visibility([5.0])

    def test_reads_mean_rate_attribute(self):
        class Rec:
            def __init__(self, r):
                self.mean_rate = r
        assert visibility([Rec(100.0), Rec(50.0), Rec(0.0)]).value == pytest.approx(1.0, abs=1e-12)


class TestBinaryEntropy:
    def test_endpoints_and_midpoint(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0
        assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-12)

    def test_tiny_eigenvalues_clamped(self):
        # values below the spectral floor behave as exact zeros
        assert binary_entropy(1e-13) == 0.0


class TestFourQubitEntropy:
    def test_pair_of_bells_gives_two_ebits(self):
        reg1 = QubitRegister((QubitLabel("A", 1), QubitLabel("B", 1)))
        reg2 = QubitRegister((QubitLabel("A", 2), QubitLabel("B", 2)))
        bell = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
        joint = tensor(PureState(reg1, bell), PureState(reg2, bell))
        a_side = tuple(q for q in joint.register.labels if q.party == "A")
        assert entropy_of_entanglement(joint, a_side).ebits == pytest.approx(2.0, abs=1e-10)
