import numpy as np
import pytest

from qfi_bottleneck import linalg
from qfi_bottleneck.linalg import SIGMA_1, SIGMA_3, herm_exp, kron
from qfi_bottleneck.qfi import (StateFamilyPoint, max_qfi_full, pure_state_qfi,
                                qfi, sld, support_rank, unitary_family_point)


def rand_herm(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def rand_state(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T + 0.01 * np.eye(d)
    return rho / np.trace(rho).real


def rand_traceless(rng, d):
    h = rand_herm(rng, d)
    return h - np.trace(h).real / d * np.eye(d)


def rand_probe(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


class TestStateFamilyPoint:
    def test_validation_accepts(self):
        rng = np.random.default_rng(0)
        StateFamilyPoint(rand_state(rng, 3), rand_traceless(rng, 3))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError):
            StateFamilyPoint(2.0 * np.eye(2) / 2, SIGMA_1)

    def test_rejects_nonhermitian_rho(self):
        bad = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
        with pytest.raises(ValueError):
            StateFamilyPoint(bad, SIGMA_1)

    def test_rejects_traceful_drho(self):
        with pytest.raises(ValueError):
            StateFamilyPoint(np.eye(2, dtype=complex) / 2, np.eye(2, dtype=complex))


class TestSld:
    def test_defining_equation_full_rank(self):
        rng = np.random.default_rng(1)
        rho, drho = rand_state(rng, 4), rand_traceless(rng, 4)
        point = StateFamilyPoint(rho, drho)
        ell = sld(point)
        assert np.allclose(ell, ell.conj().T, atol=1e-12)
        assert np.allclose((ell @ rho + rho @ ell) / 2, drho, atol=1e-10)

    def test_diagonal_example(self):
        # rho = diag(3/4, 1/4), drho = sigma1/4: L = sigma1/2 exactly.
        point = StateFamilyPoint(np.diag([0.75, 0.25]).astype(complex), SIGMA_1 / 4)
        assert np.allclose(sld(point), SIGMA_1 / 2, atol=1e-13)

    def test_support_convention_zeroes_kernel(self):
        # Pure |0><0| with drho supported only on the kernel pair (1,1): the
        # SLD entry on the excluded pair is set to zero.
        rho = np.diag([1.0, 0.0]).astype(complex)
        drho = np.diag([1.0, -1.0]).astype(complex) * 0.1
        ell = sld(StateFamilyPoint(rho, drho, validate=False))
        assert ell[1, 1] == 0.0


class TestQfi:
    def test_matches_trace_formula_full_rank(self):
        rng = np.random.default_rng(2)
        rho, drho = rand_state(rng, 4), rand_traceless(rng, 4)
        point = StateFamilyPoint(rho, drho)
        ell = sld(point)
        j = qfi(point)
        assert np.isclose(j, np.trace(rho @ ell @ ell).real, atol=1e-10)
        assert np.isclose(j, np.trace(drho @ ell).real, atol=1e-10)

    def test_nonnegative(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            point = StateFamilyPoint(rand_state(rng, 3), rand_traceless(rng, 3))
            assert qfi(point) >= 0.0

    def test_qubit_closed_form(self):
        # Bloch form: J = |r'|^2 + (r.r')^2/(1-|r|^2) for mixed qubits.
        rng = np.random.default_rng(4)
        for _ in range(25):
            rho, drho = rand_state(rng, 2), rand_traceless(rng, 2)
            r = np.array([np.trace(rho @ s).real for s in linalg.PAULI[1:]])
            dr = np.array([np.trace(drho @ s).real for s in linalg.PAULI[1:]])
            ref = dr @ dr + (r @ dr) ** 2 / (1.0 - r @ r)
            assert np.isclose(qfi(StateFamilyPoint(rho, drho)), ref, atol=1e-9)

    def test_pure_state_identity(self):
        # For unitary families on pure probes, J = 4 Var_psi(G).
        rng = np.random.default_rng(5)
        g = rand_herm(rng, 4)
        psi = rand_probe(rng, 4)
        point = unitary_family_point(g, psi, 0.9)
        e1 = (psi.conj() @ g @ psi).real
        e2 = (psi.conj() @ g @ g @ psi).real
        assert np.isclose(qfi(point), 4.0 * (e2 - e1 * e1), atol=1e-9)

    def test_pure_state_qfi_function(self):
        rng = np.random.default_rng(6)
        g = rand_herm(rng, 4)
        psi = rand_probe(rng, 4)
        u = herm_exp(g, 1.2)
        phi = u @ psi
        dphi = -1j * g @ phi
        e1 = (psi.conj() @ g @ psi).real
        e2 = (psi.conj() @ g @ g @ psi).real
        assert np.isclose(pure_state_qfi(phi, dphi), 4.0 * (e2 - e1 * e1), atol=1e-10)

    def test_finite_difference(self):
        # d rho / d alpha from the analytic commutator matches central
        # differences at h = 1e-5 within 1e-8 on the traced output.
        rng = np.random.default_rng(7)
        g = rand_herm(rng, 4)
        psi = rand_probe(rng, 4)
        alpha, h = 0.7, 1e-5

        def rho_at(al):
            return unitary_family_point(g, psi, al, traced="F").rho

        point = unitary_family_point(g, psi, alpha, traced="F")
        fd = (rho_at(alpha + h) - rho_at(alpha - h)) / (2 * h)
        assert np.max(np.abs(point.drho - fd)) <= 1e-8

    def test_monotonic_under_trace(self):
        # Data processing: accessed-output QFI never exceeds full-output QFI.
        rng = np.random.default_rng(8)
        g = rand_herm(rng, 4)
        for k in range(1000):
            psi = rand_probe(rng, 4)
            alpha = rng.uniform(0, 2 * np.pi)
            j_full = qfi(unitary_family_point(g, psi, alpha))
            j_acc = qfi(unitary_family_point(g, psi, alpha, traced="F"))
            assert j_acc <= j_full + 1e-9

    def test_ceiling(self):
        rng = np.random.default_rng(9)
        g = rand_herm(rng, 4)
        ceiling = max_qfi_full(g)
        for _ in range(200):
            psi = rand_probe(rng, 4)
            j = qfi(unitary_family_point(g, psi, rng.uniform(0, 2 * np.pi)))
            assert j <= ceiling + 1e-9

    def test_invariant_under_unitary_on_traced_factor(self):
        # Acting with V on the discarded output factor cannot change the
        # accessed state, hence not the QFI either.
        rng = np.random.default_rng(10)
        g = rand_herm(rng, 4)
        psi = rand_probe(rng, 4)
        v = herm_exp(rand_herm(rng, 2), 0.8)
        point = unitary_family_point(g, psi, 1.1, traced="F")
        big_v = kron(np.eye(2), v)
        g_rot = big_v @ g @ big_v.conj().T
        psi_rot = big_v @ psi
        rotated = unitary_family_point(g_rot, psi_rot, 1.1, traced="F")
        assert np.isclose(qfi(point), qfi(rotated), atol=1e-10)


class TestSupportRank:
    def test_pure(self):
        assert support_rank(np.diag([1.0, 0.0, 0.0, 0.0])) == 1

    def test_cut(self):
        assert support_rank(np.diag([0.7, 0.3, 1e-12, 0.0])) == 2


class TestMaxQfiFull:
    def test_spread_squared(self):
        g = np.diag([3.0, 1.0, -2.0, 0.5]).astype(complex)
        assert np.isclose(max_qfi_full(g), 25.0)

    def test_attained_by_extreme_superposition(self):
        rng = np.random.default_rng(12)
        g = rand_herm(rng, 4)
        lam, vec = np.linalg.eigh(g)
        psi = (vec[:, 0] + vec[:, -1]) / np.sqrt(2)
        j = qfi(unitary_family_point(g, psi, 0.3))
        assert np.isclose(j, max_qfi_full(g), atol=1e-9)
