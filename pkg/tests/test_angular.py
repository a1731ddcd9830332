"""Angular-momentum special functions against independent oracles."""

import math

import numpy as np
import pytest
from sympy import Rational, S
from sympy.physics.quantum.cg import CG

from multiaxial.angular import (
    MAX_SPIN,
    SpinTooLargeError,
    cg_stretched,
    clebsch_gordan,
    couple_axis_chain,
    couple_pair,
    q_vector,
    tau_matrix,
    wigner_d,
    wigner_d_matrix,
    wigner_small_d,
)
from multiaxial.halfint import HalfInteger, dimension, projections


def _h(x):
    return HalfInteger.of(x)


def _sympy_cg(j1, m1, j2, m2, j3, m3) -> float:
    return float(CG(Rational(j1), Rational(m1), Rational(j2), Rational(m2),
                    Rational(j3), Rational(m3)).doit().evalf(30))


def _halves(maximum):
    return [Rational(n, 2) for n in range(0, int(2 * maximum) + 1)]


class TestClebschGordan:
    def test_against_sympy_grid(self):
        # Exhaustive comparison for all couplings with j1, j2, j3 <= 3.
        for j1 in _halves(3):
            for j2 in _halves(3):
                for j3 in _halves(3):
                    if (j1 + j2 + j3) % 1 != 0:
                        continue
                    if not abs(j1 - j2) <= j3 <= j1 + j2:
                        continue
                    for m1 in np.arange(-j1, j1 + 1):
                        for m2 in np.arange(-j2, j2 + 1):
                            m3 = m1 + m2
                            if abs(m3) > j3:
                                continue
                            ours = clebsch_gordan(
                                _h(float(j1)), _h(float(j2)), _h(float(j3)),
                                _h(float(m1)), _h(float(m2)), _h(float(m3)))
                            oracle = _sympy_cg(j1, m1, j2, m2, j3, m3)
                            assert ours == pytest.approx(oracle, abs=1e-13)

    def test_known_values(self):
        assert clebsch_gordan(1, 1, 2, 0, 0, 0) == pytest.approx(
            math.sqrt(2.0 / 3.0), abs=1e-14)
        # forced by tau^2_0 diagonal entry for j=3/2
        c = clebsch_gordan("3/2", 2, "3/2", "3/2", 0, "3/2")
        assert math.sqrt(5.0) * c == pytest.approx(1.0, abs=1e-13)
        c = clebsch_gordan("3/2", 3, "3/2", "3/2", 0, "3/2")
        assert c == pytest.approx(1.0 / math.sqrt(35.0), abs=1e-14)

    def test_selection_rule(self):
        # m3 != m1 + m2 must give exactly zero
        assert clebsch_gordan(1, 2, 1, 1, -2, 1) == 0.0
        assert clebsch_gordan(1, 2, 1, 0, 1, 0) == 0.0

    def test_triangle_violation_is_zero(self):
        assert clebsch_gordan(1, 3, 1, 0, 0, 0) == 0.0

    def test_orthogonality(self):
        # sum_{m1 q} C(j1 k j2; m1 q m2) C(j1 k j2; m1 q m2') = delta
        j1, k, j2 = _h(2), _h(2), _h(1)
        for m2 in projections(j2):
            for m2p in projections(j2):
                total = 0.0
                for m1 in projections(j1):
                    for q in projections(k):
                        total += (clebsch_gordan(j1, k, j2, m1, q, m2)
                                  * clebsch_gordan(j1, k, j2, m1, q, m2p))
                expected = 1.0 if m2 == m2p else 0.0
                assert total == pytest.approx(expected, abs=1e-12)

    def test_spin_cap(self):
        with pytest.raises(SpinTooLargeError):
            clebsch_gordan(MAX_SPIN + 1, 0, MAX_SPIN + 1, 0, 0, 0)


class TestStretched:
    def test_agrees_with_full_sum(self):
        for twice_c in range(1, 13):
            c = HalfInteger(twice_c)
            for b in range(0, twice_c + 1):
                full = clebsch_gordan(c, b, c, c, 0, c)
                closed = cg_stretched(c, b)
                assert abs(closed - full) <= 1e-12 * max(1.0, abs(full))

    def test_normalization(self):
        for twice_c in range(0, 9):
            assert cg_stretched(HalfInteger(twice_c), 0) == pytest.approx(
                1.0, abs=1e-14)

    def test_beyond_domain_is_zero(self):
        assert cg_stretched(_h(1), 3) == 0.0

    def test_value_3half_2(self):
        assert math.sqrt(5.0) * cg_stretched(_h("3/2"), 2) == pytest.approx(
            1.0, abs=1e-13)


class TestWignerD:
    def test_identity_rotation(self):
        for k in (1, 2, 3):
            mat = wigner_d_matrix(_h(k), 0.0, 0.0, 0.0)
            assert np.allclose(mat, np.eye(dimension(_h(k))), atol=1e-14)

    def test_spin_half_closed_form(self):
        a, b, g = 0.7, 1.2, -0.4
        mat = wigner_d_matrix(_h("1/2"), a, b, g)
        expected = np.array([
            [math.cos(b / 2) * np.exp(-1j * (a + g) / 2),
             -math.sin(b / 2) * np.exp(-1j * (a - g) / 2)],
            [math.sin(b / 2) * np.exp(1j * (a - g) / 2),
             math.cos(b / 2) * np.exp(1j * (a + g) / 2)],
        ])
        assert np.allclose(mat, expected, atol=1e-14)

    def test_spin_one_small_d(self):
        b = 0.83
        c, s = math.cos(b), math.sin(b)
        expected = np.array([
            [(1 + c) / 2, -s / math.sqrt(2), (1 - c) / 2],
            [s / math.sqrt(2), c, -s / math.sqrt(2)],
            [(1 - c) / 2, s / math.sqrt(2), (1 + c) / 2],
        ])
        got = np.array([[wigner_small_d(_h(1), mp, m, b)
                         for m in (_h(1), _h(0), _h(-1))]
                        for mp in (_h(1), _h(0), _h(-1))])
        assert np.allclose(got, expected, atol=1e-14)

    def test_unitarity(self):
        rng = np.random.default_rng(11)
        for k in (1, 2, 3, 4):
            a, b, g = rng.uniform(0, 2 * math.pi, 3)
            mat = wigner_d_matrix(_h(k), a, b, g)
            assert np.max(np.abs(mat @ mat.conj().T
                                 - np.eye(dimension(_h(k))))) < 1e-12

    def test_spherical_harmonic_column(self):
        # conj(D^k_{q0}(phi,theta,0)) = sqrt(4 pi/(2k+1)) Y^k_q(theta,phi)
        # with the Condon-Shortley harmonics; this is the identity that moves
        # a z-aligned rank-k tensor to the direction (theta, phi).
        from scipy.special import sph_harm_y
        theta, phi = 1.1, 2.4
        for k in (1, 2, 3):
            for q in range(-k, k + 1):
                d = np.conj(wigner_d(k, _h(q), _h(0), phi, theta, 0.0))
                y = complex(sph_harm_y(k, q, theta, phi))
                expected = math.sqrt(4 * math.pi / (2 * k + 1)) * y
                assert d == pytest.approx(expected, abs=1e-12)

    def test_composition(self):
        # successive z-y-z rotations compose like the matrices
        j = _h(2)
        m1 = wigner_d_matrix(j, 0.4, 0.9, 0.0)
        m2 = wigner_d_matrix(j, 0.0, 0.0, 1.3)
        assert np.allclose(m1 @ m2, wigner_d_matrix(j, 0.4, 0.9, 1.3),
                           atol=1e-13)


class TestTauMatrix:
    def test_rank_zero_is_identity(self):
        for tj in (1, 2, 3, 4):
            assert np.allclose(tau_matrix(HalfInteger(tj), 0, 0),
                               np.eye(tj + 1), atol=1e-14)

    def test_j1_k2_diagonal(self):
        tau = tau_matrix(_h(1), 2, 0)
        expected = np.diag([1 / math.sqrt(2), -math.sqrt(2), 1 / math.sqrt(2)])
        assert np.allclose(tau, expected, atol=1e-13)

    def test_j3half_k3_diagonal(self):
        tau = tau_matrix(_h("3/2"), 3, 0)
        expected = np.diag(np.array([1.0, -3.0, 3.0, -1.0]) / math.sqrt(5.0))
        assert np.allclose(tau, expected, atol=1e-13)

    def test_orthogonality(self):
        # Tr(tau^{k+}_q tau^{k'}_{q'}) = (2j+1) delta delta for j <= 4
        for tj in range(1, 9):
            j = HalfInteger(tj)
            taus = {(k, q): tau_matrix(j, k, q)
                    for k in range(tj + 1) for q in range(-k, k + 1)}
            for (k, q), t1 in taus.items():
                for (kp, qp), t2 in taus.items():
                    tr = np.trace(t1.conj().T @ t2)
                    expected = (tj + 1) if (k, q) == (kp, qp) else 0.0
                    assert abs(tr - expected) < 1e-12

    def test_conjugation(self):
        j = _h(2)
        for k in range(5):
            for q in range(-k, k + 1):
                lhs = tau_matrix(j, k, q).conj().T
                rhs = (-1) ** q * tau_matrix(j, k, -q)
                assert np.allclose(lhs, rhs, atol=1e-13)

    def test_rank_beyond_2j_rejected(self):
        with pytest.raises(ValueError):
            tau_matrix(_h(1), 3, 0)


class TestVectorCoupling:
    def test_q_vector_north_pole(self):
        assert np.allclose(q_vector(0.0, 0.0), [0.0, 1.0, 0.0], atol=1e-15)

    def test_q_vector_x_axis(self):
        s = 1 / math.sqrt(2)
        assert np.allclose(q_vector(math.pi / 2, 0.0), [s, 0.0, -s],
                           atol=1e-15)

    def test_q_vector_antipode_negates(self):
        th, ph = 0.9, 2.2
        assert np.allclose(q_vector(math.pi - th, math.pi + ph),
                           -q_vector(th, ph), atol=1e-14)

    def test_q_vector_conjugation(self):
        v = q_vector(1.2, 0.7)
        for q in (-1, 0, 1):
            assert np.conj(v[q + 1]) == pytest.approx(
                (-1) ** q * v[-q + 1], abs=1e-14)

    def test_couple_identical_vectors_rank2(self):
        v = q_vector(0.0, 0.0)
        out = couple_pair(v, 1, v, 1, 2)
        assert out[2] == pytest.approx(math.sqrt(2.0 / 3.0), abs=1e-14)

    def test_couple_identical_vectors_rank1_vanishes(self):
        v = q_vector(1.1, 0.3)
        out = couple_pair(v, 1, v, 1, 1)
        assert np.max(np.abs(out)) < 1e-14

    def test_couple_with_scalar_is_identity(self):
        v = q_vector(0.8, 1.9)
        out = couple_pair(v, 1, np.array([1.0 + 0j]), 0, 1)
        assert np.allclose(out, v, atol=1e-14)

    def test_triangle_violation(self):
        v = q_vector(0.2, 0.2)
        with pytest.raises(ValueError):
            couple_pair(v, 1, v, 1, 3)

    def test_rank2_proportional_to_harmonic_direction(self):
        # coupled tensor of two copies of the same direction is parallel to
        # the k=2 spherical direction tensor sqrt(4 pi/5) Y^2_q(theta, phi),
        # with proportionality constant sqrt(2/3)
        from scipy.special import sph_harm_y
        th, ph = 0.77, 1.33
        v = q_vector(th, ph)
        out = couple_pair(v, 1, v, 1, 2)
        ref = np.array([complex(sph_harm_y(2, q, th, ph))
                        for q in (-2, -1, 0, 1, 2)])
        ref *= math.sqrt(4 * math.pi / 5)
        assert np.allclose(out, math.sqrt(2.0 / 3.0) * ref, atol=1e-13)

    def test_chain_on_z_axes(self):
        # k z-axes couple to a tensor with only q=0 support
        out = couple_axis_chain([(0.0, 0.0)] * 3)
        assert abs(out[3]) > 0.1
        mask = np.ones(7, dtype=bool)
        mask[3] = False
        assert np.max(np.abs(out[mask])) < 1e-14
