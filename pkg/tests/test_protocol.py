import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptsim.linalg import SIGMA_X, partial_trace_first, trace_distance
from ptsim.protocol import (
    PLUS_Y,
    AliceBit,
    Normalization,
    alice_operator,
    bell_state,
    bob_marginal,
    bob_state,
    joint_probabilities,
    phases,
    run_protocol,
    signaling_gap_analytic,
    signaling_gap_numeric,
)
from ptsim.pt_core import (
    BrokenSymmetryError,
    TrivialHamiltonianError,
    is_pt_symmetric,
    make_hamiltonian,
)

EXTREME = -math.pi / 2 + 1e-6
plus_x = np.array([1, 1]) / math.sqrt(2)
minus_x = np.array([1, -1]) / math.sqrt(2)


def projector(v):
    return np.outer(v, np.conj(v))


def test_bell_state_normalised_and_maximally_entangled():
    psi = bell_state()
    assert abs(np.linalg.norm(psi.amplitudes) - 1) < 1e-15
    np.testing.assert_allclose(partial_trace_first(psi.density_matrix()), np.eye(2) / 2, atol=1e-15)


def test_bell_state_in_x_basis():
    psi = bell_state().amplitudes
    for a, b, w in [(plus_x, plus_x, 1), (minus_x, minus_x, 1), (plus_x, minus_x, 0), (minus_x, plus_x, 0)]:
        assert abs(np.vdot(np.kron(a, b), psi) - w / math.sqrt(2)) < 1e-15


def test_alice_operators():
    assert np.array_equal(alice_operator(AliceBit.PLUS), np.eye(2))
    assert np.array_equal(alice_operator(AliceBit.MINUS), SIGMA_X)
    for bit in AliceBit:
        a = alice_operator(bit)
        np.testing.assert_allclose(a.conj().T @ a, np.eye(2))
        assert is_pt_symmetric(a)


@pytest.mark.parametrize("bit", list(AliceBit))
def test_hermitian_protocol_leaves_bob_maximally_mixed(bit):
    rho = bob_state(run_protocol(make_hamiltonian(1, 0), bit))
    np.testing.assert_allclose(rho, np.eye(2) / 2, atol=1e-12)


def test_extreme_case_bob_holds_plus_y():
    rho = bob_state(run_protocol(make_hamiltonian(1, EXTREME), AliceBit.PLUS))
    assert trace_distance(rho, projector(PLUS_Y)) <= 1e-4


def _displayed_state(alpha, sign):
    """(1/sqrt2)[e^{i phi+}(1, i e^{-i eps})|+x> +- e^{i phi-}(1, i e^{i eps})|-x>], normalised."""
    sa = math.sin(alpha)
    r = math.sqrt(1 + sa * sa)
    e_phi_p = complex(sa, -1) / r
    e_phi_m = complex(sa, 1) / r
    e_eps = complex(-2 * sa, math.cos(alpha) ** 2) / (1 + sa * sa)
    a1 = np.array([1, 1j * e_eps.conjugate()])
    a2 = np.array([1, 1j * e_eps])
    psi = (e_phi_p * np.kron(a1, plus_x) + sign * e_phi_m * np.kron(a2, minus_x)) / math.sqrt(2)
    return psi / np.linalg.norm(psi)


@pytest.mark.parametrize("alpha", [math.pi / 6, -0.9, 1.3])
@pytest.mark.parametrize("bit,sign", [(AliceBit.PLUS, 1), (AliceBit.MINUS, -1)])
def test_final_state_matches_displayed_form(alpha, bit, sign):
    psi = run_protocol(make_hamiltonian(1, alpha), bit).amplitudes
    ref = _displayed_state(alpha, sign)
    ov = np.vdot(ref, psi)
    assert abs(abs(ov) - 1) <= 1e-10
    assert np.max(np.abs(psi - ov * ref)) <= 1e-10


def test_protocol_rejects_trivial_and_broken():
    with pytest.raises(TrivialHamiltonianError):
        run_protocol(make_hamiltonian(0, 0.3), AliceBit.PLUS)
    with pytest.raises(BrokenSymmetryError):
        run_protocol(make_hamiltonian(1, math.pi / 2), AliceBit.PLUS)


def test_phases_hermitian_point():
    p = phases(0.0)
    assert abs(p.phi_plus + math.pi / 2) < 1e-15
    assert abs(p.phi_minus - math.pi / 2) < 1e-15
    assert abs(p.epsilon - math.pi / 2) < 1e-15


def test_phases_extreme_limit():
    assert abs(phases(EXTREME).epsilon) < 1e-6


def test_phases_pi_over_6():
    # (-2 * 1/2 + i * 3/4) / (5/4) = -0.8 + 0.6i
    p = phases(math.pi / 6)
    assert abs(math.cos(p.epsilon) + 0.8) < 1e-12
    assert abs(math.sin(p.epsilon) - 0.6) < 1e-12


@given(st.floats(-1.5707, 1.5707))
def test_phase_definitions_reexponentiate(alpha):
    p = phases(alpha)
    sa = math.sin(alpha)
    r = math.sqrt(1 + sa * sa)
    assert abs(cmath.exp(1j * p.phi_plus) - complex(sa, -1) / r) < 1e-12
    assert abs(cmath.exp(1j * p.phi_minus) - complex(sa, 1) / r) < 1e-12
    assert abs(cmath.exp(1j * p.epsilon) - complex(-2 * sa, math.cos(alpha) ** 2) / (1 + sa * sa)) < 1e-12
    for x in (p.phi_plus, p.phi_minus, p.epsilon):
        assert -math.pi < x <= math.pi


@given(st.floats(-1.5707, 1.5707))
def test_phase_identity_sin_two_phi_minus_eps(alpha):
    p = phases(alpha)
    assert abs(math.sin(2 * p.phi_plus - p.epsilon) - 1) <= 1e-10


def test_bell_state_probabilities():
    # (|00> + |11>)/sqrt2 is perfectly anti-correlated in sigma_y (x) sigma_y;
    # each party's marginal is uniform.
    t = joint_probabilities(bell_state())
    assert abs(t.p[("+y", "-y")] - 0.5) < 1e-15 and abs(t.p[("-y", "+y")] - 0.5) < 1e-15
    assert t.p[("+y", "+y")] < 1e-15 and t.p[("-y", "-y")] < 1e-15
    assert bob_marginal(t) == pytest.approx((0.5, 0.5), abs=1e-15)


def test_extreme_case_bob_column():
    t = joint_probabilities(run_protocol(make_hamiltonian(1, EXTREME), AliceBit.PLUS))
    assert abs(t.p[("+y", "+y")] + t.p[("-y", "+y")] - 1) <= 1e-4
    p_plus, p_minus = bob_marginal(t)
    assert abs(p_plus - 1) <= 1e-4 and p_minus <= 1e-4


@settings(max_examples=50)
@given(st.lists(st.floats(-1, 1), min_size=8, max_size=8).filter(lambda xs: sum(x * x for x in xs) > 1e-3))
def test_table_sums_to_one(xs):
    from ptsim.protocol import BipartiteState

    psi = np.array(xs[:4]) + 1j * np.array(xs[4:])
    t = joint_probabilities(BipartiteState(psi / np.linalg.norm(psi)))
    assert abs(sum(t.p.values()) - 1) <= 1e-12
    assert all(0 <= v <= 1 for v in t.p.values())


@pytest.mark.parametrize("bit", list(AliceBit))
def test_hermitian_marginals_half(bit):
    pp, pm = bob_marginal(joint_probabilities(run_protocol(make_hamiltonian(1, 0), bit)))
    assert abs(pp - 0.5) < 1e-12 and abs(pm - 0.5) < 1e-12


def test_marginals_pi_over_6_differ_by_cos_eps():
    h = make_hamiltonian(1, math.pi / 6)
    plus = bob_marginal(joint_probabilities(run_protocol(h, AliceBit.PLUS)))[0]
    minus = bob_marginal(joint_probabilities(run_protocol(h, AliceBit.MINUS)))[0]
    assert abs(abs(plus - minus) - 0.8) <= 1e-12


def test_extreme_case_marginal():
    pp, pm = bob_marginal(joint_probabilities(run_protocol(make_hamiltonian(1, EXTREME), AliceBit.PLUS)))
    assert abs(pp - 1) < 1e-10 and abs(pm) < 1e-10


def test_gap_zero_at_hermitian_points():
    for a in (0.0, math.pi, -math.pi):
        assert abs(signaling_gap_numeric(make_hamiltonian(1, a))) <= 1e-12


def test_gap_pi_over_4():
    # 2 sin(pi/4) / (1 + sin^2(pi/4)) = sqrt(2) / 1.5
    gap = signaling_gap_numeric(make_hamiltonian(1, math.pi / 4))
    assert abs(abs(gap) - math.sqrt(2) / 1.5) <= 1e-10


def test_analytic_gap_values():
    assert abs(signaling_gap_analytic(0.0)) <= 1e-12
    assert abs(signaling_gap_analytic(EXTREME) - 1) <= 1e-10


def test_analytic_matches_numeric_on_grid():
    for a in np.linspace(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3, 101):
        assert abs(signaling_gap_analytic(a) - signaling_gap_numeric(make_hamiltonian(1, a))) <= 1e-10


@given(st.floats(-1.5707, 1.5707))
def test_gap_closed_form(alpha):
    sa = math.sin(alpha)
    assert abs(signaling_gap_analytic(alpha) + 2 * sa / (1 + sa * sa)) <= 1e-10


def test_gap_scale_independent():
    for a in (math.pi / 6, -1.1):
        ref = signaling_gap_numeric(make_hamiltonian(1, a))
        for s in (0.5, 3.0):
            assert abs(signaling_gap_numeric(make_hamiltonian(s, a)) - ref) <= 1e-12


def test_gap_sign_unchanged_for_negative_scale():
    # tau = pi / delta_e also flips sign, so s * tau and hence U(tau) are unchanged.
    for a in (math.pi / 6, -1.1):
        ref = signaling_gap_numeric(make_hamiltonian(1, a))
        assert abs(signaling_gap_numeric(make_hamiltonian(-2, a)) - ref) <= 1e-12


def test_pt_metric_mode():
    h = make_hamiltonian(1, math.pi / 4)
    state = run_protocol(h, AliceBit.PLUS, Normalization.PT_METRIC)
    assert state.normalization is Normalization.PT_METRIC
    assert abs(state.norm_squared() - 1) <= 1e-12
    table = joint_probabilities(state)
    assert abs(sum(table.p.values()) - 1) <= 1e-12
    # Euclidean weight of the eta-normalised state: tr(U^dag U)/2 = 3 here.
    assert abs(table.weight - 3) <= 1e-12
    assert abs(signaling_gap_numeric(h, Normalization.PT_METRIC)) > 0.1


def test_conventional_state_norm():
    state = run_protocol(make_hamiltonian(1, 0.4), AliceBit.MINUS)
    assert abs(state.norm_squared() - 1) <= 1e-12
