"""The entanglement-assisted signaling protocol.

Alice and Bob share ``(|+x+x> + |-x-x>)/sqrt(2)``. Alice applies ``I`` or
``sigma_x`` to encode one bit, lets her half evolve under the PT-symmetric
``H`` for ``tau = pi / delta_e``, and the joint state is renormalised. Bob
then measures ``sigma_y``. With a non-Hermitian ``H`` his outcome
statistics depend on Alice's bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    IDENTITY2,
    SIGMA_X,
    adjoint,
    as_matrix,
    as_vector,
    expm_oracle,
    partial_trace_first,
    tensor_product,
)
from .pt_core import (
    MetricOperator,
    TrivialHamiltonianError,
    embed,
    evolution_operator,
    metric_operator,
)

__all__ = [
    "Normalization",
    "AliceBit",
    "BipartiteState",
    "PhaseTriple",
    "ProbabilityTable",
    "PLUS_Y",
    "MINUS_Y",
    "SIGMA_Y_BASIS",
    "bell_state",
    "alice_operator",
    "protocol_time",
    "run_protocol",
    "bob_state",
    "phases",
    "joint_probabilities",
    "bob_marginal",
    "bob_outcome_probabilities",
    "signaling_gap_numeric",
    "signaling_gap_analytic",
    "signaling_gap_embedded",
]

PLUS_Y = as_vector(np.array([1, 1j]) / math.sqrt(2))
MINUS_Y = as_vector(np.array([1, -1j]) / math.sqrt(2))
# Columns are the outcome states, +y first.
SIGMA_Y_BASIS = as_matrix(np.column_stack([PLUS_Y, MINUS_Y]))


class Normalization(enum.Enum):
    CONVENTIONAL = "conventional"
    PT_METRIC = "pt-metric"


class AliceBit(enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class BipartiteState:
    """Four amplitudes, Alice (x) Bob, computational basis per site.

    ``metric`` is set when the state is normalised in the ``eta (x) I``
    inner product rather than the Euclidean one.
    """

    amplitudes: np.ndarray
    normalization: Normalization = Normalization.CONVENTIONAL
    metric: Optional[MetricOperator] = None

    def density_matrix(self):
        psi = self.amplitudes
        return np.outer(psi, np.conj(psi))

    def norm_squared(self):
        """Squared norm in the state's own inner product."""
        psi = self.amplitudes
        if self.normalization is Normalization.PT_METRIC:
            joint = tensor_product(self.metric.eta, IDENTITY2)
            return float(np.vdot(psi, joint @ psi).real)
        return float(np.vdot(psi, psi).real)


def bell_state():
    """``(|+x+x> + |-x-x>)/sqrt(2)``, which equals ``(|00> + |11>)/sqrt(2)``."""
    return BipartiteState(as_vector(np.array([1, 0, 0, 1]) / math.sqrt(2)))


def alice_operator(bit):
    return IDENTITY2 if AliceBit(bit) is AliceBit.PLUS else SIGMA_X


def protocol_time(h):
    """``tau = pi / delta_e`` with ``delta_e = 2 s cos(alpha)``."""
    if h.trivial:
        raise TrivialHamiltonianError("s = 0 gives delta_e = 0, so tau is undefined")
    return math.pi / (2 * h.energy)


def _normalize(psi, norm, h):
    if norm is Normalization.CONVENTIONAL:
        return BipartiteState(as_vector(psi / np.linalg.norm(psi)))
    eta = metric_operator(h)
    joint = tensor_product(eta.eta, IDENTITY2)
    n2 = np.vdot(psi, joint @ psi).real
    return BipartiteState(as_vector(psi / math.sqrt(n2)), Normalization.PT_METRIC, eta)


def run_protocol(h, bit, norm=Normalization.CONVENTIONAL):
    """Final joint state ``(U(tau) A (x) I)|psi>`` after one global renormalisation.

    Bob's free evolution ``exp(-i t I)`` is a global phase and is omitted.
    """
    h.require_unbroken()
    tau = protocol_time(h)
    local = evolution_operator(h, tau) @ alice_operator(bit)
    psi = tensor_product(local, IDENTITY2) @ bell_state().amplitudes
    return _normalize(psi, Normalization(norm), h)


def _reduced_bob(amplitudes, dim_a=2):
    rho = np.outer(amplitudes, np.conj(amplitudes))
    rho_b = partial_trace_first(rho, dim_a, 2)
    return rho_b / np.trace(rho_b).real


def bob_state(state):
    """Bob's reduced density matrix, unit trace.

    Probabilities are always formed with Euclidean projectors, so a
    PT-normalised state is rescaled to unit Euclidean norm first.
    """
    return as_matrix(_reduced_bob(state.amplitudes))


@dataclass(frozen=True)
class PhaseTriple:
    phi_plus: float
    phi_minus: float
    epsilon: float


def _principal_angle(z):
    a = math.atan2(z.imag, z.real)
    return math.pi if a == -math.pi else a


def phases(alpha):
    """Phases of the renormalised final state, each in ``(-pi, pi]``.

    ``e^{i phi_pm} = (sin a -+ i) / sqrt(1 + sin^2 a)`` and
    ``e^{i eps} = (-2 sin a + i cos^2 a) / (1 + sin^2 a)``.
    """
    sa = math.sin(alpha)
    ca2 = math.cos(alpha) ** 2
    r = math.sqrt(1 + sa * sa)
    return PhaseTriple(
        _principal_angle(complex(sa, -1) / r),
        _principal_angle(complex(sa, 1) / r),
        _principal_angle(complex(-2 * sa, ca2) / (1 + sa * sa)),
    )


@dataclass(frozen=True)
class ProbabilityTable:
    """Joint outcome distribution ``P(a, b)`` for Alice and Bob.

    ``p[(a, b)]`` with ``a, b`` in ``("+y", "-y")``. ``weight`` is the
    Euclidean squared norm of the state the table was computed from; it is 1
    for conventionally normalised states.
    """

    p: dict
    alice_setting: Optional[AliceBit] = None
    weight: float = 1.0


_OUTCOMES = ("+y", "-y")


def joint_probabilities(state, alice_setting=None):
    """``sigma_y (x) sigma_y`` outcome distribution with Euclidean projectors.

    For a PT-normalised state the raw Euclidean weights do not sum to one;
    they are divided by their total (recorded as ``weight``).
    """
    psi = state.amplitudes
    # Amplitude of |a>|b> is <a|<b|psi>.
    coeffs = adjoint(SIGMA_Y_BASIS) @ psi.reshape(2, 2) @ np.conj(SIGMA_Y_BASIS)
    raw = np.abs(coeffs) ** 2
    total = float(raw.sum())
    probs = raw / total
    table = {(a, b): float(probs[i, j])
             for i, a in enumerate(_OUTCOMES) for j, b in enumerate(_OUTCOMES)}
    return ProbabilityTable(table, alice_setting, total)


def bob_marginal(table):
    """``(P(b=+y), P(b=-y))`` summed over Alice's outcomes."""
    plus = sum(v for (a, b), v in table.p.items() if b == "+y")
    minus = sum(v for (a, b), v in table.p.items() if b == "-y")
    return plus, minus


def bob_outcome_probabilities(state, basis):
    """Bob's outcome distribution in an arbitrary orthonormal ``basis``.

    ``basis`` has the outcome states as columns.
    """
    rho_b = bob_state(state)
    basis = np.asarray(basis, dtype=complex)
    return np.real(np.einsum("ki,kl,li->i", np.conj(basis), rho_b, basis))


def signaling_gap_numeric(h, norm=Normalization.CONVENTIONAL):
    """``P(+y | A_plus) - P(+y | A_minus)`` through the full pipeline."""
    plus = bob_marginal(joint_probabilities(run_protocol(h, AliceBit.PLUS, norm)))[0]
    minus = bob_marginal(joint_probabilities(run_protocol(h, AliceBit.MINUS, norm)))[0]
    return plus - minus


def signaling_gap_analytic(alpha):
    """``cos(eps) * sin(2 phi_plus - eps)``.

    Depends on ``alpha`` only through ``sin(alpha)``, so it vanishes at every
    ``alpha = n pi``, not just at even multiples.
    """
    ph = phases(alpha)
    return math.cos(ph.epsilon) * math.sin(2 * ph.phi_plus - ph.epsilon)


def signaling_gap_embedded(h, n, filler=0.0):
    """Signaling gap with Alice's system embedded in ``n`` levels.

    The Bell pair occupies Alice's two lowest levels. The evolution is the
    series exponential of the embedded ``n x n`` Hamiltonian, so this path
    shares no code with the closed-form propagator.
    """
    h.require_unbroken()
    tau = protocol_time(h)
    big_h = embed(h, n, filler)
    u = expm_oracle(big_h, tau)
    psi0 = np.zeros(2 * n, dtype=complex)
    psi0[0 * 2 + 0] = psi0[1 * 2 + 1] = 1 / math.sqrt(2)
    flip = np.eye(n, dtype=complex)
    flip[:2, :2] = SIGMA_X
    marginals = []
    for a_op in (np.eye(n, dtype=complex), flip):
        psi = np.kron(u @ a_op, IDENTITY2) @ psi0
        rho_b = _reduced_bob(psi, n)
        marginals.append(float(np.real(np.vdot(PLUS_Y, rho_b @ PLUS_Y))))
    return marginals[0] - marginals[1]
