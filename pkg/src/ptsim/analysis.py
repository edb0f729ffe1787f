"""No-signaling audits, alpha sweeps and finite-shot emulation."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, trace_distance
from .protocol import (
    AliceBit,
    Normalization,
    bob_marginal,
    bob_outcome_probabilities,
    bob_state,
    joint_probabilities,
    run_protocol,
    signaling_gap_analytic,
)
from .pt_core import make_hamiltonian

__all__ = [
    "ClippedRangeWarning",
    "NoSignalReport",
    "SweepRecord",
    "ShotEstimate",
    "pauli_basis",
    "DEFAULT_BOB_BASES",
    "random_basis",
    "check_no_signaling",
    "sweep_alpha",
    "sample_shots",
    "ALPHA_LIMIT",
]

# Sweep endpoints are clipped to +-ALPHA_LIMIT.
ALPHA_LIMIT = math.pi / 2 - 1e-6


class ClippedRangeWarning(UserWarning):
    pass


def pauli_basis(pauli):
    """Eigenbasis of a Pauli matrix as columns, +1 eigenvector first."""
    w, v = np.linalg.eigh(pauli)
    return v[:, ::-1]


DEFAULT_BOB_BASES = {
    "sigma_x": pauli_basis(SIGMA_X),
    "sigma_y": pauli_basis(SIGMA_Y),
    "sigma_z": pauli_basis(SIGMA_Z),
}


def random_basis(rng):
    """Haar-random qubit basis (columns) from a ``numpy.random.Generator``."""
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@dataclass(frozen=True)
class NoSignalReport:
    max_violation: float
    worst_alpha: float
    worst_setting: str
    satisfied: bool
    tol: float

    def as_dict(self):
        return asdict(self)


def check_no_signaling(h, settings=None, tol=1e-10, norm=Normalization.CONVENTIONAL):
    """Largest change in any Bob outcome probability caused by Alice's choice.

    ``settings`` maps a label to a basis matrix (outcome states as columns);
    a plain sequence of bases is labelled by position. Defaults to the three
    Pauli eigenbases.
    """
    h.require_unbroken()
    if settings is None:
        settings = DEFAULT_BOB_BASES
    if not isinstance(settings, dict):
        settings = {f"basis[{i}]": b for i, b in enumerate(settings)}
    if not settings:
        raise ValueError("at least one Bob basis is required")

    plus = run_protocol(h, AliceBit.PLUS, norm)
    minus = run_protocol(h, AliceBit.MINUS, norm)
    worst, where = -1.0, None
    for label, basis in settings.items():
        diff = np.abs(bob_outcome_probabilities(plus, basis)
                      - bob_outcome_probabilities(minus, basis))
        b = int(np.argmax(diff))
        if diff[b] > worst:
            worst, where = float(diff[b]), f"A+=I, A-=sigma_x, B={label}, b={b}"
    return NoSignalReport(worst, h.alpha, where, worst <= tol, tol)


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    gap_analytic: float
    gap_numeric: float
    marginal_plus: float
    marginal_minus: float
    bob_trace_distance: float

    FIELDS = ("alpha", "gap_analytic", "gap_numeric", "marginal_plus",
              "marginal_minus", "bob_trace_distance")

    def as_dict(self):
        return {k: getattr(self, k) for k in self.FIELDS}


def _record(alpha, s, norm):
    h = make_hamiltonian(s, alpha)
    plus = run_protocol(h, AliceBit.PLUS, norm)
    minus = run_protocol(h, AliceBit.MINUS, norm)
    mp = bob_marginal(joint_probabilities(plus))[0]
    mm = bob_marginal(joint_probabilities(minus))[0]
    return SweepRecord(
        alpha=alpha,
        gap_analytic=signaling_gap_analytic(alpha),
        gap_numeric=mp - mm,
        marginal_plus=mp,
        marginal_minus=mm,
        bob_trace_distance=trace_distance(bob_state(plus), bob_state(minus)),
    )


def _workers():
    raw = os.environ.get("PTSIM_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"PTSIM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"PTSIM_THREADS must be a positive integer, got {raw!r}")
    return n


def sweep_alpha(alpha_start, alpha_end, steps, norm=Normalization.CONVENTIONAL, s=1.0):
    """One :class:`SweepRecord` per point of an inclusive uniform alpha grid.

    Endpoints beyond ``+-(pi/2 - 1e-6)`` are clipped with a
    :class:`ClippedRangeWarning`. Records come back in ascending alpha
    regardless of how many threads (``PTSIM_THREADS``) evaluate them.
    """
    if not (math.isfinite(alpha_start) and math.isfinite(alpha_end)):
        raise ValueError("sweep endpoints must be finite")
    if steps < 2:
        raise ValueError(f"steps must be at least 2, got {steps}")
    if alpha_start >= alpha_end:
        raise ValueError(f"alpha_start ({alpha_start}) must be below alpha_end ({alpha_end})")
    lo = max(alpha_start, -ALPHA_LIMIT)
    hi = min(alpha_end, ALPHA_LIMIT)
    if (lo, hi) != (alpha_start, alpha_end):
        warnings.warn(
            f"sweep range [{alpha_start}, {alpha_end}] clipped to [{lo}, {hi}] "
            "to stay inside the unbroken regime",
            ClippedRangeWarning, stacklevel=2,
        )
    if lo >= hi:
        raise ValueError("sweep range lies entirely outside the unbroken regime")
    grid = np.linspace(lo, hi, steps)
    norm = Normalization(norm)
    workers = _workers()
    if workers == 1:
        return [_record(float(a), s, norm) for a in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda a: _record(float(a), s, norm), grid))


@dataclass(frozen=True)
class ShotEstimate:
    shots: int
    seed: int
    p_hat_plus: float
    p_hat_minus: float
    stderr: float


def sample_shots(h, bit, shots, seed, norm=Normalization.CONVENTIONAL):
    """Emulate ``shots`` joint sigma_y measurements and estimate Bob's marginal.

    Outcomes are drawn from the exact joint table with numpy's PCG64 bit
    generator seeded by ``seed``: one ``Generator.random`` uniform per shot
    is mapped to the outcome pair through the cumulative table in the order
    (+y,+y), (+y,-y), (-y,+y), (-y,-y). The same arguments give the same
    estimate on every platform.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    h.require_unbroken()
    table = joint_probabilities(run_protocol(h, AliceBit(bit), norm))
    order = [("+y", "+y"), ("+y", "-y"), ("-y", "+y"), ("-y", "-y")]
    cdf = np.cumsum([table.p[k] for k in order])
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(shots) * cdf[-1]
    outcome = np.minimum(np.searchsorted(cdf, u, side="right"), 3)
    # Bob reads +y for outcomes 0 and 2.
    n_plus = int(np.count_nonzero((outcome == 0) | (outcome == 2)))
    p_plus = n_plus / shots
    return ShotEstimate(
        shots=int(shots),
        seed=int(seed),
        p_hat_plus=p_plus,
        p_hat_minus=1.0 - p_plus,
        stderr=math.sqrt(p_plus * (1 - p_plus) / shots),
    )
