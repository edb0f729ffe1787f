"""Local PT-symmetric qubit dynamics and the no-signaling test."""

from .analysis import check_no_signaling, sample_shots, sweep_alpha
from .protocol import (
    AliceBit,
    Normalization,
    run_protocol,
    signaling_gap_analytic,
    signaling_gap_numeric,
)
from .pt_core import (
    BrokenSymmetryError,
    TrivialHamiltonianError,
    eigensystem,
    evolution_operator,
    make_hamiltonian,
    metric_operator,
)

__version__ = "0.1.0"

__all__ = [
    "AliceBit",
    "BrokenSymmetryError",
    "Normalization",
    "TrivialHamiltonianError",
    "check_no_signaling",
    "eigensystem",
    "evolution_operator",
    "make_hamiltonian",
    "metric_operator",
    "run_protocol",
    "sample_shots",
    "signaling_gap_analytic",
    "signaling_gap_numeric",
    "sweep_alpha",
]
