"""PT-symmetric two-level Hamiltonians.

The family studied here is

    H(s, alpha) = s * [[i sin(alpha), 1], [1, -i sin(alpha)]]

with parity ``P = sigma_x`` and time reversal ``T`` = complex conjugation.
It has real spectrum ``+-s cos(alpha)`` while ``|sin(alpha)| < 1`` and hits
an exceptional point at ``|sin(alpha)| = 1``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    IDENTITY2,
    SIGMA_X,
    adjoint,
    as_matrix,
    as_vector,
)

__all__ = [
    "BrokenSymmetryError",
    "TrivialHamiltonianError",
    "NotCanonicalizable",
    "PTHamiltonian",
    "EigenSystem",
    "MetricOperator",
    "Canonical",
    "make_hamiltonian",
    "is_pt_symmetric",
    "eigensystem",
    "evolution_operator",
    "metric_operator",
    "hermitian_counterpart",
    "pt_inner",
    "canonicalize",
    "embed",
]

# The trace-normalized metric has eigenvalues 1 +- |sin(alpha)|. Below this
# smallest eigenvalue the metric is too ill-conditioned for the residual
# checks at 1e-10 to mean anything, and it is treated as broken.
METRIC_MIN_EIGENVALUE = 1e-8


class BrokenSymmetryError(ValueError):
    """The Hamiltonian is at or beyond the PT symmetry-breaking point."""


class TrivialHamiltonianError(ValueError):
    """``s = 0``: the level splitting vanishes and the evolution time is undefined."""


class NotCanonicalizable(ValueError):
    """A PT-symmetric matrix outside the trace-shifted standard family."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


@dataclass(frozen=True)
class PTHamiltonian:
    """``s * [[i sin a, 1], [1, -i sin a]]``.

    ``s = 0`` is allowed so the algebra can be exercised, but ``trivial`` is
    set and the protocol refuses it.
    """

    s: float
    alpha: float
    matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.s) and math.isfinite(self.alpha)):
            raise ValueError(f"s and alpha must be finite, got s={self.s}, alpha={self.alpha}")
        sa = math.sin(self.alpha)
        object.__setattr__(
            self, "matrix",
            as_matrix([[1j * self.s * sa, self.s], [self.s, -1j * self.s * sa]]),
        )

    @property
    def trivial(self):
        return self.s == 0

    @property
    def unbroken(self):
        return abs(math.sin(self.alpha)) < 1.0

    @property
    def energy(self):
        """``s cos(alpha)``; the eigenvalues are plus and minus this."""
        return self.s * math.cos(self.alpha)

    def require_unbroken(self):
        if not self.unbroken:
            raise BrokenSymmetryError(
                f"alpha={self.alpha!r} is at or beyond the PT symmetry-breaking "
                "point |sin(alpha)| = 1 (alpha = +-pi/2): the spectrum is not real"
            )


def make_hamiltonian(s, alpha):
    return PTHamiltonian(float(s), float(alpha))


def is_pt_symmetric(m, tol=1e-12):
    """True if ``sigma_x conj(m) sigma_x == m`` entrywise within ``tol``."""
    m = as_matrix(m, (2, 2))
    return bool(np.max(np.abs(SIGMA_X @ np.conj(m) @ SIGMA_X - m)) <= tol)


@dataclass(frozen=True)
class EigenSystem:
    e_plus: float
    e_minus: float
    v_plus: np.ndarray
    v_minus: np.ndarray

    @property
    def delta_e(self):
        return self.e_plus - self.e_minus

    @property
    def tau(self):
        """Evolution time ``pi / delta_e`` used by the signaling protocol."""
        return math.pi / self.delta_e


def eigensystem(h):
    """Closed-form right eigenpairs.

    ``v_plus = e^{i a/2} / sqrt(2 cos a) * (1, e^{-i a})`` and
    ``v_minus = i e^{-i a/2} / sqrt(2 cos a) * (1, -e^{i a})`` with energies
    ``+-s cos a``. For ``cos a < 0`` the square root is taken on the
    principal complex branch; the vectors remain eigenvectors.
    """
    h.require_unbroken()
    a = h.alpha
    norm = cmath.sqrt(2 * math.cos(a))
    v_plus = cmath.exp(0.5j * a) / norm * np.array([1, cmath.exp(-1j * a)])
    v_minus = 1j * cmath.exp(-0.5j * a) / norm * np.array([1, -cmath.exp(1j * a)])
    return EigenSystem(h.energy, -h.energy, as_vector(v_plus), as_vector(v_minus))


def evolution_operator(h, t):
    """``exp(-i t H)`` in closed form.

    ``(1/cos a) [[cos(t' - a), -i sin t'], [-i sin t', cos(t' + a)]]`` with
    ``t' = s cos(a) t``, i.e. half the level splitting times ``t``.
    """
    h.require_unbroken()
    a = h.alpha
    tp = h.energy * t
    c = math.cos(a)
    return as_matrix([
        [math.cos(tp - a) / c, -1j * math.sin(tp) / c],
        [-1j * math.sin(tp) / c, math.cos(tp + a) / c],
    ])


@dataclass(frozen=True)
class MetricOperator:
    """Positive-definite ``eta`` with ``H^dagger eta = eta H``, ``tr(eta) = 2``."""

    eta: np.ndarray
    alpha: float

    def sqrt(self):
        """Principal square root ``rho`` with ``rho @ rho == eta``."""
        w, v = np.linalg.eigh(self.eta)
        return as_matrix(v @ np.diag(np.sqrt(w)) @ adjoint(v))


# Real coordinates of a Hermitian 2x2 matrix:
# [[x0, x2 + i x3], [x2 - i x3, x1]].
_HERMITIAN_BASIS = [
    np.array([[1, 0], [0, 0]], dtype=complex),
    np.array([[0, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
]


def _pseudo_hermitian_solutions(m):
    """Orthonormal basis (real coordinates) of Hermitian ``X`` with ``m^dag X = X m``."""
    md = adjoint(m)
    cols = []
    for b in _HERMITIAN_BASIS:
        r = md @ b - b @ m
        cols.append(np.concatenate([r.real.ravel(), r.imag.ravel()]))
    a = np.array(cols).T  # 8 x 4 real system
    _, sv, vt = np.linalg.svd(a)
    scale = max(sv[0], 1.0)
    rank = int(np.sum(sv > 1e-12 * scale))
    return vt[rank:]


def _from_coords(x):
    return sum(c * b for c, b in zip(x, _HERMITIAN_BASIS))


def metric_operator(h):
    """Metric for the PT inner product.

    Solves ``H^dagger eta = eta H`` over Hermitian ``eta``. In two
    dimensions the positive solutions with ``tr(eta) = 2`` form an open
    segment; the one returned is the midpoint, which maximises the smallest
    eigenvalue and equals the identity at ``alpha = 0``.
    """
    h.require_unbroken()
    if h.trivial:
        raise TrivialHamiltonianError("s = 0: every Hermitian matrix is a metric")
    null = _pseudo_hermitian_solutions(h.matrix)
    mats = [_from_coords(x) for x in null]
    traces = np.array([np.trace(x).real for x in mats])

    # Parametrise the trace-2 slice as base + sum_k c_k * traceless_k.
    k = int(np.argmax(np.abs(traces)))
    if abs(traces[k]) < 1e-12:
        raise BrokenSymmetryError("no trace-normalisable metric exists")
    base = 2 * mats[k] / traces[k]
    directions = [x - traces[j] / traces[k] * mats[k]
                  for j, x in enumerate(mats) if j != k]

    # Smallest eigenvalue of a trace-2 Hermitian 2x2 is 1 - |traceless part|,
    # so maximising it is a least-squares problem on the traceless part.
    def traceless(x):
        return x - 0.5 * np.trace(x) * IDENTITY2

    if directions:
        lhs = np.array([np.concatenate([traceless(d).real.ravel(), traceless(d).imag.ravel()])
                        for d in directions]).T
        rhs = -np.concatenate([traceless(base).real.ravel(), traceless(base).imag.ravel()])
        coef, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
        eta = base + sum(c * d for c, d in zip(coef, directions))
    else:
        eta = base
    eta = 0.5 * (eta + adjoint(eta))

    lowest = float(np.linalg.eigvalsh(eta)[0])
    if lowest < METRIC_MIN_EIGENVALUE:
        raise BrokenSymmetryError(
            f"alpha={h.alpha!r} is numerically at the PT symmetry-breaking point: "
            f"the metric's smallest eigenvalue is {lowest:.3g}"
        )
    return MetricOperator(as_matrix(eta), h.alpha)


def hermitian_counterpart(h, eta):
    """Similar Hermitian Hamiltonian ``rho H rho^{-1}`` with ``rho = eta^{1/2}``."""
    rho = eta.sqrt()
    return as_matrix(rho @ h.matrix @ np.linalg.inv(rho))


def pt_inner(u, v, eta):
    """``u^dagger eta v``."""
    u = as_vector(u)
    v = as_vector(v)
    e = eta.eta if isinstance(eta, MetricOperator) else as_matrix(eta)
    if not (u.size == v.size == e.shape[0]):
        raise ValueError(f"dimension mismatch: {u.size}, {v.size}, metric {e.shape}")
    return complex(np.vdot(u, e @ v))


@dataclass(frozen=True)
class Canonical:
    s: float
    alpha: float
    shift: float


def canonicalize(m, tol=1e-12):
    """Write a PT-symmetric ``m`` as ``shift * I + H(s, alpha)``.

    Only matrices whose traceless part already has equal, real off-diagonal
    entries are handled; recovering ``(s, alpha)`` through a change of basis
    is not attempted.

    Raises
    ------
    ValueError
        If ``m`` is not PT-symmetric.
    NotCanonicalizable
        If ``m`` is a multiple of the identity or lies outside the family.
    """
    m = as_matrix(m, (2, 2))
    if not is_pt_symmetric(m, tol):
        raise ValueError("matrix is not PT-symmetric under P = sigma_x")
    shift = 0.5 * (m[0, 0] + m[1, 1])
    if abs(shift.imag) > tol:
        raise ValueError("trace of a PT-symmetric matrix must be real")
    shift = shift.real
    diag = m[0, 0] - shift  # i * s * sin(alpha)
    off = m[0, 1]
    scale = max(1.0, abs(shift))
    if abs(off) <= tol * scale and abs(diag) <= tol * scale:
        raise NotCanonicalizable("trivial: multiple of identity")
    if abs(off.imag) > tol * scale:
        raise NotCanonicalizable("off-diagonal entries are not real; a basis change would be needed")
    s = off.real
    if abs(s) <= tol * scale:
        raise NotCanonicalizable("zero coupling with nonzero diagonal: outside the family")
    ratio = diag.imag / s
    if abs(ratio) > 1.0 + tol:
        raise NotCanonicalizable("|Im diagonal| exceeds the coupling: outside the family")
    alpha = math.asin(max(-1.0, min(1.0, ratio)))
    return Canonical(s, alpha, shift)


def embed(h, n, filler=0.0):
    """Direct sum ``H (+) filler * I_{n-2}``."""
    if n < 2:
        raise ValueError(f"embedding dimension must be at least 2, got {n}")
    out = np.zeros((n, n), dtype=complex)
    out[:2, :2] = h.matrix
    out[2:, 2:] = filler * np.eye(n - 2)
    return as_matrix(out)
