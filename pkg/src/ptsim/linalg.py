"""Small dense complex linear algebra for qubit and two-qubit operators.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``.
Composite systems are ordered Alice-first and row-major: the joint basis
index of ``|i>_A |k>_B`` is ``i * dim_b + k``.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "DefectiveMatrixError",
    "as_vector",
    "as_matrix",
    "adjoint",
    "tensor_product",
    "partial_trace_first",
    "eig2",
    "expm_oracle",
    "trace_distance",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "IDENTITY2",
]

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _m in (IDENTITY2, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.flags.writeable = False

# eig2 reports a defective matrix when both the eigenvalue gap and
# 1 - |<v1|v2>| fall below this.
DEFECT_TOL = 1e-8


class DefectiveMatrixError(ArithmeticError):
    """Raised when a 2x2 matrix has a single (repeated) eigenvector."""

    def __init__(self, eigenvalue, eigenvector):
        self.eigenvalue = eigenvalue
        self.eigenvector = eigenvector
        super().__init__(
            f"defective matrix: repeated eigenvalue {eigenvalue:.6g} "
            "with a single eigenvector"
        )


def _frozen(a):
    a.flags.writeable = False
    return a


def as_vector(entries, dim=None):
    """Validate and return ``entries`` as an immutable complex vector."""
    v = np.array(entries, dtype=complex).reshape(-1)
    if v.size == 0:
        raise ValueError("vector must have positive dimension")
    if dim is not None and v.size != dim:
        raise ValueError(f"expected dimension {dim}, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector entries must be finite")
    return _frozen(v)


def as_matrix(entries, shape=None):
    """Validate and return ``entries`` as an immutable complex matrix."""
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or 0 in m.shape:
        raise ValueError(f"expected a non-empty 2-d array, got shape {m.shape}")
    if shape is not None and m.shape != tuple(shape):
        raise ValueError(f"expected shape {tuple(shape)}, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return _frozen(m)


def adjoint(m):
    """Conjugate transpose."""
    return _frozen(np.conj(np.asarray(m, dtype=complex)).T.copy())


def tensor_product(a, b):
    """Kronecker product ``a (x) b``, first factor being Alice's subsystem.

    Entry ``(i*rows_b + k, j*cols_b + l)`` of the result is ``a[i, j] * b[k, l]``.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    return _frozen(np.kron(a, b))


def partial_trace_first(rho, dim_a=2, dim_b=2):
    """Trace out the first (Alice) factor of a ``dim_a*dim_b`` square operator.

    ``result[k, l] = sum_i rho[i*dim_b + k, i*dim_b + l]``.
    """
    rho = np.asarray(rho, dtype=complex)
    n = dim_a * dim_b
    if rho.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} operator, got shape {rho.shape}")
    return _frozen(np.einsum("ikil->kl", rho.reshape(dim_a, dim_b, dim_a, dim_b)))


def _null_vector(m, lam):
    """Unit vector spanning the kernel of ``m - lam*I`` (None if that is zero)."""
    a, b = m[0, 0] - lam, m[0, 1]
    c, d = m[1, 0], m[1, 1] - lam
    # Two candidate kernel vectors, one from each row; keep the better scaled.
    cands = [np.array([b, -a]), np.array([-d, c])]
    v = max(cands, key=lambda x: np.linalg.norm(x))
    n = np.linalg.norm(v)
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(lam), 1.0)
    if n <= 1e-14 * scale:
        return None
    return v / n


def eig2(m):
    """Eigenpairs of a 2x2 matrix from the characteristic quadratic.

    Returns ``[(lambda_1, v_1), (lambda_2, v_2)]`` ordered by decreasing real
    part, ties broken by decreasing imaginary part. Eigenvectors have unit
    2-norm.

    Raises
    ------
    DefectiveMatrixError
        If the two eigenvalues coincide and only one eigenvector exists.
    """
    m = as_matrix(m, (2, 2))
    half_tr = 0.5 * (m[0, 0] + m[1, 1])
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    root = np.sqrt(complex(half_tr * half_tr - det))
    # Avoid cancellation: compute the larger-magnitude root first.
    if abs(half_tr + root) >= abs(half_tr - root):
        l1 = half_tr + root
    else:
        l1 = half_tr - root
    l2 = det / l1 if l1 != 0 else 2 * half_tr - l1
    lams = sorted([complex(l1), complex(l2)],
                  key=lambda z: (round(z.real, 12), round(z.imag, 12)),
                  reverse=True)

    v1 = _null_vector(m, lams[0])
    v2 = _null_vector(m, lams[1])
    if v1 is None and v2 is None:
        # m is a multiple of the identity.
        v1 = np.array([1, 0], dtype=complex)
        v2 = np.array([0, 1], dtype=complex)
    elif v1 is None or v2 is None:
        # One root is numerically isolated from the other; reuse the good one.
        v = v1 if v1 is not None else v2
        raise DefectiveMatrixError(0.5 * (lams[0] + lams[1]), _frozen(v))
    gap = abs(lams[0] - lams[1])
    scale = max(1.0, abs(lams[0]), abs(lams[1]))
    alignment = 1.0 - abs(np.vdot(v1, v2))
    if gap < DEFECT_TOL * scale and alignment < DEFECT_TOL:
        raise DefectiveMatrixError(0.5 * (lams[0] + lams[1]), _frozen(v1))
    return [(lams[0], _frozen(v1)), (lams[1], _frozen(v2))]


def _one_norm(m):
    return float(np.max(np.sum(np.abs(m), axis=0)))


# Taylor order used after scaling to one-norm <= 1/2: the remainder bound
# (1/2)^(K+1)/(K+1)! is below 1e-20 for K = 18.
_TAYLOR_ORDER = 18


def expm_oracle(m, t):
    """``exp(-i t m)`` by scaling and squaring a truncated Taylor series.

    The argument is scaled by ``2**-j`` until its one-norm is at most 1/2,
    the series is summed to order 18 (truncation below 1e-20 relative) and
    the result is squared ``j`` times. Used as an independent check of
    closed-form propagators, not as a production integrator.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("expm_oracle needs a square matrix")
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    a = -1j * t * m
    norm = _one_norm(a)
    j = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    a = a / (2.0 ** j)

    n = m.shape[0]
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, _TAYLOR_ORDER + 1):
        term = term @ a / k
        result = result + term
    for _ in range(j):
        result = result @ result
    return _frozen(result)


def trace_distance(rho, sigma):
    """Half the trace norm of ``rho - sigma`` for 2x2 Hermitian operators.

    Uses the closed-form eigenvalues of the 2x2 Hermitian difference.
    """
    d = np.asarray(rho, dtype=complex) - np.asarray(sigma, dtype=complex)
    if d.shape != (2, 2):
        raise ValueError("trace_distance is implemented for 2x2 operators")
    a, dd = d[0, 0].real, d[1, 1].real
    b = d[0, 1]
    mean = 0.5 * (a + dd)
    radius = math.hypot(0.5 * (a - dd), abs(b))
    return float(0.5 * (abs(mean + radius) + abs(mean - radius)))
