"""Dense complex 2x2 matrix algebra.

Matrices are plain ``numpy`` arrays of shape ``(2, 2)`` and dtype ``complex128``.
Matrix functions are evaluated in closed form from the two eigenvalues of the
characteristic quadratic (spectral / Sylvester decomposition) rather than by
series, so the branch of the logarithm is always explicit.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import BranchError, InvariantViolation, NonPhysicalTrace, SingularMatrix

SINGULAR_TOL = 1e-12
TRACE_TOL = 1e-9
BRANCH_TOL = 1e-9

IDENTITY = np.eye(2, dtype=complex)
SIGMA_B = np.array([[0, 1], [-1, 0]], dtype=complex)
SIGMA_B_INV = np.array([[0, -1], [1, 0]], dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


def c2mat(entries) -> np.ndarray:
    """Coerce ``entries`` to a finite complex 2x2 array."""
    m = np.array(entries, dtype=complex)
    if m.shape != (2, 2):
        raise InvariantViolation(f"expected a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantViolation("matrix has non-finite entries")
    return m


def det2(m: np.ndarray) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def inv2(m: np.ndarray, tol: float = SINGULAR_TOL) -> np.ndarray:
    """Inverse by the adjugate formula.

    ``tol`` is relative to the largest entry magnitude.
    """
    scale = float(np.max(np.abs(m)))
    d = det2(m)
    if scale == 0.0 or abs(d) <= tol * scale * scale:
        raise SingularMatrix(f"matrix is singular (det={d:.3e})")
    adj = np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]], dtype=complex)
    return adj / d


def quad_roots_unit_product(trace: float, tol: float = TRACE_TOL) -> tuple[float, float]:
    """Roots of ``x**2 - trace*x + 1 = 0`` as ``(small, large)`` with ``small*large == 1``.

    The large root is computed first and the small one as its reciprocal,
    which avoids cancellation when ``trace`` is big.
    """
    trace = float(trace)
    if not math.isfinite(trace) or trace < 2.0 - tol:
        raise NonPhysicalTrace(f"trace {trace!r} < 2: eigenvalues are not real and positive")
    disc = max(trace * trace - 4.0, 0.0)
    large = 0.5 * (trace + math.sqrt(disc))
    return 1.0 / large, large


def _eig2(m: np.ndarray) -> tuple[complex, complex]:
    half_tr = 0.5 * complex(m[0, 0] + m[1, 1])
    q = cmath.sqrt(half_tr * half_tr - det2(m))
    return half_tr + q, half_tr - q


def expm2(m: np.ndarray) -> np.ndarray:
    """Matrix exponential of a 2x2 matrix.

    With ``m = t*I + R`` and ``R**2 = q**2 * I`` this is
    ``exp(t) * (cosh(q) I + sinh(q)/q R)``, exact for any ``m``.
    """
    half_tr = 0.5 * complex(m[0, 0] + m[1, 1])
    r = m - half_tr * IDENTITY
    q = cmath.sqrt(-det2(r))
    shq = cmath.sinh(q) / q if abs(q) > 1e-8 else 1.0 + q * q / 6.0
    return cmath.exp(half_tr) * (cmath.cosh(q) * IDENTITY + shq * r)


def funm2(m: np.ndarray, f) -> np.ndarray:
    """``f(m)`` for a scalar function ``f`` via the spectral (Sylvester) form.

    ``f(m) = f(l1) (m - l2 I)/(l1 - l2) + f(l2) (m - l1 I)/(l2 - l1)``; for a
    repeated eigenvalue ``m`` must be a multiple of the identity.
    """
    l1, l2 = _eig2(m)
    gap = l1 - l2
    if abs(gap) <= 1e-12 * max(1.0, abs(l1)):
        if np.max(np.abs(m - l1 * IDENTITY)) > 1e-9 * max(1.0, abs(l1)):
            raise BranchError("defective matrix: repeated eigenvalue without full eigenspace")
        return f(l1) * IDENTITY
    f1, f2 = f(l1), f(l2)
    mid = 0.5 * (l1 + l2)
    # centred form keeps the identity part free of cancellation
    return 0.5 * (f1 + f2) * IDENTITY + (f1 - f2) / gap * (m - mid * IDENTITY)


def log_unimodular(m: np.ndarray, tol: float = BRANCH_TOL) -> np.ndarray:
    """Principal logarithm of a unit-determinant matrix with real positive eigenvalues.

    The result is traceless with eigenvalues ``log(small)`` and ``-log(small)``.
    """
    d = det2(m)
    # rounding in det grows with the products of entries it cancels
    if abs(d - 1.0) > tol * max(1.0, abs(m[0, 0] * m[1, 1]), abs(m[0, 1] * m[1, 0])):
        raise BranchError(f"det = {d} is not 1")
    tr = complex(m[0, 0] + m[1, 1])
    scale = max(1.0, abs(tr))
    if abs(tr.imag) > tol * scale:
        raise BranchError(f"trace {tr} is not real: eigenvalues are complex")
    try:
        small, large = quad_roots_unit_product(tr.real, tol=tol * scale)
    except NonPhysicalTrace as exc:
        raise BranchError(str(exc)) from exc
    if large - small <= 1e-7:
        # Double eigenvalue 1: only the identity has a real principal log here.
        if np.max(np.abs(m - IDENTITY)) > 1e-6:
            raise BranchError("defective matrix with eigenvalue 1 has no diagonalisable log")
        return np.zeros((2, 2), dtype=complex)
    # Sylvester with log(L) = -log(s): log(m) = log(s) (2m - (s + L) I) / (s - L)
    ls = math.log(small)
    return ls * (2.0 * m - (small + large) * IDENTITY) / (small - large)
