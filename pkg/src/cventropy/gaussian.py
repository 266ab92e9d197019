"""Normally ordered two-mode Gaussian density operators and their entanglement.

A pure two-mode Gaussian state (without displacement) is written as

    rho12 = A0 : exp{ 1/2 [ v1^T M1 v1 + v2^T M2 v2 + 2 v1^T M12 v2 ] } :

with ``vi = (ai^dagger, ai)``.  Tracing out mode 2 leaves a single-mode
normally ordered Gaussian with coefficient matrix ``K = M1 - M12 M2^-1 M12^T``,
which is re-expressed in exponential (un-ordered) form through a unit
determinant matrix ``M = ((a, d), (b, c))``.  The eigenvalues of ``M`` are
``lam`` and ``1/lam`` and the reduced spectrum is geometric with ratio ``lam``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateReduction,
    DivergentPartition,
    EntropyDiverges,
    FormulaMismatch,
    InvariantViolation,
    ProductState,
)
from .matcore import (
    IDENTITY,
    SIGMA_B_INV,
    SIGMA_X,
    c2mat,
    det2,
    expm2,
    funm2,
    inv2,
    log_unimodular,
    quad_roots_unit_product,
)

INVARIANT_TOL = 1e-9
DMAP_TOL = 1e-9
PRODUCT_TOL = 1e-12
DIVERGENCE_TOL = 1e-12
ROUTE_TOL = 1e-9


def _tol(m: np.ndarray, tol: float) -> float:
    return tol * max(1.0, float(np.max(np.abs(m))))


@dataclass(frozen=True)
class GaussianCoeffState:
    """Coefficients of a normally ordered two-mode Gaussian density operator."""

    M1: np.ndarray
    M2: np.ndarray
    M12: np.ndarray
    A0: float

    def __post_init__(self):
        for name in ("M1", "M2", "M12"):
            object.__setattr__(self, name, c2mat(getattr(self, name)))
        self.validate()

    def validate(self, tol: float = INVARIANT_TOL) -> None:
        if not (math.isfinite(self.A0) and self.A0 > 0):
            raise InvariantViolation(f"A0 positivity: A0 = {self.A0!r} must be > 0")
        for name in ("M1", "M2"):
            m = getattr(self, name)
            if abs(m[0, 1] - m[1, 0]) > _tol(m, tol):
                raise InvariantViolation(f"{name} symmetry: off-diagonal entries differ")
            if np.max(np.abs(SIGMA_X @ m @ SIGMA_X - m.conj())) > _tol(m, tol):
                raise InvariantViolation(
                    f"{name} swap-conjugation: sigma1 {name} sigma1 != conj({name})"
                )
        m = self.M12
        if abs(m[1, 1] - np.conj(m[0, 0])) > _tol(m, tol) or abs(
            m[1, 0] - np.conj(m[0, 1])
        ) > _tol(m, tol):
            raise InvariantViolation("M12 shape: expected ((e, f), (f*, e*))")


@dataclass(frozen=True)
class ReducedGaussian:
    """Single-mode reduced state: ``M = ((a, d), (b, c))`` with ``det M = 1`` and prefactor ``A``."""

    a: float
    b: complex
    c: float
    d: complex
    A: float

    def __post_init__(self):
        tol = INVARIANT_TOL * max(1.0, abs(self.a), abs(self.c), abs(self.b), abs(self.d))
        if abs(self.b + np.conj(self.d)) > tol:
            raise InvariantViolation("reduced state: b != -conj(d)")
        if abs(self.a * self.c - self.b * self.d - 1.0) > tol:
            raise InvariantViolation("reduced state: det M != 1")
        if self.a + self.c < 2.0 - tol:
            raise InvariantViolation("reduced state: a + c < 2, eigenvalues not real")
        if not self.A > 0:
            raise InvariantViolation("reduced state: A must be positive")

    @property
    def M(self) -> np.ndarray:
        return np.array([[self.a, self.d], [self.b, self.c]], dtype=complex)

    @property
    def roots(self) -> tuple[float, float]:
        return quad_roots_unit_product(self.a + self.c)

    @property
    def lam(self) -> float:
        """Ratio of the geometric reduced spectrum, the root in (0, 1]."""
        return self.roots[0]

    @property
    def normalization(self) -> float:
        """``A sqrt(lam) / (1 - lam)``, i.e. the trace of the reduced operator."""
        lam = self.lam
        if lam >= 1.0:
            return math.inf
        return self.A * math.sqrt(lam) / (1.0 - lam)


def reduce(state: GaussianCoeffState, tol: float = DMAP_TOL) -> ReducedGaussian:
    """Trace out mode 2 and recover ``(a, b, c, d, A)`` by inverting the D-map.

    Raises ``ProductState`` when the modes are uncorrelated (``1/c`` vanishes).
    """
    C = state.M12 @ inv2(state.M2) @ state.M12.T
    K = state.M1 - C
    X = K @ SIGMA_B_INV
    scale = _tol(X, tol)
    # X[1, 1] = -K[1, 0]; grouping (1 + M1[1, 0]) first avoids cancelling
    # against the -1 that every pure state carries there
    inv_c = (1.0 + state.M1[1, 0]) - C[1, 0]
    if abs(X[0, 0] - (inv_c - 1.0)) > scale:
        raise DegenerateReduction(
            f"D-map inconsistency: diagonal entries {X[0, 0]:.6g} and {X[1, 1]:.6g} "
            "are not of the form (1/c - 1, 1 - 1/c)"
        )
    if abs(inv_c.imag) > scale:
        raise DegenerateReduction(f"D-map gives complex 1/c = {inv_c}")
    inv_c = inv_c.real
    if abs(inv_c) <= PRODUCT_TOL:
        raise ProductState("reduced coefficient 1/c vanishes: modes are uncorrelated")
    if inv_c < 0:
        raise DegenerateReduction(f"D-map gives negative c = {1 / inv_c:.6g}")
    c = 1.0 / inv_c
    d = complex(c * X[0, 1])
    b = complex(c * X[1, 0])
    a = (1.0 + b * d) / c
    if abs(a.imag) > scale:
        raise DegenerateReduction(f"D-map gives complex a = {a}")
    minus_det = -det2(state.M2)
    if abs(minus_det.imag) > scale or minus_det.real <= 0:
        raise DegenerateReduction(f"-det M2 = {minus_det} is not positive")
    A = state.A0 * math.sqrt(c / minus_det.real)
    try:
        return ReducedGaussian(a=a.real, b=b, c=c, d=d, A=A)
    except InvariantViolation as exc:
        raise DegenerateReduction(str(exc)) from exc


def partition_function(N: np.ndarray, beta: float, tol: float = DIVERGENCE_TOL) -> float:
    """``|det(exp(beta N) - 1)|**-0.5``."""
    dt = abs(det2(funm2(N, lambda x: cmath.exp(beta * x) - 1.0)))
    if dt <= tol:
        raise DivergentPartition(f"det(exp(beta N) - 1) = {dt:.3e} vanishes")
    return dt**-0.5


def _trace_of(N: np.ndarray, f) -> float:
    return float(np.trace(funm2(N, f)).real)


def entropy_from_lambda(lam: float) -> float:
    """Entropy of the geometric spectrum ``(1 - lam) lam**n`` in nats."""
    if lam <= 0.0:
        return 0.0
    if lam >= 1.0 - DIVERGENCE_TOL:
        raise EntropyDiverges(f"lambda = {lam!r} -> 1: entropy is unbounded")
    return -math.log1p(-lam) - lam * math.log(lam) / (1.0 - lam)


def entropy_matrix_route(red: ReducedGaussian) -> float:
    """Entropy from ``log M`` and the partition function at ``beta = -1``.

    ``E = -A Z(-1) [ln A + 1/2 tr N (1 - e^N)^-1]`` with ``N = log M``.
    """
    if red.lam >= 1.0 - DIVERGENCE_TOL:
        raise EntropyDiverges(f"lambda = {red.lam!r} -> 1: entropy is unbounded")
    N = log_unimodular(red.M)
    Z = partition_function(N, -1.0)
    bracket = math.log(red.A) + 0.5 * _trace_of(N, lambda x: x / (1.0 - cmath.exp(x)))
    return -red.A * Z * bracket


def entropy_gaussian(red: ReducedGaussian, check: bool = False) -> float:
    """Entanglement entropy (nats) of the pure state whose reduction is ``red``.

    With ``check=True`` the matrix route is evaluated too and a disagreement
    beyond ``ROUTE_TOL`` raises ``FormulaMismatch``.
    """
    E = entropy_from_lambda(red.lam)
    if check:
        E_matrix = entropy_matrix_route(red)
        if abs(E - E_matrix) > ROUTE_TOL:
            raise FormulaMismatch(f"entropy routes disagree: {E!r} vs {E_matrix!r}")
    return E


def is_separable(red: ReducedGaussian, tol: float = 1e-9) -> bool:
    """Test ``ln A == 1/2 tr N (e^N - 1)^-1``."""
    if red.lam >= 1.0 - DIVERGENCE_TOL:
        return False
    N = log_unimodular(red.M)
    rhs = 0.5 * _trace_of(N, lambda x: x / (cmath.exp(x) - 1.0))
    return abs(math.log(red.A) - rhs) <= tol


def entropy_of_state(state: GaussianCoeffState) -> float:
    """Entropy of a coefficient state, with uncorrelated inputs mapped to 0."""
    try:
        return entropy_gaussian(reduce(state))
    except ProductState:
        return 0.0
