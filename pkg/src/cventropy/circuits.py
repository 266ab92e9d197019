"""Beam splitter acting on two single-mode squeezed vacua.

The state is ``B(theta, phi) S1(zeta1) S2(zeta2) |00>`` with

    B(theta, phi) = exp[theta (a1^dag a2 e^{i phi} - a1 a2^dag e^{-i phi})]
    S(zeta)       = exp[(zeta^* a^2 - zeta a^dag^2) / 2]
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPhase, InvariantViolation, ProductState
from .gaussian import (
    GaussianCoeffState,
    ReducedGaussian,
    entropy_from_lambda,
    entropy_gaussian,
    reduce,
)
from .matcore import quad_roots_unit_product

MAX_SQUEEZING = 5.0
PRODUCT_TOL = 1e-12
PHASE_TOL = 1e-9


@dataclass(frozen=True)
class CircuitParams:
    theta: float
    phi: float
    zeta1: complex
    zeta2: complex

    def __post_init__(self):
        object.__setattr__(self, "zeta1", complex(self.zeta1))
        object.__setattr__(self, "zeta2", complex(self.zeta2))
        for name in ("theta", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise InvariantViolation(f"{name} must be finite")
        for name in ("zeta1", "zeta2"):
            z = getattr(self, name)
            if not cmath.isfinite(z):
                raise InvariantViolation(f"{name} must be finite")
            if abs(z) >= MAX_SQUEEZING:
                raise InvariantViolation(
                    f"{name}: |{name}| = {abs(z):.6g} exceeds max squeezing {MAX_SQUEEZING}"
                )

    @classmethod
    def tmsv(cls, r: float) -> "CircuitParams":
        """Parameters producing the two-mode squeezed vacuum of strength ``r``."""
        return cls(theta=math.pi / 4, phi=0.0, zeta1=-r, zeta2=r)


@dataclass(frozen=True)
class CircuitCoeffs:
    alpha: complex
    beta_c: complex
    delta: complex


def _phase_tanh(zeta: complex) -> complex:
    # zeta/|zeta| * tanh|zeta|, continuous at zeta = 0
    r = abs(zeta)
    if r == 0.0:
        return 0j
    return zeta / r * math.tanh(r)


def circuit_coeffs(p: CircuitParams) -> CircuitCoeffs:
    t1 = _phase_tanh(p.zeta1)
    t2 = _phase_tanh(p.zeta2)
    cos2 = math.cos(p.theta) ** 2
    sin2 = math.sin(p.theta) ** 2
    e2 = cmath.exp(2j * p.phi)
    alpha = t1 * cos2 + e2 * t2 * sin2
    beta_c = t1 * sin2 / e2 + t2 * cos2
    delta = 0.5 * math.sin(2 * p.theta) * (
        t2 * cmath.exp(1j * p.phi) - t1 * cmath.exp(-1j * p.phi)
    )
    return CircuitCoeffs(alpha, beta_c, delta)


def _a0(p: CircuitParams) -> float:
    return 1.0 / (math.cosh(abs(p.zeta1)) * math.cosh(abs(p.zeta2)))


def bs_squeeze_coeffs(p: CircuitParams) -> GaussianCoeffState:
    """Normally ordered coefficient matrices of the circuit output."""
    k = circuit_coeffs(p)
    M1 = -np.array([[k.alpha, 1], [1, np.conj(k.alpha)]], dtype=complex)
    M2 = -np.array([[k.beta_c, 1], [1, np.conj(k.beta_c)]], dtype=complex)
    M12 = -np.array([[k.delta, 0], [0, np.conj(k.delta)]], dtype=complex)
    return GaussianCoeffState(M1=M1, M2=M2, M12=M12, A0=_a0(p))


def reduced_from_circuit(p: CircuitParams, tol: float = PRODUCT_TOL) -> ReducedGaussian:
    """Reduced state straight from the circuit coefficients (no matrix inversion)."""
    k = circuit_coeffs(p)
    ad = abs(k.delta)
    if ad <= tol:
        raise ProductState(f"|delta| = {ad:.3e}: beam splitter output is a product state")
    one_minus_b2 = 1.0 - abs(k.beta_c) ** 2
    c = one_minus_b2 / ad**2
    d = (k.delta**2 * np.conj(k.beta_c) + k.alpha * one_minus_b2) / ad**2
    b = -np.conj(d)
    a = ((1.0 + b * d) / c).real
    A = _a0(p) / ad
    return ReducedGaussian(a=a, b=complex(b), c=c, d=complex(d), A=A)


def entropy_formula(A: float, lam: float) -> float:
    """``A sqrt(lam)/|lam - 1| [-ln A - (1 + lam)/(2 (1 - lam)) ln lam]``.

    Symmetric under ``lam -> 1/lam``, so either root may be supplied.
    """
    pref = A * math.sqrt(lam) / abs(lam - 1.0)
    return pref * (-math.log(A) - (1.0 + lam) / (2.0 * (1.0 - lam)) * math.log(lam))


def entropy_closed_form(p: CircuitParams) -> float:
    """Entanglement entropy (nats) of the circuit output, zero for product states."""
    try:
        red = reduced_from_circuit(p)
    except ProductState:
        return 0.0
    lam, _ = quad_roots_unit_product(red.a + red.c)
    if lam >= 1.0 - 1e-12:
        # same divergence handling as the lambda route
        return entropy_from_lambda(lam)
    return entropy_formula(red.A, lam)


def special_case_entropy(s1: float, s2: float, phi: float, l_check: int) -> float:
    """Entropy of the 50:50 splitter case as ``cosh^2|s| ln cosh^2|s| - sinh^2|s| ln sinh^2|s|``.

    ``s = (s1 e^{i phi} + s2 e^{-i phi}) / 2`` and ``phi`` must equal
    ``l_check * pi / 2``.  It coincides with the circuit entropy for
    ``zeta1 = -s1 e^{i phi}``, ``zeta2 = s2 e^{i phi}`` (see
    :func:`special_case_params`).
    """
    if abs(phi - l_check * math.pi / 2) > PHASE_TOL:
        raise InvalidPhase(f"phi = {phi!r} is not {l_check} * pi/2")
    s = 0.5 * (s1 * cmath.exp(1j * phi) + s2 * cmath.exp(-1j * phi))
    return tmsv_entropy(abs(s))


def special_case_params(s1: float, s2: float, phi: float) -> CircuitParams:
    return CircuitParams(
        theta=math.pi / 4,
        phi=phi,
        zeta1=-s1 * cmath.exp(1j * phi),
        zeta2=s2 * cmath.exp(1j * phi),
    )


def tmsv_entropy(r: float) -> float:
    if r < 0 or not math.isfinite(r):
        raise InvariantViolation(f"r = {r!r} must be finite and >= 0")
    if r == 0.0:
        return 0.0
    ch2 = math.cosh(r) ** 2
    sh2 = math.sinh(r) ** 2
    return ch2 * math.log(ch2) - sh2 * math.log(sh2)


def circuit_entropy(p: CircuitParams, check: bool = False) -> float:
    """Entropy through the generic reduction of the circuit's coefficient state."""
    try:
        return entropy_gaussian(reduce(bs_squeeze_coeffs(p)), check=check)
    except ProductState:
        return 0.0
