"""Reduced spectrum of a Fock state ``|n1, n2>`` sent through a real beam splitter.

With ``B = exp[theta (a1^dag a2 - a2^dag a1)]``, ``p = sin^2 theta`` and
``q = cos^2 theta``, the probability that mode 1 holds ``m`` photons is the
``alpha^n1 beta^n2`` Taylor coefficient of the generating function

    F_m(alpha, beta) = (q alpha + p beta - alpha beta)^m / (1 - p alpha - q beta)^(m + 1)

obtained by tracing mode 2 out of the normally ordered form of
``B alpha^{n1} beta^{n2} B^dag``.  The reduced state is diagonal in the Fock
basis, so these probabilities are its eigenvalues.  Coefficients are extracted
exactly in rational arithmetic: ``p`` is the exact rational value of the float
``sin(theta)**2`` and ``q = 1 - p``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import FormulaMismatch, InvariantViolation
from .fock_oracle import Spectrum, TwoModeAmplitudes, apply_beam_splitter, von_neumann_entropy

MAX_TOTAL_PHOTONS = 40
ORACLE_TOL = 1e-9


@dataclass(frozen=True)
class FockPair:
    n1: int
    n2: int
    theta: float

    def __post_init__(self):
        for name in ("n1", "n2"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise InvariantViolation(f"{name} must be a nonnegative integer, got {v!r}")
        if self.n1 + self.n2 > MAX_TOTAL_PHOTONS:
            raise InvariantViolation(
                f"n1 + n2 = {self.n1 + self.n2} exceeds max total photon number {MAX_TOTAL_PHOTONS}"
            )
        if not math.isfinite(self.theta):
            raise InvariantViolation("theta must be finite")

    @property
    def total(self) -> int:
        return self.n1 + self.n2


def _coefficient(m: int, n1: int, n2: int, p: Fraction, q: Fraction) -> Fraction:
    """``[alpha^n1 beta^n2] F_m``.

    Numerator terms ``(q alpha)^i (p beta)^j (-alpha beta)^l`` with
    ``i + j + l = m``; the denominator expands as
    ``sum_k C(m + k, k) (p alpha + q beta)^k``.  Matching total degree fixes
    ``k = n1 + n2 - m - l``.
    """
    total = Fraction(0)
    for l in range(m + 1):
        k = n1 + n2 - m - l
        if k < 0:
            break
        series = math.comb(m + k, k)
        for i in range(m - l + 1):
            j = m - l - i
            s = n1 - i - l  # power of alpha taken from (p alpha + q beta)^k
            if s < 0 or s > k:
                continue
            multinom = math.factorial(m) // (
                math.factorial(i) * math.factorial(j) * math.factorial(l)
            )
            weight = multinom * series * math.comb(k, s) * (-1) ** l
            total += weight * q ** (i + k - s) * p ** (j + s)
    return total


def bs_fock_probabilities(fp: FockPair) -> np.ndarray:
    """Mode-1 photon-number probabilities indexed by ``m = 0..n1+n2``."""
    p = Fraction(math.sin(fp.theta) ** 2)
    q = 1 - p
    return np.array(
        [float(_coefficient(m, fp.n1, fp.n2, p, q)) for m in range(fp.total + 1)]
    )


def oracle_probabilities(fp: FockPair) -> np.ndarray:
    """Same distribution from the block-unitary oracle."""
    out = apply_beam_splitter(TwoModeAmplitudes.fock(fp.n1, fp.n2), fp.theta, 0.0)
    N = fp.total
    k = np.arange(N + 1)
    return np.abs(out.psi[k, N - k]) ** 2


def bs_fock_spectrum(fp: FockPair, check: bool = True, tol: float = ORACLE_TOL) -> Spectrum:
    """Reduced-state spectrum (descending) of ``B|n1, n2>``.

    With ``check`` the labelled probabilities are compared to the oracle and a
    deviation above ``tol`` raises ``FormulaMismatch``.
    """
    probs = bs_fock_probabilities(fp)
    if check:
        ref = oracle_probabilities(fp)
        dev = float(np.max(np.abs(probs - ref)))
        if dev > tol:
            raise FormulaMismatch(
                f"generating-function spectrum {probs.tolist()} deviates from oracle "
                f"{ref.tolist()} by {dev:.3e}"
            )
    return Spectrum.from_values(probs)


def bs_fock_entropy(fp: FockPair, check: bool = True) -> float:
    return von_neumann_entropy(bs_fock_spectrum(fp, check=check))
